//! Frozen text formats shared by the command-line reports.

use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Formats a number with 12 significant digits. Magnitudes below `1e-4` or
/// at least `1e12` use scientific notation; trailing zeros are dropped.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Decide on the value rounded to 12 significant digits.
    let sci = format!("{x:.11e}");
    let r: f64 = sci.parse().expect("round trip");
    if !(1e-4..1e12).contains(&r.abs()) {
        let (mant, exp) = sci.split_once('e').expect("scientific format");
        return format!("{}e{}", trim_zeros(mant), exp);
    }
    let exp = r.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{r:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Ordered `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyValueReport {
    lines: Vec<(String, String)>,
}

impl KeyValueReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.lines.push((key.to_string(), value.into()));
        self
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, fmt_num(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

/// Record of one command-line run.
#[derive(Clone, Debug)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Vec<(String, String)>,
    pub seed: u64,
    pub version: String,
    pub inputs: Vec<(String, String)>,
    pub elapsed: Duration,
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: u64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            config: Vec::new(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    /// Records the SHA-256 of an input file's contents.
    pub fn input(&mut self, path: &str, bytes: &[u8]) -> &mut Self {
        self.inputs.push((path.to_string(), sha256_hex(bytes)));
        self
    }

    pub fn to_json(&self) -> String {
        let obj = |pairs: &[(String, String)]| {
            Value::Object(pairs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<Map<_, _>>())
        };
        let v = json!({
            "subcommand": self.subcommand,
            "config": obj(&self.config),
            "seed": self.seed,
            "version": self.version,
            "inputs": obj(&self.inputs),
            "elapsed_ms": self.elapsed.as_millis() as u64,
        });
        serde_json::to_string_pretty(&v).expect("manifest serializes")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.8745358896056056), "0.874535889606");
        assert_eq!(fmt_num(3.0), "3");
        assert_eq!(fmt_num(-0.009347586877578803), "-0.00934758687758");
        assert_eq!(fmt_num(1.4628e-186), "1.4628e-186");
        assert_eq!(fmt_num(8.5449e184), "8.5449e184");
        assert_eq!(fmt_num(0.0001), "0.0001");
        assert_eq!(fmt_num(9.99999999999999e-5), "0.0001");
        assert_eq!(fmt_num(9.9999e-5), "9.9999e-5");
        assert_eq!(fmt_num(999999999999.9999), "1e12");
        assert_eq!(fmt_num(13660.0), "13660");
        assert_eq!(fmt_num(0.0), "0");
    }

    #[test]
    fn manifest_json() {
        let mut m = RunManifest::new("bracket", 7);
        m.set("tets", 9).input("x", b"abc");
        let v: Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["config"]["tets"], "9");
        assert_eq!(v["inputs"]["x"], "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
