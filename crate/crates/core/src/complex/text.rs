//! Line-based gluing files.
//!
//! ```text
//! # optional comments
//! tets 2
//! 0 0 : 1 0 0123
//! 0 1 : 1 1 0123
//! ...
//! ```
//!
//! `t f : u h p0p1p2p3` glues face `f` of tetrahedron `t` to face `h` of
//! tetrahedron `u`, sending vertex `i` to `p_i`. A gluing may be listed from
//! one side or from both; when both are present they must be inverse.

use std::fmt::Write as _;

use thiserror::Error;

use super::{GluedTriangulation, Gluing, StructureError};
use crate::perm::Perm4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: face ({tet},{face}) glued twice inconsistently")]
    Conflict { line: usize, tet: u32, face: u8 },
    #[error("line {line}: face ({tet},{face}) glued to itself")]
    SelfGlued { line: usize, tet: u32, face: u8 },
    #[error("{0}")]
    Structure(#[from] StructureError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st + 1, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out
}

pub fn parse_gluing_text(text: &str) -> Result<GluedTriangulation, ParseError> {
    parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

fn parse_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<GluedTriangulation, ParseError> {
    let mut k: Option<usize> = None;
    let mut table: Vec<[Option<Gluing>; 4]> = Vec::new();
    let mut last_line = 0;
    for (lineno, raw) in lines {
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks = tokens(raw);
        let Some(count) = k else {
            if toks.len() != 2 || toks[0].1 != "tets" {
                return Err(syntax(lineno, toks[0].0, "expected header `tets K`"));
            }
            let n: usize = toks[1].1.parse().map_err(|_| syntax(lineno, toks[1].0, "expected tetrahedron count"))?;
            if n == 0 {
                return Err(syntax(lineno, toks[1].0, "tetrahedron count must be positive"));
            }
            k = Some(n);
            table = vec![[None; 4]; n];
            continue;
        };
        if toks.len() != 6 || toks[2].1 != ":" {
            let col = toks.get(2).map_or(toks.last().map_or(1, |t| t.0), |t| t.0);
            return Err(syntax(lineno, col, "expected `t f : t' f' p0p1p2p3`"));
        }
        let num = |idx: usize, limit: usize, what: &str| -> Result<usize, ParseError> {
            let (col, s) = toks[idx];
            let v: usize = s.parse().map_err(|_| syntax(lineno, col, format!("expected {what}")))?;
            if v >= limit {
                return Err(syntax(lineno, col, format!("{what} {v} out of range")));
            }
            Ok(v)
        };
        let t = num(0, count, "tetrahedron")?;
        let f = num(1, 4, "face")? as u8;
        let u = num(3, count, "tetrahedron")?;
        let h = num(4, 4, "face")? as u8;
        let (pcol, ptxt) = toks[5];
        let digits: Vec<u8> = ptxt.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        let perm = (digits.len() == 4)
            .then(|| Perm4::from_images([digits[0], digits[1], digits[2], digits[3]]))
            .flatten()
            .ok_or_else(|| syntax(lineno, pcol, "expected a permutation of 0123"))?;
        if perm.apply(f) != h {
            return Err(syntax(lineno, pcol, format!("permutation {perm} does not carry face {f} to face {h}")));
        }
        if t == u && f == h {
            return Err(ParseError::SelfGlued { line: lineno, tet: t as u32, face: f });
        }
        let fwd = Gluing::new(u as u32, h, perm);
        let back = Gluing::new(t as u32, f, perm.inverse());
        for (tt, ff, g) in [(t, f, fwd), (u, h, back)] {
            match table[tt][ff as usize] {
                Some(existing) if existing != g => {
                    return Err(ParseError::Conflict { line: lineno, tet: tt as u32, face: ff });
                }
                _ => table[tt][ff as usize] = Some(g),
            }
        }
    }
    if k.is_none() {
        return Err(syntax(last_line.max(1), 1, "missing header `tets K`"));
    }
    let mut gluings = Vec::with_capacity(table.len());
    for (t, row) in table.iter().enumerate() {
        let mut out = [Gluing::new(0, 0, Perm4::IDENTITY); 4];
        for f in 0..4u8 {
            out[f as usize] = row[f as usize].ok_or(StructureError::UngluedFace(t as u32, f))?;
        }
        gluings.push(out);
    }
    Ok(GluedTriangulation::from_gluings(gluings)?)
}

/// Writes each gluing once, from its lexicographically smaller side.
pub fn format_gluing_text(tri: &GluedTriangulation) -> String {
    let mut s = format!("tets {}\n", tri.tet_count());
    for t in 0..tri.tet_count() {
        for f in 0..4u8 {
            let g = tri.gluing(t, f);
            if (g.tet as usize, g.face) > (t, f) {
                writeln!(s, "{t} {f} : {} {} {}", g.tet, g.face, g.perm).unwrap();
            }
        }
    }
    s
}

/// Parses gluing-file blocks separated by lines consisting of `---`.
pub fn parse_gluing_archive(text: &str) -> Result<Vec<GluedTriangulation>, ParseError> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    let flush = |block: &mut Vec<(usize, &str)>, out: &mut Vec<GluedTriangulation>| -> Result<(), ParseError> {
        let has_content = block.iter().any(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        });
        if has_content {
            out.push(parse_lines(block.drain(..))?);
        }
        block.clear();
        Ok(())
    };
    for (i, line) in text.lines().enumerate() {
        if line.trim() == "---" {
            flush(&mut block, &mut out)?;
        } else {
            block.push((i + 1, line));
        }
    }
    flush(&mut block, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOUBLED: &str = "# doubled tetrahedron\ntets 2\n0 0 : 1 0 0123\n0 1 : 1 1 0123\n0 2 : 1 2 0123\n0 3 : 1 3 0123\n";

    #[test]
    fn parses_doubled_tetrahedron() {
        let t = parse_gluing_text(DOUBLED).unwrap();
        assert_eq!(t, GluedTriangulation::doubled_tetrahedron());
        assert_eq!(format_gluing_text(&t), DOUBLED.trim_start_matches("# doubled tetrahedron\n"));
    }

    #[test]
    fn missing_line_reports_unglued_face() {
        let text = DOUBLED.replace("0 3 : 1 3 0123\n", "");
        let err = parse_gluing_text(&text).unwrap_err();
        assert_eq!(err.to_string(), "unglued face (0,3)");
    }

    #[test]
    fn both_sides_listed() {
        let text = format!("{DOUBLED}1 2 : 0 2 0123\n");
        assert!(parse_gluing_text(&text).is_ok());
        let bad = format!("{DOUBLED}1 2 : 0 2 1023\n");
        assert!(matches!(parse_gluing_text(&bad).unwrap_err(), ParseError::Conflict { .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_gluing_text("tets 2\n0 0 - 1 0 0123\n").unwrap_err();
        assert_eq!(err, ParseError::Syntax { line: 2, column: 5, message: "expected `t f : t' f' p0p1p2p3`".into() });
        let err = parse_gluing_text("tets 2\n0 0 : 1 0 0124\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, column: 11, .. }));
        let err = parse_gluing_text("tets 1\n0 0 : 0 0 0123\n").unwrap_err();
        assert!(matches!(err, ParseError::SelfGlued { .. }));
    }

    #[test]
    fn archive_blocks() {
        let text = format!("{DOUBLED}---\n{}", format_gluing_text(&GluedTriangulation::boundary_4_simplex()));
        let all = parse_gluing_archive(&text).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1], GluedTriangulation::boundary_4_simplex());
    }
}
