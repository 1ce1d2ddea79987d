use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use regge_core::action::{normalized_action, regge_action_equal_lengths, ActionParams};
use regge_core::census::{
    classify_manifold, enumerate_all, histogram, ingest_histogram_file, ClassifierConfig, DegeneracyHistogram,
    SphereCatalog,
};
use regge_core::complex::{format_gluing_text, parse_gluing_text, GluedTriangulation};
use regge_core::ensemble::{
    almost_flat_bracket, divergence_probe, lambda_estimate, CosmologyInputs, EnsembleMode, GAMMA_STAR_BOUND,
};
use regge_core::moves::MoveKind;
use regge_core::report::{fmt_num, KeyValueReport, RunManifest};
use regge_core::sampler::{estimate_level_ratio, run_chains, SamplerConfig, WeightMode};

const DEFAULT_MAX_TETS: usize = 7;

#[derive(Parser)]
#[command(name = "regge", version, about = "Combinatorial Regge calculus on triangulated 3-manifolds")]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output directory; primary outputs and manifest.json are written there.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// f-vector, mean bone-degree, action, signature and homology of a gluing file.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
    },
    /// Exhaustive census at a fixed number of tetrahedra.
    Enumerate {
        #[arg(long)]
        tets: usize,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Levels and almost-flat ratios of a histogram CSV.
    Histogram {
        file: PathBuf,
        /// Keep only this class label.
        #[arg(long)]
        class: Option<String>,
    },
    /// The almost-flat bracket at volume K.
    Bracket {
        #[arg(long)]
        tets: u64,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long, default_value_t = GAMMA_STAR_BOUND, allow_hyphen_values = true)]
        gamma_star: i64,
    },
    /// Cosmological-constant estimate from physical length and volume.
    Lambda {
        #[arg(long)]
        ell_m: f64,
        #[arg(long)]
        vol_m3: f64,
        /// N-/N+; defaults to 2.5.
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Quantum)]
        mode: Mode,
    },
    /// Metropolis-Hastings chain around a target volume.
    Sample(SampleArgs),
    /// Partition function along a decreasing list of edge lengths.
    Probe {
        file: PathBuf,
        #[arg(long)]
        tets: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25,0.125")]
        ells: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Euclidean)]
        mode: Mode,
        #[arg(long)]
        class: Option<String>,
    },
}

#[derive(Args)]
struct SampleArgs {
    /// Target volume K.
    #[arg(long)]
    tets: u64,
    #[arg(long, default_value_t = 1_000_000)]
    steps: u64,
    #[arg(long, default_value_t = 3)]
    band: u64,
    #[arg(long, default_value_t = 0.5)]
    pin: f64,
    /// Defaults to 10% of the steps.
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long, default_value_t = 10)]
    thinning: u64,
    #[arg(long, default_value_t = 1)]
    chains: u32,
    #[arg(long, value_enum, default_value_t = Weight::Uniform)]
    weight: Weight,
    /// Edge length for euclidean weights.
    #[arg(long, default_value_t = 1.0)]
    ell: f64,
    /// Starting gluing file; the boundary of the 4-simplex by default.
    #[arg(long)]
    start: Option<PathBuf>,
    /// Volume at which to report visits(N1-)/visits(N1+).
    #[arg(long)]
    ratio_at: Option<u64>,
    /// Run full manifold validation every 10^4 steps.
    #[arg(long)]
    debug: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    All,
    S3,
    Orientable,
    Simplicial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Euclidean,
    Quantum,
}

impl From<Mode> for EnsembleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Euclidean => EnsembleMode::Euclidean,
            Mode::Quantum => EnsembleMode::Quantum,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    Uniform,
    Euclidean,
}

enum Failure {
    Input(String),
    Domain(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Domain(m) | Failure::Budget(m) => m,
        }
    }
}

/// Primary outputs: `(file name, contents)`.
type Outputs = Vec<(String, String)>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut manifest = RunManifest::new(subcommand_name(&cli.cmd), cli.seed);
    manifest.set("threads", cli.threads);
    let result = run(&cli, &mut manifest);
    manifest.elapsed = started.elapsed();
    match result.and_then(|outputs| emit(&cli, &manifest, outputs)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn subcommand_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Analyze { .. } => "analyze",
        Cmd::Enumerate { .. } => "enumerate",
        Cmd::Histogram { .. } => "histogram",
        Cmd::Bracket { .. } => "bracket",
        Cmd::Lambda { .. } => "lambda",
        Cmd::Sample(_) => "sample",
        Cmd::Probe { .. } => "probe",
    }
}

fn emit(cli: &Cli, manifest: &RunManifest, outputs: Outputs) -> Result<(), Failure> {
    match &cli.out {
        None => {
            for (_, text) in &outputs {
                print!("{text}");
            }
            eprintln!("{}", manifest.to_json());
        }
        Some(dir) => {
            let io = |e: std::io::Error| Failure::Input(format!("cannot write to {}: {e}", dir.display()));
            std::fs::create_dir_all(dir).map_err(io)?;
            for (name, text) in &outputs {
                std::fs::write(dir.join(name), text).map_err(io)?;
            }
            std::fs::write(dir.join("manifest.json"), manifest.to_json() + "\n").map_err(io)?;
        }
    }
    Ok(())
}

fn read_input(path: &Path, manifest: &mut RunManifest) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    manifest.input(&path.display().to_string(), &bytes);
    String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{} is not UTF-8", path.display())))
}

fn load_triangulation(path: &Path, manifest: &mut RunManifest) -> Result<GluedTriangulation, Failure> {
    let text = read_input(path, manifest)?;
    parse_gluing_text(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_histogram(path: &Path, class: Option<&str>, manifest: &mut RunManifest) -> Result<DegeneracyHistogram, Failure> {
    read_input(path, manifest)?;
    let h = ingest_histogram_file(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(match class {
        Some(c) => h.class_slice(c),
        None => h,
    })
}

fn params(ell: f64) -> Result<ActionParams, Failure> {
    ActionParams::new(ell).map_err(|e| Failure::Input(e.to_string()))
}

fn max_tets() -> Result<usize, Failure> {
    match std::env::var("REGGE_MAX_TETS") {
        Ok(v) => v.parse().map_err(|_| Failure::Input(format!("REGGE_MAX_TETS must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_TETS),
    }
}

fn run(cli: &Cli, manifest: &mut RunManifest) -> Result<Outputs, Failure> {
    match &cli.cmd {
        Cmd::Analyze { file, ell } => {
            manifest.set("ell", ell);
            let t = load_triangulation(file, manifest)?;
            let p = params(*ell)?;
            Ok(vec![("analyze.txt".into(), analyze(&t, &p).render())])
        }
        Cmd::Enumerate { tets, filter } => {
            let cap = max_tets()?;
            manifest.set("tets", tets).set("filter", filter_name(*filter)).set("max_tets", cap);
            if *tets == 0 {
                return Err(Failure::Input("--tets must be at least 1".into()));
            }
            if *tets > cap {
                return Err(Failure::Budget(format!(
                    "refusing to enumerate {tets} tetrahedra: the cap is {cap}; exhaustive search grows \
                     super-exponentially (K = 6 takes seconds, K = 7 minutes to hours); raise REGGE_MAX_TETS to override"
                )));
            }
            Ok(enumerate(*tets, *filter, cli.seed, cli.threads))
        }
        Cmd::Histogram { file, class } => {
            manifest.set("class", class.as_deref().unwrap_or("*"));
            let h = load_histogram(file, class.as_deref(), manifest)?;
            Ok(vec![("histogram.txt".into(), histogram_summary(&h))])
        }
        Cmd::Bracket { tets, ell, gamma_star } => {
            manifest.set("tets", tets).set("ell", ell).set("gamma_star", gamma_star);
            let p = params(*ell)?;
            let b = almost_flat_bracket(*tets, &p, *gamma_star).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(vec![("bracket.txt".into(), b.report().render())])
        }
        Cmd::Lambda { ell_m, vol_m3, ratio, mode } => {
            let mode = EnsembleMode::from(*mode);
            manifest.set("ell_m", fmt_num(*ell_m)).set("vol_m3", fmt_num(*vol_m3)).set("mode", mode);
            if let Some(r) = ratio {
                manifest.set("ratio", fmt_num(*r));
            }
            let inputs = CosmologyInputs { ell_m: *ell_m, vol_m3: *vol_m3, ratio: *ratio, mode };
            let r = lambda_estimate(&inputs).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(vec![("lambda.txt".into(), r.report().render())])
        }
        Cmd::Sample(a) => sample(a, cli, manifest),
        Cmd::Probe { file, tets, ells, mode, class } => {
            let mode = EnsembleMode::from(*mode);
            let ell_list: Vec<String> = ells.iter().map(|&e| fmt_num(e)).collect();
            manifest.set("tets", tets).set("ells", ell_list.join(",")).set("mode", mode);
            if ells.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Failure::Input("--ells must be strictly decreasing".into()));
            }
            let h = load_histogram(file, class.as_deref(), manifest)?;
            let table = divergence_probe(&h, *tets, mode, ells).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(vec![("probe.csv".into(), table.render())])
        }
    }
}

fn analyze(t: &GluedTriangulation, p: &ActionParams) -> KeyValueReport {
    let sk = t.skeleton();
    let mu = t.mean_bone_degree();
    let valid = t.validate_with(&sk);
    let f = sk.f_vector();
    let mut r = KeyValueReport::new();
    r.text("f_vector", format!("{} {} {} {}", f[0], f[1], f[2], f[3]))
        .text("mu", mu.to_string())
        .num("mu_decimal", mu.value())
        .num("action_raw", regge_action_equal_lengths(t, p).expect("3-dimensional").value)
        .num("action_normalized", normalized_action(t, p).expect("3-dimensional").value)
        .text("signature", t.iso_signature().to_string())
        .text("automorphisms", t.automorphism_count().to_string())
        .text("valid", valid.is_valid().to_string());
    if let regge_core::complex::Verdict::Invalid(reasons) = &valid.verdict {
        r.text("invalid_reasons", reasons.join("; "));
    }
    r.text("orientable", valid.orientable.to_string()).text("simplicial", t.is_simplicial().to_string());
    if let Some(w) = t.simplicial_witness() {
        r.text("simplicial_witness", w.to_string());
    }
    r.text("H1", t.homology_h1_with(&sk).to_string());
    r
}

fn filter_name(f: Filter) -> &'static str {
    match f {
        Filter::All => "all",
        Filter::S3 => "s3",
        Filter::Orientable => "orientable",
        Filter::Simplicial => "simplicial",
    }
}

fn enumerate(k: usize, filter: Filter, seed: u64, threads: usize) -> Outputs {
    let all = enumerate_all(k, threads);
    let catalog = SphereCatalog::standard();
    let cfg = ClassifierConfig { seed, ..ClassifierConfig::default() };
    let hist = histogram(&all, &catalog, &cfg);
    let (kept, hist) = match filter {
        Filter::All => (all, hist),
        Filter::S3 => {
            let kept = all
                .into_iter()
                .enumerate()
                .filter(|(i, e)| {
                    let c = ClassifierConfig { seed: regge_core::census::derived_seed(seed, *i as u64), ..cfg };
                    classify_manifold(&e.triangulation, &catalog, &c).label == regge_core::census::ClassLabel::S3Confirmed
                })
                .map(|(_, e)| e)
                .collect();
            (kept, hist.class_slice("S3"))
        }
        Filter::Orientable => {
            let kept = all.into_iter().filter(|e| e.triangulation.is_orientable()).collect();
            (kept, hist.filter("orientable", |k| k.orientable == Some(true)))
        }
        Filter::Simplicial => {
            let kept = all.into_iter().filter(|e| e.triangulation.is_simplicial()).collect();
            (kept, hist.filter("simplicial", |k| k.simplicial == Some(true)))
        }
    };
    let mut archive = String::new();
    for (i, e) in kept.iter().enumerate() {
        if i > 0 {
            archive.push_str("---\n");
        }
        writeln!(archive, "# {}", e.signature).unwrap();
        archive.push_str(&format_gluing_text(&e.triangulation));
    }
    vec![("census.txt".into(), archive), ("histogram.csv".into(), hist.to_csv())]
}

fn histogram_summary(h: &DegeneracyHistogram) -> String {
    let mut s = String::from("K,N1,mu,mu_decimal,count\n");
    for k in h.tet_counts() {
        for (n1, c) in h.levels(k) {
            let mu = regge_core::RationalMu::from_counts(k as u64, n1 as u64);
            writeln!(s, "{k},{n1},{mu},{},{c}", mu.display3()).unwrap();
        }
    }
    for k in h.tet_counts() {
        if let Ok(b) = almost_flat_bracket(k as u64, &ActionParams::default(), GAMMA_STAR_BOUND) {
            if let Some(r) = h.ratio(k, b.n1_minus as u32, b.n1_plus as u32) {
                writeln!(s, "# ratio K={k} N1-={} N1+={}: {}", b.n1_minus, b.n1_plus, fmt_num(r)).unwrap();
            }
        }
    }
    s
}

fn sample(a: &SampleArgs, cli: &Cli, manifest: &mut RunManifest) -> Result<Outputs, Failure> {
    let start = match &a.start {
        Some(path) => load_triangulation(path, manifest)?,
        None => GluedTriangulation::boundary_4_simplex(),
    };
    let mut cfg = SamplerConfig::new(a.tets, a.steps);
    cfg.seed = cli.seed;
    cfg.band = a.band;
    cfg.pin = a.pin;
    cfg.chains = a.chains;
    cfg.thinning = a.thinning;
    cfg.debug_validate = a.debug;
    if let Some(b) = a.burn_in {
        cfg.burn_in = b;
    }
    if let Weight::Euclidean = a.weight {
        cfg.mode = WeightMode::Euclidean(params(a.ell)?);
    }
    manifest
        .set("tets", a.tets)
        .set("steps", cfg.steps)
        .set("band", cfg.band)
        .set("pin", fmt_num(cfg.pin))
        .set("burn_in", cfg.burn_in)
        .set("thinning", cfg.thinning)
        .set("chains", cfg.chains)
        .set("weight", match a.weight {
            Weight::Uniform => "uniform".to_string(),
            Weight::Euclidean => format!("euclidean(ell={})", fmt_num(a.ell)),
        })
        .set("moves", MoveKind::ALL.map(|k| k.as_str()).join(","));
    let stats = run_chains(&start, &cfg, cli.threads).map_err(|e| Failure::Input(e.to_string()))?;
    let ratio = match a.ratio_at {
        Some(k) => {
            let b = almost_flat_bracket(k, &ActionParams::default(), GAMMA_STAR_BOUND)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            estimate_level_ratio(&stats, k, b.n1_minus, b.n1_plus).ok()
        }
        None => None,
    };
    Ok(vec![
        ("visits.csv".into(), stats.to_histogram().to_csv()),
        ("summary.json".into(), stats.summary_json(ratio.as_ref()) + "\n"),
    ])
}
