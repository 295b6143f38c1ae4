//! Command implementations behind the `k3poor` binary.
//!
//! Every command returns its full report as text so that the binary, the
//! integration tests and the acceptance suite share one code path. Reports
//! are deterministic functions of the parsed arguments.

pub mod vector;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::RngCore;
use serde::Serialize;
use thiserror::Error;

use k3poor::period::{
    classify_period, generic_poor_period, poor_witness_period, rationalize_plane, PeriodPlaneData,
};
use k3poor::poly::Poly;
use k3poor::torus::{build_example_torus, ns_exclusion, CmTorusSpec, NsCertificate, NsStatus, TorusError};
use k3poor::wreath::{all_elements, WreathElement, DEFAULT_BRUTE_FORCE_BUDGET};
use k3poor::{rng, Lattice, PeriodError, PeriodPlane, PeriodReport, StandardLattice, Verdict};

pub use vector::parse_vector;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Inconclusive(_) => EXIT_INCONCLUSIVE,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "k3poor", version, about = "Poor K3 surfaces and tori: exact lattice and period computations")]
pub struct Cli {
    /// Seed for every randomized step (ChaCha8).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, alias = "precision", default_value_t = k3poor::torus::DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
    #[arg(long, global = true, alias = "H", default_value_t = k3poor::torus::DEFAULT_HEIGHT_BOUND)]
    pub height_bound: u64,
    #[arg(long, global = true, default_value_t = k3poor::period::DEFAULT_MAX_RETRIES)]
    pub max_retries: usize,
    /// Output format; `density` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WreathMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of a named lattice (U, E8neg, K3) or a lattice JSON file.
    Lattice { target: String },
    /// Picard lattice and poorness verdict of a plane file.
    Classify { plane: PathBuf },
    /// A plane with Picard lattice Zδ, or with trivial Picard lattice.
    Witness {
        #[arg(long, required_unless_present = "generic", conflicts_with = "generic")]
        delta: Option<String>,
        #[arg(long)]
        generic: bool,
    },
    /// Verdicts of witness planes before and after rationalization.
    Density {
        /// Wall vector; generic planes are used when absent.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        q_list: Vec<u64>,
    },
    /// Height-bounded Néron–Severi exclusion for the torus of `f`.
    Torus {
        #[arg(long, default_value = "x^6+x+1")]
        f: String,
    },
    /// Cycle-composition criterion against brute force.
    Wreath {
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: WreathMode,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Number of draws in random mode.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Largest tuple space scanned by the brute force.
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_BUDGET)]
        budget: u64,
    },
}

/// A finished report and the exit code it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, exit_code: EXIT_OK }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(input)?;
    run(&cli)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Lattice { target } => emit(&cmd_lattice(target)?, format).map(Outcome::ok),
        Command::Classify { plane } => emit(&cmd_classify(plane)?, format).map(Outcome::ok),
        Command::Witness { delta, generic } => {
            let delta = if *generic { None } else { delta.as_deref() };
            emit(&cmd_witness(delta, cli.seed, cli.max_retries)?, format).map(Outcome::ok)
        }
        Command::Density { delta, samples, q_list } => {
            let report = cmd_density(delta.as_deref(), *samples, q_list, cli.seed, cli.max_retries)?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(Outcome::ok(report.to_csv())),
                Format::Json => Ok(Outcome::ok(to_json(&report))),
            }
        }
        Command::Torus { f } => {
            let report = cmd_torus(f, cli.precision_bits, cli.height_bound)?;
            let exit_code = if report.certificate.status == NsStatus::Inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
            Ok(Outcome { text: emit(&report, format)?, exit_code })
        }
        Command::Wreath { mode, n, m, samples, budget } => {
            let report = cmd_wreath(*mode, *n, *m, *samples, *budget, cli.seed)?;
            let exit_code = if report.mismatches > 0 { EXIT_INVARIANT } else { EXIT_OK };
            Ok(Outcome { text: emit(&report, format)?, exit_code })
        }
    }
}

/// Writes the outcome to `--out` or stdout.
pub fn deliver(cli: &Cli, outcome: &Outcome) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(outcome.text.as_bytes())
        }
    }
}

fn to_json<T: Serialize>(r: &T) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

/// JSON, or a two-column `field,value` CSV with JSON-encoded values.
fn emit<T: Serialize>(r: &T, format: Option<Format>) -> Result<String, CliError> {
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(to_json(r)),
        Format::Csv => {
            let value = serde_json::to_value(r).expect("reports serialize");
            let obj = value.as_object().expect("reports are objects");
            let mut out = String::from("field,value\n");
            for (k, v) in obj {
                let cell = v.to_string();
                let cell = if cell.contains([',', '"', '\n']) { format!("\"{}\"", cell.replace('"', "\"\"")) } else { cell };
                writeln!(out, "{k},{cell}").unwrap();
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SignatureReport {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Debug, Serialize)]
pub struct LatticeReport {
    pub schema_version: u32,
    pub rank: usize,
    #[serde(serialize_with = "ser_int_mat")]
    pub gram: Vec<Vec<BigInt>>,
    pub signature: SignatureReport,
    #[serde(serialize_with = "ser_int")]
    pub determinant: BigInt,
    pub even: bool,
}

fn ser_int<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    k3poor::json::int::serialize(x, s)
}

fn ser_int_mat<S: serde::Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    k3poor::json::int_mat::serialize(m, s)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn cmd_lattice(target: &str) -> Result<LatticeReport, CliError> {
    let lattice = match target.parse::<StandardLattice>() {
        Ok(name) => Lattice::standard(name),
        Err(_) if Path::new(target).is_file() => {
            serde_json::from_str::<Lattice>(&read(Path::new(target))?).map_err(|e| CliError::Input(format!("bad lattice file: {e}")))?
        }
        Err(e) => return Err(input(e)),
    };
    let sig = lattice.signature();
    Ok(LatticeReport {
        schema_version: SCHEMA_VERSION,
        rank: lattice.rank(),
        gram: lattice.gram().to_rows(),
        signature: SignatureReport { positive: sig.positive, negative: sig.negative, zero: sig.zero },
        determinant: lattice.determinant(),
        even: lattice.is_even(),
    })
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: PeriodReport,
}

pub fn parse_plane(text: &str) -> Result<PeriodPlane, CliError> {
    let data: PeriodPlaneData = serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad plane file: {e}")))?;
    PeriodPlane::from_data(data).map_err(|e| match e {
        PeriodError::NotPositive { .. } => CliError::Invariant(e.to_string()),
        other => input(other),
    })
}

pub fn cmd_classify(path: &Path) -> Result<ClassifyReport, CliError> {
    let plane = parse_plane(&read(path)?)?;
    Ok(ClassifyReport { schema_version: SCHEMA_VERSION, report: classify_period(&plane) })
}

/// A plane file with its classification attached; `classify` accepts it
/// unchanged.
#[derive(Debug, Serialize)]
pub struct WitnessReport {
    pub schema_version: u32,
    #[serde(serialize_with = "k3poor::json::int_vec_opt::serialize")]
    pub delta: Option<Vec<BigInt>>,
    #[serde(flatten)]
    pub plane: PeriodPlaneData,
    pub report: PeriodReport,
}

fn witness_error(e: PeriodError) -> CliError {
    match e {
        PeriodError::NormTooLarge(n) => {
            CliError::Input(format!("a witness plane needs δ² < −2 (δ² = −2 classes are roots), got δ² = {n}"))
        }
        PeriodError::RetriesExhausted { .. } => CliError::Inconclusive(e.to_string()),
        other => input(other),
    }
}

pub fn cmd_witness(delta: Option<&str>, seed: u64, max_retries: usize) -> Result<WitnessReport, CliError> {
    let (delta, plane) = match delta {
        Some(s) => {
            let d = parse_vector(s).map_err(input)?;
            let plane = poor_witness_period(&d, seed, max_retries).map_err(witness_error)?;
            (Some(d.0), plane)
        }
        None => (None, generic_poor_period(seed).map_err(witness_error)?),
    };
    let report = classify_period(&plane);
    Ok(WitnessReport { schema_version: SCHEMA_VERSION, delta, plane: plane.to_data(), report })
}

#[derive(Debug, Serialize)]
pub struct DensityRow {
    pub sample: usize,
    pub seed: u64,
    pub q: u64,
    pub pic_rank_before: usize,
    pub verdict_before: Verdict,
    pub status: &'static str,
    pub pic_rank_after: Option<usize>,
    pub verdict_after: Option<Verdict>,
    pub projective_after: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct DensityReport {
    pub schema_version: u32,
    pub samples: usize,
    pub poor_before: usize,
    pub rationalized: usize,
    pub not_poor_after: usize,
    pub rows: Vec<DensityRow>,
}

const DENSITY_HEADER: &str =
    "sample,seed,q,pic_rank_before,verdict_before,status,pic_rank_after,verdict_after,projective_after";

impl DensityReport {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let mut out = String::from(DENSITY_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{:?},{},{},{},{}",
                r.sample,
                r.seed,
                r.q,
                r.pic_rank_before,
                r.verdict_before,
                r.status,
                opt(r.pic_rank_after.map(|v| v.to_string())),
                opt(r.verdict_after.map(|v| format!("{v:?}"))),
                opt(r.projective_after.map(|v| v.to_string())),
            )
            .unwrap();
        }
        out
    }
}

pub fn cmd_density(
    delta: Option<&str>,
    samples: usize,
    q_list: &[u64],
    seed: u64,
    max_retries: usize,
) -> Result<DensityReport, CliError> {
    let delta = delta.map(parse_vector).transpose().map_err(input)?;
    if q_list.contains(&0) {
        return Err(CliError::Input("denominator bounds must be positive".into()));
    }
    let mut seeds = rng::seeded(seed);
    let mut rows = Vec::new();
    let (mut poor_before, mut rationalized, mut not_poor_after) = (0, 0, 0);
    for sample in 0..samples {
        let s = seeds.next_u64();
        let plane = match &delta {
            Some(d) => poor_witness_period(d, s, max_retries),
            None => generic_poor_period(s),
        }
        .map_err(witness_error)?;
        let before = classify_period(&plane);
        if before.in_u {
            poor_before += 1;
        }
        for &q in q_list {
            let mut row = DensityRow {
                sample,
                seed: s,
                q,
                pic_rank_before: before.pic_rank,
                verdict_before: before.verdict,
                status: "positivity_lost",
                pic_rank_after: None,
                verdict_after: None,
                projective_after: None,
            };
            match rationalize_plane(&plane, &BigInt::from(q)) {
                Ok(r) => {
                    let after = classify_period(&r);
                    rationalized += 1;
                    if !after.in_u {
                        not_poor_after += 1;
                    }
                    row.status = "ok";
                    row.pic_rank_after = Some(after.pic_rank);
                    row.verdict_after = Some(after.verdict);
                    row.projective_after = Some(after.projective);
                }
                Err(PeriodError::PositivityLost(_)) => {}
                Err(e) => return Err(input(e)),
            }
            rows.push(row);
        }
    }
    Ok(DensityReport { schema_version: SCHEMA_VERSION, samples, poor_before, rationalized, not_poor_after, rows })
}

#[derive(Debug, Serialize)]
pub struct TorusReport {
    pub schema_version: u32,
    pub f: String,
    pub g: usize,
    /// Midpoints of the certified upper-half-plane root enclosures.
    pub roots: Vec<[f64; 2]>,
    #[serde(flatten)]
    pub certificate: NsCertificate,
}

pub fn parse_integer_poly(s: &str) -> Result<Vec<BigInt>, CliError> {
    let p = Poly::parse(s).map_err(|e| CliError::Input(format!("bad polynomial {s:?}: {e}")))?;
    p.to_ints().ok_or_else(|| CliError::Input(format!("polynomial {s:?} must have integer coefficients")))
}

pub fn cmd_torus(f: &str, precision_bits: u32, height_bound: u64) -> Result<TorusReport, CliError> {
    let coeffs = parse_integer_poly(f)?;
    let spec = CmTorusSpec::new(coeffs.clone(), precision_bits).map_err(input)?;
    let pm = build_example_torus(&spec).map_err(|e| match e {
        TorusError::Certification(_) => CliError::Inconclusive(format!("{e}; raise --precision-bits")),
        other => input(other),
    })?;
    let certificate = ns_exclusion(&pm, height_bound);
    Ok(TorusReport {
        schema_version: SCHEMA_VERSION,
        f: Poly::from_ints(&coeffs).to_string(),
        g: pm.g,
        roots: pm.roots.iter().map(|z| z.to_f64().into()).collect(),
        certificate,
    })
}

#[derive(Debug, Serialize)]
pub struct WreathReport {
    pub schema_version: u32,
    pub mode: WreathMode,
    pub n: usize,
    pub m: usize,
    pub seed: Option<u64>,
    pub checked: usize,
    pub with_fixed_point: usize,
    pub mismatches: usize,
    pub skipped_over_budget: usize,
    /// Some elements were not checked because their tuple space exceeded
    /// the brute-force budget.
    pub partial: bool,
    pub pass: bool,
    pub first_mismatch: Option<WreathElement>,
}

pub fn cmd_wreath(
    mode: WreathMode,
    n: usize,
    m: usize,
    samples: usize,
    budget: u64,
    seed: u64,
) -> Result<WreathReport, CliError> {
    if n == 0 || m == 0 {
        return Err(CliError::Input("n and m must be at least 1".into()));
    }
    let mut report = WreathReport {
        schema_version: SCHEMA_VERSION,
        mode,
        n,
        m,
        seed: (mode == WreathMode::Random).then_some(seed),
        checked: 0,
        with_fixed_point: 0,
        mismatches: 0,
        skipped_over_budget: 0,
        partial: false,
        pass: false,
        first_mismatch: None,
    };
    let mut check = |w: &WreathElement| match w.has_fixed_point_bruteforce(budget) {
        Ok(bf) => {
            report.checked += 1;
            let fast = w.has_fixed_point();
            if fast {
                report.with_fixed_point += 1;
            }
            if fast != bf {
                report.mismatches += 1;
                report.first_mismatch.get_or_insert_with(|| w.clone());
            }
        }
        Err(_) => report.skipped_over_budget += 1,
    };
    match mode {
        WreathMode::Exhaustive => {
            for nn in 1..=n {
                for mm in 1..=m {
                    all_elements(nn, mm).iter().for_each(&mut check);
                }
            }
        }
        WreathMode::Random => {
            use rand::Rng;
            let mut r = rng::seeded(seed);
            for _ in 0..samples {
                let nn = r.random_range(1..=n);
                let mm = r.random_range(1..=m);
                check(&WreathElement::random(nn, mm, &mut r));
            }
        }
    }
    report.partial = report.skipped_over_budget > 0;
    report.pass = report.mismatches == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_reports() {
        let r = cmd_lattice("K3").unwrap();
        assert_eq!((r.signature.positive, r.signature.negative), (3, 19));
        assert!(r.even);
        assert_eq!(cmd_lattice("U").unwrap().determinant, BigInt::from(-1));
        assert_eq!(cmd_lattice("nope").unwrap_err().exit_code(), EXIT_INPUT);
    }

    #[test]
    fn csv_fallback_is_two_column() {
        let text = emit(&cmd_lattice("U").unwrap(), Some(Format::Csv)).unwrap();
        assert!(text.starts_with("field,value\n"));
        assert!(text.contains("\nrank,2\n"));
        assert!(text.contains("gram,\"[[0,1],[1,0]]\""));
    }

    #[test]
    fn empty_density_is_header_only() {
        let r = cmd_density(Some("e1-2f1"), 0, &[10], 1, 10).unwrap();
        assert_eq!(r.to_csv(), format!("{DENSITY_HEADER}\n"));
    }

    #[test]
    fn torus_argument_errors() {
        assert_eq!(cmd_torus("x^2-2", 128, 10).unwrap_err().exit_code(), EXIT_INPUT);
        assert_eq!(cmd_torus("x^2/3+1", 128, 10).unwrap_err().exit_code(), EXIT_INPUT);
        assert_eq!(cmd_torus("x^3+x+1", 128, 10).unwrap_err().exit_code(), EXIT_INPUT);
    }

    #[test]
    fn wreath_budget_is_flagged() {
        let r = cmd_wreath(WreathMode::Random, 6, 5, 50, 100, 5).unwrap();
        assert!(r.partial && r.skipped_over_budget > 0 && r.pass);
    }
}
