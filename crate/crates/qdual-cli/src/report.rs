//! Report schema. Struct field order is the emitted order, every map is a
//! vector, and nothing stamps wall-clock data, so a fixed `(input, seed,
//! truncation)` triple serializes byte for byte.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Echo of the parsed arrangement.
#[derive(Serialize)]
pub struct InputEcho {
    pub n: usize,
    pub d: usize,
    pub gamma: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
    pub xi: Vec<i64>,
}

/// Sizes of the enumerated combinatorics.
#[derive(Serialize)]
pub struct CountsReport {
    pub bases: usize,
    pub circuits: usize,
    pub cocircuits: usize,
}

/// One matched cocircuit/dual-circuit pair.
#[derive(Serialize)]
pub struct BijectionRow {
    pub cocircuit: Vec<i64>,
    pub dual_circuit: Vec<i64>,
}

/// Outcome of the duality certificate.
#[derive(Serialize)]
pub struct DualityReport {
    pub bijection: Vec<BijectionRow>,
    pub generator_match: bool,
    pub q0_match: bool,
    pub convention: String,
    pub witnesses: Vec<String>,
    pub pass: bool,
}

/// One seeded run of the three-way rank comparison.
#[derive(Serialize)]
pub struct RankTrial {
    pub trial: u32,
    pub upper: usize,
    pub fixed_points: usize,
    pub lower: usize,
    pub witness: Option<String>,
    pub pass: bool,
}

/// Outcome of the trace-annihilation sweep.
#[derive(Serialize)]
pub struct AnnihilationReport {
    pub functionals: usize,
    pub max_degree: u32,
    pub checks: usize,
    pub witnesses: Vec<String>,
    pub pass: bool,
}

/// Outcome of the affine vacuum-weight structure check.
#[derive(Serialize)]
pub struct AppendixJson {
    pub fixed_points: usize,
    pub affine_ok: bool,
    pub rho_nonzero: bool,
    pub chi_sign: i64,
    pub witnesses: Vec<String>,
    pub pass: bool,
}

/// The single document emitted by `verify`.
#[derive(Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub truncation: i64,
    pub trials: u32,
    pub input: InputEcho,
    pub counts: CountsReport,
    pub duality: DualityReport,
    pub rank: Vec<RankTrial>,
    pub annihilation: AnnihilationReport,
    pub appendix: AppendixJson,
    pub pass: bool,
}

/// The document emitted by `dualize --json`.
#[derive(Serialize)]
pub struct DualizeReport {
    pub schema_version: u32,
    pub command: String,
    pub input: InputEcho,
    pub dual: InputEcho,
    pub bijection: Vec<BijectionRow>,
    pub round_trip_lattice_isomorphic: bool,
    pub duality_pass: bool,
    pub pass: bool,
}

/// One `q^key * coeff` term of a character head.
#[derive(Serialize)]
pub struct SeriesTermReport {
    pub key: Vec<i64>,
    pub coeff: String,
}

/// The document emitted by `character --json`.
#[derive(Serialize)]
pub struct CharacterReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub truncation: i64,
    pub basis_index: usize,
    pub basis: Vec<usize>,
    pub central_values: Vec<String>,
    pub offset: Vec<String>,
    pub terms: Vec<SeriesTermReport>,
    pub annihilation: AnnihilationReport,
    pub pass: bool,
}

/// Harish-Chandra eigenvalue section of the `springer` report.
#[derive(Serialize)]
pub struct HcJson {
    pub phi: String,
    pub rho_shifted: String,
    pub eigenchecks: usize,
    pub witnesses: Vec<String>,
    pub pass: bool,
}

/// Conjugation-chain section of the `springer` report.
#[derive(Serialize)]
pub struct ConjugationJson {
    pub degree: u32,
    pub basis_size: usize,
    pub direction_count: usize,
    pub lines: Vec<String>,
    pub witness: Option<String>,
    pub pass: bool,
}

/// Trigonometric-model section of the `springer` report (rank one only).
#[derive(Serialize)]
pub struct CmJson {
    pub t: String,
    pub c: String,
    pub scalar: String,
    pub transported_residual: String,
    pub pass: bool,
}

/// The single document emitted by `springer`.
#[derive(Serialize)]
pub struct SpringerReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub root_system: String,
    pub harish_chandra: HcJson,
    pub conjugation: ConjugationJson,
    pub calogero_moser: Option<CmJson>,
    pub pass: bool,
}

/// Input-error document (exit code 2).
#[derive(Serialize)]
pub struct ErrorReport {
    pub schema_version: u32,
    pub command: String,
    pub error: String,
}

/// Prints a report as pretty JSON on stdout.
pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serialization"));
}
