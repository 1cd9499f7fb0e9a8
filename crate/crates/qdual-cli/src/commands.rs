//! Subcommand implementations: each orchestrates library certificates and
//! assembles one report. Exit codes: 0 all certificates pass, 1 a
//! certificate fails, 2 the input (file, flags, or parameters) is invalid.

use std::path::Path;

use qdual::arrangement::Arrangement;
use qdual::dmod::{
    annihilation_sweep, appendix_check, rank_certificate_seeded, trace_functionals,
    verma_character, TraceFunctional,
};
use qdual::hea::generic_central_values;
use qdual::qside::duality_certificate;
use qdual::springer::operator::{cm_check_a1, conjugation_identity_check};
use qdual::springer::{
    casimir_phi, geometric_hc_apply, graded_eval, rho_shift, weyl_character, RootSystemData,
    RootSystemTag,
};
use qdual::{rat, rat_string, Poly, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::input::{load_arrangement, render_toml};
use crate::report::{
    print_json, AnnihilationReport, AppendixJson, BijectionRow, CharacterReport, CmJson,
    ConjugationJson, CountsReport, DualityReport, DualizeReport, ErrorReport, HcJson, InputEcho,
    RankTrial, SeriesTermReport, SpringerReport, VerifyReport, SCHEMA_VERSION,
};

/// Global run parameters shared by every subcommand.
pub struct RunConfig {
    pub truncation: i64,
    pub trials: u32,
    pub seed: u64,
    pub json: bool,
}

/// Degree of the bracket-monomial sweep run by `verify` and `character`.
const SWEEP_DEGREE: u32 = 2;

fn input_error(command: &str, error: String, json: bool) -> i32 {
    if json {
        print_json(&ErrorReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            error,
        });
    } else {
        eprintln!("error: {error}");
    }
    2
}

fn input_echo(arr: &Arrangement) -> InputEcho {
    InputEcho {
        n: arr.n(),
        d: arr.d(),
        gamma: arr.gamma().to_vec(),
        theta: arr.theta_lift().to_vec(),
        xi: arr.xi().to_vec(),
    }
}

/// Draws central values until the fixed-point functionals exist; the retry
/// count is fixed so a given seed always produces the same values.
fn generic_functionals<R: Rng>(
    arr: &Arrangement,
    rng: &mut R,
) -> Result<(Vec<Rat>, Vec<TraceFunctional>), String> {
    let k = arr.n() - arr.d();
    let mut last = String::new();
    for _ in 0..5 {
        let values = generic_central_values(k, rng);
        match trace_functionals(arr, &values) {
            Ok(tfs) => return Ok((values, tfs)),
            Err(e) => last = e.to_string(),
        }
    }
    Err(format!("no generic central parameter found: {last}"))
}

fn sweep_report(
    arr: &Arrangement,
    tfs: &[TraceFunctional],
    bound: &Rat,
    max_degree: u32,
) -> AnnihilationReport {
    let mut checks = 0usize;
    let mut witnesses = Vec::new();
    for tf in tfs {
        match annihilation_sweep(arr, tf, bound, max_degree) {
            Ok((c, w)) => {
                checks += c;
                witnesses.extend(w);
            }
            Err(e) => witnesses.push(format!("sweep failed at basis {:?}: {e}", tf.basis())),
        }
    }
    AnnihilationReport {
        functionals: tfs.len(),
        max_degree,
        checks,
        witnesses: witnesses.clone(),
        pass: witnesses.is_empty(),
    }
}

/// `verify`: the full certificate chain on one arrangement, one JSON report.
pub fn cmd_verify(config: &RunConfig, path: &Path) -> i32 {
    if config.truncation < 1 {
        return input_error("verify", "truncation must be at least 1".into(), true);
    }
    if config.trials < 1 {
        return input_error("verify", "trials must be at least 1".into(), true);
    }
    let arr = match load_arrangement(path) {
        Ok(a) => a,
        Err(e) => return input_error("verify", e, true),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let data = arr.enumerate();
    let counts = CountsReport {
        bases: data.bases.len(),
        circuits: data.circuits.len(),
        cocircuits: data.cocircuits.len(),
    };

    let duality = match duality_certificate(&arr) {
        Ok(r) => DualityReport {
            bijection: r
                .bijection
                .iter()
                .map(|(c, e)| BijectionRow { cocircuit: c.clone(), dual_circuit: e.clone() })
                .collect(),
            generator_match: r.generator_match,
            q0_match: r.q0_match,
            convention: r.convention.clone(),
            pass: r.passes(),
            witnesses: r.witnesses,
        },
        Err(e) => DualityReport {
            bijection: Vec::new(),
            generator_match: false,
            q0_match: false,
            convention: String::new(),
            witnesses: vec![e.to_string()],
            pass: false,
        },
    };

    let mut rank = Vec::new();
    for trial in 0..config.trials {
        match rank_certificate_seeded(&arr, &mut rng) {
            Ok(r) => rank.push(RankTrial {
                trial,
                upper: r.upper,
                fixed_points: r.fixed_points,
                lower: r.lower,
                witness: None,
                pass: r.pass,
            }),
            Err(e) => rank.push(RankTrial {
                trial,
                upper: 0,
                fixed_points: 0,
                lower: 0,
                witness: Some(e.to_string()),
                pass: false,
            }),
        }
    }

    let bound = rat(config.truncation);
    let annihilation = match generic_functionals(&arr, &mut rng) {
        Ok((_, tfs)) => sweep_report(&arr, &tfs, &bound, SWEEP_DEGREE),
        Err(e) => AnnihilationReport {
            functionals: 0,
            max_degree: SWEEP_DEGREE,
            checks: 0,
            witnesses: vec![e],
            pass: false,
        },
    };

    let appendix = match appendix_check(&arr) {
        Ok(r) => AppendixJson {
            fixed_points: r.fixed_points,
            affine_ok: r.affine_ok,
            rho_nonzero: r.rho_nonzero,
            chi_sign: r.chi_sign,
            witnesses: Vec::new(),
            pass: r.pass,
        },
        Err(e) => AppendixJson {
            fixed_points: 0,
            affine_ok: false,
            rho_nonzero: false,
            chi_sign: 0,
            witnesses: vec![e.to_string()],
            pass: false,
        },
    };

    let pass = duality.pass
        && rank.iter().all(|t| t.pass)
        && annihilation.pass
        && appendix.pass;
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        seed: config.seed,
        truncation: config.truncation,
        trials: config.trials,
        input: input_echo(&arr),
        counts,
        duality,
        rank,
        annihilation,
        appendix,
        pass,
    };
    print_json(&report);
    i32::from(!pass)
}

/// Compares two arrangements up to the combinatorial data a lattice
/// isomorphism preserves: dimensions plus the sets of positive circuits and
/// embedded positive cocircuits.
fn lattice_isomorphic(a: &Arrangement, b: &Arrangement) -> bool {
    let sorted = |v: Vec<Vec<i64>>| {
        let mut v = v;
        v.sort();
        v
    };
    a.n() == b.n()
        && a.d() == b.d()
        && sorted(a.positive_circuits()) == sorted(b.positive_circuits())
        && sorted(a.positive_cocircuits().into_iter().map(|c| c.embedded).collect())
            == sorted(b.positive_cocircuits().into_iter().map(|c| c.embedded).collect())
}

/// `dualize`: emit the Gale dual plus the cocircuit/circuit bijection.
pub fn cmd_dualize(config: &RunConfig, path: &Path, out: Option<&Path>) -> i32 {
    let arr = match load_arrangement(path) {
        Ok(a) => a,
        Err(e) => return input_error("dualize", e, config.json),
    };
    let dual = match arr.gale_dual() {
        Ok(d) => d,
        Err(e) => return input_error("dualize", e.to_string(), config.json),
    };
    let cert = match duality_certificate(&arr) {
        Ok(c) => c,
        Err(e) => return input_error("dualize", e.to_string(), config.json),
    };
    let round_trip = match dual.gale_dual() {
        Ok(dd) => lattice_isomorphic(&arr, &dd),
        Err(_) => false,
    };
    let dual_text = render_toml(&dual);
    if let Some(out_path) = out {
        if let Err(e) = std::fs::write(out_path, &dual_text) {
            return input_error(
                "dualize",
                format!("cannot write {}: {e}", out_path.display()),
                config.json,
            );
        }
    }
    let pass = cert.passes() && round_trip;
    let bijection: Vec<BijectionRow> = cert
        .bijection
        .iter()
        .map(|(c, e)| BijectionRow { cocircuit: c.clone(), dual_circuit: e.clone() })
        .collect();
    if config.json {
        print_json(&DualizeReport {
            schema_version: SCHEMA_VERSION,
            command: "dualize".into(),
            input: input_echo(&arr),
            dual: input_echo(&dual),
            bijection,
            round_trip_lattice_isomorphic: round_trip,
            duality_pass: cert.passes(),
            pass,
        });
    } else {
        if out.is_none() {
            print!("{dual_text}");
        }
        println!("bijection (cocircuit <-> dual positive circuit):");
        for row in &bijection {
            println!("  {:?} <-> {:?}", row.cocircuit, row.dual_circuit);
        }
        for w in &cert.witnesses {
            println!("witness: {w}");
        }
        println!(
            "round-trip dual is lattice-isomorphic to the input: {}",
            if round_trip { "yes" } else { "no" }
        );
        println!("duality certificate: {}", if cert.passes() { "pass" } else { "FAIL" });
    }
    i32::from(!pass)
}

fn parse_values(spec: &str, expected: usize) -> Result<Vec<Rat>, String> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let r: Rat = part
            .trim()
            .parse()
            .map_err(|e| format!("cannot parse central value {part:?}: {e}"))?;
        out.push(r);
    }
    if out.len() != expected {
        return Err(format!(
            "expected {expected} central value(s), got {}",
            out.len()
        ));
    }
    Ok(out)
}

/// `character`: expand one Verma character and sweep its annihilation
/// identities.
pub fn cmd_character(config: &RunConfig, path: &Path, basis_index: usize, c: Option<&str>) -> i32 {
    if config.truncation < 0 {
        return input_error("character", "truncation must be nonnegative".into(), config.json);
    }
    let arr = match load_arrangement(path) {
        Ok(a) => a,
        Err(e) => return input_error("character", e, config.json),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (values, tfs) = match c {
        Some(spec) => {
            let values = match parse_values(spec, arr.n() - arr.d()) {
                Ok(v) => v,
                Err(e) => return input_error("character", e, config.json),
            };
            match trace_functionals(&arr, &values) {
                Ok(tfs) => (values, tfs),
                Err(e) => return input_error("character", e.to_string(), config.json),
            }
        }
        None => match generic_functionals(&arr, &mut rng) {
            Ok(pair) => pair,
            Err(e) => return input_error("character", e, config.json),
        },
    };
    if basis_index >= tfs.len() {
        return input_error(
            "character",
            format!("invalid basis index {basis_index}: {} fixed points", tfs.len()),
            config.json,
        );
    }
    let tf = &tfs[basis_index];
    let bound = rat(config.truncation);
    let chi = match verma_character(&arr, tf, &bound) {
        Ok(chi) => chi,
        Err(e) => return input_error("character", e.to_string(), config.json),
    };
    let annihilation = sweep_report(&arr, std::slice::from_ref(tf), &bound, SWEEP_DEGREE);
    let pass = annihilation.pass;
    if config.json {
        print_json(&CharacterReport {
            schema_version: SCHEMA_VERSION,
            command: "character".into(),
            seed: config.seed,
            truncation: config.truncation,
            basis_index,
            basis: tf.basis().to_vec(),
            central_values: values.iter().map(rat_string).collect(),
            offset: chi.offset().iter().map(rat_string).collect(),
            terms: chi
                .terms()
                .map(|(k, v)| SeriesTermReport { key: k.clone(), coeff: v.to_string() })
                .collect(),
            annihilation,
            pass,
        });
    } else {
        println!("basis {:?} at central values [{}]", tf.basis(), {
            let v: Vec<String> = values.iter().map(rat_string).collect();
            v.join(", ")
        });
        println!("character: {chi}");
        println!(
            "annihilation sweep: {} checks to degree {}, {}",
            annihilation.checks,
            annihilation.max_degree,
            if annihilation.pass { "all pass" } else { "FAILURES" }
        );
        for w in &annihilation.witnesses {
            println!("witness: {w}");
        }
    }
    i32::from(!pass)
}

/// `springer`: Harish-Chandra eigenchecks, the conjugation chain, and the
/// rank-one trigonometric model, as one JSON report.
pub fn cmd_springer(config: &RunConfig, kind: &str) -> i32 {
    let tag = match kind.to_ascii_uppercase().as_str() {
        "A1" => RootSystemTag::A1,
        "A2" => RootSystemTag::A2,
        "B2" => RootSystemTag::B2,
        _ => {
            return input_error(
                "springer",
                format!("unsupported rank or type {kind:?}: expected A1, A2, or B2"),
                true,
            )
        }
    };
    let rs = RootSystemData::new(tag);
    let phi = casimir_phi(&rs);
    let mut witnesses = Vec::new();
    let mut eigenchecks = 0usize;

    let highest: Vec<Vec<i64>> = if rs.rank() == 1 {
        (0..=20).map(|n| vec![n]).collect()
    } else {
        vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1]]
    };
    for lam in &highest {
        let chi = match weyl_character(&rs, lam) {
            Ok(chi) => chi,
            Err(e) => {
                witnesses.push(format!("character at {lam:?}: {e}"));
                continue;
            }
        };
        let shifted: Vec<i64> = lam.iter().map(|c| c + 1).collect();
        let eigen = graded_eval(&phi, &shifted);
        eigenchecks += 1;
        match geometric_hc_apply(&rs, &phi, &chi) {
            Ok(image) if image == chi.map_coeffs(|c| c.mul(&eigen)) => {}
            Ok(_) => witnesses.push(format!("eigenvalue mismatch at {lam:?}")),
            Err(e) => witnesses.push(format!("transport failed at {lam:?}: {e}")),
        }
    }
    if rs.rank() == 1 {
        let h_sq = Poly::var(2, 0).pow(2);
        if phi != h_sq {
            witnesses.push("interpolated Casimir is not the coroot square".into());
        }
        let golden = Poly::var(2, 0).sub(&Poly::hbar(2)).pow(2);
        if rho_shift(&phi) != golden {
            witnesses.push("rho shift of the Casimir is not (H - h)^2".into());
        }
    }
    let hc = HcJson {
        phi: phi.to_string(),
        rho_shifted: rho_shift(&phi).to_string(),
        eigenchecks,
        pass: witnesses.is_empty(),
        witnesses,
    };

    let degree = match tag {
        RootSystemTag::A1 => 4,
        RootSystemTag::A2 => 3,
        RootSystemTag::B2 => 1,
    };
    let conj = conjugation_identity_check(&rs, degree);
    let conjugation = ConjugationJson {
        degree: conj.degree,
        basis_size: conj.basis_size,
        direction_count: conj.direction_count,
        lines: conj.lines(),
        witness: conj.witness.clone(),
        pass: conj.passes(),
    };

    let calogero_moser = if rs.rank() == 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let drawn = generic_central_values(2, &mut rng);
        let cm = cm_check_a1(&drawn[0], &drawn[1]);
        Some(CmJson {
            t: rat_string(&cm.t),
            c: rat_string(&cm.c),
            scalar: rat_string(&cm.scalar),
            transported_residual: cm.transported_residual.clone(),
            pass: cm.passes(),
        })
    } else {
        None
    };

    let pass =
        hc.pass && conjugation.pass && calogero_moser.as_ref().map_or(true, |cm| cm.pass);
    print_json(&SpringerReport {
        schema_version: SCHEMA_VERSION,
        command: "springer".into(),
        seed: config.seed,
        root_system: format!("{tag:?}"),
        harish_chandra: hc,
        conjugation,
        calogero_moser,
        pass,
    });
    i32::from(!pass)
}
