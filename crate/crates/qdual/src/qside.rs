//! The cohomology side of the correspondence.
//!
//! For the Gale dual arrangement the quantized ring acts on a module
//! generated by difference operators `s(alpha) = [u]^alpha (1 - q^alpha)`,
//! one for each positive circuit `alpha`.  The variables `u_i` are the
//! equivariant Chern roots in the shifted convention `u_i = chi_i - h/2`,
//! which is what makes the brackets below land on integral shifts.
//!
//! This module constructs the generators, the topological presentation of
//! the underlying ring (square-free circuit monomials plus linear relations
//! from the kernel of the Kirwan map), the `q = 0` fibre with the
//! equivariant parameter kept, and [`duality_certificate`], which checks
//! that the two sides of the duality agree literally: positive cocircuits
//! of an arrangement biject with positive circuits of its Gale dual, and
//! under `a_i <-> u_i`, `q^lam <-> q^alpha` the generators `r(lam)` and
//! `s(alpha)` are equal term by term.

use crate::arrangement::Arrangement;
use crate::dmod::{r_generator_skew, RModElement};
use crate::error::{Error, Result};
use crate::exact::{bracket_vector, Poly};
use crate::groebner::GroebnerBasis;
use crate::hea::b_algebra_presentation;
use crate::skew::{one_minus_q_skew, SkewPoly};

/// The shifted Chern-root convention used for the `u` variables.
pub const CHERN_CONVENTION: &str = "u_i = chi_i - h/2";

/// Elements of the localized module on the cohomology side.  The ambient
/// shape is identical to the difference-operator side: cone fractions in
/// `q^alpha` tensored with polynomial coefficients, except the coefficients
/// are read in the `u` variables and the keys run over the kernel lattice
/// of the arrangement rather than its image lattice.
pub type EElement = RModElement;

/// The generator `s(alpha) = [u]^alpha (1 - q^alpha)` in the scratch ring.
/// `alpha` lives in the kernel lattice, so no embedding is applied: the
/// exponent vector is already one entry per `u` variable.
pub fn s_generator_skew(alpha: &[i64]) -> SkewPoly {
    let n = alpha.len();
    SkewPoly::from_poly(n, bracket_vector(n + 1, alpha)).mul(&one_minus_q_skew(alpha))
}

/// The generator `s(alpha)` as a module element.  Defined only for the
/// positive circuits of the arrangement; anything else is rejected.
pub fn s_generator(arr: &Arrangement, alpha: &[i64]) -> Result<EElement> {
    if !arr.positive_circuits().iter().any(|c| c == alpha) {
        return Err(Error::NotPositiveCircuit(alpha.to_vec()));
    }
    Ok(EElement::from_skew(&s_generator_skew(alpha)))
}

/// The presentation of the topological ring of the arrangement's variety:
/// square-free monomials supported on circuits, plus the linear forms
/// spanning the kernel of the Kirwan map (one per column of the defining
/// matrix).  Both parts live in the `u` variables alone.
///
/// The column forms restrict to an independent pair on every basis, so they
/// are a linear system of parameters for the circuit ideal; the quotient is
/// finite of dimension equal to the number of bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KonnoPresentation {
    /// Linear relations `sum_i gamma_(i j) u_i`, one per column `j`.
    pub linear: Vec<Poly>,
    /// One square-free monomial `prod_i u_i^(|alpha_i|)` per positive circuit.
    pub monomials: Vec<Poly>,
}

impl KonnoPresentation {
    /// Dimension of the quotient by both parts, when finite.
    pub fn graded_dimension(&self) -> Option<usize> {
        let mut gens = self.linear.clone();
        gens.extend(self.monomials.iter().cloned());
        GroebnerBasis::new(&gens).quotient_dimension()
    }
}

fn circuit_monomial(n: usize, alpha: &[i64]) -> Poly {
    let mut out = Poly::one(n);
    for (i, &c) in alpha.iter().enumerate() {
        for _ in 0..c.unsigned_abs() {
            out = out.mul(&Poly::var(n, i));
        }
    }
    out
}

/// Computes the topological presentation of `arr` in the `u` variables.
pub fn konno_presentation(arr: &Arrangement) -> KonnoPresentation {
    let n = arr.n();
    let linear = (0..arr.d())
        .map(|j| {
            let mut form = Poly::zero(n);
            for (i, row) in arr.gamma().iter().enumerate() {
                form = form.add(&Poly::var(n, i).scale(&crate::exact::rat(row[j])));
            }
            form
        })
        .collect();
    let monomials =
        arr.positive_circuits().iter().map(|alpha| circuit_monomial(n, alpha)).collect();
    KonnoPresentation { linear, monomials }
}

/// Generators of the `q = 0` fibre of the quantized ring: the brackets
/// `[u]^alpha` over positive circuits, with the equivariant parameter kept.
/// Setting `h = 0` recovers the monomial part of [`konno_presentation`].
pub fn q0_fiber(arr: &Arrangement) -> Vec<Poly> {
    let n = arr.n();
    arr.positive_circuits().iter().map(|alpha| bracket_vector(n + 1, alpha)).collect()
}

/// Outcome of the duality check between an arrangement and its Gale dual.
/// Failures are recorded as witnesses rather than errors, so a report is
/// produced even when a check breaks.
#[derive(Clone, Debug)]
pub struct HikitaReport {
    /// Matched pairs `(cocircuit covector, dual positive circuit)`; the
    /// second entry is the embedding of the first into the common lattice.
    pub bijection: Vec<(Vec<i64>, Vec<i64>)>,
    /// Whether `r(lam)` and `s(alpha)` agree term by term over the bijection.
    pub generator_match: bool,
    /// Whether the `q = 0` fibres present the same ideal with `h` kept.
    pub q0_match: bool,
    /// Variable convention under which the identification is literal.
    pub convention: String,
    /// Human-readable descriptions of every failed comparison.
    pub witnesses: Vec<String>,
}

impl HikitaReport {
    /// True when every check succeeded.
    pub fn passes(&self) -> bool {
        self.generator_match && self.q0_match && self.witnesses.is_empty()
    }
}

/// Checks the duality between `arr` and its Gale dual: the positive
/// cocircuits embed bijectively onto the dual's positive circuits, the
/// generators on the two sides coincide under `a_i <-> u_i`, and the
/// `q = 0` fibres present the same ideal.  Errors only on arrangements
/// whose dual cannot be formed at all.
pub fn duality_certificate(arr: &Arrangement) -> Result<HikitaReport> {
    let dual = arr.gale_dual()?;
    let cocircuits = arr.positive_cocircuits();
    let circuits = dual.positive_circuits();
    let mut witnesses = Vec::new();
    let mut bijection = Vec::new();
    let mut hit = vec![false; circuits.len()];
    for c in &cocircuits {
        match circuits.iter().position(|a| *a == c.embedded) {
            Some(j) if !hit[j] => {
                hit[j] = true;
                bijection.push((c.covector.clone(), c.embedded.clone()));
            }
            Some(_) => witnesses.push(format!(
                "cocircuit {:?} embeds onto an already matched dual circuit",
                c.covector
            )),
            None => witnesses.push(format!(
                "cocircuit {:?} embeds to {:?}, which is not a positive dual circuit",
                c.covector, c.embedded
            )),
        }
    }
    for (j, alpha) in circuits.iter().enumerate() {
        if !hit[j] {
            witnesses
                .push(format!("dual circuit {:?} is not the image of any positive cocircuit", alpha));
        }
    }
    let mut generator_match = true;
    for (cov, alpha) in &bijection {
        if r_generator_skew(arr, cov) != s_generator_skew(alpha) {
            generator_match = false;
            witnesses.push(format!("generators differ at weight {:?}", cov));
        }
    }
    let left = GroebnerBasis::new(&b_algebra_presentation(arr));
    let right = GroebnerBasis::new(&q0_fiber(&dual));
    let q0_match = left.same_ideal(&right);
    if !q0_match {
        witnesses.push("q = 0 fibres present different ideals".to_string());
    }
    Ok(HikitaReport {
        bijection,
        generator_match,
        q0_match,
        convention: CHERN_CONVENTION.to_string(),
        witnesses,
    })
}
