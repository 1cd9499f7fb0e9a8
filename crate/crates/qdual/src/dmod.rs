//! The D-module of graded traces attached to an arrangement: module
//! elements over the cone-localized coefficient ring, the generators
//! `r(lam) = [a]^lam (1 - q^lam)`, the constructive reduction of any such
//! generator to the cocircuit ones, weight-zero reduction of opposite
//! products, specializations, Verma characters and graded traces with their
//! annihilation certificates, the three-way rank certificate, and the
//! affine structure check on fixed-point weights.
//!
//! Identities are certified inside the torus-localized scratch ring
//! [`SkewPoly`], where every claim is a finite exact computation.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use rand::Rng;

use crate::arrangement::{Arrangement, Cocircuit};
use crate::error::{Error, Result};
use crate::exact::cone::{expand_fraction, ConeFraction, ConeSeries};
use crate::exact::laurent::{one_minus_q, LaurentQ};
use crate::exact::poly::{rat, Poly, Rat};
use crate::exact::{bracket_vector, shift_poly};
use crate::groebner::GroebnerBasis;
use crate::hea::{
    b_algebra_points, b_algebra_presentation, fixed_point_weight, generic_central_values,
    multiply, AElement,
};
use crate::lin::{solve_integer, transpose};
use crate::skew::{one_minus_q_skew, right_divide_pow, SkewPoly};

/// An element of the localized trace module: a sum of terms
/// `s (x) f` with `s` a cone fraction in the `q`-variables over the row
/// lattice and `f` a coefficient polynomial in `a_1, ..., a_n, h`.
#[derive(Debug, Clone)]
pub struct RModElement {
    qvars: usize,
    terms: Vec<(ConeFraction, Poly)>,
}

impl RModElement {
    /// The zero element over `qvars` lattice coordinates.
    pub fn zero(qvars: usize) -> Self {
        RModElement { qvars, terms: Vec::new() }
    }

    /// Builds from explicit fraction/coefficient pairs.
    pub fn from_pairs(qvars: usize, terms: Vec<(ConeFraction, Poly)>) -> Self {
        let mut out = RModElement::zero(qvars);
        for (s, f) in terms {
            out.push(s, f);
        }
        out
    }

    /// Lifts a denominator-free scratch element.
    pub fn from_skew(s: &SkewPoly) -> Self {
        let qvars = s.qvars();
        let mut out = RModElement::zero(qvars);
        for (tau, f) in s.terms() {
            out.push(
                ConeFraction::from_laurent(LaurentQ::monomial(tau.clone(), Poly::one(1))),
                f.clone(),
            );
        }
        out
    }

    /// Appends a term, merging with an existing term of equal fraction.
    pub fn push(&mut self, s: ConeFraction, f: Poly) {
        assert_eq!(s.rank(), self.qvars);
        assert_eq!(s.cvars(), 1, "fraction coefficients must be scalars in h");
        assert_eq!(f.nvars(), self.qvars + 1);
        if s.is_zero() || f.is_zero() {
            return;
        }
        for (t, g) in &mut self.terms {
            if t.eq_fraction(&s) {
                let sum = g.add(&f);
                if sum.is_zero() {
                    let keep: Vec<(ConeFraction, Poly)> = self
                        .terms
                        .iter()
                        .filter(|(u, _)| !u.eq_fraction(&s))
                        .cloned()
                        .collect();
                    self.terms = keep;
                } else {
                    *g = sum;
                }
                return;
            }
        }
        self.terms.push((s, f));
    }

    /// Number of lattice coordinates.
    pub fn qvars(&self) -> usize {
        self.qvars
    }

    /// Term iterator.
    pub fn terms(&self) -> impl Iterator<Item = &(ConeFraction, Poly)> {
        self.terms.iter()
    }

    /// Sum.
    pub fn add(&self, other: &RModElement) -> RModElement {
        assert_eq!(self.qvars, other.qvars);
        let mut out = self.clone();
        for (s, f) in &other.terms {
            out.push(s.clone(), f.clone());
        }
        out
    }

    /// Additive inverse.
    pub fn neg(&self) -> RModElement {
        RModElement {
            qvars: self.qvars,
            terms: self.terms.iter().map(|(s, f)| (s.clone(), f.neg())).collect(),
        }
    }

    /// Difference.
    pub fn sub(&self, other: &RModElement) -> RModElement {
        self.add(&other.neg())
    }

    /// Left multiplication by a pure `q`-Laurent polynomial (these commute
    /// with the fraction parts).
    pub fn left_mul_laurent(&self, x: &LaurentQ) -> RModElement {
        let mut out = RModElement::zero(self.qvars);
        for (s, f) in &self.terms {
            out.push(s.mul_laurent(x), f.clone());
        }
        out
    }

    /// The union denominator over all terms.
    pub fn common_denominator(&self) -> BTreeMap<Vec<i64>, u32> {
        let mut den: BTreeMap<Vec<i64>, u32> = BTreeMap::new();
        for (s, _) in &self.terms {
            for (l, &k) in s.den() {
                let e = den.entry(l.clone()).or_insert(0);
                *e = (*e).max(k);
            }
        }
        den
    }

    /// Clears a target denominator (which must dominate every term's) and
    /// returns the resulting scratch-ring numerator.
    pub fn cleared_against(&self, target: &BTreeMap<Vec<i64>, u32>) -> SkewPoly {
        let nvars = self.qvars + 1;
        let mut out = SkewPoly::zero(self.qvars);
        for (s, f) in &self.terms {
            let mut num = s.num().clone();
            for (l, &k) in target {
                let have = s.den().get(l).copied().unwrap_or(0);
                assert!(have <= k, "target denominator does not dominate");
                for _ in 0..k - have {
                    num = num.mul(&one_minus_q(l, 1));
                }
            }
            for (tau, c) in num.terms() {
                out.add_term(tau.clone(), c.embed(nvars, &[self.qvars]).mul(f));
            }
        }
        out
    }

    /// Exact equality, decided by clearing both sides against the union
    /// denominator.
    pub fn eq_element(&self, other: &RModElement) -> bool {
        assert_eq!(self.qvars, other.qvars);
        let mut target = self.common_denominator();
        for (l, &k) in &other.common_denominator() {
            let e = target.entry(l.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        self.cleared_against(&target) == other.cleared_against(&target)
    }

    /// True when the element is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.cleared_against(&self.common_denominator()).is_zero()
    }
}

impl fmt::Display for RModElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let pieces: Vec<String> =
            self.terms.iter().map(|(s, g)| format!("[{}] (x) ({})", s, g)).collect();
        write!(f, "{}", pieces.join(" + "))
    }
}

/// The generator `r(lam) = [a]^lam (1 - q^lam)` in the scratch ring, for an
/// arbitrary intrinsic weight.
pub fn r_generator_skew(arr: &Arrangement, lam: &[i64]) -> SkewPoly {
    let emb = arr.embed(lam);
    SkewPoly::from_poly(arr.n(), bracket_vector(arr.n() + 1, &emb)).mul(&one_minus_q_skew(&emb))
}

/// The generator `r(lam)` as a module element; requires a semigroup
/// certificate over the xi-positive cocircuits.
pub fn r_generator(arr: &Arrangement, lam: &[i64]) -> Result<RModElement> {
    arr.semigroup_certificate(lam)?;
    Ok(RModElement::from_skew(&r_generator_skew(arr, lam)))
}

/// Rewrites a coefficient polynomial across a denominator power: returns
/// `(M, r')` with `(1 - q^lam)^M x = r' (1 - q^lam)^N` verified by exact
/// expansion. `M = N + deg(x)/2`, and the stated precondition
/// `N >= deg(x)/2` is enforced.
pub fn ore_commute(x: &Poly, lam: &[i64], n_power: u32) -> Result<(u32, SkewPoly)> {
    let qvars = lam.len();
    assert_eq!(x.nvars(), qvars + 1, "coefficient arity mismatch");
    let adeg = x.graded_degree().unwrap_or(0) / 2;
    if n_power < adeg {
        return Err(Error::InsufficientPower { power: n_power, degree: adeg });
    }
    let m_power = n_power + adeg;
    let omq = one_minus_q_skew(lam);
    let p = omq.pow(m_power).mul(&SkewPoly::from_poly(qvars, x.clone()));
    let r = right_divide_pow(&p, lam, n_power)
        .map_err(|_| Error::InsufficientPower { power: n_power, degree: adeg })?;
    if r.mul(&omq.pow(n_power)) != p {
        return Err(Error::InsufficientPower { power: n_power, degree: adeg });
    }
    Ok((m_power, r))
}

fn add_coeff(acc: &mut BTreeMap<Vec<i64>, SkewPoly>, mu: Vec<i64>, c: SkewPoly) {
    match acc.entry(mu) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().add(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn reduce_into(
    arr: &Arrangement,
    lam: &[i64],
    parts: &[Cocircuit],
    scale: &SkewPoly,
    acc: &mut BTreeMap<Vec<i64>, SkewPoly>,
) -> Result<()> {
    let nvars = arr.n() + 1;
    if parts.is_empty() {
        return Ok(());
    }
    if parts.len() == 1 {
        let part = &parts[0];
        if arr.xi_pairing(&part.covector) > 0 {
            add_coeff(acc, part.covector.clone(), scale.clone());
        } else {
            // r(mu) = -q^mu r(-mu) turns a negative part into a generator.
            let neg: Vec<i64> = part.covector.iter().map(|x| -x).collect();
            let coeff = scale.mul(&SkewPoly::monomial(&part.embedded, Poly::one(nvars).neg()));
            add_coeff(acc, neg, coeff);
        }
        return Ok(());
    }
    // Split off one part mu and set nu = lam - mu. Both stay sign-compatible
    // with lam, so the two bracket quotients below divide exactly:
    //   r(lam) = q^nu ([a]^lam_nu / [a]^mu) r(mu) + ([a]^lam / [a]^nu) r(nu).
    let all_positive = parts.iter().all(|p| arr.xi_pairing(&p.covector) > 0);
    let idx = if all_positive {
        parts.len() - 1
    } else {
        parts.iter().position(|p| arr.xi_pairing(&p.covector) < 0).unwrap()
    };
    let mu = parts[idx].clone();
    let rest: Vec<Cocircuit> =
        parts.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, p)| p.clone()).collect();
    let nu: Vec<i64> = lam.iter().zip(&mu.covector).map(|(a, b)| a - b).collect();
    let lam_emb = arr.embed(lam);
    let nu_emb = arr.embed(&nu);
    let bracket_lam = bracket_vector(nvars, &lam_emb);
    let f = shift_poly(&bracket_lam, &nu_emb).exact_div(&bracket_vector(nvars, &mu.embedded))?;
    let g = bracket_lam.exact_div(&bracket_vector(nvars, &nu_emb))?;
    let mu_scale = scale.mul(&SkewPoly::monomial(&nu_emb, f));
    reduce_into(arr, &mu.covector, std::slice::from_ref(&mu), &mu_scale, acc)?;
    let nu_scale = scale.mul(&SkewPoly::from_poly(arr.n(), g));
    reduce_into(arr, &nu, &rest, &nu_scale, acc)
}

/// Expresses `r(lam)` over the cocircuit generators: returns pairs
/// `(mu, c_mu)` with `mu` a xi-positive cocircuit and
/// `sum_mu c_mu r(mu) = r(lam)`, the identity re-verified by full expansion
/// in the scratch ring.
pub fn reduce_r(arr: &Arrangement, lam: &[i64]) -> Result<Vec<(Vec<i64>, SkewPoly)>> {
    arr.semigroup_certificate(lam)?;
    let parts = arr.cancellation_free(lam)?;
    let mut acc = BTreeMap::new();
    reduce_into(arr, lam, &parts, &SkewPoly::one(arr.n()), &mut acc)?;
    let mut total = SkewPoly::zero(arr.n());
    for (mu, c) in &acc {
        total = total.add(&c.mul(&r_generator_skew(arr, mu)));
    }
    if total != r_generator_skew(arr, lam) {
        return Err(Error::DivisionFailure(
            "reduction identity failed its expansion check".into(),
        ));
    }
    Ok(acc.into_iter().collect())
}

fn single_term(x: &AElement) -> Result<(Vec<i64>, Poly)> {
    let mut it = x.terms();
    let first = it.next().ok_or_else(|| Error::InvalidInput("zero element".into()))?;
    if it.next().is_some() {
        return Err(Error::InvalidInput("expected a single homogeneous weight".into()));
    }
    Ok((first.0.clone(), first.1.clone()))
}

/// The image of the weight-zero product `y z` in the localized trace
/// module, for `y` of weight `mu` and `z` of weight `-mu`.
///
/// When `mu` has a xi-positive cancellation-free component `sigma`, split
/// `y = m^sigma y'` and set `B = y' z`; the graded trace twist
/// `tr(m^sigma B) = q^sigma tr(B m^sigma)` gives
/// `(1 - q^sigma) image(y z) = q^sigma (x) [B, m^sigma]`, whose right side
/// is an honest weight-zero polynomial of strictly smaller `a`-degree.
/// Otherwise swap the factors, which costs the polynomial term
/// `1 (x) [y, z]`.
///
/// The representative depends on the pivot `sigma`, so images produced
/// through different factorizations agree as trace functionals rather than
/// term by term; [`RModElement::eq_element`] decides only the formal
/// equality.
pub fn weight_zero_reduce(arr: &Arrangement, y: &AElement, z: &AElement) -> Result<RModElement> {
    let n = arr.n();
    let nvars = n + 1;
    let (mu, f) = single_term(y)?;
    let (mnu, _) = single_term(z)?;
    let total: Vec<i64> = mu.iter().zip(&mnu).map(|(a, b)| a + b).collect();
    if total.iter().any(|&x| x != 0) {
        return Err(Error::NonZeroWeight(total));
    }
    if mu.iter().all(|&x| x == 0) {
        let prod = multiply(arr, y, z);
        let (_, p) = single_term(&prod)?;
        return Ok(RModElement::from_pairs(n, vec![(ConeFraction::one(n, 1), p)]));
    }
    let parts = arr.cancellation_free(&mu)?;
    if let Some(sigma) = parts.iter().find(|p| arr.xi_pairing(&p.covector) > 0) {
        let rest: Vec<i64> = mu.iter().zip(&sigma.covector).map(|(a, b)| a - b).collect();
        let yprime = AElement::monomial(arr, &rest, f);
        let m_sigma = AElement::monomial(arr, &sigma.covector, Poly::one(nvars));
        let b = multiply(arr, &yprime, z);
        let comm = multiply(arr, &b, &m_sigma).sub(&multiply(arr, &m_sigma, &b));
        let comm_poly = comm.weight_component(&vec![0; arr.d()]);
        let frac = ConeFraction::new(
            LaurentQ::monomial(sigma.embedded.clone(), Poly::one(1)),
            [(sigma.embedded.clone(), 1)],
        );
        Ok(RModElement::from_pairs(n, vec![(frac, comm_poly)]))
    } else {
        // All components lower against xi: reduce the swapped product and
        // keep the commutator correction.
        let swapped = weight_zero_reduce(arr, z, y)?;
        let comm = multiply(arr, y, z).sub(&multiply(arr, z, y));
        let comm_poly = comm.weight_component(&vec![0; arr.d()]);
        Ok(swapped
            .add(&RModElement::from_pairs(n, vec![(ConeFraction::one(n, 1), comm_poly)])))
    }
}

/// A specialization of the trace module presentation.
#[derive(Debug, Clone)]
pub enum SpecializeTarget {
    /// The fiber at `q = 0`.
    QZero,
    /// The fiber at `q = 1`: all `r`-generators vanish and the quotient is
    /// by commutators.
    QOne,
    /// Evaluation `h = 1`.
    HbarOne,
    /// A central character given by values on the kernel basis.
    Central(Vec<Rat>),
}

/// A specialization record: ideal generators together with any central
/// linear constraints.
#[derive(Debug, Clone)]
pub struct PresentationRecord {
    /// Human-readable target tag.
    pub target: String,
    /// Ideal generators in `Q[a_1, ..., a_n, h]`.
    pub generators: Vec<Poly>,
    /// Central linear forms `theta(a) - value * h` (empty unless a central
    /// character is requested).
    pub central_forms: Vec<Poly>,
}

/// Specializes the presentation of the trace module.
pub fn specialize(arr: &Arrangement, target: &SpecializeTarget) -> PresentationRecord {
    let nvars = arr.n() + 1;
    match target {
        SpecializeTarget::QZero => PresentationRecord {
            target: "q -> 0".into(),
            generators: b_algebra_presentation(arr),
            central_forms: Vec::new(),
        },
        SpecializeTarget::QOne => PresentationRecord {
            // Every r(lam) picks up the factor 1 - q^lam and dies; what is
            // left is the quotient by commutators.
            target: "q -> 1".into(),
            generators: Vec::new(),
            central_forms: Vec::new(),
        },
        SpecializeTarget::HbarOne => PresentationRecord {
            target: "h -> 1".into(),
            generators: b_algebra_presentation(arr)
                .iter()
                .map(|g| g.set_hbar(&Rat::one()))
                .collect(),
            central_forms: Vec::new(),
        },
        SpecializeTarget::Central(values) => {
            let kernel = arr.kernel_basis();
            assert_eq!(values.len(), kernel.len(), "one value per kernel basis vector");
            let central_forms = kernel
                .iter()
                .zip(values)
                .map(|(th, v)| {
                    let mut form = Poly::hbar(nvars).scale(v).neg();
                    for (i, &t) in th.iter().enumerate() {
                        if t != 0 {
                            form = form.add(&Poly::var(nvars, i).scale(&rat(t)));
                        }
                    }
                    form
                })
                .collect();
            PresentationRecord {
                target: "central character".into(),
                generators: b_algebra_presentation(arr),
                central_forms,
            }
        }
    }
}

/// The trace functional of one fixed point: the data needed to expand
/// Verma characters and graded traces.
#[derive(Debug, Clone)]
pub struct TraceFunctional {
    basis: Vec<usize>,
    values: Vec<Rat>,
    offset: Vec<Rat>,
    tangent: Vec<Vec<i64>>,
    tangent_emb: Vec<Vec<i64>>,
}

impl TraceFunctional {
    /// The underlying row basis.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Central parameter values on the kernel basis.
    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Vacuum weight `w^c_x` in units of `h`.
    pub fn offset(&self) -> &[Rat] {
        &self.offset
    }

    /// Intrinsic tangent weights (dual basis weights, positivized against
    /// `xi`).
    pub fn tangent(&self) -> &[Vec<i64>] {
        &self.tangent
    }

    /// Embedded tangent weights.
    pub fn tangent_emb(&self) -> &[Vec<i64>] {
        &self.tangent_emb
    }
}

/// Builds the trace functionals of all fixed points at a central parameter,
/// cross-checking the vacuum weights against [`b_algebra_points`].
pub fn trace_functionals(arr: &Arrangement, values: &[Rat]) -> Result<Vec<TraceFunctional>> {
    let points = b_algebra_points(arr, values)?;
    let mut out = Vec::new();
    for basis in arr.bases() {
        let offset = fixed_point_weight(arr, &basis, values)?;
        assert!(
            points.binary_search(&offset).is_ok(),
            "fixed-point weight missing from the point list"
        );
        let duals = arr.dual_basis_weights(&basis)?;
        let tangent: Vec<Vec<i64>> = duals
            .iter()
            .map(|w| {
                if arr.xi_pairing(w) > 0 {
                    w.clone()
                } else {
                    w.iter().map(|x| -x).collect()
                }
            })
            .collect();
        let tangent_emb: Vec<Vec<i64>> = tangent.iter().map(|w| arr.embed(w)).collect();
        out.push(TraceFunctional { basis, values: values.to_vec(), offset, tangent, tangent_emb });
    }
    Ok(out)
}

/// A rational lift of `xi` to the row lattice: a covector on embedded keys
/// restricting to `xi` on intrinsic weights.
pub fn xi_lift(arr: &Arrangement) -> Vec<Rat> {
    let sol = solve_integer(&transpose(arr.gamma()), arr.xi())
        .expect("a valid arrangement admits an integral xi lift");
    sol.iter().map(|&x| rat(x)).collect()
}

/// The Verma character of a fixed point: the product of geometric series
/// over the tangent weights, grafted onto the vacuum offset, complete up to
/// pairing `bound` against `xi`.
pub fn verma_character(
    arr: &Arrangement,
    tf: &TraceFunctional,
    bound: &Rat,
) -> Result<ConeSeries> {
    let n = arr.n();
    let den: Vec<(Vec<i64>, u32)> =
        tf.tangent_emb().iter().map(|e| (e.clone(), 1)).collect();
    let frac = ConeFraction::new(LaurentQ::one(n, 1), den);
    let series = expand_fraction(&frac, bound, &xi_lift(arr))?;
    Ok(series.with_offset(tf.offset().to_vec()))
}

/// The graded trace of a weight-zero coefficient polynomial on the Verma
/// module of a fixed point: the diagonal action of the polynomial on the
/// character.
pub fn graded_trace(
    arr: &Arrangement,
    a: &Poly,
    tf: &TraceFunctional,
    bound: &Rat,
) -> Result<ConeSeries> {
    Ok(verma_character(arr, tf, bound)?.act_diag(a))
}

/// Certifies that the right action of `r(lam)` annihilates the graded trace
/// of `a`: the trace series of `[a]^lam a` must equal the `q^lam`-shift of
/// the trace series of `[a]^(-lam) a_lam` (the graded cyclicity of the
/// trace), compared exactly up to the truncation bound.
pub fn r_annihilation_check(
    arr: &Arrangement,
    tf: &TraceFunctional,
    a: &Poly,
    lam: &[i64],
    bound: &Rat,
) -> Result<bool> {
    let nvars = arr.n() + 1;
    let lam_emb = arr.embed(lam);
    let neg_emb: Vec<i64> = lam_emb.iter().map(|x| -x).collect();
    let lhs = graded_trace(arr, &bracket_vector(nvars, &lam_emb).mul(a), tf, bound)?;
    let rhs_core = graded_trace(
        arr,
        &bracket_vector(nvars, &neg_emb).mul(&shift_poly(a, &lam_emb)),
        tf,
        bound,
    )?;
    let rhs = rhs_core.shift_q(&lam_emb);
    Ok(lhs.eq_truncated(&rhs))
}

fn degree_monomials(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; nvars]];
    for v in 0..nvars {
        let mut next = Vec::new();
        for exp in out {
            let used: u32 = exp.iter().sum();
            for k in 0..=(max_degree - used) {
                let mut e = exp.clone();
                e[v] = k;
                next.push(e);
            }
        }
        out = next;
    }
    out
}

fn eval_at_point(f: &Poly, point: &[Rat]) -> Poly {
    let mut out = Poly::zero(1);
    for (exp, c) in f.terms() {
        let mut v = c.clone();
        let mut hdeg = exp[point.len()];
        for (p, &e) in point.iter().zip(exp) {
            if e > 0 {
                v = v * p.pow(e as i32);
                hdeg += e;
            }
        }
        out.add_term(vec![hdeg], v);
    }
    out
}

/// Sweeps the annihilation certificate of one fixed point over every
/// bracket-variable monomial of total degree at most `max_degree` and every
/// xi-positive cocircuit. Per key `q^(offset + nu)` the probe monomial
/// contributes the same diagonal scalar to both sides of the descent
/// identity, so the sweep expands the Verma character once, forms the
/// probe-free coefficient difference per key, and checks each probe against
/// the keys where its scalar is nonzero. Returns the number of checks and
/// the witnesses of any failures.
pub fn annihilation_sweep(
    arr: &Arrangement,
    tf: &TraceFunctional,
    bound: &Rat,
    max_degree: u32,
) -> Result<(usize, Vec<String>)> {
    let nvars = arr.n() + 1;
    let chi = verma_character(arr, tf, bound)?;
    let points: BTreeMap<Vec<i64>, Vec<Rat>> = chi
        .terms()
        .map(|(k, _)| {
            (k.clone(), k.iter().zip(chi.offset()).map(|(&x, o)| o + rat(x)).collect())
        })
        .collect();
    let probes = degree_monomials(arr.n(), max_degree);
    let mut checks = 0usize;
    let mut witnesses = Vec::new();
    for c in arr.positive_cocircuits() {
        let lam_emb = &c.embedded;
        let neg_emb: Vec<i64> = lam_emb.iter().map(|x| -x).collect();
        let down = bracket_vector(nvars, lam_emb);
        let up = bracket_vector(nvars, &neg_emb);
        // Keys of either side within the common completeness region: the
        // character's support plus its translate by the cocircuit.
        let mut keys: std::collections::BTreeSet<Vec<i64>> =
            points.keys().cloned().collect();
        for k in points.keys() {
            let shifted: Vec<i64> = k.iter().zip(lam_emb).map(|(a, b)| a + b).collect();
            if chi.key_pairing(&shifted) <= *chi.bound() {
                keys.insert(shifted);
            }
        }
        // delta = (coefficient of the lowering side) - (coefficient of the
        // raising side shifted by q^lam), with the probe factored out.
        let mut deltas: Vec<(&Vec<i64>, Poly)> = Vec::new();
        for key in &keys {
            let point: Vec<Rat> =
                key.iter().zip(chi.offset()).map(|(&x, o)| o + rat(x)).collect();
            let lhs = chi.coeff(key).mul(&eval_at_point(&down, &point));
            let prev: Vec<i64> = key.iter().zip(lam_emb).map(|(a, b)| a - b).collect();
            let rhs = match points.get(&prev) {
                Some(p) => chi.coeff(&prev).mul(&eval_at_point(&up, p)),
                None => Poly::zero(1),
            };
            let delta = lhs.sub(&rhs);
            if !delta.is_zero() {
                deltas.push((key, delta));
            }
        }
        for exp in &probes {
            checks += 1;
            let hit = deltas.iter().find(|(key, _)| {
                exp.iter().zip(key.iter().zip(chi.offset())).all(|(&e, (&x, o))| {
                    e == 0 || !(o + rat(x)).is_zero()
                })
            });
            if let Some((key, _)) = hit {
                witnesses.push(format!(
                    "r({:?}) does not annihilate the trace of {exp:?} at basis {:?} \
                     (key {key:?})",
                    c.covector,
                    tf.basis()
                ));
            }
        }
    }
    Ok((checks, witnesses))
}

/// The three-way rank comparison at a central parameter.
#[derive(Debug, Clone)]
pub struct RankReport {
    /// Groebner dimension of the `q = 0` fiber at `(c, h = 1)`.
    pub upper: usize,
    /// Number of lattice bases of the arrangement.
    pub fixed_points: usize,
    /// Number of distinct cosets of the fixed-point weights modulo the
    /// embedded weight lattice.
    pub lower: usize,
    /// True when all three agree.
    pub pass: bool,
}

fn same_coset(arr: &Arrangement, w1: &[Rat], w2: &[Rat]) -> bool {
    let mut diff = Vec::with_capacity(w1.len());
    for (a, b) in w1.iter().zip(w2) {
        let d = a - b;
        if !d.is_integer() {
            return false;
        }
        diff.push(
            i64::try_from(d.numer().clone()).expect("coset difference exceeds machine range"),
        );
    }
    solve_integer(arr.gamma(), &diff).is_some()
}

/// Computes the rank certificate at an explicit central parameter. The
/// report does not retry: a degenerate parameter shows up as `pass = false`
/// (or as a non-zero-dimensional fiber error).
pub fn rank_certificate(arr: &Arrangement, values: &[Rat]) -> Result<RankReport> {
    let n = arr.n();
    let mut ideal: Vec<Poly> = b_algebra_presentation(arr)
        .iter()
        .map(|g| g.set_hbar(&Rat::one()).truncate_vars(n))
        .collect();
    for (th, v) in arr.kernel_basis().iter().zip(values) {
        let mut form = Poly::constant(n, -v.clone());
        for (i, &t) in th.iter().enumerate() {
            if t != 0 {
                form = form.add(&Poly::var(n, i).scale(&rat(t)));
            }
        }
        ideal.push(form);
    }
    let gb = GroebnerBasis::new(&ideal);
    let upper = gb.quotient_dimension().ok_or_else(|| {
        Error::NonGenericParameter("the central fiber is not zero-dimensional".into())
    })?;
    let bases = arr.bases();
    let weights: Vec<Vec<Rat>> = bases
        .iter()
        .map(|b| fixed_point_weight(arr, b, values))
        .collect::<Result<_>>()?;
    let mut reps: Vec<&Vec<Rat>> = Vec::new();
    for w in &weights {
        if !reps.iter().any(|r| same_coset(arr, r, w)) {
            reps.push(w);
        }
    }
    let lower = reps.len();
    let fixed_points = bases.len();
    Ok(RankReport { upper, fixed_points, lower, pass: upper == fixed_points && lower == fixed_points })
}

/// Retries the rank certificate on freshly sampled central parameters until
/// it passes, up to five attempts; returns the last report otherwise.
pub fn rank_certificate_seeded<R: Rng>(arr: &Arrangement, rng: &mut R) -> Result<RankReport> {
    let k = arr.n() - arr.d();
    let mut last: Option<RankReport> = None;
    let mut last_err: Option<Error> = None;
    for _ in 0..5 {
        let values = generic_central_values(k, rng);
        match rank_certificate(arr, &values) {
            Ok(report) => {
                if report.pass {
                    return Ok(report);
                }
                last = Some(report);
            }
            Err(e) => last_err = Some(e),
        }
    }
    match (last, last_err) {
        (Some(report), _) => Ok(report),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("five attempts produce a report or an error"),
    }
}

/// The affine structure report for fixed-point weights.
#[derive(Debug, Clone)]
pub struct AppendixReport {
    /// Number of fixed points checked.
    pub fixed_points: usize,
    /// Extra samples landed exactly on the affine fit.
    pub affine_ok: bool,
    /// All pairwise linear parts differ.
    pub rho_nonzero: bool,
    /// The sign with which the half-sum constants validate.
    pub chi_sign: i64,
    /// Overall pass flag.
    pub pass: bool,
}

/// Checks the affine structure of `c -> w^c_x`: fits the affine map from
/// central values to vacuum weights per fixed point, verifies the fit on
/// extra samples, demands pairwise distinct linear parts, and matches the
/// constant parts against the half-sums of positivized tangent weights at
/// the symmetric parameter (either global sign accepted).
pub fn appendix_check(arr: &Arrangement) -> Result<AppendixReport> {
    let n = arr.n();
    let k = n - arr.d();
    let bases = arr.bases();
    let kernel = arr.kernel_basis();

    // Sample parameters: the origin and unit values for the exact fit, plus
    // two fixed extra points for verification.
    let mut samples: Vec<Vec<Rat>> = vec![vec![Rat::zero(); k]];
    for j in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[j] = Rat::one();
        samples.push(e);
    }
    samples.push((0..k).map(|j| rat(2 * j as i64 + 3)).collect());
    samples.push((0..k).map(|j| crate::exact::poly::ratio(1, j as i64 + 2)).collect());

    let mut weights: Vec<Vec<Vec<Rat>>> = Vec::new();
    for basis in &bases {
        let per: Vec<Vec<Rat>> = samples
            .iter()
            .map(|t| fixed_point_weight(arr, basis, t))
            .collect::<Result<_>>()?;
        weights.push(per);
    }

    // Affine fit per fixed point: column j of L is w(e_j) - w(0), the
    // constant part is w(0).
    let mut lin_parts: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut const_parts: Vec<Vec<Rat>> = Vec::new();
    let mut affine_ok = true;
    for per in &weights {
        let b = per[0].clone();
        let cols: Vec<Vec<Rat>> = (0..k)
            .map(|j| per[j + 1].iter().zip(&b).map(|(w, c)| w - c).collect())
            .collect();
        for (s, t) in samples.iter().enumerate().skip(k + 1) {
            let predicted: Vec<Rat> = (0..n)
                .map(|i| {
                    let mut v = b[i].clone();
                    for (j, col) in cols.iter().enumerate() {
                        v += &col[i] * &t[j];
                    }
                    v
                })
                .collect();
            if predicted != per[s] {
                affine_ok = false;
            }
        }
        lin_parts.push(cols);
        const_parts.push(b);
    }

    // Pairwise distinct linear parts.
    let mut rho_nonzero = true;
    for x in 0..bases.len() {
        for y in x + 1..bases.len() {
            if lin_parts[x] == lin_parts[y] {
                rho_nonzero = false;
            }
        }
    }

    // Half-sums of positivized tangent weights.
    let mut chis: Vec<Vec<Rat>> = Vec::new();
    for basis in &bases {
        let duals = arr.dual_basis_weights(basis)?;
        let mut chi = vec![Rat::zero(); n];
        for w in &duals {
            let sign = if arr.xi_pairing(w) > 0 { 1 } else { -1 };
            for (i, &e) in arr.embed(w).iter().enumerate() {
                chi[i] += rat(sign * e) / rat(2);
            }
        }
        chis.push(chi);
    }

    // The symmetric parameter: values of the lift (1/2, ..., 1/2).
    let t_sigma: Vec<Rat> = kernel
        .iter()
        .map(|th| th.iter().map(|&t| rat(t) / rat(2)).fold(Rat::zero(), |a, b| a + b))
        .collect();

    let mut chi_sign = 0i64;
    for sign in [1i64, -1] {
        let mut ok = true;
        'pairs: for x in 0..bases.len() {
            for y in 0..bases.len() {
                for i in 0..n {
                    let mut lhs = &const_parts[x][i] - &const_parts[y][i];
                    for j in 0..k {
                        lhs -= (&lin_parts[x][j][i] - &lin_parts[y][j][i]) * &t_sigma[j];
                    }
                    let rhs = (&chis[x][i] - &chis[y][i]) * rat(sign);
                    if lhs != rhs {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        if ok {
            chi_sign = sign;
            break;
        }
    }

    if !affine_ok {
        return Err(Error::FitFailure("extra samples fall off the affine fit".into()));
    }
    if chi_sign == 0 {
        return Err(Error::FitFailure(
            "constant parts do not match the half-sum differences for either sign".into(),
        ));
    }
    let pass = affine_ok && rho_nonzero && chi_sign != 0;
    Ok(AppendixReport { fixed_points: bases.len(), affine_ok, rho_nonzero, chi_sign, pass })
}
