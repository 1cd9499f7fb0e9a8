//! The quantized algebra attached to an arrangement: a weight-graded ring
//! generated by lattice monomials `m^lam` over the polynomial coefficient
//! ring in `a_1, ..., a_n, h`.
//!
//! Elements are sums of left-normal terms `m^lam * f(a, h)` keyed by the
//! intrinsic weight `lam`. The product is determined by two rules:
//!
//! - moving a coefficient past a monomial shifts it:
//!   `f(a) m^lam = m^lam f(a + <lam, -> h)`, with `<lam, ->` the embedded
//!   weight (pairings with the rows);
//! - monomials compose with bracket corrections supported on the
//!   coordinates where the two weights' embeddings carry opposite signs:
//!   `m^lam m^mu = L m^(lam+mu) R` with
//!   `L = prod_(lam_i mu_i < 0, |lam_i| <= |mu_i|) [a_i]^(lam_i)` and
//!   `R = prod_(lam_i mu_i < 0, |lam_i| > |mu_i|) [a_i]^(-mu_i)`.
//!
//! Here `[a_i]^k` is the bracket of [`crate::exact::bracket_power`]. For a
//! unimodular arrangement all embedded cocircuit entries lie in {-1, 0, 1},
//! so products of cocircuit monomials stay small.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};
use rand::Rng;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exact::poly::{rat, ratio, Poly, Rat};
use crate::exact::{bracket_power, bracket_vector, shift_poly};
use crate::groebner::GroebnerBasis;
use crate::lin::solve_rational;

/// A weight-graded algebra element in left-normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AElement {
    d: usize,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Poly>,
}

impl AElement {
    /// The zero element for an arrangement with `n` rows in rank `d`.
    pub fn zero(arr: &Arrangement) -> Self {
        AElement { d: arr.d(), nvars: arr.n() + 1, terms: BTreeMap::new() }
    }

    /// The unit element.
    pub fn one(arr: &Arrangement) -> Self {
        AElement::from_poly(arr, Poly::one(arr.n() + 1))
    }

    /// A weight-zero element given by a coefficient polynomial in
    /// `a_1, ..., a_n, h`.
    pub fn from_poly(arr: &Arrangement, f: Poly) -> Self {
        AElement::monomial(arr, &vec![0; arr.d()], f)
    }

    /// The term `m^lam * f` for an intrinsic weight `lam`.
    pub fn monomial(arr: &Arrangement, lam: &[i64], f: Poly) -> Self {
        assert_eq!(lam.len(), arr.d(), "weight arity mismatch");
        assert_eq!(f.nvars(), arr.n() + 1, "coefficient arity mismatch");
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(lam.to_vec(), f);
        }
        AElement { d: arr.d(), nvars: arr.n() + 1, terms }
    }

    /// The generator `a_i` (zero-based index).
    pub fn a_var(arr: &Arrangement, i: usize) -> Self {
        AElement::from_poly(arr, Poly::var(arr.n() + 1, i))
    }

    /// The central parameter `h`.
    pub fn hbar(arr: &Arrangement) -> Self {
        AElement::from_poly(arr, Poly::hbar(arr.n() + 1))
    }

    /// Term iterator keyed by intrinsic weight.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Poly)> {
        self.terms.iter()
    }

    /// The coefficient at a weight (zero if absent).
    pub fn weight_component(&self, lam: &[i64]) -> Poly {
        self.terms.get(lam).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// True when no term is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds a term in place.
    pub fn add_term(&mut self, lam: Vec<i64>, f: Poly) {
        assert_eq!(lam.len(), self.d);
        assert_eq!(f.nvars(), self.nvars);
        if f.is_zero() {
            return;
        }
        match self.terms.entry(lam) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&f);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Sum.
    pub fn add(&self, other: &AElement) -> AElement {
        assert_eq!(self.d, other.d);
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (lam, f) in &other.terms {
            out.add_term(lam.clone(), f.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &AElement) -> AElement {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> AElement {
        AElement {
            d: self.d,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(l, f)| (l.clone(), f.neg())).collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rat) -> AElement {
        let mut out = AElement { d: self.d, nvars: self.nvars, terms: BTreeMap::new() };
        for (l, f) in &self.terms {
            out.add_term(l.clone(), f.scale(c));
        }
        out
    }
}

impl fmt::Display for AElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut pieces = Vec::new();
        for (lam, c) in &self.terms {
            if lam.iter().all(|&x| x == 0) {
                pieces.push(format!("({})", c));
            } else {
                pieces.push(format!("m^{:?}*({})", lam, c));
            }
        }
        write!(f, "{}", pieces.join(" + "))
    }
}

/// The product of two algebra elements.
pub fn multiply(arr: &Arrangement, x: &AElement, y: &AElement) -> AElement {
    let nvars = arr.n() + 1;
    let mut out = AElement::zero(arr);
    for (lam, f) in x.terms() {
        let lam_emb = arr.embed(lam);
        for (mu, g) in y.terms() {
            let mu_emb = arr.embed(mu);
            let total: Vec<i64> = lam.iter().zip(mu).map(|(a, b)| a + b).collect();
            let total_emb = arr.embed(&total);
            // Bracket corrections on sign-clashing coordinates.
            let mut left = Poly::one(nvars);
            let mut right = Poly::one(nvars);
            for i in 0..arr.n() {
                let (li, mi) = (lam_emb[i], mu_emb[i]);
                if li * mi < 0 {
                    if li.abs() <= mi.abs() {
                        left = left.mul(&bracket_power(nvars, i, li));
                    } else {
                        right = right.mul(&bracket_power(nvars, i, -mi));
                    }
                }
            }
            let coeff = shift_poly(&left, &total_emb)
                .mul(&right)
                .mul(&shift_poly(f, &mu_emb))
                .mul(g);
            out.add_term(total, coeff);
        }
    }
    out
}

/// The commutator `[x, y] = xy - yx`.
pub fn commutator(arr: &Arrangement, x: &AElement, y: &AElement) -> AElement {
    multiply(arr, x, y).sub(&multiply(arr, y, x))
}

/// Raises an element to a non-negative power.
pub fn power(arr: &Arrangement, x: &AElement, k: u32) -> AElement {
    let mut out = AElement::one(arr);
    for _ in 0..k {
        out = multiply(arr, &out, x);
    }
    out
}

/// The degree of a homogeneous element in the grading where each unit of an
/// embedded monomial weight counts 1 and each coefficient variable (the
/// `a_i` and `h`) counts 2. Returns `None` on inhomogeneous or zero input.
pub fn nat_degree(arr: &Arrangement, x: &AElement) -> Option<u32> {
    let mut deg = None;
    for (lam, f) in x.terms() {
        if !f.is_homogeneous() {
            return None;
        }
        let base: u32 = arr.embed(lam).iter().map(|v| v.unsigned_abs() as u32).sum();
        let d = base + f.graded_degree()?;
        match deg {
            None => deg = Some(d),
            Some(e) if e == d => {}
            _ => return None,
        }
    }
    deg
}

/// Ideal generators of the q = 0 fiber: one bracket product `[a]^lam` per
/// xi-positive cocircuit, in the polynomial ring on `a_1, ..., a_n, h`.
/// These are the images of the products of opposite lattice monomials that
/// raise out of and lower back to a vacuum vector.
pub fn b_algebra_presentation(arr: &Arrangement) -> Vec<Poly> {
    let nvars = arr.n() + 1;
    arr.positive_cocircuits().iter().map(|c| bracket_vector(nvars, &c.embedded)).collect()
}

/// The weight functional of a fixed point: the vacuum eigenvalues of
/// `a_1, ..., a_n` (in units of `h`) on the lowest-weight module attached
/// to a basis, at the central parameter given by `values` on the kernel
/// basis of the arrangement.
///
/// A basis coordinate takes vacuum value 0 when its dual basis weight pairs
/// positively with `xi` and -1 when it pairs negatively (the module then
/// grows along the flipped direction). The remaining coordinates solve the
/// central constraints `sum_i theta_i a_i = value`.
pub fn fixed_point_weight(
    arr: &Arrangement,
    basis: &[usize],
    values: &[Rat],
) -> Result<Vec<Rat>> {
    let kernel = arr.kernel_basis();
    assert_eq!(values.len(), kernel.len(), "one value per kernel basis vector");
    let duals = arr.dual_basis_weights(basis)?;
    let mut assigned: Vec<Option<Rat>> = vec![None; arr.n()];
    for (j, &b) in basis.iter().enumerate() {
        let sign = arr.xi_pairing(&duals[j]);
        assert!(sign != 0, "dual basis weight pairs to zero against a generic xi");
        assigned[b] = Some(if sign > 0 { Rat::zero() } else { rat(-1) });
    }
    let free: Vec<usize> = (0..arr.n()).filter(|i| assigned[*i].is_none()).collect();
    let mat: Vec<Vec<Rat>> =
        kernel.iter().map(|th| free.iter().map(|&i| rat(th[i])).collect()).collect();
    let rhs: Vec<Rat> = kernel
        .iter()
        .zip(values)
        .map(|(th, v)| {
            let known = th
                .iter()
                .enumerate()
                .filter_map(|(i, &t)| assigned[i].as_ref().map(|w| w * rat(t)))
                .fold(Rat::zero(), |a, b| a + b);
            v - known
        })
        .collect();
    let sol = solve_rational(&mat, &rhs).ok_or_else(|| Error::NotABasis(basis.to_vec()))?;
    let mut w = vec![Rat::zero(); arr.n()];
    for (i, val) in assigned.into_iter().enumerate() {
        if let Some(v) = val {
            w[i] = v;
        }
    }
    for (pos, &i) in free.iter().enumerate() {
        w[i] = sol[pos].clone();
    }
    Ok(w)
}

/// All maximal-ideal points of the q = 0 fiber at `h = 1` and the given
/// central parameter: one weight functional per fixed point.
///
/// Candidate points come from [`fixed_point_weight`] per basis; soundness
/// (each annihilates every ideal generator) is asserted outright, and
/// completeness is certified against the Groebner dimension of the quotient
/// by `{[a]^lam at h=1} + {theta(a) - value}`. A dimension above the basis
/// count, a non-zero-dimensional quotient, or coinciding points signal a
/// degenerate parameter.
pub fn b_algebra_points(arr: &Arrangement, values: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let n = arr.n();
    let bases = arr.bases();
    let mut points: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for b in &bases {
        points.insert(fixed_point_weight(arr, b, values)?);
    }
    let gens = b_algebra_presentation(arr);
    for p in &points {
        let mut vals = p.clone();
        vals.push(Rat::one());
        for g in &gens {
            assert!(g.eval_rat(&vals).is_zero(), "closed-form point fails a generator");
        }
    }
    let mut ideal: Vec<Poly> =
        gens.iter().map(|g| g.set_hbar(&Rat::one()).truncate_vars(n)).collect();
    for (th, v) in arr.kernel_basis().iter().zip(values) {
        let mut f = Poly::constant(n, -v.clone());
        for (i, &t) in th.iter().enumerate() {
            if t != 0 {
                f = f.add(&Poly::var(n, i).scale(&rat(t)));
            }
        }
        ideal.push(f);
    }
    let gb = GroebnerBasis::new(&ideal);
    let dim = gb.quotient_dimension().ok_or_else(|| {
        Error::NonGenericParameter("the q = 0 fiber is not zero-dimensional".into())
    })?;
    if dim > bases.len() {
        return Err(Error::NonGenericParameter(format!(
            "quotient dimension {} exceeds the fixed point count {}",
            dim,
            bases.len()
        )));
    }
    if dim != points.len() {
        return Err(Error::NonGenericParameter(format!(
            "quotient dimension {} does not match {} distinct weight functionals",
            dim,
            points.len()
        )));
    }
    Ok(points.into_iter().collect())
}

/// Samples central parameter values with numerators and denominators
/// bounded by 10^4; genericity holds off a proper closed locus, so retrying
/// a few times on [`Error::NonGenericParameter`] is expected to succeed.
pub fn generic_central_values<R: Rng>(count: usize, rng: &mut R) -> Vec<Rat> {
    (0..count)
        .map(|_| ratio(rng.gen_range(-9999i64..=9999), rng.gen_range(1i64..=9999)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{example_a1, example_rank3, random_arrangement};
    use crate::exact::poly::rat;
    use rand::{Rng, SeedableRng};

    fn a1_generators() -> (Arrangement, AElement, AElement, Poly, Poly, Poly) {
        let arr = example_a1();
        let rp = AElement::monomial(&arr, &[1], Poly::one(3));
        let rm = AElement::monomial(&arr, &[-1], Poly::one(3));
        let a1 = Poly::var(3, 0);
        let a2 = Poly::var(3, 1);
        let h = Poly::hbar(3);
        (arr, rp, rm, a1, a2, h)
    }

    #[test]
    fn a1_defining_relations() {
        let (arr, rp, rm, a1, a2, h) = a1_generators();
        // r+ r- = a1 a2 and r- r+ = (a1 + h)(a2 + h).
        assert_eq!(multiply(&arr, &rp, &rm), AElement::from_poly(&arr, a1.mul(&a2)));
        assert_eq!(
            multiply(&arr, &rm, &rp),
            AElement::from_poly(&arr, a1.add(&h).mul(&a2.add(&h)))
        );
        // [a_i, r+] = h r+ for both i.
        for i in 0..2 {
            let ai = AElement::a_var(&arr, i);
            let c = commutator(&arr, &ai, &rp);
            assert_eq!(c, AElement::monomial(&arr, &[1], h.clone()));
        }
        // [a_i, r-] = -h r-.
        for i in 0..2 {
            let ai = AElement::a_var(&arr, i);
            let c = commutator(&arr, &ai, &rm);
            assert_eq!(c, AElement::monomial(&arr, &[-1], h.neg()));
        }
    }

    #[test]
    fn a1_sl2_dictionary() {
        let (arr, rp, rm, a1, a2, h) = a1_generators();
        // E = r+, F = -r-, h H = a1 + a2 + h.
        let e = rp.clone();
        let f = rm.neg();
        let hh = AElement::from_poly(&arr, a1.add(&a2).add(&h));
        // [E, F] = h * (a1 + a2 + h).
        let lhs = commutator(&arr, &e, &f);
        let rhs = AElement::from_poly(&arr, a1.add(&a2).add(&h).mul(&h));
        assert_eq!(lhs, rhs);
        // [hH, E] = 2h E and [hH, F] = -2h F (with F = -m^(-1) this is
        // +2h m^(-1)).
        assert_eq!(
            commutator(&arr, &hh, &e),
            AElement::monomial(&arr, &[1], h.scale(&rat(2)))
        );
        assert_eq!(
            commutator(&arr, &hh, &f),
            AElement::monomial(&arr, &[-1], h.scale(&rat(2)))
        );
        // The Casimir 2EF + 2FE + H'^2 + h^2 with H' = a1 + a2 + h equals
        // (a1 - a2)^2, the square of the central coordinate.
        let ef = multiply(&arr, &e, &f);
        let fe = multiply(&arr, &f, &e);
        let cas = ef
            .scale(&rat(2))
            .add(&fe.scale(&rat(2)))
            .add(&multiply(&arr, &hh, &hh))
            .add(&AElement::from_poly(&arr, h.mul(&h)));
        let sqrt_c = a1.sub(&a2);
        assert_eq!(cas, AElement::from_poly(&arr, sqrt_c.mul(&sqrt_c)));
        // a1 - a2 is central: it commutes with both ladder monomials.
        let z = AElement::from_poly(&arr, sqrt_c);
        assert!(commutator(&arr, &z, &e).is_zero());
        assert!(commutator(&arr, &z, &f).is_zero());
        // The Casimir is central too.
        assert!(commutator(&arr, &cas, &e).is_zero());
        assert!(commutator(&arr, &cas, &f).is_zero());
    }

    #[test]
    fn weight_zero_pairings_in_rank3() {
        let arr = example_rank3();
        let nvars = arr.n() + 1;
        // For every positive cocircuit lam: m^lam m^(-lam) = [a]^lam and
        // m^(-lam) m^lam = [a]^(-lam).
        for c in arr.positive_cocircuits() {
            let up = AElement::monomial(&arr, &c.covector, Poly::one(nvars));
            let down_w: Vec<i64> = c.covector.iter().map(|x| -x).collect();
            let down = AElement::monomial(&arr, &down_w, Poly::one(nvars));
            let lam_emb = arr.embed(&c.covector);
            assert_eq!(
                multiply(&arr, &up, &down),
                AElement::from_poly(&arr, crate::exact::bracket_vector(nvars, &lam_emb))
            );
            let neg_emb: Vec<i64> = lam_emb.iter().map(|x| -x).collect();
            assert_eq!(
                multiply(&arr, &down, &up),
                AElement::from_poly(&arr, crate::exact::bracket_vector(nvars, &neg_emb))
            );
        }
    }

    #[test]
    fn commutation_with_coordinates() {
        // [a_i, m^lam] = h lam_emb_i m^lam on random arrangements.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let arr = random_arrangement(&mut rng, 6, 3);
            let nvars = arr.n() + 1;
            let lam: Vec<i64> = (0..arr.d()).map(|_| rng.gen_range(-2..=2i64)).collect();
            let emb = arr.embed(&lam);
            let m = AElement::monomial(&arr, &lam, Poly::one(nvars));
            for i in 0..arr.n() {
                let ai = AElement::a_var(&arr, i);
                let c = commutator(&arr, &ai, &m);
                let expect =
                    AElement::monomial(&arr, &lam, Poly::hbar(nvars).scale(&rat(emb[i])));
                assert_eq!(c, expect);
            }
        }
    }

    #[test]
    fn associativity_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for trial in 0..200 {
            let arr = random_arrangement(&mut rng, 5, 2);
            let nvars = arr.n() + 1;
            let rand_elem = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut e = AElement::zero(&arr);
                for _ in 0..2 {
                    let lam: Vec<i64> =
                        (0..arr.d()).map(|_| rng.gen_range(-2..=2i64)).collect();
                    let mut f = Poly::constant(nvars, rat(rng.gen_range(-3..=3i64)));
                    if rng.gen_bool(0.5) {
                        f = f.mul(&Poly::var(nvars, rng.gen_range(0..nvars)));
                    }
                    e.add_term(lam, f);
                }
                e
            };
            let x = rand_elem(&mut rng);
            let y = rand_elem(&mut rng);
            let z = rand_elem(&mut rng);
            let lhs = multiply(&arr, &multiply(&arr, &x, &y), &z);
            let rhs = multiply(&arr, &x, &multiply(&arr, &y, &z));
            assert_eq!(lhs, rhs, "associativity failed at trial {}", trial);
        }
    }

    #[test]
    fn hbar_commutativity_and_degree_additivity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let arr = random_arrangement(&mut rng, 5, 2);
            let nvars = arr.n() + 1;
            let rand_term = |rng: &mut rand_chacha::ChaCha8Rng| {
                let lam: Vec<i64> = (0..arr.d()).map(|_| rng.gen_range(-2..=2i64)).collect();
                let f = Poly::var(nvars, rng.gen_range(0..nvars));
                AElement::monomial(&arr, &lam, f)
            };
            let x = rand_term(&mut rng);
            let y = rand_term(&mut rng);
            // The commutator is divisible by h: every coefficient term
            // carries a positive h power.
            let c = commutator(&arr, &x, &y);
            for (_, f) in c.terms() {
                for (exp, _) in f.terms() {
                    assert!(exp[nvars - 1] >= 1, "commutator term without an h factor");
                }
            }
            // Degrees add on homogeneous elements.
            let (dx, dy) = (nat_degree(&arr, &x), nat_degree(&arr, &y));
            let p = multiply(&arr, &x, &y);
            if let (Some(dx), Some(dy)) = (dx, dy) {
                if !p.is_zero() {
                    assert_eq!(nat_degree(&arr, &p), Some(dx + dy));
                }
            }
        }
    }

    #[test]
    fn b_algebra_generators() {
        let arr = example_a1();
        let gens = b_algebra_presentation(&arr);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0], Poly::var(3, 0).mul(&Poly::var(3, 1)));
        let arr3 = example_rank3();
        assert_eq!(b_algebra_presentation(&arr3).len(), 6);
    }

    #[test]
    fn b_algebra_points_a1() {
        let arr = example_a1();
        // Generic central value: two points of the form (0, s) and (-s, 0).
        let z = ratio(5, 2);
        let pts = b_algebra_points(&arr, &[z]).unwrap();
        assert_eq!(pts.len(), 2);
        let with_zero_first: Vec<&Vec<Rat>> =
            pts.iter().filter(|p| p[0].is_zero()).collect();
        let with_zero_second: Vec<&Vec<Rat>> =
            pts.iter().filter(|p| p[1].is_zero()).collect();
        assert_eq!(with_zero_first.len(), 1);
        assert_eq!(with_zero_second.len(), 1);
        let s = with_zero_first[0][1].clone();
        assert_eq!(with_zero_second[0][0], -s.clone());
        assert!(!s.is_zero());
        // Degenerate central value: the two points collide.
        assert!(matches!(
            b_algebra_points(&arr, &[rat(0)]),
            Err(Error::NonGenericParameter(_))
        ));
    }

    #[test]
    fn b_algebra_points_rank3() {
        let arr = example_rank3();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        let values = generic_central_values(arr.n() - arr.d(), &mut rng);
        let pts = b_algebra_points(&arr, &values).unwrap();
        assert_eq!(pts.len(), arr.bases().len());
    }

    #[test]
    fn distributivity_and_units() {
        let arr = example_rank3();
        let nvars = arr.n() + 1;
        let x = AElement::monomial(&arr, &[1, 0, 1], Poly::var(nvars, 2));
        let y = AElement::monomial(&arr, &[0, -1, 0], Poly::one(nvars));
        let z = AElement::from_poly(&arr, Poly::hbar(nvars));
        let one = AElement::one(&arr);
        assert_eq!(multiply(&arr, &one, &x), x);
        assert_eq!(multiply(&arr, &x, &one), x);
        let lhs = multiply(&arr, &x, &y.add(&z));
        let rhs = multiply(&arr, &x, &y).add(&multiply(&arr, &x, &z));
        assert_eq!(lhs, rhs);
    }
}
