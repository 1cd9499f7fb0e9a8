//! A twisted group ring used as scratch space for denominator-free
//! computations: finite sums `sum_tau q^tau f_tau(a, h)` with `tau` ranging
//! over the row lattice `Z^n`, kept in left-normal form (all `q` powers to
//! the left of all coefficients).
//!
//! The twist is the same shift that governs the weight-graded algebra:
//! `f(a) q^tau = q^tau f(a + tau h)`, so
//! `(q^sigma f)(q^tau g) = q^(sigma+tau) f_tau g`.
//!
//! The ring supports exact one-sided division by `1 - q^lam`, which is the
//! engine behind rewriting across cone denominators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::poly::{Poly, Rat};
use crate::exact::shift_poly;

/// A left-normal twisted Laurent polynomial over `Z^n` with coefficients in
/// the polynomial ring on `a_1, ..., a_n, h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewPoly {
    qvars: usize,
    terms: BTreeMap<Vec<i64>, Poly>,
}

impl SkewPoly {
    /// The zero element with `qvars` lattice coordinates.
    pub fn zero(qvars: usize) -> Self {
        SkewPoly { qvars, terms: BTreeMap::new() }
    }

    /// The unit element.
    pub fn one(qvars: usize) -> Self {
        SkewPoly::from_poly(qvars, Poly::one(qvars + 1))
    }

    /// A coefficient polynomial placed at `q^0`.
    pub fn from_poly(qvars: usize, f: Poly) -> Self {
        SkewPoly::monomial(&vec![0; qvars], f)
    }

    /// The term `q^tau * f`.
    pub fn monomial(tau: &[i64], f: Poly) -> Self {
        assert_eq!(f.nvars(), tau.len() + 1, "coefficient arity mismatch");
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(tau.to_vec(), f);
        }
        SkewPoly { qvars: tau.len(), terms }
    }

    /// Number of lattice coordinates.
    pub fn qvars(&self) -> usize {
        self.qvars
    }

    /// Term iterator.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Poly)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no term is stored.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the element is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient at `q^tau` (zero if absent).
    pub fn coeff(&self, tau: &[i64]) -> Poly {
        self.terms.get(tau).cloned().unwrap_or_else(|| Poly::zero(self.qvars + 1))
    }

    /// Adds a term in place.
    pub fn add_term(&mut self, tau: Vec<i64>, f: Poly) {
        assert_eq!(tau.len(), self.qvars);
        if f.is_zero() {
            return;
        }
        match self.terms.entry(tau) {
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
    pub fn add(&self, other: &SkewPoly) -> SkewPoly {
        assert_eq!(self.qvars, other.qvars);
        let mut out = self.clone();
        for (tau, f) in &other.terms {
            out.add_term(tau.clone(), f.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &SkewPoly) -> SkewPoly {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> SkewPoly {
        SkewPoly {
            qvars: self.qvars,
            terms: self.terms.iter().map(|(t, f)| (t.clone(), f.neg())).collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rat) -> SkewPoly {
        let mut out = SkewPoly::zero(self.qvars);
        for (t, f) in &self.terms {
            out.add_term(t.clone(), f.scale(c));
        }
        out
    }

    /// The twisted product.
    pub fn mul(&self, other: &SkewPoly) -> SkewPoly {
        assert_eq!(self.qvars, other.qvars);
        let mut out = SkewPoly::zero(self.qvars);
        for (sigma, f) in &self.terms {
            for (tau, g) in &other.terms {
                let key: Vec<i64> = sigma.iter().zip(tau).map(|(a, b)| a + b).collect();
                out.add_term(key, shift_poly(f, tau).mul(g));
            }
        }
        out
    }

    /// Right multiplication by a coefficient polynomial.
    pub fn mul_poly(&self, g: &Poly) -> SkewPoly {
        let mut out = SkewPoly::zero(self.qvars);
        for (t, f) in &self.terms {
            out.add_term(t.clone(), f.mul(g));
        }
        out
    }

    /// Non-negative power.
    pub fn pow(&self, k: u32) -> SkewPoly {
        let mut out = SkewPoly::one(self.qvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut pieces = Vec::new();
        for (tau, c) in &self.terms {
            if tau.iter().all(|&x| x == 0) {
                pieces.push(format!("({})", c));
            } else {
                pieces.push(format!("q^{:?}*({})", tau, c));
            }
        }
        write!(f, "{}", pieces.join(" + "))
    }
}

/// The element `1 - q^lam`.
pub fn one_minus_q_skew(lam: &[i64]) -> SkewPoly {
    let qvars = lam.len();
    let mut out = SkewPoly::one(qvars);
    out.add_term(lam.to_vec(), Poly::one(qvars + 1).neg());
    out
}

/// Exact right division: finds `g` with `g * (1 - q^lam) = p`.
///
/// The quotient is built by an ascending recurrence along `lam`-chains:
/// comparing coefficients of `g - (g q^lam)` with `p` at the key `sigma`
/// gives `g_sigma = p_sigma + shift(g_(sigma - lam), lam)`. Keys are
/// processed in increasing order of `<sigma, lam>`, which strictly increases
/// along each chain; a quotient coefficient surviving past the top of `p`'s
/// support can never cancel again, so divisibility fails.
pub fn right_divide(p: &SkewPoly, lam: &[i64]) -> Result<SkewPoly> {
    assert_eq!(lam.len(), p.qvars());
    assert!(lam.iter().any(|&x| x != 0), "division by zero element");
    if p.is_zero() {
        return Ok(SkewPoly::zero(p.qvars()));
    }
    let dot = |v: &[i64]| -> i64 { v.iter().zip(lam).map(|(a, b)| a * b).sum() };
    let step = dot(lam);
    let max_dot = p.terms().map(|(t, _)| dot(t)).max().unwrap();
    let mut work: BTreeSet<(i64, Vec<i64>)> =
        p.terms().map(|(t, _)| (dot(t), t.clone())).collect();
    let mut g = SkewPoly::zero(p.qvars());
    while let Some((d, sigma)) = work.pop_first() {
        let prev: Vec<i64> = sigma.iter().zip(lam).map(|(a, b)| a - b).collect();
        let coeff = p.coeff(&sigma).add(&shift_poly(&g.coeff(&prev), lam));
        if coeff.is_zero() {
            continue;
        }
        if d > max_dot {
            return Err(Error::NotDivisible(format!(
                "remainder survives at q^{:?} past the dividend support",
                sigma
            )));
        }
        let next: Vec<i64> = sigma.iter().zip(lam).map(|(a, b)| a + b).collect();
        work.insert((d + step, next));
        g.add_term(sigma, coeff);
    }
    Ok(g)
}

/// Iterated exact right division by `(1 - q^lam)^k`.
pub fn right_divide_pow(p: &SkewPoly, lam: &[i64], k: u32) -> Result<SkewPoly> {
    let mut out = p.clone();
    for _ in 0..k {
        out = right_divide(&out, lam)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::{rat, ratio};
    use rand::{Rng, SeedableRng};

    fn rand_skew(rng: &mut rand_chacha::ChaCha8Rng, qvars: usize) -> SkewPoly {
        let nvars = qvars + 1;
        let mut e = SkewPoly::zero(qvars);
        for _ in 0..2 {
            let tau: Vec<i64> = (0..qvars).map(|_| rng.gen_range(-2..=2i64)).collect();
            let mut f = Poly::constant(nvars, rat(rng.gen_range(-3..=3i64)));
            if rng.gen_bool(0.6) {
                f = f.mul(&Poly::var(nvars, rng.gen_range(0..nvars)));
            }
            e.add_term(tau, f);
        }
        e
    }

    #[test]
    fn move_past_rule() {
        // f * q^tau = q^tau * f_tau.
        let f = Poly::var(3, 0).add(&Poly::var(3, 1).scale(&ratio(1, 2)));
        let tau = vec![1, -2];
        let lhs = SkewPoly::from_poly(2, f.clone()).mul(&SkewPoly::monomial(&tau, Poly::one(3)));
        let rhs = SkewPoly::monomial(&tau, shift_poly(&f, &tau));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn associativity_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let x = rand_skew(&mut rng, 2);
            let y = rand_skew(&mut rng, 2);
            let z = rand_skew(&mut rng, 2);
            assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        }
    }

    #[test]
    fn division_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let g = rand_skew(&mut rng, 2);
            let lam: Vec<i64> = loop {
                let l: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2i64)).collect();
                if l.iter().any(|&x| x != 0) {
                    break l;
                }
            };
            let p = g.mul(&one_minus_q_skew(&lam));
            let back = right_divide(&p, &lam).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn division_detects_failure() {
        // 1 is not right-divisible by 1 - q^lam.
        let p = SkewPoly::one(2);
        assert!(matches!(right_divide(&p, &[1, 0]), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn degree_one_commutator_closed_form() {
        // For a degree-one coefficient x with shift constant c = h <lam, x>,
        //   [x, (1 - q^lam)^N] = -N c q^lam (1 - q^lam)^(N-1).
        let lam = vec![2, -1];
        let x = Poly::var(3, 0).scale(&rat(3)).add(&Poly::var(3, 1).scale(&rat(5)));
        // c = h * (2*3 + (-1)*5) = h.
        let c = Poly::hbar(3);
        for n in 1..=4u32 {
            let xs = SkewPoly::from_poly(2, x.clone());
            let omq = one_minus_q_skew(&lam);
            let lhs = xs.mul(&omq.pow(n)).sub(&omq.pow(n).mul(&xs));
            let rhs = SkewPoly::monomial(&lam, c.scale(&rat(n as i64)).neg())
                .mul(&omq.pow(n - 1));
            assert_eq!(lhs, rhs);
        }
    }
}
