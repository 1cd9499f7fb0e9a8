//! Laurent polynomials in lattice variables `q^mu` with polynomial
//! coefficients.
//!
//! [`LaurentQ`] models the group algebra of a rank-`rank` lattice with
//! coefficients in a commutative [`Poly`] ring: a finite sum
//! `sum_mu f_mu(a, h) q^mu` keyed by integer exponent vectors. It is the
//! commutative backbone for characters, numerators of cone fractions and the
//! scratch ring in which twisted products are expanded.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::exact::poly::{Poly, Rat};

/// A Laurent polynomial over a rank-`rank` lattice with `Poly` coefficients
/// in `cvars` variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LaurentQ {
    rank: usize,
    cvars: usize,
    terms: BTreeMap<Vec<i64>, Poly>,
}

impl LaurentQ {
    /// The zero element.
    pub fn zero(rank: usize, cvars: usize) -> Self {
        LaurentQ { rank, cvars, terms: BTreeMap::new() }
    }

    /// The unit element `q^0`.
    pub fn one(rank: usize, cvars: usize) -> Self {
        LaurentQ::monomial(vec![0; rank], Poly::one(cvars))
    }

    /// A single term `coeff * q^exp`.
    pub fn monomial(exp: Vec<i64>, coeff: Poly) -> Self {
        let rank = exp.len();
        let cvars = coeff.nvars();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentQ { rank, cvars, terms }
    }

    /// Builds from `(exponent, coefficient)` pairs.
    pub fn from_terms<I>(rank: usize, cvars: usize, iter: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, Poly)>,
    {
        let mut out = LaurentQ::zero(rank, cvars);
        for (exp, c) in iter {
            out.add_term(exp, c);
        }
        out
    }

    /// Lattice rank.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coefficient arity.
    pub fn cvars(&self) -> usize {
        self.cvars
    }

    /// Term iterator in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Poly)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at an exponent (zero if absent).
    pub fn coeff(&self, exp: &[i64]) -> Poly {
        self.terms.get(exp).cloned().unwrap_or_else(|| Poly::zero(self.cvars))
    }

    /// Adds `coeff * q^exp` in place.
    pub fn add_term(&mut self, exp: Vec<i64>, coeff: Poly) {
        assert_eq!(exp.len(), self.rank, "exponent arity mismatch");
        assert_eq!(coeff.nvars(), self.cvars, "coefficient arity mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Sum.
    pub fn add(&self, other: &LaurentQ) -> LaurentQ {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.cvars, other.cvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &LaurentQ) -> LaurentQ {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> LaurentQ {
        LaurentQ {
            rank: self.rank,
            cvars: self.cvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    /// Commutative product.
    pub fn mul(&self, other: &LaurentQ) -> LaurentQ {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.cvars, other.cvars);
        let mut out = LaurentQ::zero(self.rank, self.cvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca.mul(cb));
            }
        }
        out
    }

    /// Scalar multiple by a coefficient polynomial.
    pub fn scale_poly(&self, c: &Poly) -> LaurentQ {
        let mut out = LaurentQ::zero(self.rank, self.cvars);
        for (e, k) in &self.terms {
            out.add_term(e.clone(), k.mul(c));
        }
        out
    }

    /// Scalar multiple by a rational.
    pub fn scale(&self, c: &Rat) -> LaurentQ {
        if c.is_zero() {
            return LaurentQ::zero(self.rank, self.cvars);
        }
        LaurentQ {
            rank: self.rank,
            cvars: self.cvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.scale(c))).collect(),
        }
    }

    /// Multiplies every exponent key by `q^delta`.
    pub fn shift_exponents(&self, delta: &[i64]) -> LaurentQ {
        assert_eq!(delta.len(), self.rank);
        LaurentQ {
            rank: self.rank,
            cvars: self.cvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(delta).map(|(x, d)| x + d).collect(), c.clone()))
                .collect(),
        }
    }

    /// Applies an integer matrix to every exponent: `q^mu -> q^(m mu)`.
    /// `matrix` is row-major with `rank` rows and `rank` columns.
    pub fn map_exponents(&self, matrix: &[Vec<i64>]) -> LaurentQ {
        assert_eq!(matrix.len(), self.rank);
        let mut out = LaurentQ::zero(self.rank, self.cvars);
        for (e, c) in &self.terms {
            let img: Vec<i64> = matrix
                .iter()
                .map(|row| row.iter().zip(e).map(|(m, x)| m * x).sum())
                .collect();
            out.add_term(img, c.clone());
        }
        out
    }

    /// Negates every exponent: the lattice inversion `q^mu -> q^(-mu)`.
    pub fn invert_q(&self) -> LaurentQ {
        LaurentQ {
            rank: self.rank,
            cvars: self.cvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    /// Applies a map to every coefficient, dropping resulting zeros.
    pub fn map_coeffs<F: Fn(&Poly) -> Poly>(&self, f: F) -> LaurentQ {
        let mut out = LaurentQ::zero(self.rank, self.cvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Coordinate-wise minimum of the support exponents; zero vector for the
    /// zero element.
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut min = vec![0i64; self.rank];
        let mut first = true;
        for e in self.terms.keys() {
            if first {
                min = e.clone();
                first = false;
            } else {
                for (m, x) in min.iter_mut().zip(e) {
                    if x < m {
                        *m = *x;
                    }
                }
            }
        }
        min
    }

    /// Sum of all coefficients: the evaluation at `q = 1`.
    pub fn sum_coeffs(&self) -> Poly {
        let mut out = Poly::zero(self.cvars);
        for c in self.terms.values() {
            out = out.add(c);
        }
        out
    }

    /// Exact division: `self = quotient * g`.
    ///
    /// Per-coordinate valuations are additive for products over a domain, so
    /// after shifting both operands to non-negative exponents the quotient is
    /// an honest polynomial; divide there and shift back.
    pub fn exact_div(&self, g: &LaurentQ) -> Result<LaurentQ> {
        assert_eq!(self.rank, g.rank);
        assert_eq!(self.cvars, g.cvars);
        if g.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(LaurentQ::zero(self.rank, self.cvars));
        }
        let min_f = self.min_exponents();
        let min_g = g.min_exponents();
        let fpoly = self.to_poly_shifted(&min_f);
        let gpoly = g.to_poly_shifted(&min_g);
        let q = fpoly.exact_div(&gpoly)?;
        let delta: Vec<i64> = min_f.iter().zip(&min_g).map(|(a, b)| a - b).collect();
        Ok(LaurentQ::from_flat_poly(self.rank, self.cvars, &q).shift_exponents(&delta))
    }

    /// Flattens into a polynomial in `rank + cvars` variables after shifting
    /// exponents down by `base` (which must make them non-negative).
    fn to_poly_shifted(&self, base: &[i64]) -> Poly {
        let total = self.rank + self.cvars;
        let mut out = Poly::zero(total);
        for (e, c) in &self.terms {
            for (ce, cc) in c.terms() {
                let mut exp = Vec::with_capacity(total);
                for (x, b) in e.iter().zip(base) {
                    let v = x - b;
                    assert!(v >= 0, "shift must clear negative exponents");
                    exp.push(v as u32);
                }
                exp.extend(ce.iter().copied());
                out.add_term(exp, cc.clone());
            }
        }
        out
    }

    /// Inverse of [`LaurentQ::to_poly_shifted`] with zero base.
    fn from_flat_poly(rank: usize, cvars: usize, p: &Poly) -> LaurentQ {
        assert_eq!(p.nvars(), rank + cvars);
        let mut out = LaurentQ::zero(rank, cvars);
        for (exp, c) in p.terms() {
            let key: Vec<i64> = exp[..rank].iter().map(|&x| x as i64).collect();
            let mut coeff = Poly::zero(cvars);
            coeff.add_term(exp[rank..].to_vec(), c.clone());
            out.add_term(key, coeff);
        }
        out
    }

    /// Renders with explicit names for lattice variables and coefficient
    /// variables.
    pub fn to_string_with(&self, qnames: &[&str], cnames: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces = Vec::new();
        for (e, c) in &self.terms {
            let mut factors = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                if x == 1 {
                    factors.push(qnames[i].to_string());
                } else if x != 0 {
                    factors.push(format!("{}^{}", qnames[i], x));
                }
            }
            let qpart = factors.join("*");
            let cpart = c.to_string_with(cnames);
            let piece = if qpart.is_empty() {
                cpart
            } else if c.is_one() {
                qpart
            } else if c.len() == 1 {
                format!("{}*{}", cpart, qpart)
            } else {
                format!("({})*{}", cpart, qpart)
            };
            pieces.push(piece);
        }
        pieces.join(" + ")
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qnames: Vec<String> = (1..=self.rank).map(|i| format!("q{}", i)).collect();
        let qrefs: Vec<&str> = qnames.iter().map(|s| s.as_str()).collect();
        let cnames = Poly::default_names(self.cvars);
        let crefs: Vec<&str> = cnames.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.to_string_with(&qrefs, &crefs))
    }
}

/// The binomial `1 - q^exp` with trivial coefficient ring arity `cvars`.
pub fn one_minus_q(exp: &[i64], cvars: usize) -> LaurentQ {
    let rank = exp.len();
    let mut out = LaurentQ::one(rank, cvars);
    out.add_term(exp.to_vec(), Poly::one(cvars).neg());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::rat;

    fn q(exp: &[i64]) -> LaurentQ {
        LaurentQ::monomial(exp.to_vec(), Poly::one(1))
    }

    #[test]
    fn ring_identities() {
        let x = q(&[1, 0]).add(&q(&[0, -2]).scale(&rat(3)));
        let y = q(&[-1, 1]).sub(&LaurentQ::one(2, 1));
        assert_eq!(x.mul(&y), y.mul(&x));
        assert_eq!(x.mul(&y.add(&x)), x.mul(&y).add(&x.mul(&x)));
    }

    #[test]
    fn exact_division_round_trip() {
        let f = one_minus_q(&[2, -1], 1);
        let g = q(&[1, 1]).add(&q(&[-3, 0]).scale(&rat(5))).add(&LaurentQ::one(2, 1));
        let prod = f.mul(&g);
        assert_eq!(prod.exact_div(&f).unwrap(), g);
        assert_eq!(prod.exact_div(&g).unwrap(), f);
        assert!(prod.add(&LaurentQ::one(2, 1)).exact_div(&f).is_err());
    }

    #[test]
    fn geometric_telescopes() {
        // (1 - q^lam)(1 + q^lam + q^2lam) = 1 - q^3lam.
        let lam = [1i64, -2];
        let partial = LaurentQ::one(2, 1).add(&q(&lam)).add(&q(&[2, -4]));
        assert_eq!(one_minus_q(&lam, 1).mul(&partial), one_minus_q(&[3, -6], 1));
    }

    #[test]
    fn exponent_maps() {
        let x = q(&[2, -1]).add(&q(&[0, 3]));
        let m = vec![vec![0, 1], vec![1, 0]];
        let swapped = x.map_exponents(&m);
        assert_eq!(swapped, q(&[-1, 2]).add(&q(&[3, 0])));
        assert_eq!(x.invert_q().invert_q(), x);
        assert_eq!(x.min_exponents(), vec![0, -1]);
    }

    #[test]
    fn q_one_evaluation() {
        let x = q(&[5, 0]).add(&q(&[-2, 1]).scale(&rat(2)));
        assert_eq!(x.sum_coeffs(), Poly::constant(1, rat(3)));
    }
}
