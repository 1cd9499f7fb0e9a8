//! Exact multivariate polynomials over the rationals.
//!
//! [`Poly`] is a dense-exponent, sparse-term polynomial in `nvars` commuting
//! variables with `BigRational` coefficients. Throughout the crate the last
//! variable of a coefficient ring is the equivariant parameter `h`, and every
//! variable (including `h`) sits in cohomological degree 2, so the graded
//! degree of a monomial is twice its exponent sum.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order,
//! equality and rendering are all deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used everywhere in the crate.
pub type Rat = BigRational;

/// Convenience constructor for an integer scalar.
pub fn rat(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Convenience constructor for a fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational without a trailing `/1`.
pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A polynomial in `nvars` commuting variables over the rationals.
///
/// Zero coefficients are never stored; the zero polynomial has an empty term
/// map. Display names the variables `a1, ..., a{n-1}, h` unless
/// [`Poly::to_string_with`] is given explicit names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    /// The constant polynomial 1.
    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, rat(1))
    }

    /// A constant polynomial.
    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Poly { nvars, terms }
    }

    /// The variable with index `idx`.
    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut exp = vec![0; nvars];
        exp[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, rat(1));
        Poly { nvars, terms }
    }

    /// The equivariant parameter: the last variable.
    pub fn hbar(nvars: usize) -> Self {
        assert!(nvars > 0, "a coefficient ring with h has at least one variable");
        Poly::var(nvars, nvars - 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// repeats and dropping zeros.
    pub fn from_terms<I>(nvars: usize, iter: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Poly::zero(nvars);
        for (exp, c) in iter {
            p.add_term(exp, c);
        }
        p
    }

    /// Number of variables (the last one is `h`).
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Iterates over `(exponent, coefficient)` pairs in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(vec![0; self.nvars].as_slice())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// The coefficient of an exponent vector (zero if absent).
    pub fn coeff(&self, exp: &[u32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant coefficient.
    pub fn constant_coeff(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    /// Adds `c * x^exp` in place.
    pub fn add_term(&mut self, exp: Vec<u32>, c: Rat) {
        assert_eq!(exp.len(), self.nvars, "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable arity mismatch");
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.add_term(exp.clone(), c.clone());
        }
        out
    }

    /// Difference of two polynomials.
    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable arity mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }

    /// Non-negative integer power.
    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Substitutes `images[i]` for variable `i` and expands. All images must
    /// share an arity, which becomes the arity of the result.
    pub fn substitute_all(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image per variable required");
        let out_vars = images.first().map(|p| p.nvars).unwrap_or(0);
        for im in images {
            assert_eq!(im.nvars, out_vars, "images must share an arity");
        }
        let mut out = Poly::zero(out_vars);
        for (exp, c) in &self.terms {
            let mut term = Poly::constant(out_vars, c.clone());
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval_rat(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.nvars, "one value per variable required");
        let mut total = Rat::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term *= &values[i];
                }
            }
            total += term;
        }
        total
    }

    /// The translation `a_i -> a_i + shift_i * h` applied to every non-`h`
    /// variable; `shift` has length `nvars - 1`.
    ///
    /// This is the coefficient shift that moves a polynomial past a lattice
    /// monomial: `f(a) m^lam = m^lam f(a + <lam, ->h)`.
    pub fn shift(&self, shift: &[i64]) -> Poly {
        assert_eq!(shift.len() + 1, self.nvars, "shift arity mismatch");
        let n = self.nvars;
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                if i + 1 == n {
                    Poly::var(n, i)
                } else {
                    Poly::var(n, i).add(&Poly::hbar(n).scale(&rat(shift[i])))
                }
            })
            .collect();
        self.substitute_all(&images)
    }

    /// Sets the last variable (`h`) to a rational constant, keeping the arity.
    pub fn set_hbar(&self, value: &Rat) -> Poly {
        let n = self.nvars;
        let mut images: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        images[n - 1] = Poly::constant(n, value.clone());
        self.substitute_all(&images)
    }

    /// Largest exponent sum over the support, or `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Graded degree: twice the exponent sum (every variable has degree 2).
    pub fn graded_degree(&self) -> Option<u32> {
        self.total_degree().map(|d| 2 * d)
    }

    /// Degree in the non-`h` variables only.
    pub fn avar_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e[..self.nvars - 1].iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// True when all monomials share one exponent sum (zero counts as
    /// homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        let mut sums = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match sums.next() {
            None => true,
            Some(first) => sums.all(|s| s == first),
        }
    }

    /// Leading `(exponent, coefficient)` in lexicographic order.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.last_key_value()
    }

    /// Exact division: returns `q` with `self = q * g`, or
    /// [`Error::NotDivisible`] when the remainder is non-zero.
    pub fn exact_div(&self, g: &Poly) -> Result<Poly> {
        assert_eq!(self.nvars, g.nvars, "variable arity mismatch");
        if g.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        let (glead, gc) = g.leading().expect("non-zero divisor has a leading term");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((flead, fc)) = rem.leading() {
            let mut texp = Vec::with_capacity(self.nvars);
            for (a, b) in flead.iter().zip(glead.iter()) {
                if a < b {
                    return Err(Error::NotDivisible(format!(
                        "leading monomial {:?} is not divisible by {:?}",
                        flead, glead
                    )));
                }
                texp.push(a - b);
            }
            let tc = fc / gc;
            let mut t = Poly::zero(self.nvars);
            t.add_term(texp, tc);
            rem = rem.sub(&t.mul(g));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    /// Extends the polynomial to a larger variable set: variable `i` becomes
    /// variable `embed[i]` of an `nvars_out`-variable polynomial.
    pub fn embed(&self, nvars_out: usize, embed: &[usize]) -> Poly {
        assert_eq!(embed.len(), self.nvars);
        let mut out = Poly::zero(nvars_out);
        for (exp, c) in &self.terms {
            let mut e = vec![0u32; nvars_out];
            for (i, &x) in exp.iter().enumerate() {
                e[embed[i]] += x;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Restricts to the first `new_nvars` variables; every term must avoid
    /// the dropped trailing variables.
    pub fn truncate_vars(&self, new_nvars: usize) -> Poly {
        assert!(new_nvars <= self.nvars);
        let mut out = Poly::zero(new_nvars);
        for (exp, c) in &self.terms {
            assert!(
                exp[new_nvars..].iter().all(|&x| x == 0),
                "term involves a dropped variable"
            );
            out.add_term(exp[..new_nvars].to_vec(), c.clone());
        }
        out
    }

    /// Renders with explicit variable names.
    pub fn to_string_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars, "one name per variable required");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces = Vec::new();
        // Highest lexicographic term first reads most naturally.
        for (exp, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &e) in exp.iter().enumerate() {
                if e == 1 {
                    factors.push(names[i].to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", names[i], e));
                }
            }
            let body = factors.join("*");
            let piece = if body.is_empty() {
                rat_string(c)
            } else if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{}", body)
            } else {
                format!("{}*{}", rat_string(c), body)
            };
            pieces.push(piece);
        }
        let mut out = String::new();
        for (i, piece) in pieces.iter().enumerate() {
            if i == 0 {
                out.push_str(piece);
            } else if let Some(stripped) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(piece);
            }
        }
        out
    }

    /// Default variable names: `a1, ..., a{n-1}, h`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        let mut names: Vec<String> = (1..nvars).map(|i| format!("a{}", i)).collect();
        names.push("h".to_string());
        names
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Poly::default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.to_string_with(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: usize) -> Poly {
        Poly::var(3, i)
    }

    fn h() -> Poly {
        Poly::hbar(3)
    }

    #[test]
    fn ring_identities() {
        let p = a(0).add(&h()).mul(&a(1).sub(&h()));
        let q = a(0).mul(&a(1)).add(&h().mul(&a(1))).sub(&a(0).mul(&h())).sub(&h().pow(2));
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
    }

    #[test]
    fn shift_is_a_ring_map() {
        let p = a(0).mul(&a(1)).add(&h().scale(&rat(3)));
        let q = a(0).pow(2).sub(&a(1));
        let s = [2i64, -1];
        assert_eq!(p.mul(&q).shift(&s), p.shift(&s).mul(&q.shift(&s)));
        // a1 -> a1 + 2h explicitly.
        assert_eq!(a(0).shift(&s), a(0).add(&h().scale(&rat(2))));
    }

    #[test]
    fn eval_and_substitute_agree() {
        let p = a(0).pow(3).sub(&a(1).mul(&h())).add(&Poly::constant(3, ratio(1, 2)));
        let vals = [ratio(2, 3), rat(-1), rat(5)];
        let images: Vec<Poly> = vals.iter().map(|v| Poly::constant(3, v.clone())).collect();
        let via_sub = p.substitute_all(&images);
        assert_eq!(via_sub.constant_coeff(), p.eval_rat(&vals));
    }

    #[test]
    fn exact_division_succeeds_and_fails() {
        let f = a(0).add(&h()).mul(&a(1).add(&h().scale(&rat(2)))).mul(&a(0).sub(&a(1)));
        let g = a(1).add(&h().scale(&rat(2)));
        let q = f.exact_div(&g).unwrap();
        assert_eq!(q.mul(&g), f);
        let bad = f.add(&Poly::one(3));
        assert!(bad.exact_div(&g).is_err());
    }

    #[test]
    fn degrees_and_homogeneity() {
        let p = a(0).mul(&a(1)).sub(&h().pow(2));
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.graded_degree(), Some(4));
        assert!(p.is_homogeneous());
        assert!(!p.add(&Poly::one(3)).is_homogeneous());
        assert_eq!(p.avar_degree(), 2);
        assert_eq!(h().pow(5).avar_degree(), 0);
    }

    #[test]
    fn rendering_is_reader_friendly() {
        let p = a(0).mul(&a(1)).sub(&h().pow(2)).add(&a(0).scale(&ratio(1, 2)));
        assert_eq!(p.to_string(), "a1*a2 + 1/2*a1 - h^2");
    }

    #[test]
    fn shift_composes_additively() {
        let p = a(0).pow(2).mul(&a(1)).add(&h());
        let s1 = [1i64, -3];
        let s2 = [-2i64, 5];
        let sum = [-1i64, 2];
        assert_eq!(p.shift(&s1).shift(&s2), p.shift(&sum));
    }
}
