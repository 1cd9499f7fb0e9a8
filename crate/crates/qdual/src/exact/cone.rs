//! Exact cone-supported fractions and their truncated expansions.
//!
//! [`ConeFraction`] is a Laurent polynomial divided by a product of binomials
//! `(1 - q^lambda)^k`; arithmetic is exact and never expands anything.
//! [`ConeSeries`] is a truncated expansion of such a fraction in a cone: a
//! finite set of lattice keys `nu`, each weighted by a coefficient
//! polynomial, offset by a fixed (possibly non-integral) rational weight, and
//! guaranteed complete for all keys whose pairing against a fixed covector
//! `xi` stays at or below a bound.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::laurent::{one_minus_q, LaurentQ};
use crate::exact::poly::{rat, rat_string, Poly, Rat};

/// A fraction `num / prod (1 - q^lambda)^k` over a lattice.
///
/// Construction cancels every denominator factor that exactly divides the
/// numerator, so the zero fraction always has an empty denominator and
/// equality testing reduces to a subtraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFraction {
    num: LaurentQ,
    den: BTreeMap<Vec<i64>, u32>,
}

impl ConeFraction {
    /// Builds `num / prod (1 - q^den[i])` and cancels.
    pub fn new<I>(num: LaurentQ, den: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, u32)>,
    {
        let mut d: BTreeMap<Vec<i64>, u32> = BTreeMap::new();
        for (exp, k) in den {
            assert_eq!(exp.len(), num.rank(), "denominator exponent arity mismatch");
            assert!(exp.iter().any(|&x| x != 0), "denominator exponent must be non-zero");
            if k > 0 {
                *d.entry(exp).or_insert(0) += k;
            }
        }
        let mut out = ConeFraction { num, den: d };
        out.cancel();
        out
    }

    /// A fraction with trivial denominator.
    pub fn from_laurent(num: LaurentQ) -> Self {
        ConeFraction { num, den: BTreeMap::new() }
    }

    /// The zero fraction.
    pub fn zero(rank: usize, cvars: usize) -> Self {
        ConeFraction::from_laurent(LaurentQ::zero(rank, cvars))
    }

    /// The unit fraction.
    pub fn one(rank: usize, cvars: usize) -> Self {
        ConeFraction::from_laurent(LaurentQ::one(rank, cvars))
    }

    /// Numerator.
    pub fn num(&self) -> &LaurentQ {
        &self.num
    }

    /// Denominator exponents with multiplicities.
    pub fn den(&self) -> &BTreeMap<Vec<i64>, u32> {
        &self.den
    }

    /// Lattice rank.
    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    /// Coefficient arity.
    pub fn cvars(&self) -> usize {
        self.num.cvars()
    }

    /// True for the zero fraction.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The denominator expanded into a Laurent polynomial.
    pub fn den_laurent(&self) -> LaurentQ {
        let mut out = LaurentQ::one(self.rank(), self.cvars());
        for (exp, &k) in &self.den {
            for _ in 0..k {
                out = out.mul(&one_minus_q(exp, self.cvars()));
            }
        }
        out
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut new_den = BTreeMap::new();
        for (exp, &k) in &self.den {
            let factor = one_minus_q(exp, self.cvars());
            let mut left = k;
            while left > 0 {
                match self.num.exact_div(&factor) {
                    Ok(q) => {
                        self.num = q;
                        left -= 1;
                    }
                    Err(_) => break,
                }
            }
            if left > 0 {
                new_den.insert(exp.clone(), left);
            }
        }
        self.den = new_den;
    }

    /// Sum over a common denominator.
    pub fn add(&self, other: &ConeFraction) -> ConeFraction {
        assert_eq!(self.rank(), other.rank());
        assert_eq!(self.cvars(), other.cvars());
        let mut all: BTreeMap<Vec<i64>, u32> = self.den.clone();
        for (exp, &k) in &other.den {
            let e = all.entry(exp.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let mut lhs = self.num.clone();
        let mut rhs = other.num.clone();
        for (exp, &k) in &all {
            let f = one_minus_q(exp, self.cvars());
            let ka = self.den.get(exp).copied().unwrap_or(0);
            let kb = other.den.get(exp).copied().unwrap_or(0);
            for _ in ka..k {
                lhs = lhs.mul(&f);
            }
            for _ in kb..k {
                rhs = rhs.mul(&f);
            }
        }
        ConeFraction::new(lhs.add(&rhs), all)
    }

    /// Difference.
    pub fn sub(&self, other: &ConeFraction) -> ConeFraction {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> ConeFraction {
        ConeFraction { num: self.num.neg(), den: self.den.clone() }
    }

    /// Product.
    pub fn mul(&self, other: &ConeFraction) -> ConeFraction {
        assert_eq!(self.rank(), other.rank());
        let mut den = self.den.clone();
        for (exp, &k) in &other.den {
            *den.entry(exp.clone()).or_insert(0) += k;
        }
        ConeFraction::new(self.num.mul(&other.num), den)
    }

    /// Multiplies by a Laurent polynomial.
    pub fn mul_laurent(&self, x: &LaurentQ) -> ConeFraction {
        ConeFraction::new(self.num.mul(x), self.den.clone())
    }

    /// Multiplies by a coefficient polynomial.
    pub fn scale_poly(&self, c: &Poly) -> ConeFraction {
        ConeFraction::new(self.num.scale_poly(c), self.den.clone())
    }

    /// Multiplies by a rational.
    pub fn scale(&self, c: &Rat) -> ConeFraction {
        ConeFraction { num: self.num.scale(c), den: if c.is_zero() { BTreeMap::new() } else { self.den.clone() } }
    }

    /// Exact equality of fractions.
    pub fn eq_fraction(&self, other: &ConeFraction) -> bool {
        self.sub(other).is_zero()
    }

    /// The lattice inversion `q^mu -> q^(-mu)` applied to the whole fraction,
    /// re-normalized so denominators keep the `1 - q^lambda` shape:
    /// `1/(1 - q^(-lambda)) = -q^lambda / (1 - q^lambda)`.
    pub fn invert_q(&self) -> ConeFraction {
        let mut num = self.num.invert_q();
        let mut den = BTreeMap::new();
        for (exp, &k) in &self.den {
            // Inverted factor (1 - q^(-exp))^k rewritten over (1 - q^exp)^k.
            let m = LaurentQ::monomial(exp.clone(), Poly::one(self.cvars()).neg()).pow_monomial(k);
            num = num.mul(&m);
            *den.entry(exp.clone()).or_insert(0) += k;
        }
        ConeFraction::new(num, den)
    }
}

impl LaurentQ {
    /// Helper for monomial powers: `(c q^exp)^k` for a single-term Laurent.
    fn pow_monomial(&self, k: u32) -> LaurentQ {
        let mut out = LaurentQ::one(self.rank(), self.cvars());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for ConeFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let mut dens = Vec::new();
        for (exp, &k) in &self.den {
            let factor = one_minus_q(exp, self.cvars());
            if k == 1 {
                dens.push(format!("({})", factor));
            } else {
                dens.push(format!("({})^{}", factor, k));
            }
        }
        write!(f, "({}) / {}", self.num, dens.join("*"))
    }
}

/// Binomial coefficient `C(n, r)` as a rational.
pub fn binomial(n: u64, r: u64) -> Rat {
    if r > n {
        return Rat::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r.min(n - r) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rat::new(num, den)
}

/// A truncated cone-supported series.
///
/// Represents `q^offset * sum_nu c_nu(h) q^nu` where `nu` runs over integer
/// lattice keys. The series is complete for every key with
/// `<nu, xi> <= bound`; keys beyond the bound are dropped on insertion. The
/// offset may be a non-integral rational weight (a lowest weight of a module,
/// for instance) and two series combine only when their offsets differ by an
/// integral vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSeries {
    rank: usize,
    cvars: usize,
    offset: Vec<Rat>,
    xi: Vec<Rat>,
    bound: Rat,
    terms: BTreeMap<Vec<i64>, Poly>,
}

impl ConeSeries {
    /// An empty series, complete up to `bound`.
    pub fn zero(rank: usize, cvars: usize, offset: Vec<Rat>, xi: Vec<Rat>, bound: Rat) -> Self {
        assert_eq!(offset.len(), rank);
        assert_eq!(xi.len(), rank);
        ConeSeries { rank, cvars, offset, xi, bound, terms: BTreeMap::new() }
    }

    /// Lattice rank.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Coefficient arity.
    pub fn cvars(&self) -> usize {
        self.cvars
    }

    /// The rational offset weight.
    pub fn offset(&self) -> &[Rat] {
        &self.offset
    }

    /// The truncation covector.
    pub fn xi(&self) -> &[Rat] {
        &self.xi
    }

    /// The completeness bound.
    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    /// Term iterator over `(key, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Poly)> {
        self.terms.iter()
    }

    /// Number of kept terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no term is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pairing of an integer key against `xi`.
    pub fn key_pairing(&self, key: &[i64]) -> Rat {
        key.iter().zip(&self.xi).map(|(&k, x)| x * rat(k)).fold(Rat::zero(), |a, b| a + b)
    }

    /// The coefficient at a key (zero if absent).
    pub fn coeff(&self, key: &[i64]) -> Poly {
        self.terms.get(key).cloned().unwrap_or_else(|| Poly::zero(self.cvars))
    }

    /// Inserts `c q^key`, dropping it silently when beyond the bound.
    pub fn add_term(&mut self, key: Vec<i64>, c: Poly) {
        assert_eq!(key.len(), self.rank);
        assert_eq!(c.nvars(), self.cvars);
        if c.is_zero() || self.key_pairing(&key) > self.bound {
            return;
        }
        match self.terms.entry(key) {
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

    /// The integral difference `other.offset - self.offset`, or an error when
    /// it is not integral.
    fn offset_delta(&self, other: &ConeSeries) -> Result<Vec<i64>> {
        let mut delta = Vec::with_capacity(self.rank);
        for (a, b) in other.offset.iter().zip(&self.offset) {
            let d = a - b;
            if !d.denom().is_one() {
                return Err(Error::OffsetMismatch(format!(
                    "offsets {:?} and {:?}",
                    self.offset.iter().map(rat_string).collect::<Vec<_>>(),
                    other.offset.iter().map(rat_string).collect::<Vec<_>>()
                )));
            }
            let n = d.numer();
            let lim = BigInt::from(i64::MAX);
            if n.abs() > lim {
                return Err(Error::OffsetMismatch("offset difference overflows".into()));
            }
            delta.push(i64::try_from(n.clone()).expect("bounded above"));
        }
        Ok(delta)
    }

    /// Sum; offsets must differ integrally. The result keeps `self`'s offset
    /// and is complete up to the smaller of the two completeness bounds
    /// (after re-keying).
    pub fn add(&self, other: &ConeSeries) -> Result<ConeSeries> {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.cvars, other.cvars);
        assert_eq!(self.xi, other.xi, "series must share a truncation covector");
        let delta = self.offset_delta(other)?;
        let shift = self.key_pairing(&delta);
        let bound = self.bound.clone().min(&other.bound + &shift);
        let mut out =
            ConeSeries::zero(self.rank, self.cvars, self.offset.clone(), self.xi.clone(), bound);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone());
        }
        for (k, c) in &other.terms {
            let key: Vec<i64> = k.iter().zip(&delta).map(|(x, d)| x + d).collect();
            out.add_term(key, c.clone());
        }
        Ok(out)
    }

    /// Difference with the same offset rules as [`ConeSeries::add`].
    pub fn sub(&self, other: &ConeSeries) -> Result<ConeSeries> {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> ConeSeries {
        ConeSeries {
            rank: self.rank,
            cvars: self.cvars,
            offset: self.offset.clone(),
            xi: self.xi.clone(),
            bound: self.bound.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    /// Smallest pairing over the support (`None` when empty).
    pub fn min_pairing(&self) -> Option<Rat> {
        self.terms.keys().map(|k| self.key_pairing(k)).min()
    }

    /// Product; offsets add, and the completeness bound is the best bound
    /// justified by the two factors' bounds and minimal support pairings.
    pub fn mul(&self, other: &ConeSeries) -> ConeSeries {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.cvars, other.cvars);
        assert_eq!(self.xi, other.xi, "series must share a truncation covector");
        let offset: Vec<Rat> =
            self.offset.iter().zip(&other.offset).map(|(a, b)| a + b).collect();
        let mp_self = self.min_pairing();
        let mp_other = other.min_pairing();
        let bound = match (mp_self, mp_other) {
            (Some(a), Some(b)) => (&self.bound + &b).min(&other.bound + &a),
            // A zero factor makes the product exactly zero: any bound works,
            // keep the larger completeness claim.
            _ => self.bound.clone().max(other.bound.clone()),
        };
        let mut out = ConeSeries::zero(self.rank, self.cvars, offset, self.xi.clone(), bound);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                out.add_term(key, ca.mul(cb));
            }
        }
        out
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scale_poly(&self, c: &Poly) -> ConeSeries {
        let mut out = ConeSeries::zero(
            self.rank,
            self.cvars,
            self.offset.clone(),
            self.xi.clone(),
            self.bound.clone(),
        );
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul(c));
        }
        out
    }

    /// Multiplies by `q^lam` for an integral `lam`: keys and the completeness
    /// bound shift, the offset stays.
    pub fn shift_q(&self, lam: &[i64]) -> ConeSeries {
        assert_eq!(lam.len(), self.rank);
        let shift = self.key_pairing(lam);
        let mut out = ConeSeries::zero(
            self.rank,
            self.cvars,
            self.offset.clone(),
            self.xi.clone(),
            &self.bound + &shift,
        );
        for (k, c) in &self.terms {
            let key: Vec<i64> = k.iter().zip(lam).map(|(x, d)| x + d).collect();
            out.add_term(key, c.clone());
        }
        out
    }

    /// Applies a map to every coefficient.
    pub fn map_coeffs<F: Fn(&Poly) -> Poly>(&self, f: F) -> ConeSeries {
        let mut out = ConeSeries::zero(
            self.rank,
            self.cvars,
            self.offset.clone(),
            self.xi.clone(),
            self.bound.clone(),
        );
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    /// Replaces the offset (used to graft an integral expansion onto a
    /// rational lowest weight).
    pub fn with_offset(&self, offset: Vec<Rat>) -> ConeSeries {
        assert_eq!(offset.len(), self.rank);
        let mut out = self.clone();
        out.offset = offset;
        out
    }

    /// Re-truncates to a smaller bound.
    pub fn truncate(&self, bound: Rat) -> ConeSeries {
        assert!(bound <= self.bound, "cannot extend a completeness claim");
        let mut out =
            ConeSeries::zero(self.rank, self.cvars, self.offset.clone(), self.xi.clone(), bound);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    /// Equality on the common region of validity: after aligning offsets the
    /// two series must agree on every key with pairing at most the smaller
    /// completeness bound.
    pub fn eq_truncated(&self, other: &ConeSeries) -> bool {
        if self.rank != other.rank || self.cvars != other.cvars || self.xi != other.xi {
            return false;
        }
        match self.sub(other) {
            Ok(diff) => diff.is_zero(),
            Err(_) => false,
        }
    }

    /// Acts by a diagonal operator: each `q^(offset + nu)` eigenvector is
    /// scaled by `f` evaluated at `a_i = (offset_i + nu_i) h`. `f` has
    /// `rank + 1` variables, its last being `h`; coefficients stay
    /// polynomials in `h` alone.
    pub fn act_diag(&self, f: &Poly) -> ConeSeries {
        assert_eq!(f.nvars(), self.rank + 1, "diagonal action needs one variable per lattice coordinate plus h");
        assert_eq!(self.cvars, 1, "diagonal action is defined for h-coefficient series");
        let mut out = ConeSeries::zero(
            self.rank,
            self.cvars,
            self.offset.clone(),
            self.xi.clone(),
            self.bound.clone(),
        );
        for (k, c) in &self.terms {
            let images: Vec<Poly> = (0..self.rank + 1)
                .map(|i| {
                    if i == self.rank {
                        Poly::hbar(1)
                    } else {
                        Poly::hbar(1).scale(&(&self.offset[i] + rat(k[i])))
                    }
                })
                .collect();
            out.add_term(k.clone(), c.mul(&f.substitute_all(&images)));
        }
        out
    }
}

impl fmt::Display for ConeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let off: Vec<String> = self.offset.iter().map(rat_string).collect();
        let mut body = Vec::new();
        for (k, c) in self.terms.iter().take(12) {
            body.push(format!("q^{:?}*({})", k, c));
        }
        if self.len() > 12 {
            body.push(format!("... ({} terms)", self.len()));
        }
        write!(
            f,
            "q^[{}] * ({}) [complete to {}]",
            off.join(","),
            if body.is_empty() { "0".to_string() } else { body.join(" + ") },
            rat_string(&self.bound)
        )
    }
}

/// Expands a cone fraction into a [`ConeSeries`] complete up to `bound`
/// against the covector `xi`.
///
/// Denominator factors pairing negatively with `xi` are first rewritten via
/// `1/(1 - q^lam) = -q^(-lam)/(1 - q^(-lam))`; a factor pairing to zero is an
/// obstruction and raises [`Error::NonPositiveDenominator`].
pub fn expand_fraction(x: &ConeFraction, bound: &Rat, xi: &[Rat]) -> Result<ConeSeries> {
    let rank = x.rank();
    let cvars = x.cvars();
    assert_eq!(xi.len(), rank, "covector arity mismatch");
    let pairing = |key: &[i64]| -> Rat {
        key.iter().zip(xi).map(|(&k, v)| v * rat(k)).fold(Rat::zero(), |a, b| a + b)
    };

    // Normalize denominators to pair positively, collecting the monomial
    // correction into the numerator.
    let mut num = x.num().clone();
    let mut factors: Vec<(Vec<i64>, u32)> = Vec::new();
    for (exp, &k) in x.den() {
        let p = pairing(exp);
        if p.is_zero() {
            return Err(Error::NonPositiveDenominator {
                exponent: exp.clone(),
                pairing: rat_string(&p),
            });
        }
        if p.is_positive() {
            factors.push((exp.clone(), k));
        } else {
            // 1/(1 - q^exp)^k = (-1)^k q^(-k exp) / (1 - q^(-exp))^k.
            let flipped: Vec<i64> = exp.iter().map(|v| -v).collect();
            let mut corr = LaurentQ::one(rank, cvars);
            for _ in 0..k {
                corr = corr.mul(&LaurentQ::monomial(flipped.clone(), Poly::one(cvars).neg()));
            }
            num = num.mul(&corr);
            factors.push((flipped, k));
        }
    }

    // Seed with the numerator, then multiply in each geometric expansion.
    let zero_off = vec![Rat::zero(); rank];
    let min_pair = num
        .terms()
        .map(|(e, _)| pairing(e))
        .min()
        .unwrap_or_else(Rat::zero);
    let factor_bound = bound - &min_pair;
    let mut series = ConeSeries::zero(rank, cvars, zero_off.clone(), xi.to_vec(), bound.clone());
    for (e, c) in num.terms() {
        series.add_term(e.clone(), c.clone());
    }
    for (lam, k) in factors {
        let p = pairing(&lam);
        let mut geom =
            ConeSeries::zero(rank, cvars, zero_off.clone(), xi.to_vec(), factor_bound.clone());
        let mut m: u64 = 0;
        loop {
            let level = &p * rat(m as i64);
            if level > factor_bound {
                break;
            }
            let key: Vec<i64> = lam.iter().map(|&x| x * m as i64).collect();
            geom.add_term(key, Poly::constant(cvars, binomial(m + k as u64 - 1, k as u64 - 1)));
            m += 1;
        }
        series = series.mul(&geom);
    }
    Ok(series.truncate(bound.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::ratio;

    fn qmono(exp: &[i64]) -> LaurentQ {
        LaurentQ::monomial(exp.to_vec(), Poly::one(1))
    }

    #[test]
    fn construction_cancels() {
        // (1 - q^(2,0)) / (1 - q^(1,0)) leaves the geometric cofactor.
        let f = ConeFraction::new(one_minus_q(&[2, 0], 1), [(vec![1, 0], 1)]);
        assert!(f.den().is_empty());
        assert_eq!(*f.num(), LaurentQ::one(2, 1).add(&qmono(&[1, 0])));
    }

    #[test]
    fn fraction_field_identities() {
        // 1/(1-q) + q/(1-q) ... over the rank-1 lattice.
        let one = ConeFraction::new(LaurentQ::one(1, 1), [(vec![1], 1)]);
        let shifted = one.mul_laurent(&qmono(&[1]));
        let total = one.sub(&shifted);
        assert!(total.eq_fraction(&ConeFraction::one(1, 1)));
        // Products merge denominators.
        let sq = one.mul(&one);
        assert_eq!(sq.den().get(vec![1].as_slice()), Some(&2));
    }

    #[test]
    fn inversion_normalizes() {
        // pi(1/(1-q)) = 1/(1-q^(-1)) = -q/(1-q).
        let one = ConeFraction::new(LaurentQ::one(1, 1), [(vec![1], 1)]);
        let inv = one.invert_q();
        let expect = ConeFraction::new(qmono(&[1]).neg(), [(vec![1], 1)]);
        assert!(inv.eq_fraction(&expect));
        // An involution on fractions.
        assert!(inv.invert_q().eq_fraction(&one));
    }

    #[test]
    fn expansion_matches_geometric_series() {
        let xi = [rat(1)];
        let one = ConeFraction::new(LaurentQ::one(1, 1), [(vec![1], 1)]);
        let s = expand_fraction(&one, &rat(5), &xi).unwrap();
        assert_eq!(s.len(), 6);
        for m in 0..=5i64 {
            assert!(s.coeff(&[m]).is_one());
        }
        // Double pole: coefficients m+1.
        let sq = ConeFraction::new(LaurentQ::one(1, 1), [(vec![1], 2)]);
        let s2 = expand_fraction(&sq, &rat(5), &xi).unwrap();
        for m in 0..=5i64 {
            assert_eq!(s2.coeff(&[m]), Poly::constant(1, rat(m + 1)));
        }
    }

    #[test]
    fn expansion_flips_negative_directions() {
        // 1/(1-q^(-1)) expands as -q - q^2 - ... in the positive cone.
        let xi = [rat(1)];
        let f = ConeFraction::new(LaurentQ::one(1, 1), [(vec![-1], 1)]);
        let s = expand_fraction(&f, &rat(4), &xi).unwrap();
        assert!(s.coeff(&[0]).is_zero());
        for m in 1..=4i64 {
            assert_eq!(s.coeff(&[m]), Poly::constant(1, rat(-1)));
        }
    }

    #[test]
    fn expansion_detects_walls() {
        let xi = [rat(1), rat(-1)];
        let f = ConeFraction::new(LaurentQ::one(2, 1), [(vec![1, 1], 1)]);
        match expand_fraction(&f, &rat(3), &xi) {
            Err(Error::NonPositiveDenominator { .. }) => {}
            other => panic!("expected a wall obstruction, got {:?}", other),
        }
    }

    #[test]
    fn expansion_is_multiplicative() {
        let xi = [rat(2), rat(1)];
        let a = ConeFraction::new(
            LaurentQ::one(2, 1).sub(&qmono(&[1, -1]).scale(&ratio(3, 2))),
            [(vec![1, 0], 1)],
        );
        let b = ConeFraction::new(qmono(&[0, 1]), [(vec![1, 1], 2), (vec![0, 1], 1)]);
        let bound = rat(7);
        let lhs = expand_fraction(&a.mul(&b), &bound, &xi).unwrap();
        let rhs = expand_fraction(&a, &bound, &xi)
            .unwrap()
            .mul(&expand_fraction(&b, &bound, &xi).unwrap());
        assert!(lhs.eq_truncated(&rhs));
    }

    #[test]
    fn series_offsets_and_shifts() {
        let xi = vec![rat(1)];
        let mut s = ConeSeries::zero(1, 1, vec![ratio(1, 2)], xi.clone(), rat(4));
        s.add_term(vec![0], Poly::one(1));
        s.add_term(vec![1], Poly::hbar(1));
        let t = s.with_offset(vec![ratio(3, 2)]);
        // Offsets differing by 1 re-key on subtraction:
        // q^(3/2)(1 + h q) - q^(1/2)(1 + h q) relative to offset 3/2.
        let d = t.sub(&s).unwrap();
        assert_eq!(d.coeff(&[-1]), Poly::one(1).neg());
        assert_eq!(d.coeff(&[0]), Poly::one(1).sub(&Poly::hbar(1)));
        assert_eq!(d.coeff(&[1]), Poly::hbar(1));
        // Offsets differing by 1/3 refuse to combine.
        let bad = s.with_offset(vec![ratio(5, 6)]);
        assert!(s.add(&bad).is_err());
        // q-shift moves keys and bound.
        let sh = s.shift_q(&[2]);
        assert_eq!(sh.coeff(&[2]), Poly::one(1));
        assert_eq!(*sh.bound(), rat(6));
    }

    #[test]
    fn diagonal_action_scales_eigenvectors() {
        let xi = vec![rat(1)];
        let mut s = ConeSeries::zero(1, 1, vec![ratio(1, 2)], xi, rat(3));
        for m in 0..=3i64 {
            s.add_term(vec![m], Poly::one(1));
        }
        // f = a1 + h acts at key m by ((1/2 + m) + 1) h.
        let f = Poly::var(2, 0).add(&Poly::hbar(2));
        let acted = s.act_diag(&f);
        for m in 0..=3i64 {
            let expect = Poly::hbar(1).scale(&(ratio(3, 2) + rat(m)));
            assert_eq!(acted.coeff(&[m]), expect);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), rat(10));
        assert_eq!(binomial(7, 0), rat(1));
        assert_eq!(binomial(3, 5), rat(0));
    }
}
