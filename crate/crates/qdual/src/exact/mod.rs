//! Exact arithmetic kernel: rationals, polynomials, lattice Laurent
//! polynomials, cone fractions and truncated cone series.
//!
//! Everything downstream (the hypertoric enveloping algebra, traces, the
//! coordinate-ring side and the Springer-side operators) reduces to the types
//! in this module. No floating point appears anywhere in the crate.

pub mod cone;
pub mod laurent;
pub mod poly;

pub use cone::{binomial, expand_fraction, ConeFraction, ConeSeries};
pub use laurent::{one_minus_q, LaurentQ};
pub use poly::{rat, rat_string, ratio, Poly, Rat};

/// The coefficient shift `f(a) -> f(a + <lam, -> h)` induced by moving a
/// polynomial past the lattice monomial `m^lam` (or `q^lam`).
///
/// `lam` is the embedded weight, one entry per non-`h` variable of `f`.
pub fn shift_poly(f: &Poly, lam: &[i64]) -> Poly {
    f.shift(lam)
}

/// The falling/rising bracket `[a_i]^k`:
///
/// - `k = 0`: 1,
/// - `k > 0`: `a_i (a_i - h) ... (a_i - (k-1) h)`,
/// - `k < 0`: `(a_i + h) (a_i + 2h) ... (a_i + |k| h)`.
pub fn bracket_power(nvars: usize, idx: usize, k: i64) -> Poly {
    let a = Poly::var(nvars, idx);
    let h = Poly::hbar(nvars);
    let mut out = Poly::one(nvars);
    if k >= 0 {
        for j in 0..k {
            out = out.mul(&a.sub(&h.scale(&rat(j))));
        }
    } else {
        for j in 1..=(-k) {
            out = out.mul(&a.add(&h.scale(&rat(j))));
        }
    }
    out
}

/// The product bracket `[a]^lam = prod_i [a_i]^(lam_i)` for an embedded
/// weight `lam` (one entry per non-`h` variable).
pub fn bracket_vector(nvars: usize, lam: &[i64]) -> Poly {
    assert_eq!(lam.len() + 1, nvars, "one bracket exponent per a-variable");
    let mut out = Poly::one(nvars);
    for (i, &k) in lam.iter().enumerate() {
        if k != 0 {
            out = out.mul(&bracket_power(nvars, i, k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_values() {
        // [a]^2 = a(a - h), [a]^(-2) = (a + h)(a + 2h).
        let a = Poly::var(2, 0);
        let h = Poly::hbar(2);
        assert_eq!(bracket_power(2, 0, 2), a.mul(&a.sub(&h)));
        assert_eq!(bracket_power(2, 0, -2), a.add(&h).mul(&a.add(&h.scale(&rat(2)))));
        assert!(bracket_power(2, 0, 0).is_one());
    }

    #[test]
    fn bracket_reflection() {
        // [a]^lam shifted by lam equals [a]^(-lam): the two-sided form of the
        // same interval of shifted linear factors.
        for lam in [vec![2i64, -1], vec![1, 3], vec![-2, 0]] {
            let b = bracket_vector(3, &lam);
            let shifted = shift_poly(&b, &lam);
            assert_eq!(shifted, bracket_vector(3, &lam.iter().map(|x| -x).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn bracket_splits_along_signs() {
        // For k, l of the same sign, [a]^(k+l) = [a]^k * ([a]^l shifted by
        // -k): the factors continue the same arithmetic progression.
        for (k, l) in [(2i64, 3i64), (-1, -2), (3, 1)] {
            let lhs = bracket_power(2, 0, k + l);
            let inner = bracket_power(2, 0, l).shift(&[-k]);
            assert_eq!(lhs, bracket_power(2, 0, k).mul(&inner));
        }
    }
}
