//! A PBW model of the rank-one graded enveloping algebra and the descent of
//! its weight-zero part into the cone-fraction module.
//!
//! Elements are stored on the ordered basis `E^a H^b F^c` with `C[h]`
//! coefficients, straightened through the relations `[H, E] = 2hE`,
//! `[H, F] = -2hF`, `[E, F] = hH`. The descent sends a weight-zero element to
//! the module of fractions over the positive root cone: one lattice
//! coordinate (the positive root), coefficients in `C[H, h]`.

use std::collections::BTreeMap;

use crate::dmod::RModElement;
use crate::error::{Error, Result};
use crate::exact::{rat, ConeFraction, LaurentQ, Poly};

/// Generators of the rank-one enveloping algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Usl2Gen {
    E,
    H,
    F,
}

/// An element in the PBW basis `E^a H^b F^c`, coefficients in `C[h]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Usl2Element {
    terms: BTreeMap<(u32, u32, u32), Poly>,
}

fn hpoly(c: i64) -> Poly {
    Poly::constant(1, rat(c))
}

impl Usl2Element {
    /// The zero element.
    pub fn zero() -> Self {
        Usl2Element::default()
    }

    /// The unit.
    pub fn one() -> Self {
        Usl2Element::basis(0, 0, 0, Poly::one(1))
    }

    /// A single scaled basis monomial `c E^a H^b F^c`.
    pub fn basis(a: u32, b: u32, c: u32, coeff: Poly) -> Self {
        assert_eq!(coeff.nvars(), 1, "coefficients live in C[h]");
        let mut out = Usl2Element::zero();
        out.add_term((a, b, c), coeff);
        out
    }

    /// One generator.
    pub fn generator(g: Usl2Gen) -> Self {
        match g {
            Usl2Gen::E => Usl2Element::basis(1, 0, 0, Poly::one(1)),
            Usl2Gen::H => Usl2Element::basis(0, 1, 0, Poly::one(1)),
            Usl2Gen::F => Usl2Element::basis(0, 0, 1, Poly::one(1)),
        }
    }

    /// The product of a word of generators.
    pub fn word(gens: &[Usl2Gen]) -> Self {
        gens.iter()
            .fold(Usl2Element::one(), |acc, g| acc.mul(&Usl2Element::generator(*g)))
    }

    /// The graded Casimir `4EF + H^2 - 2hH + h^2`.
    pub fn casimir() -> Self {
        let mut out = Usl2Element::zero();
        out.add_term((1, 0, 1), hpoly(4));
        out.add_term((0, 2, 0), Poly::one(1));
        out.add_term((0, 1, 0), Poly::hbar(1).scale(&rat(-2)));
        out.add_term((0, 0, 0), Poly::hbar(1).mul(&Poly::hbar(1)));
        out
    }

    fn add_term(&mut self, key: (u32, u32, u32), coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(|| Poly::zero(1));
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Basis terms in PBW order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &Poly)> {
        self.terms.iter()
    }

    /// Whether the element is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum.
    pub fn add(&self, other: &Usl2Element) -> Usl2Element {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> Usl2Element {
        let mut out = Usl2Element::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, c.neg());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Usl2Element) -> Usl2Element {
        self.add(&other.neg())
    }

    /// Scaling by a `C[h]` polynomial.
    pub fn scale_poly(&self, c: &Poly) -> Usl2Element {
        let mut out = Usl2Element::zero();
        for (k, f) in &self.terms {
            out.add_term(*k, f.mul(c));
        }
        out
    }

    /// Product, straightened into the PBW basis.
    pub fn mul(&self, other: &Usl2Element) -> Usl2Element {
        let mut out = Usl2Element::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let product = pbw_pair_mul(*ka, *kb);
                for (k, c) in &product.terms {
                    out.add_term(*k, c.mul(ca).mul(cb));
                }
            }
        }
        out
    }

    /// The adjoint weight of the element along the positive root, when every
    /// term shares it.
    pub fn weight(&self) -> Option<i64> {
        let mut weight = None;
        for (a, _, c) in self.terms.keys() {
            let w = 2 * (i64::from(*a) - i64::from(*c));
            match weight {
                None => weight = Some(w),
                Some(v) if v == w => {}
                Some(_) => return None,
            }
        }
        Some(weight.unwrap_or(0))
    }

    /// Image in the zero-weight quotient that kills every product of a
    /// positive-weight part with a negative-weight part: the terms `E^k .. F^k`
    /// with `k >= 1` vanish and what remains is a polynomial in `H` and `h`.
    pub fn b_image(&self) -> Result<Poly> {
        for (a, _, c) in self.terms.keys() {
            if a != c {
                return Err(Error::NonZeroWeight(vec![2 * (i64::from(*a) - i64::from(*c))]));
            }
        }
        let mut out = Poly::zero(2);
        for ((a, b, _), coeff) in &self.terms {
            if *a == 0 {
                out = out.add(&Poly::var(2, 0).pow(*b).mul(&coeff.embed(2, &[1])));
            }
        }
        Ok(out)
    }

    /// Exact division of every coefficient by `h`.
    fn div_hbar(&self) -> Usl2Element {
        let mut out = Usl2Element::zero();
        for (k, c) in &self.terms {
            let q = c
                .exact_div(&Poly::hbar(1))
                .expect("commutator coefficients are divisible by h");
            out.add_term(*k, q);
        }
        out
    }
}

/// Straightened product of two PBW basis monomials.
fn pbw_pair_mul(a: (u32, u32, u32), b: (u32, u32, u32)) -> Usl2Element {
    let (p, q, r) = a;
    let (s, t, u) = b;
    if r == 0 {
        // E^p H^q E^s H^t F^u = E^(p+s) (H + 2s h)^q H^t F^u.
        let shifted = cartan_power_shifted(q, 2 * i64::from(s)).mul(&cartan_power_shifted(t, 0));
        return cartan_spread(p + s, u, &shifted);
    }
    if s == 0 {
        // E^p H^q F^r H^t F^u = E^p H^q (H + 2r h)^t F^(r+u).
        let shifted = cartan_power_shifted(q, 0).mul(&cartan_power_shifted(t, 2 * i64::from(r)));
        return cartan_spread(p, r + u, &shifted);
    }
    // Peel one F against one E through FE = EF - hH.
    let left = Usl2Element::basis(p, q, r - 1, Poly::one(1));
    let right = Usl2Element::basis(s - 1, t, u, Poly::one(1));
    let ef = Usl2Element::basis(1, 0, 1, Poly::one(1));
    let hh = Usl2Element::basis(0, 1, 0, Poly::hbar(1));
    left.mul(&ef.sub(&hh).mul(&right))
}

/// `(H + k h)^b` as a polynomial in `(H, h)`.
fn cartan_power_shifted(b: u32, k: i64) -> Poly {
    Poly::var(2, 0).add(&Poly::hbar(2).scale(&rat(k))).pow(b)
}

/// Distributes a `(H, h)` polynomial back onto basis keys `(a, *, c)`.
fn cartan_spread(a: u32, c: u32, f: &Poly) -> Usl2Element {
    let mut out = Usl2Element::zero();
    for (exp, coeff) in f.terms() {
        let mut scalar = Poly::zero(1);
        scalar.add_term(vec![exp[1]], coeff.clone());
        out.add_term((a, exp[0], c), scalar);
    }
    out
}

/// Descent of a weight-zero element into the fraction module over the
/// positive root cone: `H^m` is fixed, and a term starting with `E` against a
/// negative-weight tail `B` descends through
/// `image(E B) = q / (1 - q) * h * image([B, E] / h)`.
pub fn mregw_reduce_a1(x: &Usl2Element) -> Result<RModElement> {
    for (a, _, c) in x.terms.keys() {
        if a != c {
            return Err(Error::NonZeroWeight(vec![2 * (i64::from(*a) - i64::from(*c))]));
        }
    }
    let mut out = RModElement::zero(1);
    for ((k, m, _), coeff) in &x.terms {
        let image = descend_basis(*k, *m);
        for (s, f) in image.terms() {
            out.push(s.clone(), f.mul(&coeff.embed(2, &[1])));
        }
    }
    Ok(out)
}

fn descend_basis(k: u32, m: u32) -> RModElement {
    if k == 0 {
        let mut out = RModElement::zero(1);
        out.push(ConeFraction::one(1, 1), Poly::var(2, 0).pow(m));
        return out;
    }
    let e = Usl2Element::generator(Usl2Gen::E);
    let b = Usl2Element::basis(k - 1, m, k, Poly::one(1));
    let commutator = b.mul(&e).sub(&e.mul(&b)).div_hbar();
    let descended = mregw_reduce_a1(&commutator)
        .expect("commutators against E stay at weight zero");
    let gate = ConeFraction::new(
        LaurentQ::monomial(vec![1], Poly::one(1)),
        [(vec![1], 1u32)],
    );
    let mut out = RModElement::zero(1);
    for (s, f) in descended.terms() {
        out.push(s.mul(&gate), f.mul(&Poly::hbar(2)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::springer::{casimir_phi, rho_shift, RootSystemData, RootSystemTag};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hvar() -> Poly {
        Poly::var(2, 0)
    }

    fn hbar2() -> Poly {
        Poly::hbar(2)
    }

    #[test]
    fn product_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..25 {
            let pick = |rng: &mut ChaCha8Rng| {
                Usl2Element::basis(
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                    Poly::one(1),
                )
            };
            let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }
    }

    #[test]
    fn defining_relations_hold() {
        let e = Usl2Element::generator(Usl2Gen::E);
        let h = Usl2Element::generator(Usl2Gen::H);
        let f = Usl2Element::generator(Usl2Gen::F);
        let hb = Poly::hbar(1);
        assert_eq!(
            h.mul(&e).sub(&e.mul(&h)),
            e.scale_poly(&hb.scale(&rat(2)))
        );
        assert_eq!(
            h.mul(&f).sub(&f.mul(&h)),
            f.scale_poly(&hb.scale(&rat(-2)))
        );
        assert_eq!(e.mul(&f).sub(&f.mul(&e)), h.scale_poly(&hb));
    }

    #[test]
    fn powers_of_f_commute_past_e() {
        // F E^d = E^d F - d h E^(d-1) (H + (d-1) h).
        let e = Usl2Element::generator(Usl2Gen::E);
        let f = Usl2Element::generator(Usl2Gen::F);
        for d in 1..=5u32 {
            let mut e_pow = Usl2Element::one();
            for _ in 0..d {
                e_pow = e_pow.mul(&e);
            }
            let lhs = f.mul(&e_pow);
            let correction = Usl2Element::basis(d - 1, 1, 0, Poly::hbar(1).scale(&rat(d.into())))
                .add(&Usl2Element::basis(
                    d - 1,
                    0,
                    0,
                    Poly::hbar(1)
                        .mul(&Poly::hbar(1))
                        .scale(&rat(i64::from(d) * (i64::from(d) - 1))),
                ));
            let rhs = e_pow.mul(&f).sub(&correction);
            assert_eq!(lhs, rhs, "d = {d}");
        }
    }

    #[test]
    fn casimir_is_central() {
        let c = Usl2Element::casimir();
        for g in [Usl2Gen::E, Usl2Gen::H, Usl2Gen::F] {
            let x = Usl2Element::generator(g);
            assert_eq!(c.mul(&x), x.mul(&c), "Casimir commutes with {g:?}");
        }
    }

    /// Action of a PBW term on the vector `F^j v` of the highest-weight module
    /// with highest weight `n`: returns scaled basis vectors indexed by `j`.
    fn hw_apply(x: &Usl2Element, n: i64, j: u32) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for ((a, b, c), coeff) in x.terms() {
            let mut level = j + c;
            let mut scalar = coeff.clone();
            let weight = n - 2 * i64::from(level);
            scalar = scalar.mul(&Poly::hbar(1).scale(&rat(weight)).pow(*b));
            let mut vanished = false;
            for _ in 0..*a {
                if level == 0 {
                    vanished = true;
                    break;
                }
                let fall = i64::from(level) * (n - i64::from(level) + 1);
                scalar = scalar.mul(&Poly::hbar(1).pow(2).scale(&rat(fall)));
                level -= 1;
            }
            if vanished || scalar.is_zero() {
                continue;
            }
            let entry = out.entry(level).or_insert_with(|| Poly::zero(1));
            *entry = entry.add(&scalar);
            if entry.is_zero() {
                out.remove(&level);
            }
        }
        out
    }

    #[test]
    fn casimir_eigenvalue_on_highest_weight_modules() {
        let c = Usl2Element::casimir();
        for n in 0..=20i64 {
            let expected = Poly::hbar(1).pow(2).scale(&rat((n + 1) * (n + 1)));
            for j in 0..=(n.min(4) as u32) {
                let image = hw_apply(&c, n, j);
                assert_eq!(image.len(), 1, "Casimir is diagonal");
                assert_eq!(image[&j], expected, "n = {n}, level = {j}");
            }
        }
    }

    #[test]
    fn zero_weight_image_matches_shifted_interpolation() {
        let c = Usl2Element::casimir();
        let image = c.b_image().unwrap();
        let expected = hvar().sub(&hbar2()).pow(2);
        assert_eq!(image, expected, "(H - h)^2");
        let rs = RootSystemData::new(RootSystemTag::A1);
        assert_eq!(image, rho_shift(&casimir_phi(&rs)));
        assert!(Usl2Element::generator(Usl2Gen::E).b_image().is_err());
    }

    #[test]
    fn descent_rejects_unbalanced_words() {
        let e = Usl2Element::generator(Usl2Gen::E);
        match mregw_reduce_a1(&e) {
            Err(Error::NonZeroWeight(w)) => assert_eq!(w, vec![2]),
            other => panic!("expected NonZeroWeight, got {other:?}"),
        }
    }

    #[test]
    fn descent_fixes_cartan_powers() {
        for m in 0..=4u32 {
            let x = Usl2Element::basis(0, m, 0, Poly::one(1));
            let image = mregw_reduce_a1(&x).unwrap();
            let mut expected = RModElement::zero(1);
            expected.push(ConeFraction::one(1, 1), hvar().pow(m));
            assert!(image.eq_element(&expected), "H^{m}");
        }
    }

    #[test]
    fn descent_of_ef_is_the_gated_cartan() {
        // (1 - q) image(EF) = -q h H.
        let ef = Usl2Element::word(&[Usl2Gen::E, Usl2Gen::F]);
        let image = mregw_reduce_a1(&ef).unwrap();
        let mut expected = RModElement::zero(1);
        expected.push(
            ConeFraction::new(
                LaurentQ::monomial(vec![1], Poly::one(1)),
                [(vec![1], 1u32)],
            ),
            hvar().mul(&hbar2()).neg(),
        );
        assert!(image.eq_element(&expected));
    }

    #[test]
    fn descent_of_the_casimir_matches_the_conjugated_interpolant() {
        // The descended Casimir equals
        // (-q/(1-q)) (H + h)^2 + (1/(1-q)) (H - h)^2,
        // the conjugate of (H - h)^2 by the rank-one denominator.
        let image = mregw_reduce_a1(&Usl2Element::casimir()).unwrap();
        let gate = |num: LaurentQ| ConeFraction::new(num, [(vec![1], 1u32)]);
        let mut expected = RModElement::zero(1);
        expected.push(
            gate(LaurentQ::monomial(vec![1], Poly::one(1)).neg()),
            hvar().add(&hbar2()).pow(2),
        );
        expected.push(
            gate(LaurentQ::one(1, 1)),
            hvar().sub(&hbar2()).pow(2),
        );
        assert!(image.eq_element(&expected));
    }

    #[test]
    fn descent_is_linear_over_scalars() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..10 {
            let x = Usl2Element::basis(
                rng.gen_range(0..3),
                rng.gen_range(0..3),
                rng.gen_range(0..3),
                Poly::one(1),
            );
            let y = Usl2Element::basis(
                rng.gen_range(0..3),
                rng.gen_range(0..3),
                rng.gen_range(0..3),
                Poly::one(1),
            );
            let (Some(wx), Some(wy)) = (x.weight(), y.weight()) else {
                continue;
            };
            if wx != 0 || wy != 0 {
                continue;
            }
            let sum = mregw_reduce_a1(&x.add(&y)).unwrap();
            let parts = mregw_reduce_a1(&x).unwrap().add(&mregw_reduce_a1(&y).unwrap());
            assert!(sum.eq_element(&parts));
        }
    }
}
