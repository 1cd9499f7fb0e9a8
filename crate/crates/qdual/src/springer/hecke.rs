//! The graded Hecke algebra of a root system in its normal form
//! `sum_w p_w . w`, together with its polynomial representation.
//!
//! Coefficients are Cartan polynomials (`rank + 1` variables, the last one
//! graded). The simple generator attached to the `i`-th simple root acts on
//! polynomials by `f -> s_i(f) - h D_i(f)` where `D_i` is the divided
//! difference against the `i`-th simple coroot; products are straightened
//! through the cross relation
//! `S_i X_p = X_{s_i(p)} S_i - h X_{D_i(p)}`.

use std::collections::BTreeMap;

use crate::exact::Poly;
use crate::springer::RootSystemData;

/// An element `sum_w p_w . w`, keyed by the Weyl list index of `w`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeckeElement {
    terms: BTreeMap<usize, Poly>,
}

impl HeckeElement {
    /// The zero element.
    pub fn zero() -> Self {
        HeckeElement::default()
    }

    /// The unit (the identity Weyl element with coefficient one).
    pub fn identity(rs: &RootSystemData) -> Self {
        let mut out = HeckeElement::zero();
        out.add_term(0, Poly::one(rs.rank() + 1));
        out
    }

    /// The simple generator `S_i`.
    pub fn simple(rs: &RootSystemData, i: usize) -> Self {
        assert!(i < rs.rank(), "simple generators are indexed by simple roots");
        let mut out = HeckeElement::zero();
        out.add_term(rs.reflection_of(i), Poly::one(rs.rank() + 1));
        out
    }

    /// The multiplication element `X_p`.
    pub fn x_poly(rs: &RootSystemData, p: Poly) -> Self {
        assert_eq!(p.nvars(), rs.rank() + 1);
        let mut out = HeckeElement::zero();
        out.add_term(0, p);
        out
    }

    /// The product of simple generators along a word.
    pub fn from_word(rs: &RootSystemData, word: &[usize]) -> Self {
        word.iter()
            .rev()
            .fold(HeckeElement::identity(rs), |acc, &i| acc.left_mul_simple(rs, i))
    }

    fn add_term(&mut self, w: usize, p: Poly) {
        if p.is_zero() {
            return;
        }
        let n = p.nvars();
        let entry = self.terms.entry(w).or_insert_with(|| Poly::zero(n));
        *entry = entry.add(&p);
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    /// Normal form terms.
    pub fn terms(&self) -> impl Iterator<Item = (&usize, &Poly)> {
        self.terms.iter()
    }

    /// Whether the element is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum.
    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_term(*w, p.clone());
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, p) in &self.terms {
            out.add_term(*w, p.neg());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &HeckeElement) -> HeckeElement {
        self.add(&other.neg())
    }

    /// Scaling by a Cartan polynomial (same as left multiplication by `X_p`).
    pub fn scale_poly(&self, p: &Poly) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, c) in &self.terms {
            out.add_term(*w, c.mul(p));
        }
        out
    }

    /// Left multiplication by the simple generator `S_i`, straightened
    /// through the cross relation.
    pub fn left_mul_simple(&self, rs: &RootSystemData, i: usize) -> HeckeElement {
        let s = rs.reflection_of(i);
        let hbar = Poly::hbar(rs.rank() + 1);
        let mut out = HeckeElement::zero();
        for (w, p) in &self.terms {
            out.add_term(rs.weyl_compose(s, *w), rs.apply_weyl_poly(s, p));
            let dd = rs
                .divided_difference(i, p)
                .expect("divided differences of polynomials are exact");
            out.add_term(*w, dd.mul(&hbar).neg());
        }
        out
    }

    /// Product in the algebra: each left term `p . w` is pushed through the
    /// right factor generator by generator along the reduced word of `w`.
    pub fn mul(&self, rs: &RootSystemData, other: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, p) in &self.terms {
            let word = rs.weyl()[*w].word().to_vec();
            let pushed = word
                .iter()
                .rev()
                .fold(other.clone(), |acc, &i| acc.left_mul_simple(rs, i));
            for (v, c) in &pushed.terms {
                out.add_term(*v, c.mul(p));
            }
        }
        out
    }

    /// Action in the polynomial representation.
    pub fn apply(&self, rs: &RootSystemData, f: &Poly) -> Poly {
        let mut out = Poly::zero(rs.rank() + 1);
        for (w, p) in &self.terms {
            out = out.add(&act_word(rs, self::word_of(rs, *w).as_slice(), f).mul(p));
        }
        out
    }
}

fn word_of(rs: &RootSystemData, w: usize) -> Vec<usize> {
    rs.weyl()[w].word().to_vec()
}

/// Action of the simple generator `S_i` on a Cartan polynomial.
pub fn act_simple(rs: &RootSystemData, i: usize, f: &Poly) -> Poly {
    let s = rs.reflection_of(i);
    let dd = rs
        .divided_difference(i, f)
        .expect("divided differences of polynomials are exact");
    rs.apply_weyl_poly(s, f)
        .sub(&dd.mul(&Poly::hbar(rs.rank() + 1)))
}

/// Action of a word of simple generators, innermost letter first.
pub fn act_word(rs: &RootSystemData, word: &[usize], f: &Poly) -> Poly {
    word.iter()
        .rev()
        .fold(f.clone(), |g, &i| act_simple(rs, i, &g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Rat};
    use crate::springer::RootSystemTag;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, deg: u32, terms: usize) -> Poly {
        let mut f = Poly::zero(nvars);
        for _ in 0..terms {
            let mut exp = vec![0u32; nvars];
            let mut left = deg;
            for e in exp.iter_mut() {
                *e = rng.gen_range(0..=left);
                left -= *e;
            }
            f.add_term(exp, rat(rng.gen_range(-3..=3)));
        }
        f
    }

    fn systems() -> Vec<RootSystemData> {
        [RootSystemTag::A1, RootSystemTag::A2, RootSystemTag::B2]
            .into_iter()
            .map(RootSystemData::new)
            .collect()
    }

    #[test]
    fn simple_generators_square_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for rs in systems() {
            for i in 0..rs.rank() {
                let s = HeckeElement::simple(&rs, i);
                assert_eq!(s.mul(&rs, &s), HeckeElement::identity(&rs));
                let f = random_poly(&mut rng, rs.rank() + 1, 5, 6);
                assert_eq!(act_simple(&rs, i, &act_simple(&rs, i, &f)), f);
            }
        }
    }

    #[test]
    fn cross_relation_in_the_polynomial_representation() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for rs in systems() {
            let n = rs.rank() + 1;
            for i in 0..rs.rank() {
                for j in 0..rs.rank() {
                    let x = Poly::var(n, j);
                    let pairing = rs.simple_roots()[i][j];
                    for _ in 0..4 {
                        let f = random_poly(&mut rng, n, 6, 5);
                        let lhs = act_simple(&rs, i, &x.mul(&f));
                        let sx = rs.apply_weyl_poly(rs.reflection_of(i), &x);
                        let rhs = sx
                            .mul(&act_simple(&rs, i, &f))
                            .sub(&f.mul(&Poly::hbar(n)).scale(&rat(pairing)));
                        assert_eq!(lhs, rhs, "tag {:?}, i = {i}, j = {j}", rs.tag());
                    }
                }
            }
        }
    }

    #[test]
    fn cross_relation_as_elements() {
        for rs in systems() {
            let n = rs.rank() + 1;
            for i in 0..rs.rank() {
                for j in 0..rs.rank() {
                    let x = HeckeElement::x_poly(&rs, Poly::var(n, j));
                    let s = HeckeElement::simple(&rs, i);
                    let sx = HeckeElement::x_poly(
                        &rs,
                        rs.apply_weyl_poly(rs.reflection_of(i), &Poly::var(n, j)),
                    );
                    let pairing = rs.simple_roots()[i][j];
                    let scalar = HeckeElement::x_poly(
                        &rs,
                        Poly::hbar(n).scale(&rat(pairing)),
                    );
                    let lhs = s.mul(&rs, &x);
                    let rhs = sx.mul(&rs, &s).sub(&scalar);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn braid_relations_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let a2 = RootSystemData::new(RootSystemTag::A2);
        let left = HeckeElement::from_word(&a2, &[0, 1, 0]);
        let right = HeckeElement::from_word(&a2, &[1, 0, 1]);
        assert_eq!(left, right, "length three braid");
        let b2 = RootSystemData::new(RootSystemTag::B2);
        let left4 = HeckeElement::from_word(&b2, &[0, 1, 0, 1]);
        let right4 = HeckeElement::from_word(&b2, &[1, 0, 1, 0]);
        assert_eq!(left4, right4, "length four braid");
        for _ in 0..4 {
            let f = random_poly(&mut rng, 3, 5, 6);
            assert_eq!(
                act_word(&a2, &[0, 1, 0], &f),
                act_word(&a2, &[1, 0, 1], &f)
            );
            assert_eq!(
                act_word(&b2, &[0, 1, 0, 1], &f),
                act_word(&b2, &[1, 0, 1, 0], &f)
            );
        }
    }

    #[test]
    fn products_match_operator_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for rs in systems() {
            let n = rs.rank() + 1;
            for _ in 0..6 {
                let len: usize = rng.gen_range(0..=3);
                let word: Vec<usize> =
                    (0..len).map(|_| rng.gen_range(0..rs.rank())).collect();
                let a = HeckeElement::from_word(&rs, &word)
                    .scale_poly(&random_poly(&mut rng, n, 2, 3));
                let len_b: usize = rng.gen_range(0..=3);
                let word_b: Vec<usize> =
                    (0..len_b).map(|_| rng.gen_range(0..rs.rank())).collect();
                let b = HeckeElement::from_word(&rs, &word_b)
                    .scale_poly(&random_poly(&mut rng, n, 2, 3));
                let f = random_poly(&mut rng, n, 3, 4);
                let composed = a.mul(&rs, &b).apply(&rs, &f);
                let chained = a.apply(&rs, &b.apply(&rs, &f));
                assert_eq!(composed, chained, "tag {:?}", rs.tag());
            }
        }
    }

    #[test]
    fn longest_element_reverses_positive_roots() {
        for rs in systems() {
            let top = rs
                .weyl()
                .iter()
                .enumerate()
                .max_by_key(|(_, e)| e.word().len())
                .map(|(idx, _)| idx)
                .unwrap();
            for alpha in rs.positive_roots() {
                let image = rs.apply_weyl(top, alpha);
                let neg: Vec<i64> = image.iter().map(|&x| -x).collect();
                assert!(
                    rs.positive_roots().iter().any(|beta| *beta == neg),
                    "w0 sends positive roots to negative roots"
                );
            }
            let w0 = HeckeElement::from_word(&rs, rs.weyl()[top].word());
            let square = w0.mul(&rs, &w0);
            assert_eq!(square, HeckeElement::identity(&rs), "w0^2 = 1");
        }
    }

    #[test]
    fn invariants_are_fixed_by_every_generator() {
        for rs in systems() {
            let n = rs.rank() + 1;
            let mono = (0..rs.rank()).fold(Poly::one(n), |acc, j| {
                acc.mul(&Poly::var(n, j).pow((j as u32) + 2))
            });
            let mut sym = Poly::zero(n);
            for w in 0..rs.weyl().len() {
                sym = sym.add(&rs.apply_weyl_poly(w, &mono));
            }
            assert!(rs.is_invariant(&sym));
            for i in 0..rs.rank() {
                assert_eq!(act_simple(&rs, i, &sym), sym);
            }
        }
    }

    #[test]
    fn rational_checks_of_divided_difference_constants() {
        for rs in systems() {
            for i in 0..rs.rank() {
                for j in 0..rs.rank() {
                    let dd = rs
                        .divided_difference(i, &Poly::var(rs.rank() + 1, j))
                        .unwrap();
                    let expected =
                        Poly::constant(rs.rank() + 1, Rat::from_integer(
                            rs.simple_roots()[i][j].into(),
                        ));
                    assert_eq!(dd, expected);
                }
            }
        }
    }
}
