//! Rank <= 2 Springer-side toolkit: root data, Weyl characters, and the two
//! Harish-Chandra transports (algebraic and geometric).
//!
//! Conventions. Weights are written in fundamental-weight coordinates, so the
//! dominance cone is the positive orthant and `rho = (1, .., 1)`. Elements of
//! the Cartan are written in simple-coroot coordinates, so the pairing between
//! the two sides is the plain dot product and the polynomial generators
//! `H_1, .., H_r` of the symmetric algebra are the simple coroots.
//! Coefficients carry an `h` variable throughout; the graded evaluation of a
//! Cartan polynomial at a weight `mu` substitutes `H_j -> mu_j h`, so moving a
//! coefficient past a lattice monomial shifts it exactly as in the module
//! layer for the hypertoric side.

pub mod hecke;
pub mod operator;
pub mod usl2;

use crate::error::{Error, Result};
use crate::exact::{rat, LaurentQ, Poly, Rat};

/// The three rank <= 2 irreducible types kept at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSystemTag {
    A1,
    A2,
    B2,
}

/// A Weyl group element: its matrix on the weight lattice (fundamental-weight
/// coordinates), its determinant, and one reduced word in simple reflections.
#[derive(Clone, Debug)]
pub struct WeylElement {
    matrix: Vec<Vec<i64>>,
    det: i64,
    word: Vec<usize>,
}

impl WeylElement {
    /// Matrix on the weight lattice; rows are output coordinates.
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Determinant, `(-1)^length`.
    pub fn det(&self) -> i64 {
        self.det
    }

    /// A reduced word in simple-reflection indices.
    pub fn word(&self) -> &[usize] {
        &self.word
    }
}

/// Root datum of a fixed type, with the Weyl group closed into a list and the
/// invariant form recorded as the Gram matrix of the fundamental weights.
#[derive(Clone, Debug)]
pub struct RootSystemData {
    tag: RootSystemTag,
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
    gram_dual: Vec<Vec<Rat>>,
    weyl: Vec<WeylElement>,
    xi: Vec<i64>,
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => panic!("determinant only implemented for rank <= 2, got {n}"),
    }
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

impl RootSystemData {
    /// Builds the datum for one of the supported types and closes the Weyl
    /// group from the simple reflections.
    pub fn new(tag: RootSystemTag) -> Self {
        let (simple_roots, positive_roots, positive_coroots, gram_dual): (
            Vec<Vec<i64>>,
            Vec<Vec<i64>>,
            Vec<Vec<i64>>,
            Vec<Vec<Rat>>,
        ) = match tag {
            RootSystemTag::A1 => (
                vec![vec![2]],
                vec![vec![2]],
                vec![vec![1]],
                vec![vec![rat(1)]],
            ),
            RootSystemTag::A2 => (
                vec![vec![2, -1], vec![-1, 2]],
                vec![vec![2, -1], vec![-1, 2], vec![1, 1]],
                vec![vec![1, 0], vec![0, 1], vec![1, 1]],
                vec![
                    vec![crate::exact::ratio(2, 3), crate::exact::ratio(1, 3)],
                    vec![crate::exact::ratio(1, 3), crate::exact::ratio(2, 3)],
                ],
            ),
            RootSystemTag::B2 => (
                // The first simple root is short, the second long.
                vec![vec![2, -1], vec![-2, 2]],
                vec![vec![2, -1], vec![-2, 2], vec![0, 1], vec![2, 0]],
                vec![vec![1, 0], vec![0, 1], vec![1, 2], vec![1, 1]],
                vec![vec![rat(1), rat(1)], vec![rat(1), rat(2)]],
            ),
        };
        let rank = simple_roots.len();
        let mut data = RootSystemData {
            tag,
            rank,
            simple_roots,
            positive_roots,
            positive_coroots,
            gram_dual,
            weyl: Vec::new(),
            xi: vec![0; rank],
        };
        data.xi = (0..rank)
            .map(|j| data.positive_coroots.iter().map(|cv| cv[j]).sum())
            .collect();
        data.weyl = data.close_weyl_group();
        let expected = match tag {
            RootSystemTag::A1 => 2,
            RootSystemTag::A2 => 6,
            RootSystemTag::B2 => 8,
        };
        assert_eq!(data.weyl.len(), expected, "Weyl group closure has wrong order");
        data
    }

    fn simple_reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        // s_i(lam) = lam - lam_i * alpha_i in fundamental-weight coordinates.
        let alpha = &self.simple_roots[i];
        let mut m = identity_matrix(self.rank);
        for (k, row) in m.iter_mut().enumerate() {
            row[i] -= alpha[k];
        }
        m
    }

    fn close_weyl_group(&self) -> Vec<WeylElement> {
        let gens: Vec<Vec<Vec<i64>>> = (0..self.rank)
            .map(|i| self.simple_reflection_matrix(i))
            .collect();
        let mut elements = vec![WeylElement {
            matrix: identity_matrix(self.rank),
            det: 1,
            word: Vec::new(),
        }];
        // Breadth-first closure keeps every stored word reduced.
        let mut frontier = std::collections::VecDeque::from([0usize]);
        while let Some(idx) = frontier.pop_front() {
            let current = elements[idx].clone();
            for (i, g) in gens.iter().enumerate() {
                let m = mat_mul(g, &current.matrix);
                if elements.iter().any(|e| e.matrix == m) {
                    continue;
                }
                let mut word = vec![i];
                word.extend_from_slice(&current.word);
                elements.push(WeylElement {
                    det: mat_det(&m),
                    matrix: m,
                    word,
                });
                frontier.push_back(elements.len() - 1);
            }
        }
        elements.sort_by_key(|e| (e.word.len(), e.word.clone()));
        elements
    }

    /// The type tag.
    pub fn tag(&self) -> RootSystemTag {
        self.tag
    }

    /// The rank (1 or 2).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Simple roots in fundamental-weight coordinates.
    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    /// Positive roots in fundamental-weight coordinates; simple roots first.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Coroots of the positive roots, in simple-coroot coordinates, aligned
    /// with `positive_roots`.
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    /// Half sum of the positive roots; always `(1, .., 1)` in these
    /// coordinates.
    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank]
    }

    /// Sum of the positive coroots: a strictly positive height functional on
    /// the positive roots.
    pub fn xi(&self) -> &[i64] {
        &self.xi
    }

    /// Gram matrix of the invariant form on weight space, in
    /// fundamental-weight coordinates.
    pub fn gram_dual(&self) -> &[Vec<Rat>] {
        &self.gram_dual
    }

    /// The Weyl group, identity first, sorted by length.
    pub fn weyl(&self) -> &[WeylElement] {
        &self.weyl
    }

    /// Pairing of a weight with a coweight (both in the fixed coordinates).
    pub fn pair(weight: &[i64], coweight: &[i64]) -> i64 {
        weight.iter().zip(coweight).map(|(a, b)| a * b).sum()
    }

    /// Pairing against a rational coweight.
    pub fn pair_rat(weight: &[i64], coweight: &[Rat]) -> Rat {
        weight
            .iter()
            .zip(coweight)
            .map(|(a, b)| b * Rat::from_integer((*a).into()))
            .sum()
    }

    /// Applies the `w`-th Weyl element to a weight.
    pub fn apply_weyl(&self, w: usize, weight: &[i64]) -> Vec<i64> {
        mat_vec(&self.weyl[w].matrix, weight)
    }

    /// Applies the `w`-th Weyl element to a Cartan polynomial (variables
    /// `H_1, .., H_r, h`): the pullback along `w^-1`, so the substitution
    /// `H_j -> sum_k Minv[j][k] H_k`.
    pub fn apply_weyl_poly(&self, w: usize, f: &Poly) -> Poly {
        let n = self.rank + 1;
        assert_eq!(f.nvars(), n, "Cartan polynomials carry rank + 1 variables");
        let m = &self.weyl[self.weyl_inverse(w)].matrix;
        let mut images: Vec<Poly> = (0..self.rank)
            .map(|j| {
                let mut im = Poly::zero(n);
                for (k, &c) in m[j].iter().enumerate() {
                    im = im.add(&Poly::var(n, k).scale(&rat(c)));
                }
                im
            })
            .collect();
        images.push(Poly::hbar(n));
        f.substitute_all(&images)
    }

    /// Index of the inverse of the `w`-th Weyl element.
    pub fn weyl_inverse(&self, w: usize) -> usize {
        let id = identity_matrix(self.rank);
        self.weyl
            .iter()
            .position(|e| mat_mul(&self.weyl[w].matrix, &e.matrix) == id)
            .expect("the Weyl element list is closed under inversion")
    }

    /// Index in `weyl()` of the reflection attached to the `i`-th positive
    /// root.
    pub fn reflection_of(&self, i: usize) -> usize {
        let alpha = &self.positive_roots[i];
        let coroot = &self.positive_coroots[i];
        let mut m = identity_matrix(self.rank);
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry -= alpha[r] * coroot[c];
            }
        }
        self.weyl
            .iter()
            .position(|e| e.matrix == m)
            .expect("every root reflection lies in the closed Weyl group")
    }

    /// The `i`-th positive coroot as a linear Cartan polynomial.
    pub fn coroot_poly(&self, i: usize) -> Poly {
        let n = self.rank + 1;
        let mut f = Poly::zero(n);
        for (j, &c) in self.positive_coroots[i].iter().enumerate() {
            f = f.add(&Poly::var(n, j).scale(&rat(c)));
        }
        f
    }

    /// Demazure operator for the `i`-th positive root: `(f - s f) / coroot`.
    pub fn divided_difference(&self, i: usize, f: &Poly) -> Result<Poly> {
        let s = self.reflection_of(i);
        let num = f.sub(&self.apply_weyl_poly(s, f));
        num.exact_div(&self.coroot_poly(i)).map_err(|e| {
            Error::DivisionFailure(format!("coroot must divide f - s(f): {e}"))
        })
    }

    /// Whether a Cartan polynomial is Weyl invariant.
    pub fn is_invariant(&self, f: &Poly) -> bool {
        (1..self.weyl.len()).all(|w| self.apply_weyl_poly(w, f) == *f)
    }

    /// Index of the composite `a . b` in the Weyl element list.
    pub fn weyl_compose(&self, a: usize, b: usize) -> usize {
        let m = mat_mul(&self.weyl[a].matrix, &self.weyl[b].matrix);
        self.weyl
            .iter()
            .position(|e| e.matrix == m)
            .expect("the Weyl element list is closed under composition")
    }
}

/// The product of `q^alpha - 1` over the positive roots, with scalar
/// coefficients.
pub fn weyl_denominator(rs: &RootSystemData) -> LaurentQ {
    let mut delta = LaurentQ::one(rs.rank(), 1);
    for alpha in rs.positive_roots() {
        let factor = LaurentQ::monomial(alpha.clone(), Poly::one(1))
            .sub(&LaurentQ::one(rs.rank(), 1));
        delta = delta.mul(&factor);
    }
    delta
}

/// Exact division of a lattice Laurent polynomial by `q^alpha - 1`, guided by
/// a height functional that is strictly positive on `alpha`.
fn divide_by_binomial(f: &LaurentQ, alpha: &[i64], xi: &[i64]) -> Result<LaurentQ> {
    let height = |e: &[i64]| -> i64 { e.iter().zip(xi).map(|(a, b)| a * b).sum() };
    let step = height(alpha);
    assert!(step > 0, "the height functional must be positive on alpha");
    if f.is_zero() {
        return Ok(LaurentQ::zero(f.rank(), f.cvars()));
    }
    let heights: Vec<i64> = f.terms().map(|(e, _)| height(e)).collect();
    let span = heights.iter().max().unwrap() - heights.iter().min().unwrap();
    let mut budget = (span / step + 2) as usize * (f.len() + 1) * 2 + 16;
    let mut rem = f.clone();
    let mut quo = LaurentQ::zero(f.rank(), f.cvars());
    while !rem.is_zero() {
        if budget == 0 {
            return Err(Error::NotDivisible(format!(
                "q^{alpha:?} - 1 does not divide the given Laurent polynomial"
            )));
        }
        budget -= 1;
        let (mu, c) = rem
            .terms()
            .map(|(e, c)| (e.clone(), c.clone()))
            .max_by(|a, b| (height(&a.0), a.0.clone()).cmp(&(height(&b.0), b.0.clone())))
            .unwrap();
        let lower: Vec<i64> = mu.iter().zip(alpha).map(|(a, b)| a - b).collect();
        quo.add_term(lower.clone(), c.clone());
        rem.add_term(mu, c.neg());
        rem.add_term(lower, c);
    }
    Ok(quo)
}

/// Exact division by the full Weyl denominator.
pub fn divide_weyl_denominator(rs: &RootSystemData, f: &LaurentQ) -> Result<LaurentQ> {
    let mut out = f.clone();
    for alpha in rs.positive_roots() {
        out = divide_by_binomial(&out, alpha, rs.xi())?;
    }
    Ok(out)
}

/// Irreducible character of the highest weight `lam` as an exact lattice
/// Laurent polynomial: the alternating Weyl sum of `q^(w(lam + rho) + rho)`
/// divided by the Weyl denominator.
pub fn weyl_character(rs: &RootSystemData, lam: &[i64]) -> Result<LaurentQ> {
    assert_eq!(lam.len(), rs.rank());
    if lam.iter().any(|&c| c < 0) {
        return Err(Error::NotDominant(lam.to_vec()));
    }
    let rho = rs.rho();
    let shifted: Vec<i64> = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut num = LaurentQ::zero(rs.rank(), 1);
    for w in 0..rs.weyl().len() {
        let mut e = rs.apply_weyl(w, &shifted);
        for (x, r) in e.iter_mut().zip(&rho) {
            *x += r;
        }
        num.add_term(e, Poly::constant(1, rat(rs.weyl()[w].det())));
    }
    divide_weyl_denominator(rs, &num)
}

/// Dimension of the irreducible with highest weight `lam`, by the product
/// formula over positive coroots.
pub fn weyl_dimension(rs: &RootSystemData, lam: &[i64]) -> Rat {
    let rho = rs.rho();
    let shifted: Vec<i64> = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut dim = rat(1);
    for coroot in rs.positive_coroots() {
        dim *= Rat::from_integer(RootSystemData::pair(&shifted, coroot).into())
            / Rat::from_integer(RootSystemData::pair(&rho, coroot).into());
    }
    dim
}

/// Graded evaluation of a Cartan polynomial at the weight `mu`: the
/// substitution `H_j -> mu_j h`, landing in `C[h]`.
pub fn graded_eval(f: &Poly, mu: &[i64]) -> Poly {
    assert_eq!(f.nvars(), mu.len() + 1);
    let mut images: Vec<Poly> = mu
        .iter()
        .map(|&m| Poly::hbar(1).scale(&rat(m)))
        .collect();
    images.push(Poly::hbar(1));
    f.substitute_all(&images)
}

/// Applies the diagonal operator attached to a Cartan polynomial: each
/// lattice term `q^mu` is scaled by the graded evaluation at `mu`.
pub fn iota_apply(f: &Poly, x: &LaurentQ) -> LaurentQ {
    assert_eq!(x.cvars(), 1, "diagonal application expects scalar coefficients");
    LaurentQ::from_terms(
        x.rank(),
        1,
        x.terms().map(|(e, c)| (e.clone(), c.mul(&graded_eval(f, e)))),
    )
}

/// The shift `H_j -> H_j - h` on Cartan polynomials, so that the shifted
/// polynomial evaluates at `mu` to the original value at `mu - rho`.
pub fn rho_shift(f: &Poly) -> Poly {
    let shift = vec![-1i64; f.nvars() - 1];
    f.shift(&shift)
}

/// Solves for the Cartan polynomial whose graded evaluation at every weight
/// `mu` reproduces the given eigenvalue datum (a polynomial in the
/// coordinates of `mu` and `h`), then checks Weyl invariance.
pub fn algebraic_hc(rs: &RootSystemData, eigen: &Poly) -> Result<Poly> {
    let n = rs.rank() + 1;
    assert_eq!(eigen.nvars(), n, "eigenvalue data carries rank + 1 variables");
    let mut out = Poly::zero(n);
    for (exp, c) in eigen.terms() {
        let mdeg: u32 = exp[..rs.rank()].iter().sum();
        let hdeg = exp[rs.rank()];
        if hdeg < mdeg {
            return Err(Error::InvalidInput(format!(
                "eigenvalue datum is not graded: monomial {exp:?} carries fewer h's \
                 than its weight degree"
            )));
        }
        let mut e = exp.clone();
        e[rs.rank()] = hdeg - mdeg;
        out.add_term(e, c.clone());
    }
    if !rs.is_invariant(&out) {
        return Err(Error::NotInvariant(format!(
            "the interpolated Cartan polynomial {out} is not Weyl invariant"
        )));
    }
    Ok(out)
}

/// Eigenvalue datum of the invariant-form Casimir: `h^2 (mu, mu)` as a
/// polynomial in the coordinates of `mu`.
pub fn casimir_eigenvalue(rs: &RootSystemData) -> Poly {
    let n = rs.rank() + 1;
    let mut out = Poly::zero(n);
    for (j, row) in rs.gram_dual().iter().enumerate() {
        for (k, g) in row.iter().enumerate() {
            let mut exp = vec![0u32; n];
            exp[j] += 1;
            exp[k] += 1;
            exp[n - 1] += 2;
            out.add_term(exp, g.clone());
        }
    }
    out
}

/// The Cartan polynomial matching the Casimir eigenvalue datum.
pub fn casimir_phi(rs: &RootSystemData) -> Poly {
    algebraic_hc(rs, &casimir_eigenvalue(rs)).expect("the Casimir datum is invariant")
}

/// Transport of a Weyl-invariant Cartan polynomial to an operator on
/// characters: multiply by the Weyl denominator, apply the rho-shifted
/// diagonal operator, divide back.
pub fn geometric_hc_apply(rs: &RootSystemData, p: &Poly, f: &LaurentQ) -> Result<LaurentQ> {
    let delta = weyl_denominator(rs);
    let shifted = rho_shift(p);
    let g = iota_apply(&shifted, &delta.mul(f));
    divide_weyl_denominator(rs, &g)
}
