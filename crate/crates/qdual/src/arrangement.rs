//! Hypertoric arrangement data: the integer matrix of hyperplane normals,
//! the GIT character and the grading cocharacter, together with their
//! combinatorics (bases, circuits, cocircuits) and Gale duality.
//!
//! An arrangement is a list of `n` integer rows `gamma_i` in a rank-`d`
//! lattice subject to three axioms:
//!
//! 1. every row is non-zero, primitive, and lies in the span of the others;
//! 2. the rows generate the cocharacter lattice as a group;
//! 3. the matrix is unimodular: every maximal minor is 0 or +-1.
//!
//! The character `theta` is stored as an integer lift in `Z^n` (its pairings
//! with circuits do not depend on the lift) and the cocharacter `xi` lives
//! in the rank-`d` lattice itself. Both are required generic: `xi` pairs
//! non-trivially with every cocircuit and `theta` with every circuit.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lin::{
    det, integer_kernel, inverse_rational, is_primitive, mat_vec, rank, solve_integer,
    to_rational, transpose,
};

/// A cocircuit: a minimal-support covector, stored both intrinsically (in the
/// rank-`d` weight lattice) and embedded (its pairings with the rows).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cocircuit {
    /// Intrinsic covector of length `d`.
    pub covector: Vec<i64>,
    /// Pairings with the rows: length `n`, entries in {-1, 0, 1}.
    pub embedded: Vec<i64>,
}

/// The enumerated combinatorics of an arrangement.
#[derive(Debug, Clone)]
pub struct ArrangementData {
    /// Sorted index sets of rows forming lattice bases.
    pub bases: Vec<Vec<usize>>,
    /// Circuits in `Z^n`, signed positively against `theta`.
    pub circuits: Vec<Vec<i64>>,
    /// Cocircuits signed positively against `xi`.
    pub cocircuits: Vec<Cocircuit>,
}

/// A validated hypertoric arrangement with generic parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    gamma: Vec<Vec<i64>>,
    theta_lift: Vec<i64>,
    xi: Vec<i64>,
}

impl Arrangement {
    /// Validates the axioms and genericity, returning the arrangement or a
    /// descriptive error.
    pub fn new(gamma: Vec<Vec<i64>>, theta_lift: Vec<i64>, xi: Vec<i64>) -> Result<Self> {
        let arr = Arrangement { gamma, theta_lift, xi };
        arr.validate()?;
        Ok(arr)
    }

    /// Number of rows (hyperplanes).
    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    /// Rank of the cocharacter lattice.
    pub fn d(&self) -> usize {
        self.gamma.first().map(|r| r.len()).unwrap_or(0)
    }

    /// The row matrix.
    pub fn gamma(&self) -> &[Vec<i64>] {
        &self.gamma
    }

    /// The integer lift of the GIT character.
    pub fn theta_lift(&self) -> &[i64] {
        &self.theta_lift
    }

    /// The grading cocharacter.
    pub fn xi(&self) -> &[i64] {
        &self.xi
    }

    /// Re-checks every axiom and genericity condition.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let d = self.d();
        if d == 0 || n == 0 {
            return Err(Error::ArrangementMismatch("empty arrangement".into()));
        }
        if self.gamma.iter().any(|r| r.len() != d) {
            return Err(Error::ArrangementMismatch("ragged row lengths".into()));
        }
        if self.theta_lift.len() != n {
            return Err(Error::ArrangementMismatch(format!(
                "theta lift has length {}, expected {}",
                self.theta_lift.len(),
                n
            )));
        }
        if self.xi.len() != d {
            return Err(Error::ArrangementMismatch(format!(
                "xi has length {}, expected {}",
                self.xi.len(),
                d
            )));
        }
        for (i, row) in self.gamma.iter().enumerate() {
            if row.iter().all(|&x| x == 0) {
                return Err(Error::ArrangementMismatch(format!("row {} is zero", i + 1)));
            }
            if !is_primitive(row) {
                return Err(Error::ArrangementMismatch(format!("row {} is not primitive", i + 1)));
            }
        }
        if rank(&self.gamma) != d {
            return Err(Error::ArrangementMismatch("rows do not span rationally".into()));
        }
        // Group surjectivity: the rows generate the cocharacter lattice.
        if !crate::lin::columns_span_lattice(&transpose(&self.gamma)) {
            return Err(Error::ArrangementMismatch(
                "rows do not generate the cocharacter lattice".into(),
            ));
        }
        // No coloops: each row lies in the span of the others.
        for i in 0..n {
            let rest: Vec<Vec<i64>> = self
                .gamma
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| r.clone())
                .collect();
            if rank(&rest) != d {
                return Err(Error::ArrangementMismatch(format!(
                    "row {} is not in the span of the others",
                    i + 1
                )));
            }
        }
        // Unimodularity: every maximal minor is 0 or +-1.
        for subset in subsets(n, d) {
            let sub: Vec<Vec<i64>> = subset.iter().map(|&i| self.gamma[i].clone()).collect();
            let m = det(&sub);
            let ok = m == crate::exact::rat(0)
                || m == crate::exact::rat(1)
                || m == crate::exact::rat(-1);
            if !ok {
                return Err(Error::ArrangementMismatch(format!(
                    "rows {:?} have determinant {} (not unimodular)",
                    subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    m
                )));
            }
        }
        // Genericity of xi on cocircuits and of theta on circuits.
        for lam in self.raw_cocircuits() {
            if self.xi_pairing(&lam) == 0 {
                return Err(Error::NonGenericParameter(format!(
                    "xi vanishes on the cocircuit {:?}",
                    lam
                )));
            }
        }
        for alpha in self.raw_circuits() {
            if self.theta_pairing(&alpha) == 0 {
                return Err(Error::NonGenericParameter(format!(
                    "theta vanishes on the circuit {:?}",
                    alpha
                )));
            }
        }
        Ok(())
    }

    /// Embeds an intrinsic covector: its pairings with the rows.
    pub fn embed(&self, covector: &[i64]) -> Vec<i64> {
        assert_eq!(covector.len(), self.d(), "covector arity mismatch");
        mat_vec(&self.gamma, covector)
    }

    /// Pairing of an intrinsic covector with `xi`.
    pub fn xi_pairing(&self, covector: &[i64]) -> i64 {
        covector.iter().zip(&self.xi).map(|(a, b)| a * b).sum()
    }

    /// Pairing of a circuit (a vector in `Z^n`) with `theta`.
    pub fn theta_pairing(&self, circuit: &[i64]) -> i64 {
        circuit.iter().zip(&self.theta_lift).map(|(a, b)| a * b).sum()
    }

    /// Cocircuits up to sign (intrinsic covectors, arbitrary normalization).
    fn raw_cocircuits(&self) -> Vec<Vec<i64>> {
        let d = self.d();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        if d == 1 {
            seen.insert(vec![1]);
        } else {
            for subset in subsets(self.n(), d - 1) {
                let sub: Vec<Vec<i64>> = subset.iter().map(|&i| self.gamma[i].clone()).collect();
                let ker = integer_kernel(&sub);
                if ker.len() != 1 {
                    continue;
                }
                seen.insert(sign_normalize(&ker[0]));
            }
        }
        seen.into_iter().collect()
    }

    /// Circuits up to sign (vectors in `Z^n` with minimal support).
    fn raw_circuits(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let d = self.d();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        for size in 2..=(d + 1).min(n) {
            for subset in subsets(n, size) {
                let cols: Vec<Vec<i64>> = subset.iter().map(|&i| self.gamma[i].clone()).collect();
                let ker = integer_kernel(&transpose(&cols));
                if ker.len() != 1 {
                    continue;
                }
                let c = &ker[0];
                if c.iter().any(|&x| x == 0) {
                    // Not full support: a smaller subset already carries it.
                    continue;
                }
                let mut full = vec![0i64; n];
                for (slot, &i) in subset.iter().enumerate() {
                    full[i] = c[slot];
                }
                seen.insert(sign_normalize(&full));
            }
        }
        seen.into_iter().collect()
    }

    /// Enumerates bases, theta-positive circuits and xi-positive cocircuits.
    pub fn enumerate(&self) -> ArrangementData {
        let n = self.n();
        let d = self.d();
        let mut bases = Vec::new();
        for subset in subsets(n, d) {
            let sub: Vec<Vec<i64>> = subset.iter().map(|&i| self.gamma[i].clone()).collect();
            let m = det(&sub);
            if m != crate::exact::rat(0) {
                bases.push(subset);
            }
        }
        let circuits = self
            .raw_circuits()
            .into_iter()
            .map(|c| {
                if self.theta_pairing(&c) > 0 {
                    c
                } else {
                    c.iter().map(|x| -x).collect()
                }
            })
            .collect();
        let mut cocircuits: Vec<Cocircuit> = self
            .raw_cocircuits()
            .into_iter()
            .map(|lam| {
                let lam = if self.xi_pairing(&lam) > 0 {
                    lam
                } else {
                    lam.iter().map(|x| -x).collect()
                };
                let embedded = self.embed(&lam);
                Cocircuit { covector: lam, embedded }
            })
            .collect();
        cocircuits.sort_by(|a, b| a.embedded.cmp(&b.embedded));
        ArrangementData { bases, circuits, cocircuits }
    }

    /// The xi-positive cocircuits, sorted by embedded vector.
    pub fn positive_cocircuits(&self) -> Vec<Cocircuit> {
        self.enumerate().cocircuits
    }

    /// The theta-positive circuits.
    pub fn positive_circuits(&self) -> Vec<Vec<i64>> {
        self.enumerate().circuits
    }

    /// The lattice bases among the rows.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        self.enumerate().bases
    }

    /// The dual basis to the rows indexed by `basis`: integral covectors
    /// `lam_j` with `<lam_j, gamma_{b_k}> = delta_{jk}`.
    pub fn dual_basis_weights(&self, basis: &[usize]) -> Result<Vec<Vec<i64>>> {
        let d = self.d();
        if basis.len() != d
            || basis.iter().any(|&i| i >= self.n())
            || (1..basis.len()).any(|k| basis[k] <= basis[k - 1])
        {
            return Err(Error::NotABasis(basis.to_vec()));
        }
        let sub: Vec<Vec<i64>> = basis.iter().map(|&i| self.gamma[i].clone()).collect();
        let inv = inverse_rational(&to_rational(&sub)).ok_or(Error::NotABasis(basis.to_vec()))?;
        let mut out = Vec::with_capacity(d);
        for j in 0..d {
            let mut lam = Vec::with_capacity(d);
            for row in inv.iter() {
                let entry = &row[j];
                if !num::One::is_one(entry.denom()) {
                    return Err(Error::NotABasis(basis.to_vec()));
                }
                lam.push(
                    i64::try_from(entry.numer().clone())
                        .map_err(|_| Error::NotABasis(basis.to_vec()))?,
                );
            }
            out.push(lam);
        }
        Ok(out)
    }

    /// An integral basis of the relation lattice: vectors `theta` in `Z^n`
    /// with `sum_i theta_i gamma_i = 0`. These index the central linear
    /// forms `theta(a) = sum_i theta_i a_i`.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        integer_kernel(&transpose(&self.gamma))
    }

    /// The Gale dual arrangement.
    ///
    /// Its rows are the coordinates of an integral basis of the kernel of
    /// the row map; the dual character lift solves `sum_i r_i gamma_i = xi`
    /// and the dual cocharacter is the pairing of `theta` with the kernel
    /// basis. Genericity of the dual parameters is inherited (and
    /// re-checked).
    pub fn gale_dual(&self) -> Result<Arrangement> {
        let mut kernel = integer_kernel(&transpose(&self.gamma));
        if kernel.len() != self.n() - self.d() {
            return Err(Error::ArrangementMismatch("kernel rank mismatch".into()));
        }
        // Orient each kernel vector so its first nonzero coordinate is
        // positive; the dual is unique only up to this lattice coordinate
        // choice, and the oriented one matches the hand computations.
        for k in &mut kernel {
            if k.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                for x in k.iter_mut() {
                    *x = -*x;
                }
            }
        }
        // Rows of the dual: i-th coordinates across the kernel basis.
        let dual_gamma: Vec<Vec<i64>> =
            (0..self.n()).map(|i| kernel.iter().map(|k| k[i]).collect()).collect();
        let dual_theta = solve_integer(&transpose(&self.gamma), &self.xi).ok_or_else(|| {
            Error::ArrangementMismatch("xi is not an integral combination of the rows".into())
        })?;
        let dual_xi: Vec<i64> = kernel
            .iter()
            .map(|k| k.iter().zip(&self.theta_lift).map(|(a, b)| a * b).sum())
            .collect();
        Arrangement::new(dual_gamma, dual_theta, dual_xi)
    }

    /// Certifies membership of an intrinsic weight in the semigroup spanned
    /// by the xi-positive cocircuits: returns multiplicities summing to the
    /// weight, or [`Error::NotInSemigroup`].
    pub fn semigroup_certificate(&self, lam: &[i64]) -> Result<Vec<(Vec<i64>, u32)>> {
        assert_eq!(lam.len(), self.d(), "weight arity mismatch");
        let cocircuits = self.positive_cocircuits();
        let levels: Vec<i64> = cocircuits.iter().map(|c| self.xi_pairing(&c.covector)).collect();
        let target_level = self.xi_pairing(lam);
        if target_level < 0 {
            return Err(Error::NotInSemigroup(lam.to_vec()));
        }
        let mut memo: BTreeSet<(usize, Vec<i64>)> = BTreeSet::new();
        let mut acc: Vec<u32> = vec![0; cocircuits.len()];
        if search_semigroup(lam.to_vec(), 0, &cocircuits, &levels, &self.xi, &mut acc, &mut memo) {
            Ok(cocircuits
                .iter()
                .zip(&acc)
                .filter(|(_, &m)| m > 0)
                .map(|(c, &m)| (c.covector.clone(), m))
                .collect())
        } else {
            Err(Error::NotInSemigroup(lam.to_vec()))
        }
    }

    /// A cancellation-free decomposition of an intrinsic weight into signed
    /// cocircuits: parts whose embedded vectors never carry opposite signs in
    /// any coordinate. Parts are returned sorted by embedded vector; repeats
    /// are listed with multiplicity.
    pub fn cancellation_free(&self, lam: &[i64]) -> Result<Vec<Cocircuit>> {
        assert_eq!(lam.len(), self.d(), "weight arity mismatch");
        // Both signs of every cocircuit are candidate parts.
        let mut candidates: Vec<Cocircuit> = Vec::new();
        for c in self.positive_cocircuits() {
            let neg = Cocircuit {
                covector: c.covector.iter().map(|x| -x).collect(),
                embedded: c.embedded.iter().map(|x| -x).collect(),
            };
            candidates.push(c);
            candidates.push(neg);
        }
        candidates.sort_by(|a, b| a.embedded.cmp(&b.embedded));
        let target = self.embed(lam);
        let mut memo: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut parts: Vec<usize> = Vec::new();
        if !search_cancellation_free(&target, &candidates, &mut parts, &mut memo) {
            return Err(Error::DivisionFailure(format!(
                "no cancellation-free decomposition of {:?}",
                lam
            )));
        }
        let mut out: Vec<Cocircuit> = parts.iter().map(|&i| candidates[i].clone()).collect();
        out.sort_by(|a, b| a.embedded.cmp(&b.embedded));
        Ok(out)
    }
}

/// Sign normalization: first non-zero entry positive.
fn sign_normalize(v: &[i64]) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.iter().map(|y| -y).collect(),
        _ => v.to_vec(),
    }
}

/// All sorted `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=(n.saturating_sub(need)) {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut cur, &mut out);
    }
    out
}

fn search_semigroup(
    remaining: Vec<i64>,
    idx: usize,
    cocircuits: &[Cocircuit],
    levels: &[i64],
    xi: &[i64],
    acc: &mut Vec<u32>,
    memo: &mut BTreeSet<(usize, Vec<i64>)>,
) -> bool {
    if remaining.iter().all(|&x| x == 0) {
        return true;
    }
    if idx == cocircuits.len() {
        return false;
    }
    let level: i64 = remaining.iter().zip(xi).map(|(a, b)| a * b).sum();
    if level <= 0 {
        return false;
    }
    if memo.contains(&(idx, remaining.clone())) {
        return false;
    }
    let max_mult = level / levels[idx];
    for m in (0..=max_mult).rev() {
        let next: Vec<i64> = remaining
            .iter()
            .zip(&cocircuits[idx].covector)
            .map(|(r, c)| r - m * c)
            .collect();
        acc[idx] = m as u32;
        if search_semigroup(next, idx + 1, cocircuits, levels, xi, acc, memo) {
            return true;
        }
    }
    acc[idx] = 0;
    memo.insert((idx, remaining));
    false
}

fn search_cancellation_free(
    target: &[i64],
    candidates: &[Cocircuit],
    parts: &mut Vec<usize>,
    memo: &mut BTreeSet<Vec<i64>>,
) -> bool {
    if target.iter().all(|&x| x == 0) {
        return true;
    }
    if memo.contains(target) {
        return false;
    }
    for (i, c) in candidates.iter().enumerate() {
        // Sign compatibility coordinate-by-coordinate: subtracting the part
        // must strictly shrink the l1 norm in every supported coordinate.
        let compatible = c
            .embedded
            .iter()
            .zip(target)
            .all(|(&e, &t)| e == 0 || (e * t > 0 && e.abs() <= t.abs()));
        if !compatible {
            continue;
        }
        let next: Vec<i64> = target.iter().zip(&c.embedded).map(|(t, e)| t - e).collect();
        parts.push(i);
        if search_cancellation_free(&next, candidates, parts, memo) {
            return true;
        }
        parts.pop();
    }
    memo.insert(target.to_vec());
    false
}

/// Samples a random valid arrangement of graphic type (rows drawn from
/// coordinate vectors and their differences), with random generic parameters.
/// Used by the property-test suites.
pub fn random_arrangement<R: Rng>(rng: &mut R, max_n: usize, max_d: usize) -> Arrangement {
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=max_d);
        let n = rng.gen_range((d + 1).max(2)..=max_n.max(d + 1));
        let mut pool: Vec<Vec<i64>> = Vec::new();
        for i in 0..d {
            let mut e = vec![0i64; d];
            e[i] = 1;
            pool.push(e);
        }
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    let mut v = vec![0i64; d];
                    v[i] = 1;
                    v[j] = -1;
                    pool.push(v);
                }
            }
        }
        let gamma: Vec<Vec<i64>> =
            (0..n).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let theta: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
        let xi: Vec<i64> = (0..d).map(|_| rng.gen_range(-6..=6)).collect();
        if let Ok(arr) = Arrangement::new(gamma, theta, xi) {
            return arr;
        }
    }
    panic!("sampler failed to find a valid arrangement");
}

/// The rank-1 double point: gamma = (1, 1), the smallest valid arrangement.
pub fn example_a1() -> Arrangement {
    Arrangement::new(vec![vec![1], vec![1]], vec![1, 0], vec![1]).expect("valid by construction")
}

/// The rank-3 example on five hyperplanes: rows x1, x2, x3, x1 - x3,
/// x2 - x3 with xi = x1 - 3 x2 + x3 (paired against covectors) and a generic
/// character lift.
pub fn example_rank3() -> Arrangement {
    Arrangement::new(
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, -1], vec![0, 1, -1]],
        vec![1, 2, 4, 0, 0],
        vec![1, -3, 1],
    )
    .expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_examples_validate() {
        example_a1();
        example_rank3();
    }

    #[test]
    fn axioms_rejected() {
        // Non-primitive row.
        assert!(matches!(
            Arrangement::new(vec![vec![2], vec![1]], vec![1, 0], vec![1]),
            Err(Error::ArrangementMismatch(_))
        ));
        // Coloop: a single row carries the second coordinate.
        assert!(matches!(
            Arrangement::new(vec![vec![1, 0], vec![1, 0], vec![0, 1]], vec![1, 0, 0], vec![1, 1]),
            Err(Error::ArrangementMismatch(_))
        ));
        // Not unimodular: rows of a 2x2 with determinant 2 plus spares.
        assert!(matches!(
            Arrangement::new(
                vec![vec![1, 1], vec![1, -1], vec![1, 0], vec![0, 1]],
                vec![1, 1, 1, 0],
                vec![1, 2]
            ),
            Err(Error::ArrangementMismatch(_))
        ));
        // Non-generic xi: pairs to zero with the cocircuit of the A1 example.
        assert!(matches!(
            Arrangement::new(vec![vec![1], vec![1]], vec![1, 0], vec![0]),
            Err(Error::ArrangementMismatch(_)) | Err(Error::NonGenericParameter(_))
        ));
        // Non-generic theta on the circuit (1, -1).
        assert!(matches!(
            Arrangement::new(vec![vec![1], vec![1]], vec![1, 1], vec![1]),
            Err(Error::NonGenericParameter(_))
        ));
    }

    #[test]
    fn a1_combinatorics() {
        let arr = example_a1();
        let data = arr.enumerate();
        assert_eq!(data.bases, vec![vec![0], vec![1]]);
        // One circuit, signed by theta = (1, 0): (1, -1).
        assert_eq!(data.circuits, vec![vec![1, -1]]);
        // One positive cocircuit with embedded (1, 1).
        assert_eq!(data.cocircuits.len(), 1);
        assert_eq!(data.cocircuits[0].covector, vec![1]);
        assert_eq!(data.cocircuits[0].embedded, vec![1, 1]);
    }

    #[test]
    fn rank3_combinatorics() {
        let arr = example_rank3();
        let data = arr.enumerate();
        assert_eq!(data.bases.len(), 8);
        assert_eq!(data.circuits.len(), 3);
        // The six positive cocircuits of the example, with xi-levels
        // 1, 3, 1, 2, 2, 1.
        let mut found: Vec<(Vec<i64>, i64)> = data
            .cocircuits
            .iter()
            .map(|c| (c.covector.clone(), arr.xi_pairing(&c.covector)))
            .collect();
        found.sort();
        let mut expect = vec![
            (vec![1, 0, 0], 1),
            (vec![0, -1, 0], 3),
            (vec![0, 0, 1], 1),
            (vec![0, -1, -1], 2),
            (vec![1, 0, 1], 2),
            (vec![-1, -1, -1], 1),
        ];
        expect.sort();
        assert_eq!(found, expect);
        // Embedded forms match the stated pairings with the rows.
        for c in &data.cocircuits {
            assert_eq!(c.embedded, arr.embed(&c.covector));
            assert!(c.embedded.iter().all(|x| x.abs() <= 1));
        }
    }

    #[test]
    fn dual_basis_works() {
        let arr = example_rank3();
        for basis in arr.bases() {
            let duals = arr.dual_basis_weights(&basis).unwrap();
            for (j, lam) in duals.iter().enumerate() {
                let emb = arr.embed(lam);
                for (k, &row) in basis.iter().enumerate() {
                    assert_eq!(emb[row], i64::from(j == k));
                }
            }
        }
        assert!(arr.dual_basis_weights(&[0, 1]).is_err());
        assert!(arr.dual_basis_weights(&[0, 2, 1]).is_err());
        // {1, 3, 4} in 1-based labels ({0, 2, 3} here) is dependent.
        assert!(arr.dual_basis_weights(&[0, 2, 3]).is_err());
    }

    #[test]
    fn gale_duality_round_trip() {
        let arr = example_rank3();
        let dual = arr.gale_dual().unwrap();
        assert_eq!(dual.n(), 5);
        assert_eq!(dual.d(), 2);
        // Circuits of the dual are the embedded cocircuits of the primal,
        // with matching positive signs.
        let dual_circuits: BTreeSet<Vec<i64>> = dual.positive_circuits().into_iter().collect();
        let primal_cocircuits: BTreeSet<Vec<i64>> =
            arr.positive_cocircuits().into_iter().map(|c| c.embedded).collect();
        assert_eq!(dual_circuits, primal_cocircuits);
        // And the other way around.
        let dual_cocircuits: BTreeSet<Vec<i64>> =
            dual.positive_cocircuits().into_iter().map(|c| c.embedded).collect();
        let primal_circuits: BTreeSet<Vec<i64>> = arr.positive_circuits().into_iter().collect();
        assert_eq!(dual_cocircuits, primal_circuits);
        // Double dual recovers the original rows up to a unimodular change
        // of coordinates.
        let ddual = dual.gale_dual().unwrap();
        assert!(same_up_to_gl(arr.gamma(), ddual.gamma()));
    }

    pub(super) fn same_up_to_gl(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
        use crate::exact::rat;
        use crate::lin::{mat_mul_rational, solve_rational};
        if a.len() != b.len() || a[0].len() != b[0].len() {
            return false;
        }
        let d = a[0].len();
        // Solve a * m = b column by column over the rationals.
        let arat = to_rational(a);
        let mut m: Vec<Vec<crate::exact::Rat>> = vec![vec![rat(0); d]; d];
        for j in 0..d {
            let rhs: Vec<crate::exact::Rat> = b.iter().map(|row| rat(row[j])).collect();
            match solve_rational(&arat, &rhs) {
                Some(col) => {
                    for i in 0..d {
                        m[i][j] = col[i].clone();
                    }
                }
                None => return false,
            }
        }
        // Integral, determinant +-1, and exact.
        if m.iter().flatten().any(|x| !num::One::is_one(x.denom())) {
            return false;
        }
        let detm = crate::lin::det_rational(&m);
        if detm != rat(1) && detm != rat(-1) {
            return false;
        }
        mat_mul_rational(&arat, &m) == to_rational(b)
    }

    #[test]
    fn a1_gale_dual_parameters() {
        let arr = example_a1();
        let dual = arr.gale_dual().unwrap();
        // Kernel of (1 1) is spanned by +-(1, -1).
        assert_eq!(dual.gamma().len(), 2);
        assert_eq!(dual.gamma()[0][0] + dual.gamma()[1][0], 0);
        // Dual theta lift solves r1 + r2 = xi = 1.
        assert_eq!(dual.theta_lift().iter().sum::<i64>(), 1);
        dual.validate().unwrap();
    }

    #[test]
    fn semigroup_certificates() {
        let arr = example_rank3();
        // lam = -e1 - e2 = e3 + (-e1 - e2 - e3), both positive cocircuits.
        let lam = vec![-1, -1, 0];
        let cert = arr.semigroup_certificate(&lam).unwrap();
        let mut total = vec![0i64; 3];
        for (cov, mult) in &cert {
            for (t, c) in total.iter_mut().zip(cov) {
                *t += c * (*mult as i64);
            }
        }
        assert_eq!(total, lam);
        // A weight with negative xi-level is rejected.
        assert!(matches!(
            arr.semigroup_certificate(&[-1, 3, -1]),
            Err(Error::NotInSemigroup(_))
        ));
        // e2 has level -3 < 0; -e2 has level 3 and is itself positive.
        assert!(arr.semigroup_certificate(&[0, -1, 0]).is_ok());
        assert!(arr.semigroup_certificate(&[0, 1, 0]).is_err());
    }

    #[test]
    fn cancellation_free_examples() {
        let arr = example_rank3();
        // The motivating example: lam = -e1 - e2 decomposes
        // cancellation-freely as (-e1) + (-e2), not as the semigroup pair.
        let parts = arr.cancellation_free(&[-1, -1, 0]).unwrap();
        let covs: BTreeSet<Vec<i64>> = parts.iter().map(|c| c.covector.clone()).collect();
        assert_eq!(covs, BTreeSet::from([vec![-1, 0, 0], vec![0, -1, 0]]));
        // No coordinate cancellation between any two parts.
        for a in &parts {
            for b in &parts {
                assert!(a.embedded.iter().zip(&b.embedded).all(|(x, y)| x * y >= 0));
            }
        }
        // The parts sum to the weight.
        let mut total = vec![0i64; 3];
        for p in &parts {
            for (t, c) in total.iter_mut().zip(&p.covector) {
                *t += c;
            }
        }
        assert_eq!(total, vec![-1, -1, 0]);
    }

    #[test]
    fn cancellation_free_randomized() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let arr = random_arrangement(&mut rng, 6, 3);
            let d = arr.d();
            for _ in 0..8 {
                let lam: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
                let parts = arr.cancellation_free(&lam).unwrap();
                let mut total = vec![0i64; d];
                for p in &parts {
                    for (t, c) in total.iter_mut().zip(&p.covector) {
                        *t += c;
                    }
                }
                assert_eq!(total, lam);
                for a in &parts {
                    for b in &parts {
                        assert!(a.embedded.iter().zip(&b.embedded).all(|(x, y)| x * y >= 0));
                    }
                }
            }
        }
    }

    #[test]
    fn random_sampler_is_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let arr = random_arrangement(&mut rng, 7, 3);
            arr.validate().unwrap();
            let dual = arr.gale_dual().unwrap();
            let ddual = dual.gale_dual().unwrap();
            assert!(same_up_to_gl(arr.gamma(), ddual.gamma()));
        }
    }
}
