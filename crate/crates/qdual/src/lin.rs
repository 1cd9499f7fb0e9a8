//! Small exact linear algebra over the integers and rationals.
//!
//! Matrices are row-major `Vec<Vec<i64>>` (or rational entries where noted).
//! The sizes in this crate are tiny (at most a dozen rows), so the
//! implementations favor clarity: column Hermite reduction with a tracked
//! unimodular transform for lattice kernels and solving, rational Gaussian
//! elimination for everything over the field.

use num::{One, Zero};

use crate::exact::poly::{rat, Rat};

/// Transpose of a row-major matrix.
pub fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// Identity matrix.
pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Integer matrix product.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "inner dimension mismatch");
            (0..cols).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect()
        })
        .collect()
}

/// Matrix-vector product.
pub fn mat_vec(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), x.len(), "dimension mismatch");
            row.iter().zip(x).map(|(m, v)| m * v).sum()
        })
        .collect()
}

/// True when the entries have no common factor beyond a unit (and the vector
/// is non-zero).
pub fn is_primitive(v: &[i64]) -> bool {
    let mut g: i64 = 0;
    for &x in v {
        g = gcd(g, x);
    }
    g == 1
}

/// Non-negative greatest common divisor.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Column Hermite reduction `(h, u)` with `h = a * u`, `u` unimodular, and
/// `h` in column echelon form (each processed row has a single surviving
/// pivot column, rows below unconstrained). Returns the echelon matrix, the
/// transform and the pivot positions `(row, col)`.
fn column_echelon(a: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>, Vec<(usize, usize)>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(cols);
    let mut pivots = Vec::new();
    let mut c = 0usize;
    for r in 0..rows {
        if c >= cols {
            break;
        }
        // Clear row r across columns c.. by gcd elimination.
        loop {
            let mut best: Option<usize> = None;
            for j in c..cols {
                if h[r][j] != 0 {
                    best = match best {
                        None => Some(j),
                        Some(b) if h[r][j].abs() < h[r][b].abs() => Some(j),
                        keep => keep,
                    };
                }
            }
            let Some(j) = best else { break };
            if j != c {
                for row in h.iter_mut() {
                    row.swap(c, j);
                }
                for row in u.iter_mut() {
                    row.swap(c, j);
                }
            }
            let mut done = true;
            for j in (c + 1)..cols {
                if h[r][j] != 0 {
                    let q = h[r][j].div_euclid(h[r][c]);
                    if q != 0 {
                        for row in h.iter_mut() {
                            row[j] -= q * row[c];
                        }
                        for row in u.iter_mut() {
                            row[j] -= q * row[c];
                        }
                    }
                    if h[r][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c] != 0 {
            if h[r][c] < 0 {
                for row in h.iter_mut() {
                    row[c] = -row[c];
                }
                for row in u.iter_mut() {
                    row[c] = -row[c];
                }
            }
            pivots.push((r, c));
            c += 1;
        }
    }
    (h, u, pivots)
}

/// Basis of the integer kernel `{x : a x = 0}`. Kernels of integer maps are
/// saturated subgroups, so this is a genuine lattice basis of all integer
/// solutions.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let (_, u, pivots) = column_echelon(a);
    let rank = pivots.len();
    (rank..cols).map(|j| u.iter().map(|row| row[j]).collect()).collect()
}

/// One integer solution of `a x = b`, or `None` when none exists.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(a.len(), b.len());
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let (h, u, pivots) = column_echelon(a);
    let mut y = vec![0i64; cols];
    for &(r, c) in &pivots {
        let mut acc: i64 = 0;
        for j in 0..c {
            acc += h[r][j] * y[j];
        }
        let rhs = b[r] - acc;
        if rhs % h[r][c] != 0 {
            return None;
        }
        y[c] = rhs / h[r][c];
    }
    // Verify the skipped rows.
    for (r, row) in h.iter().enumerate() {
        let acc: i64 = row.iter().zip(&y).map(|(m, v)| m * v).sum();
        if acc != b[r] {
            return None;
        }
    }
    Some(mat_vec(&u, &y))
}

/// True when the columns of `a` span the full integer lattice of their
/// ambient rank.
pub fn columns_span_lattice(a: &[Vec<i64>]) -> bool {
    let rows = a.len();
    let (h, _, pivots) = column_echelon(a);
    if pivots.len() != rows {
        return false;
    }
    // Surjectivity onto Z^rows: every standard vector must be hit, which for
    // a full-rank echelon set of columns means solving is always exact.
    for i in 0..rows {
        let e: Vec<i64> = (0..rows).map(|j| i64::from(i == j)).collect();
        let mut y = vec![0i64; pivots.len()];
        let mut ok = true;
        for (idx, &(r, c)) in pivots.iter().enumerate() {
            let mut acc = 0i64;
            for (jdx, &(_, cj)) in pivots.iter().enumerate().take(idx) {
                acc += h[r][cj] * y[jdx];
            }
            let rhs = e[r] - acc;
            if rhs % h[r][c] != 0 {
                ok = false;
                break;
            }
            y[idx] = rhs / h[r][c];
        }
        if !ok {
            return false;
        }
        for (r, row) in h.iter().enumerate() {
            let acc: i64 = pivots.iter().enumerate().map(|(jdx, &(_, cj))| row[cj] * y[jdx]).sum();
            if acc != e[r] {
                return false;
            }
        }
    }
    true
}

/// Determinant of a square integer matrix, computed exactly over the
/// rationals.
pub fn det(a: &[Vec<i64>]) -> Rat {
    let m: Vec<Vec<Rat>> = a.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
    det_rational(&m)
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn det_rational(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = Rat::one();
    let mut detv = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        let pivot = m[c][c].clone();
        detv *= &pivot;
        for r in (c + 1)..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] / &pivot;
            for j in c..n {
                let upd = &m[c][j] * &factor;
                m[r][j] -= upd;
            }
        }
    }
    sign * detv
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn inverse_rational(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut inv: Vec<Vec<Rat>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        inv.swap(p, c);
        let pivot = m[c][c].clone();
        for j in 0..n {
            m[c][j] /= &pivot;
            inv[c][j] /= &pivot;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                for j in 0..n {
                    let upd = &m[c][j] * &factor;
                    m[r][j] -= upd;
                    let upd = &inv[c][j] * &factor;
                    inv[r][j] -= upd;
                }
            }
        }
    }
    Some(inv)
}

/// Solves `a x = b` over the rationals (`a` row-major, any shape); returns
/// one solution or `None` when inconsistent.
pub fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r0 = 0usize;
    for c in 0..cols {
        let Some(p) = (r0..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(p, r0);
        let pivot = m[r0][c].clone();
        for j in 0..=cols {
            m[r0][j] /= &pivot;
        }
        for r in 0..rows {
            if r != r0 && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                for j in 0..=cols {
                    let upd = &m[r0][j] * &factor;
                    m[r][j] -= upd;
                }
            }
        }
        pivots.push((r0, c));
        r0 += 1;
        if r0 == rows {
            break;
        }
    }
    for r in r0..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// The rational row space dimension.
pub fn rank(a: &[Vec<i64>]) -> usize {
    let (_, _, pivots) = column_echelon(a);
    pivots.len()
}

/// Rational matrix product.
pub fn mat_mul_rational(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .map(|(x, br)| x * &br[j])
                        .fold(Rat::zero(), |acc, t| acc + t)
                })
                .collect()
        })
        .collect()
}

/// Converts an integer matrix to rational entries.
pub fn to_rational(a: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    a.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_sum_map() {
        // gamma = (1,1) transposed: kernel of [1 1] is spanned by (1,-1).
        let k = integer_kernel(&[vec![1, 1]]);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v[0] + v[1], 0);
        assert_eq!(v[0].abs(), 1);
    }

    #[test]
    fn kernel_is_saturated() {
        // The kernel of [2 4] over Z is spanned by (2,-1), not (4,-2).
        let k = integer_kernel(&[vec![2, 4]]);
        assert_eq!(k.len(), 1);
        assert!(is_primitive(&k[0]));
        assert_eq!(2 * k[0][0] + 4 * k[0][1], 0);
    }

    #[test]
    fn kernel_rank_three_example() {
        // Rows x1, x2, x3, x1-x3, x2-x3 as columns of the transpose.
        let gamma = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 0, -1],
            vec![0, 1, -1],
        ];
        let k = integer_kernel(&transpose(&gamma));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(mat_vec(&transpose(&gamma), v), vec![0, 0, 0]);
            assert!(is_primitive(v));
        }
    }

    #[test]
    fn integer_solving() {
        let a = vec![vec![2, 1], vec![1, 1]];
        let x = solve_integer(&a, &[7, 4]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![7, 4]);
        // 2x = 3 has no integer solution.
        assert!(solve_integer(&[vec![2]], &[3]).is_none());
    }

    #[test]
    fn lattice_span_checks() {
        assert!(columns_span_lattice(&transpose(&[vec![1, 0], vec![0, 1], vec![1, 1]])));
        assert!(columns_span_lattice(&transpose(&[vec![1], vec![1]])));
        // Rows 2e1, e2 span an index-2 sublattice.
        assert!(!columns_span_lattice(&transpose(&[vec![2, 0], vec![0, 1]])));
        // Rank-deficient rows never span.
        assert!(!columns_span_lattice(&transpose(&[vec![1, 1], vec![2, 2]])));
    }

    #[test]
    fn determinants_and_inverses() {
        assert_eq!(det(&[vec![1, 2], vec![3, 4]]), rat(-2));
        assert_eq!(det(&[vec![1, 1], vec![2, 2]]), rat(0));
        let inv = inverse_rational(&to_rational(&[vec![1, 2], vec![3, 4]])).unwrap();
        let prod = mat_mul_rational(&to_rational(&[vec![1, 2], vec![3, 4]]), &inv);
        assert_eq!(prod[0][0], rat(1));
        assert_eq!(prod[0][1], rat(0));
        assert_eq!(prod[1][1], rat(1));
    }

    #[test]
    fn rational_solve() {
        let a = to_rational(&[vec![1, 2, 0], vec![0, 1, 1]]);
        let b = [rat(5), rat(3)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(&x[0] + &x[1] * rat(2), rat(5));
        assert_eq!(&x[1] + &x[2], rat(3));
        let bad = to_rational(&[vec![1, 1], vec![1, 1]]);
        assert!(solve_rational(&bad, &[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn rank_counts_pivots() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4], vec![0, 1]]), 2);
        assert_eq!(rank(&[vec![0, 0]]), 0);
    }
}
