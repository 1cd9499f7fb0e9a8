//! A small Buchberger engine over the rationals.
//!
//! Used for the commutative certificates: dimension counts of zero-dimensional
//! quotients (point counts of fiber algebras) and two-sided ideal-equality
//! checks by mutual reduction. Monomials are ordered by graded reverse
//! lexicographic order.

use std::cmp::Ordering;



use crate::exact::poly::{Poly, Rat};

/// Graded reverse lexicographic comparison of exponent vectors.
pub fn cmp_grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    // Same degree: the monomial whose last non-zero entry of a - b is
    // negative is the larger one.
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
            Ordering::Equal => {}
        }
    }
    Ordering::Equal
}

fn leading_term(p: &Poly) -> Option<(Vec<u32>, Rat)> {
    p.terms()
        .max_by(|(ea, _), (eb, _)| cmp_grevlex(ea, eb))
        .map(|(e, c)| (e.clone(), c.clone()))
}

fn monomial_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm_exp(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// A reduced Groebner basis of an ideal in `Q[x_1, ..., x_n]`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    nvars: usize,
    gens: Vec<Poly>,
}

impl GroebnerBasis {
    /// Runs Buchberger's algorithm and reduces the result.
    pub fn new(generators: &[Poly]) -> Self {
        let nvars = generators.first().map(|p| p.nvars()).unwrap_or(0);
        let mut basis: Vec<Poly> = Vec::new();
        for g in generators {
            assert_eq!(g.nvars(), nvars, "generators must share a variable set");
            if !g.is_zero() {
                basis.push(g.clone());
            }
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..basis.len() {
            for j in 0..i {
                pairs.push((j, i));
            }
        }
        while let Some((i, j)) = pairs.pop() {
            let (ei, _) = leading_term(&basis[i]).expect("basis elements are non-zero");
            let (ej, _) = leading_term(&basis[j]).expect("basis elements are non-zero");
            // Buchberger's first criterion: coprime leading monomials reduce
            // to zero automatically.
            if ei.iter().zip(&ej).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            let s = s_polynomial(&basis[i], &basis[j]);
            let r = reduce_by(&s, &basis);
            if !r.is_zero() {
                for k in 0..basis.len() {
                    pairs.push((k, basis.len()));
                }
                basis.push(r);
            }
        }
        // Minimalize: drop generators whose leading monomial another divides.
        let mut keep = vec![true; basis.len()];
        let leads: Vec<Vec<u32>> =
            basis.iter().map(|g| leading_term(g).expect("non-zero").0).collect();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i != j
                    && keep[j]
                    && monomial_divides(&leads[j], &leads[i])
                    && (i > j || leads[i] != leads[j])
                {
                    keep[i] = false;
                    break;
                }
            }
        }
        let minimal: Vec<Poly> =
            basis.into_iter().zip(&keep).filter(|(_, &k)| k).map(|(g, _)| g).collect();
        // Reduce tails against the rest and normalize leading coefficients.
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Poly> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = reduce_by(&minimal[i], &others);
            if !r.is_zero() {
                let (_, lc) = leading_term(&r).expect("non-zero");
                reduced.push(r.scale(&(Rat::from_integer(1.into()) / lc)));
            }
        }
        reduced.sort();
        GroebnerBasis { nvars, gens: reduced }
    }

    /// The reduced generators.
    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    /// Normal form of `f` modulo the basis.
    pub fn reduce(&self, f: &Poly) -> Poly {
        reduce_by(f, &self.gens)
    }

    /// Ideal membership.
    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).is_zero()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.gens.iter().any(|g| g.total_degree() == Some(0))
    }

    /// The monomials outside the leading-term ideal, when finitely many: a
    /// basis of the quotient. `None` when the quotient is
    /// infinite-dimensional.
    pub fn standard_monomials(&self) -> Option<Vec<Vec<u32>>> {
        if self.is_unit_ideal() {
            return Some(Vec::new());
        }
        let leads: Vec<Vec<u32>> =
            self.gens.iter().map(|g| leading_term(g).expect("non-zero").0).collect();
        // Zero-dimensionality: every variable needs a pure power among the
        // leading monomials.
        let mut caps = vec![None::<u32>; self.nvars];
        for lead in &leads {
            let nz: Vec<usize> = (0..self.nvars).filter(|&i| lead[i] > 0).collect();
            if nz.len() == 1 {
                let i = nz[0];
                caps[i] = Some(caps[i].map_or(lead[i], |c: u32| c.min(lead[i])));
            }
        }
        if self.nvars > 0 && caps.iter().any(|c| c.is_none()) {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        enumerate_standard(&leads, &caps, &mut cur, 0, &mut out);
        Some(out)
    }

    /// Dimension of the quotient as a rational vector space, when finite.
    pub fn quotient_dimension(&self) -> Option<usize> {
        self.standard_monomials().map(|m| m.len())
    }

    /// True when this basis and `other` generate the same ideal.
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        self.gens.iter().all(|g| other.contains(g)) && other.gens.iter().all(|g| self.contains(g))
    }
}

fn enumerate_standard(
    leads: &[Vec<u32>],
    caps: &[Option<u32>],
    cur: &mut Vec<u32>,
    var: usize,
    out: &mut Vec<Vec<u32>>,
) {
    if leads.iter().any(|l| monomial_divides(l, cur)) {
        return;
    }
    if var == cur.len() {
        out.push(cur.clone());
        return;
    }
    let cap = caps[var].expect("zero-dimensionality checked by caller");
    for e in 0..=cap {
        cur[var] = e;
        enumerate_standard(leads, caps, cur, var + 1, out);
    }
    cur[var] = 0;
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (ef, cf) = leading_term(f).expect("non-zero");
    let (eg, cg) = leading_term(g).expect("non-zero");
    let l = lcm_exp(&ef, &eg);
    let mf = Poly::from_terms(
        f.nvars(),
        [(l.iter().zip(&ef).map(|(a, b)| a - b).collect::<Vec<u32>>(), Rat::from_integer(1.into()) / cf)],
    );
    let mg = Poly::from_terms(
        g.nvars(),
        [(l.iter().zip(&eg).map(|(a, b)| a - b).collect::<Vec<u32>>(), Rat::from_integer(1.into()) / cg)],
    );
    mf.mul(f).sub(&mg.mul(g))
}

fn reduce_by(f: &Poly, basis: &[Poly]) -> Poly {
    let mut rem = Poly::zero(f.nvars());
    let mut work = f.clone();
    let leads: Vec<(Vec<u32>, Rat)> = basis
        .iter()
        .map(|g| leading_term(g).expect("reduction basis must be non-zero"))
        .collect();
    'outer: while !work.is_zero() {
        let (we, wc) = leading_term(&work).expect("non-zero");
        for (g, (ge, gc)) in basis.iter().zip(&leads) {
            if monomial_divides(ge, &we) {
                let exp: Vec<u32> = we.iter().zip(ge).map(|(a, b)| a - b).collect();
                let t = Poly::from_terms(f.nvars(), [(exp, &wc / gc)]);
                work = work.sub(&t.mul(g));
                continue 'outer;
            }
        }
        // Leading term is irreducible: move it to the remainder.
        let t = Poly::from_terms(f.nvars(), [(we.clone(), wc.clone())]);
        rem = rem.add(&t);
        work = work.sub(&t);
    }
    rem
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::rat;

    fn x() -> Poly {
        Poly::var(2, 0)
    }

    fn y() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn grevlex_ordering() {
        // Degree dominates.
        assert_eq!(cmp_grevlex(&[2, 0], &[0, 1]), Ordering::Greater);
        // Same degree: x^2 > xy > y^2.
        assert_eq!(cmp_grevlex(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(cmp_grevlex(&[1, 1], &[0, 2]), Ordering::Greater);
    }

    #[test]
    fn univariate_ideal_is_gcd() {
        // <x^2 - 1, x^3 - 1> = <x - 1>.
        let p = Poly::var(1, 0).pow(2).sub(&Poly::one(1));
        let q = Poly::var(1, 0).pow(3).sub(&Poly::one(1));
        let gb = GroebnerBasis::new(&[p, q]);
        assert_eq!(gb.generators().len(), 1);
        assert_eq!(gb.generators()[0], Poly::var(1, 0).sub(&Poly::one(1)));
        assert_eq!(gb.quotient_dimension(), Some(1));
    }

    #[test]
    fn intersection_of_axes() {
        // <xy, x + y>: the quotient has basis {1, x} (two points counted
        // with multiplicity at the origin).
        let gb = GroebnerBasis::new(&[x().mul(&y()), x().add(&y())]);
        assert_eq!(gb.quotient_dimension(), Some(2));
        assert!(gb.contains(&x().pow(2)));
        assert!(!gb.contains(&x()));
    }

    #[test]
    fn distinct_points_count() {
        // x(x-1)(x-2) = 0, y = x: three reduced points.
        let f = x().mul(&x().sub(&Poly::one(2))).mul(&x().sub(&Poly::constant(2, rat(2))));
        let gb = GroebnerBasis::new(&[f, y().sub(&x())]);
        assert_eq!(gb.quotient_dimension(), Some(3));
    }

    #[test]
    fn positive_dimension_detected() {
        let gb = GroebnerBasis::new(&[x().mul(&y())]);
        assert_eq!(gb.quotient_dimension(), None);
    }

    #[test]
    fn unit_ideal() {
        let gb = GroebnerBasis::new(&[x(), x().add(&Poly::one(2)), y()]);
        assert!(gb.is_unit_ideal());
        assert_eq!(gb.quotient_dimension(), Some(0));
        assert!(gb.contains(&Poly::one(2)));
    }

    #[test]
    fn ideal_equality_by_mutual_reduction() {
        let a = GroebnerBasis::new(&[x().add(&y()), x().sub(&y())]);
        let b = GroebnerBasis::new(&[x(), y()]);
        assert!(a.same_ideal(&b));
        let c = GroebnerBasis::new(&[x()]);
        assert!(!a.same_ideal(&c));
    }

    #[test]
    fn membership_certificates() {
        // The circular ideal <x^2 + y^2 - 1, x - y> contains 2y^2 - 1.
        let circle = x().pow(2).add(&y().pow(2)).sub(&Poly::one(2));
        let diag = x().sub(&y());
        let gb = GroebnerBasis::new(&[circle, diag]);
        let target = y().pow(2).scale(&rat(2)).sub(&Poly::one(2));
        assert!(gb.contains(&target));
        assert!(!gb.contains(&y().pow(2)));
    }
}
