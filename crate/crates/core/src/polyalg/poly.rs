//! Sparse homogeneous polynomials in the Cox ring and square matrices of them.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::PolyError;
use crate::polyalg::field::Field;
use crate::toric::{DivisorClass, GradedMonomial, ToricContext};

/// A homogeneous polynomial with a declared class. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly<E> {
    terms: BTreeMap<Vec<u32>, E>,
    cls: DivisorClass,
}

impl<E: Clone> SparsePoly<E> {
    pub fn zero(cls: DivisorClass) -> Self {
        Self { terms: BTreeMap::new(), cls }
    }

    pub fn cls(&self) -> &DivisorClass {
        &self.cls
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, E> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, expo: &[u32]) -> Option<&E> {
        self.terms.get(expo)
    }
}

impl<E: Clone + PartialEq> SparsePoly<E> {
    /// Builds a polynomial, checking every exponent against the class.
    pub fn from_terms<F: Field<Elem = E>>(
        ctx: &ToricContext,
        f: &F,
        cls: DivisorClass,
        terms: impl IntoIterator<Item = (Vec<u32>, E)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(cls);
        for (expo, c) in terms {
            let found = ctx.degree_of(&expo)?;
            if found != p.cls {
                return Err(PolyError::InhomogeneousTerm {
                    term: ctx.format_monomial(&expo),
                    found: found.to_string(),
                    expected: p.cls.to_string(),
                });
            }
            p.add_term(f, expo, &c);
        }
        Ok(p)
    }

    /// Single monomial with coefficient one.
    pub fn monomial<F: Field<Elem = E>>(f: &F, m: &GradedMonomial) -> Self {
        let mut p = Self::zero(m.cls.clone());
        p.terms.insert(m.expo.clone(), f.one());
        p
    }

    fn add_term<F: Field<Elem = E>>(&mut self, f: &F, expo: Vec<u32>, c: &E) {
        let v = match self.terms.get(&expo) {
            Some(old) => f.add(old, c),
            None => c.clone(),
        };
        if f.is_zero(&v) {
            self.terms.remove(&expo);
        } else {
            self.terms.insert(expo, v);
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self, PolyError> {
        self.check_class(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(f, e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self, PolyError> {
        self.add(f, &other.scale(f, &f.neg(&f.one())))
    }

    fn check_class(&self, other: &Self) -> Result<(), PolyError> {
        if self.cls != other.cls {
            return Err(PolyError::ClassMismatch { left: self.cls.to_string(), right: other.cls.to_string() });
        }
        Ok(())
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out = Self::zero(&self.cls + &other.cls);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(f, e, &f.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> Self {
        if f.is_zero(s) {
            return Self::zero(self.cls.clone());
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.mul(c, s))).collect(),
            cls: self.cls.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &GradedMonomial) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(&m.expo).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
            cls: &self.cls + &m.cls,
        }
    }

    /// Coefficients in the order of `basis`; fails if a term lies outside it.
    pub fn coefficient_vector<F: Field<Elem = E>>(&self, f: &F, basis: &[GradedMonomial]) -> Result<Vec<E>, PolyError> {
        let index: BTreeMap<&[u32], usize> =
            basis.iter().enumerate().map(|(i, m)| (m.expo.as_slice(), i)).collect();
        let mut v = vec![f.zero(); basis.len()];
        for (e, c) in &self.terms {
            match index.get(e.as_slice()) {
                Some(&i) => v[i] = c.clone(),
                None => return Err(PolyError::OutsideBasis(format!("{e:?}"))),
            }
        }
        Ok(v)
    }

    pub fn from_coefficient_vector<F: Field<Elem = E>>(
        f: &F,
        cls: DivisorClass,
        basis: &[GradedMonomial],
        v: &[E],
    ) -> Result<Self, PolyError> {
        if v.len() != basis.len() {
            return Err(PolyError::LengthMismatch { expected: basis.len(), found: v.len() });
        }
        let mut p = Self::zero(cls);
        for (m, c) in basis.iter().zip(v) {
            if m.cls != p.cls {
                return Err(PolyError::ClassMismatch { left: p.cls.to_string(), right: m.cls.to_string() });
            }
            p.add_term(f, m.expo.clone(), c);
        }
        Ok(p)
    }

    /// Value at a point given in Cox coordinates.
    pub fn evaluate<F: Field<Elem = E>>(&self, f: &F, point: &[E]) -> Result<E, PolyError> {
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            if e.len() != point.len() {
                return Err(PolyError::LengthMismatch { expected: e.len(), found: point.len() });
            }
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Every basis monomial of `cls` with a random coefficient.
    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(
        ctx: &ToricContext,
        f: &F,
        cls: &DivisorClass,
        rng: &mut R,
    ) -> Result<Self, PolyError> {
        let basis = ctx.monomial_basis(cls)?;
        let coeffs: Vec<E> = basis.iter().map(|_| f.random(rng)).collect();
        Self::from_coefficient_vector(f, cls.clone(), &basis, &coeffs)
    }

    /// `3*x1*z1 + -1/2*z1^2*z2`, or `0`.
    pub fn render<F: Field<Elem = E>>(&self, ctx: &ToricContext, f: &F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(e, c)| match e.iter().all(|&k| k == 0) {
                true => f.render(c),
                false => format!("{}*{}", f.render(c), ctx.format_monomial(e)),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Square matrix of polynomials with declared row and column classes; entry
/// `(i, j)` has class `row_cls[i] - col_cls[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<E> {
    entries: Vec<Vec<SparsePoly<E>>>,
    row_cls: Vec<DivisorClass>,
    col_cls: Vec<DivisorClass>,
}

impl<E: Clone + PartialEq> PolyMatrix<E> {
    pub fn new(
        entries: Vec<Vec<SparsePoly<E>>>,
        row_cls: Vec<DivisorClass>,
        col_cls: Vec<DivisorClass>,
    ) -> Result<Self, PolyError> {
        let n = entries.len();
        if row_cls.len() != n || col_cls.len() != n {
            return Err(PolyError::NotSquare { rows: row_cls.len(), cols: col_cls.len() });
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(PolyError::NotSquare { rows: n, cols: row.len() });
            }
            for (j, p) in row.iter().enumerate() {
                let want = &row_cls[i] - &col_cls[j];
                if p.cls != want {
                    return Err(PolyError::ClassMismatch { left: p.cls.to_string(), right: want.to_string() });
                }
            }
        }
        Ok(Self { entries, row_cls, col_cls })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparsePoly<E> {
        &self.entries[i][j]
    }

    pub fn det_class(&self) -> DivisorClass {
        let rows = self.row_cls.iter().skip(1).fold(self.row_cls[0].clone(), |a, b| &a + b);
        self.col_cls.iter().fold(rows, |a, b| &a - b)
    }

    /// Determinant by cofactor expansion along the line with the fewest nonzero entries.
    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> SparsePoly<E> {
        let n = self.size();
        if n == 0 {
            let mut one = SparsePoly::zero(DivisorClass::zero(0));
            one.terms.insert(Vec::new(), f.one());
            return one;
        }
        let cls = self.det_class();
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (0..n).collect();
        let mut out = self.minor_det(f, &rows, &cols);
        out.cls = cls;
        out
    }

    fn minor_det<F: Field<Elem = E>>(&self, f: &F, rows: &[usize], cols: &[usize]) -> SparsePoly<E> {
        let k = rows.len();
        if k == 1 {
            return self.entries[rows[0]][cols[0]].clone();
        }
        let nz = |i: usize, j: usize| !self.entries[i][j].is_zero();
        let (best_row, row_count) = rows
            .iter()
            .enumerate()
            .map(|(a, &i)| (a, cols.iter().filter(|&&j| nz(i, j)).count()))
            .min_by_key(|&(_, c)| c)
            .expect("nonempty");
        let (best_col, col_count) = cols
            .iter()
            .enumerate()
            .map(|(b, &j)| (b, rows.iter().filter(|&&i| nz(i, j)).count()))
            .min_by_key(|&(_, c)| c)
            .expect("nonempty");
        let mut acc: Option<SparsePoly<E>> = None;
        let push = |acc: &mut Option<SparsePoly<E>>, term: SparsePoly<E>, negative: bool| {
            let term = if negative { term.scale(f, &f.neg(&f.one())) } else { term };
            *acc = Some(match acc.take() {
                None => term,
                Some(a) => merge(f, &a, &term),
            });
        };
        if row_count <= col_count {
            let i = rows[best_row];
            let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != i).collect();
            for (b, &j) in cols.iter().enumerate() {
                if !nz(i, j) {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != j).collect();
                let term = self.entries[i][j].mul(f, &self.minor_det(f, &sub_rows, &sub_cols));
                push(&mut acc, term, (best_row + b) % 2 == 1);
            }
        } else {
            let j = cols[best_col];
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != j).collect();
            for (a, &i) in rows.iter().enumerate() {
                if !nz(i, j) {
                    continue;
                }
                let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != i).collect();
                let term = self.entries[i][j].mul(f, &self.minor_det(f, &sub_rows, &sub_cols));
                push(&mut acc, term, (a + best_col) % 2 == 1);
            }
        }
        acc.unwrap_or_else(|| SparsePoly::zero(DivisorClass::zero(0)))
    }
}

// Sum ignoring declared classes; used inside the cofactor recursion where
// intermediate minors carry no meaningful class.
fn merge<F: Field>(f: &F, a: &SparsePoly<F::Elem>, b: &SparsePoly<F::Elem>) -> SparsePoly<F::Elem> {
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(f, e.clone(), c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Fan;
    use crate::polyalg::field::Rationals;

    fn h1() -> ToricContext {
        ToricContext::new(Fan::hirzebruch(1), &[0, 1]).unwrap()
    }

    fn cl(v: &[i64]) -> DivisorClass {
        DivisorClass(v.to_vec())
    }

    #[test]
    fn product_of_monomials() {
        let ctx = h1();
        let f = Rationals;
        let z1 = SparsePoly::from_terms(&ctx, &f, cl(&[1, 0]), [(vec![0, 0, 1, 0], f.one())]).unwrap();
        let x2z1 = SparsePoly::from_terms(&ctx, &f, cl(&[2, 1]), [(vec![0, 1, 1, 0], f.one())]).unwrap();
        let p = z1.mul(&f, &x2z1);
        assert_eq!(p.cls(), &cl(&[3, 1]));
        assert_eq!(p.coefficient(&[0, 1, 2, 0]), Some(&f.one()));
    }

    #[test]
    fn cancellation_and_mismatch() {
        let ctx = h1();
        let f = Rationals;
        let p = SparsePoly::from_terms(&ctx, &f, cl(&[1, 0]), [(vec![0, 0, 1, 0], f.from_i64(3)), (vec![1, 0, 0, 0], f.one())]).unwrap();
        assert!(p.add(&f, &p.scale(&f, &f.from_i64(-1))).unwrap().is_zero());
        let q = SparsePoly::<num_rational::BigRational>::zero(cl(&[2, 1]));
        assert!(matches!(p.add(&f, &q), Err(PolyError::ClassMismatch { .. })));
    }

    #[test]
    fn rejects_mixed_terms() {
        let ctx = h1();
        let f = Rationals;
        let r = SparsePoly::from_terms(&ctx, &f, cl(&[1, 0]), [(vec![0, 0, 1, 0], f.one()), (vec![0, 1, 0, 0], f.one())]);
        assert!(matches!(r, Err(PolyError::InhomogeneousTerm { .. })));
    }

    #[test]
    fn coefficient_vectors() {
        let ctx = h1();
        let f = Rationals;
        let basis = ctx.monomial_basis(&cl(&[2, 1])).unwrap();
        let v: Vec<_> = (1..=5).map(|i| f.from_i64(i)).collect();
        let p = SparsePoly::from_coefficient_vector(&f, cl(&[2, 1]), &basis, &v).unwrap();
        assert_eq!(p.num_terms(), 5);
        assert_eq!(p.coefficient_vector(&f, &basis).unwrap(), v);
        let small = ctx.monomial_basis(&cl(&[1, 0])).unwrap();
        assert!(p.coefficient_vector(&f, &small).is_err());
    }

    #[test]
    fn evaluation() {
        let ctx = h1();
        let f = Rationals;
        // x1*x2 + 2*z1^2*z2 at (x1,x2,z1,z2) = (2,3,1,1)
        let p = SparsePoly::from_terms(
            &ctx,
            &f,
            cl(&[2, 1]),
            [(vec![1, 1, 0, 0], f.one()), (vec![0, 0, 2, 1], f.from_i64(2))],
        )
        .unwrap();
        let pt: Vec<_> = [2, 3, 1, 1].iter().map(|&x| f.from_i64(x)).collect();
        assert_eq!(p.evaluate(&f, &pt).unwrap(), f.from_i64(8));
    }

    #[test]
    fn poly_det_two_by_two() {
        let ctx = h1();
        let f = Rationals;
        let c = |v: i64| f.from_i64(v);
        // ((a1 x1 + a0 z1, b) ...) on classes (1,0) entries
        let lin = |a: i64, b: i64| {
            SparsePoly::from_terms(&ctx, &f, cl(&[1, 0]), [(vec![1, 0, 0, 0], c(a)), (vec![0, 0, 1, 0], c(b))]).unwrap()
        };
        let k = |v: i64| SparsePoly::from_terms(&ctx, &f, cl(&[0, 0]), [(vec![0, 0, 0, 0], c(v))]).unwrap();
        let m = PolyMatrix::new(
            vec![vec![lin(1, 2), k(3)], vec![lin(4, 5), k(6)]],
            vec![cl(&[1, 0]), cl(&[1, 0])],
            vec![cl(&[0, 0]), cl(&[1, 0])],
        )
        .unwrap();
        let d = m.det(&f);
        // 6(x1 + 2 z1) - 3(4 x1 + 5 z1) = -6 x1 - 3 z1
        assert_eq!(d.coefficient(&[1, 0, 0, 0]), Some(&c(-6)));
        assert_eq!(d.coefficient(&[0, 0, 1, 0]), Some(&c(-3)));
        assert_eq!(d.cls(), &cl(&[1, 0]));
    }
}
