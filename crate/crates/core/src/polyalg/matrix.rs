//! Dense matrices over an exact field and the elimination kernels on them.

use crate::error::PolyError;
use crate::polyalg::field::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    /// Builds from rows; `cols` is used when there are no rows.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self, PolyError> {
        let n = rows.len();
        let cols = rows.first().map_or(cols, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(PolyError::LengthMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(Self { rows: n, cols, data })
    }

    pub fn from_columns(columns: Vec<Vec<E>>, rows: usize) -> Result<Self, PolyError> {
        let c = columns.len();
        Ok(Matrix::from_rows(columns, rows)?.transpose_with_shape(rows, c))
    }

    fn transpose_with_shape(&self, rows: usize, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(self.data[j * self.cols + i].clone());
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        self.transpose_with_shape(self.cols, self.rows)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Self { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, PolyError> {
        if self.rows != other.rows {
            return Err(PolyError::LengthMismatch { expected: self.rows, found: other.rows });
        }
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        Self::from_rows(rows, self.cols + other.cols)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, PolyError> {
        if self.cols != other.cols {
            return Err(PolyError::LengthMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn push_column(&mut self, col: Vec<E>) -> Result<(), PolyError> {
        if col.len() != self.rows {
            return Err(PolyError::LengthMismatch { expected: self.rows, found: col.len() });
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for (i, v) in col.into_iter().enumerate() {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.push(v);
        }
        self.data = data;
        self.cols += 1;
        Ok(())
    }

    pub fn push_row(&mut self, row: Vec<E>) -> Result<(), PolyError> {
        if row.len() != self.cols {
            return Err(PolyError::LengthMismatch { expected: self.cols, found: row.len() });
        }
        self.data.extend(row);
        self.rows += 1;
        Ok(())
    }

    pub fn map<T, G: Fn(&E) -> T>(&self, g: G) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>, PolyError> {
    if a.cols != b.rows {
        return Err(PolyError::LengthMismatch { expected: a.cols, found: b.rows });
    }
    let mut out = Matrix::zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let v = f.add(out.get(i, j), &f.mul(aik, b.get(k, j)));
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

pub fn is_zero_matrix<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    m.data.iter().all(|x| f.is_zero(x))
}

/// Fraction-free (Bareiss) determinant.
pub fn det<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<F::Elem, PolyError> {
    if !m.is_square() {
        return Err(PolyError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(f.one());
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = f.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !f.is_zero(&a[i][k])) else {
            return Ok(f.zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = f.sub(&f.mul(&a[k][k], &a[i][j]), &f.mul(&a[i][k], &a[k][j]));
                a[i][j] = f.div(&num, &prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { f.neg(&d) } else { d })
}

/// Rank by Bareiss elimination with column skipping.
pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0;
    let mut prev = f.one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = f.sub(&f.mul(&a[r][c], &a[i][j]), &f.mul(&a[i][c], &a[r][j]));
                a[i][j] = f.div(&num, &prev).expect("Bareiss pivots are nonzero");
            }
            a[i][c] = f.zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Number of rows minus rank.
pub fn corank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    m.rows - rank(f, m)
}

/// Reduced row echelon form and its pivot columns.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(p, r);
        let inv = f.inv(&a[r][c]).expect("pivot is nonzero");
        for j in c..cols {
            a[r][j] = f.mul(&a[r][j], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = a[i][c].clone();
            for j in c..cols {
                let v = f.sub(&a[i][j], &f.mul(&factor, &a[r][j]));
                a[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (Matrix::from_rows(a, cols).expect("rows keep their length"), pivots)
}

/// A basis of `{ v : M v = 0 }`, one vector per free column.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (red, pivots) = rref(f, m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); m.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(red.get(r, fc));
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the span of the columns of `m`.
pub fn in_column_span<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Result<bool, PolyError> {
    if v.len() != m.rows {
        return Err(PolyError::LengthMismatch { expected: m.rows, found: v.len() });
    }
    let mut ext = m.clone();
    ext.push_column(v.to_vec())?;
    Ok(rank(f, &ext) == rank(f, m))
}

/// Greedy choice of linearly independent columns, restricted to `rows` and
/// scanned in the order `order`. Returns the chosen columns in scan order.
pub fn independent_columns<F: Field>(f: &F, m: &Matrix<F::Elem>, rows: &[usize], order: &[usize]) -> Vec<usize> {
    // Reduced basis vectors with their pivot positions.
    let mut basis: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    let mut chosen = Vec::new();
    for &c in order {
        if basis.len() == rows.len() {
            break;
        }
        let mut v: Vec<F::Elem> = rows.iter().map(|&i| m.get(i, c).clone()).collect();
        for (p, b) in &basis {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let factor = v[*p].clone();
            for (x, y) in v.iter_mut().zip(b) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
        if let Some(p) = v.iter().position(|x| !f.is_zero(x)) {
            let inv = f.inv(&v[p]).expect("pivot is nonzero");
            for x in v.iter_mut() {
                *x = f.mul(x, &inv);
            }
            basis.push((p, v));
            chosen.push(c);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::{PrimeField, Rationals};

    fn q(rows: &[&[i64]]) -> Matrix<num_rational::BigRational> {
        let f = Rationals;
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect(),
            0,
        )
        .unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let f = Rationals;
        let id = Matrix::identity(&f, 5);
        assert_eq!(rank(&f, &id), 5);
        assert_eq!(corank(&f, &id), 0);
        assert_eq!(det(&f, &id).unwrap(), f.one());
        let z = Matrix::zeros(&f, 3, 4);
        assert_eq!(rank(&f, &z), 0);
    }

    #[test]
    fn rank_one() {
        let f = Rationals;
        let m = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&f, &m), 1);
        assert_eq!(det(&f, &m).unwrap(), f.zero());
    }

    #[test]
    fn determinants() {
        let f = Rationals;
        assert_eq!(det(&f, &q(&[&[0, 1], &[1, 0]])).unwrap(), f.from_i64(-1));
        assert_eq!(det(&f, &q(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])).unwrap(), f.from_i64(6));
        assert!(det(&f, &q(&[&[1, 2, 3]])).is_err());
        let p = PrimeField::new(101).unwrap();
        let m = q(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).map(|x| p.parse(&Rationals.render(x)).unwrap());
        assert_eq!(det(&p, &m).unwrap(), 6);
    }

    #[test]
    fn nullspace_vectors_are_killed() {
        let f = Rationals;
        let m = q(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&f, &m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Matrix::from_columns(vec![v], 4).unwrap();
            assert!(is_zero_matrix(&f, &mul(&f, &m, &col).unwrap()));
        }
    }

    #[test]
    fn column_span() {
        let f = Rationals;
        let m = q(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(in_column_span(&f, &m, &m.column(0)).unwrap());
        assert!(!in_column_span(&f, &m, &[f.one(), f.zero(), f.zero()]).unwrap());
        let z = Matrix::zeros(&f, 2, 2);
        assert!(!in_column_span(&f, &z, &[f.one(), f.zero()]).unwrap());
        assert!(in_column_span(&f, &m, &[f.one()]).is_err());
    }

    #[test]
    fn greedy_columns() {
        let f = Rationals;
        let m = q(&[&[1, 2, 0, 1], &[0, 0, 1, 1]]);
        assert_eq!(independent_columns(&f, &m, &[0, 1], &[0, 1, 2, 3]), vec![0, 2]);
        assert_eq!(independent_columns(&f, &m, &[0, 1], &[3, 2, 1, 0]), vec![3, 2]);
        assert_eq!(independent_columns(&f, &m, &[1], &[0, 1, 2, 3]), vec![2]);
    }

    #[test]
    fn stacking() {
        let m = q(&[&[1, 2], &[3, 4]]);
        let h = m.hstack(&m).unwrap();
        assert_eq!((h.rows(), h.cols()), (2, 4));
        let v = m.vstack(&m).unwrap();
        assert_eq!((v.rows(), v.cols()), (4, 2));
        assert_eq!(m.transpose().row(0), m.column(0).as_slice());
        assert_eq!(m.submatrix(&[1], &[0]).get(0, 0), m.get(1, 0));
    }
}
