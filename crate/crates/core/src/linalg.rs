//! Exact dense linear algebra over Q and Q(i).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Row-major matrix of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// The order-reversing permutation matrix `J_n`.
    pub fn flip(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, n - 1 - i, Scalar::one());
        }
        m
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ScalarMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<Self> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
    }

    /// Convenience constructor for tests and fixtures.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("rectangular")
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Smallest of Q and Q(i) containing every entry.
    pub fn field(&self) -> Field {
        if self.data.iter().all(Scalar::is_rational) {
            Field::Rational
        } else {
            Field::Gaussian
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &ScalarMatrix) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)).collect())
    }

    pub fn add(&self, o: &ScalarMatrix) -> Result<Self> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &ScalarMatrix) -> Result<Self> {
        self.zip_with(o, |a, b| a - b)
    }

    fn zip_with(&self, o: &ScalarMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        Ok(ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ScalarMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ScalarMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Zero at every `(i, j)` with `i + j > n + 1` (1-based).
    pub fn is_anti_triangular(&self) -> bool {
        let n = self.rows;
        self.is_square() && (0..n).all(|i| ((n - i)..n).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_lower_triangular() && self.is_upper_triangular()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ScalarMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, x) in b.iter().enumerate() {
            aug.set(i, self.cols, x.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in (c + 1)..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.submatrix(0, n, n, 2 * n))
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Scalar>>,
}

impl Serialize for ScalarMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord { rows: self.rows, cols: self.cols, entries: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = MatrixRecord::deserialize(d)?;
        let m = ScalarMatrix::from_rows(rec.entries).map_err(serde::de::Error::custom)?;
        if m.rows != rec.rows || (rec.rows > 0 && m.cols != rec.cols) {
            return Err(serde::de::Error::custom("declared shape does not match entries"));
        }
        Ok(m)
    }
}

/// An invertible matrix with its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transform {
    matrix: ScalarMatrix,
    inverse: ScalarMatrix,
}

impl Transform {
    pub fn new(matrix: ScalarMatrix) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(Transform { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Transform { matrix: ScalarMatrix::identity(n), inverse: ScalarMatrix::identity(n) }
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &ScalarMatrix {
        &self.inverse
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn inverted(&self) -> Transform {
        Transform { matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    /// `self * o` as a substitution: `x -> self(o x)`.
    pub fn compose(&self, o: &Transform) -> Result<Transform> {
        Ok(Transform { matrix: self.matrix.mul(&o.matrix)?, inverse: o.inverse.mul(&self.inverse)? })
    }
}

/// Invertible matrix whose last columns are `vectors`, filled on the left
/// with the lowest-index unit vectors that keep the columns independent.
pub fn complete_basis(vectors: &[Vec<Scalar>], n: usize) -> Result<ScalarMatrix> {
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("vector length".into()));
    }
    let mut chosen: Vec<Vec<Scalar>> = vectors.to_vec();
    if rank_of(&chosen) < chosen.len() {
        return Err(Error::RankDeficient("given vectors are dependent".into()));
    }
    let mut fillers = Vec::new();
    for k in 0..n {
        if chosen.len() == n {
            break;
        }
        let mut e = vec![Scalar::zero(); n];
        e[k] = Scalar::one();
        chosen.push(e.clone());
        if rank_of(&chosen) == chosen.len() {
            fillers.push(e);
        } else {
            chosen.pop();
        }
    }
    fillers.extend(vectors.iter().cloned());
    ScalarMatrix::from_columns(&fillers)
}

fn rank_of(vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ScalarMatrix::from_rows(vectors.to_vec()).map(|m| m.rank()).unwrap_or(0)
}

/// Lower triangular `L` with `L^t J L = M` for symmetric anti-triangular `M`.
///
/// For odd `n` the middle entry must be a square in `field`.
pub fn anti_lower_factorize(m: &ScalarMatrix, field: Field) -> Result<ScalarMatrix> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !m.is_anti_triangular() {
        return Err(Error::NotAntiTriangular);
    }
    let n = m.rows();
    let h = n / 2;
    let odd = n % 2 == 1;
    let top = h + usize::from(odd);
    let jh = ScalarMatrix::flip(h);
    let mut l = ScalarMatrix::identity(n);
    if odd {
        let mid = m.get(h, h);
        let c = mid.sqrt(field).ok_or_else(|| Error::MiddleEntryNotSquare(mid.to_string()))?;
        l.set(h, h, c);
        let b = m.submatrix(0, h, h, h + 1);
        l.set_block(top, h, &jh.mul(&b)?);
    }
    let a = m.submatrix(0, h, 0, h);
    l.set_block(top, 0, &jh.mul(&a)?.scale(&Scalar::ratio(1, 2)));
    let bb = m.submatrix(0, h, top, n);
    l.set_block(top, top, &jh.mul(&bb)?);
    debug_assert_eq!(l.transpose().mul(&ScalarMatrix::flip(n))?.mul(&l)?, *m);
    Ok(l)
}

/// Congruence `S` with `S^t M S` diagonal. With `unit`, nonzero diagonal
/// entries are scaled to 1, which needs square roots in `field`.
pub fn diagonalize_symmetric(m: &ScalarMatrix, field: Field, unit: bool) -> Result<Transform> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut s = ScalarMatrix::identity(n);
    for k in 0..n {
        if a.get(k, k).is_zero() {
            if let Some(j) = ((k + 1)..n).find(|&j| !a.get(j, j).is_zero()) {
                swap_congruence(&mut a, &mut s, k, j);
            } else if let Some(j) = ((k + 1)..n).find(|&j| !a.get(k, j).is_zero()) {
                add_congruence(&mut a, &mut s, k, j, &Scalar::one());
            } else {
                continue;
            }
        }
        let inv = a.get(k, k).inv().expect("nonzero pivot");
        for j in (k + 1)..n {
            let f = a.get(k, j) * &inv;
            if !f.is_zero() {
                add_congruence(&mut a, &mut s, j, k, &-f);
            }
        }
    }
    if unit {
        for k in 0..n {
            let d = a.get(k, k).clone();
            if d.is_zero() {
                continue;
            }
            let r = d.sqrt(field).ok_or_else(|| Error::SquareRootUnavailable(d.to_string()))?;
            let f = r.inv().expect("nonzero root");
            for i in 0..n {
                let v = s.get(i, k) * &f;
                s.set(i, k, v);
            }
        }
    }
    let t = Transform::new(s)?;
    debug_assert!(t.matrix().transpose().mul(m)?.mul(t.matrix())?.is_diagonal());
    Ok(t)
}

fn swap_congruence(a: &mut ScalarMatrix, s: &mut ScalarMatrix, k: usize, j: usize) {
    let n = a.rows();
    for i in 0..n {
        let (x, y) = (a.get(i, k).clone(), a.get(i, j).clone());
        a.set(i, k, y);
        a.set(i, j, x);
        let (x, y) = (s.get(i, k).clone(), s.get(i, j).clone());
        s.set(i, k, y);
        s.set(i, j, x);
    }
    a.swap_rows(k, j);
}

/// Column `k += f * column j`, and the same on rows.
fn add_congruence(a: &mut ScalarMatrix, s: &mut ScalarMatrix, k: usize, j: usize, f: &Scalar) {
    let n = a.rows();
    for i in 0..n {
        let v = a.get(i, k) + &(f * a.get(i, j));
        a.set(i, k, v);
        let v = s.get(i, k) + &(f * s.get(i, j));
        s.set(i, k, v);
    }
    for i in 0..n {
        let v = a.get(k, i) + &(f * a.get(j, i));
        a.set(k, i, v);
    }
}

/// Invertible `S` with `M S` zero below the anti-diagonal.
///
/// Columns are chosen right to left: the `c`-th column from the right is
/// orthogonal to rows `c+1..` of `M` and independent of the columns already
/// chosen. Unit vectors of lowest index are preferred.
pub fn right_flag_complement(m: &ScalarMatrix) -> Result<ScalarMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("square matrix expected".into()));
    }
    let k = m.rows();
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for c in (0..k).rev() {
        let constraint = m.submatrix(k - c, k, 0, k);
        let mut candidates: Vec<Vec<Scalar>> = (0..k)
            .map(|u| {
                let mut e = vec![Scalar::zero(); k];
                e[u] = Scalar::one();
                e
            })
            .filter(|e| constraint.rows() == 0 || constraint.mul_vec(e).unwrap().iter().all(Scalar::is_zero))
            .collect();
        if constraint.rows() > 0 {
            candidates.extend(constraint.nullspace());
        }
        let pick = candidates.into_iter().find(|v| {
            let mut trial = cols.clone();
            trial.push(v.clone());
            rank_of(&trial) == trial.len()
        });
        match pick {
            Some(v) => cols.push(v),
            None => return Err(Error::RankDeficient(format!("no admissible column at position {}", c + 1))),
        }
    }
    cols.reverse();
    let s = ScalarMatrix::from_columns(&cols)?;
    debug_assert!(m.mul(&s)?.is_anti_triangular());
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(rows: &[&[i64]]) -> ScalarMatrix {
        ScalarMatrix::from_ints(rows)
    }

    #[test]
    fn basic_ops() {
        assert_eq!(mi(&[&[0, 1], &[1, 0]]).det().unwrap(), Scalar::from_int(-1));
        assert_eq!(mi(&[&[1, 1], &[0, 1]]).inverse().unwrap(), mi(&[&[1, -1], &[0, 1]]));
        assert_eq!(ScalarMatrix::flip(3).det().unwrap(), Scalar::from_int(-1));
        assert_eq!(mi(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        assert!(matches!(mi(&[&[1, 2]]).mul(&mi(&[&[1, 2]])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn nullspace_examples() {
        let b = mi(&[&[1, 1]]).nullspace();
        assert_eq!(b, vec![vec![Scalar::from_int(-1), Scalar::from_int(1)]]);
        assert!(ScalarMatrix::identity(3).nullspace().is_empty());
        let a = mi(&[&[1, 2, 3], &[2, 4, 6]]);
        let b = a.nullspace();
        assert_eq!(b.len(), 2);
        for v in b {
            assert!(a.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    fn round_trip(m: &ScalarMatrix, field: Field) -> ScalarMatrix {
        let l = anti_lower_factorize(m, field).unwrap();
        assert!(l.is_lower_triangular());
        let n = m.rows();
        assert_eq!(l.transpose().mul(&ScalarMatrix::flip(n)).unwrap().mul(&l).unwrap(), *m);
        l
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(round_trip(&ScalarMatrix::flip(2), Field::Rational), ScalarMatrix::identity(2));
        assert_eq!(round_trip(&mi(&[&[2, 1], &[1, 0]]), Field::Rational), mi(&[&[1, 0], &[1, 1]]));
        round_trip(&mi(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, 0]]), Field::Rational);
        round_trip(&mi(&[&[3, 5, 7, 1], &[5, -2, 4, 0], &[7, 4, 0, 0], &[1, 0, 0, 0]]), Field::Rational);
        round_trip(&mi(&[&[1, 2, 3], &[2, -1, 0], &[3, 0, 0]]), Field::Gaussian);
        assert!(matches!(
            anti_lower_factorize(&mi(&[&[0, 0, 1], &[0, 2, 0], &[1, 0, 0]]), Field::Rational),
            Err(Error::MiddleEntryNotSquare(_))
        ));
        assert_eq!(anti_lower_factorize(&mi(&[&[1, 2], &[3, 0]]), Field::Rational), Err(Error::NotSymmetric));
        assert_eq!(anti_lower_factorize(&mi(&[&[1, 1], &[1, 1]]), Field::Rational), Err(Error::NotAntiTriangular));
    }

    #[test]
    fn diagonalization_examples() {
        let d = mi(&[&[2, 0], &[0, 3]]);
        assert_eq!(diagonalize_symmetric(&d, Field::Rational, false).unwrap(), Transform::identity(2));
        let h = mi(&[&[0, 1], &[1, 0]]);
        let s = diagonalize_symmetric(&h, Field::Rational, false).unwrap();
        let dd = s.matrix().transpose().mul(&h).unwrap().mul(s.matrix()).unwrap();
        assert!(dd.is_diagonal() && !dd.get(0, 0).is_zero() && !dd.get(1, 1).is_zero());
        assert!(matches!(diagonalize_symmetric(&d, Field::Gaussian, true), Err(Error::SquareRootUnavailable(_))));
        let s = diagonalize_symmetric(&mi(&[&[-1, 0], &[0, 4]]), Field::Gaussian, true).unwrap();
        let m = mi(&[&[-1, 0], &[0, 4]]);
        assert_eq!(s.matrix().transpose().mul(&m).unwrap().mul(s.matrix()).unwrap(), ScalarMatrix::identity(2));
    }

    #[test]
    fn flag_complement_examples() {
        assert_eq!(right_flag_complement(&mi(&[&[1]])).unwrap(), mi(&[&[1]]));
        let swap = mi(&[&[0, 1], &[1, 0]]);
        assert_eq!(right_flag_complement(&ScalarMatrix::identity(2)).unwrap(), swap);
        let m = mi(&[&[1, 1], &[0, 1]]);
        let s = right_flag_complement(&m).unwrap();
        assert!(m.mul(&s).unwrap().is_anti_triangular());
        let m = mi(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let s = right_flag_complement(&m).unwrap();
        assert!(s.det().unwrap() != Scalar::zero());
        assert!(m.mul(&s).unwrap().is_anti_triangular());
    }

    #[test]
    fn basis_completion() {
        let v = vec![vec![Scalar::from_int(1), Scalar::from_int(-1)]];
        let t = complete_basis(&v, 2).unwrap();
        assert_eq!(t, mi(&[&[1, 1], &[0, -1]]));
    }

    #[test]
    fn json_shape() {
        let m = mi(&[&[1, 0], &[0, 2]]).scale(&Scalar::ratio(1, 2));
        let j = serde_json::to_string(&m).unwrap();
        assert_eq!(j, r#"{"rows":2,"cols":2,"entries":[["1/2","0"],["0","1"]]}"#);
        let back: ScalarMatrix = serde_json::from_str(&j).unwrap();
        assert_eq!(back, m);
    }
}
