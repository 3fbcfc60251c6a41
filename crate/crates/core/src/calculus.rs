//! Gradients, Hessians, Jacobians and exact determinants of polynomial matrices.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{ScalarMatrix, Transform};
use crate::poly::{Poly, Ring};
use crate::scalar::Scalar;

/// Largest matrix accepted by the determinant routines.
pub const DET_SIZE_LIMIT: usize = 8;

/// Row-major matrix of polynomials over one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(ring); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Constant polynomial matrix with the entries of `m`.
    pub fn lift(ring: &Arc<Ring>, m: &ScalarMatrix) -> Self {
        PolyMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows().into_iter().flatten().map(|c| Poly::constant(ring, c)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::with_capacity(self.rows); self.cols];
        for i in 0..self.rows {
            for (j, r) in rows.iter_mut().enumerate() {
                r.push(self.get(i, j).clone());
            }
        }
        PolyMatrix { rows: self.cols, cols: self.rows, entries: rows.into_iter().flatten().collect() }
    }

    pub fn mul(&self, o: &PolyMatrix) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Poly::zero(self.get(i, 0).ring());
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.push(acc);
            }
        }
        Ok(PolyMatrix { rows: self.rows, cols: o.cols, entries: out })
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Self> {
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn substitute_linear(&self, t: &ScalarMatrix) -> Result<Self> {
        self.map(|p| p.substitute_linear(t))
    }

    /// Evaluates every entry at a point. Fails if parameters remain.
    pub fn eval(&self, point: &[Scalar]) -> Result<ScalarMatrix> {
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ScalarMatrix::from_rows(rows)
    }

    /// The matrix of constant terms, if no parameter survives.
    pub fn constant_part(&self) -> Option<ScalarMatrix> {
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| p.homogeneous_part(0).constant_value()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        ScalarMatrix::from_rows(rows).ok()
    }

    /// The matrix itself when every entry is a scalar.
    pub fn as_scalar(&self) -> Option<ScalarMatrix> {
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().map(Poly::constant_value).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        ScalarMatrix::from_rows(rows).ok()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Zero at every `(i, j)` with `i + j > n + 1` (1-based).
    pub fn is_anti_triangular(&self) -> bool {
        self.below_antidiagonal().next().is_none()
    }

    /// Nonzero positions `(i, j)` (0-based) below the anti-diagonal.
    pub fn below_antidiagonal(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.rows;
        (0..n).flat_map(move |i| ((n - i)..n).map(move |j| (i, j))).filter(|&(i, j)| !self.get(i, j).is_zero())
    }

    /// Zero everywhere except the anti-diagonal.
    pub fn is_anti_diagonal(&self) -> bool {
        let n = self.rows;
        (0..n).all(|i| (0..n).all(|j| i + j == n - 1 || self.get(i, j).is_zero()))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        Rec { rows: self.rows, cols: self.cols, entries: self.to_strings() }.serialize(s)
    }
}

/// A polynomial map `K^n -> K^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(components: Vec<Poly>) -> Self {
        PolyMap { components }
    }

    pub fn identity(ring: &Arc<Ring>) -> Self {
        PolyMap::new((0..ring.nvars()).map(|k| Poly::var(ring, k)).collect())
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        Ok(PolyMap::new(self.components.iter().map(|p| p.compose(&inner.components)).collect::<Result<_>>()?))
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().enumerate().all(|(k, p)| *p == Poly::var(p.ring(), k))
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Poly::degree).max()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for PolyMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

pub fn gradient(f: &Poly) -> PolyMap {
    PolyMap::new((0..f.nvars()).map(|k| f.partial(k).expect("index in range")).collect())
}

pub fn jacobian(map: &PolyMap) -> PolyMatrix {
    let rows = map
        .components
        .iter()
        .map(|p| (0..p.nvars()).map(|k| p.partial(k).expect("index in range")).collect())
        .collect();
    PolyMatrix::from_rows(rows).expect("rectangular")
}

pub fn hessian(f: &Poly) -> PolyMatrix {
    let n = f.nvars();
    let grad = gradient(f);
    let mut h = PolyMatrix::zeros(f.ring(), n, n);
    for i in 0..n {
        for j in i..n {
            let d = grad.components[i].partial(j).expect("index in range");
            h.set(j, i, d.clone());
            h.set(i, j, d);
        }
    }
    h
}

fn check_square(m: &PolyMatrix) -> Result<usize> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix has no determinant", m.rows, m.cols)));
    }
    if m.rows > DET_SIZE_LIMIT {
        return Err(Error::SizeLimitExceeded { size: m.rows, limit: DET_SIZE_LIMIT });
    }
    Ok(m.rows)
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
///
/// Needs a ring to produce the 1 of an empty matrix, so 0x0 inputs are
/// rejected.
pub fn poly_determinant(m: &PolyMatrix) -> Result<Poly> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let ring = m.get(0, 0).ring().clone();
    let mut a: Vec<Vec<Poly>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut prev = Poly::one(&ring);
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Poly::zero(&ring));
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss quotient is exact");
            }
            a[i][k] = Poly::zero(&ring);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_determinant(m: &PolyMatrix) -> Result<Poly> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let rows: Vec<Vec<Poly>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    Ok(laplace(&rows))
}

fn laplace(rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = Poly::zero(rows[0][0].ring());
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &rows[0][j] * &laplace(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Checks `∇(f∘T) = Tᵗ (∇f)∘T` and `ℋ(f∘T) = Tᵗ (ℋf)∘T T` exactly.
pub fn check_chain_rule(f: &Poly, t: &Transform) -> Result<bool> {
    let n = f.nvars();
    if t.n() != n {
        return Err(Error::DimensionMismatch(format!("{}x{} transform for {} variables", t.n(), t.n(), n)));
    }
    let tm = t.matrix();
    let ft = f.substitute_linear(tm)?;
    let ring = f.ring();

    let lhs = gradient(&ft);
    let grad_at = gradient(f).components.iter().map(|p| p.substitute_linear(tm)).collect::<Result<Vec<_>>>()?;
    let grad_col = PolyMatrix::from_rows(grad_at.into_iter().map(|p| vec![p]).collect())?;
    let tt = PolyMatrix::lift(ring, &tm.transpose());
    let rhs = tt.mul(&grad_col)?;
    if (0..n).any(|i| lhs.components[i] != *rhs.get(i, 0)) {
        return Ok(false);
    }

    let h_lhs = hessian(&ft);
    let h_rhs = tt.mul(&hessian(f).substitute_linear(tm)?)?.mul(&PolyMatrix::lift(ring, tm))?;
    Ok(h_lhs == h_rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::Field;

    fn p(s: &str, r: &Arc<Ring>) -> Poly {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn gradient_examples() {
        let r = Ring::standard(2, Field::Rational);
        assert_eq!(gradient(&p("x1*x2 + x1^3", &r)).to_strings(), vec!["3*x1^2 + x2", "x1"]);
        assert!(gradient(&p("7", &r)).components().iter().all(Poly::is_zero));
        assert!(gradient(&p("1/2*(x1^2 + x2^2)", &r)).is_identity());
    }

    #[test]
    fn hessian_examples() {
        let r = Ring::standard(2, Field::Rational);
        assert_eq!(hessian(&p("x1*x2", &r)).to_strings(), vec![vec!["0", "1"], vec!["1", "0"]]);
        assert_eq!(hessian(&p("x1*x2 + x1^3", &r)).to_strings(), vec![vec!["6*x1", "1"], vec!["1", "0"]]);
        let r3 = Ring::standard(3, Field::Rational);
        let h = hessian(&p("x1*x3 + x2^2 + x1^2", &r3));
        assert_eq!(h.as_scalar().unwrap(), ScalarMatrix::from_ints(&[&[2, 0, 1], &[0, 2, 0], &[1, 0, 0]]));
    }

    #[test]
    fn determinant_examples() {
        let r = Ring::standard(2, Field::Rational);
        let det = poly_determinant(&hessian(&p("x1*x2", &r))).unwrap();
        assert_eq!(det, p("-1", &r));
        let det = poly_determinant(&hessian(&p("x1*x2 + x1^3", &r))).unwrap();
        assert_eq!(det, p("-1", &r));

        let r3 = Ring::standard(3, Field::Rational);
        let h = hessian(&p("x1^2*x2 + x2^3*x3 + x3^2*x1 + x1*x2*x3", &r3));
        assert_eq!(poly_determinant(&h).unwrap(), cofactor_determinant(&h).unwrap());

        let r9 = Ring::standard(9, Field::Rational);
        let big = hessian(&p("x1*x9", &r9));
        assert_eq!(poly_determinant(&big), Err(Error::SizeLimitExceeded { size: 9, limit: 8 }));
        let rect = PolyMatrix::zeros(&r, 1, 2);
        assert!(matches!(poly_determinant(&rect), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn chain_rule_examples() {
        let r = Ring::standard(2, Field::Rational);
        let t = Transform::new(ScalarMatrix::from_ints(&[&[1, 1], &[0, 1]])).unwrap();
        assert!(check_chain_rule(&p("x1^2", &r), &t).unwrap());
        assert!(check_chain_rule(&p("x1^3*x2 - 5*x2^2 + x1", &r), &Transform::identity(2)).unwrap());
        assert!(check_chain_rule(&p("x1", &r), &Transform::identity(3)).is_err());
    }

    #[test]
    fn json_shape() {
        let r = Ring::standard(2, Field::Rational);
        let j = serde_json::to_string(&hessian(&p("x1*x2 + x1^3", &r))).unwrap();
        assert_eq!(j, r#"{"rows":2,"cols":2,"entries":[["6*x1","1"],["1","0"]]}"#);
    }
}
