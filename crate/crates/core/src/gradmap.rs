//! Polynomial maps with anti-triangular Jacobian: the Keller condition,
//! exact inversion by back-substitution, and unipotent Jacobians.

use serde::{Serialize, Serializer};

use crate::calculus::{gradient, jacobian, poly_determinant, PolyMap, PolyMatrix};
use crate::error::{Error, Result};
use crate::linalg::Transform;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::triangulate::{normalize_linear_part, Normalization};

/// Degree bound on intermediate inverse components.
pub const DEGREE_GUARD: u32 = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KellerReport {
    pub is_keller: bool,
    pub det: Poly,
}

impl Serialize for KellerReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec {
            is_keller: bool,
            det: String,
        }
        Rec { is_keller: self.is_keller, det: self.det.to_string() }.serialize(s)
    }
}

/// Whether `det 𝒥F` is a nonzero constant. The map must be square.
pub fn keller_check(f: &PolyMap) -> Result<KellerReport> {
    check_square(f)?;
    let det = poly_determinant(&jacobian(f))?;
    Ok(KellerReport { is_keller: det.is_nonzero_constant(), det })
}

fn check_square(f: &PolyMap) -> Result<usize> {
    let n = f.len();
    match f.components().first() {
        Some(p) if p.nvars() == n => Ok(n),
        Some(p) => Err(Error::DimensionMismatch(format!("{n} components in {} variables", p.nvars()))),
        None => Err(Error::InvalidArgument("empty map".into())),
    }
}

/// Which side of the anti-diagonal of `𝒥F` is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Zero below: `F_{n+1-i}` involves only `x_1, …, x_i`.
    Below,
    /// Zero above: `F_i` involves only `x_{n+1-i}, …, x_n`.
    Above,
}

/// Inverse of a map whose Jacobian is zero on one side of the anti-diagonal
/// with nonzero constants on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseWitness {
    pub g: PolyMap,
    /// Anti-diagonal entries `(n+1-i, i)` of `𝒥F`, from left to right.
    pub constants: Vec<Scalar>,
    pub orientation: Orientation,
}

impl Serialize for InverseWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec<'a> {
            #[serde(rename = "G")]
            g: &'a PolyMap,
            constants: &'a [Scalar],
        }
        Rec { g: &self.g, constants: &self.constants }.serialize(s)
    }
}

fn zero_above(j: &PolyMatrix) -> bool {
    let n = j.rows();
    (0..n).all(|r| (0..n).all(|c| r + c + 1 >= n || j.get(r, c).is_zero()))
}

/// Solves `y = F(x)` one variable at a time.
///
/// With zero below the anti-diagonal, `F_n = c_1 x_1 + k` gives `x_1` and
/// each `F_{n+1-i} - c_i x_i` only involves the variables already solved.
/// With zero above, the same runs from `x_n` down. Both compositions are
/// checked before returning.
pub fn invert_antitriangular(f: &PolyMap) -> Result<InverseWitness> {
    let n = check_square(f)?;
    let jac = jacobian(f);
    let orientation = if jac.is_anti_triangular() {
        Orientation::Below
    } else if zero_above(&jac) {
        Orientation::Above
    } else {
        return Err(Error::NotAntiTriangular);
    };
    let constants = (0..n)
        .map(|v| jac.get(n - 1 - v, v).constant_value().filter(|c| !c.is_zero()))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::NonConstantAntiDiagonal)?;
    let ring = f.components()[0].ring().clone();
    let order: Vec<usize> = match orientation {
        Orientation::Below => (0..n).collect(),
        Orientation::Above => (0..n).rev().collect(),
    };
    let mut images: Vec<Poly> = (0..n).map(|k| Poly::var(&ring, k)).collect();
    for v in order {
        let p = n - 1 - v;
        let c = &constants[v];
        let rest = &f.components()[p] - &Poly::var(&ring, v).scale(c);
        let solved = &Poly::var(&ring, p) - &rest.compose(&images)?;
        let gv = solved.scale(&c.inv().expect("nonzero constant"));
        if let Some(d) = gv.degree().filter(|&d| d > DEGREE_GUARD) {
            return Err(Error::DegreeLimitExceeded { degree: d, limit: DEGREE_GUARD });
        }
        images[v] = gv;
    }
    let g = PolyMap::new(images);
    if !f.compose(&g)?.is_identity() || !g.compose(f)?.is_identity() {
        return Err(Error::HypothesesUnmet("back-substitution did not invert the map".into()));
    }
    Ok(InverseWitness { g, constants, orientation })
}

/// True iff `𝒥F - I` is lower triangular with zero diagonal. The nilpotency
/// `(𝒥F - I)^n = 0` is recomputed as well.
pub fn verify_unipotent(f: &PolyMap) -> Result<bool> {
    let n = check_square(f)?;
    let ring = f.components()[0].ring().clone();
    let jac = jacobian(f);
    let rows = (0..n)
        .map(|r| {
            (0..n).map(|c| if r == c { jac.get(r, c) - &Poly::one(&ring) } else { jac.get(r, c).clone() }).collect()
        })
        .collect();
    let nil = PolyMatrix::from_rows(rows)?;
    let strictly_lower = (0..n).all(|r| (r..n).all(|c| nil.get(r, c).is_zero()));
    if !strictly_lower {
        return Ok(false);
    }
    let mut power = nil.clone();
    for _ in 1..n {
        power = power.mul(&nil)?;
    }
    let nilpotent = power.entries().all(Poly::is_zero);
    Ok(nilpotent)
}

/// `F_i = c⁻¹ ∂_{n+1-i} f(TLx)` with `L` from [`normalize_linear_part`].
/// Its Jacobian is unipotent lower triangular whenever `ℋf(Tx)` is zero
/// below the anti-diagonal and `det ℋf` is a nonzero constant.
pub fn unipotent_gradient_map(f: &Poly, t: &Transform) -> Result<(PolyMap, Normalization)> {
    let nz = normalize_linear_part(f, t)?;
    let g = f.substitute_linear(t.compose(&nz.l)?.matrix())?;
    let n = f.nvars();
    let cinv = nz.c.inv().ok_or_else(|| Error::PreconditionUnmet("zero normalizing constant".into()))?;
    let comps = (0..n).map(|i| Ok(g.partial(n - 1 - i)?.scale(&cinv))).collect::<Result<Vec<_>>>()?;
    Ok((PolyMap::new(comps), nz))
}

/// `∇(f(Tx))`, whose Jacobian is `ℋf(Tx)`.
pub fn transformed_gradient(f: &Poly, t: &Transform) -> Result<PolyMap> {
    let g = f.substitute_linear(t.matrix())?;
    Ok(gradient(&g))
}
