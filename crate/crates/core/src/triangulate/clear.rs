//! Clearing the Hessian below the anti-diagonal, and normalizing the
//! constant part to a multiple of the flipped identity.

use super::witness::{anti_diagonal_constants, AntiTriWitness, CaseTag};
use crate::calculus::{hessian, poly_determinant, PolyMatrix};
use crate::error::{Error, Result};
use crate::linalg::{anti_lower_factorize, complete_basis, right_flag_complement, ScalarMatrix, Transform};
use crate::poly::Poly;
use crate::quadform::{isotropy_search, IsotropyResult, QuadraticForm, DEFAULT_HEIGHT};
use crate::scalar::Scalar;
use crate::weights::{w_leading_part, WeightFn};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClearOptions {
    /// Widen the anti-minor by raising `j` while `w(x_j) = w(x_{n+1-i})`
    /// and `j <= ⌈n/2⌉`. Needs weights; falls back when unusable.
    pub increase_j: bool,
}

pub fn clear_below_antidiagonal(f: &Poly, t: &Transform, w: Option<&WeightFn>) -> Result<AntiTriWitness> {
    clear_below_antidiagonal_with(f, t, w, ClearOptions::default())
}

/// Repeatedly takes the nonzero entry `(i, j)` below the anti-diagonal
/// maximizing `n·i + j` and replaces `T` by `T·diag(I, S, I)` so that the
/// maximum strictly drops.
///
/// For `j <= ⌈n/2⌉` the block `S` comes from [`right_flag_complement`] on
/// the constant anti-minor. Otherwise `S` has an isotropic vector of the
/// constant principal block as its last column and a basis of that
/// vector's orthogonal complement before it.
pub fn clear_below_antidiagonal_with(
    f: &Poly,
    t: &Transform,
    w: Option<&WeightFn>,
    opts: ClearOptions,
) -> Result<AntiTriWitness> {
    let n = f.nvars();
    if t.n() != n {
        return Err(Error::DimensionMismatch(format!("{}x{} transform for {n} variables", t.n(), t.n())));
    }
    if let Some(w) = w {
        let g = f.substitute_linear(t.matrix())?;
        let lead = w_leading_part(&g, w)?;
        if poly_determinant(&hessian(&lead.part))?.is_zero() {
            return Err(Error::HypothesesUnmet("leading part has zero Hessian determinant".into()));
        }
        if poly_determinant(&hessian(&g))?.is_zero() {
            return Err(Error::HypothesesUnmet("Hessian determinant vanishes".into()));
        }
    }
    let half = n.div_ceil(2);
    let mut t = t.clone();
    let mut last: Option<usize> = None;
    loop {
        let h = hessian(&f.substitute_linear(t.matrix())?);
        // 1-based (i, j) maximizing n·i + j
        let Some((i, j)) = h.below_antidiagonal().map(|(i, j)| (i + 1, j + 1)).max_by_key(|&(i, j)| n * i + j) else {
            break;
        };
        let potential = n * i + j;
        if last.is_some_and(|p| potential >= p) {
            return Err(Error::HypothesesUnmet(format!("clearing potential did not drop below {}", last.unwrap())));
        }
        last = Some(potential);
        let step = if j <= half {
            let j = if opts.increase_j { widened_j(&h, w, n, i, j, half) } else { j };
            flag_step(&h, n, i, j)?
        } else {
            isotropic_step(&h, n, i, f)?
        };
        t = t.compose(&step)?;
    }
    let g = f.substitute_linear(t.matrix())?;
    let h = hessian(&g);
    debug_assert!(h.is_anti_triangular());
    let det = poly_determinant(&h)?;
    let constants = if det.is_nonzero_constant() { anti_diagonal_constants(&h) } else { None };
    let leading = match w {
        Some(w) => Some(w_leading_part(&g, w)?.part),
        None => None,
    };
    Ok(AntiTriWitness { transform: t, weights: w.cloned(), leading, case_tag: CaseTag::Cleared, constants })
}

fn constant_block(h: &PolyMatrix, r0: usize, r1: usize, c0: usize, c1: usize) -> Option<ScalarMatrix> {
    let rows = (r0..r1)
        .map(|a| (c0..c1).map(|b| h.get(a, b).constant_value()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    ScalarMatrix::from_rows(rows).ok()
}

fn widened_j(h: &PolyMatrix, w: Option<&WeightFn>, n: usize, i: usize, j: usize, half: usize) -> usize {
    let Some(w) = w else { return j };
    let target = w.get(n - i);
    let mut best = j;
    for jj in (j + 1)..=half {
        if w.get(jj - 1) != target {
            break;
        }
        if constant_block(h, n - jj, i, n - i, jj).is_some() {
            best = jj;
        }
    }
    best
}

/// Anti-minor on rows `n+1-j..=i` and columns `n+1-i..=j` (1-based).
fn flag_step(h: &PolyMatrix, n: usize, i: usize, j: usize) -> Result<Transform> {
    let m = constant_block(h, n - j, i, n - i, j)
        .ok_or_else(|| Error::HypothesesUnmet(format!("anti-minor at ({i}, {j}) is not constant")))?;
    let s = right_flag_complement(&m)?;
    let mut e = ScalarMatrix::identity(n);
    e.set_block(n - i, n - i, &s);
    Transform::new(e)
}

/// Principal block on rows and columns `n+1-i..=i` (1-based).
fn isotropic_step(h: &PolyMatrix, n: usize, i: usize, f: &Poly) -> Result<Transform> {
    let m = constant_block(h, n - i, i, n - i, i)
        .ok_or_else(|| Error::HypothesesUnmet(format!("principal block at {i} is not constant")))?;
    let size = m.rows();
    let q = QuadraticForm::from_gram(m.clone(), f.field())?;
    let v = match isotropy_search(&q, DEFAULT_HEIGHT) {
        IsotropyResult::Witness { vector } => vector,
        IsotropyResult::Anisotropic { .. } => {
            return Err(Error::SquareRootUnavailable(format!(
                "principal block is anisotropic over {}",
                f.field().name()
            )))
        }
        IsotropyResult::Unknown { height } => return Err(Error::IsotropyUndecided(height)),
    };
    let mv = m.mul_vec(&v)?;
    let perp = if mv.iter().all(Scalar::is_zero) {
        ScalarMatrix::identity(size).to_rows()
    } else {
        ScalarMatrix::from_rows(vec![mv])?.nullspace()
    };
    let mut chosen = vec![v.clone()];
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for u in perp {
        chosen.push(u.clone());
        if ScalarMatrix::from_rows(chosen.clone())?.rank() == chosen.len() {
            cols.push(u);
        } else {
            chosen.pop();
        }
    }
    cols.push(v);
    let s = complete_basis(&cols, size)?;
    let mut e = ScalarMatrix::identity(n);
    e.set_block(n - i, n - i, &s);
    Transform::new(e)
}

/// Result of [`normalize_linear_part`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    /// Lower triangular.
    pub l: Transform,
    pub c: Scalar,
}

/// Lower triangular `L` with the constant part of `ℋf(TLx)` equal to `c·J`.
///
/// `c` is the middle anti-diagonal entry for odd `n`. For even `n` it is 1,
/// unless the constant part already is a multiple of `J`, in which case
/// `L = I` and `c` is that multiple.
pub fn normalize_linear_part(f: &Poly, t: &Transform) -> Result<Normalization> {
    let n = f.nvars();
    if !poly_determinant(&hessian(f))?.is_nonzero_constant() {
        return Err(Error::PreconditionUnmet("Hessian determinant is not a nonzero constant".into()));
    }
    let h = hessian(&f.substitute_linear(t.matrix())?);
    if !h.is_anti_triangular() {
        return Err(Error::PreconditionUnmet("Hessian of f(Tx) is not zero below the anti-diagonal".into()));
    }
    let m = h.constant_part().ok_or_else(|| Error::PreconditionUnmet("constant part depends on parameters".into()))?;
    let flip = ScalarMatrix::flip(n);
    let corner = m.get(0, n - 1).clone();
    if m == flip.scale(&corner) {
        return Ok(Normalization { l: Transform::identity(n), c: corner });
    }
    let c = if n % 2 == 1 { m.get(n / 2, n / 2).clone() } else { Scalar::one() };
    let cinv = c.inv().ok_or_else(|| Error::PreconditionUnmet("zero middle entry".into()))?;
    let lf = anti_lower_factorize(&m.scale(&cinv), f.field())?;
    let l = Transform::new(lf)?.inverted();
    let check = l.matrix().transpose().mul(&m)?.mul(l.matrix())?;
    if check != flip.scale(&c) {
        return Err(Error::PreconditionUnmet("constant part could not be normalized".into()));
    }
    Ok(Normalization { l, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};
    use crate::scalar::Field;

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, &Ring::standard(n, Field::Rational)).unwrap()
    }

    #[test]
    fn already_clear() {
        let f = p("x1*x3 + x2^2 + x1^2", 3);
        let w = WeightFn::from_ints(&[1, 2, 3]);
        let t = Transform::identity(3);
        let wit = clear_below_antidiagonal(&f, &t, Some(&w)).unwrap();
        assert_eq!(wit.transform, t);
        assert!(wit.check(&f).unwrap());
    }

    #[test]
    fn isotropic_branch_swaps() {
        let f = p("x1*x3 + x2^2 + x3^2", 3);
        let wit = clear_below_antidiagonal(&f, &Transform::identity(3), None).unwrap();
        assert_eq!(wit.transform.matrix(), &ScalarMatrix::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        let h = wit.transformed_hessian(&f).unwrap().as_scalar().unwrap();
        assert_eq!(h, ScalarMatrix::from_ints(&[&[2, 0, 1], &[0, 2, 0], &[1, 0, 0]]));
    }

    #[test]
    fn anisotropic_block() {
        let f = p("x1^2 + x2^2", 2);
        assert!(matches!(
            clear_below_antidiagonal(&f, &Transform::identity(2), None),
            Err(Error::SquareRootUnavailable(_))
        ));
    }

    #[test]
    fn flag_branch() {
        // ℋ = [[0,1,0],[1,0,1],[0,1,0]] has (3,2) below the anti-diagonal
        let f = p("x1*x2 + x2*x3 + x1^3", 3);
        let wit = clear_below_antidiagonal(&f, &Transform::identity(3), None).unwrap();
        assert!(wit.check(&f).unwrap());
    }

    #[test]
    fn normalization() {
        let f = p("x1*x3 + x2^2 + x1^2", 3);
        let nz = normalize_linear_part(&f, &Transform::identity(3)).unwrap();
        assert_eq!(nz.c, Scalar::from_int(2));
        let m = ScalarMatrix::from_ints(&[&[2, 0, 1], &[0, 2, 0], &[1, 0, 0]]);
        let l = nz.l.matrix();
        assert!(l.is_lower_triangular());
        assert_eq!(l.transpose().mul(&m).unwrap().mul(l).unwrap(), ScalarMatrix::flip(3).scale(&Scalar::from_int(2)));

        let f = p("x1^2 + x1*x2", 2);
        let nz = normalize_linear_part(&f, &Transform::identity(2)).unwrap();
        assert_eq!(nz.c, Scalar::one());
        let m = ScalarMatrix::from_ints(&[&[2, 1], &[1, 0]]);
        let l = nz.l.matrix();
        assert_eq!(l.transpose().mul(&m).unwrap().mul(l).unwrap(), ScalarMatrix::flip(2));

        let f = p("3*x1*x2 + x1^3", 2);
        let nz = normalize_linear_part(&f, &Transform::identity(2)).unwrap();
        assert_eq!((nz.l, nz.c), (Transform::identity(2), Scalar::from_int(3)));
    }
}
