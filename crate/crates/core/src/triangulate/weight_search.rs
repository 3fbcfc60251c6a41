//! Search for a transform and positive ordered weights whose leading part
//! has a nonzero Hessian determinant.
//!
//! In up to three variables the walk starts from uniform weights, brings
//! the leading form into the shape where `x1` is its linear factor of
//! highest multiplicity, and raises the weights of the later variables one
//! critical step at a time. Which weights are raised depends on the degree
//! `r` of the leading part in `x2`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::classify::{classify_zero_hessian, directional_kernel, max_linear_factor, rows_starting_with, ClassTag};
use crate::calculus::{hessian, poly_determinant};
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, ScalarMatrix, Transform};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::weights::{next_critical_step, w_leading_part, LeadingPart, WeightFn};

/// Default number of weight steps.
pub const DEFAULT_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: usize,
    /// Walks along cycled directions over a deterministic sequence of
    /// transforms, in any dimension. Intended for probing `n >= 4`.
    pub generic: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, generic: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedWeight {
    pub transform: Transform,
    pub weights: WeightFn,
    pub leading: LeadingPart,
    /// Weight steps taken.
    pub steps: usize,
}

pub fn find_adapted_weight(f: &Poly) -> Result<AdaptedWeight> {
    find_adapted_weight_with(f, SearchOptions::default())
}

pub fn find_adapted_weight_with(f: &Poly, opts: SearchOptions) -> Result<AdaptedWeight> {
    let n = f.nvars();
    if n == 0 || (n > 3 && !opts.generic) {
        return Err(Error::UnsupportedDimension(n));
    }
    if poly_determinant(&hessian(f))?.is_zero() {
        return Err(Error::ZeroHessianDeterminant);
    }
    if opts.generic {
        return generic_search(f, opts.budget);
    }
    let mut t = Transform::identity(n);
    let mut w = WeightFn::uniform(n);
    for step in 0..=opts.budget {
        let g = f.substitute_linear(t.matrix())?;
        let lead = w_leading_part(&g, &w)?;
        if !det_hessian_is_zero(&lead.part)? {
            return Ok(AdaptedWeight { transform: t, weights: w, leading: lead, steps: step });
        }
        if step == opts.budget {
            break;
        }
        let v = w.values();
        let realign = if v.iter().all(|x| x == &v[0]) {
            Some(claim_transform(&lead.part)?)
        } else if n == 3 && v[0] < v[1] && v[1] == v[2] {
            kernel_alignment(&lead.part)?
        } else {
            None
        };
        let (g, lead) = match realign {
            Some(s) => {
                t = t.compose(&s)?;
                let g = f.substitute_linear(t.matrix())?;
                let lead = w_leading_part(&g, &w)?;
                (g, lead)
            }
            None => (g, lead),
        };
        let r = if n >= 2 { lead.part.degree_in(&[1]).unwrap_or(0) } else { 0 };
        let delta = direction(n, r);
        match next_critical_step(&g, &w, &delta)? {
            Some(s) => w = w.step(&delta, &s),
            None => return Err(Error::SearchStuck(format!("no critical step from weights {w} with r = {r}"))),
        }
    }
    Err(Error::BudgetExceeded { budget: opts.budget })
}

fn det_hessian_is_zero(h: &Poly) -> Result<bool> {
    Ok(poly_determinant(&hessian(h))?.is_zero())
}

fn direction(n: usize, r: u32) -> Vec<BigRational> {
    let z = BigRational::zero;
    let o = BigRational::one;
    match (n, r) {
        (1, _) => vec![o()],
        (2, _) => vec![z(), o()],
        (_, 0 | 1) => vec![z(), o(), o()],
        _ => vec![z(), z(), o()],
    }
}

/// Realigns a homogeneous leading form with zero Hessian determinant so
/// that it lies in `K[x1, x2]` with `x1` a linear factor of maximal
/// multiplicity.
fn claim_transform(h: &Poly) -> Result<Transform> {
    let n = h.nvars();
    if n == 1 {
        return Ok(Transform::identity(1));
    }
    let c = classify_zero_hessian(h)?;
    match c.tag {
        ClassTag::InOneForm | ClassTag::NonDegenerate => Ok(c.transform),
        ClassTag::InTwoForms => {
            let (a, b) = max_linear_factor(&c.reduced, 0, h.field())?;
            let m = rows_starting_with(&[vec![a, b]], 2)?;
            let mut s = ScalarMatrix::identity(n);
            s.set_block(0, 0, &m.inverse()?);
            c.transform.compose(&Transform::new(s)?)
        }
        ClassTag::Rank1Family => {
            let (l1, l4) = (c.forms[0].clone(), c.forms[1].clone());
            let pair = ScalarMatrix::from_rows(vec![l1.clone(), l4.clone()])?;
            let first = if pair.rank() == 2 { vec![l1, l4] } else { vec![l1] };
            Transform::new(rows_starting_with(&first, n)?.inverse()?)
        }
    }
}

/// For `w1 < w2 = w3`: a change of `x2, x3` after which the leading part is
/// free of `x3`, if its directional kernel meets `λ1 = 0`.
fn kernel_alignment(h: &Poly) -> Result<Option<Transform>> {
    let kernel = directional_kernel(h);
    if kernel.is_empty() {
        return Ok(None);
    }
    let firsts = ScalarMatrix::from_rows(vec![kernel.iter().map(|v| v[0].clone()).collect()])?;
    let Some(c) = firsts.nullspace().into_iter().next() else {
        return Ok(None);
    };
    let mut v = vec![Scalar::zero(); 3];
    for (cj, kv) in c.iter().zip(&kernel) {
        for (x, y) in v.iter_mut().zip(kv) {
            *x += &(cj * y);
        }
    }
    let m = complete_basis(&[vec![v[1].clone(), v[2].clone()]], 2)?;
    let mut s = ScalarMatrix::identity(3);
    s.set_block(1, 1, &m);
    Ok(Some(Transform::new(s)?))
}

/// Cycles the directions `(0,…,0,1,…,1)` along a deterministic sequence of
/// transforms; every evaluated pair `(T, w)` costs one unit of budget.
fn generic_search(f: &Poly, budget: usize) -> Result<AdaptedWeight> {
    let n = f.nvars();
    let dirs: Vec<Vec<BigRational>> = (1..n)
        .map(|k| (0..n).map(|i| if i < k { BigRational::zero() } else { BigRational::one() }).collect())
        .collect();
    let mut spent = 0usize;
    let mut transforms = TransformWalk::new(n);
    loop {
        let t = transforms.next_transform()?;
        let g = f.substitute_linear(t.matrix())?;
        let mut w = WeightFn::uniform(n);
        let mut turn = 0usize;
        loop {
            if spent == budget {
                return Err(Error::BudgetExceeded { budget });
            }
            spent += 1;
            let lead = w_leading_part(&g, &w)?;
            if !det_hessian_is_zero(&lead.part)? {
                return Ok(AdaptedWeight { transform: t, weights: w, leading: lead, steps: spent });
            }
            let mut moved = false;
            for k in 0..dirs.len() {
                let d = &dirs[(turn + k) % dirs.len()];
                if let Some(s) = next_critical_step(&g, &w, d)? {
                    w = w.step(d, &s);
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
            turn += 1;
        }
    }
}

/// `I, I·E_1, I·E_1·E_2, …` with shears `E_k: x_i ↦ x_i + c x_j` cycling
/// over ordered pairs `i ≠ j` and `c ∈ {1, -1, 2}`.
struct TransformWalk {
    n: usize,
    k: usize,
    current: Transform,
}

impl TransformWalk {
    fn new(n: usize) -> Self {
        TransformWalk { n, k: 0, current: Transform::identity(n) }
    }

    fn next_transform(&mut self) -> Result<Transform> {
        let out = self.current.clone();
        let n = self.n;
        if n >= 2 {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
            let (i, j) = pairs[self.k % pairs.len()];
            let c = [1, -1, 2][(self.k / pairs.len()) % 3];
            let mut e = ScalarMatrix::identity(n);
            e.set(i, j, Scalar::from_int(c));
            self.current = self.current.compose(&Transform::new(e)?)?;
        }
        self.k += 1;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};
    use crate::scalar::Field;

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, &Ring::standard(n, Field::Rational)).unwrap()
    }

    fn check(f: &Poly, a: &AdaptedWeight) {
        assert!(a.weights.is_positive_ordered());
        let g = f.substitute_linear(a.transform.matrix()).unwrap();
        let lead = w_leading_part(&g, &a.weights).unwrap();
        assert_eq!(lead, a.leading);
        assert!(!poly_determinant(&hessian(&lead.part)).unwrap().is_zero());
    }

    #[test]
    fn planar_cubic() {
        let f = p("x1*x2 + x2^3", 2);
        let a = find_adapted_weight(&f).unwrap();
        check(&f, &a);
        assert_eq!(a.transform.matrix(), &ScalarMatrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(a.weights.normalized(), WeightFn::from_ints(&[1, 2]));
        assert_eq!(a.leading.part, p("x1^3 + x1*x2", 2));
        assert_eq!(poly_determinant(&hessian(&a.leading.part)).unwrap(), p("-1", 2));
    }

    #[test]
    fn nondegenerate_quadratic() {
        let f = p("1/2*x1^2 + 1/2*x2^2", 2);
        let a = find_adapted_weight(&f).unwrap();
        assert_eq!(a.transform, Transform::identity(2));
        assert_eq!(a.weights, WeightFn::uniform(2));
        assert_eq!(a.leading.part, f);
    }

    #[test]
    fn three_variables() {
        for s in ["x1*x3 + x2^2 + x3^3", "x1*x3 + x2^2 + x2*x1^2 + x1^4", "x2*x3 + x1^2 + (x1+x2+x3)^3"] {
            let f = p(s, 3);
            let a = find_adapted_weight(&f).unwrap();
            check(&f, &a);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(find_adapted_weight(&p("x1^3", 2)), Err(Error::ZeroHessianDeterminant));
        assert_eq!(find_adapted_weight(&p("x1*x2 + x3*x4", 4)), Err(Error::UnsupportedDimension(4)));
    }
}
