//! Directional kernels, degenerate transforms and the classification of
//! polynomials with zero Hessian determinant in up to three variables.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::univariate::{roots, square_free};
use super::witness::WitnessRecord;
use crate::calculus::{hessian, poly_determinant};
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, ScalarMatrix, Transform};
use crate::poly::{Monomial, Poly};
use crate::scalar::{Field, Scalar};

/// Basis of all `λ` with `Σ λ_i ∂_i h = 0`.
pub fn directional_kernel(h: &Poly) -> Vec<Vec<Scalar>> {
    let n = h.nvars();
    let partials: Vec<Poly> = (0..n).map(|k| h.partial(k).expect("variable index in range")).collect();
    let mut rows: BTreeMap<Monomial, Vec<Scalar>> = BTreeMap::new();
    for (k, p) in partials.iter().enumerate() {
        for (m, c) in p.terms() {
            rows.entry(m.clone()).or_insert_with(|| vec![Scalar::zero(); n])[k] = c.clone();
        }
    }
    if rows.is_empty() {
        return ScalarMatrix::zeros(1, n).nullspace();
    }
    let system = ScalarMatrix::from_rows(rows.into_values().collect()).expect("rows of equal length");
    system.nullspace().iter().map(|v| normalize_vector(v)).collect()
}

/// `T` whose last columns are `basis`, so that `h(Tx)` is free of the last
/// `basis.len()` variables.
pub fn make_degenerate_transform(h: &Poly, basis: &[Vec<Scalar>]) -> Result<Transform> {
    if basis.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let n = h.nvars();
    let t = Transform::new(complete_basis(basis, n)?)?;
    let g = h.substitute_linear(t.matrix())?;
    if ((n - basis.len())..n).any(|k| g.involves_var(k)) {
        return Err(Error::InvalidArgument("vectors do not lie in the directional kernel".into()));
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    InOneForm,
    InTwoForms,
    Rank1Family,
    NonDegenerate,
}

impl ClassTag {
    pub fn name(self) -> &'static str {
        match self {
            ClassTag::InOneForm => "in_one_form",
            ClassTag::InTwoForms => "in_two_forms",
            ClassTag::Rank1Family => "rank1_family",
            ClassTag::NonDegenerate => "non_degenerate",
        }
    }
}

/// Shape of a polynomial with zero Hessian determinant.
///
/// `transform` brings `h` into the reduced shape `reduced = h(Tx)`: a
/// polynomial in `x1` (`InOneForm`), in `x1, x2` (`InTwoForms`), or
/// `a1(x1) + a2(x1) x2 + a3(x1) x3` (`Rank1Family`). `forms` lists `l1`
/// (and `l2`, or `l4` for the family) as coefficient vectors; `family` holds
/// `g1, g2, g3` as polynomials in `x1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub tag: ClassTag,
    pub forms: Vec<Vec<Scalar>>,
    pub family: Vec<Poly>,
    pub transform: Transform,
    pub reduced: Poly,
}

impl Classification {
    /// Rebuilds the classified polynomial from the stored data alone.
    pub fn reconstruct(&self) -> Result<Poly> {
        match self.tag {
            ClassTag::Rank1Family => {
                let ring = self.reduced.ring();
                let n = ring.nvars();
                let l1 = Poly::linear_form(ring, &self.forms[0]);
                let mut images: Vec<Poly> = (0..n).map(|k| Poly::var(ring, k)).collect();
                images[0] = l1;
                let mut sum = Poly::zero(ring);
                for (k, g) in self.family.iter().enumerate() {
                    sum = &sum + &(&g.compose(&images)? * &Poly::var(ring, k));
                }
                Ok(sum)
            }
            _ => self.reduced.substitute_linear(self.transform.inverse()),
        }
    }

    pub fn form_polys(&self) -> Vec<Poly> {
        self.forms.iter().map(|v| Poly::linear_form(self.reduced.ring(), v)).collect()
    }

    pub fn record(&self) -> ClassificationRecord {
        ClassificationRecord {
            tag: self.tag,
            forms: self.form_polys().iter().map(ToString::to_string).collect(),
            family: self.family.iter().map(ToString::to_string).collect(),
            reduced: self.reduced.to_string(),
            transform: WitnessRecord::transform_only(&self.transform, self.tag.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ClassificationRecord {
    pub tag: ClassTag,
    pub forms: Vec<String>,
    pub family: Vec<String>,
    pub reduced: String,
    pub transform: WitnessRecord,
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

/// Like [`classify_zero_hessian`], but reports `NonDegenerate` instead of
/// failing when the Hessian determinant is nonzero.
pub fn classify(h: &Poly) -> Result<Classification> {
    check_input(h)?;
    if !poly_determinant(&hessian(h))?.is_zero() {
        let n = h.nvars();
        return Ok(Classification {
            tag: ClassTag::NonDegenerate,
            forms: Vec::new(),
            family: Vec::new(),
            transform: Transform::identity(n),
            reduced: h.clone(),
        });
    }
    classify_zero_hessian(h)
}

fn check_input(h: &Poly) -> Result<()> {
    let n = h.nvars();
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if h.terms().any(|(m, _)| m.var_degree(n) < 2) {
        return Err(Error::PreconditionUnmet("terms of degree below two".into()));
    }
    Ok(())
}

pub fn classify_zero_hessian(h: &Poly) -> Result<Classification> {
    check_input(h)?;
    if !poly_determinant(&hessian(h))?.is_zero() {
        return Err(Error::NotZeroHessian);
    }
    let n = h.nvars();
    if h.is_zero() {
        return Ok(Classification {
            tag: ClassTag::InOneForm,
            forms: vec![unit(n, 0)],
            family: Vec::new(),
            transform: Transform::identity(n),
            reduced: h.clone(),
        });
    }
    let kernel = directional_kernel(h);
    let r = kernel.len();
    if r >= 1 {
        let t = make_degenerate_transform(h, &kernel)?;
        let reduced = h.substitute_linear(t.matrix())?;
        let used = n - r;
        let tag = if used <= 1 { ClassTag::InOneForm } else { ClassTag::InTwoForms };
        let forms = (0..used).map(|k| t.inverse().row(k).to_vec()).collect();
        return Ok(Classification { tag, forms, family: Vec::new(), transform: t, reduced });
    }
    if n == 3 && r == 0 {
        return rank1_family(h);
    }
    Err(Error::HypothesesUnmet(format!("no degenerate shape found for {h}")))
}

fn unit(n: usize, k: usize) -> Vec<Scalar> {
    let mut e = vec![Scalar::zero(); n];
    e[k] = Scalar::one();
    e
}

/// Invertible matrix whose first rows are `first`, completed by unit vectors.
pub(crate) fn rows_starting_with(first: &[Vec<Scalar>], n: usize) -> Result<ScalarMatrix> {
    let c = complete_basis(first, n)?;
    let fill = n - first.len();
    let mut rows: Vec<Vec<Scalar>> = first.to_vec();
    rows.extend((0..fill).map(|k| c.column(k)));
    ScalarMatrix::from_rows(rows)
}

/// Scales so that the first nonzero coordinate is 1.
pub(crate) fn normalize_vector(v: &[Scalar]) -> Vec<Scalar> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(p) => {
            let inv = p.inv().expect("nonzero pivot");
            v.iter().map(|c| c * &inv).collect()
        }
        None => v.to_vec(),
    }
}

/// Constant coefficient matrices of `ℋh`, one per monomial.
fn hessian_coefficients(h: &Poly) -> Vec<ScalarMatrix> {
    let n = h.nvars();
    let hm = hessian(h);
    let mut by_mono: BTreeMap<Monomial, ScalarMatrix> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for (m, c) in hm.get(i, j).terms() {
                by_mono.entry(m.clone()).or_insert_with(|| ScalarMatrix::zeros(n, n)).set(i, j, c.clone());
            }
        }
    }
    by_mono.into_values().collect()
}

/// Candidates for `l1`: every plane orthogonal to `l1` is totally isotropic
/// for all coefficient matrices of `ℋh`, so a rank one matrix is a multiple
/// of `l1 l1ᵗ` and a rank two matrix factors as a product containing `l1`.
fn l1_candidates(h: &Poly) -> Result<Vec<Vec<Scalar>>> {
    let field = h.field();
    let coeffs = hessian_coefficients(h);
    if let Some(m) = coeffs.iter().find(|m| m.rank() == 1) {
        let col = (0..m.cols()).map(|j| m.column(j)).find(|c| c.iter().any(|x| !x.is_zero())).expect("rank one");
        return Ok(vec![normalize_vector(&col)]);
    }
    let Some(m) = coeffs.iter().find(|m| m.rank() == 2) else {
        return Ok(Vec::new());
    };
    let k = m.nullspace();
    let p = complete_basis(&k, m.rows())?;
    let pinv = p.inverse()?;
    // The form restricted to the first two columns of P.
    let cols: Vec<Vec<Scalar>> = (0..2).map(|j| p.column(j)).collect();
    let b = |u: &[Scalar], v: &[Scalar]| -> Scalar {
        let mv = m.mul_vec(v).expect("square");
        u.iter().zip(&mv).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
    };
    let (a, bb, c) = (b(&cols[0], &cols[0]), b(&cols[0], &cols[1]), b(&cols[1], &cols[1]));
    let mut factors_y: Vec<Vec<Scalar>> = Vec::new();
    if a.is_zero() {
        factors_y.push(vec![Scalar::zero(), Scalar::one(), Scalar::zero()]);
        factors_y.push(vec![Scalar::from_int(2) * &bb, c, Scalar::zero()]);
    } else {
        // a y1² + 2b y1 y2 + c y2² = a (y1 - r1 y2)(y1 - r2 y2)
        let disc = &bb * &bb - &a * &c;
        let s = disc
            .sqrt(field)
            .ok_or_else(|| Error::NeedsExtension(format!("square root of {disc} for the repeated linear form")))?;
        for sign in [Scalar::one(), -Scalar::one()] {
            let r = (-&bb + &sign * &s) / &a;
            factors_y.push(vec![Scalar::one(), -r, Scalar::zero()]);
        }
    }
    // A linear form with coefficients u in y-coordinates is u · P⁻¹ in x.
    let pt = pinv.transpose();
    let mut out = Vec::new();
    for u in factors_y {
        let v = normalize_vector(&pt.mul_vec(&u)?);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

fn rank1_family(h: &Poly) -> Result<Classification> {
    let ring = h.ring();
    let n = 3;
    let d = h.degree().expect("nonzero");
    for a in l1_candidates(h)? {
        let r = rows_starting_with(std::slice::from_ref(&a), n)?;
        let t = Transform::new(r.inverse()?)?;
        let reduced = h.substitute_linear(t.matrix())?;
        if reduced.terms().any(|(m, _)| m.exponents()[1] + m.exponents()[2] > 1) {
            continue;
        }
        let x1 = Poly::var(ring, 0);
        let a1 = reduced.filter(|m| m.exponents()[1] == 0 && m.exponents()[2] == 0);
        let Some(b1) = a1.div_exact(&x1).or_else(|| a1.is_zero().then(|| Poly::zero(ring))) else {
            continue;
        };
        let strip = |k: usize| -> Poly {
            let part = reduced.filter(|m| m.exponents()[k] == 1);
            part.div_exact(&Poly::var(ring, k)).unwrap_or_else(|| Poly::zero(ring))
        };
        let parts = [b1, strip(1), strip(2)];
        let family: Vec<Poly> =
            (0..n).map(|k| (0..n).fold(Poly::zero(ring), |acc, j| &acc + &parts[j].scale(r.get(j, k)))).collect();
        let mut top = vec![0; ring.width()];
        top[0] = d - 1;
        let top = Monomial::from_exponents(top);
        let l4: Vec<Scalar> = family.iter().map(|g| g.coeff(&top)).collect();
        let cls = Classification {
            tag: ClassTag::Rank1Family,
            forms: vec![a.clone(), l4.clone()],
            family,
            transform: t,
            reduced,
        };
        if cls.reconstruct()? != *h {
            continue;
        }
        let lead = h.leading_homogeneous()?;
        let l1p = Poly::linear_form(ring, &a);
        if lead != &l1p.pow(d - 1) * &Poly::linear_form(ring, &l4) {
            continue;
        }
        return Ok(cls);
    }
    Err(Error::NeedsExtension(format!("no linear form over {} exhibits the family shape of {h}", h.field().name())))
}

/// Linear factor `α x_a + β x_b` of maximal multiplicity over the field of
/// a binary form in `x_a` and one other variable `x_b`, normalized with first nonzero coefficient 1.
/// Ties go to the lexicographically least normalized form. Returns `x_a`
/// when the form has no linear factor over the field.
pub(crate) fn max_linear_factor(p: &Poly, a: usize, field: Field) -> Result<(Scalar, Scalar)> {
    let d = p.degree().unwrap_or(0);
    let mut coeffs = vec![Scalar::zero(); d as usize + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[a] as usize] = c.clone();
    }
    let kmax = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let mut best: Option<(u32, (Scalar, Scalar))> = None;
    let mut consider = |mult: u32, form: (Scalar, Scalar)| {
        let better = match &best {
            None => true,
            Some((bm, bf)) => mult > *bm || (mult == *bm && form < *bf),
        };
        if better {
            best = Some((mult, form));
        }
    };
    let xb_mult = d as usize - kmax;
    if xb_mult > 0 && !p.is_zero() {
        consider(xb_mult as u32, (Scalar::zero(), Scalar::one()));
    }
    // p(t, 1) = Σ c_k t^k; a root r gives the factor x_a - r x_b
    let dehom: Vec<Scalar> = coeffs[..=kmax].to_vec();
    for (factor, mult) in square_free(&dehom) {
        for r in roots(&factor, field)? {
            consider(mult, (Scalar::one(), -r));
        }
    }
    Ok(best.map(|(_, f)| f).unwrap_or((Scalar::one(), Scalar::zero())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, &Ring::standard(n, Field::Rational)).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn kernels() {
        assert_eq!(directional_kernel(&p("(x1+x2)^3", 2)), vec![v(&[1, -1])]);
        assert!(directional_kernel(&p("x1^2 + x2^2", 2)).is_empty());
        assert!(directional_kernel(&p("x1^2*x2 + x1^3*x3", 3)).is_empty());
    }

    #[test]
    fn degenerate_transforms() {
        let h = p("(x1+x2)^3", 2);
        let t = make_degenerate_transform(&h, &[v(&[1, -1])]).unwrap();
        let g = h.substitute_linear(t.matrix()).unwrap();
        assert_eq!(g, p("x1^3", 2));
        let h = p("x1^3", 2);
        assert_eq!(make_degenerate_transform(&h, &[v(&[0, 1])]).unwrap(), Transform::identity(2));
        let h = p("(x1+x2+x3)^2", 3);
        let k = directional_kernel(&h);
        assert_eq!(k.len(), 2);
        let g = h.substitute_linear(make_degenerate_transform(&h, &k).unwrap().matrix()).unwrap();
        assert!(!g.involves_var(1) && !g.involves_var(2));
        assert_eq!(make_degenerate_transform(&h, &[]), Err(Error::EmptyKernel));
    }

    #[test]
    fn classifications() {
        let h = p("x1^2*x2 + x1*x2^2", 3);
        let c = classify_zero_hessian(&h).unwrap();
        assert_eq!(c.tag, ClassTag::InTwoForms);
        assert_eq!(c.reconstruct().unwrap(), h);

        let h = p("x1^2*x2 + x1^3*x3", 3);
        let c = classify_zero_hessian(&h).unwrap();
        assert_eq!(c.tag, ClassTag::Rank1Family);
        assert_eq!(c.forms, vec![v(&[1, 0, 0]), v(&[0, 0, 1])]);
        let fam: Vec<String> = c.family.iter().map(ToString::to_string).collect();
        assert_eq!(fam, vec!["0", "x1^2", "x1^3"]);
        assert_eq!(c.reconstruct().unwrap(), h);

        let h = p("(x1+x2)^3", 2);
        let c = classify_zero_hessian(&h).unwrap();
        assert_eq!(c.tag, ClassTag::InOneForm);
        assert_eq!(c.forms, vec![v(&[1, 1])]);

        assert_eq!(classify_zero_hessian(&p("x1^2 + x2^2", 2)), Err(Error::NotZeroHessian));
        assert_eq!(classify(&p("x1^2 + x2^2", 2)).unwrap().tag, ClassTag::NonDegenerate);
        assert_eq!(classify_zero_hessian(&p("x1^2", 4)), Err(Error::UnsupportedDimension(4)));
    }

    #[test]
    fn rank1_with_rotated_form() {
        // l1 = x1 + 2 x2 - x3 substituted into g = (0, y^2, y^3)
        let r = Ring::standard(3, Field::Rational);
        let h = parse_poly("(x1+2*x2-x3)^2*x2 + (x1+2*x2-x3)^3*x3 + (x1+2*x2-x3)^4", &r).unwrap();
        let c = classify_zero_hessian(&h).unwrap();
        assert_eq!(c.tag, ClassTag::Rank1Family);
        assert_eq!(c.forms[0], v(&[1, 2, -1]));
        assert_eq!(c.reconstruct().unwrap(), h);
    }

    #[test]
    fn linear_factors() {
        let r = Ring::standard(2, Field::Rational);
        // x1 (x1 - 2 x2)^2
        let f = parse_poly("x1*(x1-2*x2)^2", &r).unwrap();
        assert_eq!(max_linear_factor(&f, 0, Field::Rational).unwrap(), (Scalar::one(), Scalar::from_int(-2)));
        let f = parse_poly("x1*x2^3", &r).unwrap();
        assert_eq!(max_linear_factor(&f, 0, Field::Rational).unwrap(), (Scalar::zero(), Scalar::one()));
        let f = parse_poly("x1^2 + x2^2", &r).unwrap();
        assert_eq!(max_linear_factor(&f, 0, Field::Rational).unwrap(), (Scalar::one(), Scalar::zero()));
    }
}
