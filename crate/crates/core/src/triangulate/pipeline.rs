//! End-to-end search for `T` with `ℋf(Tx)` zero below the anti-diagonal.

use serde::{Serialize, Serializer};

use super::classify::{classify_zero_hessian, ClassTag};
use super::clear::clear_below_antidiagonal;
use super::weight_search::{find_adapted_weight_with, SearchOptions, DEFAULT_BUDGET};
use super::witness::{anti_diagonal_constants, AntiTriWitness, CaseTag};
use crate::calculus::{hessian, poly_determinant};
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, Transform};
use crate::poly::Poly;
use crate::quadform::{isotropy_search, Certificate, IsotropyResult, QuadraticForm, DEFAULT_HEIGHT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineOutcome {
    Witness(AntiTriWitness),
    /// The quadratic part is anisotropic, so no such `T` exists.
    IsotropyObstruction(Certificate),
}

impl Serialize for PipelineOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "outcome", rename_all = "snake_case")]
        enum Rec<'a> {
            Witness { witness: super::witness::WitnessRecord },
            IsotropyObstruction { certificate: &'a Certificate },
        }
        match self {
            PipelineOutcome::Witness(w) => Rec::Witness { witness: w.record() },
            PipelineOutcome::IsotropyObstruction(c) => Rec::IsotropyObstruction { certificate: c },
        }
        .serialize(s)
    }
}

impl PipelineOutcome {
    pub fn witness(&self) -> Option<&AntiTriWitness> {
        match self {
            PipelineOutcome::Witness(w) => Some(w),
            PipelineOutcome::IsotropyObstruction(_) => None,
        }
    }
}

/// Dispatches on the Hessian determinant and the degree:
/// zero determinant goes through the classification, degree at least three
/// through the weight search and clearing, degree two through an isotropic
/// vector of the quadratic part.
pub fn dillen_pipeline(f: &Poly) -> Result<PipelineOutcome> {
    dillen_pipeline_with(f, PipelineOptions::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Weight-search budget.
    pub budget: usize,
    /// Witness-search height for the quadratic case.
    pub height: u32,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { budget: DEFAULT_BUDGET, height: DEFAULT_HEIGHT }
    }
}

pub fn dillen_pipeline_with(f: &Poly, opts: PipelineOptions) -> Result<PipelineOutcome> {
    let n = f.nvars();
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if f.ring().nparams() > 0 {
        return Err(Error::InvalidArgument("parameters must be specialized first".into()));
    }
    let det = poly_determinant(&hessian(f))?;
    if !det.is_constant() {
        return Err(Error::NonConstantDeterminant);
    }
    let witness = if det.is_zero() {
        zero_determinant(f)?
    } else if n == 1 {
        finish(f, Transform::identity(1), CaseTag::Univariate)?
    } else if f.degree().unwrap_or(0) >= 3 {
        let aw = find_adapted_weight_with(f, SearchOptions { budget: opts.budget, generic: false })?;
        let mut wit = clear_below_antidiagonal(f, &aw.transform, Some(&aw.weights))?;
        wit.case_tag = CaseTag::WeightSearch;
        wit
    } else {
        let q = QuadraticForm::from_poly(f)?;
        match isotropy_search(&q, opts.height) {
            IsotropyResult::Witness { vector } => {
                let s = Transform::new(complete_basis(&[vector], n)?)?;
                let mut wit = clear_below_antidiagonal(f, &s, None)?;
                wit.case_tag = CaseTag::Quadratic;
                wit
            }
            IsotropyResult::Anisotropic { certificate } => {
                return Ok(PipelineOutcome::IsotropyObstruction(certificate));
            }
            IsotropyResult::Unknown { height } => return Err(Error::IsotropyUndecided(height)),
        }
    };
    if !witness.check(f)? {
        return Err(Error::HypothesesUnmet("witness failed its final check".into()));
    }
    Ok(PipelineOutcome::Witness(witness))
}

fn zero_determinant(f: &Poly) -> Result<AntiTriWitness> {
    let n = f.nvars();
    let h = f.filter(|m| m.var_degree(n) >= 2);
    let c = classify_zero_hessian(&h)?;
    let tag = match c.tag {
        ClassTag::InOneForm | ClassTag::NonDegenerate => CaseTag::InOneForm,
        ClassTag::InTwoForms => CaseTag::InTwoForms,
        ClassTag::Rank1Family => CaseTag::Rank1Family,
    };
    finish(f, c.transform, tag)
}

fn finish(f: &Poly, t: Transform, case_tag: CaseTag) -> Result<AntiTriWitness> {
    let h = hessian(&f.substitute_linear(t.matrix())?);
    if !h.is_anti_triangular() {
        return Err(Error::HypothesesUnmet("transform does not clear the Hessian".into()));
    }
    let det = poly_determinant(&h)?;
    let constants = if det.is_nonzero_constant() { anti_diagonal_constants(&h) } else { None };
    Ok(AntiTriWitness { transform: t, weights: None, leading: None, case_tag, constants })
}
