//! Anti-triangular witnesses and their structured records.

use serde::{Deserialize, Serialize, Serializer};

use crate::calculus::{hessian, PolyMatrix};
use crate::error::Result;
use crate::linalg::{ScalarMatrix, Transform};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::weights::WeightFn;

/// How a witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// Weight search followed by clearing.
    WeightSearch,
    /// Isotropic vector of the quadratic part followed by clearing.
    Quadratic,
    /// Zero Hessian determinant, `h(Tx) ∈ K[x1]`.
    InOneForm,
    /// Zero Hessian determinant, `h(Tx) ∈ K[x1, x2]`.
    InTwoForms,
    /// Zero Hessian determinant, family shape.
    Rank1Family,
    /// One variable: nothing lies below the anti-diagonal.
    Univariate,
    /// Clearing applied to a caller-supplied transform.
    Cleared,
}

/// `T` with `ℋf(Tx)` zero below the anti-diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiTriWitness {
    pub transform: Transform,
    pub weights: Option<WeightFn>,
    /// The `w`-leading part of `f(Tx)` when weights are present.
    pub leading: Option<Poly>,
    pub case_tag: CaseTag,
    /// Anti-diagonal entries `c_1, …, c_n` from left to right, present when
    /// the Hessian determinant is a nonzero constant.
    pub constants: Option<Vec<Scalar>>,
}

impl AntiTriWitness {
    /// `ℋf(Tx)`.
    pub fn transformed_hessian(&self, f: &Poly) -> Result<PolyMatrix> {
        Ok(hessian(&f.substitute_linear(self.transform.matrix())?))
    }

    /// Re-derives the defining property from scratch.
    pub fn check(&self, f: &Poly) -> Result<bool> {
        let h = self.transformed_hessian(f)?;
        if !h.is_anti_triangular() {
            return Ok(false);
        }
        if let Some(cs) = &self.constants {
            let n = h.rows();
            return Ok((0..n).all(|i| h.get(n - 1 - i, i).constant_value().as_ref() == Some(&cs[i])));
        }
        Ok(true)
    }

    pub fn record(&self) -> WitnessRecord {
        WitnessRecord {
            t: self.transform.matrix().clone(),
            t_inverse: self.transform.inverse().clone(),
            w: self.weights.clone(),
            leading: self.leading.as_ref().map(ToString::to_string),
            case_tag: serde_json::to_value(self.case_tag)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            constants: self.constants.clone(),
        }
    }
}

impl Serialize for AntiTriWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

/// Flat record with exact string scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    #[serde(rename = "T")]
    pub t: ScalarMatrix,
    #[serde(rename = "T_inverse")]
    pub t_inverse: ScalarMatrix,
    pub w: Option<WeightFn>,
    pub leading: Option<String>,
    pub case_tag: String,
    pub constants: Option<Vec<Scalar>>,
}

impl WitnessRecord {
    pub(crate) fn transform_only(t: &Transform, tag: &str) -> Self {
        WitnessRecord {
            t: t.matrix().clone(),
            t_inverse: t.inverse().clone(),
            w: None,
            leading: None,
            case_tag: tag.to_string(),
            constants: None,
        }
    }
}

/// Anti-diagonal entries `(n+1-i, i)` when all are nonzero constants.
pub(crate) fn anti_diagonal_constants(h: &PolyMatrix) -> Option<Vec<Scalar>> {
    let n = h.rows();
    (0..n).map(|i| h.get(n - 1 - i, i).constant_value().filter(|c| !c.is_zero())).collect()
}
