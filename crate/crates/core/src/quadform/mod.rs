//! Quadratic forms: isotropic vectors, anisotropy certificates and the
//! degree-two harness for definite quadratic parts.

mod certificate;
mod gint;
mod search;

use serde::{Deserialize, Serialize};

use crate::calculus::{hessian, poly_determinant};
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

pub use certificate::{candidate_moduli, check_certificate, find_certificate, Certificate, DescentStep};

/// Height used when no bound is given.
pub const DEFAULT_HEIGHT: u32 = 50;
/// Number of candidate vectors examined before a search gives up.
pub const SEARCH_BUDGET: u64 = 20_000_000;

/// `μ ↦ μᵗ G μ` with a symmetric Gram matrix `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticForm {
    gram: ScalarMatrix,
    field: Field,
}

impl QuadraticForm {
    pub fn from_gram(gram: ScalarMatrix, field: Field) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if field == Field::Rational && gram.field() != Field::Rational {
            return Err(Error::FieldMismatch("Gaussian entries in a rational form".into()));
        }
        Ok(QuadraticForm { gram, field })
    }

    /// The quadratic part of `f`, with Gram matrix half its Hessian.
    pub fn from_poly(f: &Poly) -> Result<Self> {
        let q = f.homogeneous_part(2);
        let h = hessian(&q)
            .as_scalar()
            .ok_or_else(|| Error::InvalidArgument("quadratic part depends on parameters".into()))?;
        Self::from_gram(h.scale(&Scalar::ratio(1, 2)), f.field())
    }

    pub fn n(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &ScalarMatrix {
        &self.gram
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn eval(&self, mu: &[Scalar]) -> Result<Scalar> {
        let gm = self.gram.mul_vec(mu)?;
        Ok(mu.iter().zip(&gm).fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Integral upper-triangular coefficients proportional to the form.
    fn integral_coefficients(&self) -> Result<search::Coeffs> {
        let n = self.n();
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                flat.push(match i.cmp(&j) {
                    std::cmp::Ordering::Less => self.gram.get(i, j) * &Scalar::from_int(2),
                    std::cmp::Ordering::Equal => self.gram.get(i, j).clone(),
                    std::cmp::Ordering::Greater => Scalar::zero(),
                });
            }
        }
        let ints = gint::integral_vector(&flat)?;
        Ok(ints.chunks(n.max(1)).map(<[_]>::to_vec).collect())
    }
}

/// Exact Hessian of `f` at a point.
pub fn hessian_at(f: &Poly, lambda: &[Scalar]) -> Result<ScalarMatrix> {
    if lambda.len() != f.nvars() {
        return Err(Error::DimensionMismatch(format!("point of length {} for {} variables", lambda.len(), f.nvars())));
    }
    if f.field() == Field::Rational && lambda.iter().any(|x| !x.is_rational()) {
        return Err(Error::FieldMismatch("Gaussian point for a rational polynomial".into()));
    }
    hessian(f).eval(lambda)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IsotropyResult {
    /// A nonzero vector on which the form vanishes.
    Witness {
        vector: Vec<Scalar>,
    },
    Anisotropic {
        certificate: Certificate,
    },
    /// No witness with coordinates of height at most `height`, and no certificate.
    Unknown {
        height: u32,
    },
}

/// Certificate first, then an exhaustive search up to `height`.
///
/// A certificate rules out every witness, so trying it first changes no
/// outcome and avoids long searches on anisotropic forms.
pub fn isotropy_search(q: &QuadraticForm, height: u32) -> IsotropyResult {
    isotropy_search_with_budget(q, height, SEARCH_BUDGET)
}

pub fn isotropy_search_with_budget(q: &QuadraticForm, height: u32, budget: u64) -> IsotropyResult {
    if let Some(w) = zero_diagonal_witness(q) {
        return IsotropyResult::Witness { vector: w };
    }
    if let Ok(Some(c)) = find_certificate(q) {
        return IsotropyResult::Anisotropic { certificate: c };
    }
    witness_search(q, height, budget)
}

fn zero_diagonal_witness(q: &QuadraticForm) -> Option<Vec<Scalar>> {
    let n = q.n();
    let k = (0..n).find(|&k| q.gram.get(k, k).is_zero())?;
    let mut e = vec![Scalar::zero(); n];
    e[k] = Scalar::one();
    Some(e)
}

/// Exhaustive search only; never produces a certificate.
pub fn witness_search(q: &QuadraticForm, height: u32, budget: u64) -> IsotropyResult {
    let gauss = q.field == Field::Gaussian;
    let coeffs = match q.integral_coefficients() {
        Ok(c) => c,
        Err(_) => return IsotropyResult::Unknown { height: 0 },
    };
    match search::search(&coeffs, gauss, height, budget) {
        search::SearchOutcome::Found(w) => {
            let g = gint::gcd_all(&w).unwrap_or(gint::GInt::ONE);
            let v: Vec<Scalar> = w.iter().map(|z| z.div_exact(g).ok().flatten().unwrap_or(*z).to_scalar()).collect();
            debug_assert!(q.eval(&v).map(|x| x.is_zero()).unwrap_or(false));
            IsotropyResult::Witness { vector: v }
        }
        search::SearchOutcome::Exhausted { covered } => IsotropyResult::Unknown { height: covered },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DefiniteVerdict {
    DegreeTwoConfirmed,
    HypothesisFails {
        reason: String,
    },
    /// Both hypotheses hold but the degree exceeds two.
    CounterexampleCandidate {
        degree: u32,
    },
}

/// Checks `det ℋf ∈ K*` and anisotropy of the quadratic part of `f(x + λ)`,
/// then compares the degree with two.
pub fn definite_harness(f: &Poly, lambda: &[Scalar], height: u32) -> Result<DefiniteVerdict> {
    let n = f.nvars();
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let det = poly_determinant(&hessian(f))?;
    if !det.is_nonzero_constant() {
        return Ok(DefiniteVerdict::HypothesisFails {
            reason: format!("Hessian determinant {det} is not a nonzero constant"),
        });
    }
    let shifted = f.translate(lambda)?;
    let q = QuadraticForm::from_poly(&shifted)?;
    match isotropy_search(&q, height) {
        IsotropyResult::Witness { vector } => {
            let v: Vec<String> = vector.iter().map(ToString::to_string).collect();
            Ok(DefiniteVerdict::HypothesisFails {
                reason: format!("quadratic part is isotropic, witness ({})", v.join(", ")),
            })
        }
        IsotropyResult::Unknown { height } => Ok(DefiniteVerdict::HypothesisFails {
            reason: format!("anisotropy of the quadratic part undecided up to height {height}"),
        }),
        IsotropyResult::Anisotropic { .. } => {
            let d = f.degree().unwrap_or(0);
            Ok(if d == 2 {
                DefiniteVerdict::DegreeTwoConfirmed
            } else {
                DefiniteVerdict::CounterexampleCandidate { degree: d }
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};

    fn form(s: &str, n: usize, field: Field) -> QuadraticForm {
        let r = Ring::standard(n, field);
        QuadraticForm::from_poly(&parse_poly(s, &r).unwrap()).unwrap()
    }

    #[test]
    fn hessian_at_examples() {
        let r = Ring::standard(2, Field::Rational);
        let f = parse_poly("x1*x2 + x1^3", &r).unwrap();
        let z = Scalar::zero();
        assert_eq!(hessian_at(&f, &[z.clone(), z.clone()]).unwrap(), ScalarMatrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(hessian_at(&f, &[Scalar::one(), z.clone()]).unwrap(), ScalarMatrix::from_ints(&[&[6, 1], &[1, 0]]));
        assert!(hessian_at(&f, &[z]).is_err());
    }

    #[test]
    fn witnesses() {
        let q = form("x1^2 - x2^2", 2, Field::Rational);
        match isotropy_search(&q, 1) {
            IsotropyResult::Witness { vector } => assert!(q.eval(&vector).unwrap().is_zero()),
            other => panic!("{other:?}"),
        }
        let q = form("x1^2 + x2^2", 2, Field::Gaussian);
        assert!(matches!(isotropy_search(&q, 1), IsotropyResult::Witness { .. }));
        let q = form("x1*x2 + x3^2", 3, Field::Rational);
        assert!(matches!(isotropy_search(&q, 1), IsotropyResult::Witness { .. }));
        let q = form("x1^2 + x2^2 - 25*x3^2 + x1*x3", 3, Field::Rational);
        match isotropy_search(&q, 10) {
            IsotropyResult::Witness { vector } => assert!(q.eval(&vector).unwrap().is_zero()),
            other => panic!("{other:?}"),
        }
    }

    fn certified(q: &QuadraticForm) -> Certificate {
        match isotropy_search(q, 5) {
            IsotropyResult::Anisotropic { certificate } => {
                assert!(check_certificate(q, &certificate).unwrap());
                certificate
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificates() {
        let c = certified(&form("x1^2 + x2^2 + x3^2", 3, Field::Rational));
        assert_eq!(c.steps[0].modulus, Scalar::from_int(4));
        certified(&form("x1^2 + x2^2", 2, Field::Rational));
        certified(&form("x1^2 + x2^2 - 3*x3^2", 3, Field::Rational));
        certified(&form("x1^2 + 3*x2^2 + 5*x3^2 + 10*x4^2", 4, Field::Gaussian));
        certified(&form("x1^2 + 3*x2^2 + 5*x3^2", 3, Field::Gaussian));
    }

    #[test]
    fn corrupted_certificate_fails() {
        let q = form("x1^2 + x2^2 + x3^2", 3, Field::Rational);
        let mut c = certified(&q);
        c.steps[0].modulus = Scalar::from_int(6);
        assert!(!check_certificate(&q, &c).unwrap());
        let mut c = certified(&q);
        c.steps[0].divisor = Scalar::from_int(5);
        assert!(matches!(check_certificate(&q, &c), Err(Error::MalformedCertificate(_))));
        let mut c = certified(&q);
        c.steps.clear();
        assert!(matches!(check_certificate(&q, &c), Err(Error::MalformedCertificate(_))));
    }

    #[test]
    fn harness_examples() {
        let rq = Ring::standard(2, Field::Rational);
        let zero = vec![Scalar::zero(); 2];
        let f = parse_poly("1/2*(x1^2 + x2^2)", &rq).unwrap();
        assert_eq!(definite_harness(&f, &zero, 10).unwrap(), DefiniteVerdict::DegreeTwoConfirmed);
        let f = parse_poly("x1*x2 + x2^3", &rq).unwrap();
        assert!(matches!(definite_harness(&f, &zero, 10).unwrap(), DefiniteVerdict::HypothesisFails { .. }));
        let rg = Ring::standard(3, Field::Gaussian);
        let f = parse_poly("x1^2 + 3*x2^2 + 5*x3^2", &rg).unwrap();
        assert_eq!(
            definite_harness(&f, &[Scalar::zero(), Scalar::zero(), Scalar::zero()], 10).unwrap(),
            DefiniteVerdict::DegreeTwoConfirmed
        );
        let r4 = Ring::standard(4, Field::Rational);
        let f = parse_poly("x1^2", &r4).unwrap();
        assert_eq!(definite_harness(&f, &vec![Scalar::zero(); 4], 10), Err(Error::UnsupportedDimension(4)));
    }
}
