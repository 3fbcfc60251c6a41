//! Named reference instances and their end-to-end checks.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::calculus::{cofactor_determinant, hessian, poly_determinant};
use crate::error::{Error, Result};
use crate::poly::{parse_poly, Monomial, Poly, Ring};
use crate::quadform::{
    check_certificate, isotropy_search, witness_search, IsotropyResult, QuadraticForm, SEARCH_BUDGET,
};
use crate::scalar::{Field, Scalar};
use crate::triangulate::{find_adapted_weight_with, SearchOptions, DEFAULT_BUDGET};

pub const FIXTURE_NAMES: [&str; 3] = ["gn-counterexample", "dillen4", "qi-form"];

/// Height of the brute-force witness search run on the Gaussian form.
pub const QI_SEARCH_HEIGHT: u32 = 20;

/// `x1 x2 + t x1 x2² + (x2 + x1 x3)³ + x1⁴(1 + x4) + x5⁷ + ⋯ + xn^{n+2}`
/// over `Q` with parameter `t`, for `n >= 4`.
pub fn weightcounter(n: usize) -> Result<Poly> {
    if n < 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    let ring = Ring::with_params(n, &["t"], Field::Rational);
    let mut text = String::from("x1*x2 + t*x1*x2^2 + (x2 + x1*x3)^3 + x1^4*(1 + x4)");
    for k in 5..=n {
        text.push_str(&format!(" + x{k}^{}", k + 2));
    }
    parse_poly(&text, &ring)
}

/// `-(n+1)!(n+2)!/450 · x1⁹ (x2 + x1 x3) x5⁵ ⋯ xn^n` in the ring of `f`.
pub fn weightcounter_g(ring: &Arc<Ring>) -> Poly {
    let n = ring.nvars();
    let fact = |m: usize| (1..=m).fold(BigInt::one(), |a, k| a * BigInt::from(k));
    let coeff = -BigRational::new(fact(n + 1) * fact(n + 2), BigInt::from(450));
    let mut e = vec![0u32; ring.width()];
    e[0] = 9;
    for (k, slot) in e.iter_mut().enumerate().take(n).skip(4) {
        *slot = (k + 1) as u32;
    }
    let head = Poly::term(ring, Scalar::rational(coeff), Monomial::from_exponents(e));
    let tail = &Poly::var(ring, 1) + &(&Poly::var(ring, 0) * &Poly::var(ring, 2));
    &head * &tail
}

/// `(x1 + x2²) x3 + (x2 + (x1 + x2²)²) x4` over `Q`.
pub fn dillen4() -> Poly {
    let ring = Ring::standard(4, Field::Rational);
    parse_poly("(x1 + x2^2)*x3 + (x2 + (x1 + x2^2)^2)*x4", &ring).expect("fixed input")
}

/// `x1² + 3x2² + 5x3² + 10x4²` over `Q(i)`.
pub fn qi_form() -> QuadraticForm {
    let ring = Ring::standard(4, Field::Gaussian);
    let f = parse_poly("x1^2 + 3*x2^2 + 5*x3^2 + 10*x4^2", &ring).expect("fixed input");
    QuadraticForm::from_poly(&f).expect("quadratic")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub fixture: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl FixtureReport {
    fn new(fixture: &str, checks: Vec<Check>) -> Self {
        FixtureReport { fixture: fixture.to_string(), pass: checks.iter().all(|c| c.pass), checks }
    }
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureOptions {
    /// Dimensions for `gn-counterexample`; empty means `4` and `5`.
    pub dims: Vec<usize>,
    pub budget: usize,
    pub height: u32,
}

impl Default for FixtureOptions {
    fn default() -> Self {
        FixtureOptions { dims: Vec::new(), budget: DEFAULT_BUDGET, height: QI_SEARCH_HEIGHT }
    }
}

pub fn verify_fixture(name: &str, opts: &FixtureOptions) -> Result<FixtureReport> {
    match name {
        "gn-counterexample" => {
            let dims = if opts.dims.is_empty() { vec![4, 5] } else { opts.dims.clone() };
            let mut checks = Vec::new();
            for n in dims {
                checks.extend(weightcounter_checks(n)?);
            }
            Ok(FixtureReport::new(name, checks))
        }
        "dillen4" => Ok(FixtureReport::new(name, dillen4_checks(opts.budget)?)),
        "qi-form" => Ok(FixtureReport::new(name, qi_checks(opts.height)?)),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

fn weightcounter_checks(n: usize) -> Result<Vec<Check>> {
    let f = weightcounter(n)?;
    let ring = f.ring().clone();
    let g = weightcounter_g(&ring);
    let det = poly_determinant(&hessian(&f))?;
    let expected = &Poly::param(&ring, 0) * &g;
    let at = |v: i64| poly_determinant(&hessian(&f.specialize_param(0, &Scalar::from_int(v))));
    let d0 = at(0)?;
    let d1 = at(1)?;
    Ok(vec![
        check(format!("n={n}: det = t*g"), det == expected, format!("det = {det}")),
        check(format!("n={n}: det at t=0 vanishes"), d0.is_zero(), format!("{d0}")),
        check(format!("n={n}: det at t=1 equals g"), d1 == g, format!("g = {g}")),
    ])
}

fn dillen4_checks(budget: usize) -> Result<Vec<Check>> {
    let f = dillen4();
    let h = hessian(&f);
    let bareiss = poly_determinant(&h)?;
    let cofactor = cofactor_determinant(&h)?;
    let cubic = f.homogeneous_part(3);
    let expected_cubic = parse_poly("x2^2*x3 + x1^2*x4", f.ring())?;
    let search = find_adapted_weight_with(&f, SearchOptions { budget, generic: true });
    let exhausted = matches!(search, Err(Error::BudgetExceeded { .. }));
    let outcome = match &search {
        Ok(a) => format!("unexpected success with weights {}", a.weights),
        Err(e) => e.to_string(),
    };
    Ok(vec![
        check(
            "det is a nonzero constant",
            bareiss.is_nonzero_constant() && bareiss == cofactor,
            format!("Bareiss {bareiss}, cofactor {cofactor}"),
        ),
        check("cubic part", cubic == expected_cubic, format!("{cubic}")),
        check("weight search exhausts its budget", exhausted, outcome),
    ])
}

fn qi_checks(height: u32) -> Result<Vec<Check>> {
    let q = qi_form();
    let cert = match isotropy_search(&q, height) {
        IsotropyResult::Anisotropic { certificate } => Some(certificate),
        _ => None,
    };
    let replayed = match &cert {
        Some(c) => check_certificate(&q, c)?,
        None => false,
    };
    let moduli = cert
        .as_ref()
        .map(|c| c.steps.iter().map(|s| s.modulus.to_string()).collect::<Vec<_>>().join(", "))
        .unwrap_or_default();
    let brute = witness_search(&q, height, SEARCH_BUDGET);
    let none_found = matches!(brute, IsotropyResult::Unknown { height: h } if h >= height);
    Ok(vec![
        check("certificate found", cert.is_some(), format!("moduli [{moduli}]")),
        check("certificate replays", replayed, ""),
        check(format!("no witness of height <= {height}"), none_found, format!("{brute:?}")),
    ])
}
