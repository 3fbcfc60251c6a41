//! Descent certificates of anisotropy.
//!
//! The form is first brought to diagonal shape `Σ a_k y_k²` with integral
//! `a_k` by a congruence `S`. Any nonzero solution can be scaled to be
//! primitive. Each step picks a modulus `m` and a prime divisor `δ` of `m`:
//! reducing the equation mod `m` kills the terms with `m | a_k`, and an
//! enumeration of residues shows that the remaining coordinates are all
//! divisible by `δ`. Substituting `y_k = δ y_k'` multiplies `a_k` by `δ²`;
//! the equation is then divided by a common factor `g`. Once every original
//! coordinate is known to be divisible by one non-unit, primitivity fails.

use serde::{Deserialize, Serialize};

use super::gint::{self, GInt, Residues};
use super::QuadraticForm;
use crate::error::{Error, Result};
use crate::linalg::{diagonalize_symmetric, ScalarMatrix};
use crate::scalar::{Field, Scalar};

/// Cap on the number of residue tuples enumerated in one step.
pub const RESIDUE_LIMIT: i128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub modulus: Scalar,
    /// Prime divisor of the modulus forced onto the coordinates in `indices`.
    pub divisor: Scalar,
    /// 0-based indices `k` with `modulus ∤ a_k`.
    pub indices: Vec<usize>,
    /// Classes of squares modulo `modulus`, as canonical representatives.
    pub squares: Vec<Scalar>,
    /// Common factor removed from the coefficients after the substitution.
    pub divide_by: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub field: Field,
    /// Congruence `S` with `Sᵗ G S` diagonal, `G` the Gram matrix.
    pub transform: ScalarMatrix,
    /// Integral diagonal coefficients, proportional to the diagonal of `Sᵗ G S`.
    pub coefficients: Vec<Scalar>,
    pub steps: Vec<DescentStep>,
    /// A non-unit dividing every original coordinate at the end.
    pub common_divisor: Scalar,
}

fn gaussian(field: Field) -> bool {
    field == Field::Gaussian
}

/// Moduli tried by the generator, each with its forced prime divisor.
pub fn candidate_moduli(field: Field) -> Vec<(GInt, GInt)> {
    let g = GInt::new;
    match field {
        Field::Rational => {
            let mut v = vec![
                (g(4, 0), g(2, 0)),
                (g(8, 0), g(2, 0)),
                (g(16, 0), g(2, 0)),
                (g(3, 0), g(3, 0)),
                (g(9, 0), g(3, 0)),
            ];
            v.extend([5, 7, 11, 13, 17, 19, 23].map(|p| (g(p, 0), g(p, 0))));
            v
        }
        Field::Gaussian => {
            let pi = g(1, 1);
            let mut v = vec![(pi, pi), (g(2, 0), pi), (g(-2, 2), pi), (g(4, 0), pi)];
            v.extend([g(2, 1), g(2, -1), g(3, 0), g(3, 2), g(3, -2), g(4, 1), g(4, -1)].map(|p| (p, p)));
            v
        }
    }
}

/// Diagonal of `Sᵗ G S` cleared to integral coefficients.
fn diagonal_coefficients(q: &QuadraticForm, s: &ScalarMatrix) -> Result<Option<Vec<Scalar>>> {
    let d = s.transpose().mul(q.gram())?.mul(s)?;
    if !d.is_diagonal() {
        return Ok(None);
    }
    Ok(Some((0..d.rows()).map(|k| d.get(k, k).clone()).collect()))
}

/// Canonical representatives of the square classes modulo `res`.
fn square_table(res: &Residues) -> Result<(Vec<GInt>, Vec<GInt>)> {
    let reps = res.representatives()?;
    let mut keyed: Vec<((i128, i128), GInt)> = Vec::new();
    for &r in &reps {
        keyed.push((res.key(r)?, r));
    }
    let rep_of =
        |key: (i128, i128)| keyed.iter().find(|(k, _)| *k == key).map(|(_, r)| *r).expect("complete residue system");
    let mut squares: Vec<GInt> = Vec::new();
    for &r in &reps {
        let s = rep_of(res.key(r.mul(r)?)?);
        if !squares.contains(&s) {
            squares.push(s);
        }
    }
    squares.sort();
    Ok((reps, squares))
}

/// True if `Σ_{k∈A} a_k r_k² ≡ 0 (mod m)` forces `δ | r_k` for all `k ∈ A`.
fn forces(a: &[GInt], indices: &[usize], res: &Residues, delta: &Residues, reps: &[GInt]) -> Result<bool> {
    let mut tables: Vec<Vec<((i128, i128), bool)>> = Vec::new();
    for &k in indices {
        let mut t = Vec::with_capacity(reps.len());
        for &r in reps {
            t.push((res.key(a[k].mul(r.mul(r)?)?)?, delta.divides(r)?));
        }
        tables.push(t);
    }
    let size = res.size();
    let mut idx = vec![0usize; tables.len()];
    loop {
        let mut acc = (0i128, 0i128);
        let mut all_div = true;
        for (t, &i) in tables.iter().zip(&idx) {
            let (key, div) = t[i];
            acc = ((acc.0 + key.0) % size, (acc.1 + key.1) % size);
            all_div &= div;
        }
        if acc == (0, 0) && !all_div {
            return Ok(false);
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(true);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < reps.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

struct State {
    a: Vec<GInt>,
    d: Vec<GInt>,
}

/// Applies one step; `Ok(None)` if the forcing claim is false.
fn apply(state: &State, modulus: GInt, divisor: GInt, gauss: bool) -> Result<Option<(State, DescentStep)>> {
    let res = Residues::new(modulus, gauss)?;
    let del = Residues::new(divisor, gauss)?;
    let mut indices = Vec::new();
    for (k, &ak) in state.a.iter().enumerate() {
        if !res.divides(ak)? {
            indices.push(k);
        }
    }
    if indices.is_empty() {
        return Ok(None);
    }
    let combos = (indices.len() as u32, res.size());
    if combos.1.checked_pow(combos.0).is_none_or(|c| c > RESIDUE_LIMIT) {
        return Ok(None);
    }
    let (reps, squares) = square_table(&res)?;
    if !forces(&state.a, &indices, &res, &del, &reps)? {
        return Ok(None);
    }
    let dd = divisor.mul(divisor)?;
    let mut a = state.a.clone();
    let mut d = state.d.clone();
    for &k in &indices {
        a[k] = a[k].mul(dd)?;
        d[k] = d[k].mul(divisor)?;
    }
    let g = gint::gcd_all(&a)?;
    let a = a.iter().map(|x| x.div_exact(g).map(|q| q.expect("gcd divides"))).collect::<Result<Vec<_>>>()?;
    let step = DescentStep {
        modulus: modulus.to_scalar(),
        divisor: divisor.to_scalar(),
        indices,
        squares: squares.iter().map(|s| s.to_scalar()).collect(),
        divide_by: g.to_scalar(),
    };
    Ok(Some((State { a, d }, step)))
}

const MAX_DEPTH: usize = 8;
const NODE_BUDGET: usize = 4000;

/// Searches for a descent certificate over the fixed candidate moduli.
pub fn find_certificate(q: &QuadraticForm) -> Result<Option<Certificate>> {
    let field = q.field();
    let gauss = gaussian(field);
    let s = diagonalize_symmetric(q.gram(), field, false)?;
    let Some(diag) = diagonal_coefficients(q, s.matrix())? else {
        return Ok(None);
    };
    if diag.iter().any(Scalar::is_zero) {
        return Ok(None);
    }
    let a = gint::integral_vector(&diag)?;
    let start = State { a: a.clone(), d: vec![GInt::ONE; a.len()] };
    let cands = candidate_moduli(field);
    let mut steps = Vec::new();
    let mut nodes = 0;
    let found = dfs(&start, &cands, gauss, &mut steps, &mut nodes);
    let common = match found {
        Ok(Some(c)) => c,
        Ok(None) | Err(Error::Overflow(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(Certificate {
        field,
        transform: s.matrix().clone(),
        coefficients: a.iter().map(|x| x.to_scalar()).collect(),
        steps,
        common_divisor: common.to_scalar(),
    }))
}

fn dfs(
    state: &State,
    cands: &[(GInt, GInt)],
    gauss: bool,
    steps: &mut Vec<DescentStep>,
    nodes: &mut usize,
) -> Result<Option<GInt>> {
    let g = gint::gcd_all(&state.d)?;
    if !g.is_unit()? {
        return Ok(Some(g));
    }
    if steps.len() == MAX_DEPTH || *nodes >= NODE_BUDGET {
        return Ok(None);
    }
    for &(m, delta) in cands {
        *nodes += 1;
        if let Some((next, step)) = apply(state, m, delta, gauss)? {
            steps.push(step);
            if let Some(c) = dfs(&next, cands, gauss, steps, nodes)? {
                return Ok(Some(c));
            }
            steps.pop();
        }
    }
    Ok(None)
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

fn to_gint(s: &Scalar, gauss: bool, what: &str) -> Result<GInt> {
    let z = GInt::from_scalar(s).map_err(|_| malformed(format!("{what} `{s}` is not integral")))?;
    if !gauss && z.im != 0 {
        return Err(malformed(format!("{what} `{s}` is not a rational integer")));
    }
    Ok(z)
}

/// Replays a certificate. Structural defects raise `MalformedCertificate`;
/// a false mathematical claim returns `Ok(false)`.
pub fn check_certificate(q: &QuadraticForm, cert: &Certificate) -> Result<bool> {
    let n = q.n();
    if cert.field != q.field() {
        return Err(malformed("field differs from the form's field"));
    }
    let gauss = gaussian(cert.field);
    if cert.transform.rows() != n || cert.transform.cols() != n || cert.coefficients.len() != n {
        return Err(malformed("dimensions do not match the form"));
    }
    if cert.steps.is_empty() {
        return Err(malformed("no descent steps"));
    }
    let a0 = cert.coefficients.iter().map(|s| to_gint(s, gauss, "coefficient")).collect::<Result<Vec<_>>>()?;
    if cert.transform.det()?.is_zero() {
        return Ok(false);
    }
    let Some(diag) = diagonal_coefficients(q, &cert.transform)? else {
        return Ok(false);
    };
    // a must be a nonzero multiple of diag
    if a0.iter().any(|x| x.is_zero()) || diag.iter().any(Scalar::is_zero) {
        return Ok(false);
    }
    let ratio = &cert.coefficients[0] / &diag[0];
    if (0..n).any(|k| cert.coefficients[k] != &ratio * &diag[k]) {
        return Ok(false);
    }

    let mut state = State { a: a0, d: vec![GInt::ONE; n] };
    for (i, step) in cert.steps.iter().enumerate() {
        let m = to_gint(&step.modulus, gauss, "modulus")?;
        let delta = to_gint(&step.divisor, gauss, "divisor")?;
        let g = to_gint(&step.divide_by, gauss, "divide_by")?;
        if m.is_zero() || delta.is_zero() || g.is_zero() {
            return Err(malformed(format!("step {}: zero modulus, divisor or factor", i + 1)));
        }
        if m.div_exact(delta)?.is_none() || delta.is_unit()? {
            return Err(malformed(format!("step {}: divisor must be a non-unit dividing the modulus", i + 1)));
        }
        let res = Residues::new(m, gauss)?;
        let del = Residues::new(delta, gauss)?;
        let mut indices = Vec::new();
        for (k, &ak) in state.a.iter().enumerate() {
            if !res.divides(ak)? {
                indices.push(k);
            }
        }
        if indices != step.indices || indices.is_empty() {
            return Ok(false);
        }
        if res.size().checked_pow(indices.len() as u32).is_none_or(|c| c > RESIDUE_LIMIT) {
            return Err(malformed(format!("step {}: residue enumeration too large", i + 1)));
        }
        let (reps, squares) = square_table(&res)?;
        let claimed = step.squares.iter().map(|s| to_gint(s, gauss, "square")).collect::<Result<Vec<_>>>()?;
        if claimed != squares {
            return Ok(false);
        }
        if !forces(&state.a, &indices, &res, &del, &reps)? {
            return Ok(false);
        }
        let dd = delta.mul(delta)?;
        for &k in &indices {
            state.a[k] = state.a[k].mul(dd)?;
            state.d[k] = state.d[k].mul(delta)?;
        }
        let mut next = Vec::with_capacity(n);
        for &x in &state.a {
            match x.div_exact(g)? {
                Some(y) => next.push(y),
                None => return Ok(false),
            }
        }
        state.a = next;
    }
    let c = to_gint(&cert.common_divisor, gauss, "common divisor")?;
    if c.is_zero() || c.is_unit()? {
        return Ok(false);
    }
    for &dk in &state.d {
        if dk.div_exact(c)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
