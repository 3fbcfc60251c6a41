//! Exhaustive search for integral isotropic vectors.
//!
//! Coordinates range over Z or Z[i] with height (max of absolute values of
//! the parts) bounded. Vectors are enumerated shell by shell in the first
//! `n - 1` coordinates; the last coordinate is solved for exactly.
//! Diagonal forms in four variables use a meet-in-the-middle table instead.

use std::collections::HashMap;

use super::gint::{self, GInt};
use crate::error::Result;

/// Upper-triangular integral coefficients: the form is `Σ_{i<=j} c[i][j] x_i x_j`.
pub(crate) type Coeffs = Vec<Vec<GInt>>;

#[derive(Debug)]
pub(crate) enum SearchOutcome {
    Found(Vec<GInt>),
    /// No witness with all coordinates of height at most `covered`.
    Exhausted {
        covered: u32,
    },
}

/// Largest table built by the meet-in-the-middle search.
const MITM_LIMIT: usize = 4_000_000;

pub(crate) fn search(c: &Coeffs, gaussian: bool, height: u32, budget: u64) -> SearchOutcome {
    let n = c.len();
    if let Some(k) = (0..n).find(|&k| c[k][k].is_zero()) {
        let mut e = vec![GInt::ZERO; n];
        e[k] = GInt::ONE;
        return SearchOutcome::Found(e);
    }
    if n <= 1 {
        return SearchOutcome::Exhausted { covered: height };
    }
    let diagonal = (0..n).all(|i| ((i + 1)..n).all(|j| c[i][j].is_zero()));
    if diagonal && n == 4 {
        return mitm4(c, gaussian, height);
    }
    shells(c, gaussian, height, budget)
}

fn scalars_of_height(h: i128, gaussian: bool) -> Vec<GInt> {
    if !gaussian {
        return if h == 0 { vec![GInt::ZERO] } else { vec![GInt::int(h), GInt::int(-h)] };
    }
    let mut out = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            if a.abs().max(b.abs()) == h {
                out.push(GInt::new(a, b));
            }
        }
    }
    out
}

fn is_normalized(z: GInt, gaussian: bool) -> bool {
    if gaussian {
        z.re > 0 && z.im >= 0
    } else {
        z.re > 0
    }
}

fn shells(c: &Coeffs, gaussian: bool, height: u32, budget: u64) -> SearchOutcome {
    let n = c.len();
    let d = n - 1;
    let mut spent = 0u64;
    // by_height[h] lists the scalars of height exactly h
    let mut by_height: Vec<Vec<GInt>> = vec![vec![GInt::ZERO]];
    for h in 1..=height {
        by_height.push(scalars_of_height(h as i128, gaussian));
        let below: Vec<GInt> = by_height[..h as usize].iter().flatten().copied().collect();
        let upto: Vec<GInt> = by_height.iter().flatten().copied().collect();
        let exact = &by_height[h as usize];
        for j in 0..d {
            let lists: Vec<&[GInt]> = (0..d)
                .map(|k| match k.cmp(&j) {
                    std::cmp::Ordering::Less => below.as_slice(),
                    std::cmp::Ordering::Equal => exact.as_slice(),
                    std::cmp::Ordering::Greater => upto.as_slice(),
                })
                .collect();
            let mut idx = vec![0usize; d];
            loop {
                let x: Vec<GInt> = idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect();
                if x.iter().find(|z| !z.is_zero()).is_some_and(|z| is_normalized(*z, gaussian)) {
                    spent += 1;
                    if spent > budget {
                        return SearchOutcome::Exhausted { covered: h - 1 };
                    }
                    match solve_last(c, &x, gaussian) {
                        Ok(Some(w)) => return SearchOutcome::Found(w),
                        Ok(None) => {}
                        Err(_) => return SearchOutcome::Exhausted { covered: h - 1 },
                    }
                }
                if !advance(&mut idx, &lists) {
                    break;
                }
            }
        }
    }
    SearchOutcome::Exhausted { covered: height }
}

/// Steps a mixed-radix counter; false once it wraps around.
fn advance(idx: &mut [usize], lists: &[&[GInt]]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < lists[k].len() {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// Completes `x` by a last coordinate making the form vanish, scaled integrally.
fn solve_last(c: &Coeffs, x: &[GInt], gaussian: bool) -> Result<Option<Vec<GInt>>> {
    let l = x.len();
    let a = c[l][l];
    let mut b = GInt::ZERO;
    for (j, xj) in x.iter().enumerate() {
        b = b.add(c[j][l].mul(*xj)?)?;
    }
    let mut cc = GInt::ZERO;
    for i in 0..l {
        for j in i..l {
            if !c[i][j].is_zero() {
                cc = cc.add(c[i][j].mul(x[i])?.mul(x[j])?)?;
            }
        }
    }
    let disc = b.mul(b)?.sub(GInt::int(4).mul(a)?.mul(cc)?)?;
    let Some(s) = gint::sqrt(disc, gaussian)? else {
        return Ok(None);
    };
    let two_a = GInt::int(2).mul(a)?;
    let mut w = x.iter().map(|z| z.mul(two_a)).collect::<Result<Vec<_>>>()?;
    w.push(s.sub(b)?);
    Ok(Some(w))
}

fn distinct_squares(h: i128, gaussian: bool) -> Result<Vec<(GInt, GInt)>> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for hh in 0..=h {
        for z in scalars_of_height(hh, gaussian) {
            let s = z.mul(z)?;
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(s) {
                e.insert(());
                out.push((s, z));
            }
        }
    }
    Ok(out)
}

fn mitm4(c: &Coeffs, gaussian: bool, height: u32) -> SearchOutcome {
    let mut h = height as i128;
    let squares = loop {
        match distinct_squares(h, gaussian) {
            Ok(sq) if sq.len() * sq.len() <= MITM_LIMIT || h == 0 => break sq,
            Ok(_) => h -= 1,
            Err(_) => return SearchOutcome::Exhausted { covered: 0 },
        }
    };
    let covered = h as u32;
    let a: Vec<GInt> = (0..4).map(|k| c[k][k]).collect();
    let run = || -> Result<Option<Vec<GInt>>> {
        let mut left: HashMap<GInt, (GInt, GInt)> = HashMap::with_capacity(squares.len() * squares.len());
        let mut left_zero: Option<(GInt, GInt)> = None;
        for &(s1, z1) in &squares {
            for &(s2, z2) in &squares {
                let v = a[0].mul(s1)?.add(a[1].mul(s2)?)?;
                if v.is_zero() && !(z1.is_zero() && z2.is_zero()) && left_zero.is_none() {
                    left_zero = Some((z1, z2));
                }
                left.entry(v).or_insert((z1, z2));
            }
        }
        for &(s3, z3) in &squares {
            for &(s4, z4) in &squares {
                let v = a[2].mul(s3)?.add(a[3].mul(s4)?)?;
                if z3.is_zero() && z4.is_zero() {
                    if let Some((z1, z2)) = left_zero {
                        return Ok(Some(vec![z1, z2, z3, z4]));
                    }
                } else if let Some(&(z1, z2)) = left.get(&v.neg()) {
                    return Ok(Some(vec![z1, z2, z3, z4]));
                }
            }
        }
        Ok(None)
    };
    match run() {
        Ok(Some(w)) => SearchOutcome::Found(w),
        Ok(None) => SearchOutcome::Exhausted { covered },
        Err(_) => SearchOutcome::Exhausted { covered: 0 },
    }
}
