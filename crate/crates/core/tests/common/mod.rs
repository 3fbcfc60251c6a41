//! Seeded generators and independent oracles shared by the property and
//! acceptance suites.

#![allow(dead_code)]

use std::sync::Arc;

use hesslab::calculus::PolyMatrix;
use hesslab::{parse_poly, Field, Monomial, Poly, Ring, Scalar, ScalarMatrix, Transform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ring(n: usize) -> Arc<Ring> {
    Ring::standard(n, Field::Rational)
}

pub fn p(s: &str, n: usize) -> Poly {
    parse_poly(s, &ring(n)).unwrap()
}

/// Small integer, or a half-integer one time in four.
pub fn small_scalar(r: &mut ChaCha8Rng, bound: i64) -> Scalar {
    let a = r.gen_range(-bound..=bound);
    if r.gen_bool(0.25) {
        Scalar::ratio(2 * a + 1, 2)
    } else {
        Scalar::from_int(a)
    }
}

pub fn nonzero_int(r: &mut ChaCha8Rng, bound: i64) -> Scalar {
    loop {
        let a = r.gen_range(-bound..=bound);
        if a != 0 {
            return Scalar::from_int(a);
        }
    }
}

pub fn gaussian_scalar(r: &mut ChaCha8Rng, bound: i64) -> Scalar {
    Scalar::gaussian(r.gen_range(-bound..=bound), r.gen_range(-bound..=bound))
}

/// Random polynomial with at most `terms` terms of total degree in `lo..=hi`.
pub fn random_poly(r: &mut ChaCha8Rng, ring: &Arc<Ring>, terms: usize, lo: u32, hi: u32) -> Poly {
    let n = ring.nvars();
    let mut f = Poly::zero(ring);
    for _ in 0..terms {
        let d = r.gen_range(lo..=hi);
        let mut e = vec![0u32; n];
        for _ in 0..d {
            e[r.gen_range(0..n)] += 1;
        }
        let c =
            if ring.field() == Field::Gaussian && r.gen_bool(0.3) { gaussian_scalar(r, 3) } else { small_scalar(r, 4) };
        f.add_term(Monomial::from_exponents(e), c);
    }
    f
}

/// Univariate `Σ a_k x1^k` over `lo..=hi` with nonzero top coefficient.
pub fn univariate(r: &mut ChaCha8Rng, ring: &Arc<Ring>, var: usize, lo: u32, hi: u32) -> Poly {
    let x = Poly::var(ring, var);
    let mut f = Poly::zero(ring);
    for k in lo..=hi {
        let c = if k == hi { nonzero_int(r, 3) } else { small_scalar(r, 3) };
        f = &f + &x.pow(k).scale(&c);
    }
    f
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> ScalarMatrix {
    let data = (0..rows).map(|_| (0..cols).map(|_| Scalar::from_int(r.gen_range(-bound..=bound))).collect()).collect();
    ScalarMatrix::from_rows(data).unwrap()
}

pub fn random_invertible(r: &mut ChaCha8Rng, n: usize) -> Transform {
    loop {
        let m = random_matrix(r, n, n, 2);
        if let Ok(t) = Transform::new(m) {
            return t;
        }
    }
}

/// Seeds with Hessian zero below the anti-diagonal and constant nonzero
/// determinant, before conjugation:
/// `c x1 x2 + p(x1)` for two variables and
/// `c x1 x3 + e x3 + b x2² + x2 q(x1) + p(x1)` for three.
pub fn antitri_seed(r: &mut ChaCha8Rng, n: usize, d: u32) -> Poly {
    let ring = ring(n);
    let x = |k| Poly::var(&ring, k);
    let c = nonzero_int(r, 3);
    let lin = Poly::linear_form(&ring, &(0..n).map(|_| small_scalar(r, 3)).collect::<Vec<_>>());
    match n {
        2 => &(&(&x(0) * &x(1)).scale(&c) + &univariate(r, &ring, 0, 2, d)) + &lin,
        3 => {
            let b = nonzero_int(r, 3);
            let e = small_scalar(r, 3);
            let q = univariate(r, &ring, 0, 1, d - 1);
            let mut f = (&x(0) * &x(2)).scale(&c);
            f = &f + &x(2).scale(&e);
            f = &f + &(&x(1) * &x(1)).scale(&b);
            f = &f + &(&x(1) * &q);
            f = &f + &univariate(r, &ring, 0, 2, d);
            &f + &lin
        }
        _ => panic!("seeds exist for two and three variables"),
    }
}

/// One instance of the pipeline corpus: a seed conjugated by a random
/// invertible matrix.
#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub n: usize,
    pub d: u32,
    pub f: Poly,
}

pub fn pipeline_corpus(count: usize) -> Vec<Instance> {
    (0..count as u64)
        .map(|seed| {
            let mut r = rng(0x5eed_0000 + seed);
            let n = if seed % 2 == 0 { 2 } else { 3 };
            let d = if (seed / 2) % 2 == 0 { 3 } else { 4 };
            let a = random_invertible(&mut r, n);
            let f = antitri_seed(&mut r, n, d).substitute_linear(a.matrix()).unwrap();
            Instance { seed, n, d, f }
        })
        .collect()
}

/// Zero below the anti-diagonal, checked entry by entry.
pub fn zero_below_antidiagonal(h: &PolyMatrix) -> bool {
    let n = h.rows();
    (0..n).all(|i| (0..n).all(|j| i + j < n || h.get(i, j).is_zero()))
}

/// Random nonzero linear form with small integer coefficients.
pub fn random_form(r: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..n).map(|_| Scalar::from_int(r.gen_range(-2..=2))).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// `Σ a_k l^k` for `k` in `2..=d`.
pub fn in_one_form(r: &mut ChaCha8Rng, n: usize) -> Poly {
    let ring = ring(n);
    let l = Poly::linear_form(&ring, &random_form(r, n));
    let d = r.gen_range(2..=4);
    let mut h = Poly::zero(&ring);
    for k in 2..=d {
        let c = if k == d { nonzero_int(r, 3) } else { small_scalar(r, 3) };
        h = &h + &l.pow(k).scale(&c);
    }
    h
}

/// `g(l1, l2)` in three variables with `g` a binary polynomial of nonzero
/// Hessian determinant and `l1, l2` independent.
pub fn in_two_forms(r: &mut ChaCha8Rng) -> Poly {
    let ring = ring(3);
    let bin = Ring::standard(2, Field::Rational);
    loop {
        let (a, b) = (random_form(r, 3), random_form(r, 3));
        if ScalarMatrix::from_rows(vec![a.clone(), b.clone()]).unwrap().rank() < 2 {
            continue;
        }
        let g = random_poly(r, &bin, 4, 2, 4);
        if g.is_zero() || hesslab::calculus::poly_determinant(&hesslab::calculus::hessian(&g)).unwrap().is_zero() {
            continue;
        }
        let images = [Poly::linear_form(&ring, &a), Poly::linear_form(&ring, &b)];
        return compose_binary(&g, &images, &ring);
    }
}

fn compose_binary(g: &Poly, images: &[Poly; 2], ring: &Arc<Ring>) -> Poly {
    let mut out = Poly::zero(ring);
    for (m, c) in g.terms() {
        let e = m.exponents();
        out = &out + &(&images[0].pow(e[0]) * &images[1].pow(e[1])).scale(c);
    }
    out
}

/// `g1(l1) x1 + g2(l1) x2 + g3(l1) x3` with `g_k(0) = 0` and an empty
/// directional kernel.
pub fn rank1_family(r: &mut ChaCha8Rng) -> Poly {
    let ring = ring(3);
    loop {
        let l = Poly::linear_form(&ring, &random_form(r, 3));
        let d = r.gen_range(1..=3);
        let mut h = Poly::zero(&ring);
        for k in 0..3 {
            let mut g = Poly::zero(&ring);
            for e in 1..=d {
                g = &g + &l.pow(e).scale(&small_scalar(r, 3));
            }
            h = &h + &(&g * &Poly::var(&ring, k));
        }
        if !h.is_zero() && hesslab::triangulate::directional_kernel(&h).is_empty() {
            return h;
        }
    }
}
