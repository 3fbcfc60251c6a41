use super::{Monomial, Poly, Ring};
use crate::scalar::Scalar;
use num_traits::Zero;

fn fmt_monomial(m: &Monomial, ring: &Ring) -> String {
    let mut parts = Vec::new();
    for (k, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.slot_name(k).to_string()),
            _ => parts.push(format!("{}^{}", ring.slot_name(k), e)),
        }
    }
    parts.join("*")
}

/// Text of `c * m` where `c` is known not to be negative-like.
fn fmt_term(c: &Scalar, m: &Monomial, ring: &Ring) -> String {
    if m.is_one() {
        return c.to_string();
    }
    let mono = fmt_monomial(m, ring);
    if c.is_one() {
        return mono;
    }
    let ctxt = c.to_string();
    if c.is_rational() || c.re().is_zero() {
        format!("{ctxt}*{mono}")
    } else {
        format!("({ctxt})*{mono}")
    }
}

/// Canonical text: terms in descending graded-lex order, explicit `*`.
pub(super) fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let ring = p.ring();
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative_like();
        let body = if neg { fmt_term(&-c, m, ring) } else { fmt_term(c, m, ring) };
        match (idx, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}
