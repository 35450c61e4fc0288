//! Square-root decision procedure for every supported field.
//!
//! Canonical root: over GF(p) the smaller residue; over rational towers the
//! root whose leading coefficient is positive, where the leading coefficient
//! is read from the top level down (the `sqrt(d)` part of the top level if
//! nonzero, otherwise the rational part, recursively).

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{prime, rational_sign, Elem, Field, FieldKind, Value};

/// Returns a canonical `r` with `r^2 = x`, or `None` if `x` is not a square
/// in its field.
pub fn sqrt_in_field(x: &Elem) -> Option<Elem> {
    let k = x.field();
    let root = sqrt_v(k, x.value())?;
    let root = if leading_sign(k, &root) < 0 {
        k.neg_v(&root)
    } else {
        root
    };
    Some(k.wrap(root))
}

pub(crate) fn leading_sign(k: &Field, v: &Value) -> i32 {
    match v {
        Value::Rat(q) => rational_sign(q),
        Value::Res(_) => 1,
        Value::Pair(a, b) => {
            let base = k.base().expect("quadratic level");
            let s = leading_sign(base, b);
            if s != 0 {
                s
            } else {
                leading_sign(base, a)
            }
        }
    }
}

fn sqrt_v(k: &Field, x: &Value) -> Option<Value> {
    match (k.kind(), x) {
        (FieldKind::Rationals, Value::Rat(q)) => sqrt_rational(q).map(Value::Rat),
        (FieldKind::Prime { p }, Value::Res(r)) => prime::sqrt_mod(*r, *p).map(Value::Res),
        (FieldKind::Quad { base, radicand, .. }, Value::Pair(a, b)) => {
            if base.is_zero_v(b) {
                // a lives in the base: either sqrt(a) is there, or a/d is a
                // square there and sqrt(a) = s*sqrt(d).
                if let Some(r) = sqrt_v(base, a) {
                    return Some(Value::Pair(Box::new(r), Box::new(base.zero_v())));
                }
                let dinv = base.inv_v(radicand)?;
                let s = sqrt_v(base, &base.mul_v(a, &dinv))?;
                return Some(Value::Pair(Box::new(base.zero_v()), Box::new(s)));
            }
            // (u + v r)^2 = (u^2 + d v^2) + 2uv r, so the norm a^2 - d b^2
            // must be the square of u^2 - d v^2, and u^2 = (a +- n)/2.
            let norm = base.sub_v(&base.mul_v(a, a), &base.mul_v(radicand, &base.mul_v(b, b)));
            let n = sqrt_v(base, &norm)?;
            let two_inv = base.inv_v(&base.int_v(&2.into()))?;
            for n in [n.clone(), base.neg_v(&n)] {
                let half = base.mul_v(&base.add_v(a, &n), &two_inv);
                let Some(u) = sqrt_v(base, &half) else {
                    continue;
                };
                if base.is_zero_v(&u) {
                    continue;
                }
                let two_u = base.add_v(&u, &u);
                let v = base.mul_v(b, &base.inv_v(&two_u)?);
                let candidate = Value::Pair(Box::new(u), Box::new(v));
                if k.mul_v(&candidate, &candidate) == *x {
                    return Some(candidate);
                }
            }
            None
        }
        _ => unreachable!("value shape does not match its field"),
    }
}

fn sqrt_rational(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(q.clone());
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
