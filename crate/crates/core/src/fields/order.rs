//! Exact sign determination in real quadratic towers.
//!
//! A rational tower whose radicands are all positive (under the embedding
//! that sends every generator to the positive real root) is an ordered
//! subfield of the reals; the sign of `a + b*sqrt(d)` follows from the signs
//! of `a`, `b` and of `a^2 - d b^2`.

use std::cmp::Ordering;

use super::{rational_sign, Elem, Field, FieldKind, Value};
use crate::error::{Error, Result};

impl Field {
    /// Checks that every radicand is positive, so that [`Elem::sign`] is
    /// defined.
    pub fn ensure_real(&self) -> Result<()> {
        match self.kind() {
            FieldKind::Rationals => Ok(()),
            FieldKind::Prime { .. } => Err(Error::NotReal {
                field: self.to_string(),
                reason: "finite fields are not ordered".into(),
            }),
            FieldKind::Quad { base, radicand, .. } => {
                base.ensure_real()?;
                if sign_v(base, radicand) > 0 {
                    Ok(())
                } else {
                    Err(Error::NotReal {
                        field: self.to_string(),
                        reason: format!("radicand {} is negative", base.wrap(radicand.clone())),
                    })
                }
            }
        }
    }
}

fn sign_v(k: &Field, v: &Value) -> i32 {
    match v {
        Value::Rat(q) => rational_sign(q),
        Value::Res(_) => unreachable!("sign of a residue"),
        Value::Pair(a, b) => {
            let FieldKind::Quad { base, radicand, .. } = k.kind() else {
                unreachable!("pair outside a quadratic level")
            };
            let sa = sign_v(base, a);
            let sb = sign_v(base, b);
            if sb == 0 {
                return sa;
            }
            if sa == 0 || sa == sb {
                return sb;
            }
            // Opposite signs: whichever of |a| and |b| sqrt(d) is larger wins.
            let diff = base.sub_v(&base.mul_v(a, a), &base.mul_v(radicand, &base.mul_v(b, b)));
            if sign_v(base, &diff) > 0 {
                sa
            } else {
                sb
            }
        }
    }
}

impl Elem {
    /// Sign under the positive-root real embedding.
    pub fn sign(&self) -> Result<Ordering> {
        self.field().ensure_real()?;
        Ok(sign_v(self.field(), self.value()).cmp(&0))
    }

    /// Exact comparison in a real tower.
    pub fn cmp_real(&self, other: &Elem) -> Result<Ordering> {
        self.checked_sub(other)?.sign()
    }
}
