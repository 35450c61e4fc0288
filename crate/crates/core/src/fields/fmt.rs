//! Text form of fields and elements.
//!
//! Elements print as a sum of rational multiples of radical monomials
//! (`1/2 + 3/2*r1 - 2*i`); the level whose radicand is -1 prints as `i`.
//! Fields print as `Q`, `GF(13)`, `Q[sqrt 2][i]`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Elem, Field, FieldKind};

impl Field {
    /// Display names of the generators, bottom level first.
    pub fn generator_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.depth());
        let mut k = self;
        while let FieldKind::Quad { depth, .. } = k.kind() {
            names.push(if k.has_imaginary_top() {
                "i".to_string()
            } else {
                format!("r{depth}")
            });
            k = k.base().expect("quadratic level");
        }
        names.reverse();
        names
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime { p } => write!(f, "GF({p})"),
            FieldKind::Quad { base, radicand, .. } => {
                if self.has_imaginary_top() {
                    write!(f, "{base}[i]")
                } else {
                    write!(f, "{base}[sqrt {}]", base.wrap(radicand.clone()))
                }
            }
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

fn monomial(names: &[String], mask: usize) -> String {
    names
        .iter()
        .enumerate()
        .filter(|(j, _)| mask & (1 << j) != 0)
        .map(|(_, n)| n.as_str())
        .collect::<Vec<_>>()
        .join("*")
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.residue() {
            return write!(f, "{r}");
        }
        let names = self.field().generator_names();
        let coeffs = self.coefficients();
        let mut first = true;
        for (mask, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if mask == 0 {
                write_rational(f, &abs)?;
            } else {
                if !abs.is_one() {
                    write_rational(f, &abs)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", monomial(&names, mask))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.field())
    }
}
