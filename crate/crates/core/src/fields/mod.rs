//! Exact arithmetic in computable fields: the rationals, prime fields
//! GF(p), and towers of quadratic extensions over the rationals.
//!
//! A [`Field`] is a cheap, shareable handle. An [`Elem`] carries its
//! field with it, so mixing elements of different fields is detected at
//! the point of use instead of silently producing garbage.

mod fmt;
mod hom;
mod order;
pub(crate) mod prime;
mod sqrt;

use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use hom::{hom_check, HomVerdict, HomViolation, Homomorphism, ViolationKind};
pub use prime::is_prime;

/// A computable commutative field.
#[derive(Clone)]
pub struct Field(Arc<FieldKind>);

#[derive(Debug, PartialEq, Eq, Hash)]
pub(crate) enum FieldKind {
    Rationals,
    Prime {
        p: u64,
    },
    /// `base(sqrt radicand)`; `depth` counts quadratic levels, starting at 1.
    Quad {
        base: Field,
        radicand: Value,
        depth: usize,
    },
}

/// Field-free payload of an element. Quadratic levels are always stored as
/// `Pair(a, b)` meaning `a + b*sqrt(d)`, so structural equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Value {
    Rat(BigRational),
    Res(u64),
    Pair(Box<Value>, Box<Value>),
}

/// An element of a specific [`Field`].
#[derive(Clone)]
pub struct Elem {
    field: Field,
    value: Value,
}

/// One of the four field operations, for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: the operands must share a field, and a zero
/// divisor is an error rather than a panic.
pub fn field_arith(a: &Elem, op: ArithOp, b: &Elem) -> Result<Elem> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldKind::Rationals))
    }

    /// GF(p) for a prime `p` outside {2, 3, 5} with `p ≡ 1 (mod 4)`, so that
    /// -1 is a square.
    pub fn prime(p: u64) -> Result<Field> {
        if p % 4 != 1 {
            return Err(Error::InvalidField(format!(
                "GF({p}): p must be 1 mod 4 so that -1 is a square"
            )));
        }
        Self::prime_any_residue(p)
    }

    /// Like [`Field::prime`] but also accepts `p ≡ 3 (mod 4)`. Only meant
    /// for negative-control experiments where -1 must *not* be a square.
    pub fn prime_any_residue(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("GF({p}): {p} is not prime")));
        }
        if matches!(p, 2 | 3 | 5) {
            return Err(Error::InvalidField(format!(
                "GF({p}): characteristic must not be 2, 3 or 5"
            )));
        }
        Ok(Field(Arc::new(FieldKind::Prime { p })))
    }

    pub(crate) fn kind(&self) -> &FieldKind {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind(), FieldKind::Prime { .. })
    }

    /// The characteristic's prime for GF(p), `None` for rational towers.
    pub fn modulus(&self) -> Option<u64> {
        match self.kind() {
            FieldKind::Prime { p } => Some(*p),
            _ => None,
        }
    }

    /// Number of quadratic levels above the prime field.
    pub fn depth(&self) -> usize {
        match self.kind() {
            FieldKind::Quad { depth, .. } => *depth,
            _ => 0,
        }
    }

    /// The field this one was built on, if it is a quadratic extension.
    pub fn base(&self) -> Option<&Field> {
        match self.kind() {
            FieldKind::Quad { base, .. } => Some(base),
            _ => None,
        }
    }

    /// The field at the given tower level (0 = prime field).
    pub fn level(&self, level: usize) -> Option<&Field> {
        let mut k = self;
        if level > k.depth() {
            return None;
        }
        while k.depth() > level {
            k = k.base()?;
        }
        Some(k)
    }

    /// The adjoined radicand of the top level, as an element of the base.
    pub fn radicand(&self) -> Option<Elem> {
        match self.kind() {
            FieldKind::Quad { base, radicand, .. } => Some(base.wrap(radicand.clone())),
            _ => None,
        }
    }

    /// Radicands of all levels, bottom first; each lives in the field
    /// directly below its level.
    pub fn radicands(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.depth());
        let mut k = self;
        while let Some(d) = k.radicand() {
            out.push(d);
            k = k.base().expect("quadratic level has a base");
        }
        out.reverse();
        out
    }

    pub(crate) fn wrap(&self, value: Value) -> Elem {
        Elem {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> Elem {
        self.wrap(self.zero_v())
    }

    pub fn one(&self) -> Elem {
        self.wrap(self.one_v())
    }

    pub fn int(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// The rational `num/den`, mapped into this field.
    ///
    /// # Panics
    /// Panics if `den` is zero in this field.
    pub fn rat(&self, num: i64, den: i64) -> Elem {
        self.from_rational(&BigRational::new(num.into(), den.into()))
            .expect("denominator is nonzero in this field")
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        self.wrap(self.int_v(n))
    }

    /// Maps a rational into the prime subfield; fails over GF(p) when the
    /// denominator is divisible by p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        num.checked_div(&den)
    }

    /// The generator `r_level` (square root of the level's radicand),
    /// levels counted from 1.
    pub fn generator(&self, level: usize) -> Result<Elem> {
        if level == 0 || level > self.depth() {
            return Err(Error::InvalidLevel {
                level,
                depth: self.depth(),
            });
        }
        let sub = self.level(level).expect("level within depth");
        let sub_base = sub.base().expect("quadratic level");
        let g = sub.wrap(Value::Pair(
            Box::new(sub_base.zero_v()),
            Box::new(sub_base.one_v()),
        ));
        self.embed(&g)
    }

    /// Assembles `a + b*sqrt(d)` from elements of the base field.
    pub fn from_pair(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let base = self
            .base()
            .ok_or_else(|| Error::InvalidField(format!("{self} has no quadratic level")))?;
        base.check(a)?;
        base.check(b)?;
        Ok(self.wrap(Value::Pair(
            Box::new(a.value.clone()),
            Box::new(b.value.clone()),
        )))
    }

    /// Rational coefficients in the monomial basis of the radicals; index
    /// bit `j` set means the monomial contains `r_{j+1}`.
    pub fn from_coefficients(&self, coeffs: &[BigRational]) -> Result<Elem> {
        if self.is_finite() {
            return Err(Error::InvalidField(format!(
                "{self}: coefficient vectors only exist for rational towers"
            )));
        }
        if coeffs.len() != 1 << self.depth() {
            return Err(Error::InvalidField(format!(
                "{self} needs {} coefficients, got {}",
                1usize << self.depth(),
                coeffs.len()
            )));
        }
        Ok(self.wrap(self.coeffs_to_value(coeffs)))
    }

    fn coeffs_to_value(&self, coeffs: &[BigRational]) -> Value {
        match self.kind() {
            FieldKind::Quad { base, .. } => {
                let half = coeffs.len() / 2;
                Value::Pair(
                    Box::new(base.coeffs_to_value(&coeffs[..half])),
                    Box::new(base.coeffs_to_value(&coeffs[half..])),
                )
            }
            _ => Value::Rat(coeffs[0].clone()),
        }
    }

    pub(crate) fn check(&self, x: &Elem) -> Result<()> {
        if &x.field == self {
            Ok(())
        } else {
            Err(mismatch(self, &x.field))
        }
    }

    /// Is this a rational tower, i.e. is the prime subfield Q?
    pub fn is_rational_tower(&self) -> bool {
        match self.kind() {
            FieldKind::Rationals => true,
            FieldKind::Prime { .. } => false,
            FieldKind::Quad { base, .. } => base.is_rational_tower(),
        }
    }

    /// Is `anc` this field or one of the fields below it in the tower?
    pub fn has_ancestor(&self, anc: &Field) -> bool {
        let mut k = self;
        loop {
            if k == anc {
                return true;
            }
            match k.base() {
                Some(b) => k = b,
                None => return false,
            }
        }
    }

    /// Maps `x` into this field along the canonical inclusion.
    ///
    /// Supported inclusions: `x`'s field is a lower level of this tower, or
    /// both towers share their top radicand over bases that embed
    /// (e.g. `F(i) -> F(sqrt e)(i)`).
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        match embed_value(self, &x.field, &x.value) {
            Some(value) => Ok(self.wrap(value)),
            None => Err(Error::NotASubfield {
                field: x.field.to_string(),
                target: self.to_string(),
            }),
        }
    }

    // -- value-level arithmetic -------------------------------------------

    pub(crate) fn zero_v(&self) -> Value {
        match self.kind() {
            FieldKind::Rationals => Value::Rat(BigRational::zero()),
            FieldKind::Prime { .. } => Value::Res(0),
            FieldKind::Quad { base, .. } => {
                Value::Pair(Box::new(base.zero_v()), Box::new(base.zero_v()))
            }
        }
    }

    pub(crate) fn one_v(&self) -> Value {
        match self.kind() {
            FieldKind::Rationals => Value::Rat(BigRational::one()),
            FieldKind::Prime { .. } => Value::Res(1),
            FieldKind::Quad { base, .. } => {
                Value::Pair(Box::new(base.one_v()), Box::new(base.zero_v()))
            }
        }
    }

    pub(crate) fn int_v(&self, n: &BigInt) -> Value {
        match self.kind() {
            FieldKind::Rationals => Value::Rat(BigRational::from_integer(n.clone())),
            FieldKind::Prime { p } => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                Value::Res(r.try_into().expect("residue fits in u64"))
            }
            FieldKind::Quad { base, .. } => {
                Value::Pair(Box::new(base.int_v(n)), Box::new(base.zero_v()))
            }
        }
    }

    pub(crate) fn is_zero_v(&self, x: &Value) -> bool {
        match x {
            Value::Rat(q) => q.is_zero(),
            Value::Res(r) => *r == 0,
            Value::Pair(a, b) => {
                let base = self.base().expect("pair values live in quadratic levels");
                base.is_zero_v(a) && base.is_zero_v(b)
            }
        }
    }

    pub(crate) fn add_v(&self, x: &Value, y: &Value) -> Value {
        match (self.kind(), x, y) {
            (FieldKind::Rationals, Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (FieldKind::Prime { p }, Value::Res(a), Value::Res(b)) => {
                let s = a + b;
                Value::Res(if s >= *p { s - p } else { s })
            }
            (FieldKind::Quad { base, .. }, Value::Pair(a, b), Value::Pair(c, d)) => {
                Value::Pair(Box::new(base.add_v(a, c)), Box::new(base.add_v(b, d)))
            }
            _ => unreachable!("value shape does not match its field"),
        }
    }

    pub(crate) fn neg_v(&self, x: &Value) -> Value {
        match (self.kind(), x) {
            (FieldKind::Rationals, Value::Rat(a)) => Value::Rat(-a),
            (FieldKind::Prime { p }, Value::Res(a)) => Value::Res(if *a == 0 { 0 } else { p - a }),
            (FieldKind::Quad { base, .. }, Value::Pair(a, b)) => {
                Value::Pair(Box::new(base.neg_v(a)), Box::new(base.neg_v(b)))
            }
            _ => unreachable!("value shape does not match its field"),
        }
    }

    pub(crate) fn sub_v(&self, x: &Value, y: &Value) -> Value {
        match (self.kind(), x, y) {
            (FieldKind::Rationals, Value::Rat(a), Value::Rat(b)) => Value::Rat(a - b),
            (FieldKind::Prime { p }, Value::Res(a), Value::Res(b)) => {
                Value::Res(if a >= b { a - b } else { p - (b - a) })
            }
            (FieldKind::Quad { base, .. }, Value::Pair(a, b), Value::Pair(c, d)) => {
                Value::Pair(Box::new(base.sub_v(a, c)), Box::new(base.sub_v(b, d)))
            }
            _ => unreachable!("value shape does not match its field"),
        }
    }

    pub(crate) fn mul_v(&self, x: &Value, y: &Value) -> Value {
        match (self.kind(), x, y) {
            (FieldKind::Rationals, Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (FieldKind::Prime { p }, Value::Res(a), Value::Res(b)) => {
                Value::Res(prime::mul_mod(*a, *b, *p))
            }
            (FieldKind::Quad { base, radicand, .. }, Value::Pair(a, b), Value::Pair(c, e)) => {
                // (a + b r)(c + e r) = (ac + d be) + (ae + bc) r
                let ac = base.mul_v(a, c);
                let be = base.mul_v(b, e);
                let ae = base.mul_v(a, e);
                let bc = base.mul_v(b, c);
                Value::Pair(
                    Box::new(base.add_v(&ac, &base.mul_v(radicand, &be))),
                    Box::new(base.add_v(&ae, &bc)),
                )
            }
            _ => unreachable!("value shape does not match its field"),
        }
    }

    pub(crate) fn inv_v(&self, x: &Value) -> Option<Value> {
        match (self.kind(), x) {
            (FieldKind::Rationals, Value::Rat(a)) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Value::Rat(a.recip()))
                }
            }
            (FieldKind::Prime { p }, Value::Res(a)) => prime::inv_mod(*a, *p).map(Value::Res),
            (FieldKind::Quad { base, radicand, .. }, Value::Pair(a, b)) => {
                // 1/(a + b r) = (a - b r) / (a^2 - d b^2); the norm vanishes
                // only at zero because d is not a square in the base.
                let norm = base.sub_v(&base.mul_v(a, a), &base.mul_v(radicand, &base.mul_v(b, b)));
                let ninv = base.inv_v(&norm)?;
                Some(Value::Pair(
                    Box::new(base.mul_v(a, &ninv)),
                    Box::new(base.neg_v(&base.mul_v(b, &ninv))),
                ))
            }
            _ => unreachable!("value shape does not match its field"),
        }
    }

    pub(crate) fn coeffs_of(&self, x: &Value, out: &mut Vec<BigRational>) {
        match x {
            Value::Rat(q) => out.push(q.clone()),
            Value::Res(r) => out.push(BigRational::from_integer((*r).into())),
            Value::Pair(a, b) => {
                let base = self.base().expect("pair values live in quadratic levels");
                base.coeffs_of(a, out);
                base.coeffs_of(b, out);
            }
        }
    }
}

fn embed_value(target: &Field, source: &Field, x: &Value) -> Option<Value> {
    if target == source {
        return Some(x.clone());
    }
    let FieldKind::Quad {
        base: tbase,
        radicand: trad,
        ..
    } = target.kind()
    else {
        return None;
    };
    // Same top radicand over embeddable bases: map coefficientwise.
    if let (
        FieldKind::Quad {
            base: sbase,
            radicand: srad,
            ..
        },
        Value::Pair(a, b),
    ) = (source.kind(), x)
    {
        if let Some(r) = embed_value(tbase, sbase, srad) {
            if &r == trad {
                if let (Some(a), Some(b)) =
                    (embed_value(tbase, sbase, a), embed_value(tbase, sbase, b))
                {
                    return Some(Value::Pair(Box::new(a), Box::new(b)));
                }
            }
        }
    }
    let inner = embed_value(tbase, source, x)?;
    Some(Value::Pair(Box::new(inner), Box::new(tbase.zero_v())))
}

fn mismatch(a: &Field, b: &Field) -> Error {
    Error::FieldMismatch {
        left: a.to_string(),
        right: b.to_string(),
    }
}

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub(crate) fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_v(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.value == self.field.one_v()
    }

    fn same_field(&self, other: &Elem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(mismatch(&self.field, &other.field))
        }
    }

    pub fn checked_add(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.add_v(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.sub_v(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.mul_v(&self.value, &other.value)))
    }

    pub fn checked_div(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        let inv = self
            .field
            .inv_v(&other.value)
            .ok_or(Error::DivisionByZero)?;
        Ok(self.field.wrap(self.field.mul_v(&self.value, &inv)))
    }

    pub fn inv(&self) -> Result<Elem> {
        let inv = self.field.inv_v(&self.value).ok_or(Error::DivisionByZero)?;
        Ok(self.field.wrap(inv))
    }

    pub fn square(&self) -> Elem {
        self.field.wrap(self.field.mul_v(&self.value, &self.value))
    }

    pub fn pow(&self, mut exp: u32) -> Elem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// The residue of a GF(p) element.
    pub fn residue(&self) -> Option<u64> {
        match self.value {
            Value::Res(r) => Some(r),
            _ => None,
        }
    }

    /// Coefficients over the prime field in the radical monomial basis
    /// (see [`Field::from_coefficients`]); GF(p) elements give one entry.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(1 << self.field.depth());
        self.field.coeffs_of(&self.value, &mut out);
        out
    }

    /// The rational value, when the element lies in the prime subfield Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.field.is_rational_tower() || !self.in_prime_subfield() {
            return None;
        }
        self.coefficients().into_iter().next()
    }

    /// Does the element lie in the prime subfield (Q or GF(p))?
    pub fn in_prime_subfield(&self) -> bool {
        fn rec(k: &Field, v: &Value) -> bool {
            match v {
                Value::Pair(a, b) => {
                    let base = k.base().expect("quadratic level");
                    base.is_zero_v(b) && rec(base, a)
                }
                _ => true,
            }
        }
        rec(&self.field, &self.value)
    }

    /// Splits a top-level `a + b*sqrt(d)` into its base-field parts.
    pub fn split(&self) -> Option<(Elem, Elem)> {
        match (&self.value, self.field.base()) {
            (Value::Pair(a, b), Some(base)) => {
                Some((base.wrap((**a).clone()), base.wrap((**b).clone())))
            }
            _ => None,
        }
    }

    /// Real and imaginary parts, for towers whose top level adjoins
    /// `sqrt(-1)`.
    pub fn re_im(&self) -> Result<(Elem, Elem)> {
        if !self.field.has_imaginary_top() {
            return Err(Error::NoImaginaryPresentation(self.field.to_string()));
        }
        Ok(self.split().expect("quadratic top level"))
    }

    /// `sqrt` of this element if one exists in its own field.
    pub fn sqrt(&self) -> Option<Elem> {
        sqrt::sqrt_in_field(self)
    }
}

impl Field {
    /// True when the top level is `base(sqrt(-1))`.
    pub fn has_imaginary_top(&self) -> bool {
        match self.kind() {
            FieldKind::Quad { base, radicand, .. } => *radicand == base.neg_v(&base.one_v()),
            _ => false,
        }
    }

    /// The real subfield `F` of a tower presented as `F(i)`.
    pub fn real_subfield(&self) -> Result<&Field> {
        if self.has_imaginary_top() {
            Ok(self.base().expect("quadratic top"))
        } else {
            Err(Error::NoImaginaryPresentation(self.to_string()))
        }
    }

    /// Builds `re + im*i` in a field presented as `F(i)`.
    pub fn from_re_im(&self, re: &Elem, im: &Elem) -> Result<Elem> {
        self.real_subfield()?;
        self.from_pair(re, im)
    }

    /// Some `i` with `i^2 + 1 = 0`, chosen canonically (see
    /// [`sqrt_in_field`]).
    pub fn imaginary_unit(&self) -> Option<Elem> {
        sqrt::sqrt_in_field(&self.int(-1))
    }

    /// Adjoins `sqrt(d)` for a non-square `d` of this field.
    pub fn adjoin_sqrt(&self, d: &Elem) -> Result<(Field, Embedding)> {
        self.check(d)?;
        if self.is_finite() {
            return Err(Error::UnsupportedExtension(format!("{self}[sqrt {d}]")));
        }
        if d.is_zero() {
            return Err(Error::ZeroRadicand);
        }
        if sqrt::sqrt_in_field(d).is_some() {
            return Err(Error::AlreadySquare {
                field: self.to_string(),
                radicand: d.to_string(),
            });
        }
        let ext = Field(Arc::new(FieldKind::Quad {
            base: self.clone(),
            radicand: d.value.clone(),
            depth: self.depth() + 1,
        }));
        let emb = Embedding {
            from: self.clone(),
            to: ext.clone(),
        };
        Ok((ext, emb))
    }

    /// Returns a square root of `d` (an element of this field), adjoining
    /// one if needed. The returned field extends `self`.
    pub fn sqrt_or_adjoin(&self, d: &Elem) -> Result<(Field, Elem)> {
        let d = self.embed(d)?;
        if let Some(r) = sqrt::sqrt_in_field(&d) {
            return Ok((self.clone(), r));
        }
        let (ext, _) = self.adjoin_sqrt(&d)?;
        let r = ext.generator(ext.depth())?;
        Ok((ext, r))
    }
}

pub use sqrt::sqrt_in_field;

/// The canonical inclusion of a field into a quadratic extension of it.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: Field,
    to: Field,
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.from
    }

    pub fn target(&self) -> &Field {
        &self.to
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        self.from.check(x)?;
        self.to.embed(x)
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                (&self).$method(rhs)
            }
        }
        impl $trait<Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                self.$method(&rhs)
            }
        }
    };
}

// The operator forms panic on mixed fields or a zero divisor; use the
// `checked_*` methods where either can legitimately happen.
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.field.wrap(self.field.neg_v(&self.value))
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

pub(crate) fn rational_sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
