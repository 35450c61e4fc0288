//! 2x2 orthogonal matrices, the orthogonal group of a prime field, rational
//! points on the unit circle, and the matrices `f1`, `f2` of the
//! Lorentz-Minkowski decomposition.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Homomorphism};
use crate::geometry::Point;
use crate::sampling;

/// `Q` with `Q^T Q = I`, checked at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrthoMatrix2 {
    q11: Elem,
    q12: Elem,
    q21: Elem,
    q22: Elem,
}

impl OrthoMatrix2 {
    pub fn new(q11: Elem, q12: Elem, q21: Elem, q22: Elem) -> Result<OrthoMatrix2> {
        let k = q11.field().clone();
        for e in [&q12, &q21, &q22] {
            if e.field() != &k {
                return Err(Error::FieldMismatch {
                    left: k.to_string(),
                    right: e.field().to_string(),
                });
            }
        }
        let one = k.one();
        let c1 = &q11.square() + &q21.square();
        let c2 = &q12.square() + &q22.square();
        let dot = &(&q11 * &q12) + &(&q21 * &q22);
        if c1 != one || c2 != one || !dot.is_zero() {
            return Err(Error::NotOrthogonal(format!(
                "[[{q11}, {q12}], [{q21}, {q22}]]: column norms {c1}, {c2}, dot {dot}"
            )));
        }
        Ok(OrthoMatrix2 { q11, q12, q21, q22 })
    }

    pub fn identity(k: &Field) -> OrthoMatrix2 {
        OrthoMatrix2 {
            q11: k.one(),
            q12: k.zero(),
            q21: k.zero(),
            q22: k.one(),
        }
    }

    /// `[[a, -b], [b, a]]`.
    pub fn rotation(a: &Elem, b: &Elem) -> Result<OrthoMatrix2> {
        OrthoMatrix2::new(a.clone(), -b, b.clone(), a.clone()).map_err(|_| not_unit("rot", a, b))
    }

    /// `[[a, b], [b, -a]]`.
    pub fn reflection(a: &Elem, b: &Elem) -> Result<OrthoMatrix2> {
        OrthoMatrix2::new(a.clone(), b.clone(), b.clone(), -a).map_err(|_| not_unit("refl", a, b))
    }

    pub fn field(&self) -> &Field {
        self.q11.field()
    }

    /// Row-major `[q11, q12, q21, q22]`.
    pub fn entries(&self) -> [&Elem; 4] {
        [&self.q11, &self.q12, &self.q21, &self.q22]
    }

    pub fn q11(&self) -> &Elem {
        &self.q11
    }

    pub fn q21(&self) -> &Elem {
        &self.q21
    }

    pub fn det(&self) -> Elem {
        &(&self.q11 * &self.q22) - &(&self.q12 * &self.q21)
    }

    /// Determinant 1; otherwise the determinant is -1.
    pub fn is_rotation(&self) -> bool {
        self.det().is_one()
    }

    pub fn transpose(&self) -> OrthoMatrix2 {
        OrthoMatrix2 {
            q11: self.q11.clone(),
            q12: self.q21.clone(),
            q21: self.q12.clone(),
            q22: self.q22.clone(),
        }
    }

    pub fn mul(&self, other: &OrthoMatrix2) -> Result<OrthoMatrix2> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                left: self.field().to_string(),
                right: other.field().to_string(),
            });
        }
        let (a, b) = (self, other);
        Ok(OrthoMatrix2 {
            q11: &(&a.q11 * &b.q11) + &(&a.q12 * &b.q21),
            q12: &(&a.q11 * &b.q12) + &(&a.q12 * &b.q22),
            q21: &(&a.q21 * &b.q11) + &(&a.q22 * &b.q21),
            q22: &(&a.q21 * &b.q12) + &(&a.q22 * &b.q22),
        })
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        if self.field() != x.field() {
            return Err(Error::FieldMismatch {
                left: self.field().to_string(),
                right: x.field().to_string(),
            });
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Point) -> Point {
        Point::new(
            &(&self.q11 * x.x1()) + &(&self.q12 * x.x2()),
            &(&self.q21 * x.x1()) + &(&self.q22 * x.x2()),
        )
        .expect("same field")
    }

    /// Entrywise image under a field homomorphism; orthogonality survives.
    pub fn map_entries(&self, h: &Homomorphism) -> Result<OrthoMatrix2> {
        h.validate(self.field())?;
        Ok(OrthoMatrix2 {
            q11: h.apply_unchecked(&self.q11),
            q12: h.apply_unchecked(&self.q12),
            q21: h.apply_unchecked(&self.q21),
            q22: h.apply_unchecked(&self.q22),
        })
    }
}

fn not_unit(name: &str, a: &Elem, b: &Elem) -> Error {
    Error::NotOrthogonal(format!(
        "{name}({a}, {b}): a^2 + b^2 = {} != 1",
        &a.square() + &b.square()
    ))
}

impl fmt::Display for OrthoMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.q11, self.q12, self.q21, self.q22
        )
    }
}

impl fmt::Debug for OrthoMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All orthogonal 2x2 matrices over a prime field: the identity first, then
/// the rest ordered by `(q11, q21, reflection flag)` as residues.
///
/// Orthogonal columns of unit norm force `Q = [[a, -b], [b, a]]` or
/// `[[a, b], [b, -a]]` with `a^2 + b^2 = 1`, so the group is two copies of
/// the unit circle.
pub fn enumerate_orthogonal_group(k: &Field) -> Result<Vec<OrthoMatrix2>> {
    let elems = sampling::all_elements(k)?;
    let one = k.one();
    let mut out = Vec::new();
    for a in &elems {
        for b in &elems {
            if &a.square() + &b.square() != one {
                continue;
            }
            out.push(OrthoMatrix2::rotation(a, b)?);
            out.push(OrthoMatrix2::reflection(a, b)?);
        }
    }
    let id = OrthoMatrix2::identity(k);
    out.sort_by_key(|q| (*q != id, q.q11.residue(), q.q21.residue(), !q.is_rotation()));
    Ok(out)
}

/// `((1 - t^2)/(1 + t^2), 2t/(1 + t^2))`, a point at unit `phi` from the
/// origin.
pub fn rational_unit_vector(t: &Elem) -> Result<Point> {
    let k = t.field();
    let t2 = t.square();
    let den = &k.one() + &t2;
    Point::new(
        (&k.one() - &t2).checked_div(&den)?,
        (&k.int(2) * t).checked_div(&den)?,
    )
}

fn lorentz_coefficients(a: &Elem, k: &Field) -> Result<(Elem, Elem, Elem)> {
    if a.field() != k {
        return Err(Error::FieldMismatch {
            left: k.to_string(),
            right: a.field().to_string(),
        });
    }
    if a.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let i = k
        .imaginary_unit()
        .ok_or_else(|| Error::NoImaginaryUnit(k.to_string()))?;
    let half = k.one().checked_div(&k.int(2))?;
    let half_inv = half.checked_div(a)?;
    let aa = &(&half * a) + &half_inv;
    let bb = &(&half * a) - &half_inv;
    Ok((aa, bb, i))
}

/// `f1 = [[A, B s], [-B i, -A i s]]` with `A = a/2 + 1/(2a)`,
/// `B = a/2 - 1/(2a)` and `s = sigma(i)`.
pub fn f1_matrix(a: &Elem, sigma: &Homomorphism, k: &Field) -> Result<OrthoMatrix2> {
    let (aa, bb, i) = lorentz_coefficients(a, k)?;
    let s = sigma.apply(&i)?;
    OrthoMatrix2::new(aa.clone(), &bb * &s, -&(&bb * &i), -&(&(&aa * &i) * &s))
}

/// `f2 = [[A, -B s], [-B i, A i s]]`.
pub fn f2_matrix(a: &Elem, sigma: &Homomorphism, k: &Field) -> Result<OrthoMatrix2> {
    let (aa, bb, i) = lorentz_coefficients(a, k)?;
    let s = sigma.apply(&i)?;
    OrthoMatrix2::new(aa.clone(), -&(&bb * &s), -&(&bb * &i), &(&aa * &i) * &s)
}
