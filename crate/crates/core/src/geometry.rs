//! Points of K^2, the squared-distance form `phi`, the imaginary pairing
//! `psi`, the Lorentz-Minkowski distance, and the coordinate changes that
//! carry one form to the other.

use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::exec;
use crate::fields::{Elem, Field};
use crate::sampling::{self, Domain};

/// A point of K^2. Both coordinates always share one field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    x1: Elem,
    x2: Elem,
}

impl Point {
    pub fn new(x1: Elem, x2: Elem) -> Result<Point> {
        if x1.field() != x2.field() {
            return Err(Error::FieldMismatch {
                left: x1.field().to_string(),
                right: x2.field().to_string(),
            });
        }
        Ok(Point { x1, x2 })
    }

    pub fn from_ints(k: &Field, a: i64, b: i64) -> Point {
        Point {
            x1: k.int(a),
            x2: k.int(b),
        }
    }

    pub fn origin(k: &Field) -> Point {
        Point::from_ints(k, 0, 0)
    }

    pub fn x1(&self) -> &Elem {
        &self.x1
    }

    pub fn x2(&self) -> &Elem {
        &self.x2
    }

    pub fn field(&self) -> &Field {
        self.x1.field()
    }

    pub fn into_coords(self) -> (Elem, Elem) {
        (self.x1, self.x2)
    }

    pub fn scale(&self, c: &Elem) -> Point {
        Point {
            x1: c * &self.x1,
            x2: c * &self.x2,
        }
    }

    /// Maps both coordinates with `f`.
    pub fn map<F>(&self, f: F) -> Result<Point>
    where
        F: Fn(&Elem) -> Result<Elem>,
    {
        Point::new(f(&self.x1)?, f(&self.x2)?)
    }

    /// Index `x1 * p + x2` of a point of a finite plane.
    pub fn index(&self) -> Option<usize> {
        let p = self.field().modulus()?;
        Some((self.x1.residue()? * p + self.x2.residue()?) as usize)
    }

    pub(crate) fn same_field(&self, other: &Point) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field().to_string(),
                right: other.field().to_string(),
            })
        }
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point {
            x1: &self.x1 + &rhs.x1,
            x2: &self.x2 + &rhs.x2,
        }
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point {
            x1: &self.x1 - &rhs.x1,
            x2: &self.x2 - &rhs.x2,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(x1 - y1)^2 + (x2 - y2)^2`.
pub fn phi(x: &Point, y: &Point) -> Result<Elem> {
    x.same_field(y)?;
    Ok(phi_unchecked(x, y))
}

pub(crate) fn phi_unchecked(x: &Point, y: &Point) -> Elem {
    (&x.x1 - &y.x1).square() + (&x.x2 - &y.x2).square()
}

/// `Im(x1) Im(y1) + Im(x2) Im(y2)`, for fields presented as `F(i)`.
pub fn psi(x: &Point, y: &Point) -> Result<Elem> {
    x.same_field(y)?;
    let (_, b1) = x.x1.re_im()?;
    let (_, b2) = x.x2.re_im()?;
    let (_, c1) = y.x1.re_im()?;
    let (_, c2) = y.x2.re_im()?;
    Ok(&(&b1 * &c1) + &(&b2 * &c2))
}

/// Lorentz-Minkowski distance `(x1 - y1)(x2 - y2)`.
pub fn lm_distance(x: &Point, y: &Point) -> Result<Elem> {
    x.same_field(y)?;
    Ok(lm_unchecked(x, y))
}

fn lm_unchecked(x: &Point, y: &Point) -> Elem {
    (&x.x1 - &y.x1) * (&x.x2 - &y.x2)
}

fn unit_i(k: &Field) -> Result<Elem> {
    k.imaginary_unit()
        .ok_or_else(|| Error::NoImaginaryUnit(k.to_string()))
}

/// `(x1, x2) -> (x1 + i x2, x1 - i x2)`; turns `phi` into the
/// Lorentz-Minkowski distance.
pub fn xi(x: &Point) -> Result<Point> {
    let i = unit_i(x.field())?;
    Ok(xi_with(&i, x))
}

fn xi_with(i: &Elem, x: &Point) -> Point {
    let t = i * &x.x2;
    Point {
        x1: &x.x1 + &t,
        x2: &x.x1 - &t,
    }
}

/// `(x1, x2) -> (x1/2 + x2/2, -i x1/2 + i x2/2)`, the inverse of [`xi`].
pub fn eta(x: &Point) -> Result<Point> {
    let k = x.field();
    let i = unit_i(k)?;
    let half = k.one().checked_div(&k.int(2))?;
    Ok(eta_with(&i, &half, x))
}

fn eta_with(i: &Elem, half: &Elem, x: &Point) -> Point {
    let ih = i * half;
    Point {
        x1: half * &(&x.x1 + &x.x2),
        x2: &ih * &(&x.x2 - &x.x1),
    }
}

/// `(x, y) -> (x / z, z y)`; preserves every Lorentz-Minkowski distance.
pub fn lambda_map(z: &Elem, x: &Point) -> Result<Point> {
    if z.field() != x.field() {
        return Err(Error::FieldMismatch {
            left: z.field().to_string(),
            right: x.field().to_string(),
        });
    }
    if z.is_zero() {
        return Err(Error::ZeroScale);
    }
    Ok(Point {
        x1: x.x1.checked_div(z)?,
        x2: z * &x.x2,
    })
}

/// `(x1, x2) -> (x2, x1)`.
pub fn swap_map(x: &Point) -> Point {
    Point {
        x1: x.x2.clone(),
        x2: x.x1.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformIdentity {
    /// `phi(X, Y) = d(xi X, xi Y)`
    PhiViaXi,
    /// `d(X, Y) = phi(eta X, eta Y)`
    LorentzViaEta,
    /// `eta(xi X) = X`
    EtaAfterXi,
    /// `xi(eta X) = X`
    XiAfterEta,
}

impl TransformIdentity {
    pub const ALL: [TransformIdentity; 4] = [
        TransformIdentity::PhiViaXi,
        TransformIdentity::LorentzViaEta,
        TransformIdentity::EtaAfterXi,
        TransformIdentity::XiAfterEta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformIdentity::PhiViaXi => "phi = d o (xi x xi)",
            TransformIdentity::LorentzViaEta => "d = phi o (eta x eta)",
            TransformIdentity::EtaAfterXi => "eta o xi = id",
            TransformIdentity::XiAfterEta => "xi o eta = id",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityViolation {
    pub identity: TransformIdentity,
    pub x: Point,
    pub y: Option<Point>,
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub field: Field,
    pub domain: Domain,
    pub pairs_checked: usize,
    pub points_checked: usize,
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, id: TransformIdentity) -> usize {
        self.violations.iter().filter(|v| v.identity == id).count()
    }
}

/// Checks the four `xi`/`eta` identities on every pair of a finite plane,
/// or on `count` seeded pairs.
pub fn verify_transform_identities(k: &Field, domain: Domain) -> Result<IdentityReport> {
    let i = unit_i(k)?;
    let half = k.one().checked_div(&k.int(2))?;
    let (points, pairs): (Vec<Point>, Option<Vec<(usize, usize)>>) = match domain {
        Domain::Exhaustive => (sampling::all_points(k)?, None),
        Domain::Samples { count, seed } => {
            let mut rng = sampling::rng(seed);
            let pts: Vec<Point> = (0..2 * count)
                .map(|_| sampling::random_point(k, &mut rng))
                .collect();
            let pairs = (0..count).map(|j| (2 * j, 2 * j + 1)).collect();
            (pts, Some(pairs))
        }
    };
    let xis: Vec<Point> = points.iter().map(|p| xi_with(&i, p)).collect();
    let etas: Vec<Point> = points.iter().map(|p| eta_with(&i, &half, p)).collect();

    let mut violations: Vec<IdentityViolation> = exec::scan(points.len(), |a| {
        let p = &points[a];
        let mut v = Vec::new();
        if &eta_with(&i, &half, &xis[a]) != p {
            v.push(TransformIdentity::EtaAfterXi);
        }
        if &xi_with(&i, &etas[a]) != p {
            v.push(TransformIdentity::XiAfterEta);
        }
        (!v.is_empty()).then(|| {
            v.into_iter()
                .map(|identity| IdentityViolation {
                    identity,
                    x: p.clone(),
                    y: None,
                })
                .collect::<Vec<_>>()
        })
    })
    .into_iter()
    .flatten()
    .collect();

    let n = points.len();
    let pair_count = pairs.as_ref().map_or(n * n, |p| p.len());
    let pair_at = |j: usize| match &pairs {
        Some(p) => p[j],
        None => (j / n, j % n),
    };
    let pair_violations = exec::scan(pair_count, |j| {
        let (a, b) = pair_at(j);
        let (x, y) = (&points[a], &points[b]);
        let mut v = Vec::new();
        if phi_unchecked(x, y) != lm_unchecked(&xis[a], &xis[b]) {
            v.push(TransformIdentity::PhiViaXi);
        }
        if lm_unchecked(x, y) != phi_unchecked(&etas[a], &etas[b]) {
            v.push(TransformIdentity::LorentzViaEta);
        }
        (!v.is_empty()).then(|| {
            v.into_iter()
                .map(|identity| IdentityViolation {
                    identity,
                    x: x.clone(),
                    y: Some(y.clone()),
                })
                .collect::<Vec<_>>()
        })
    });
    violations.extend(pair_violations.into_iter().flatten());

    Ok(IdentityReport {
        field: k.clone(),
        domain,
        pairs_checked: pair_count,
        points_checked: n,
        violations,
    })
}
