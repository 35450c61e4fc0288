//! Maps of the plane K^2: affine maps with orthogonal linear part, their
//! composition with a coordinatewise field homomorphism, finite lookup
//! tables, and the checks for unit-distance and `phi` preservation.

mod affine;
mod ortho;
mod table;

use std::fmt;
use std::sync::Arc;

pub use affine::{AffineOrthoMap, SemiAffineMap};
pub use ortho::{
    enumerate_orthogonal_group, f1_matrix, f2_matrix, rational_unit_vector, OrthoMatrix2,
};
pub use table::MapTable;

use crate::error::Result;
use crate::exec;
use crate::fields::{Elem, Field};
use crate::geometry::{self, Point};
use crate::sampling::{self, Domain};

/// A map `K^2 -> K^2` that can be evaluated pointwise.
pub trait PlaneMap: Send + Sync {
    fn field(&self) -> &Field;
    fn apply(&self, x: &Point) -> Result<Point>;
}

impl<M: PlaneMap + ?Sized> PlaneMap for Arc<M> {
    fn field(&self) -> &Field {
        (**self).field()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        (**self).apply(x)
    }
}

impl<M: PlaneMap + ?Sized> PlaneMap for &M {
    fn field(&self) -> &Field {
        (**self).field()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        (**self).apply(x)
    }
}

/// A closure viewed as a map.
pub struct FnMap<F> {
    field: Field,
    f: F,
}

impl<F> FnMap<F>
where
    F: Fn(&Point) -> Result<Point> + Send + Sync,
{
    pub fn new(field: &Field, f: F) -> FnMap<F> {
        FnMap {
            field: field.clone(),
            f,
        }
    }
}

impl<F> PlaneMap for FnMap<F>
where
    F: Fn(&Point) -> Result<Point> + Send + Sync,
{
    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        (self.f)(x)
    }
}

/// `parts[0] o parts[1] o ...`; the last part is applied first.
#[derive(Clone)]
pub struct Composed {
    field: Field,
    parts: Vec<Arc<dyn PlaneMap>>,
}

impl Composed {
    pub fn new(field: &Field, parts: Vec<Arc<dyn PlaneMap>>) -> Composed {
        Composed {
            field: field.clone(),
            parts,
        }
    }
}

impl PlaneMap for Composed {
    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        let mut y = x.clone();
        for m in self.parts.iter().rev() {
            y = m.apply(&y)?;
        }
        Ok(y)
    }
}

/// `base` with the image of one point replaced; used to corrupt maps that
/// are not tables.
#[derive(Clone)]
pub struct Overridden {
    base: Arc<dyn PlaneMap>,
    at: Point,
    image: Point,
}

impl Overridden {
    pub fn new(base: Arc<dyn PlaneMap>, at: Point, image: Point) -> Result<Overridden> {
        at.same_field(&image)?;
        Point::origin(base.field()).same_field(&at)?;
        Ok(Overridden { base, at, image })
    }
}

impl PlaneMap for Overridden {
    fn field(&self) -> &Field {
        self.base.field()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        if x == &self.at {
            Ok(self.image.clone())
        } else {
            self.base.apply(x)
        }
    }
}

/// A pair whose image breaks the property being checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub x: Point,
    pub y: Point,
    pub phi: Elem,
    pub image_phi: Elem,
}

impl fmt::Display for PairWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "phi({}, {}) = {} but phi of images = {}",
            self.x, self.y, self.phi, self.image_phi
        )
    }
}

#[derive(Clone, Debug)]
pub struct MapVerdict {
    pub pairs_checked: usize,
    pub witness: Option<PairWitness>,
}

impl MapVerdict {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn first_witness(
    m: &dyn PlaneMap,
    pairs: &[(Point, Point)],
    keep: impl Fn(&Elem) -> bool + Sync,
) -> Result<MapVerdict> {
    let kept: Vec<(usize, Elem)> = pairs
        .iter()
        .enumerate()
        .filter_map(|(j, (x, y))| {
            let phi = geometry::phi_unchecked(x, y);
            keep(&phi).then_some((j, phi))
        })
        .collect();
    let bad = exec::scan(kept.len(), |n| {
        let (j, phi) = &kept[n];
        let (x, y) = &pairs[*j];
        let image_phi = match m.apply(x).and_then(|a| geometry::phi(&a, &m.apply(y)?)) {
            Ok(v) => v,
            Err(e) => return Some((n, Err(e))),
        };
        (&image_phi != phi).then(|| {
            (
                n,
                Ok(PairWitness {
                    x: x.clone(),
                    y: y.clone(),
                    phi: phi.clone(),
                    image_phi,
                }),
            )
        })
    });
    match bad.into_iter().next() {
        None => Ok(MapVerdict {
            pairs_checked: kept.len(),
            witness: None,
        }),
        Some((n, w)) => Ok(MapVerdict {
            pairs_checked: n + 1,
            witness: Some(w?),
        }),
    }
}

/// The unit circle of a finite field.
pub(crate) fn unit_circle(k: &Field) -> Result<Vec<Point>> {
    let one = k.one();
    Ok(sampling::all_points(k)?
        .into_iter()
        .filter(|u| geometry::phi_unchecked(&Point::origin(k), u) == one)
        .collect())
}

/// Checks `phi(X, Y) = 1 => phi(mX, mY) = 1`: over every unit pair of a
/// finite plane, or over `count` seeded unit pairs `(X, X + u)`.
pub fn preserves_unit_distance(m: &dyn PlaneMap, domain: Domain) -> Result<MapVerdict> {
    let k = m.field().clone();
    let pairs = match domain {
        Domain::Exhaustive => {
            let circle = unit_circle(&k)?;
            let pts = sampling::all_points(&k)?;
            pts.iter()
                .flat_map(|x| circle.iter().map(move |u| (x.clone(), x + u)))
                .collect::<Vec<_>>()
        }
        Domain::Samples { count, seed } => sampling::unit_pairs(&k, count, seed),
    };
    let one = k.one();
    first_witness(m, &pairs, |phi| *phi == one)
}

/// Checks `phi(mX, mY) = phi(X, Y)` on pairs whose `phi` lies in the prime
/// subfield: all ordered pairs of a finite plane, or `count` seeded pairs
/// built to have prime-subfield `phi`.
pub fn preserves_phi(m: &dyn PlaneMap, domain: Domain) -> Result<MapVerdict> {
    let k = m.field().clone();
    let pairs = match domain {
        Domain::Exhaustive => {
            let pts = sampling::all_points(&k)?;
            // Images are computed once per point rather than once per pair.
            let imgs = pts.iter().map(|x| m.apply(x)).collect::<Result<Vec<_>>>()?;
            let table = FnMap::new(&k, |x: &Point| Ok(imgs[x.index().expect("finite")].clone()));
            let pairs: Vec<(Point, Point)> = pts
                .iter()
                .flat_map(|x| pts.iter().map(move |y| (x.clone(), y.clone())))
                .collect();
            return first_witness(&table, &pairs, |_| true);
        }
        Domain::Samples { count, seed } => sampling::prime_phi_pairs(&k, count, seed),
    };
    first_witness(m, &pairs, |phi| phi.in_prime_subfield())
}

/// `phi` of a single pair and of its image.
pub fn phi_on_pair(m: &dyn PlaneMap, x: &Point, y: &Point) -> Result<(Elem, Elem)> {
    let phi = geometry::phi(x, y)?;
    let image_phi = geometry::phi(&m.apply(x)?, &m.apply(y)?)?;
    Ok((phi, image_phi))
}
