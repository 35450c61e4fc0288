use super::PlaneMap;
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::geometry::Point;
use crate::sampling;

/// An arbitrary map of a finite plane, stored as the image index of every
/// point (`x1 * p + x2`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MapTable {
    field: Field,
    images: Vec<u32>,
}

impl MapTable {
    pub fn from_indices(k: &Field, images: Vec<u32>) -> Result<MapTable> {
        let p = k
            .modulus()
            .ok_or_else(|| Error::FieldNotFinite(k.to_string()))? as usize;
        let n = p * p;
        if images.len() != n {
            return Err(Error::InvalidField(format!(
                "table has {} entries, {k} has {n} points",
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|&&j| j as usize >= n) {
            return Err(Error::InvalidField(format!(
                "image index {bad} out of range"
            )));
        }
        Ok(MapTable {
            field: k.clone(),
            images,
        })
    }

    /// Tabulates `m` on every point.
    pub fn tabulate(m: &dyn PlaneMap) -> Result<MapTable> {
        let k = m.field().clone();
        let images = sampling::all_points(&k)?
            .iter()
            .map(|x| {
                let y = m.apply(x)?;
                Ok(y.index().expect("finite field point") as u32)
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(MapTable { field: k, images })
    }

    /// Builds a table from `(domain, image)` pairs covering every point once.
    pub fn from_pairs(k: &Field, pairs: &[(Point, Point)]) -> Result<MapTable> {
        let p = k
            .modulus()
            .ok_or_else(|| Error::FieldNotFinite(k.to_string()))? as usize;
        let mut images = vec![u32::MAX; p * p];
        for (x, y) in pairs {
            x.same_field(y)?;
            if x.field() != k {
                return Err(Error::FieldMismatch {
                    left: k.to_string(),
                    right: x.field().to_string(),
                });
            }
            let slot = &mut images[x.index().expect("finite")];
            if *slot != u32::MAX {
                return Err(Error::InvalidField(format!("point {x} listed twice")));
            }
            *slot = y.index().expect("finite") as u32;
        }
        if let Some(missing) = images.iter().position(|&j| j == u32::MAX) {
            return Err(Error::InvalidField(format!(
                "no image for point {}",
                point_at(k, missing)
            )));
        }
        Ok(MapTable {
            field: k.clone(),
            images,
        })
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image_of(&self, index: usize) -> usize {
        self.images[index] as usize
    }

    /// Replaces one image, for fault injection.
    pub fn with_image(&self, x: &Point, y: &Point) -> Result<MapTable> {
        let mut t = self.clone();
        let (a, b) = (x.index(), y.index());
        match (a, b) {
            (Some(a), Some(b)) if x.field() == &self.field && y.field() == &self.field => {
                t.images[a] = b as u32;
                Ok(t)
            }
            _ => Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: x.field().to_string(),
            }),
        }
    }

    /// `(domain, image)` pairs in index order.
    pub fn pairs(&self) -> Vec<(Point, Point)> {
        self.images
            .iter()
            .enumerate()
            .map(|(a, &b)| (point_at(&self.field, a), point_at(&self.field, b as usize)))
            .collect()
    }
}

pub(crate) fn point_at(k: &Field, index: usize) -> Point {
    let p = k.modulus().expect("finite field") as usize;
    Point::from_ints(k, (index / p) as i64, (index % p) as i64)
}

impl PlaneMap for MapTable {
    fn field(&self) -> &Field {
        &self.field
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        if x.field() != &self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: x.field().to_string(),
            });
        }
        let j = self.images[x.index().expect("finite field point")];
        Ok(point_at(&self.field, j as usize))
    }
}
