use std::fmt;

use super::{OrthoMatrix2, PlaneMap};
use crate::error::{Error, Result};
use crate::fields::{Field, Homomorphism};
use crate::geometry::{self, Point};

/// `X -> Q X + t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineOrthoMap {
    linear: OrthoMatrix2,
    translation: Point,
}

impl AffineOrthoMap {
    pub fn new(linear: OrthoMatrix2, translation: Point) -> Result<AffineOrthoMap> {
        if linear.field() != translation.field() {
            return Err(Error::FieldMismatch {
                left: linear.field().to_string(),
                right: translation.field().to_string(),
            });
        }
        let m = AffineOrthoMap {
            linear,
            translation,
        };
        debug_assert!(m.frame_preserved());
        Ok(m)
    }

    fn frame_preserved(&self) -> bool {
        let k = self.field();
        let frame = [
            Point::origin(k),
            Point::from_ints(k, 1, 0),
            Point::from_ints(k, 0, 1),
        ];
        let imgs: Vec<Point> = frame.iter().map(|x| self.apply_unchecked(x)).collect();
        (0..3).all(|a| {
            (0..3).all(|b| {
                geometry::phi_unchecked(&frame[a], &frame[b])
                    == geometry::phi_unchecked(&imgs[a], &imgs[b])
            })
        })
    }

    pub fn identity(k: &Field) -> AffineOrthoMap {
        AffineOrthoMap {
            linear: OrthoMatrix2::identity(k),
            translation: Point::origin(k),
        }
    }

    pub fn translation_by(t: Point) -> AffineOrthoMap {
        AffineOrthoMap {
            linear: OrthoMatrix2::identity(t.field()),
            translation: t,
        }
    }

    pub fn linear_map(q: OrthoMatrix2) -> AffineOrthoMap {
        let t = Point::origin(q.field());
        AffineOrthoMap {
            linear: q,
            translation: t,
        }
    }

    pub fn linear(&self) -> &OrthoMatrix2 {
        &self.linear
    }

    pub fn translation(&self) -> &Point {
        &self.translation
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.translation.same_field(x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Point) -> Point {
        &self.linear.apply_unchecked(x) + &self.translation
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AffineOrthoMap) -> Result<AffineOrthoMap> {
        Ok(AffineOrthoMap {
            linear: self.linear.mul(&other.linear)?,
            translation: self.apply(&other.translation)?,
        })
    }

    /// `X -> Q^T (X - t)`.
    pub fn invert(&self) -> AffineOrthoMap {
        let qt = self.linear.transpose();
        let t = qt.apply_unchecked(&self.translation);
        AffineOrthoMap {
            linear: qt,
            translation: &Point::origin(self.field()) - &t,
        }
    }

    /// Entrywise image of matrix and translation under `h`, so that
    /// `h o I = I^h o h`.
    pub fn map_entries(&self, h: &Homomorphism) -> Result<AffineOrthoMap> {
        Ok(AffineOrthoMap {
            linear: self.linear.map_entries(h)?,
            translation: self.translation.map(|x| h.apply(x))?,
        })
    }
}

impl PlaneMap for AffineOrthoMap {
    fn field(&self) -> &Field {
        self.translation.field()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        AffineOrthoMap::apply(self, x)
    }
}

impl fmt::Display for AffineOrthoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X -> {} X + {}", self.linear, self.translation)
    }
}

impl fmt::Debug for AffineOrthoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `X -> outer((gamma(x1), gamma(x2)))`.
#[derive(Clone, PartialEq, Eq)]
pub struct SemiAffineMap {
    outer: AffineOrthoMap,
    gamma: Homomorphism,
}

impl SemiAffineMap {
    pub fn new(outer: AffineOrthoMap, gamma: Homomorphism) -> Result<SemiAffineMap> {
        gamma.validate(outer.field())?;
        Ok(SemiAffineMap {
            outer,
            gamma: gamma.normalized(),
        })
    }

    pub fn outer(&self) -> &AffineOrthoMap {
        &self.outer
    }

    pub fn gamma(&self) -> &Homomorphism {
        &self.gamma
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.outer.translation.same_field(x)?;
        let g = Point::new(
            self.gamma.apply_unchecked(x.x1()),
            self.gamma.apply_unchecked(x.x2()),
        )?;
        Ok(self.outer.apply_unchecked(&g))
    }

    /// `self` after `other`:
    /// `I1 o g1 o I2 o g2 = (I1 o I2^g1) o (g1 g2)`.
    pub fn compose(&self, other: &SemiAffineMap) -> Result<SemiAffineMap> {
        let twisted = other.outer.map_entries(&self.gamma)?;
        SemiAffineMap::new(self.outer.compose(&twisted)?, self.gamma.then(&other.gamma))
    }
}

impl From<AffineOrthoMap> for SemiAffineMap {
    fn from(outer: AffineOrthoMap) -> SemiAffineMap {
        SemiAffineMap {
            outer,
            gamma: Homomorphism::Identity,
        }
    }
}

impl PlaneMap for SemiAffineMap {
    fn field(&self) -> &Field {
        self.outer.field()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        SemiAffineMap::apply(self, x)
    }
}

impl fmt::Display for SemiAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) o ({}, {})", self.outer, self.gamma, self.gamma)
    }
}

impl fmt::Debug for SemiAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    #[test]
    fn rotation_then_translation() {
        let g = Field::prime(13).unwrap();
        let q = OrthoMatrix2::rotation(&g.zero(), &g.one()).unwrap();
        let m = AffineOrthoMap::new(q, Point::from_ints(&g, 2, 3)).unwrap();
        assert_eq!(
            m.apply(&Point::from_ints(&g, 1, 0)).unwrap(),
            Point::from_ints(&g, 2, 4)
        );
        let q = Field::rationals();
        let id = AffineOrthoMap::identity(&q);
        assert_eq!(
            id.apply(&Point::from_ints(&q, 3, 4)).unwrap(),
            Point::from_ints(&q, 3, 4)
        );
    }

    #[test]
    fn inverses() {
        let q = Field::rationals();
        let t = AffineOrthoMap::translation_by(Point::from_ints(&q, 2, 3));
        assert_eq!(
            t.invert(),
            AffineOrthoMap::translation_by(Point::from_ints(&q, -2, -3))
        );
        let r = OrthoMatrix2::rotation(&q.zero(), &q.one()).unwrap();
        let inv = AffineOrthoMap::linear_map(r).invert();
        assert_eq!(
            inv.linear(),
            &OrthoMatrix2::new(q.zero(), q.one(), q.int(-1), q.zero()).unwrap()
        );
        let j = AffineOrthoMap::new(
            OrthoMatrix2::reflection(&q.rat(3, 5), &q.rat(-4, 5)).unwrap(),
            Point::new(q.rat(1, 2), q.int(-7)).unwrap(),
        )
        .unwrap();
        let both = j.invert().compose(&j).unwrap();
        for x in sampling::probe_points(&q, 50, 1) {
            assert_eq!(both.apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn semi_affine_conjugation() {
        let q = Field::rationals();
        let (k2, _) = q.adjoin_sqrt(&q.int(2)).unwrap();
        let (k, _) = k2.adjoin_sqrt(&k2.int(-1)).unwrap();
        let r = k.generator(1).unwrap();
        let m = SemiAffineMap::new(
            AffineOrthoMap::identity(&k),
            Homomorphism::LevelConjugation(1),
        )
        .unwrap();
        let x = Point::new(r.clone(), k.one()).unwrap();
        assert_eq!(m.apply(&x).unwrap(), Point::new(-&r, k.one()).unwrap());
    }

    #[test]
    fn semi_affine_composition_matches_application() {
        let q = Field::rationals();
        let (k, _) = q.adjoin_sqrt(&q.int(-1)).unwrap();
        let i = k.generator(1).unwrap();
        let a = SemiAffineMap::new(
            AffineOrthoMap::new(
                OrthoMatrix2::rotation(&k.rat(3, 5), &k.rat(4, 5)).unwrap(),
                Point::new(i.clone(), k.one()).unwrap(),
            )
            .unwrap(),
            Homomorphism::LevelConjugation(1),
        )
        .unwrap();
        let b = SemiAffineMap::new(
            AffineOrthoMap::translation_by(Point::new(&k.int(2) * &i, k.rat(1, 3)).unwrap()),
            Homomorphism::LevelConjugation(1),
        )
        .unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.gamma(), &Homomorphism::Identity);
        for x in sampling::probe_points(&k, 40, 2) {
            assert_eq!(
                ab.apply(&x).unwrap(),
                a.apply(&b.apply(&x).unwrap()).unwrap()
            );
        }
    }
}
