use std::fmt;
use std::sync::Arc;

use super::lexer::Tok;
use super::Parser;
use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Homomorphism};
use crate::geometry::{self, Point};
use crate::maps::{AffineOrthoMap, Composed, FnMap, OrthoMatrix2, PlaneMap, SemiAffineMap};

#[derive(Clone, Debug)]
pub enum Prim {
    Translate(Elem, Elem),
    /// `[[a, -b], [b, a]]`
    Rot(Elem, Elem),
    /// `[[a, b], [b, -a]]`
    Refl(Elem, Elem),
    Hom(Homomorphism),
    Swap,
    Lambda(Elem),
    Xi,
    Eta,
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prim::Translate(a, b) => write!(f, "translate({a}, {b})"),
            Prim::Rot(a, b) => write!(f, "rot({a}, {b})"),
            Prim::Refl(a, b) => write!(f, "refl({a}, {b})"),
            Prim::Hom(h) => write!(f, "hom({h})"),
            Prim::Swap => write!(f, "swap"),
            Prim::Lambda(z) => write!(f, "lambda({z})"),
            Prim::Xi => write!(f, "xi"),
            Prim::Eta => write!(f, "eta"),
        }
    }
}

/// A composition `p1 . p2 . ... . pn`, applied right to left.
#[derive(Clone, Debug)]
pub struct MapExpr {
    field: Field,
    prims: Vec<Prim>,
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.prims.iter().map(Prim::to_string).collect();
        write!(f, "{}", parts.join(" . "))
    }
}

/// A parsed map ready to apply. Expressions built only from translations,
/// orthogonal matrices, homomorphisms and `swap` collapse to one
/// semi-affine map; anything else stays a composition.
#[derive(Clone)]
pub enum ElaboratedMap {
    SemiAffine(Box<SemiAffineMap>),
    General(Composed),
}

impl ElaboratedMap {
    pub fn semi_affine(&self) -> Option<&SemiAffineMap> {
        match self {
            ElaboratedMap::SemiAffine(m) => Some(m),
            ElaboratedMap::General(_) => None,
        }
    }
}

impl PlaneMap for ElaboratedMap {
    fn field(&self) -> &Field {
        match self {
            ElaboratedMap::SemiAffine(m) => m.outer().linear().field(),
            ElaboratedMap::General(m) => m.field(),
        }
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            ElaboratedMap::SemiAffine(m) => m.apply(x),
            ElaboratedMap::General(m) => m.apply(x),
        }
    }
}

impl Parser {
    fn pair_args(&mut self, k: &Field) -> Result<(Elem, Elem)> {
        self.expect_sym('(')?;
        let a = self.elem(k)?;
        self.expect_sym(',')?;
        let b = self.elem(k)?;
        self.expect_sym(')')?;
        Ok((a, b))
    }

    fn prim(&mut self, k: &Field) -> Result<Prim> {
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            t => {
                self.unbump(&t);
                return self.err(format!("expected a map, found {}", Self::describe(&t)));
            }
        };
        Ok(match name.as_str() {
            "translate" => {
                let (a, b) = self.pair_args(k)?;
                Prim::Translate(a, b)
            }
            "rot" => {
                let (a, b) = self.pair_args(k)?;
                Prim::Rot(a, b)
            }
            "refl" => {
                let (a, b) = self.pair_args(k)?;
                Prim::Refl(a, b)
            }
            "hom" => {
                self.expect_sym('(')?;
                let h = self.hom()?;
                self.expect_sym(')')?;
                Prim::Hom(h)
            }
            "lambda" => {
                self.expect_sym('(')?;
                let z = self.elem(k)?;
                self.expect_sym(')')?;
                Prim::Lambda(z)
            }
            "swap" => Prim::Swap,
            "xi" => Prim::Xi,
            "eta" => Prim::Eta,
            _ => return Err(Error::parse(pos, format!("unknown map {name:?}"))),
        })
    }
}

fn semi_affine(p: &Prim, k: &Field) -> Result<Option<SemiAffineMap>> {
    let outer = match p {
        Prim::Translate(a, b) => AffineOrthoMap::translation_by(Point::new(a.clone(), b.clone())?),
        Prim::Rot(a, b) => AffineOrthoMap::linear_map(OrthoMatrix2::rotation(a, b)?),
        Prim::Refl(a, b) => AffineOrthoMap::linear_map(OrthoMatrix2::reflection(a, b)?),
        Prim::Swap => AffineOrthoMap::linear_map(OrthoMatrix2::reflection(&k.zero(), &k.one())?),
        Prim::Hom(h) => {
            return SemiAffineMap::new(AffineOrthoMap::identity(k), h.clone()).map(Some)
        }
        Prim::Lambda(_) | Prim::Xi | Prim::Eta => return Ok(None),
    };
    Ok(Some(outer.into()))
}

fn general(p: &Prim, k: &Field) -> Result<Arc<dyn PlaneMap>> {
    if let Some(m) = semi_affine(p, k)? {
        return Ok(Arc::new(m));
    }
    Ok(match p {
        Prim::Lambda(z) => {
            if z.is_zero() {
                return Err(Error::ZeroScale);
            }
            let z = z.clone();
            Arc::new(FnMap::new(k, move |x: &Point| geometry::lambda_map(&z, x)))
        }
        Prim::Xi | Prim::Eta => {
            if k.imaginary_unit().is_none() {
                return Err(Error::NoImaginaryUnit(k.to_string()));
            }
            let f = if matches!(p, Prim::Xi) {
                geometry::xi
            } else {
                geometry::eta
            };
            Arc::new(FnMap::new(k, f))
        }
        _ => unreachable!("handled as semi-affine"),
    })
}

impl MapExpr {
    pub fn parse(src: &str, k: &Field) -> Result<MapExpr> {
        let mut p = Parser::new(src)?;
        let mut prims = vec![p.prim(k)?];
        while p.eat_sym('.') {
            prims.push(p.prim(k)?);
        }
        p.finish()?;
        Ok(MapExpr {
            field: k.clone(),
            prims,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prims(&self) -> &[Prim] {
        &self.prims
    }

    /// Validates every primitive (orthogonality, nonzero scale, an
    /// imaginary unit for `xi`/`eta`, homomorphism levels) and builds the
    /// map.
    pub fn elaborate(&self) -> Result<ElaboratedMap> {
        let k = &self.field;
        let mut acc: Option<SemiAffineMap> = Some(AffineOrthoMap::identity(k).into());
        for p in &self.prims {
            acc = match (acc, semi_affine(p, k)?) {
                (Some(a), Some(m)) => Some(a.compose(&m)?),
                _ => None,
            };
        }
        if let Some(m) = acc {
            return Ok(ElaboratedMap::SemiAffine(Box::new(m)));
        }
        let parts = self
            .prims
            .iter()
            .map(|p| general(p, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(ElaboratedMap::General(Composed::new(k, parts)))
    }
}
