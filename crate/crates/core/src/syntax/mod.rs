//! The text input language: field descriptors, elements, points, map
//! expressions and map-table files.
//!
//! ```text
//! field   := 'Q' | 'GF(' int ')' | field '[sqrt ' elem ']' | field '[i]'
//! elem    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | int | 'r'N | 'i' | '(' elem ')'
//! point   := '(' elem ',' elem ')'
//! map     := prim ('.' prim)*            A . B applies B first
//! prim    := 'translate(' elem ',' elem ')' | 'rot(' elem ',' elem ')'
//!          | 'refl(' elem ',' elem ')' | 'hom(' hom ')' | 'swap'
//!          | 'lambda(' elem ')' | 'xi' | 'eta'
//! hom     := 'id' | 'conj@' int (',' 'conj@' int)*
//! table   := one line per point: elem ',' elem '->' elem ',' elem
//! ```
//!
//! `rN` is the generator adjoined at level N; `i` names the generator of a
//! `[sqrt -1]` level, and in GF(p) the canonical square root of -1.

mod lexer;
mod map_expr;

pub use map_expr::{ElaboratedMap, MapExpr, Prim};

use lexer::{lex, Tok, Token};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Homomorphism};
use crate::geometry::Point;
use crate::maps::MapTable;

pub(crate) struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    /// Steps back over `t`, which was just taken by [`Parser::bump`].
    fn unbump(&mut self, t: &Tok) {
        if t != &Tok::End {
            self.at -= 1;
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.pos(), msg))
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Sym(c) => format!("{c:?}"),
            Tok::Arrow => "'->'".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!(
                "expected {c:?}, found {}",
                Self::describe(self.peek())
            ))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == name => {
                self.bump();
                Ok(())
            }
            t => {
                let d = Self::describe(t);
                self.err(format!("expected {name:?}, found {d}"))
            }
        }
    }

    fn int(&mut self) -> Result<BigIntLit> {
        match self.peek().clone() {
            Tok::Num(n) => {
                let pos = self.pos();
                self.bump();
                Ok(BigIntLit { n, pos })
            }
            t => self.err(format!("expected a number, found {}", Self::describe(&t))),
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            t => {
                let d = Self::describe(t);
                self.err(format!("unexpected {d} after the end"))
            }
        }
    }

    pub(crate) fn field(&mut self) -> Result<Field> {
        let mut k = match self.bump() {
            Tok::Ident(s) if s == "Q" => Field::rationals(),
            Tok::Ident(s) if s == "GF" => {
                self.expect_sym('(')?;
                let lit = self.int()?;
                self.expect_sym(')')?;
                let p = u64::try_from(&lit.n)
                    .map_err(|_| Error::InvalidField(format!("GF({})", lit.n)))?;
                Field::prime(p)?
            }
            t => {
                self.unbump(&t);
                return self.err(format!("expected Q or GF(p), found {}", Self::describe(&t)));
            }
        };
        while self.eat_sym('[') {
            let d = match self.peek() {
                Tok::Ident(s) if s == "i" => {
                    self.bump();
                    k.int(-1)
                }
                Tok::Ident(s) if s == "sqrt" => {
                    self.bump();
                    self.elem(&k)?
                }
                t => {
                    let d = Self::describe(t);
                    return self.err(format!("expected sqrt or i, found {d}"));
                }
            };
            self.expect_sym(']')?;
            k = k.adjoin_sqrt(&d)?.0;
        }
        Ok(k)
    }

    pub(crate) fn elem(&mut self, k: &Field) -> Result<Elem> {
        let mut acc = self.term(k)?;
        loop {
            if self.eat_sym('+') {
                acc = &acc + &self.term(k)?;
            } else if self.eat_sym('-') {
                acc = &acc - &self.term(k)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, k: &Field) -> Result<Elem> {
        let mut acc = self.factor(k)?;
        loop {
            if self.eat_sym('*') {
                acc = &acc * &self.factor(k)?;
            } else if self.peek() == &Tok::Sym('/') {
                let pos = self.pos();
                self.bump();
                let d = self.factor(k)?;
                acc = acc
                    .checked_div(&d)
                    .map_err(|_| Error::parse(pos, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self, k: &Field) -> Result<Elem> {
        if self.eat_sym('-') {
            return Ok(-&self.factor(k)?);
        }
        if self.eat_sym('(') {
            let e = self.elem(k)?;
            self.expect_sym(')')?;
            return Ok(e);
        }
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(k.from_bigint(&n)),
            Tok::Ident(name) => generator(k, &name)
                .ok_or_else(|| Error::parse(pos, format!("unknown name {name:?} in {k}"))),
            t => {
                self.unbump(&t);
                self.err(format!("expected an element, found {}", Self::describe(&t)))
            }
        }
    }

    pub(crate) fn point(&mut self, k: &Field) -> Result<Point> {
        self.expect_sym('(')?;
        let a = self.elem(k)?;
        self.expect_sym(',')?;
        let b = self.elem(k)?;
        self.expect_sym(')')?;
        Point::new(a, b)
    }

    pub(crate) fn hom(&mut self) -> Result<Homomorphism> {
        if let Tok::Ident(s) = self.peek() {
            if s == "id" {
                self.bump();
                return Ok(Homomorphism::Identity);
            }
        }
        let mut levels = Vec::new();
        loop {
            self.expect_ident("conj")?;
            self.expect_sym('@')?;
            let lit = self.int()?;
            let l =
                usize::try_from(&lit.n).map_err(|_| Error::parse(lit.pos, "level out of range"))?;
            levels.push(Homomorphism::LevelConjugation(l));
            if !self.eat_sym(',') {
                break;
            }
        }
        Ok(if levels.len() == 1 {
            levels.pop().unwrap()
        } else {
            Homomorphism::Composite(levels)
        })
    }
}

struct BigIntLit {
    n: num_bigint::BigInt,
    pos: usize,
}

fn generator(k: &Field, name: &str) -> Option<Elem> {
    if k.is_finite() {
        return (name == "i").then(|| k.imaginary_unit()).flatten();
    }
    let names = k.generator_names();
    if let Some(j) = names.iter().position(|n| n == name) {
        return k.generator(j + 1).ok();
    }
    // `rN` also addresses a level that prints as `i`.
    let level: usize = name.strip_prefix('r')?.parse().ok()?;
    k.generator(level).ok()
}

pub fn parse_field(s: &str) -> Result<Field> {
    let mut p = Parser::new(s)?;
    let k = p.field()?;
    p.finish()?;
    Ok(k)
}

pub fn parse_elem(s: &str, k: &Field) -> Result<Elem> {
    let mut p = Parser::new(s)?;
    let e = p.elem(k)?;
    p.finish()?;
    Ok(e)
}

pub fn parse_point(s: &str, k: &Field) -> Result<Point> {
    let mut p = Parser::new(s)?;
    let x = p.point(k)?;
    p.finish()?;
    Ok(x)
}

pub fn parse_map(s: &str, k: &Field) -> Result<MapExpr> {
    MapExpr::parse(s, k)
}

/// Reads `x1,x2 -> y1,y2` lines; blank lines and `#` comments are skipped.
/// Every point must appear exactly once.
pub fn parse_map_table(text: &str, k: &Field) -> Result<MapTable> {
    let mut pairs = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            let parsed = (|| -> Result<(Point, Point)> {
                let mut p = Parser::new(body)?;
                let a = p.elem(k)?;
                p.expect_sym(',')?;
                let b = p.elem(k)?;
                if p.bump() != Tok::Arrow {
                    p.at -= 1;
                    return p.err("expected '->'");
                }
                let c = p.elem(k)?;
                p.expect_sym(',')?;
                let d = p.elem(k)?;
                p.finish()?;
                Ok((Point::new(a, b)?, Point::new(c, d)?))
            })();
            match parsed {
                Ok(pair) => pairs.push(pair),
                Err(Error::Parse { pos, msg }) => {
                    return Err(Error::Parse {
                        pos: offset + pos,
                        msg,
                    })
                }
                Err(e) => return Err(e),
            }
        }
        offset += line.len();
    }
    MapTable::from_pairs(k, &pairs)
}

/// The inverse of [`parse_map_table`].
pub fn format_map_table(t: &MapTable) -> String {
    let mut out = String::new();
    for (x, y) in t.pairs() {
        out.push_str(&format!("{},{} -> {},{}\n", x.x1(), x.x2(), y.x1(), y.x2()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::AffineOrthoMap;

    #[test]
    fn fields() {
        let k = parse_field("Q[sqrt 2][sqrt -1]").unwrap();
        assert_eq!(k.to_string(), "Q[sqrt 2][i]");
        assert_eq!(parse_field("Q[sqrt 2][i]").unwrap(), k);
        assert_eq!(parse_field("GF(13)").unwrap(), Field::prime(13).unwrap());
        assert!(matches!(parse_field("GF(5)"), Err(Error::InvalidField(_))));
        assert!(matches!(
            parse_field("Q[sqrt 9/4]"),
            Err(Error::AlreadySquare { .. })
        ));
        assert!(matches!(
            parse_field("Q[sqrt 2"),
            Err(Error::Parse { pos: 8, .. })
        ));
        assert!(matches!(parse_field("R"), Err(Error::Parse { pos: 0, .. })));
        let nested = parse_field("Q[sqrt 2][sqrt 1 + r1]").unwrap();
        assert_eq!(nested.depth(), 2);
    }

    #[test]
    fn elements_round_trip() {
        let k = parse_field("Q[sqrt 2][i]").unwrap();
        let x = parse_elem("1/2 + 3/2*r1 - 2*i", &k).unwrap();
        assert_eq!(x.to_string(), "1/2 + 3/2*r1 - 2*i");
        assert_eq!(parse_elem(&x.to_string(), &k).unwrap(), x);
        assert_eq!(parse_elem("r2", &k).unwrap(), parse_elem("i", &k).unwrap());
        assert_eq!(parse_elem("(1 + r1)*(1 - r1)", &k).unwrap(), k.int(-1));
        assert!(matches!(
            parse_elem("1/0", &k),
            Err(Error::Parse { pos: 1, .. })
        ));
        assert!(matches!(parse_elem("r3", &k), Err(Error::Parse { .. })));
        let g = Field::prime(13).unwrap();
        assert_eq!(parse_elem("i", &g).unwrap(), g.int(5));
        assert_eq!(parse_elem("-1", &g).unwrap(), g.int(12));
    }

    #[test]
    fn points() {
        let q = Field::rationals();
        let p = parse_point("(7/3, 22/5)", &q).unwrap();
        assert_eq!(p, Point::new(q.rat(7, 3), q.rat(22, 5)).unwrap());
        assert!(parse_point("(1, 2", &q).is_err());
        assert!(parse_point("(1, 2) x", &q).is_err());
    }

    #[test]
    fn tables() {
        let g = Field::prime(13).unwrap();
        let t = MapTable::tabulate(&AffineOrthoMap::translation_by(Point::from_ints(&g, 1, 2)))
            .unwrap();
        let text = format_map_table(&t);
        assert_eq!(text.lines().next().unwrap(), "0,0 -> 1,2");
        let back = parse_map_table(&format!("# header\n\n{text}"), &g).unwrap();
        assert_eq!(back, t);
        let broken = text.replacen("0,0 -> 1,2", "0,0 => 1,2", 1);
        assert!(matches!(
            parse_map_table(&broken, &g),
            Err(Error::Parse { .. })
        ));
        let short: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(parse_map_table(&short, &g).is_err());
    }
}
