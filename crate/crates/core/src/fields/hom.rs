//! Field homomorphisms of quadratic towers: the identity and products of
//! level conjugations (`sqrt(d_L) -> -sqrt(d_L)` at level `L`).

use std::collections::BTreeSet;
use std::fmt;

use super::{Elem, Field, FieldKind, Value};
use crate::error::{Error, Result};
use crate::sampling::{self, Domain};

#[derive(Clone, Debug)]
pub enum Homomorphism {
    Identity,
    /// Negates the coefficient of the level-`L` generator (levels from 1).
    LevelConjugation(usize),
    /// Applied first to last.
    Composite(Vec<Homomorphism>),
}

impl Homomorphism {
    /// Level conjugations commute and are involutions, so every catalog map
    /// is determined by the set of levels it conjugates an odd number of
    /// times.
    pub fn conjugated_levels(&self) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        self.collect_levels(&mut set);
        set
    }

    fn collect_levels(&self, set: &mut BTreeSet<usize>) {
        match self {
            Homomorphism::Identity => {}
            Homomorphism::LevelConjugation(l) => {
                if !set.remove(l) {
                    set.insert(*l);
                }
            }
            Homomorphism::Composite(parts) => {
                for h in parts {
                    h.collect_levels(set);
                }
            }
        }
    }

    pub fn from_levels(levels: &BTreeSet<usize>) -> Homomorphism {
        match levels.len() {
            0 => Homomorphism::Identity,
            1 => Homomorphism::LevelConjugation(*levels.iter().next().unwrap()),
            _ => Homomorphism::Composite(
                levels
                    .iter()
                    .map(|&l| Homomorphism::LevelConjugation(l))
                    .collect(),
            ),
        }
    }

    pub fn normalized(&self) -> Homomorphism {
        Homomorphism::from_levels(&self.conjugated_levels())
    }

    /// `self` after `other`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism::Composite(vec![self.clone(), other.clone()]).normalized()
    }

    /// Checks that every level exists and that each conjugation fixes the
    /// radicands above it, which is what makes the coefficientwise map a
    /// field homomorphism.
    pub fn validate(&self, k: &Field) -> Result<()> {
        let levels = self.conjugated_levels();
        let depth = k.depth();
        if let Some(&bad) = levels.iter().find(|&&l| l == 0 || l > depth) {
            return Err(Error::InvalidLevel { level: bad, depth });
        }
        for (idx, d) in k.radicands().iter().enumerate() {
            let level = idx + 1;
            let below: BTreeSet<usize> = levels.iter().copied().filter(|&l| l < level).collect();
            if below.is_empty() {
                continue;
            }
            let moved = apply_value(d.field(), d.value(), &below);
            if &moved != d.value() {
                return Err(Error::NonLiftableConjugation {
                    level: *below.iter().next_back().unwrap(),
                    moved: level,
                });
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        self.validate(x.field())?;
        Ok(self.apply_unchecked(x))
    }

    /// Skips validation; callers must have validated against `x`'s field.
    pub(crate) fn apply_unchecked(&self, x: &Elem) -> Elem {
        let levels = self.conjugated_levels();
        if levels.is_empty() {
            return x.clone();
        }
        x.field().wrap(apply_value(x.field(), x.value(), &levels))
    }

    /// Every valid homomorphism of this form on `k`, identity first.
    pub fn catalog(k: &Field) -> Vec<Homomorphism> {
        let depth = k.depth();
        let mut out: Vec<(usize, Homomorphism)> = (0u32..(1 << depth))
            .map(|mask| {
                let levels: BTreeSet<usize> =
                    (1..=depth).filter(|l| mask & (1 << (l - 1)) != 0).collect();
                (levels.len(), Homomorphism::from_levels(&levels))
            })
            .filter(|(_, h)| h.validate(k).is_ok())
            .collect();
        out.sort_by_key(|a| a.0);
        out.into_iter().map(|(_, h)| h).collect()
    }
}

fn apply_value(k: &Field, v: &Value, levels: &BTreeSet<usize>) -> Value {
    match (k.kind(), v) {
        (FieldKind::Quad { base, depth, .. }, Value::Pair(a, b)) => {
            let a = apply_value(base, a, levels);
            let b = apply_value(base, b, levels);
            let b = if levels.contains(depth) {
                base.neg_v(&b)
            } else {
                b
            };
            Value::Pair(Box::new(a), Box::new(b))
        }
        _ => v.clone(),
    }
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.conjugated_levels() == other.conjugated_levels()
    }
}

impl Eq for Homomorphism {}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels = self.conjugated_levels();
        if levels.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = levels.iter().map(|l| format!("conj@{l}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Unital,
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomViolation {
    pub kind: ViolationKind,
    pub x: Elem,
    pub y: Elem,
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::Unital => write!(f, "h(1) != 1"),
            ViolationKind::Additive => write!(
                f,
                "h({} + {}) != h({}) + h({})",
                self.x, self.y, self.x, self.y
            ),
            ViolationKind::Multiplicative => {
                write!(
                    f,
                    "h({} * {}) != h({}) * h({})",
                    self.x, self.y, self.x, self.y
                )
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct HomVerdict {
    pub pairs_checked: usize,
    pub violation: Option<HomViolation>,
}

impl HomVerdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Tests `h(1) = 1`, additivity and multiplicativity of an arbitrary map
/// `k -> k`: on all pairs for [`Domain::Exhaustive`] (finite fields), or on
/// `count` seeded pseudorandom pairs. Stops at the first violation.
pub fn hom_check<F>(map: F, k: &Field, domain: Domain) -> Result<HomVerdict>
where
    F: Fn(&Elem) -> Result<Elem>,
{
    let one = k.one();
    if map(&one)? != one {
        return Ok(HomVerdict {
            pairs_checked: 0,
            violation: Some(HomViolation {
                kind: ViolationKind::Unital,
                x: one.clone(),
                y: one,
            }),
        });
    }
    let pairs: Vec<(Elem, Elem)> = match domain {
        Domain::Exhaustive => {
            let all = sampling::all_elements(k)?;
            all.iter()
                .flat_map(|x| all.iter().map(move |y| (x.clone(), y.clone())))
                .collect()
        }
        Domain::Samples { count, seed } => {
            let mut rng = sampling::rng(seed);
            (0..count)
                .map(|_| {
                    (
                        sampling::random_elem(k, &mut rng),
                        sampling::random_elem(k, &mut rng),
                    )
                })
                .collect()
        }
    };
    let mut checked = 0;
    for (x, y) in pairs {
        checked += 1;
        let (hx, hy) = (map(&x)?, map(&y)?);
        if map(&x.checked_add(&y)?)? != hx.checked_add(&hy)? {
            return Ok(HomVerdict {
                pairs_checked: checked,
                violation: Some(HomViolation {
                    kind: ViolationKind::Additive,
                    x,
                    y,
                }),
            });
        }
        if map(&x.checked_mul(&y)?)? != hx.checked_mul(&hy)? {
            return Ok(HomVerdict {
                pairs_checked: checked,
                violation: Some(HomViolation {
                    kind: ViolationKind::Multiplicative,
                    x,
                    y,
                }),
            });
        }
    }
    Ok(HomVerdict {
        pairs_checked: checked,
        violation: None,
    })
}
