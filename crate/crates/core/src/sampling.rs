//! Seeded test-point generation.
//!
//! Over infinite towers, universally quantified identities are checked by
//! exact evaluation at pseudorandom points. Every generator takes an
//! explicit seed; [`DEFAULT_SEED`] is what the CLI uses unless `--seed` is
//! given.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::geometry::Point;

pub const DEFAULT_SEED: u64 = 20_050_127;

/// Where a universally quantified check is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Every element / point / pair of a finite field.
    Exhaustive,
    /// `count` seeded pseudorandom probes.
    Samples { count: usize, seed: u64 },
}

impl Domain {
    pub fn samples(count: usize) -> Domain {
        Domain::Samples {
            count,
            seed: DEFAULT_SEED,
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::Exhaustive => write!(f, "exhaustive"),
            Domain::Samples { count, seed } => write!(f, "samples({count}, seed={seed})"),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=6);
    BigRational::new(num.into(), den.into())
}

/// Uniform residue over GF(p); over towers, small rational coefficients
/// with roughly a third of them zero.
pub fn random_elem<R: Rng>(k: &Field, rng: &mut R) -> Elem {
    if let Some(p) = k.modulus() {
        return k.int(rng.gen_range(0..p) as i64);
    }
    let coeffs: Vec<BigRational> = (0..1usize << k.depth())
        .map(|_| {
            if rng.gen_ratio(1, 3) {
                BigRational::from_integer(0.into())
            } else {
                random_rational(rng)
            }
        })
        .collect();
    k.from_coefficients(&coeffs)
        .expect("coefficient count matches depth")
}

pub fn random_nonzero<R: Rng>(k: &Field, rng: &mut R) -> Elem {
    loop {
        let x = random_elem(k, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random rational, embedded in `k`.
pub fn random_prime_subfield<R: Rng>(k: &Field, rng: &mut R) -> Elem {
    if let Some(p) = k.modulus() {
        return k.int(rng.gen_range(0..p) as i64);
    }
    k.from_rational(&random_rational(rng))
        .expect("nonzero denominator")
}

pub fn random_point<R: Rng>(k: &Field, rng: &mut R) -> Point {
    Point::new(random_elem(k, rng), random_elem(k, rng)).expect("same field")
}

/// A point on the unit circle `x^2 + y^2 = 1`, from the rational
/// parametrization at a random parameter `t` with `1 + t^2 != 0`.
pub fn random_unit_vector<R: Rng>(k: &Field, rng: &mut R) -> Point {
    loop {
        let t = random_elem(k, rng);
        if let Ok(u) = crate::maps::rational_unit_vector(&t) {
            return u;
        }
    }
}

pub fn all_elements(k: &Field) -> Result<Vec<Elem>> {
    let p = k
        .modulus()
        .ok_or_else(|| Error::FieldNotFinite(k.to_string()))?;
    Ok((0..p).map(|r| k.int(r as i64)).collect())
}

/// All points of a finite plane, in index order `x1 * p + x2`.
pub fn all_points(k: &Field) -> Result<Vec<Point>> {
    let elems = all_elements(k)?;
    Ok(elems
        .iter()
        .flat_map(|a| {
            elems
                .iter()
                .map(move |b| Point::new(a.clone(), b.clone()).expect("same field"))
        })
        .collect())
}

/// Structured probes (0, 1, -1, the basis monomials, their pairwise sums
/// and products) followed by random elements, `count` in total unless the
/// structured part alone is larger.
pub fn probe_elements(k: &Field, count: usize, seed: u64) -> Vec<Elem> {
    if k.is_finite() {
        if let Ok(all) = all_elements(k) {
            if all.len() <= count {
                return all;
            }
        }
    }
    let mut out: Vec<Elem> = vec![k.zero(), k.one(), k.int(-1)];
    let basis: Vec<Elem> = if k.is_finite() {
        vec![k.one()]
    } else {
        (0..1usize << k.depth())
            .map(|mask| {
                (0..k.depth())
                    .filter(|j| mask & (1 << j) != 0)
                    .fold(k.one(), |acc, j| {
                        &acc * &k.generator(j + 1).expect("level within depth")
                    })
            })
            .collect()
    };
    for (a, x) in basis.iter().enumerate() {
        out.push(x.clone());
        for y in &basis[a..] {
            out.push(x + y);
            out.push(x * y);
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|x| seen.insert(x.clone()));
    let mut rng = rng(seed);
    while out.len() < count {
        let x = random_elem(k, &mut rng);
        if seen.insert(x.clone()) {
            out.push(x);
        }
    }
    out
}

/// The frame points, `(i, i)` when `i` exists, axis points over the probe
/// elements, then random points.
pub fn probe_points(k: &Field, count: usize, seed: u64) -> Vec<Point> {
    let mut out = vec![
        Point::new(k.zero(), k.zero()).unwrap(),
        Point::new(k.one(), k.zero()).unwrap(),
        Point::new(k.zero(), k.one()).unwrap(),
        Point::new(k.one(), k.one()).unwrap(),
    ];
    if let Some(i) = k.imaginary_unit() {
        out.push(Point::new(i.clone(), i).unwrap());
    }
    for x in probe_elements(k, 0, seed) {
        out.push(Point::new(x.clone(), k.zero()).unwrap());
        out.push(Point::new(k.zero(), x).unwrap());
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|x| seen.insert(x.clone()));
    let mut rng = rng(seed ^ 0x9e37_79b9);
    while out.len() < count {
        let p = random_point(k, &mut rng);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// Pairs `(X, X + u)` with `u` on the unit circle.
pub fn unit_pairs(k: &Field, count: usize, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let x = random_point(k, &mut rng);
            let u = random_unit_vector(k, &mut rng);
            let y = &x + &u;
            (x, y)
        })
        .collect()
}

/// Pairs whose squared distance lies in the prime subfield: `Y = X + Q v`
/// with `v` a prime-subfield vector and `Q` a random rotation.
pub fn prime_phi_pairs(k: &Field, count: usize, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let x = random_point(k, &mut rng);
            let u = random_unit_vector(k, &mut rng);
            let (c, s) = (u.x1().clone(), u.x2().clone());
            let v1 = random_prime_subfield(k, &mut rng);
            let v2 = random_prime_subfield(k, &mut rng);
            let w = Point::new(&(&c * &v1) - &(&s * &v2), &(&s * &v1) + &(&c * &v2)).unwrap();
            let y = &x + &w;
            (x, y)
        })
        .collect()
}
