//! Unit-distance chains: point sequences with `phi = 1` between neighbours.
//!
//! [`build_real_chain`] connects two points of a real plane, either by unit
//! steps plus a two-circle closure (adjoining one square root when needed)
//! or with rational points only. [`build_imaginary_chain`] walks from a
//! point with a nonzero imaginary part to `(i, i)` along edges whose
//! imaginary pairing `psi` is nonzero.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::geometry::{self, Point};

/// An ordered list of at least two points of one plane.
///
/// Construction does not check the edges; [`verify_chain`] does, and both
/// builders run it before returning.
#[derive(Clone, PartialEq, Eq)]
pub struct Chain {
    field: Field,
    points: Vec<Point>,
}

impl Chain {
    pub fn new(points: Vec<Point>) -> Result<Chain> {
        if points.len() < 2 {
            return Err(Error::BrokenChain {
                edge: 0,
                phi: format!("a chain needs two points, got {}", points.len()),
            });
        }
        let field = points[0].field().clone();
        for p in &points[1..] {
            points[0].same_field(p)?;
        }
        Ok(Chain { field, points })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn edge_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" -> "))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{}]({self})", self.field)
    }
}

/// `phi` and `psi` of one edge. Edges are numbered from 1: edge `k` joins
/// points `k - 1` and `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCertificate {
    pub edge: usize,
    pub phi_value: Elem,
    /// `None` when the field has no real/imaginary split (prime fields).
    pub psi_value: Option<Elem>,
    pub psi_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainViolation {
    PhiNotOne { edge: usize, phi: Elem },
    PsiZero { edge: usize },
    PsiUndefined { edge: usize },
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainViolation::PhiNotOne { edge, phi } => write!(f, "edge {edge}: phi = {phi}"),
            ChainViolation::PsiZero { edge } => write!(f, "edge {edge}: psi = 0"),
            ChainViolation::PsiUndefined { edge } => write!(f, "edge {edge}: psi undefined"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub edges: Vec<EdgeCertificate>,
    pub violations: Vec<ChainViolation>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn edge_psi(x: &Point, y: &Point) -> Option<Elem> {
    let k = x.field();
    if k.has_imaginary_top() {
        geometry::psi(x, y).ok()
    } else if k.ensure_real().is_ok() {
        // No imaginary parts at all.
        Some(k.zero())
    } else {
        None
    }
}

/// Recomputes `phi` (and `psi`) of every edge.
pub fn verify_chain(c: &Chain, require_psi: bool) -> ChainReport {
    let mut edges = Vec::with_capacity(c.edge_count());
    let mut violations = Vec::new();
    for (j, w) in c.points.windows(2).enumerate() {
        let edge = j + 1;
        let phi_value = geometry::phi_unchecked(&w[0], &w[1]);
        let psi_value = edge_psi(&w[0], &w[1]);
        let psi_nonzero = psi_value.as_ref().is_some_and(|v| !v.is_zero());
        if !phi_value.is_one() {
            violations.push(ChainViolation::PhiNotOne {
                edge,
                phi: phi_value.clone(),
            });
        }
        if require_psi {
            match &psi_value {
                None => violations.push(ChainViolation::PsiUndefined { edge }),
                Some(_) if !psi_nonzero => violations.push(ChainViolation::PsiZero { edge }),
                _ => {}
            }
        }
        edges.push(EdgeCertificate {
            edge,
            phi_value,
            psi_value,
            psi_nonzero,
        });
    }
    ChainReport { edges, violations }
}

fn ensure_unit_edges(c: &Chain) -> Result<()> {
    match verify_chain(c, false).violations.first() {
        Some(ChainViolation::PhiNotOne { edge, phi }) => Err(Error::BrokenChain {
            edge: *edge,
            phi: phi.to_string(),
        }),
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMode {
    /// Unit steps, then a two-circle closure; may adjoin one square root.
    AutoExtend,
    /// Rational points only; needs rational endpoints.
    RationalOnly,
}

/// Limits for [`ChainMode::RationalOnly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalBudget {
    /// Largest common denominator of `T - S` that will be attempted.
    pub max_denominator: u64,
    pub max_steps: usize,
}

impl Default for RationalBudget {
    fn default() -> Self {
        RationalBudget {
            max_denominator: 1_000_000_000_000,
            max_steps: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RealChain {
    /// Lives in the input field, or in an extension of it for
    /// [`ChainMode::AutoExtend`].
    pub chain: Chain,
    /// `ceil(sqrt(phi(S, T)))`, a lower bound on the number of edges.
    pub euclidean_ceil: u64,
    /// Upper bound on the number of edges, computed before the walk.
    pub step_bound: u64,
}

/// A unit-distance chain from `s` to `t` in a real plane.
///
/// For `s = t` the chain is the detour `s, s + (1, 0), s`.
pub fn build_real_chain(
    s: &Point,
    t: &Point,
    mode: ChainMode,
    budget: RationalBudget,
) -> Result<RealChain> {
    s.same_field(t)?;
    s.field().ensure_real()?;
    let k = s.field();
    let euclidean_ceil = ceil_sqrt(&geometry::phi_unchecked(s, t))?;
    if s == t {
        let chain = Chain::new(vec![s.clone(), s + &Point::from_ints(k, 1, 0), s.clone()])?;
        return Ok(RealChain {
            chain,
            euclidean_ceil: 0,
            step_bound: 2,
        });
    }
    let out = match mode {
        ChainMode::AutoExtend => auto_extend(s, t, euclidean_ceil)?,
        ChainMode::RationalOnly => rational_only(s, t, euclidean_ceil, budget)?,
    };
    ensure_unit_edges(&out.chain)?;
    Ok(out)
}

/// Smallest integer `n >= 0` with `n^2 >= x`, for `x >= 0` in a real tower.
fn ceil_sqrt(x: &Elem) -> Result<u64> {
    let k = x.field();
    let mut lo = 0u64;
    let mut hi = 1u64;
    while k.from_bigint(&BigInt::from(hi).pow(2)).cmp_real(x)? == Ordering::Less {
        lo = hi;
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if k.from_bigint(&BigInt::from(mid).pow(2)).cmp_real(x)? == Ordering::Less {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn auto_extend(s: &Point, t: &Point, euclidean_ceil: u64) -> Result<RealChain> {
    let k = s.field().clone();
    let four = k.int(4);
    let mut pts = vec![s.clone()];
    let mut c = s.clone();
    loop {
        let phi = geometry::phi_unchecked(&c, t);
        if phi.cmp_real(&four)? != Ordering::Greater {
            break;
        }
        // Step along the longer coordinate of T - C; that coordinate exceeds
        // sqrt(2) in size, so phi drops by more than 1 per step.
        let d = t - &c;
        let (a1, a2) = (abs(d.x1())?, abs(d.x2())?);
        let step = if a1.cmp_real(&a2)? != Ordering::Less {
            Point::new(unit_sign(d.x1())?, k.zero())?
        } else {
            Point::new(k.zero(), unit_sign(d.x2())?)?
        };
        c = &c + &step;
        pts.push(c.clone());
    }
    let phi = geometry::phi_unchecked(&c, t);
    let steps = pts.len() as u64 - 1;
    if phi.is_one() {
        pts.push(t.clone());
        return Ok(RealChain {
            chain: Chain::new(pts)?,
            euclidean_ceil,
            step_bound: steps + 1,
        });
    }
    // Two-circle closure: P = M + s * (-d2, d1) with M the midpoint and
    // s^2 = (4 - phi) / (4 phi), so that phi(C, P) = phi(P, T) = 1.
    let s2 = (&four - &phi).checked_div(&(&four * &phi))?;
    let (ext, root) = k.sqrt_or_adjoin(&s2)?;
    let lift = |p: &Point| -> Result<Point> { Point::new(ext.embed(p.x1())?, ext.embed(p.x2())?) };
    let (c, t) = (lift(&c)?, lift(t)?);
    let d = &t - &c;
    let half = ext.rat(1, 2);
    let m = (&c + &t).scale(&half);
    let perp = Point::new(-d.x2(), d.x1().clone())?;
    let p = &m + &perp.scale(&root);
    let mut lifted = pts.iter().map(lift).collect::<Result<Vec<_>>>()?;
    lifted.push(p);
    lifted.push(t);
    Ok(RealChain {
        chain: Chain::new(lifted)?,
        euclidean_ceil,
        step_bound: steps + 2,
    })
}

fn abs(x: &Elem) -> Result<Elem> {
    Ok(if x.sign()? == Ordering::Less {
        -x
    } else {
        x.clone()
    })
}

fn unit_sign(x: &Elem) -> Result<Elem> {
    let k = x.field();
    Ok(match x.sign()? {
        Ordering::Less => k.int(-1),
        Ordering::Equal => k.zero(),
        Ordering::Greater => k.one(),
    })
}

/// The rational points of the unit circle are `(a/c, b/c)` with `c` a
/// product of primes `= 1 (mod 4)`; sums of them keep that property, so the
/// common denominator of `T - S` must have it too. Conversely such a
/// denominator `m` is the hypotenuse of a primitive triple `(a, b, m)`, and
/// `(a/m, b/m)`, `(b/m, a/m)` span `(Z/m)^2` because `a^2 - b^2` is a unit
/// mod `m`. The walk takes those two steps the right number of times and
/// finishes with axis steps.
fn rational_only(
    s: &Point,
    t: &Point,
    euclidean_ceil: u64,
    budget: RationalBudget,
) -> Result<RealChain> {
    let k = s.field().clone();
    let coords = |p: &Point| -> Result<(BigRational, BigRational)> {
        match (p.x1().as_rational(), p.x2().as_rational()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::RationalChainImpossible(format!(
                "{p} does not have rational coordinates"
            ))),
        }
    };
    let (s1, s2) = coords(s)?;
    let (t1, t2) = coords(t)?;
    let (d1, d2) = (&t1 - &s1, &t2 - &s2);
    let m_big = d1.denom().lcm(d2.denom());
    if let Some(bad) = bad_prime(&m_big, budget)? {
        return Err(Error::RationalChainImpossible(format!(
            "common denominator {m_big} of T - S has prime factor {bad}; rational unit \
             steps only produce denominators built from primes = 1 (mod 4)"
        )));
    }
    let m = m_big.to_i128().expect("checked against budget");

    let mut steps: Vec<(BigRational, BigRational, u64)> = Vec::new();
    let (mut r1, mut r2) = (d1.clone(), d2.clone());
    if m > 1 {
        let (a, b) = primitive_triple(m);
        // Solve x (a, b) + y (b, a) = m D (mod m).
        let big_x = (d1.numer() * (&m_big / d1.denom()))
            .mod_floor(&m_big)
            .to_i128()
            .unwrap();
        let big_y = (d2.numer() * (&m_big / d2.denom()))
            .mod_floor(&m_big)
            .to_i128()
            .unwrap();
        let det = (a * a - b * b).rem_euclid(m);
        let inv = mod_inverse(det, m);
        let centre = |v: i128| {
            let v = v.rem_euclid(m);
            if v > m / 2 {
                v - m
            } else {
                v
            }
        };
        let x = centre(mul_mod(inv, (a * big_x - b * big_y).rem_euclid(m), m));
        let y = centre(mul_mod(inv, (a * big_y - b * big_x).rem_euclid(m), m));
        let frac = |n: i128| BigRational::new(BigInt::from(n), m_big.clone());
        for (count, (ux, uy)) in [(x, (a, b)), (y, (b, a))] {
            if count == 0 {
                continue;
            }
            let sg = count.signum();
            let (vx, vy) = (frac(sg * ux), frac(sg * uy));
            r1 -= &vx * BigRational::from_integer(BigInt::from(count.abs()));
            r2 -= &vy * BigRational::from_integer(BigInt::from(count.abs()));
            steps.push((vx, vy, count.unsigned_abs() as u64));
        }
    }
    debug_assert!(r1.is_integer() && r2.is_integer());
    let unit = |v: &BigRational| {
        BigRational::from_integer(if v.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        })
    };
    let zero = BigRational::zero();
    if !r1.is_zero() {
        steps.push((
            unit(&r1),
            zero.clone(),
            r1.abs().to_integer().to_u64().unwrap_or(u64::MAX),
        ));
    }
    if !r2.is_zero() {
        steps.push((
            zero.clone(),
            unit(&r2),
            r2.abs().to_integer().to_u64().unwrap_or(u64::MAX),
        ));
    }
    let step_bound: u64 = steps
        .iter()
        .map(|s| s.2)
        .fold(0u64, |a, b| a.saturating_add(b));
    if step_bound as u128 > budget.max_steps as u128 {
        return Err(Error::SearchExhausted(format!(
            "rational walk needs {step_bound} steps, budget is {}",
            budget.max_steps
        )));
    }

    // Interleave the step kinds, always taking the one that brings the walk
    // closest to T, so intermediate points stay near the segment.
    let mut remaining: Vec<u64> = steps.iter().map(|s| s.2).collect();
    let mut cur = (s1, s2);
    let mut pts = vec![s.clone()];
    while remaining.iter().any(|&n| n > 0) {
        let best = (0..steps.len())
            .filter(|&j| remaining[j] > 0)
            .min_by_key(|&j| {
                let nx = &cur.0 + &steps[j].0;
                let ny = &cur.1 + &steps[j].1;
                let (ex, ey) = (&t1 - nx, &t2 - ny);
                &ex * &ex + &ey * &ey
            })
            .expect("some step remains");
        remaining[best] -= 1;
        cur = (&cur.0 + &steps[best].0, &cur.1 + &steps[best].1);
        pts.push(Point::new(
            k.from_rational(&cur.0)?,
            k.from_rational(&cur.1)?,
        )?);
    }
    Ok(RealChain {
        chain: Chain::new(pts)?,
        euclidean_ceil,
        step_bound,
    })
}

/// First prime factor of `m` that rules out a rational walk, if any.
fn bad_prime(m: &BigInt, budget: RationalBudget) -> Result<Option<u64>> {
    let Some(mut n) = m.to_u64().filter(|&v| v <= budget.max_denominator) else {
        return Err(Error::SearchExhausted(format!(
            "common denominator {m} exceeds the budget {}",
            budget.max_denominator
        )));
    };
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            if p % 4 != 1 {
                return Ok(Some(p));
            }
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    Ok((n > 1 && n % 4 != 1).then_some(n))
}

/// `(a, b)` with `a^2 + b^2 = m^2`, `gcd(a, b) = 1`, for `m > 1` whose
/// prime factors are all `= 1 (mod 4)`.
fn primitive_triple(m: i128) -> (i128, i128) {
    let mut k = 1i128;
    while 2 * k * k < m {
        let rest = m - k * k;
        let n = (rest as f64).sqrt().round() as i128;
        for n in [n - 1, n, n + 1] {
            if n > k && n * n == rest && n.gcd(&k) == 1 && (n + k) % 2 == 1 {
                return (n * n - k * k, 2 * n * k);
            }
        }
        k += 1;
    }
    unreachable!("{m} is a sum of two coprime squares")
}

fn mul_mod(a: i128, b: i128, m: i128) -> i128 {
    // Operands stay below 10^12, so the product fits.
    (a * b).rem_euclid(m)
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let g = a.extended_gcd(&m);
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m)
}

/// Result of [`build_imaginary_chain`].
#[derive(Clone, Debug)]
pub struct ImaginaryChain {
    pub chain: Chain,
    pub certificates: Vec<EdgeCertificate>,
    /// The input had zero first imaginary part; the construction ran on the
    /// swapped point.
    pub swapped: bool,
}

/// The chain `X1 = X, X2, X3, ..., (i, i)` for `X = (a1 + b1 i, a2 + b2 i)`:
///
/// * `X2 = (a1 + s1 + b1 i, a2)` with `s1 = sqrt(1 + b2^2)`,
/// * `X3 = S + (i, 0)` with `S = (a1 + s1, a2 + s2)`, `s2 = sqrt(1 + (b1 - 1)^2)`,
/// * a real unit chain from `S` to `(sqrt 2, 0)`, shifted by `(i, 0)`,
/// * `(i, i)`.
///
/// `psi` along the edges is `b1^2`, `b1`, then `1`. Roots are adjoined to
/// the real subfield on demand in the order `s1`, `s2`, `sqrt 2`, closure.
/// With `b1 = 0` the coordinates are swapped first.
pub fn build_imaginary_chain(x: &Point) -> Result<ImaginaryChain> {
    let k = x.field();
    let (a1, b1) = x.x1().re_im()?;
    let (a2, b2) = x.x2().re_im()?;
    if !b1.is_zero() {
        return imaginary_chain_primary(k, [a1, b1, a2, b2], false);
    }
    if !b2.is_zero() {
        let swapped = imaginary_chain_primary(k, [a2, b2, a1, b1], true)?;
        let pts = swapped
            .chain
            .points()
            .iter()
            .map(geometry::swap_map)
            .collect();
        let chain = Chain::new(pts)?;
        let certificates = verify_chain(&chain, true).edges;
        return Ok(ImaginaryChain {
            chain,
            certificates,
            swapped: true,
        });
    }
    Err(Error::PrimaryBranchUnavailable)
}

fn imaginary_chain_primary(k: &Field, parts: [Elem; 4], swapped: bool) -> Result<ImaginaryChain> {
    let [a1, b1, a2, b2] = parts;
    let f0 = k.real_subfield()?.clone();
    f0.ensure_real()?;
    let (f1, s1) = f0.sqrt_or_adjoin(&(&f0.one() + &b2.square()))?;
    let bm1 = f1.embed(&(&b1 - &f0.one()))?;
    let (f2, s2) = f1.sqrt_or_adjoin(&(&f1.one() + &bm1.square()))?;
    let (f3, r2) = f2.sqrt_or_adjoin(&f2.int(2))?;
    let s1 = f3.embed(&f2.embed(&s1)?)?;
    let s2 = f3.embed(&s2)?;
    let e3 = |v: &Elem| -> Result<Elem> { f3.embed(v) };
    let (a1, b1, a2, b2) = (e3(&a1)?, e3(&b1)?, e3(&a2)?, e3(&b2)?);

    let start = Point::new(&a1 + &s1, &a2 + &s2)?;
    let target = Point::new(r2, f3.zero())?;
    let real = build_real_chain(
        &start,
        &target,
        ChainMode::AutoExtend,
        RationalBudget::default(),
    )?;
    let fr = real.chain.field().clone();
    let (kk, _) = fr.adjoin_sqrt(&fr.int(-1))?;
    let i = kk.generator(kk.depth())?;
    let lift =
        |re: &Elem, im: &Elem| -> Result<Elem> { kk.from_re_im(&fr.embed(re)?, &fr.embed(im)?) };
    let zero = f3.zero();
    let mut pts = vec![
        Point::new(lift(&a1, &b1)?, lift(&a2, &b2)?)?,
        Point::new(lift(&(&a1 + &s1), &b1)?, lift(&a2, &zero)?)?,
    ];
    for p in real.chain.points() {
        pts.push(Point::new(
            kk.from_re_im(p.x1(), &fr.one())?,
            kk.from_re_im(p.x2(), &fr.zero())?,
        )?);
    }
    pts.push(Point::new(i.clone(), i)?);
    let chain = Chain::new(pts)?;
    let report = verify_chain(&chain, true);
    if let Some(v) = report.violations.first() {
        return Err(Error::BrokenChain {
            edge: match v {
                ChainViolation::PhiNotOne { edge, .. }
                | ChainViolation::PsiZero { edge }
                | ChainViolation::PsiUndefined { edge } => *edge,
            },
            phi: v.to_string(),
        });
    }
    Ok(ImaginaryChain {
        chain,
        certificates: report.edges,
        swapped,
    })
}
