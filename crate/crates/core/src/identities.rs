//! Exact polynomial identities behind the branch argument over `F(i)`,
//! checked on seeded tuples from the real subfield `F`.

use crate::error::Result;
use crate::fields::{Elem, Field, Homomorphism};
use crate::geometry::{self, Point};
use crate::sampling;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: usize,
    /// Tuple index and a description of the mismatch.
    pub failures: Vec<(usize, String)>,
}

impl IdentityCheck {
    fn new(name: &'static str) -> IdentityCheck {
        IdentityCheck {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, index: usize, lhs: &Elem, rhs: &Elem) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push((index, format!("{lhs} != {rhs}")));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn imaginary_field(k: &Field) -> Result<(&Field, Elem)> {
    let f = k.real_subfield()?;
    let i = k.generator(k.depth())?;
    Ok((f, i))
}

/// `phi((a1 + b1 i, a2 + b2 i), (a1 + t b2, a2 - t b1)) = (t^2 - 1)(b1^2 + b2^2)`
/// for `count` seeded tuples `a1, a2, b1, b2, t` of the real subfield.
pub fn offset_identity(k: &Field, count: usize, seed: u64) -> Result<IdentityCheck> {
    let (f, _) = imaginary_field(k)?;
    let mut rng = sampling::rng(seed);
    let mut check = IdentityCheck::new("phi offset identity");
    for n in 0..count {
        let [a1, a2, b1, b2, t] = std::array::from_fn(|_| sampling::random_elem(f, &mut rng));
        let x = Point::new(k.from_re_im(&a1, &b1)?, k.from_re_im(&a2, &b2)?)?;
        let y = Point::new(
            k.from_re_im(&(&a1 + &(&t * &b2)), &f.zero())?,
            k.from_re_im(&(&a2 - &(&t * &b1)), &f.zero())?,
        )?;
        let lhs = geometry::phi(&x, &y)?;
        let rhs = k.embed(&(&(&t.square() - &f.one()) * &(&b1.square() + &b2.square())))?;
        check.record(n, &lhs, &rhs);
    }
    Ok(check)
}

/// One tuple `x_k = a_k + b_k i`, `y_k = a~_k + b~_k i` (k = 1, 2).
#[derive(Clone, Debug)]
pub struct PairTuple {
    pub a: [Elem; 2],
    pub b: [Elem; 2],
    pub a_t: [Elem; 2],
    pub b_t: [Elem; 2],
}

impl PairTuple {
    /// `P = b1 b~1 + b2 b~2`, the imaginary pairing of the two points.
    pub fn p(&self) -> Elem {
        &(&self.b[0] * &self.b_t[0]) + &(&self.b[1] * &self.b_t[1])
    }

    /// `Q = b1 (a1 - a~1) + b2 (a2 - a~2)`.
    pub fn q(&self) -> Elem {
        &(&self.b[0] * &(&self.a[0] - &self.a_t[0])) + &(&self.b[1] * &(&self.a[1] - &self.a_t[1]))
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    /// `E11 - E12` equals the expanded difference
    /// `sum 2 rho(b_k) i (2 rho(b~_k) i - 2 rho(a_k) + 2 rho(a~_k))`.
    pub expansion: IdentityCheck,
    /// The expanded difference equals `-4 (rho(P) + rho(Q) i)`, so it
    /// vanishes exactly when `-rho(P) = rho(Q) i`.
    pub collapse: IdentityCheck,
    /// `(-rho(P))^2 - (rho(Q) i)^2 = rho(P^2 + Q^2)`.
    pub squaring: IdentityCheck,
    /// On tuples with `E11 = E12`: `rho(P^2 + Q^2) = 0` and `P = 0`.
    pub consequence: IdentityCheck,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.expansion.passed()
            && self.collapse.passed()
            && self.squaring.passed()
            && self.consequence.passed()
    }
}

/// Random tuples, plus `count` tuples satisfying `E11 = E12`: those are
/// built with `P = Q = 0` by taking `(b~1, b~2)` and `(a1 - a~1, a2 - a~2)`
/// orthogonal to `(b1, b2)`.
pub fn pipeline_tuples(f: &Field, count: usize, seed: u64) -> (Vec<PairTuple>, Vec<PairTuple>) {
    let mut rng = sampling::rng(seed);
    let mut elem = || sampling::random_elem(f, &mut rng);
    let free: Vec<PairTuple> = (0..count)
        .map(|_| PairTuple {
            a: [elem(), elem()],
            b: [elem(), elem()],
            a_t: [elem(), elem()],
            b_t: [elem(), elem()],
        })
        .collect();
    let constrained = (0..count)
        .map(|_| {
            let b = [elem(), elem()];
            let (u, v) = (elem(), elem());
            let a_t = [elem(), elem()];
            // (b2, -b1) is orthogonal to (b1, b2).
            let b_t = [&u * &b[1], -&(&u * &b[0])];
            let a = [&a_t[0] + &(&v * &b[1]), &a_t[1] - &(&v * &b[0])];
            PairTuple { a, b, a_t, b_t }
        })
        .collect();
    (free, constrained)
}

/// Runs the subtraction pipeline with `rho`, a homomorphism of the real
/// subfield of `k`, on the tuples from [`pipeline_tuples`].
pub fn subtraction_pipeline(
    k: &Field,
    rho: &Homomorphism,
    count: usize,
    seed: u64,
) -> Result<PipelineReport> {
    let (f, i) = imaginary_field(k)?;
    rho.validate(f)?;
    let lift = |x: &Elem| -> Result<Elem> { k.embed(&rho.apply(x)?) };
    let (free, constrained) = pipeline_tuples(f, count, seed);
    let two = k.int(2);
    let four = k.int(4);

    let mut report = PipelineReport {
        expansion: IdentityCheck::new("E11 - E12 expansion"),
        collapse: IdentityCheck::new("difference collapses to -4(rho(P) + rho(Q) i)"),
        squaring: IdentityCheck::new("squaring the collapsed equation"),
        consequence: IdentityCheck::new("equal sides force rho(P^2 + Q^2) = 0 and P = 0"),
    };
    let all = free.iter().chain(constrained.iter()).enumerate();
    for (n, t) in all {
        let mut e11 = k.zero();
        let mut e12 = k.zero();
        let mut expanded = k.zero();
        for c in 0..2 {
            let (ra, rb) = (lift(&t.a[c])?, lift(&t.b[c])?);
            let (rat, rbt) = (lift(&t.a_t[c])?, lift(&t.b_t[c])?);
            let tail = &(&rat + &(&rbt * &i));
            e11 = &e11 + &(&(&ra - &(&rb * &i)) - tail).square();
            e12 = &e12 + &(&(&ra + &(&rb * &i)) - tail).square();
            let inner = &(&(&(&two * &rbt) * &i) - &(&two * &ra)) + &(&two * &rat);
            expanded = &expanded + &(&(&(&two * &rb) * &i) * &inner);
        }
        let diff = &e11 - &e12;
        report.expansion.record(n, &diff, &expanded);

        let (p, q) = (t.p(), t.q());
        let (rp, rq) = (lift(&p)?, lift(&q)?);
        let collapsed = -&(&four * &(&rp + &(&rq * &i)));
        report.collapse.record(n, &expanded, &collapsed);

        let squared = &(-&rp).square() - &(&rq * &i).square();
        let target = lift(&(&p.square() + &q.square()))?;
        report.squaring.record(n, &squared, &target);

        if n >= free.len() {
            report.consequence.record(n, &e11, &e12);
            report.consequence.record(n, &target, &k.zero());
            report.consequence.record(n, &k.embed(&p)?, &k.zero());
        }
    }
    Ok(report)
}

/// A real-subfield homomorphism for the pipeline: the identity, or the
/// conjugation of the real level `level` of `k`.
pub fn real_homomorphism(k: &Field, level: Option<usize>) -> Result<Homomorphism> {
    let f = k.real_subfield()?;
    let h = match level {
        None => Homomorphism::Identity,
        Some(l) => Homomorphism::LevelConjugation(l),
    };
    h.validate(f)?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2i() -> Field {
        let q = Field::rationals();
        let (k2, _) = q.adjoin_sqrt(&q.int(2)).unwrap();
        k2.adjoin_sqrt(&k2.int(-1)).unwrap().0
    }

    #[test]
    fn offset_identity_holds() {
        let q = Field::rationals();
        let (qi, _) = q.adjoin_sqrt(&q.int(-1)).unwrap();
        let c = offset_identity(&qi, 200, 5).unwrap();
        assert!(c.passed());
        assert_eq!(c.checked, 200);
        assert!(offset_identity(&q2i(), 30, 6).unwrap().passed());
    }

    #[test]
    fn pipeline_with_identity_and_conjugation() {
        let k = q2i();
        for level in [None, Some(1)] {
            let rho = real_homomorphism(&k, level).unwrap();
            let r = subtraction_pipeline(&k, &rho, 25, 11).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.expansion.checked, 50);
            assert_eq!(r.consequence.checked, 75);
        }
    }

    #[test]
    fn free_tuples_usually_have_nonzero_difference() {
        let k = q2i();
        let f = k.real_subfield().unwrap();
        let (free, _) = pipeline_tuples(f, 20, 3);
        assert!(free.iter().any(|t| !t.p().is_zero()));
    }

    #[test]
    fn needs_imaginary_top() {
        let g = Field::prime(13).unwrap();
        assert!(offset_identity(&g, 1, 1).is_err());
        assert!(real_homomorphism(&q2i(), Some(2)).is_err());
    }
}
