//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails. All comparisons are exact (tolerance 0);
//! the only numeric thresholds are the wall-clock limits noted per line.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use bq_core::chains::{self, ChainMode, RationalBudget};
use bq_core::decompose::{self, Branch};
use bq_core::fields::{Elem, Field, Homomorphism};
use bq_core::geometry::{self, Point};
use bq_core::identities;
use bq_core::maps::{
    self, AffineOrthoMap, Composed, MapTable, OrthoMatrix2, Overridden, PlaneMap, SemiAffineMap,
};
use bq_core::sampling;
use bq_core::Domain;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gf13() -> Field {
    Field::prime(13).unwrap()
}

fn qi() -> Field {
    let q = Field::rationals();
    q.adjoin_sqrt(&q.int(-1)).unwrap().0
}

fn q2i() -> Field {
    let q = Field::rationals();
    let (k2, _) = q.adjoin_sqrt(&q.int(2)).unwrap();
    k2.adjoin_sqrt(&k2.int(-1)).unwrap().0
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The 4056 maps `translate(t) o Q` of GF(13)^2.
fn canonical_maps() -> Vec<AffineOrthoMap> {
    let k = gf13();
    let mut out = Vec::new();
    for q in maps::enumerate_orthogonal_group(&k).unwrap() {
        for t in sampling::all_points(&k).unwrap() {
            out.push(AffineOrthoMap::new(q.clone(), t).unwrap());
        }
    }
    out
}

fn transform_identities() -> Outcome {
    let start = Instant::now();
    let r = geometry::verify_transform_identities(&gf13(), Domain::Exhaustive).map_err(fail)?;
    let took = start.elapsed();
    ensure!(
        r.pairs_checked == 169 * 169,
        "only {} pairs checked",
        r.pairs_checked
    );
    ensure!(
        r.passed(),
        "{} violations, first {:?}",
        r.violations.len(),
        r.violations[0]
    );
    ensure!(took < Duration::from_secs(10), "took {took:?} (limit 10s)");
    Ok(format!(
        "{} pairs, {} points, 0 violations, {took:.2?} < 10s",
        r.pairs_checked, r.points_checked
    ))
}

/// `Q^T Q` computed entry by entry.
fn gram_is_identity(q: &OrthoMatrix2) -> bool {
    let [a, b, c, d] = q.entries();
    let k = q.field();
    (&(a * a) + &(c * c)).is_one()
        && (&(a * b) + &(c * d)) == k.zero()
        && (&(b * b) + &(d * d)).is_one()
}

fn lorentz_orthogonality() -> Outcome {
    let mut checked = 0;
    let k = gf13();
    let id = Homomorphism::Identity;
    for a in 1..13 {
        let a = k.int(a);
        for (name, q) in [
            ("f1", maps::f1_matrix(&a, &id, &k)),
            ("f2", maps::f2_matrix(&a, &id, &k)),
        ] {
            let q = q.map_err(|e| format!("{name}(a = {a}) over GF(13): {e}"))?;
            ensure!(
                gram_is_identity(&q),
                "{name}(a = {a}) over GF(13): Q^T Q != I"
            );
            checked += 1;
        }
    }
    let k = qi();
    let mut rng = sampling::rng(2);
    for _ in 0..50 {
        let a = sampling::random_nonzero(&k, &mut rng);
        for (name, q) in [
            ("f1", maps::f1_matrix(&a, &id, &k)),
            ("f2", maps::f2_matrix(&a, &id, &k)),
        ] {
            let q = q.map_err(|e| format!("{name}(a = {a}) over Q(i): {e}"))?;
            ensure!(
                gram_is_identity(&q),
                "{name}(a = {a}) over Q(i): Q^T Q != I"
            );
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} matrices (24 over GF(13), 100 over Q(i)), Q^T Q = I exactly"
    ))
}

fn orthogonal_census() -> Outcome {
    let got: Vec<[u64; 4]> = maps::enumerate_orthogonal_group(&gf13())
        .map_err(fail)?
        .iter()
        .map(|q| q.entries().map(|e| e.residue().unwrap()))
        .collect();
    let set: BTreeSet<[u64; 4]> = got.iter().copied().collect();
    let oracle = common::brute_force_orthogonal(13);
    ensure!(
        set.len() == got.len(),
        "duplicate matrices in the enumeration"
    );
    ensure!(
        oracle.len() == 24,
        "oracle found {} matrices, expected 24",
        oracle.len()
    );
    ensure!(
        set == oracle,
        "enumeration differs from the 13^4 brute force"
    );
    Ok(format!(
        "{} matrices, set-equal to the 13^4 brute force",
        set.len()
    ))
}

fn decomposition_round_trip() -> Outcome {
    let all = canonical_maps();
    for f in &all {
        let d = decompose::decompose(f, Domain::Exhaustive).map_err(|e| format!("{f}: {e}"))?;
        let r = d
            .reconstruction()
            .ok_or(format!("{f}: no reconstruction"))?;
        let (a, b) = (
            MapTable::tabulate(f).map_err(fail)?,
            MapTable::tabulate(&r).map_err(fail)?,
        );
        ensure!(a == b, "{f}: reconstruction {r} differs");
    }
    Ok(format!(
        "{}/4056 maps reconstructed on all 169 points",
        all.len()
    ))
}

fn pipeline_cross_validation() -> Outcome {
    let all = canonical_maps();
    let mut swapped = 0;
    for f in &all {
        let a = decompose::decompose(f, Domain::Exhaustive).map_err(|e| format!("{f}: {e}"))?;
        let b =
            decompose::decompose_lorentz(f, Domain::Exhaustive).map_err(|e| format!("{f}: {e}"))?;
        let (ra, rb) = (a.reconstruction().unwrap(), b.reconstruction().unwrap());
        let (ta, tb) = (
            MapTable::tabulate(&ra).map_err(fail)?,
            MapTable::tabulate(&rb).map_err(fail)?,
        );
        ensure!(ta == tb, "{f}: {ra} vs {rb}");
        if b.lorentz
            .is_some_and(|l| l.case == decompose::LorentzCase::Swapped)
        {
            swapped += 1;
        }
    }
    Ok(format!(
        "{}/4056 pointwise identical ({} diagonal, {swapped} swapped)",
        all.len(),
        all.len() - swapped
    ))
}

/// `(t^2 - 1) / (2t)`, for which `1 + x^2` is a rational square.
fn pythagorean(t: i64, s: i64) -> BigRational {
    let t = rat(t, s);
    (&t * &t - rat(1, 1)) / (rat(2, 1) * t)
}

fn imaginary_chains() -> Outcome {
    let k = qi();
    let q = Field::rationals();
    let mut rng = sampling::rng(6);
    let (mut friendly, mut edges) = (0, 0);
    let mut depths = std::collections::BTreeMap::new();
    for n in 0..100 {
        let a1 = sampling::random_rational(&mut rng);
        let a2 = sampling::random_rational(&mut rng);
        let (b1, b2) = if n % 2 == 0 {
            friendly += 1;
            let b2 = pythagorean(rng.gen_range(2..9), rng.gen_range(1..5));
            let b1 = rat(1, 1) + pythagorean(rng.gen_range(2..9), rng.gen_range(1..5));
            (b1, b2)
        } else {
            let mut b1 = sampling::random_rational(&mut rng);
            while b1 == rat(0, 1) {
                b1 = sampling::random_rational(&mut rng);
            }
            (b1, sampling::random_rational(&mut rng))
        };
        let e = |x: &BigRational| k.embed(&q.from_rational(x).unwrap()).unwrap();
        let i = k.imaginary_unit().unwrap();
        let x = Point::new(&e(&a1) + &(&e(&b1) * &i), &e(&a2) + &(&e(&b2) * &i)).unwrap();
        let c = chains::build_imaginary_chain(&x).map_err(|err| format!("{x}: {err}"))?;
        ensure!(!c.swapped, "{x}: unexpectedly swapped");
        let report = chains::verify_chain(&c.chain, true);
        ensure!(report.passed(), "{x}: {:?}", report.violations);
        let psi: Vec<Option<BigRational>> = report
            .edges
            .iter()
            .map(|cert| cert.psi_value.as_ref().and_then(Elem::as_rational))
            .collect();
        let mut want = vec![Some(&b1 * &b1), Some(b1.clone())];
        want.resize(psi.len(), Some(rat(1, 1)));
        ensure!(psi == want, "{x}: psi certificates {psi:?}");
        ensure!(
            report.edges.iter().all(|cert| cert.phi_value.is_one()),
            "{x}: an edge has phi != 1"
        );
        *depths.entry(c.chain.field().depth()).or_insert(0) += 1;
        edges += report.edges.len();
    }
    Ok(format!(
        "100 chains ({friendly} Pythagorean-friendly; tower depth -> count {depths:?}), {edges} edges, phi = 1 and psi = b1^2, b1, 1, ... on all"
    ))
}

fn rational_chain() -> Outcome {
    let q = Field::rationals();
    let s = Point::origin(&q);
    let t = Point::new(q.rat(7, 3), q.rat(22, 5)).unwrap();
    let start = Instant::now();
    let c = chains::build_real_chain(&s, &t, ChainMode::RationalOnly, RationalBudget::default())
        .map_err(|e| format!("{e} (after {:.2?})", start.elapsed()))?;
    let took = start.elapsed();
    let report = chains::verify_chain(&c.chain, false);
    ensure!(report.passed(), "{:?}", report.violations);
    ensure!(took < Duration::from_secs(60), "took {took:?} (limit 60s)");
    Ok(format!(
        "{} edges, phi = 1 on every edge, {took:.2?} < 60s",
        c.chain.edge_count()
    ))
}

fn non_isometry_witness() -> Outcome {
    let k = q2i();
    let f = SemiAffineMap::new(
        AffineOrthoMap::identity(&k),
        Homomorphism::LevelConjugation(1),
    )
    .map_err(fail)?;
    let v = maps::preserves_unit_distance(
        &f,
        Domain::Samples {
            count: 200,
            seed: 8,
        },
    )
    .map_err(fail)?;
    ensure!(v.passed(), "unit pair broken: {}", v.witness.unwrap());
    ensure!(
        v.pairs_checked == 200,
        "only {} unit pairs checked",
        v.pairs_checked
    );

    let r = k.generator(1).unwrap();
    let i = k.generator(2).unwrap();
    let half = k.rat(1, 2);
    let y = Point::new(&half * &(&r + &k.one()), &(&half * &i) * &(&r - &k.one())).unwrap();
    let (phi, image_phi) = maps::phi_on_pair(&f, &Point::origin(&k), &y).map_err(fail)?;

    // Pair-of-rationals recomputation: phi = y1^2 - y2^2 for Y = (y1, i y2).
    let y1 = common::Sqrt2::new((1, 2), (1, 2));
    let y2 = common::Sqrt2::new((-1, 2), (1, 2));
    let want = y1.mul(&y1).sub(&y2.mul(&y2));
    let want_image = y1.conj().mul(&y1.conj()).sub(&y2.conj().mul(&y2.conj()));
    let as_pair = |e: &Elem| -> Option<common::Sqrt2> {
        let c = e.coefficients();
        (c[2] == rat(0, 1) && c[3] == rat(0, 1)).then(|| common::Sqrt2(c[0].clone(), c[1].clone()))
    };
    ensure!(
        want == common::Sqrt2::new((0, 1), (1, 1)),
        "oracle phi is not sqrt 2"
    );
    ensure!(as_pair(&phi) == Some(want), "phi = {phi}, expected sqrt 2");
    ensure!(
        as_pair(&image_phi) == Some(want_image),
        "image phi = {image_phi}, expected -sqrt 2"
    );
    Ok(format!(
        "200/200 unit pairs preserved; phi(X, Y) = {phi}, phi(fX, fY) = {image_phi}"
    ))
}

fn seeded_semi_affine(k: &Field, seed: u64) -> SemiAffineMap {
    let mut rng = sampling::rng(seed);
    let t = sampling::random_rational(&mut rng);
    let u = maps::rational_unit_vector(
        &k.embed(&Field::rationals().from_rational(&t).unwrap())
            .unwrap(),
    )
    .unwrap();
    let q = if rng.gen::<bool>() {
        OrthoMatrix2::reflection(u.x1(), u.x2())
    } else {
        OrthoMatrix2::rotation(u.x1(), u.x2())
    }
    .unwrap();
    let shift = sampling::random_point(k, &mut rng);
    let gamma = if seed.is_multiple_of(2) {
        Homomorphism::Identity
    } else {
        Homomorphism::LevelConjugation(k.depth())
    };
    SemiAffineMap::new(AffineOrthoMap::new(q, shift).unwrap(), gamma).unwrap()
}

fn rational_phi_preserved() -> Outcome {
    let k = qi();
    let mut pairs = 0;
    for seed in 0..20 {
        let f = seeded_semi_affine(&k, seed);
        let v = maps::preserves_phi(
            &f,
            Domain::Samples {
                count: 200,
                seed: 100 + seed,
            },
        )
        .map_err(fail)?;
        ensure!(v.passed(), "{f}: {}", v.witness.unwrap());
        ensure!(
            v.pairs_checked == 200,
            "{f}: only {} pairs had rational phi",
            v.pairs_checked
        );
        pairs += v.pairs_checked;
    }
    Ok(format!(
        "20 maps, {pairs} pairs with rational phi, all preserved"
    ))
}

fn preserver_search() -> Outcome {
    let out = decompose::search_unit_preservers(13, 50_000_000).map_err(fail)?;
    let c = &out.census;
    ensure!(c.anomalies.is_empty(), "anomaly: {}", c.anomalies[0].reason);
    ensure!(c.complete, "search incomplete after {} nodes", c.nodes);
    let oracle = common::canonical_tables(13);
    ensure!(
        c.expected == oracle.len(),
        "expected {} vs oracle {}",
        c.expected,
        oracle.len()
    );
    ensure!(
        c.found == 4056 && c.confirms(),
        "found {} of {}",
        c.found,
        c.expected
    );
    let found: HashSet<Vec<u32>> = out.maps.iter().map(|m| m.images().to_vec()).collect();
    ensure!(
        found == oracle,
        "found maps differ from the canonical enumeration"
    );

    let partial = decompose::search_unit_preservers(13, 2_000).map_err(fail)?;
    ensure!(!partial.census.complete, "tiny budget reported complete");
    ensure!(
        partial.census.anomalies.is_empty(),
        "anomaly in partial census"
    );
    Ok(format!(
        "{} maps = oracle set, {} nodes, 0 anomalies, all decompose; budget 2000 gives incomplete census of {} with 0 anomalies",
        c.found, c.nodes, partial.census.found
    ))
}

fn normalized(f: SemiAffineMap) -> Result<Arc<dyn PlaneMap>, String> {
    let k = f.outer().linear().field().clone();
    let img = |a, b| f.apply(&Point::from_ints(&k, a, b)).unwrap();
    let j = decompose::normalizer_from_images(&img(0, 0), &img(1, 0), &img(0, 1)).map_err(fail)?;
    Ok(Arc::new(Composed::new(&k, vec![Arc::new(j), Arc::new(f)])))
}

fn branch_detection() -> Outcome {
    let k = qi();
    let i = k.imaginary_unit().unwrap();
    let ii = Point::new(i.clone(), i.clone()).unwrap();
    let mut rng = sampling::rng(11);
    let mut corrupted = Vec::new();
    for seed in 0..100 {
        let f = seeded_semi_affine(&k, seed);
        let want = if seed % 2 == 0 {
            Branch::Theta
        } else {
            Branch::Zeta
        };
        let g = normalized(f)?;
        let got = decompose::detect_branch(&g, &k).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(got == want, "seed {seed}: labelled {got}, built as {want}");
        if corrupted.len() < 20 {
            let mut bad = sampling::random_point(&k, &mut rng);
            while bad == ii || bad == ii.scale(&k.int(-1)) {
                bad = sampling::random_point(&k, &mut rng);
            }
            corrupted.push(Overridden::new(g, ii.clone(), bad).unwrap());
        }
    }
    for (n, g) in corrupted.iter().enumerate() {
        match decompose::detect_branch(g, &k) {
            Err(bq_core::Error::BranchUndetermined(_)) => {}
            other => return Err(format!("corrupted table {n}: {other:?}")),
        }
    }
    Ok("50/50 theta, 50/50 zeta, 20/20 corrupted flagged BranchUndetermined".into())
}

fn identity_suite() -> Outcome {
    let c = identities::offset_identity(&qi(), 200, 12).map_err(fail)?;
    ensure!(
        c.passed() && c.checked == 200,
        "offset identity: {:?}",
        c.failures
    );
    let mut lines = Vec::new();
    for (k, level) in [(qi(), None), (q2i(), None), (q2i(), Some(1))] {
        let rho = identities::real_homomorphism(&k, level).map_err(fail)?;
        let r = identities::subtraction_pipeline(&k, &rho, 25, 13).map_err(fail)?;
        for step in [&r.expansion, &r.collapse, &r.squaring, &r.consequence] {
            ensure!(
                step.passed(),
                "{k}, rho = {rho}: {} failed on {:?}",
                step.name,
                step.failures
            );
        }
        ensure!(
            r.expansion.checked == 50,
            "pipeline ran on {} tuples",
            r.expansion.checked
        );
        lines.push(format!("{k} rho={rho}"));
    }
    Ok(format!(
        "offset identity 200/200; pipeline on 50 tuples each over {}",
        lines.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (
            "transform identities over GF(13), exhaustive",
            transform_identities,
        ),
        ("f1/f2 orthogonality", lorentz_orthogonality),
        ("orthogonal group census over GF(13)", orthogonal_census),
        (
            "decomposition round trip, 4056 maps",
            decomposition_round_trip,
        ),
        (
            "decompose vs decompose_lorentz, 4056 maps",
            pipeline_cross_validation,
        ),
        ("imaginary-part chains, 100 inputs", imaginary_chains),
        ("rational chain (0,0) -> (7/3, 22/5)", rational_chain),
        (
            "non-isometry witness over Q(sqrt 2)(i)",
            non_isometry_witness,
        ),
        (
            "rational phi preserved by semi-affine maps",
            rational_phi_preserved,
        ),
        ("unit-preserver search over GF(13)", preserver_search),
        ("branch detection over Q(i)", branch_detection),
        ("identity suite", identity_suite),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.2?}]", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed (exact comparisons, tolerance 0)",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
