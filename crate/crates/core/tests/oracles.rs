//! Library results against independent brute-force computations done in
//! plain integer or pair-of-rationals arithmetic.

mod common;

use std::collections::{BTreeSet, HashSet};

use bq_core::fields::Field;
use bq_core::geometry::{self, Point};
use bq_core::maps::{self, AffineOrthoMap, MapTable, OrthoMatrix2};
use bq_core::sampling;
use rand::Rng;

fn residues(q: &OrthoMatrix2) -> [u64; 4] {
    q.entries().map(|e| e.residue().unwrap())
}

#[test]
fn orthogonal_group_matches_brute_force() {
    for (k, size) in [
        (Field::prime(13).unwrap(), 24),
        (Field::prime(17).unwrap(), 32),
        (Field::prime_any_residue(7).unwrap(), 16),
        (Field::prime_any_residue(11).unwrap(), 24),
    ] {
        let p = k.modulus().unwrap();
        let oracle = common::brute_force_orthogonal(p);
        let got: Vec<[u64; 4]> = maps::enumerate_orthogonal_group(&k)
            .unwrap()
            .iter()
            .map(residues)
            .collect();
        let set: BTreeSet<[u64; 4]> = got.iter().copied().collect();
        assert_eq!(set.len(), got.len(), "duplicates for p = {p}");
        assert_eq!(set, oracle, "p = {p}");
        assert_eq!(oracle.len(), size);
        assert_eq!(got[0], [1, 0, 0, 1]);
    }
}

#[test]
fn canonical_map_tables_match_enumeration() {
    let k = Field::prime(13).unwrap();
    let oracle = common::canonical_tables(13);
    assert_eq!(oracle.len(), 4056);
    let mut ours = HashSet::new();
    for q in maps::enumerate_orthogonal_group(&k).unwrap() {
        for t in sampling::all_points(&k).unwrap() {
            let m = AffineOrthoMap::new(q.clone(), t).unwrap();
            ours.insert(MapTable::tabulate(&m).unwrap().images().to_vec());
        }
    }
    assert_eq!(ours, oracle);
}

#[test]
fn prime_field_arithmetic_matches_integers() {
    let p = 10_009u64;
    let k = Field::prime(p).unwrap();
    let mut rng = sampling::rng(3);
    for _ in 0..500 {
        let a: u64 = rng.gen_range(0..p);
        let b: u64 = rng.gen_range(1..p);
        let (x, y) = (k.int(a as i64), k.int(b as i64));
        assert_eq!((&x + &y).residue(), Some((a + b) % p));
        assert_eq!((&x - &y).residue(), Some((a + p - b) % p));
        assert_eq!((&x * &y).residue(), Some(a * b % p));
        let q = x.checked_div(&y).unwrap().residue().unwrap();
        assert_eq!(q * b % p, a);
    }
}

#[test]
fn prime_field_square_roots_match_squares() {
    let k = Field::prime(13).unwrap();
    let squares: HashSet<u64> = (0..13u64).map(|x| x * x % 13).collect();
    for a in 0..13 {
        let root = k.int(a).sqrt();
        assert_eq!(root.is_some(), squares.contains(&(a as u64)), "a = {a}");
        if let Some(r) = root {
            assert_eq!(r.square(), k.int(a));
        }
    }
}

#[test]
fn sqrt2_arithmetic_matches_pairs() {
    let q = Field::rationals();
    let (k, _) = q.adjoin_sqrt(&q.int(2)).unwrap();
    let mut rng = sampling::rng(9);
    for _ in 0..200 {
        let (a, b) = (
            sampling::random_rational(&mut rng),
            sampling::random_rational(&mut rng),
        );
        let (c, d) = (
            sampling::random_rational(&mut rng),
            sampling::random_rational(&mut rng),
        );
        let x = k.from_coefficients(&[a.clone(), b.clone()]).unwrap();
        let y = k.from_coefficients(&[c.clone(), d.clone()]).unwrap();
        let want = common::Sqrt2(a, b).mul(&common::Sqrt2(c, d));
        assert_eq!((&x * &y).coefficients(), vec![want.0, want.1]);
    }
}

#[test]
fn phi_and_lorentz_distance_match_integer_formulas() {
    let k = Field::prime(13).unwrap();
    let mut rng = sampling::rng(21);
    for _ in 0..300 {
        let v: [i64; 4] = std::array::from_fn(|_| rng.gen_range(0..13));
        let x = Point::from_ints(&k, v[0], v[1]);
        let y = Point::from_ints(&k, v[2], v[3]);
        let phi = ((v[0] - v[2]).pow(2) + (v[1] - v[3]).pow(2)).rem_euclid(13) as u64;
        let d = ((v[0] - v[2]) * (v[1] - v[3])).rem_euclid(13) as u64;
        assert_eq!(geometry::phi(&x, &y).unwrap().residue(), Some(phi));
        assert_eq!(geometry::lm_distance(&x, &y).unwrap().residue(), Some(d));
    }
}
