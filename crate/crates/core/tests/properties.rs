use bq_core::decompose;
use bq_core::fields::{Elem, Field, Homomorphism};
use bq_core::geometry::{self, Point};
use bq_core::maps::{self, AffineOrthoMap, OrthoMatrix2, SemiAffineMap};
use bq_core::syntax::{self, MapExpr};
use bq_core::Domain;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q2i() -> Field {
    let q = Field::rationals();
    let (k2, _) = q.adjoin_sqrt(&q.int(2)).unwrap();
    k2.adjoin_sqrt(&k2.int(-1)).unwrap().0
}

fn qi() -> Field {
    let q = Field::rationals();
    q.adjoin_sqrt(&q.int(-1)).unwrap().0
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn elem_of(k: Field) -> impl Strategy<Value = Elem> {
    let n = 1usize << k.depth();
    prop::collection::vec(rational(), n).prop_map(move |c| k.from_coefficients(&c).unwrap())
}

fn point_of(k: Field) -> impl Strategy<Value = Point> {
    (elem_of(k.clone()), elem_of(k)).prop_map(|(a, b)| Point::new(a, b).unwrap())
}

fn gf(p: u64) -> impl Strategy<Value = Elem> {
    let k = Field::prime(p).unwrap();
    (0..p as i64).prop_map(move |a| k.int(a))
}

/// A random semi-affine map over Q(i): rotation or reflection from a
/// rational unit vector, a translation, and gamma in {id, conj}.
fn semi_affine_qi() -> impl Strategy<Value = SemiAffineMap> {
    let k = qi();
    (
        rational(),
        any::<bool>(),
        point_of(k.clone()),
        any::<bool>(),
    )
        .prop_map(move |(t, refl, shift, conj)| {
            let u = maps::rational_unit_vector(
                &k.embed(&Field::rationals().from_rational(&t).unwrap())
                    .unwrap(),
            )
            .unwrap();
            let q = if refl {
                OrthoMatrix2::reflection(u.x1(), u.x2())
            } else {
                OrthoMatrix2::rotation(u.x1(), u.x2())
            }
            .unwrap();
            let gamma = if conj {
                Homomorphism::LevelConjugation(1)
            } else {
                Homomorphism::Identity
            };
            SemiAffineMap::new(AffineOrthoMap::new(q, shift).unwrap(), gamma).unwrap()
        })
}

proptest! {
    #[test]
    fn tower_field_axioms(a in elem_of(q2i()), b in elem_of(q2i()), c in elem_of(q2i())) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn prime_field_axioms(a in gf(13), b in gf(13), c in gf(13)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn square_roots(a in elem_of(q2i()), b in gf(17)) {
        let r = a.square().sqrt().unwrap();
        prop_assert!(r == a || r == -&a);
        if let Some(s) = b.sqrt() {
            prop_assert_eq!(s.square(), b);
        }
    }

    #[test]
    fn catalog_maps_are_homomorphisms(a in elem_of(q2i()), b in elem_of(q2i())) {
        for h in Homomorphism::catalog(a.field()) {
            let (ha, hb) = (h.apply(&a).unwrap(), h.apply(&b).unwrap());
            prop_assert_eq!(h.apply(&(&a + &b)).unwrap(), &ha + &hb);
            prop_assert_eq!(h.apply(&(&a * &b)).unwrap(), &ha * &hb);
            prop_assert!(h.apply(&a.field().one()).unwrap().is_one());
        }
    }

    #[test]
    fn transform_identities(x in point_of(qi()), y in point_of(qi())) {
        let phi = geometry::phi(&x, &y).unwrap();
        let (xx, xy) = (geometry::xi(&x).unwrap(), geometry::xi(&y).unwrap());
        prop_assert_eq!(geometry::lm_distance(&xx, &xy).unwrap(), phi);
        let d = geometry::lm_distance(&x, &y).unwrap();
        let (ex, ey) = (geometry::eta(&x).unwrap(), geometry::eta(&y).unwrap());
        prop_assert_eq!(geometry::phi(&ex, &ey).unwrap(), d);
        prop_assert_eq!(geometry::eta(&xx).unwrap(), x.clone());
        prop_assert_eq!(geometry::xi(&ex).unwrap(), x);
    }

    #[test]
    fn lambda_preserves_lorentz_distance(z in elem_of(q2i()), x in point_of(q2i()), y in point_of(q2i())) {
        prop_assume!(!z.is_zero());
        let (lx, ly) = (geometry::lambda_map(&z, &x).unwrap(), geometry::lambda_map(&z, &y).unwrap());
        prop_assert_eq!(geometry::lm_distance(&lx, &ly).unwrap(), geometry::lm_distance(&x, &y).unwrap());
    }

    #[test]
    fn rational_unit_vectors_give_orthogonal_matrices(t in rational()) {
        let q = Field::rationals();
        let u = maps::rational_unit_vector(&q.from_rational(&t).unwrap()).unwrap();
        prop_assert!(geometry::phi(&Point::origin(&q), &u).unwrap().is_one());
        let r = OrthoMatrix2::rotation(u.x1(), u.x2()).unwrap();
        prop_assert!(r.transpose().mul(&r).unwrap() == OrthoMatrix2::identity(&q));
    }

    #[test]
    fn semi_affine_maps_twist_phi(f in semi_affine_qi(), x in point_of(qi()), y in point_of(qi())) {
        let (phi, image_phi) = maps::phi_on_pair(&f, &x, &y).unwrap();
        prop_assert_eq!(image_phi, f.gamma().apply(&phi).unwrap());
    }

    #[test]
    fn composition_is_pointwise(f in semi_affine_qi(), g in semi_affine_qi(), x in point_of(qi())) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.apply(&x).unwrap(), f.apply(&g.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn element_text_round_trips(a in elem_of(q2i())) {
        let k = a.field().clone();
        prop_assert_eq!(syntax::parse_elem(&a.to_string(), &k).unwrap(), a);
    }

    #[test]
    fn map_text_round_trips(f in semi_affine_qi()) {
        let k = qi();
        let q = f.outer().linear();
        let t = f.outer().translation();
        let [q11, q12, q21, _] = q.entries();
        let linear = if q.is_rotation() {
            format!("rot({q11}, {q21})")
        } else {
            format!("refl({q11}, {q12})")
        };
        let src = format!("translate({}, {}) . {linear} . hom({})", t.x1(), t.x2(), f.gamma());
        let e = MapExpr::parse(&src, &k).unwrap();
        prop_assert_eq!(e.to_string(), src);
        let m = e.elaborate().unwrap();
        prop_assert_eq!(m.semi_affine().unwrap(), &f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_reconstructs(f in semi_affine_qi()) {
        let d = decompose::decompose(&f, Domain::samples(60)).unwrap();
        prop_assert_eq!(d.reconstruction().unwrap(), f.clone());
        let l = decompose::decompose_lorentz(&f, Domain::samples(60)).unwrap();
        prop_assert_eq!(l.branch, d.branch);
        prop_assert_eq!(l.reconstruction().unwrap(), f);
    }
}
