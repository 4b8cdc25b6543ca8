use num_bigint::BigUint;
use proptest::prelude::*;
use tqft::dw::{count_homs_surface_group, npoint_function, CountMethod, SurfaceSignature};
use tqft::group::catalog;
use tqft::lattice::{partition_function, LatticeTensorData, Triangulation};
use tqft::modular::{burnside_orbit_oracle, drinfeld_double_data, verlinde_dim_snapped, verlinde_fusion};
use tqft::open_closed::{cardy_check, ClosedStringAlgebra};
use tqft::yang_mills::{partition_function as ym, su2_spectrum, su2_tail_bound, DEFAULT_CASIMIR_SCALE};
use tqft::{character_table, Complex64 as C, FiniteGroup, FrobeniusAlgebra, Preset};

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    let presets = catalog(12);
    (0..presets.len()).prop_map(move |i| presets[i].build().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_axioms(g in small_group(), a in 0usize..12, b in 0usize..12, c in 0usize..12) {
        let n = g.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        let sizes: usize = g.conjugacy_classes().iter().map(|k| k.size).sum();
        prop_assert_eq!(sizes, n);
        let z = g.centralizer(a).unwrap();
        prop_assert_eq!(z.order() * g.conjugacy_classes()[g.class_of(a)].size, n);
    }

    #[test]
    fn brute_matches_convolution(g in small_group(), genus in 0usize..3) {
        let brute = count_homs_surface_group(&g, genus, CountMethod::Brute).unwrap();
        let conv = count_homs_surface_group(&g, genus, CountMethod::Convolution).unwrap();
        prop_assert_eq!(brute, conv);
    }

    #[test]
    fn npoint_routes_agree(g in small_group(), genus in 0usize..2, labels in proptest::collection::vec(0usize..8, 0..3)) {
        let r = g.num_classes();
        let sig = SurfaceSignature { genus, boundary: labels.into_iter().map(|a| a % r).collect() };
        let v = npoint_function(&g, &sig).unwrap();
        prop_assert!(v.agree(), "{:?}", v);
    }

    #[test]
    fn character_seed_independence(g in small_group(), seed in any::<u64>()) {
        let a = character_table(&g, seed).unwrap();
        let mut da = a.dims().to_vec();
        da.sort_unstable();
        let b = character_table(&g, 0xC0FFEE).unwrap();
        let mut db = b.dims().to_vec();
        db.sort_unstable();
        prop_assert_eq!(da, db);
        prop_assert!(a.verify_orthogonality(1e-9).passed);
    }

    #[test]
    fn pachner_random_seeds(seed in any::<u64>(), genus in 0usize..3, moves in 1usize..25) {
        let g = Preset::parse("S3").unwrap().build().unwrap();
        let d = LatticeTensorData::group_algebra(&g);
        let start = Triangulation::standard_surface(genus);
        let (end, _) = start.shuffle_seeded(moves, seed).unwrap();
        prop_assert_eq!(end.euler_characteristic(), start.euler_characteristic());
        end.validate().unwrap();
        end.check_face_maps().unwrap();
        let a = partition_function(&start, &d).unwrap();
        let b = partition_function(&end, &d).unwrap();
        prop_assert_eq!(a.scalar(), b.scalar());
    }

    #[test]
    fn genus_invariant_is_sum_of_powers(traces in proptest::collection::vec(0.3f64..4.0, 1..=4), genus in 0usize..5) {
        let lam: Vec<C> = traces.iter().map(|&t| C::new(t, 0.0)).collect();
        let a = FrobeniusAlgebra::semisimple_algebra(&lam).unwrap();
        let expected: f64 = traces.iter().map(|t| t.powi(1 - genus as i32)).sum();
        prop_assert!((a.genus_invariant(genus).re - expected).abs() <= 1e-9 * expected.abs().max(1.0));
    }

    #[test]
    fn cardy_under_sign_flips(
        traces in proptest::collection::vec(0.1f64..10.0, 1..=3),
        flip in 0usize..3,
        k in proptest::collection::vec(1i64..=3, 3),
    ) {
        let n = traces.len();
        let b = ClosedStringAlgebra::new(traces.iter().map(|&t| C::new(t, 0.0)).collect(), &vec![false; n]).unwrap();
        let b2 = b.flip_sign(flip % n);
        for alg in [b, b2] {
            let r = cardy_check(&alg, &k[..n]).unwrap();
            prop_assert!(r.defect < 1e-9);
        }
    }

    #[test]
    fn ym_monotone_in_area(t1 in 0.001f64..1.0, dt in 0.001f64..1.0, genus in 2usize..5) {
        let s = su2_spectrum(200).unwrap();
        let a = ym(&s, genus, t1).unwrap().value;
        let b = ym(&s, genus, t1 + dt).unwrap().value;
        prop_assert!(b < a);
        prop_assert!(su2_tail_bound(200, genus, t1, DEFAULT_CASIMIR_SCALE) >= 0.0);
    }
}

#[test]
fn doubles_of_catalog_groups() {
    for p in catalog(12) {
        let g = p.build().unwrap();
        let md = drinfeld_double_data(&g).unwrap();
        assert!(md.relations().passed(1e-8), "{p}");
        if g.order() <= 8 {
            let f = verlinde_fusion(&md).unwrap();
            f.check(md.dual()).unwrap();
        }
        for genus in 1..=2 {
            let v = verlinde_dim_snapped(&md, genus).unwrap();
            assert_eq!(BigUint::from(v), burnside_orbit_oracle(&g, genus).unwrap(), "{p} g={genus}");
        }
    }
}
