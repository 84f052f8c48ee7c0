use mwknot::knotdiag::{alexander, jones, random_moves, torus_reference};
use mwknot::projgeom::{ProjLine3, ProjPoint3};
use mwknot::ratpoly::{interlace_check, ratio, sturm_count, BinForm, Rat, UniPoly};
use mwknot::spacecurve::SpaceCurve;
use mwknot::writhe::encomplexed_writhe;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-50i64..=50, 1i64..=9).prop_map(|(n, d)| ratio(n, d))
}

fn cubic() -> SpaceCurve {
    SpaceCurve::from_ints([&[1], &[0, 1], &[0, 0, 1], &[0, 0, 0, 1]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interpolation_round_trips(c in prop::collection::vec(rat_strategy(), 1..6)) {
        let p = UniPoly::new(c);
        let xs: Vec<Rat> = (0..=p.deg() as i64).map(|i| ratio(i - 2, 1)).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| p.eval(x)).collect();
        prop_assert_eq!(UniPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn sturm_counts_planted_roots(mut roots in prop::collection::btree_set(-20i64..20, 1..6)) {
        let rs: Vec<i64> = std::mem::take(&mut roots).into_iter().collect();
        let p = rs.iter().fold(UniPoly::one(), |acc, r| &acc * &UniPoly::linear_root(&ratio(*r, 1)));
        prop_assert_eq!(sturm_count(&p, &ratio(-21, 1), &ratio(21, 1)).unwrap(), rs.len());
        let below = rs.iter().filter(|&&r| r < 0).count();
        prop_assert_eq!(sturm_count(&p, &ratio(-21, 1), &ratio(-1, 2)).unwrap(), below);
    }

    #[test]
    fn pencil_check_symmetric(a in prop::collection::vec(-6i64..6, 3), b in prop::collection::vec(-6i64..6, 3)) {
        let f = |v: &[i64]| BinForm::new(2, UniPoly::from_ints(v));
        let (p, q) = (f(&a), f(&b));
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert_eq!(interlace_check(&p, &q).ok(), interlace_check(&q, &p).ok());
    }

    #[test]
    fn line_through_points_contains_them(a in prop::array::uniform4(-9i64..9), b in prop::array::uniform4(-9i64..9)) {
        let (pa, pb) = (a.map(|x| ratio(x, 1)), b.map(|x| ratio(x, 1)));
        if let Ok(l) = ProjLine3::through(&pa, &pb) {
            prop_assert!(l.contains(&pa) && l.contains(&pb));
            prop_assert!(l.meets(&l));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn writhe_flips_under_mirror(c in prop::array::uniform4(-30i64..30)) {
        let p = ProjPoint3::from_ints(c.map(|x| x * 2 + 1));
        let k = cubic();
        if let (Ok(a), Ok(b)) = (encomplexed_writhe(&k, &p), encomplexed_writhe(&k.mirror(), &p)) {
            prop_assert_eq!(a.w, 1);
            prop_assert_eq!(b.w, -1);
        }
    }

    #[test]
    fn invariants_survive_random_moves(seed in 0u64..1000, steps in 1usize..5) {
        let pd = torus_reference(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved = random_moves(&pd, steps, &mut rng).unwrap();
        prop_assert_eq!(jones(&moved).unwrap(), jones(&pd).unwrap());
        prop_assert_eq!(alexander(&moved).unwrap(), alexander(&pd).unwrap());
        prop_assert_eq!(jones(&moved.mirror()).unwrap(), jones(&pd).unwrap().mirror());
    }
}
