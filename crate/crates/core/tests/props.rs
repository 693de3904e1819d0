use proptest::prelude::*;
use roapprox::exact::{exact_opt, validate, Instance, ProblemKind, FAMILY_CAP};
use roapprox::generate::{random_family, random_graph, rng};
use roapprox::layered::{bd_maximal_is, bd_vc_2approx, bounded_mult_hs};
use roapprox::staggered::{hs_bounded_k, Budgeted};
use roapprox::{Meter, Mode};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn memoizing_never_changes_the_answer(seed in any::<u64>(), n in 1usize..8, delta in 1usize..4) {
        let mut r = rng(seed);
        let g = random_graph(n, delta, 0.6, &mut r);
        let m = Meter::new();
        let vc = bd_vc_2approx(&g, None, Mode::Layered, &m);
        prop_assert_eq!(&vc, &bd_vc_2approx(&g, None, Mode::Memoized, &m));
        prop_assert!(validate(ProblemKind::VertexCover, Instance::Graph(&g), &sorted(vc.flatten())).ok);
        let is = bd_maximal_is(&g, None, Mode::Layered, &m);
        prop_assert_eq!(&is, &bd_maximal_is(&g, None, Mode::Memoized, &m));

        let f = random_family(n, n.min(6), 2, &mut r);
        let hs = bounded_mult_hs(&f, None, Mode::Layered, &m).unwrap();
        prop_assert_eq!(&hs, &bounded_mult_hs(&f, None, Mode::Memoized, &m).unwrap());
        prop_assert!(validate(ProblemKind::HittingSet, Instance::Family(&f), &sorted(hs.flatten())).ok);
    }

    #[test]
    fn budgeted_hitting_set_is_sound(seed in any::<u64>(), n in 1usize..9, k in 0usize..4, half in any::<bool>()) {
        let f = random_family(n, 2 * n, 3, &mut rng(seed));
        let eps = if half { 0.5 } else { 1.0 };
        let opt = exact_opt(ProblemKind::HittingSet, Instance::Family(&f), FAMILY_CAP).unwrap().value;
        match hs_bounded_k(&f, k, eps, Mode::Memoized, &Meter::new()).unwrap() {
            Budgeted::No => prop_assert!(opt > k),
            Budgeted::Found(s) => {
                prop_assert!(validate(ProblemKind::HittingSet, Instance::Family(&f), &sorted(s)).ok);
            }
        }
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}
