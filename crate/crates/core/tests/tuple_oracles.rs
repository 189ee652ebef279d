mod common;

use dsp_core::jnf::centralizer_dim_of_jnf;
use dsp_core::spectra::Mode;
use dsp_core::tuple_lab::{self, MatrixTuple};
use dsp_core::workbench::builtin_corpus;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn commutator_map_matches_centralizer(n in 1usize..=4, count in 2usize..=4, seed in any::<u64>()) {
        let t = common::random_tuple(&mut common::rng(seed), n, count);
        prop_assert_eq!(tuple_lab::commut_surjective(&t), tuple_lab::has_trivial_centralizer(&t));
    }

    #[test]
    fn irreducible_tuples_have_trivial_centralizer(n in 1usize..=4, count in 2usize..=4, seed in any::<u64>()) {
        let t = common::random_tuple(&mut common::rng(seed), n, count);
        let irreducible = tuple_lab::is_irreducible(&t);
        prop_assert_eq!(irreducible, tuple_lab::generated_algebra_dim(&t) == n * n);
        if irreducible {
            prop_assert!(tuple_lab::has_trivial_centralizer(&t));
        }
        prop_assert_eq!(tuple_lab::orbit_dim(&t) + tuple_lab::centralizer_dim(&t), n * n);
    }

    #[test]
    fn realized_jordan_matrix_has_predicted_centralizer(n in 1u32..=6, seed in any::<u64>()) {
        let j = common::random_jnf(&mut common::rng(seed), n);
        let (m, eigenvalues, relabeled) = common::realize(&j);
        let t = MatrixTuple::new(Mode::Additive, vec![m.clone()], vec![eigenvalues.clone()]).unwrap();
        prop_assert_eq!(tuple_lab::centralizer_dim(&t) as u64, centralizer_dim_of_jnf(&j));
        prop_assert_eq!(tuple_lab::jnf_of(&m, &eigenvalues).unwrap(), relabeled.clone());
        prop_assert!(tuple_lab::class_membership(&m, &relabeled));
    }

    #[test]
    fn reports_are_conjugation_invariant(n in 1usize..=4, count in 2usize..=4, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_tuple(&mut rng, n, count);
        let g = common::random_conjugator(&mut rng, n);
        let moved = t.conjugate(&g).unwrap();
        prop_assert_eq!(tuple_lab::analyze(&moved).unwrap(), tuple_lab::analyze(&t).unwrap());
        let other = common::random_tuple(&mut rng, n, count);
        prop_assert_eq!(
            tuple_lab::intertwiner_dim(&moved, &other).unwrap(),
            tuple_lab::intertwiner_dim(&t, &other).unwrap()
        );
    }
}

#[test]
fn corpus_tuples_are_conjugation_invariant() {
    let mut rng = common::rng(7);
    for fx in builtin_corpus().unwrap() {
        for (name, t) in &fx.matrix_tuples {
            let base = tuple_lab::analyze(t).unwrap();
            for _ in 0..2 {
                let g = common::random_conjugator(&mut rng, t.n());
                let moved = tuple_lab::analyze(&t.conjugate(&g).unwrap()).unwrap();
                assert_eq!(moved, base, "{} / {name}", fx.name);
            }
        }
    }
}

#[test]
fn direct_sums_have_a_larger_centralizer() {
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let a = common::random_tuple(&mut rng, 2, 3);
        let b = common::random_tuple(&mut rng, 2, 3);
        let s = a.direct_sum(&b).unwrap();
        assert!(tuple_lab::centralizer_dim(&s) >= 2);
        assert!(!tuple_lab::is_irreducible(&s));
        assert!(!tuple_lab::commut_surjective(&s));
    }
}
