use dsp_core::exact_linalg::{q, qi, RatMatrix};
use dsp_core::jnf::{self, Jnf, Partition};
use dsp_core::reduction::{kappa, solvable_generic, verdicts_over_choices, JnfTuple, Verdict};
use dsp_core::spectra::{self, Genericity, GenericityVerdict};
use dsp_core::tuple_lab;
use dsp_core::workbench::{builders, builtin_corpus, corpus, fixture, run_fixture};

fn parts(p: &[u32]) -> Partition {
    Partition::new(p.to_vec()).unwrap()
}

#[test]
fn every_example_fixture_passes() {
    let corpus = builtin_corpus().unwrap();
    assert_eq!(corpus.len(), 5);
    for fx in &corpus {
        let report = run_fixture(fx);
        let failed: Vec<_> = report.results.iter().filter(|r| !r.pass).map(|r| &r.name).collect();
        assert!(failed.is_empty(), "{}: {failed:?}", fx.name);
    }
}

#[test]
fn duals_and_corresponding_forms() {
    assert_eq!(parts(&[4, 3, 3]).dual(), parts(&[3, 3, 3, 1]));
    assert_eq!(parts(&[3, 2]).dual(), parts(&[2, 2, 1]));
    let j = Jnf::from_blocks(vec![("x", vec![4, 3, 3]), ("y", vec![3, 2])]).unwrap();
    let mut m = jnf::corresponding_diagonal(&j).multiplicities();
    m.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(m, vec![3, 3, 3, 2, 2, 1, 1]);
    let single = jnf::corresponding_single_eigenvalue(&j);
    assert_eq!(single.blocks()[0].1, parts(&[7, 5, 3]));
}

#[test]
fn size_four_rigid_tuples_reduce_through_three() {
    for t in [corpus::j_star(), corpus::j_star_star()] {
        let trace = solvable_generic(&t);
        assert_eq!(trace.verdict, Verdict::Solvable);
        assert_eq!(trace.chain(), vec![4, 3, 1]);
        assert!(trace.stages.iter().all(|s| s.kappa == 2));
        assert_eq!(verdicts_over_choices(&t).into_iter().collect::<Vec<_>>(), vec![Verdict::Solvable]);
        assert_eq!(tuple_lab::expected_dim(&t), 15);
    }
}

#[test]
fn fourth_eigenvalue_decides_genericity() {
    let generic = corpus::spectrum_size_four_quadruple(q(1, 4));
    assert_eq!(spectra::classify(&generic).unwrap(), Genericity::Generic);
    assert_eq!(spectra::basic_relation(&generic).unwrap().unwrap().q, 2);
    let minus_one = corpus::spectrum_size_four_quadruple(q(1, 2));
    let Genericity::RelativelyGeneric(basic) = spectra::classify(&minus_one).unwrap() else {
        panic!("expected only the basic relation");
    };
    assert_eq!((basic.q, basic.m), (2, 2));
}

#[test]
fn size_four_triple_has_the_pair_relation() {
    let s = corpus::spectrum_three_classes_size_four();
    let GenericityVerdict::NonGeneric(witnesses) = spectra::is_generic(&s).unwrap() else {
        panic!("expected a relation");
    };
    assert!(witnesses.iter().any(|w| w.size == 2 && w.counts == vec![vec![1, 1, 0]; 3]));
    let l = builders::build_l_triple().unwrap();
    let b = builders::build_b_triple().unwrap();
    let spaces = builders::extension_spaces(&l, &b).unwrap();
    let dim = |v: Vec<Vec<_>>| RatMatrix::from_rows(v).unwrap().rank();
    assert_eq!((dim(spaces.t_space), dim(spaces.q_space)), (5, 4));
}

#[test]
fn reducible_quadruples_with_a_size_one_relation() {
    let s = corpus::spectrum_four_classes_size_three();
    let GenericityVerdict::NonGeneric(witnesses) = spectra::is_generic(&s).unwrap() else {
        panic!("expected a relation");
    };
    assert!(witnesses.iter().any(|w| w.size == 1 && w.counts == vec![vec![1, 0]; 4]));

    let first = builders::example4_first();
    let second = builders::example4_second();
    for t in [&first, &second] {
        let product = RatMatrix::product(t.matrices().iter()).unwrap();
        assert!(product.is_identity());
        assert!(!tuple_lab::is_irreducible(t));
    }
    assert_eq!(tuple_lab::centralizer_dim(&first), 1);
    assert_eq!(tuple_lab::centralizer_dim(&second), 2);
    assert_eq!(tuple_lab::tangent_dim(&first).unwrap(), 8);
    let classes = JnfTuple::new(tuple_lab::jnfs_of(&first).unwrap()).unwrap();
    assert_eq!(tuple_lab::expected_dim(&classes), 8);
    assert_eq!(kappa(&classes), 2);
}

#[test]
fn inequivalent_quadruples_sum_to_rigidity_zero() {
    let (b, g) = builders::example5_pair().unwrap();
    assert_eq!(tuple_lab::intertwiner_dim(&b, &g).unwrap(), 0);
    let sum = b.direct_sum(&g).unwrap();
    let classes = JnfTuple::new(tuple_lab::jnfs_of(&sum).unwrap()).unwrap();
    assert_eq!(kappa(&classes), 0);
    assert_eq!(tuple_lab::expected_dim(&classes), 17);
    assert_eq!(tuple_lab::centralizer_dim(&sum), 2);
    assert!(tuple_lab::tangent_dim(&sum).unwrap() >= 18);
}

#[test]
fn fixture_families() {
    let n = builders::build_n_quadruple().unwrap();
    let p = builders::build_p_quadruple().unwrap();
    assert_eq!(tuple_lab::tangent_dim(&n).unwrap(), 3);
    assert_eq!(tuple_lab::tangent_dim(&p).unwrap(), 5);
    let triple = builders::build_rigid_triple_n().unwrap();
    let w = builders::build_w_point(&triple, &builders::upper_right_r4()).unwrap();
    let u = builders::build_u_point(&triple, &p).unwrap();
    let y = builders::build_y_point(&triple).unwrap();
    assert_eq!(tuple_lab::centralizer_dim(&w), 2);
    assert_eq!(tuple_lab::centralizer_dim(&u), 2);
    assert_eq!(tuple_lab::orbit_dim(&y), 12);
    let r4 = w.matrices()[3].block(0, 2, 2, 2).unwrap();
    assert_eq!(r4.trace().unwrap(), qi(0));
    assert_eq!(r4.rank(), 1);
    assert!(r4.matmul(&r4).unwrap().is_zero());
}

#[test]
fn unknown_example_name_is_rejected() {
    assert!(fixture("example0").is_err());
    assert!(fixture("example3").is_ok());
}
