mod common;

use proptest::prelude::*;
use semitensor::einsum::{execute_reference, Mode};
use semitensor::{integer_ring, standard_ring, Engine, Expr, Layout, Tensor, Update, VirtualWorld};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn planned_matches_reference(seed in any::<u64>()) {
        let case = common::random_case(seed);
        prop_assert!(common::check_case(&case).is_ok(), "{}", common::check_case(&case).unwrap_err());
    }

    #[test]
    fn dense_copy_of_an_operand_changes_nothing(
        seed in any::<u64>(),
        density in 0.1f64..1.0,
        procs in 1usize..9,
    ) {
        let r = integer_ring();
        let mut a = Tensor::sparse(&[4, 3, 5], &r).unwrap();
        a.fill_random(density, seed, |g| rand::Rng::random_range(g, -9..=9)).unwrap();
        let mut b = Tensor::sparse(&[5, 4], &r).unwrap();
        b.fill_random(density, seed + 1, |g| rand::Rng::random_range(g, -9..=9)).unwrap();
        let mut engine = Engine::new(VirtualWorld::new(procs).unwrap());
        let mut results = Vec::new();
        for la in [Layout::Sparse, Layout::Dense] {
            for lb in [Layout::Sparse, Layout::Dense] {
                let (a2, b2) = (a.to_layout(la).unwrap(), b.to_layout(lb).unwrap());
                let mut c = Tensor::dense(&[4, 4], &r).unwrap();
                engine.assign(&mut c, "il", Expr::mul(&a2, "ijk", &b2, "kl").unwrap()).unwrap();
                results.push(c.to_values().unwrap());
            }
        }
        prop_assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn doubling_the_coefficient_doubles_the_result(seed in any::<u64>(), alpha in -3i64..=3) {
        let r = integer_ring();
        let mut a = Tensor::sparse(&[3, 4], &r).unwrap();
        a.fill_random(0.6, seed, |g| rand::Rng::random_range(g, -9..=9)).unwrap();
        let mut b = Tensor::dense(&[4, 2], &r).unwrap();
        b.fill_random(1.0, seed + 7, |g| rand::Rng::random_range(g, -9..=9)).unwrap();
        let mut engine = Engine::local();
        let mut once = Tensor::dense(&[3, 2], &r).unwrap();
        engine.assign(&mut once, "ij", Expr::mul(&a, "ik", &b, "kj").unwrap().scale(alpha)).unwrap();
        let mut twice = Tensor::dense(&[3, 2], &r).unwrap();
        engine.assign(&mut twice, "ij", Expr::mul(&a, "ik", &b, "kj").unwrap().scale(2 * alpha)).unwrap();
        let doubled: Vec<i64> = once.to_values().unwrap().iter().map(|v| v + v).collect();
        prop_assert_eq!(twice.to_values().unwrap(), doubled);
    }

    #[test]
    fn full_reduction_equals_flat_sum(seed in any::<u64>(), density in 0.05f64..1.0) {
        let r = standard_ring();
        let mut t = Tensor::sparse(&[3, 4, 2, 5], &r).unwrap();
        t.fill_random(density, seed, |g| rand::Rng::random_range(g, -1.0..1.0)).unwrap();
        let flat: f64 = t.nonzeros().iter().map(|e| e.1).sum();
        for mode in [Mode::Reference, Mode::Planned] {
            let mut s = Tensor::scalar(&r).unwrap();
            Engine::local().with_mode(mode).assign(&mut s, "", Expr::copy(&t, "abcd")).unwrap();
            prop_assert!(common::reals_agree(s.get(&[]).unwrap(), flat, 1e-12));
        }
    }
}

#[test]
fn every_role_appears_in_the_generated_cases() {
    use semitensor::einsum::{classify_indices, IndexRole};
    let mut seen = std::collections::HashSet::new();
    let mut diagonal = false;
    for seed in 0..200 {
        let c = common::random_case(seed);
        let mut ops: Vec<(&str, &[usize])> = vec![(&c.left.indices, &c.left.dims)];
        if let Some(r) = &c.right {
            ops.push((&r.indices, &r.dims));
        }
        for info in classify_indices((&c.output.indices, &c.output.dims), &ops).unwrap() {
            seen.insert(info.role);
            diagonal |= info.diagonal;
        }
    }
    for role in [
        IndexRole::Contracted,
        IndexRole::Summed,
        IndexRole::Mapped,
        IndexRole::Batch,
        IndexRole::External,
    ] {
        assert!(seen.contains(&role), "{role:?} never generated");
    }
    assert!(diagonal);
}

#[test]
fn diagonal_operand_with_shared_index() {
    let r = integer_ring();
    let mut t = Tensor::dense(&[3, 3], &r).unwrap();
    t.write(&(0..9).map(|i| (i, i as i64 + 1)).collect::<Vec<_>>(), false).unwrap();
    let mut v = Tensor::dense(&[3], &r).unwrap();
    v.write(&[(0, 1), (1, 10), (2, 100)], false).unwrap();
    let mut planned = Tensor::dense(&[3], &r).unwrap();
    Engine::new(VirtualWorld::new(3).unwrap())
        .assign(&mut planned, "i", Expr::mul(&t, "ii", &v, "i").unwrap())
        .unwrap();
    let mut reference = Tensor::dense(&[3], &r).unwrap();
    execute_reference(&mut reference, "i", Update::Assign, &Expr::mul(&t, "ii", &v, "i").unwrap()).unwrap();
    assert_eq!(planned.to_values().unwrap(), vec![1, 50, 900]);
    assert_eq!(reference.to_values().unwrap(), vec![1, 50, 900]);
}
