mod common;

use semitensor::apps::{
    apsp_dense_doubling, apsp_tiskin, bellman_ford, floyd_warshall_oracle, jacobi, mp3_energy,
    random_digraph, Mp3Inputs,
};
use semitensor::einsum::Mode;
use semitensor::{tropical_i32, Engine, Expr, Layout, Tensor, VirtualWorld};

fn adjacency_as_options(a: &Tensor<i32>) -> Vec<Option<i64>> {
    let inf = a.algebra().add_id().unwrap();
    a.to_values()
        .unwrap()
        .into_iter()
        .map(|w| (w < inf).then_some(i64::from(w)))
        .collect()
}

#[test]
fn bellman_ford_matches_dijkstra_and_never_increases() {
    for seed in 0..8 {
        let n = 20 + seed as usize * 5;
        let a = random_digraph(n, 0.1, (n * n) as i32, seed, Layout::Sparse).unwrap();
        let mut p = Tensor::dense(&[n], &tropical_i32()).unwrap();
        p.write(&[(0, 0)], false).unwrap();
        let mut engine = Engine::new(VirtualWorld::new(4).unwrap());
        let mut previous = p.to_values().unwrap();
        for _ in 0..n {
            let before = p.clone();
            engine
                .accumulate(&mut p, "i", Expr::mul(&a, "ij", &before, "j").unwrap())
                .unwrap();
            let now = p.to_values().unwrap();
            assert!(now.iter().zip(&previous).all(|(x, y)| x <= y));
            previous = now;
        }
        let mut q = Tensor::dense(&[n], &tropical_i32()).unwrap();
        q.write(&[(0, 0)], false).unwrap();
        assert!(bellman_ford(&mut engine, &a, &mut q, n).unwrap());
        let expected = common::dijkstra(n, &adjacency_as_options(&a));
        let inf = tropical_i32().add_id().unwrap();
        let got: Vec<Option<i64>> = q
            .to_values()
            .unwrap()
            .into_iter()
            .map(|d| (d < inf).then_some(i64::from(d)))
            .collect();
        assert_eq!(got, expected, "seed {seed}");
    }
}

#[test]
fn all_pairs_variants_agree_on_random_graphs() {
    for seed in 0..6 {
        let n = 6 + 7 * seed as usize;
        let a = random_digraph(n, 0.2, (n * n) as i32, seed, Layout::Sparse).unwrap();
        let oracle = floyd_warshall_oracle(&a).unwrap().to_values().unwrap();
        let mut engine = Engine::new(VirtualWorld::new(4).unwrap());
        let mut dense = a.to_layout(Layout::Dense).unwrap();
        apsp_dense_doubling(&mut engine, &mut dense, n).unwrap();
        let tiskin = apsp_tiskin(&mut engine, &a).unwrap();
        assert_eq!(dense.to_values().unwrap(), oracle, "seed {seed}");
        assert_eq!(tiskin.distances.to_values().unwrap(), oracle, "seed {seed}");
    }
}

#[test]
fn jacobi_matches_elimination_with_shrinking_residual() {
    for seed in 0..5 {
        let n = 8 + 8 * seed as usize;
        let (a, b) = common::dominant_system(n, 0.3, seed);
        let out = jacobi(&mut Engine::new(VirtualWorld::new(2).unwrap()), &a, &b, 1e-9, 500).unwrap();
        assert!(out.residuals.windows(2).all(|w| w[1] <= w[0]));
        let expected = common::dense_solve(n, &a.to_values().unwrap(), &b.to_values().unwrap());
        for (x, e) in out.x.to_values().unwrap().iter().zip(&expected) {
            assert!((x - e).abs() <= 1e-6, "seed {seed}: {x} vs {e}");
        }
    }
}

#[test]
fn mp3_energy_is_independent_of_storage_and_executor() {
    let sparse = Mp3Inputs::random(3, 5, 0.3, 11, Layout::Sparse).unwrap();
    let dense = sparse.with_layout(Layout::Dense).unwrap();
    let e_sparse = mp3_energy(&mut Engine::new(VirtualWorld::new(6).unwrap()), &sparse).unwrap();
    let e_dense = mp3_energy(&mut Engine::local(), &dense).unwrap();
    let e_reference = mp3_energy(&mut Engine::local().with_mode(Mode::Reference), &sparse).unwrap();
    assert!(common::reals_agree(e_sparse, e_dense, 1e-10));
    assert!(common::reals_agree(e_sparse, e_reference, 1e-10));
}

#[test]
fn mp3_generator_respects_denominator_ranges() {
    let inp = Mp3Inputs::random(4, 6, 0.5, 3, Layout::Sparse).unwrap();
    assert!(inp.ei.to_values().unwrap().iter().all(|e| (-1.0..=0.0).contains(e)));
    assert!(inp.ea.to_values().unwrap().iter().all(|e| (1.0..=2.0).contains(e)));
    assert_eq!(inp.vaibj.dims(), &[6, 4, 6, 4]);
    assert!(inp.vabcd.is_sparse());
}
