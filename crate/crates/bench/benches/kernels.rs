use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;
use semitensor::apps::{apsp_tiskin, mp3_energy, random_digraph, Mp3Inputs};
use semitensor::einsum::{execute_reference, Mode};
use semitensor::planner::choose_plan;
use semitensor::simgrid::{replay_summa, SummaInput};
use semitensor::{
    standard_ring, Engine, Expr, Layout, PlannerConfig, ProblemShape, Tensor, Update, VirtualWorld,
};

fn spmm_operands(n: usize, k: usize, density: f64) -> (Tensor<f64>, Tensor<f64>) {
    let r = standard_ring();
    let mut a = Tensor::sparse(&[n, n], &r).unwrap();
    a.fill_random(density, 1, |g| g.random_range(-1.0..1.0)).unwrap();
    let mut b = Tensor::dense(&[n, k], &r).unwrap();
    b.fill_random(1.0, 2, |g| g.random_range(-1.0..1.0)).unwrap();
    (a, b)
}

fn spmm(c: &mut Criterion) {
    let mut group = c.benchmark_group("spmm");
    let (n, k) = (512, 64);
    for density in [0.01, 0.1] {
        let (a, b) = spmm_operands(n, k, density);
        for procs in [1, 16] {
            group.bench_with_input(
                BenchmarkId::new(format!("planned/d={density}"), procs),
                &procs,
                |bench, &procs| {
                    let mut engine = Engine::new(VirtualWorld::new(procs).unwrap());
                    bench.iter(|| {
                        let mut out = Tensor::dense(&[n, k], &standard_ring()).unwrap();
                        engine
                            .assign(&mut out, "ij", Expr::mul(&a, "ik", &b, "kj").unwrap())
                            .unwrap();
                        engine.take_reports();
                        out
                    });
                },
            );
        }
    }
    let (a, b) = spmm_operands(128, 16, 0.05);
    group.bench_function("reference/n=128", |bench| {
        bench.iter(|| {
            let mut out = Tensor::dense(&[128, 16], &standard_ring()).unwrap();
            execute_reference(&mut out, "ij", Update::Assign, &Expr::mul(&a, "ik", &b, "kj").unwrap())
                .unwrap();
            out
        });
    });
    group.finish();
}

fn planning(c: &mut Criterion) {
    let config = PlannerConfig::default();
    c.bench_function("choose_plan/p=64", |bench| {
        let shape = ProblemShape::new(4096, 4096, 512, 167_772, 64);
        bench.iter(|| choose_plan(&shape, &config).unwrap());
    });
    let mut pattern: Vec<(usize, usize)> =
        (0..20_000).map(|i| ((i * 7919) % 1024, (i * 104_729) % 1024)).collect();
    pattern.sort_unstable();
    pattern.dedup();
    c.bench_function("replay_summa/[4,4,4]", |bench| {
        let input = SummaInput {
            m: 1024,
            k: 1024,
            n: 128,
            a_entries: &pattern,
            b_entries: None,
        };
        bench.iter(|| replay_summa(&input, [4, 4, 4]));
    });
}

fn applications(c: &mut Criterion) {
    let graph = random_digraph(64, 0.1, 64 * 64, 3, Layout::Sparse).unwrap();
    c.bench_function("apsp_tiskin/n=64", |bench| {
        let mut engine = Engine::new(VirtualWorld::new(4).unwrap());
        bench.iter(|| {
            let out = apsp_tiskin(&mut engine, &graph).unwrap();
            engine.take_reports();
            out
        });
    });
    let inputs = Mp3Inputs::random(4, 8, 0.1, 5, Layout::Sparse).unwrap();
    for mode in [Mode::Planned, Mode::Reference] {
        c.bench_function(&format!("mp3/{mode:?}/m=4,n=8"), |bench| {
            let mut engine = Engine::new(VirtualWorld::new(4).unwrap()).with_mode(mode);
            bench.iter(|| {
                let e = mp3_energy(&mut engine, &inputs).unwrap();
                engine.take_reports();
                e
            });
        });
    }
}

criterion_group!(benches, spmm, planning, applications);
criterion_main!(benches);
