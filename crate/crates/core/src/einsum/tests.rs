use super::*;
use crate::algebra::{Algebra, BinaryFunction, BinaryTransform, TernaryTransform, UnaryTransform};
use crate::simgrid::VirtualWorld;
use crate::{integer_ring, standard_ring, tropical_i32, Layout};

fn dense_f64(dims: &[usize], values: &[f64]) -> Tensor<f64> {
    let mut t = Tensor::dense(dims, &standard_ring()).unwrap();
    let pairs: Vec<(usize, f64)> = values.iter().copied().enumerate().collect();
    t.write(&pairs, false).unwrap();
    t
}

fn engine(procs: usize, grid: Option<[usize; 3]>) -> Engine {
    Engine::new(VirtualWorld::new(procs).unwrap()).with_grid(grid)
}

#[test]
fn identity_times_matrix() {
    let i = dense_f64(&[2, 2], &[1.0, 0.0, 0.0, 1.0]);
    let b = dense_f64(&[2, 2], &[3.0, -1.0, 2.5, 7.0]);
    for mode in [Mode::Reference, Mode::Planned] {
        let mut c = Tensor::dense(&[2, 2], &standard_ring()).unwrap();
        Engine::local()
            .with_mode(mode)
            .assign(&mut c, "ij", Expr::mul(&i, "ik", &b, "kj").unwrap())
            .unwrap();
        assert_eq!(c.to_values().unwrap(), b.to_values().unwrap());
    }
}

#[test]
fn vector_sum_and_superdiagonal() {
    let v = dense_f64(&[3], &[1.0, 2.0, 3.0]);
    let mut q = Tensor::scalar(&standard_ring()).unwrap();
    Engine::local().assign(&mut q, "", Expr::copy(&v, "i")).unwrap();
    assert_eq!(q.get(&[]).unwrap(), 6.0);

    let mut t = Tensor::sparse(&[3, 3, 3], &standard_ring()).unwrap();
    t.write(&[(0, 1.0), (13, 2.0), (26, 3.0), (5, 40.0)], false).unwrap();
    let mut s = Tensor::scalar(&standard_ring()).unwrap();
    Engine::local().assign(&mut s, "", Expr::copy(&t, "iii")).unwrap();
    assert_eq!(s.get(&[]).unwrap(), 6.0);
}

#[test]
fn tropical_relaxation() {
    let ts = tropical_i32();
    let inf = ts.add_id().unwrap();
    let mut a = Tensor::dense(&[2, 2], &ts).unwrap();
    a.write(&[(0, 0), (1, inf), (2, 2), (3, 0)], false).unwrap();
    let mut p = Tensor::dense(&[2], &ts).unwrap();
    p.write(&[(0, 0)], false).unwrap();
    let before = p.clone();
    Engine::local()
        .accumulate(&mut p, "i", Expr::mul(&a, "ij", &before, "j").unwrap())
        .unwrap();
    assert_eq!(p.to_values().unwrap(), vec![0, 2]);
}

#[test]
fn diagonal_write_gives_identity() {
    let mut m = Tensor::dense(&[3, 3], &standard_ring()).unwrap();
    m.write(&[(1, 5.0)], false).unwrap();
    Engine::local().assign(&mut m, "ii", Expr::constant(1.0)).unwrap();
    assert_eq!(
        m.to_values().unwrap(),
        vec![1.0, 5.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]
    );
}

#[test]
fn mapped_and_summed_indices() {
    let g = dense_f64(&[2, 3], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    for mode in [Mode::Reference, Mode::Planned] {
        let mut f = Tensor::dense(&[4, 3], &standard_ring()).unwrap();
        Engine::local()
            .with_mode(mode)
            .assign(&mut f, "ij", Expr::copy(&g, "kj"))
            .unwrap();
        assert_eq!(f.to_values().unwrap(), [5.0, 7.0, 9.0].repeat(4));
    }
}

#[test]
fn coefficient_scales_every_term() {
    let a = dense_f64(&[2, 2], &[1.0, 2.0, 3.0, 4.0]);
    let b = dense_f64(&[2, 2], &[1.0, 1.0, 1.0, 1.0]);
    let mut c = Tensor::dense(&[2, 2], &standard_ring()).unwrap();
    engine(4, None)
        .assign(&mut c, "ij", Expr::mul(&a, "ik", &b, "kj").unwrap().scale(0.5))
        .unwrap();
    assert_eq!(c.to_values().unwrap(), vec![1.5, 1.5, 3.5, 3.5]);
}

#[test]
fn single_process_plan_moves_nothing() {
    let a = dense_f64(&[3, 3], &[1.0; 9]);
    let mut c = Tensor::dense(&[3, 3], &standard_ring()).unwrap();
    let mut e = Engine::local();
    e.assign(&mut c, "ij", Expr::mul(&a, "ik", &a, "kj").unwrap()).unwrap();
    let report = &e.reports()[0];
    assert_eq!(report.plan.grid(), [1, 1, 1]);
    assert_eq!(report.sim.total_words, 0);
    assert_eq!(report.label, "ik,kj->ij");
}

#[test]
fn dense_four_by_four_on_two_by_two_grid() {
    let vals: Vec<f64> = (0..16).map(f64::from).collect();
    let a = dense_f64(&[4, 4], &vals);
    let b = dense_f64(&[4, 4], &vals);
    let mut planned = Tensor::dense(&[4, 4], &standard_ring()).unwrap();
    let mut e = engine(4, Some([2, 2, 1]));
    e.assign(&mut planned, "ij", Expr::mul(&a, "ik", &b, "kj").unwrap()).unwrap();
    let mut reference = Tensor::dense(&[4, 4], &standard_ring()).unwrap();
    execute_reference(&mut reference, "ij", Update::Assign, &Expr::mul(&a, "ik", &b, "kj").unwrap())
        .unwrap();
    assert_eq!(planned.to_values().unwrap(), reference.to_values().unwrap());
    assert!(e.reports()[0].sim.received.iter().all(|&r| r == 8));
}

#[test]
fn sparse_operand_words_bounded_by_its_entries() {
    let mut a = Tensor::sparse(&[4, 4], &standard_ring()).unwrap();
    a.write(&[(0, 1.0), (5, 2.0), (10, 3.0), (15, 4.0)], false).unwrap();
    let b = dense_f64(&[4, 4], &[1.0; 16]);
    let mut c = Tensor::dense(&[4, 4], &standard_ring()).unwrap();
    let mut e = engine(4, Some([1, 2, 2]));
    e.assign(&mut c, "ij", Expr::mul(&a, "ik", &b, "kj").unwrap()).unwrap();
    assert!(e.reports()[0].sim.phases.a_max_received <= 4);
    assert_eq!(c.to_values().unwrap(), vec![1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0, 3.0, 4.0, 4.0, 4.0, 4.0]);
}

#[test]
fn fixed_grid_must_fit_the_world() {
    let a = dense_f64(&[2, 2], &[1.0; 4]);
    let mut c = Tensor::dense(&[2, 2], &standard_ring()).unwrap();
    let err = engine(4, Some([2, 1, 1]))
        .assign(&mut c, "ij", Expr::mul(&a, "ik", &a, "kj").unwrap())
        .unwrap_err();
    assert!(matches!(err, Error::PlanMismatch(_)));
}

#[test]
fn foreign_plan_is_rejected() {
    let a = dense_f64(&[2, 2], &[1.0; 4]);
    let shape = crate::ProblemShape::new(3, 3, 3, 9, 1);
    let plan = crate::planner::choose_plan(&shape, &crate::PlannerConfig::default()).unwrap();
    let request = PlanRequest {
        grid: GridChoice::Plan(plan),
        ..PlanRequest::default()
    };
    let mut c = Tensor::dense(&[2, 2], &standard_ring()).unwrap();
    let err = execute_planned(
        &mut c,
        "ij",
        Update::Assign,
        &Expr::mul(&a, "ik", &a, "kj").unwrap(),
        &request,
    )
    .unwrap_err();
    assert!(matches!(err, Error::PlanMismatch(_)));
}

#[test]
fn weight_projection_and_lift() {
    let paths = crate::path_semiring();
    let mut p = Tensor::dense(&[2, 2], &paths).unwrap();
    p.write(
        &[(0, crate::PathElement::new(0, 0)), (1, crate::PathElement::new(4, 2))],
        false,
    )
    .unwrap();
    let to_weight = crate::UnaryFunction::new(|e: crate::PathElement| e.w);
    let mut w = Tensor::dense(&[2, 2], &tropical_i32()).unwrap();
    Engine::local()
        .assign(&mut w, "ij", Expr::map(&to_weight, &p, "ij").unwrap())
        .unwrap();
    assert_eq!(&w.to_values().unwrap()[..2], &[0, 4]);

    let lift = crate::UnaryFunction::new(|x: i32| crate::PathElement::new(x, 1));
    let mut back = Tensor::dense(&[2, 2], &paths).unwrap();
    Engine::local()
        .assign(&mut back, "ij", Expr::map(&lift, &w, "ij").unwrap())
        .unwrap();
    assert_eq!(back.get(&[0, 1]).unwrap(), crate::PathElement::new(4, 1));
}

#[test]
fn non_distributive_functions_are_rejected() {
    let v = dense_f64(&[2], &[1.0, 2.0]);
    let f = crate::UnaryFunction::new(|x: f64| x * x).non_distributive();
    assert!(matches!(Expr::map(&f, &v, "i"), Err(Error::NonDistributive)));
}

/// Two-dimensional particles; forces combine under a monoid without
/// multiplication.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Particle {
    x: f64,
    y: f64,
    coeff: f64,
    px: f64,
    py: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Force {
    fx: f64,
    fy: f64,
}

fn interact(a: Particle, b: Particle) -> Force {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 {
        return Force { fx: 0.0, fy: 0.0 };
    }
    let s = a.coeff * b.coeff / (d2 * d2.sqrt());
    Force {
        fx: s * dx,
        fy: s * dy,
    }
}

#[test]
fn n_body_forces_and_momentum() {
    let particles = Algebra::set("particle");
    let forces = Algebra::monoid(
        "force",
        Force { fx: 0.0, fy: 0.0 },
        |a: Force, b: Force| Force {
            fx: a.fx + b.fx,
            fy: a.fy + b.fy,
        },
    );
    let p0 = Particle { x: 0.0, y: 0.0, coeff: 1.0, px: 0.0, py: 0.0 };
    let p1 = Particle { x: 3.0, y: 4.0, coeff: 2.0, px: 1.0, py: 0.0 };
    let mut p = Tensor::sparse(&[2], &particles).unwrap();
    p.write(&[(0, p0), (1, p1)], false).unwrap();

    let f = BinaryFunction::new(interact);
    let expected = Force {
        fx: interact(p0, p0).fx + interact(p0, p1).fx,
        fy: interact(p0, p0).fy + interact(p0, p1).fy,
    };
    for mode in [Mode::Reference, Mode::Planned] {
        let mut out = Tensor::dense(&[2], &forces).unwrap();
        Engine::local()
            .with_mode(mode)
            .accumulate(&mut out, "i", Expr::apply(&f, &p, "i", &p, "j").unwrap())
            .unwrap();
        assert_eq!(out.get(&[0]).unwrap(), expected);
    }

    let mut out = Tensor::dense(&[2], &forces).unwrap();
    out.write(&[(0, expected)], false).unwrap();
    let push = BinaryTransform::new(|f: Force, q: &mut Particle| {
        q.px += q.coeff * f.fx;
        q.py += q.coeff * f.fy;
    });
    transform2(&out, "i", &mut p, "i", &push).unwrap();
    let moved = p.get(&[0]).unwrap();
    assert_eq!((moved.px, moved.py), (expected.fx, expected.fy));
}

#[test]
fn transforms_from_the_examples() {
    let mut d = dense_f64(&[2], &[2.0, 4.0]);
    transform1(&mut d, "i", &UnaryTransform::new(|v: &mut f64| *v = 1.0 / *v)).unwrap();
    assert_eq!(d.to_values().unwrap(), vec![0.5, 0.25]);

    let a = dense_f64(&[2], &[1.0, 1.0]);
    let b = dense_f64(&[2], &[1.0, 1.0]);
    let mut c = dense_f64(&[2, 2], &[1.0; 4]);
    let t = TernaryTransform::new(|x: f64, y: f64, z: &mut f64| *z /= x + y);
    transform3(&a, "i", &b, "j", &mut c, "ij", &t).unwrap();
    assert_eq!(c.to_values().unwrap(), vec![0.5; 4]);
}

#[test]
fn missing_output_addition_only_fails_when_terms_meet() {
    let ints = integer_ring();
    let set = Algebra::<i64>::set("labels");
    let mut v = Tensor::sparse(&[3], &ints).unwrap();
    v.write(&[(0, 1), (2, 5)], false).unwrap();
    let f = crate::UnaryFunction::new(|x: i64| x * 10);
    let mut out = Tensor::sparse(&[3], &set).unwrap();
    Engine::local()
        .assign(&mut out, "i", Expr::map(&f, &v, "i").unwrap())
        .unwrap();
    assert_eq!(out.nonzeros(), vec![(0, 10), (2, 50)]);
    let mut total = Tensor::sparse(&[], &set).unwrap();
    for mode in [Mode::Reference, Mode::Planned] {
        let err = Engine::local()
            .with_mode(mode)
            .assign(&mut total, "", Expr::map(&f, &v, "i").unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::MissingOperation { .. }));
    }
}

#[test]
fn sparse_output_drops_identity_results() {
    let a = dense_f64(&[2, 2], &[1.0, -1.0, 1.0, -1.0]);
    let ones = dense_f64(&[2], &[1.0, 1.0]);
    let mut y = Tensor::new(&[2], &[crate::Symmetry::NS], Layout::Sparse, &standard_ring()).unwrap();
    Engine::local()
        .assign(&mut y, "i", Expr::mul(&a, "ij", &ones, "j").unwrap())
        .unwrap();
    assert_eq!(y.nnz(), 0);
}
