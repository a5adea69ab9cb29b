use crate::algebra::UnaryTransform;
use crate::einsum::{transform1, Engine, Expr};
use crate::tensor::Tensor;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct JacobiOutcome {
    pub x: Tensor<f64>,
    pub iterations: usize,
    /// `‖b − A·x‖₂` after every iteration.
    pub residuals: Vec<f64>,
}

/// Solve `A x = b` by Jacobi iteration, starting from `x = 0`.
///
/// Each step computes `x ← d ⊙ (b − R·x)` where `d` holds the inverted
/// diagonal of `A` and `R` is `A` with its diagonal removed. Stops once the
/// residual norm is at most `tol`.
pub fn jacobi(
    engine: &mut Engine,
    a: &Tensor<f64>,
    b: &Tensor<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<JacobiOutcome> {
    let n = b.len();
    let r_alg = a.algebra().clone();
    let mut d = Tensor::dense(&[n], &r_alg)?;
    engine.assign(&mut d, "i", Expr::copy(a, "ii"))?;
    if let Some(i) = d.to_values()?.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroDiagonal(i));
    }
    transform1(&mut d, "i", &UnaryTransform::new(|v: &mut f64| *v = 1.0 / *v))?;

    let mut r = Tensor::sparse(&[n, n], &r_alg)?;
    engine.assign(&mut r, "ij", Expr::copy(a, "ij"))?;
    engine.assign(&mut r, "ii", Expr::constant(0.0))?;

    let mut x = Tensor::dense(&[n], &r_alg)?;
    let mut residual = Tensor::dense(&[n], &r_alg)?;
    let mut residuals = Vec::new();
    for iteration in 1..=max_iter {
        let previous = x.clone();
        engine.assign(&mut x, "i", Expr::mul(&r, "ij", &previous, "j")?.scale(-1.0))?;
        engine.accumulate(&mut x, "i", Expr::copy(b, "i"))?;
        let unscaled = x.clone();
        engine.assign(&mut x, "i", Expr::mul(&unscaled, "i", &d, "i")?)?;

        engine.assign(&mut residual, "i", Expr::copy(b, "i"))?;
        engine.accumulate(&mut residual, "i", Expr::mul(a, "ij", &x, "j")?.scale(-1.0))?;
        let norm = residual.norm2()?;
        residuals.push(norm);
        if norm <= tol {
            return Ok(JacobiOutcome {
                x,
                iterations: iteration,
                residuals,
            });
        }
    }
    Err(Error::NotConverged(max_iter))
}
