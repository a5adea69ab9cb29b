use serde::Serialize;

use super::ProblemShape;

/// Quantities the communication lower bound is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub z1: f64,
    pub z2: f64,
    /// `n`, `z1`, `z2` sorted ascending.
    pub r: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundCase {
    /// `p > r2 r3 / r1^2`: three-dimensional regime.
    Cubic,
    /// `r2 r3 / r1^2 >= p > r3 / r2`: two large dimensions are split.
    Square,
    /// `r3 / r2 >= p`: only the largest dimension is split.
    Linear,
}

impl BoundInputs {
    pub fn of(shape: &ProblemShape) -> Self {
        let z = shape.z as f64;
        let z1 = (shape.m as f64).min(z.sqrt()).max(1.0);
        let z2 = (shape.k as f64).min(z / z1).max(1.0);
        let mut r = [shape.n as f64, z1, z2];
        r.sort_by(f64::total_cmp);
        BoundInputs { z1, z2, r }
    }

    pub fn case(&self, p: f64) -> BoundCase {
        let [r1, r2, r3] = self.r;
        if p > r2 * r3 / (r1 * r1) {
            BoundCase::Cubic
        } else if p > r3 / r2 {
            BoundCase::Square
        } else {
            BoundCase::Linear
        }
    }

    /// Evaluate one branch regardless of which one `p` selects.
    pub fn branch(&self, case: BoundCase, p: f64, memory: f64) -> f64 {
        let [r1, r2, r3] = self.r;
        match case {
            BoundCase::Cubic => {
                let volume = r1 * r2 * r3;
                let memory_term = if memory.is_finite() {
                    volume / (p * memory.sqrt())
                } else {
                    0.0
                };
                memory_term + (volume / p).powf(2.0 / 3.0)
            }
            BoundCase::Square => r1 * (r2 * r3 / p).sqrt(),
            BoundCase::Linear => r1 * r2,
        }
    }
}

/// Worst-case communication lower bound for multiplying an `m x k` matrix
/// with `z` nonzeros by a dense `k x n` matrix on `p` processes.
pub fn lower_bound(shape: &ProblemShape) -> f64 {
    let inputs = BoundInputs::of(shape);
    let p = shape.p as f64;
    inputs.branch(
        inputs.case(p),
        p,
        shape.memory.unwrap_or(f64::INFINITY),
    )
}
