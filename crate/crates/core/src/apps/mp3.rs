use rand::Rng;

use crate::algebra::{standard_ring, UnaryTransform};
use crate::einsum::{transform1, Engine, Expr};
use crate::tensor::{Layout, Tensor};
use crate::{Error, Result};

/// Orbital energies and interaction blocks for `m` occupied and `n` virtual
/// orbitals. Block names give the index order: `vaibj` is `n × m × n × m`.
#[derive(Debug, Clone)]
pub struct Mp3Inputs {
    pub ei: Tensor<f64>,
    pub ea: Tensor<f64>,
    pub fab: Tensor<f64>,
    pub fij: Tensor<f64>,
    pub vabij: Tensor<f64>,
    pub vijab: Tensor<f64>,
    pub vabcd: Tensor<f64>,
    pub vijkl: Tensor<f64>,
    pub vaibj: Tensor<f64>,
}

impl Mp3Inputs {
    /// Synthetic system: occupied energies in `[-1, 0]`, virtual energies in
    /// `[1, 2]`, one-electron blocks dense in `[-1, 1]` and two-electron
    /// blocks with entries in `[-1, 1]` kept with probability `density`.
    /// The two-electron blocks are stored with `layout`; their content does
    /// not depend on it.
    pub fn random(m: usize, n: usize, density: f64, seed: u64, layout: Layout) -> Result<Self> {
        let r = standard_ring();
        let block = |dims: &[usize], salt: u64, density: f64| -> Result<Tensor<f64>> {
            let mut t = Tensor::sparse(dims, &r)?;
            t.fill_random(density, seed.wrapping_mul(31).wrapping_add(salt), |rng| {
                rng.random_range(-1.0..=1.0)
            })?;
            Ok(t)
        };
        let energies = |len: usize, salt: u64, lo: f64| -> Result<Tensor<f64>> {
            let mut t = Tensor::sparse(&[len], &r)?;
            t.fill_random(1.0, seed.wrapping_mul(31).wrapping_add(salt), |rng| {
                rng.random_range(lo..=lo + 1.0)
            })?;
            t.to_layout(Layout::Dense)
        };
        let stored = |t: Tensor<f64>| t.to_layout(layout);
        Ok(Mp3Inputs {
            ei: energies(m, 1, -1.0)?,
            ea: energies(n, 2, 1.0)?,
            fab: block(&[n, n], 3, 1.0)?.to_layout(Layout::Dense)?,
            fij: block(&[m, m], 4, 1.0)?.to_layout(Layout::Dense)?,
            vabij: stored(block(&[n, n, m, m], 5, density)?)?,
            vijab: stored(block(&[m, m, n, n], 6, density)?)?,
            vabcd: stored(block(&[n, n, n, n], 7, density)?)?,
            vijkl: stored(block(&[m, m, m, m], 8, density)?)?,
            vaibj: stored(block(&[n, m, n, m], 9, density)?)?,
        })
    }

    /// Same content with every two-electron block stored as `layout`.
    pub fn with_layout(&self, layout: Layout) -> Result<Self> {
        Ok(Mp3Inputs {
            vabij: self.vabij.to_layout(layout)?,
            vijab: self.vijab.to_layout(layout)?,
            vabcd: self.vabcd.to_layout(layout)?,
            vijkl: self.vijkl.to_layout(layout)?,
            vaibj: self.vaibj.to_layout(layout)?,
            ..self.clone()
        })
    }
}

/// Third-order perturbation energy.
///
/// With `D[abij] = 1 / (ε_i + ε_j − ε_a − ε_b)` and `T = V_abij ⊙ D`,
/// forms
///
/// ```text
/// Z[abij] = V_ijab[ijab] + Fab[af] T[fbij] − Fij[ni] T[abnj]
///         + ½ V_abcd[abef] T[efij] + ½ V_ijkl[mnij] T[abmn]
///         − V_aibj[amei] T[ebmj]
/// ```
///
/// updates `T += Z ⊙ D` and returns `Σ T[abij] V_abij[abij]`.
pub fn mp3_energy(engine: &mut Engine, inp: &Mp3Inputs) -> Result<f64> {
    let r = standard_ring();
    let dims = inp.vabij.dims().to_vec();

    let mut d = Tensor::dense(&dims, &r)?;
    engine.accumulate(&mut d, "abij", Expr::copy(&inp.ei, "i"))?;
    engine.accumulate(&mut d, "abij", Expr::copy(&inp.ei, "j"))?;
    engine.accumulate(&mut d, "abij", Expr::copy(&inp.ea, "a").scale(-1.0))?;
    engine.accumulate(&mut d, "abij", Expr::copy(&inp.ea, "b").scale(-1.0))?;
    if let Some(index) = d.to_values()?.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroDenominator(d.delinearize(index)));
    }
    transform1(&mut d, "abij", &UnaryTransform::new(|v: &mut f64| *v = 1.0 / *v))?;

    let mut t = Tensor::dense(&dims, &r)?;
    engine.assign(&mut t, "abij", Expr::mul(&inp.vabij, "abij", &d, "abij")?)?;

    let mut z = Tensor::dense(&dims, &r)?;
    engine.assign(&mut z, "abij", Expr::copy(&inp.vijab, "ijab"))?;
    engine.accumulate(&mut z, "abij", Expr::mul(&inp.fab, "af", &t, "fbij")?)?;
    engine.accumulate(&mut z, "abij", Expr::mul(&inp.fij, "ni", &t, "abnj")?.scale(-1.0))?;
    engine.accumulate(&mut z, "abij", Expr::mul(&inp.vabcd, "abef", &t, "efij")?.scale(0.5))?;
    engine.accumulate(&mut z, "abij", Expr::mul(&inp.vijkl, "mnij", &t, "abmn")?.scale(0.5))?;
    engine.accumulate(&mut z, "abij", Expr::mul(&inp.vaibj, "amei", &t, "ebmj")?.scale(-1.0))?;

    engine.accumulate(&mut t, "abij", Expr::mul(&z, "abij", &d, "abij")?)?;

    let mut energy = Tensor::scalar(&r)?;
    engine.assign(&mut energy, "", Expr::mul(&t, "abij", &inp.vabij, "abij")?)?;
    energy.get(&[])
}
