//! Fischer-Fock components `E^μ(z,w)` of `e^{(z|w)}` for matrix triples.

use num_complex::Complex64;

use super::schur::{complete_from_power_sums, jacobi_trudi};
use super::young::Partition;
use crate::error::{Error, Result};
use crate::jordan::{CMatrix, TripleElement, TripleSpace};

/// `p_k = tr((zw*)^k)` for `k = 1..=n`.
pub fn power_sums(z: &TripleElement, w: &TripleElement, n: usize) -> Result<Vec<Complex64>> {
    z.check_shape(w)?;
    let a: CMatrix = z.matrix() * w.adjoint();
    let mut out = Vec::with_capacity(n);
    let mut pow = a.clone();
    for k in 0..n {
        if k > 0 {
            pow = &pow * &a;
        }
        out.push(pow.trace());
    }
    Ok(out)
}

/// All components `E^μ(z,w)` with `|μ| ≤ max_weight` share one set of
/// complete symmetric functions; this caches them.
#[derive(Debug, Clone)]
pub struct FockExpansion {
    h: Vec<Complex64>,
    rank_bound: usize,
}

impl FockExpansion {
    pub fn new(z: &TripleElement, w: &TripleElement, max_weight: usize) -> Result<Self> {
        let p = power_sums(z, w, max_weight)?;
        Ok(FockExpansion {
            h: complete_from_power_sums(&p, max_weight)?,
            rank_bound: z.shape().0,
        })
    }

    pub fn max_weight(&self) -> usize {
        self.h.len() - 1
    }

    /// `E^μ = s_μ(spec zw*) / Π hooks(μ)`, i.e. `(f^μ/|μ|!)·s_μ`.
    pub fn component(&self, mu: &Partition) -> Result<Complex64> {
        if mu.len() > self.rank_bound {
            return Err(Error::PartitionTooLong {
                length: mu.len(),
                bound: self.rank_bound,
            });
        }
        if mu.weight() > self.max_weight() {
            return Err(Error::OutOfRange {
                what: "partition weight",
                detail: format!(
                    "{} exceeds the cached bound {}",
                    mu.weight(),
                    self.max_weight()
                ),
            });
        }
        Ok(jacobi_trudi(mu, &self.h)? / mu.hook_product())
    }
}

/// `E^μ(z,w)` on an arbitrary rectangular shape (no Kepler-rank checks).
pub fn fock_component(mu: &Partition, z: &TripleElement, w: &TripleElement) -> Result<Complex64> {
    FockExpansion::new(z, w, mu.weight())?.component(mu)
}

/// `E^μ(z,w)` on `space`.
pub fn e_mu(
    space: &TripleSpace,
    mu: &Partition,
    z: &TripleElement,
    w: &TripleElement,
) -> Result<Complex64> {
    z.expect_shape(space.shape())?;
    w.expect_shape(space.shape())?;
    fock_component(mu, z, w)
}

/// Weyl dimension of the `GL_n` module of highest weight `μ`.
pub fn weyl_dimension(n: usize, mu: &Partition) -> f64 {
    let mut acc = 1.0;
    for i in 1..=n {
        for j in i + 1..=n {
            let num = mu.part(i) as f64 - mu.part(j) as f64 + (j - i) as f64;
            acc *= num / (j - i) as f64;
        }
    }
    acc
}

/// `d_μ = dim P_μ(C^{r×s})`, the product of the `GL_r` and `GL_s` Weyl
/// dimensions.
pub fn dim_p_mu_shape(r: usize, s: usize, mu: &Partition) -> Result<u128> {
    if mu.len() > r.min(s) {
        return Err(Error::PartitionTooLong {
            length: mu.len(),
            bound: r.min(s),
        });
    }
    Ok((weyl_dimension(r, mu) * weyl_dimension(s, mu)).round() as u128)
}

pub fn dim_p_mu(space: &TripleSpace, mu: &Partition) -> Result<u128> {
    dim_p_mu_shape(space.r(), space.s(), mu)
}
