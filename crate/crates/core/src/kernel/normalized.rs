use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jordan::TripleElement;

/// Kernel normalized at a base point `w₀`:
/// `K⁰(z,w) = Φ(z) K(z,w) conj(Φ(w))` with `Φ(z) = K(w₀,w₀)^{1/2} / K(z,w₀)`.
pub struct NormalizedKernel<F> {
    kernel: F,
    base: TripleElement,
    base_norm: f64,
}

impl<F> NormalizedKernel<F>
where
    F: Fn(&TripleElement, &TripleElement) -> Result<Complex64>,
{
    pub fn new(kernel: F, base: TripleElement) -> Result<Self> {
        let k00 = kernel(&base, &base)?;
        if !(k00.re > 0.0) || k00.im.abs() > 1e-10 * k00.re {
            return Err(Error::Domain(format!("K(w0, w0) = {k00} is not positive")));
        }
        Ok(NormalizedKernel {
            kernel,
            base,
            base_norm: k00.re.sqrt(),
        })
    }

    pub fn base(&self) -> &TripleElement {
        &self.base
    }

    /// `Φ(z)`.
    pub fn phi(&self, z: &TripleElement) -> Result<Complex64> {
        let kz0 = (self.kernel)(z, &self.base)?;
        if kz0.norm() < f64::EPSILON * self.base_norm * self.base_norm {
            return Err(Error::Domain(format!("K(z, w0) = {kz0} vanishes")));
        }
        Ok(Complex64::new(self.base_norm, 0.0) / kz0)
    }

    pub fn eval(&self, z: &TripleElement, w: &TripleElement) -> Result<Complex64> {
        Ok(self.phi(z)? * (self.kernel)(z, w)? * self.phi(w)?.conj())
    }
}

/// One-shot form of [`NormalizedKernel::eval`].
pub fn normalized_kernel<F>(
    kernel: F,
    base: &TripleElement,
    z: &TripleElement,
    w: &TripleElement,
) -> Result<Complex64>
where
    F: Fn(&TripleElement, &TripleElement) -> Result<Complex64>,
{
    NormalizedKernel::new(kernel, base.clone())?.eval(z, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{delta, random_element, seeded_rng, with_spectral_norm};

    fn bergman(z: &TripleElement, w: &TripleElement) -> Result<Complex64> {
        Ok(delta(z, w)?.powf(-5.0))
    }

    #[test]
    fn normalization_properties() {
        let mut rng = seeded_rng(6);
        let w0 = with_spectral_norm(&random_element(1, 4, &mut rng), 0.4);
        let nk = NormalizedKernel::new(bergman, w0.clone()).unwrap();
        for _ in 0..5 {
            let z = with_spectral_norm(&random_element(1, 4, &mut rng), 0.6);
            let w = with_spectral_norm(&random_element(1, 4, &mut rng), 0.6);
            assert!((nk.eval(&z, &w0).unwrap() - 1.0).norm() < 1e-12);
            let sym = nk.eval(&w, &z).unwrap().conj();
            assert!((nk.eval(&z, &w).unwrap() - sym).norm() < 1e-12);
        }
        assert!((nk.eval(&w0, &w0).unwrap() - 1.0).norm() < 1e-12);
        // at the origin K(z,0) = 1 already
        let o = TripleElement::zeros(1, 4);
        let z = with_spectral_norm(&random_element(1, 4, &mut rng), 0.6);
        let w = with_spectral_norm(&random_element(1, 4, &mut rng), 0.6);
        let n0 = normalized_kernel(bergman, &o, &z, &w).unwrap();
        assert!((n0 - bergman(&z, &w).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn rejects_vanishing_kernel() {
        let zero = |_: &TripleElement, _: &TripleElement| Ok(Complex64::new(0.0, 0.0));
        assert!(NormalizedKernel::new(zero, TripleElement::zeros(1, 2)).is_err());
    }
}
