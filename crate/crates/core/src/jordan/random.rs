//! Seeded sampling of triple elements, Haar unitaries and tripotents.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::element::{CMatrix, TripleElement};
use super::space::TripleSpace;
use super::tripotent::Tripotent;
use crate::error::{Error, Result};

/// The generator used for every seeded computation in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // row-major fill so that the stream layout does not depend on storage order
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(gaussian(rng));
    }
    DMatrix::from_row_slice(rows, cols, &entries)
}

pub fn random_element<R: Rng + ?Sized>(r: usize, s: usize, rng: &mut R) -> TripleElement {
    TripleElement::new(ginibre(r, s, rng))
}

/// Haar-distributed unitary of size `n`: QR of a Ginibre matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let rm = qr.r();
    for j in 0..n {
        let d = rm[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random element of rank exactly `k` (generically), as a product of
/// Ginibre factors.
pub fn random_rank_element<R: Rng + ?Sized>(
    r: usize,
    s: usize,
    k: usize,
    rng: &mut R,
) -> TripleElement {
    if k == 0 {
        return TripleElement::zeros(r, s);
    }
    let left = ginibre(r, k, rng);
    let right = ginibre(k, s, rng);
    TripleElement::new(left * right)
}

/// Rescale so that the spectral norm equals `target` (zero stays zero).
pub fn with_spectral_norm(z: &TripleElement, target: f64) -> TripleElement {
    let n = z.spectral_norm();
    if n == 0.0 {
        return z.clone();
    }
    z * (target / n)
}

/// `U · [I_k 0; 0 0] · W*` with Haar unitaries drawn from `rng`.
pub fn random_tripotent_with<R: Rng + ?Sized>(
    r: usize,
    s: usize,
    k: usize,
    rng: &mut R,
) -> Result<Tripotent> {
    if k > r.min(s) {
        return Err(Error::OutOfRange {
            what: "tripotent rank",
            detail: format!("{k} exceeds min(r, s) = {}", r.min(s)),
        });
    }
    let u = haar_unitary(r, rng);
    let w = haar_unitary(s, rng);
    Tripotent::from_frame(u, w, k)
}

/// Seeded random tripotent of rank `k` in the matrix space of `space`.
pub fn random_tripotent(space: &TripleSpace, k: usize, seed: u64) -> Result<Tripotent> {
    let mut rng = seeded_rng(seed);
    random_tripotent_with(space.r(), space.s(), k, &mut rng)
}
