//! Tripotents (partial isometries), their Peirce decomposition and the
//! Jordan algebra determinant of the Peirce 2-space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::element::{CMatrix, TripleElement};
use super::ops::{is_tripotent, RANK_TOL};
use super::svd::{complete_unitary, svd};
use crate::error::{Error, Result};

/// Default tolerance for tripotent and Peirce-membership checks.
pub const PEIRCE_TOL: f64 = 1e-9;

/// Index of a Peirce space, i.e. the eigenvalue of `D(c,c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Peirce {
    Zero,
    One,
    Two,
}

impl Peirce {
    pub fn eigenvalue(self) -> f64 {
        match self {
            Peirce::Zero => 0.0,
            Peirce::One => 1.0,
            Peirce::Two => 2.0,
        }
    }
}

impl TryFrom<u8> for Peirce {
    type Error = Error;
    fn try_from(k: u8) -> Result<Self> {
        match k {
            0 => Ok(Peirce::Zero),
            1 => Ok(Peirce::One),
            2 => Ok(Peirce::Two),
            _ => Err(Error::OutOfRange {
                what: "Peirce index",
                detail: format!("{k} is not one of 0, 1, 2"),
            }),
        }
    }
}

/// A tripotent `c = U [I_λ 0; 0 0] W*` with a unitary frame `(U, W)`.
///
/// The frame is fixed at construction; `N_c` is normalized against it so
/// that `N_c(c) = 1` exactly, which also makes `N_c` frame-independent.
#[derive(Debug, Clone)]
pub struct Tripotent {
    element: TripleElement,
    rank: usize,
    u: CMatrix,
    w: CMatrix,
    q: CMatrix,
    q_right: CMatrix,
    det_scale: Complex64,
}

impl Tripotent {
    /// Validate `c` as a tripotent and compute an SVD frame for it.
    pub fn new(c: TripleElement) -> Result<Self> {
        let scale = c.norm().max(1.0);
        if !is_tripotent(&c, PEIRCE_TOL * scale) {
            let q = TripleElement::new(c.matrix() * c.adjoint() * c.matrix());
            return Err(Error::NotTripotent {
                residual: (&q - &c).norm(),
            });
        }
        let s = c.shape().1;
        let f = svd(c.matrix());
        let rank = f.singular_values.iter().filter(|&&x| x > 0.5).count();
        let uk = f.u.columns(0, rank).into_owned();
        let wk = c.adjoint() * &uk;
        let u = complete_unitary(&uk);
        let w = complete_unitary(&wk);
        Self::assemble(c, rank, u, w, s)
    }

    /// `c = U [I_k 0; 0 0] W*` for unitary `U` (r×r) and `W` (s×s).
    pub fn from_frame(u: CMatrix, w: CMatrix, k: usize) -> Result<Self> {
        let (r, s) = (u.nrows(), w.nrows());
        if !u.is_square() || !w.is_square() {
            return Err(Error::DegenerateFrame(
                "frame matrices must be square".into(),
            ));
        }
        for m in [&u, &w] {
            let n = m.nrows();
            if (m.adjoint() * m - CMatrix::identity(n, n)).norm() > 1e-10 {
                return Err(Error::DegenerateFrame("frame matrix is not unitary".into()));
            }
        }
        if k > r.min(s) {
            return Err(Error::OutOfRange {
                what: "tripotent rank",
                detail: format!("{k} exceeds min(r, s) = {}", r.min(s)),
            });
        }
        let e = TripleElement::block_identity(r, s, k);
        let c = TripleElement::new(&u * e.matrix() * w.adjoint());
        Self::assemble(c, k, u, w, s)
    }

    /// The standard tripotent `[I_k 0; 0 0]` with the identity frame.
    pub fn standard(r: usize, s: usize, k: usize) -> Result<Self> {
        Self::from_frame(CMatrix::identity(r, r), CMatrix::identity(s, s), k)
    }

    fn assemble(c: TripleElement, rank: usize, u: CMatrix, w: CMatrix, s: usize) -> Result<Self> {
        let block = (u.adjoint() * c.matrix() * &w)
            .view((0, 0), (rank, rank))
            .into_owned();
        let residual = (&block - CMatrix::identity(rank, rank)).norm();
        if residual > 1e-8 {
            return Err(Error::DegenerateFrame(format!(
                "frame does not diagonalize the tripotent (residual {residual:e})"
            )));
        }
        let det_scale = if rank == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            block.determinant()
        };
        let q = c.matrix() * c.adjoint();
        let q_right = c.adjoint() * c.matrix();
        debug_assert_eq!(q_right.nrows(), s);
        Ok(Tripotent {
            element: c,
            rank,
            u,
            w,
            q,
            q_right,
            det_scale,
        })
    }

    pub fn element(&self) -> &TripleElement {
        &self.element
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn shape(&self) -> (usize, usize) {
        self.element.shape()
    }

    pub fn frame_left(&self) -> &CMatrix {
        &self.u
    }

    pub fn frame_right(&self) -> &CMatrix {
        &self.w
    }

    /// Re-express the same tripotent in another frame `(U, W)`.
    pub fn reframed(&self, u: CMatrix, w: CMatrix) -> Result<Self> {
        let other = Self::from_frame(u, w, self.rank)?;
        if !other.element.approx_eq(&self.element, 1e-10) {
            return Err(Error::DegenerateFrame(
                "frame describes a different tripotent".into(),
            ));
        }
        Ok(other)
    }

    /// Coordinates `U* x W` in the frame of `c`.
    pub fn to_frame(&self, x: &TripleElement) -> CMatrix {
        self.u.adjoint() * x.matrix() * &self.w
    }

    /// Inverse of [`Tripotent::to_frame`].
    pub fn from_frame_coords(&self, x: &CMatrix) -> TripleElement {
        TripleElement::new(&self.u * x * self.w.adjoint())
    }

    /// Eigenprojection of `D(c,c)` for the given Peirce index.
    pub fn project(&self, v: &TripleElement, k: Peirce) -> Result<TripleElement> {
        v.expect_shape(self.shape())?;
        let (r, s) = self.shape();
        let p2 = || &self.q * v.matrix() * &self.q_right;
        let p0 = || {
            (CMatrix::identity(r, r) - &self.q)
                * v.matrix()
                * (CMatrix::identity(s, s) - &self.q_right)
        };
        let m = match k {
            Peirce::Two => p2(),
            Peirce::Zero => p0(),
            Peirce::One => v.matrix() - p2() - p0(),
        };
        Ok(TripleElement::new(m))
    }

    /// `[P0 v, P1 v, P2 v]`.
    pub fn decompose(&self, v: &TripleElement) -> Result<[TripleElement; 3]> {
        Ok([
            self.project(v, Peirce::Zero)?,
            self.project(v, Peirce::One)?,
            self.project(v, Peirce::Two)?,
        ])
    }

    /// `‖x − P_k x‖`.
    pub fn peirce_residual(&self, x: &TripleElement, k: Peirce) -> Result<f64> {
        Ok((x - &self.project(x, k)?).norm())
    }

    /// Jordan algebra determinant `N_c` of the Peirce 2-space, normalized by
    /// `N_c(c) = 1`.
    pub fn jordan_det(&self, x: &TripleElement) -> Result<Complex64> {
        let residual = self.peirce_residual(x, Peirce::Two)?;
        if residual > PEIRCE_TOL * x.norm().max(1.0) {
            return Err(Error::NotInPeirceSpace { residual });
        }
        Ok(self.jordan_det_of_block(x))
    }

    /// `N_c(P_2 x)`, without the membership check.
    pub fn jordan_det_of_block(&self, x: &TripleElement) -> Complex64 {
        if self.rank == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let y = self.to_frame(x);
        y.view((0, 0), (self.rank, self.rank))
            .into_owned()
            .determinant()
            / self.det_scale
    }

    /// Dimension of a Peirce space, counted as the numerical rank of the
    /// projection applied to the standard basis.
    pub fn peirce_dim(&self, k: Peirce) -> usize {
        let (r, s) = self.shape();
        let n = r * s;
        let mut images = DMatrix::<Complex64>::zeros(n, n);
        for idx in 0..n {
            let mut e = CMatrix::zeros(r, s);
            e[(idx / s, idx % s)] = Complex64::new(1.0, 0.0);
            let p = self
                .project(&TripleElement::new(e), k)
                .expect("shape matches by construction");
            for (row, z) in p.matrix().iter().enumerate() {
                images[(row, idx)] = *z;
            }
        }
        super::ops::rank(&TripleElement::new(images), RANK_TOL)
    }
}

/// Free-function form of [`Tripotent::project`].
pub fn peirce_project(c: &Tripotent, v: &TripleElement, k: Peirce) -> Result<TripleElement> {
    c.project(v, k)
}

/// Free-function form of [`Tripotent::jordan_det`].
pub fn jordan_det_nc(c: &Tripotent, x: &TripleElement) -> Result<Complex64> {
    c.jordan_det(x)
}
