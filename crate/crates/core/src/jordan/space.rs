use crate::error::{Error, Result};
use crate::partition::Multiplicities;

/// The matrix triple `C^{r×s}` (`r ≤ s`) together with a Kepler rank `λ`.
///
/// Square spaces with `λ = r` are rejected: there the singular locus is a
/// hypersurface and the blow-up construction does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TripleSpace {
    r: usize,
    s: usize,
    lambda: usize,
}

impl TripleSpace {
    pub fn new(r: usize, s: usize, lambda: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidSpace("rank r must be positive".into()));
        }
        if s < r {
            return Err(Error::InvalidSpace(format!(
                "need s >= r, got r={r}, s={s}"
            )));
        }
        if lambda == 0 || lambda > r {
            return Err(Error::InvalidSpace(format!(
                "Kepler rank must satisfy 1 <= lambda <= r, got lambda={lambda}, r={r}"
            )));
        }
        if lambda == r && s == r {
            return Err(Error::InvalidSpace(format!(
                "square space C^{{{r}x{r}}} with lambda = r is excluded"
            )));
        }
        Ok(TripleSpace { r, s, lambda })
    }

    /// The unit ball of `C^d` (`r = 1`, `s = d`, `λ = 1`).
    pub fn ball(d: usize) -> Result<Self> {
        Self::new(1, d, 1)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    /// The same matrix space with a different Kepler rank.
    pub fn with_lambda(&self, lambda: usize) -> Result<Self> {
        Self::new(self.r, self.s, lambda)
    }

    pub fn multiplicities(&self) -> Multiplicities {
        Multiplicities::new(2.0, (self.s - self.r) as f64, self.r)
    }

    pub fn a(&self) -> f64 {
        2.0
    }

    pub fn b(&self) -> f64 {
        (self.s - self.r) as f64
    }

    /// Complex dimension `d = r·s`.
    pub fn dim(&self) -> usize {
        self.r * self.s
    }

    /// Genus `p = r + s`.
    pub fn genus(&self) -> usize {
        self.r + self.s
    }

    /// `dim V_2^c` for a tripotent of rank `λ`.
    pub fn d2(&self) -> f64 {
        self.multiplicities().peirce2_dim(self.lambda)
    }

    /// `dim V_1^c` for a tripotent of rank `λ`.
    pub fn d1(&self) -> f64 {
        self.multiplicities().peirce1_dim(self.lambda)
    }

    /// Dimension of the Kepler manifold of rank `λ`.
    pub fn d_lambda(&self) -> f64 {
        self.d2() + self.d1()
    }
}
