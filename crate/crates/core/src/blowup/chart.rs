//! Blow-up charts `ρ_c(s,t) = (B_{t,−c}s, Θ_c(t))` and their inverses.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jordan::{
    bergman_apply, pseudo_inverse, svd, CMatrix, Peirce, TripleElement, Tripotent, PEIRCE_TOL,
};

/// Smallest singular value of the leading block, relative to `‖w‖`, below
/// which `w` is treated as outside the chart range.
pub const CHART_RANGE_TOL: f64 = 1e-12;
/// Relative residual of `w₂₂ = w₂₁ w₁₁⁻¹ w₁₂` above which `w` is rejected.
pub const RANK_CONSISTENCY_TOL: f64 = 1e-8;

/// A point `(c, s, t)` with `s ∈ V₂^c` and `t ∈ V₁^c`.
#[derive(Debug, Clone)]
pub struct ChartPoint {
    pub c: Tripotent,
    pub s: TripleElement,
    pub t: TripleElement,
}

impl ChartPoint {
    pub fn new(c: Tripotent, s: TripleElement, t: TripleElement) -> Result<Self> {
        let rs = c.peirce_residual(&s, Peirce::Two)?;
        if rs > PEIRCE_TOL * s.norm().max(1.0) {
            return Err(Error::NotInPeirceSpace { residual: rs });
        }
        let rt = c.peirce_residual(&t, Peirce::One)?;
        if rt > PEIRCE_TOL * t.norm().max(1.0) {
            return Err(Error::NotInPeirceSpace { residual: rt });
        }
        Ok(ChartPoint { c, s, t })
    }

    /// Project arbitrary `s`, `t` onto the Peirce spaces of `c`.
    pub fn projected(c: Tripotent, s: &TripleElement, t: &TripleElement) -> Result<Self> {
        let s = c.project(s, Peirce::Two)?;
        let t = c.project(t, Peirce::One)?;
        Ok(ChartPoint { c, s, t })
    }

    /// Complex chart dimension `d_λ = λ² + λ(r+s−2λ)`.
    pub fn dim(&self) -> usize {
        let (r, s) = self.c.shape();
        let l = self.c.rank();
        l * l + l * (r + s - 2 * l)
    }

    /// Coordinates in the frame of `c`: the `λ×λ` block of `s`, then the
    /// `λ×(s−λ)` and `(r−λ)×λ` blocks of `t`, each row-major.
    pub fn coordinates(&self) -> Vec<Complex64> {
        let (r, s) = self.c.shape();
        let l = self.c.rank();
        let fs = self.c.to_frame(&self.s);
        let ft = self.c.to_frame(&self.t);
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..l {
            for j in 0..l {
                out.push(fs[(i, j)]);
            }
        }
        for i in 0..l {
            for j in l..s {
                out.push(ft[(i, j)]);
            }
        }
        for i in l..r {
            for j in 0..l {
                out.push(ft[(i, j)]);
            }
        }
        out
    }

    /// Inverse of [`ChartPoint::coordinates`].
    pub fn from_coordinates(c: Tripotent, coords: &[Complex64]) -> Result<Self> {
        let (r, s) = c.shape();
        let l = c.rank();
        let n = l * l + l * (r + s - 2 * l);
        if coords.len() != n {
            return Err(Error::OutOfRange {
                what: "chart coordinates",
                detail: format!("expected {n}, got {}", coords.len()),
            });
        }
        let mut fs = CMatrix::zeros(r, s);
        let mut ft = CMatrix::zeros(r, s);
        let mut it = coords.iter();
        for i in 0..l {
            for j in 0..l {
                fs[(i, j)] = *it.next().unwrap();
            }
        }
        for i in 0..l {
            for j in l..s {
                ft[(i, j)] = *it.next().unwrap();
            }
        }
        for i in l..r {
            for j in 0..l {
                ft[(i, j)] = *it.next().unwrap();
            }
        }
        let s_el = c.from_frame_coords(&fs);
        let t_el = c.from_frame_coords(&ft);
        Ok(ChartPoint {
            c,
            s: s_el,
            t: t_el,
        })
    }
}

/// `σ_c(s,t) = B_{t,−c}s = (I + t c*) s (I + c* t)`.
pub fn sigma_c(point: &ChartPoint) -> TripleElement {
    let neg_c = -point.c.element();
    bergman_apply(&point.t, &neg_c, &point.s).expect("chart point shapes agree")
}

/// Recover `(s, t)` with `σ_c(s,t) = w` for `w` of rank `λ` in the range of
/// the chart.
pub fn chart_inverse(c: &Tripotent, w: &TripleElement) -> Result<ChartPoint> {
    w.expect_shape(c.shape())?;
    let (r, s) = c.shape();
    let l = c.rank();
    let y = c.to_frame(w);
    let scale = w.norm();
    if scale == 0.0 {
        return Err(Error::OutOfChart { sigma_min: 0.0 });
    }
    let y11 = y.view((0, 0), (l, l)).into_owned();
    let sigma_min = if l == 0 {
        scale
    } else {
        svd(&y11).singular_values[l - 1]
    };
    if sigma_min < CHART_RANGE_TOL * scale {
        return Err(Error::OutOfChart { sigma_min });
    }
    let inv = y11
        .clone()
        .try_inverse()
        .ok_or(Error::OutOfChart { sigma_min })?;
    let y12 = y.view((0, l), (l, s - l)).into_owned();
    let y21 = y.view((l, 0), (r - l, l)).into_owned();
    let y22 = y.view((l, l), (r - l, s - l)).into_owned();
    let b = &inv * &y12;
    let cc = &y21 * &inv;
    let residual = (&y22 - &y21 * &b).norm() / scale;
    if residual > RANK_CONSISTENCY_TOL {
        return Err(Error::NotRankLambda { residual });
    }
    let mut fs = CMatrix::zeros(r, s);
    fs.view_mut((0, 0), (l, l)).copy_from(&y11);
    let mut ft = CMatrix::zeros(r, s);
    ft.view_mut((0, l), (l, s - l)).copy_from(&b);
    ft.view_mut((l, 0), (r - l, l)).copy_from(&cc);
    Ok(ChartPoint {
        c: c.clone(),
        s: c.from_frame_coords(&fs),
        t: c.from_frame_coords(&ft),
    })
}

/// The Peirce-manifold point `Θ_c(t)` as the pair `(z, z̃)`, together with
/// the closed-form candidate `B_{t,−c} B_{t,−t}⁻¹ c` for `z̃`.
#[derive(Debug, Clone)]
pub struct ThetaPoint {
    pub z: TripleElement,
    /// Pseudo-inverse of `z` from the Moore-Penrose inverse.
    pub z_tilde: TripleElement,
    /// `B_{t,−c} B_{t,−t}⁻¹ c`.
    pub closed_form: TripleElement,
    /// `max |closed_form − z_tilde|`.
    pub closed_form_residual: f64,
}

impl ThetaPoint {
    /// Orthogonal projections `z z̃*` and `z̃* z` onto the row and column
    /// spaces; two pairs describe the same Peirce 2-space iff these agree.
    pub fn projections(&self) -> (CMatrix, CMatrix) {
        (
            self.z.matrix() * self.z_tilde.adjoint(),
            self.z_tilde.adjoint() * self.z.matrix(),
        )
    }

    pub fn same_peirce_space(&self, other: &ThetaPoint, tol: f64) -> bool {
        let (a, b) = self.projections();
        let (c, d) = other.projections();
        (a - c).norm() <= tol && (b - d).norm() <= tol
    }
}

/// `B_{t,−t}⁻¹ v = (I + t t*)⁻¹ v (I + t* t)⁻¹`.
fn bergman_inverse_t_minus_t(t: &TripleElement, v: &TripleElement) -> Result<TripleElement> {
    let (r, s) = t.shape();
    let left = (CMatrix::identity(r, r) + t.matrix() * t.adjoint())
        .try_inverse()
        .ok_or_else(|| Error::Domain("B_{t,-t} is singular".into()))?;
    let right = (CMatrix::identity(s, s) + t.adjoint() * t.matrix())
        .try_inverse()
        .ok_or_else(|| Error::Domain("B_{t,-t} is singular".into()))?;
    Ok(TripleElement::new(left * v.matrix() * right))
}

pub fn theta_c(point: &ChartPoint) -> Result<ThetaPoint> {
    let neg_c = -point.c.element();
    let z = bergman_apply(&point.t, &neg_c, point.c.element())?;
    let z_tilde = pseudo_inverse(&z)?;
    let inner = bergman_inverse_t_minus_t(&point.t, point.c.element())?;
    let closed_form = bergman_apply(&point.t, &neg_c, &inner)?;
    let closed_form_residual = closed_form.max_abs_diff(&z_tilde);
    Ok(ThetaPoint {
        z,
        z_tilde,
        closed_form,
        closed_form_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{
        is_tripotent, pseudo_inverse_residuals, random_element, random_rank_element,
        random_tripotent_with, rank, seeded_rng, RANK_TOL,
    };

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_point(r: usize, s: usize, l: usize, seed: u64) -> ChartPoint {
        let mut rng = seeded_rng(seed);
        let c = random_tripotent_with(r, s, l, &mut rng).unwrap();
        let sv = &random_element(r, s, &mut rng) * 0.5;
        let tv = &random_element(r, s, &mut rng) * 0.4;
        ChartPoint::projected(c, &sv, &tv).unwrap()
    }

    #[test]
    fn t_zero_and_rank_one_example() {
        let p = random_point(2, 3, 1, 1);
        let p0 = ChartPoint::new(p.c.clone(), p.s.clone(), TripleElement::zeros(2, 3)).unwrap();
        assert!(sigma_c(&p0).approx_eq(&p.s, 1e-15));

        let c = Tripotent::standard(1, 3, 1).unwrap();
        let sigma = c64(0.4, -0.2);
        let (t1, t2) = (c64(0.3, 0.1), c64(-0.5, 0.7));
        let z = c64(0.0, 0.0);
        let s = TripleElement::from_rows(1, 3, &[sigma, z, z]);
        let t = TripleElement::from_rows(1, 3, &[z, t1, t2]);
        let w = sigma_c(&ChartPoint::new(c.clone(), s, t).unwrap());
        let expected = TripleElement::from_rows(1, 3, &[sigma, sigma * t1, sigma * t2]);
        assert!(w.approx_eq(&expected, 1e-15));
        let back = chart_inverse(&c, &w).unwrap();
        assert!((back.s.matrix()[(0, 0)] - sigma).norm() < 1e-15);
        assert!((back.t.matrix()[(0, 1)] - t1).norm() < 1e-15);
    }

    #[test]
    fn block_pattern() {
        let c = Tripotent::standard(2, 3, 1).unwrap();
        let z = c64(0.0, 0.0);
        let (s11, t12, t13, t21) = (c64(0.6, 0.2), c64(0.1, -0.3), c64(0.2, 0.2), c64(-0.4, 0.1));
        let s = TripleElement::from_rows(2, 3, &[s11, z, z, z, z, z]);
        let t = TripleElement::from_rows(2, 3, &[z, t12, t13, t21, z, z]);
        let w = sigma_c(&ChartPoint::new(c, s, t).unwrap());
        let expected = TripleElement::from_rows(
            2,
            3,
            &[
                s11,
                s11 * t12,
                s11 * t13,
                t21 * s11,
                t21 * s11 * t12,
                t21 * s11 * t13,
            ],
        );
        assert!(w.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn round_trips() {
        for (r, s, l) in [(2, 3, 1), (3, 4, 2), (1, 4, 1), (2, 2, 1)] {
            for seed in 0..10 {
                let p = random_point(r, s, l, seed);
                let w = sigma_c(&p);
                assert_eq!(rank(&w, RANK_TOL), l);
                let back = chart_inverse(&p.c, &w).unwrap();
                assert!(back.s.approx_eq(&p.s, 1e-10) && back.t.approx_eq(&p.t, 1e-10));
                assert!(sigma_c(&back).approx_eq(&w, 1e-10));
                let again = ChartPoint::from_coordinates(p.c.clone(), &p.coordinates()).unwrap();
                assert!(again.s.approx_eq(&p.s, 1e-14) && again.t.approx_eq(&p.t, 1e-14));
                assert_eq!(p.coordinates().len(), p.dim());
            }
        }
        let p = random_point(2, 3, 1, 3);
        let back = chart_inverse(&p.c, p.c.element()).unwrap();
        assert!(back.s.approx_eq(p.c.element(), 1e-14) && back.t.norm() < 1e-14);
    }

    #[test]
    fn inverse_errors() {
        let c = Tripotent::standard(2, 3, 1).unwrap();
        let mut rng = seeded_rng(2);
        let full = random_element(2, 3, &mut rng);
        assert!(matches!(
            chart_inverse(&c, &full),
            Err(Error::NotRankLambda { .. })
        ));
        let outside = TripleElement::from_real_rows(2, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            chart_inverse(&c, &outside),
            Err(Error::OutOfChart { .. })
        ));
        let w = random_rank_element(2, 3, 1, &mut rng);
        assert!(chart_inverse(&c, &w).is_ok());
    }

    #[test]
    fn theta_rank_one() {
        for seed in 0..10 {
            let p = random_point(2, 3, 1, seed);
            let th = theta_c(&p).unwrap();
            assert!(th.closed_form_residual < 1e-12);
            let res = pseudo_inverse_residuals(&th.z, &th.z_tilde, &p.s).unwrap();
            assert!(res.iter().all(|&x| x < 1e-10));
        }
        // on the ball Θ_c(t) is the projective point [1 : t]
        let p = random_point(1, 4, 1, 11);
        let th = theta_c(&p).unwrap();
        assert!(th.z.approx_eq(&(p.c.element() + &p.t), 1e-14));
        let p = random_point(3, 4, 2, 0);
        let p0 = ChartPoint::new(p.c.clone(), p.s.clone(), TripleElement::zeros(3, 4)).unwrap();
        let th = theta_c(&p0).unwrap();
        assert!(th.z.approx_eq(p.c.element(), 1e-14) && th.z_tilde.approx_eq(p.c.element(), 1e-12));
        assert!(is_tripotent(&th.z, 1e-12));
    }

    #[test]
    fn theta_same_space_along_fibre() {
        // σ_c(s,t) has the Peirce 2-space of Θ_c(t) for every s
        let p = random_point(3, 4, 2, 4);
        let th = theta_c(&p).unwrap();
        let w = sigma_c(&p);
        let tw = ThetaPoint {
            z_tilde: pseudo_inverse(&w).unwrap(),
            closed_form: w.clone(),
            closed_form_residual: 0.0,
            z: w,
        };
        assert!(th.same_peirce_space(&tw, 1e-9));
    }
}
