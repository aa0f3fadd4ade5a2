//! Small numerical utilities shared by every module: tolerances, compensated
//! summation, log-gamma and a double-exponential quadrature rule.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute + relative tolerance pair used for complex equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-12,
            rel: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn close(&self, a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= self.abs + self.rel * a.norm().max(b.norm())
    }
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier_step(acc: &mut (f64, f64), x: f64) {
    let (sum, comp) = *acc;
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    *acc = (t, comp + c);
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        neumaier_step(&mut self.re, z.re);
        neumaier_step(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl Extend<Complex64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

/// Compensated sum of real numbers.
pub fn sum_real<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = (0.0, 0.0);
    for x in values {
        neumaier_step(&mut acc, x);
    }
    acc.0 + acc.1
}

/// `log Γ(x)` for `x > 0`; nonpositive arguments are reported as poles.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Pole { argument: x });
    }
    Ok(libm::lgamma(x))
}

/// Integrate `f` over `[0, 1]` with the tanh-sinh rule.
///
/// The integrand receives both `t` and `1 - t`, the latter computed without
/// cancellation, so factors like `(1 - t)^β` with `β > -1` stay accurate at
/// the right endpoint. Returns `(estimate, error estimate)`.
pub fn tanh_sinh_unit<F>(f: F, rel_tol: f64) -> (f64, f64)
where
    F: Fn(f64, f64) -> f64,
{
    const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
    const MAX_LEVEL: u32 = 12;
    // |k h| beyond this makes the weights underflow in double precision.
    const SPAN: f64 = 3.5;

    let node = |x: f64| -> Option<f64> {
        let u = HALF_PI * x.sinh();
        // t = 1/(1+e^{-2u}), 1-t = 1/(1+e^{2u})
        let t = 1.0 / (1.0 + (-2.0 * u).exp());
        let tc = 1.0 / (1.0 + (2.0 * u).exp());
        if t <= 0.0 || tc <= 0.0 {
            return None;
        }
        let w = HALF_PI * x.cosh() * 0.5 / u.cosh().powi(2);
        if w == 0.0 || !w.is_finite() {
            return None;
        }
        let v = f(t, tc);
        Some(w * v)
    };

    let mut h = 0.5;
    let mut sum = node(0.0).unwrap_or(0.0);
    let n0 = (SPAN / h) as i64;
    for k in 1..=n0 {
        let x = k as f64 * h;
        sum += node(x).unwrap_or(0.0) + node(-x).unwrap_or(0.0);
    }
    let mut estimate = sum * h;
    let mut err = f64::INFINITY;
    for _ in 1..MAX_LEVEL {
        h *= 0.5;
        let n = (SPAN / h) as i64;
        // only the odd nodes are new at this level
        let mut k = 1;
        while k <= n {
            let x = k as f64 * h;
            sum += node(x).unwrap_or(0.0) + node(-x).unwrap_or(0.0);
            k += 2;
        }
        let next = sum * h;
        err = (next - estimate).abs();
        estimate = next;
        if err <= rel_tol * estimate.abs() {
            break;
        }
    }
    (estimate, err)
}
