//! The verification suites behind `verify`.
//!
//! Random cases draw from `block_rng(seed, index)`, so every case is
//! reproducible on its own and the report does not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use jordan_kepler::blowup::{
    chart_inverse, fock_shift_identity, lemma_e, sigma_c, theta_c, transition_germ, BundleGerm,
    ChartPoint, SingularModule,
};
use jordan_kepler::exec::{DefaultExecutor, Executor};
use jordan_kepler::jordan::{
    bergman_apply, bergman_apply_expanded, bergman_apply_triple, bergman_det, delta, haar_unitary,
    inner_product, pseudo_inverse, pseudo_inverse_residuals, random_element, random_rank_element,
    random_tripotent_with, with_spectral_norm, CMatrix, Peirce, SeededRng, TripleElement,
    TripleSpace,
};
use jordan_kepler::kernel::{
    recover_coefficients_with, CoefficientSequence, KernelSeries, KernelSpec, RecoveredTable,
    RecoveryOptions,
};
use jordan_kepler::partition::{enumerate_partitions, FockExpansion, Partition};
use jordan_kepler::radial::{
    beta_integral_check_with, block_rng, reproducing_property_check_with, sphere_monomial_norm,
    IntegrationMethod,
};
use num_complex::Complex64;
use rand::Rng;

use crate::config::{CoefficientConfig, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::CaseRecord;

type CaseResult = jordan_kepler::Result<Vec<CaseRecord>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Bergman,
    Peirce,
    FischerFock,
    FarautKoranyi,
    BetaIntegral,
    Charts,
    Cocycle,
    LemmaE,
    PropD,
    PropH,
    Embedding,
    Recovery,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Bergman,
        Suite::Peirce,
        Suite::FischerFock,
        Suite::FarautKoranyi,
        Suite::BetaIntegral,
        Suite::Charts,
        Suite::Cocycle,
        Suite::LemmaE,
        Suite::PropD,
        Suite::PropH,
        Suite::Embedding,
        Suite::Recovery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bergman => "bergman",
            Suite::Peirce => "peirce",
            Suite::FischerFock => "fischer-fock",
            Suite::FarautKoranyi => "faraut-koranyi",
            Suite::BetaIntegral => "beta-integral",
            Suite::Charts => "charts",
            Suite::Cocycle => "cocycle",
            Suite::LemmaE => "lemma-e",
            Suite::PropD => "prop-d",
            Suite::PropH => "prop-h",
            Suite::Embedding => "embedding",
            Suite::Recovery => "recovery",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown suite `{s}`")))
    }
}

/// Expand `all` and drop duplicates, keeping first-seen order.
pub fn parse_suites(names: &[String]) -> CliResult<Vec<Suite>> {
    if names.is_empty() {
        return Err(CliError::Config("no suite given".into()));
    }
    let mut out = Vec::new();
    for n in names {
        let add: Vec<Suite> = if n == "all" {
            Suite::ALL.to_vec()
        } else {
            vec![n.parse()?]
        };
        for s in add {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

pub fn run_suite(config: &RunConfig, suite: Suite) -> CliResult<Vec<CaseRecord>> {
    match suite {
        Suite::Bergman => per_case(config, suite, bergman_case),
        Suite::Peirce => per_case(config, suite, peirce_case),
        Suite::FischerFock => per_case(config, suite, fischer_fock_case),
        Suite::FarautKoranyi => faraut_koranyi(config),
        Suite::BetaIntegral => beta_integral(config),
        Suite::Charts => per_case(config, suite, charts_case),
        Suite::Cocycle => per_case(config, suite, cocycle_case),
        Suite::LemmaE => per_case(config, suite, lemma_e_case),
        Suite::PropD | Suite::PropH | Suite::Embedding => submodule_suite(config, suite),
        Suite::Recovery => recovery(config),
    }
}

fn per_case<F>(config: &RunConfig, suite: Suite, f: F) -> CliResult<Vec<CaseRecord>>
where
    F: Fn(&RunConfig, &TripleSpace, usize, &mut SeededRng) -> CaseResult + Sync + Send,
{
    let space = config.space()?;
    let results: Vec<Vec<CaseRecord>> = DefaultExecutor::map_range(config.cases, |i| {
        let mut rng = block_rng(config.seed, i);
        f(config, &space, i, &mut rng)
            .unwrap_or_else(|e| vec![CaseRecord::failed(suite.name(), "case", i, &e)])
    });
    Ok(results.into_iter().flatten().collect())
}

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn random_pair(
    space: &TripleSpace,
    max_norm: f64,
    rng: &mut SeededRng,
) -> (TripleElement, TripleElement) {
    let nz = max_norm * rng.random::<f64>();
    let nw = max_norm * rng.random::<f64>();
    let z = with_spectral_norm(&random_element(space.r(), space.s(), rng), nz);
    let w = with_spectral_norm(&random_element(space.r(), space.s(), rng), nw);
    (z, w)
}

fn random_chart_point(
    space: &TripleSpace,
    s_norm: f64,
    t_norm: f64,
    rng: &mut SeededRng,
) -> jordan_kepler::Result<ChartPoint> {
    let c = random_tripotent_with(space.r(), space.s(), space.lambda(), rng)?;
    let s = with_spectral_norm(&random_element(space.r(), space.s(), rng), s_norm);
    let t = with_spectral_norm(&random_element(space.r(), space.s(), rng), t_norm);
    ChartPoint::projected(c, &s, &t)
}

/// Determinant of the explicit `rs × rs` matrix of `v ↦ I − D(z,w) + Q_z Q_w`.
fn operator_det(z: &TripleElement, w: &TripleElement) -> jordan_kepler::Result<Complex64> {
    let (r, s) = z.shape();
    let n = r * s;
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        let mut e = TripleElement::zeros(r, s).into_matrix();
        e[(k / s, k % s)] = cx(1.0);
        let image = bergman_apply_expanded(z, w, &TripleElement::new(e))?;
        for j in 0..n {
            m[(j, k)] = image.matrix()[(j / s, j % s)];
        }
    }
    Ok(m.determinant())
}

fn bergman_case(
    config: &RunConfig,
    space: &TripleSpace,
    i: usize,
    rng: &mut SeededRng,
) -> CaseResult {
    const S: &str = "bergman";
    let (z, w) = random_pair(space, 0.9, rng);
    let v = random_element(space.r(), space.s(), rng);
    let power = delta(&z, &w)?.powi(space.genus() as i32);
    let explicit = operator_det(&z, &w)?;
    let closed = bergman_det(&z, &w)?;
    let direct = bergman_apply(&z, &w, &v)?;
    let expanded = bergman_apply_expanded(&z, &w, &v)?;
    let triple = bergman_apply_triple(&z, &w, &v)?;
    Ok(vec![
        CaseRecord::at_most(
            S,
            "det",
            i,
            explicit,
            power,
            rel(explicit, power),
            config.tolerance("bergman.det", 1e-10),
        ),
        CaseRecord::at_most(
            S,
            "det-kronecker",
            i,
            closed,
            power,
            rel(closed, power),
            config.tolerance("bergman.det-kronecker", 1e-10),
        ),
        CaseRecord::real(
            S,
            "operator",
            i,
            direct.norm(),
            expanded.norm(),
            direct.max_abs_diff(&expanded),
            config.tolerance("bergman.operator", 1e-12),
        ),
        CaseRecord::real(
            S,
            "operator-triple",
            i,
            direct.norm(),
            triple.norm(),
            direct.max_abs_diff(&triple),
            config.tolerance("bergman.operator-triple", 1e-12),
        ),
    ])
}

fn peirce_case(
    config: &RunConfig,
    space: &TripleSpace,
    i: usize,
    rng: &mut SeededRng,
) -> CaseResult {
    const S: &str = "peirce";
    let (r, s, l) = (space.r(), space.s(), space.lambda());
    let c = random_tripotent_with(r, s, l, rng)?;
    let v = random_element(r, s, rng);
    let parts = c.decompose(&v)?;
    let total = &(&parts[0] + &parts[1]) + &parts[2];
    let mut orth: f64 = 0.0;
    for (a, k) in [Peirce::Zero, Peirce::One, Peirce::Two]
        .into_iter()
        .enumerate()
    {
        for (b, x) in parts.iter().enumerate() {
            let p = c.project(x, k)?;
            let d = if a == b { p.max_abs_diff(x) } else { p.norm() };
            orth = orth.max(d);
        }
    }
    let tol = config.tolerance("peirce.projections", 1e-12);
    let mut out = vec![
        CaseRecord::real(
            S,
            "sum",
            i,
            total.norm(),
            v.norm(),
            total.max_abs_diff(&v),
            tol,
        ),
        CaseRecord::real(S, "projections", i, orth, 0.0, orth, tol),
    ];
    let d2 = c.peirce_dim(Peirce::Two) as f64;
    let d1 = c.peirce_dim(Peirce::One) as f64;
    out.push(CaseRecord::real(
        S,
        "dim-2",
        i,
        d2,
        space.d2(),
        (d2 - space.d2()).abs(),
        0.0,
    ));
    out.push(CaseRecord::real(
        S,
        "dim-1",
        i,
        d1,
        space.d1(),
        (d1 - space.d1()).abs(),
        0.0,
    ));

    let k = 1 + i % r;
    let z = random_rank_element(r, s, k, rng);
    let zt = pseudo_inverse(&z)?;
    let probe = random_element(r, s, rng);
    let res = pseudo_inverse_residuals(&z, &zt, &probe)?;
    let scale = (z.norm() * zt.norm()).powi(2).max(1.0) * probe.norm().max(1.0);
    let worst = res.iter().copied().fold(0.0, f64::max) / scale;
    out.push(
        CaseRecord::real(
            S,
            "pseudo-inverse",
            i,
            zt.norm(),
            z.norm(),
            worst,
            config.tolerance("peirce.pseudo-inverse", 1e-10),
        )
        .with_note(format!("rank {k}")),
    );

    // a unitary inside the frame of c leaves c fixed but changes the frame
    let x = c.project(&random_element(r, s, rng), Peirce::Two)?;
    let g = haar_unitary(l, rng);
    let mut u = c.frame_left().clone();
    let mut wf = c.frame_right().clone();
    let ul = u.columns(0, l) * &g;
    let wl = wf.columns(0, l) * &g;
    u.columns_mut(0, l).copy_from(&ul);
    wf.columns_mut(0, l).copy_from(&wl);
    let other = c.reframed(u, wf)?;
    let (a, b) = (c.jordan_det(&x)?, other.jordan_det(&x)?);
    out.push(CaseRecord::at_most(
        S,
        "frame",
        i,
        a,
        b,
        rel(a, b),
        config.tolerance("peirce.frame", 1e-10),
    ));
    let unit = c.jordan_det(c.element())?;
    out.push(CaseRecord::at_most(
        S,
        "unit",
        i,
        unit,
        cx(1.0),
        (unit - 1.0).norm(),
        config.tolerance("peirce.unit", 1e-12),
    ));
    Ok(out)
}

fn fischer_fock_case(
    config: &RunConfig,
    space: &TripleSpace,
    i: usize,
    rng: &mut SeededRng,
) -> CaseResult {
    let m = config.max_weight_or(12);
    let (z, w) = random_pair(space, 0.5, rng);
    let fe = FockExpansion::new(&z, &w, m)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for mu in enumerate_partitions(space.r(), m) {
        sum += fe.component(&mu)?;
    }
    let exact = inner_product(&z, &w)?.exp();
    Ok(vec![CaseRecord::at_most(
        "fischer-fock",
        format!("M={m}"),
        i,
        sum,
        exact,
        rel(sum, exact),
        config.tolerance("fischer-fock.sum", 1e-8),
    )])
}

/// Full-rank kernel against `Δ(z,w)^{−ν}`; uses `λ = r` whatever the config says.
fn faraut_koranyi(config: &RunConfig) -> CliResult<Vec<CaseRecord>> {
    const S: &str = "faraut-koranyi";
    let nu = config.nu()?;
    let base = config.space()?;
    let space = base
        .with_lambda(base.r())
        .map_err(|e| CliError::Config(format!("faraut-koranyi needs λ = r: {e}")))?;
    let m = config.max_weight_or(16);
    let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(nu), m, 0)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let series = KernelSeries::kernel(&spec)?;
    let tol = config.tolerance("faraut-koranyi.delta", 1e-6);
    let tol1 = config.tolerance("faraut-koranyi.rank-one", 1e-10);
    let results: Vec<Vec<CaseRecord>> = DefaultExecutor::map_range(config.cases, |i| {
        let mut rng = block_rng(config.seed, i);
        let mut run = || -> CaseResult {
            let (z, w) = random_pair(&space, 0.35, &mut rng);
            let k = series.eval(&z, &w)?.value;
            let exact = delta(&z, &w)?.powf(-nu);
            let mut out = vec![CaseRecord::at_most(
                S,
                "delta",
                i,
                k,
                exact,
                (k - exact).norm(),
                tol,
            )];
            if space.r() == 1 {
                let closed = (Complex64::new(1.0, 0.0) - inner_product(&z, &w)?).powf(-nu);
                out.push(CaseRecord::at_most(
                    S,
                    "rank-one",
                    i,
                    k,
                    closed,
                    rel(k, closed),
                    tol1,
                ));
            }
            Ok(out)
        };
        run().unwrap_or_else(|e| vec![CaseRecord::failed(S, "case", i, &e)])
    });
    Ok(results.into_iter().flatten().collect())
}

fn beta_integral(config: &RunConfig) -> CliResult<Vec<CaseRecord>> {
    const S: &str = "beta-integral";
    let nu = config.nu()?;
    let space = match config.ball_space()? {
        Some(b) => b,
        None => config.space()?,
    };
    let p = space.genus() as f64;
    if !(nu > p - 1.0) {
        return Err(CliError::Config(format!(
            "beta-integral needs nu > p - 1 = {}",
            p - 1.0
        )));
    }
    let part = |v: &[usize]| Partition::new(v.to_vec()).expect("valid literal partition");
    let mut out = Vec::new();
    match space.lambda() {
        1 => {
            let tol = config.tolerance("beta-integral.quadrature", 1e-10);
            for (i, m) in [0usize, 1, 3].into_iter().enumerate() {
                let mu = part(&[m]);
                out.push(
                    match beta_integral_check_with::<DefaultExecutor>(
                        &space,
                        nu,
                        &mu,
                        IntegrationMethod::Quadrature,
                    ) {
                        Ok(c) => CaseRecord::real(
                            S,
                            format!("quadrature {mu}"),
                            i,
                            c.lhs,
                            c.rhs,
                            c.abs_error,
                            tol,
                        ),
                        Err(e) => CaseRecord::failed(S, format!("quadrature {mu}"), i, &e),
                    },
                );
            }
            if space.r() == 1 {
                let d = space.s();
                for (i, m) in [0usize, 1, 3].into_iter().enumerate() {
                    let seed = config.seed.wrapping_add(i as u64);
                    out.push(
                        match reproducing_property_check_with::<DefaultExecutor>(
                            d,
                            nu,
                            m,
                            seed,
                            config.mc_samples,
                        ) {
                            Ok(c) => {
                                let rel_se = c.sphere_std_error / sphere_monomial_norm(d, m);
                                let tol = config
                                    .tolerance("beta-integral.polar", 1e-10)
                                    .max(4.0 * rel_se);
                                CaseRecord::real(
                                    S,
                                    format!("polar m={m}"),
                                    i,
                                    c.norm,
                                    c.expected,
                                    c.relative_error,
                                    tol,
                                )
                                .with_note(format!(
                                    "sphere standard error {:.3e}",
                                    c.sphere_std_error
                                ))
                            }
                            Err(e) => CaseRecord::failed(S, format!("polar m={m}"), i, &e),
                        },
                    );
                }
            }
        }
        2 => {
            for (i, mu) in [part(&[]), part(&[1]), part(&[1, 1]), part(&[2, 1])]
                .into_iter()
                .enumerate()
            {
                let method = IntegrationMethod::MonteCarlo {
                    seed: config.seed.wrapping_add(i as u64),
                    samples: config.mc_samples,
                };
                out.push(
                    match beta_integral_check_with::<DefaultExecutor>(&space, nu, &mu, method) {
                        Ok(c) => {
                            let rel_tol = config.tolerance("beta-integral.monte-carlo", 0.02);
                            let tol = (rel_tol * c.rhs.abs()).max(3.0 * c.std_error);
                            CaseRecord::real(
                                S,
                                format!("monte-carlo {mu}"),
                                i,
                                c.lhs,
                                c.rhs,
                                c.abs_error,
                                tol,
                            )
                            .with_note(format!(
                                "standard error {:.3e}, {} samples",
                                c.std_error, config.mc_samples
                            ))
                        }
                        Err(e) => CaseRecord::failed(S, format!("monte-carlo {mu}"), i, &e),
                    },
                );
            }
        }
        l => {
            return Err(CliError::Config(format!(
                "beta-integral is numerical only for λ ∈ {{1, 2}}, got λ = {l}"
            )))
        }
    }
    Ok(out)
}

fn charts_case(
    config: &RunConfig,
    space: &TripleSpace,
    i: usize,
    rng: &mut SeededRng,
) -> CaseResult {
    const S: &str = "charts";
    let point = random_chart_point(space, 0.45, 0.4, rng)?;
    let w = sigma_c(&point);
    let back = chart_inverse(&point.c, &w)?;
    let round = back
        .s
        .max_abs_diff(&point.s)
        .max(back.t.max_abs_diff(&point.t));
    let theta = theta_c(&point)?;
    let probe = random_element(space.r(), space.s(), rng);
    let res = pseudo_inverse_residuals(&theta.z, &theta.z_tilde, &probe)?;
    let worst = res.iter().copied().fold(0.0, f64::max);

    // same t, another s: the fibre point must not move
    let s2 = with_spectral_norm(&random_element(space.r(), space.s(), rng), 0.3);
    let other = ChartPoint::projected(point.c.clone(), &s2, &point.t)?;
    let theta2 = theta_c(&other)?;
    let (a, b) = theta.projections();
    let (c, d) = theta2.projections();
    let fibre = (a - c).norm().max((b - d).norm());

    Ok(vec![
        CaseRecord::real(
            S,
            "round-trip",
            i,
            back.s.norm(),
            point.s.norm(),
            round,
            config.tolerance("charts.round-trip", 1e-10),
        ),
        CaseRecord::real(
            S,
            "lemma-f",
            i,
            theta.closed_form.norm(),
            theta.z_tilde.norm(),
            theta.closed_form_residual,
            config.tolerance("charts.lemma-f", 1e-9),
        ),
        CaseRecord::real(
            S,
            "theta-pseudo-inverse",
            i,
            worst,
            0.0,
            worst,
            config.tolerance("charts.theta-pseudo-inverse", 1e-10),
        ),
        CaseRecord::real(
            S,
            "fibre",
            i,
            fibre,
            0.0,
            fibre,
            config.tolerance("charts.fibre", 1e-10),
        ),
    ])
}

fn cocycle_case(
    config: &RunConfig,
    space: &TripleSpace,
    i: usize,
    rng: &mut SeededRng,
) -> CaseResult {
    const S: &str = "cocycle";
    let point = random_chart_point(space, 0.45, 0.4, rng)?;
    let c2 = random_tripotent_with(space.r(), space.s(), space.lambda(), rng)?;
    let c3 = random_tripotent_with(space.r(), space.s(), space.lambda(), rng)?;
    let kappa = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) + 1.0;
    let c1 = point.c.clone();
    let germ = BundleGerm {
        chart: point,
        coefficient: kappa,
    };
    let g12 = transition_germ(&germ, &c2)?;
    let g123 = transition_germ(&g12, &c3)?;
    let g13 = transition_germ(&germ, &c3)?;
    let back = transition_germ(&g12, &c1)?;
    let tol = config.tolerance("cocycle.coefficient", 1e-10);
    let same_point = g123
        .chart
        .s
        .max_abs_diff(&g13.chart.s)
        .max(g123.chart.t.max_abs_diff(&g13.chart.t));
    Ok(vec![
        CaseRecord::at_most(
            S,
            "coefficient",
            i,
            g123.coefficient,
            g13.coefficient,
            rel(g123.coefficient, g13.coefficient),
            tol,
        ),
        CaseRecord::at_most(
            S,
            "inverse",
            i,
            back.coefficient,
            kappa,
            rel(back.coefficient, kappa),
            tol,
        ),
        CaseRecord::real(
            S,
            "point",
            i,
            same_point,
            0.0,
            same_point,
            config.tolerance("cocycle.point", 1e-10),
        ),
    ])
}

fn lemma_e_case(
    config: &RunConfig,
    space: &TripleSpace,
    i: usize,
    rng: &mut SeededRng,
) -> CaseResult {
    const S: &str = "lemma-e";
    let point = random_chart_point(space, 0.45, 0.4, rng)?;
    let e = lemma_e(&point)?;
    let target = cx(e.delta_t_minus_t);
    let mut note = format!("literal Δ(t,t) = {:.12e}", e.delta_t_t);
    if space.lambda() > 1 {
        note.push_str(&format!(
            "; projection residual {:.3e}",
            e.projection_residual
        ));
    }
    let mut out = vec![CaseRecord::at_most(
        S,
        "determinant",
        i,
        e.lhs,
        target,
        (e.lhs - target).norm(),
        config.tolerance("lemma-e.determinant", 1e-10),
    )
    .with_note(note)];
    if space.lambda() == 1 {
        out.push(CaseRecord::real(
            S,
            "projection",
            i,
            e.projection_residual,
            0.0,
            e.projection_residual,
            config.tolerance("lemma-e.projection", 1e-10),
        ));
    }
    let z = with_spectral_norm(&random_element(space.r(), space.s(), rng), 0.6);
    let tol = config.tolerance("lemma-e.shift", 1e-8);
    for mu in enumerate_partitions(space.lambda(), 3) {
        let check = fock_shift_identity(&point, &mu, &z)?;
        out.push(CaseRecord::at_most(
            S,
            format!("shift {mu}"),
            i,
            check.lhs,
            check.rhs,
            check.relative(),
            tol,
        ));
    }
    Ok(out)
}

fn submodule_suite(config: &RunConfig, suite: Suite) -> CliResult<Vec<CaseRecord>> {
    let space = config.space()?;
    let m = config.max_weight_or(14);
    let spec = KernelSpec::new(space, config.coefficients.sequence()?, m, 1)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let module = SingularModule::new(&spec)?;
    let name = suite.name();
    let key = format!("{name}.relative");
    let tol = config.tolerance(&key, 1e-8);
    let results: Vec<Vec<CaseRecord>> = DefaultExecutor::map_range(config.cases, |i| {
        let mut rng = block_rng(config.seed, i);
        let mut run = || -> CaseResult {
            let point = random_chart_point(&space, 0.3, 0.3, &mut rng)?;
            let check = match suite {
                Suite::PropD => {
                    let z = with_spectral_norm(
                        &random_rank_element(space.r(), space.s(), space.lambda(), &mut rng),
                        0.6,
                    );
                    module.prop_d(&point, &z)?
                }
                Suite::PropH => module.prop_h(&point)?,
                _ => module.embedding_check(&point)?,
            };
            Ok(vec![CaseRecord::at_most(
                name,
                "relative",
                i,
                check.lhs,
                check.rhs,
                check.relative(),
                tol,
            )])
        };
        run().unwrap_or_else(|e| vec![CaseRecord::failed(name, "case", i, &e)])
    });
    Ok(results.into_iter().flatten().collect())
}

/// Q-kernel generator of the singular submodule for `coeffs`, carrying every
/// coefficient needed to recover `|μ| ≤ max_weight`.
pub fn q_generator(
    space: &TripleSpace,
    coeffs: &CoefficientConfig,
    max_weight: usize,
) -> CliResult<KernelSeries> {
    let spec = KernelSpec::new(*space, coeffs.sequence()?, max_weight + space.lambda(), 1)
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(KernelSeries::q_kernel(&spec)?)
}

pub fn recover_from_generator(
    space: &TripleSpace,
    coeffs: &CoefficientConfig,
    max_weight: usize,
) -> CliResult<RecoveredTable> {
    let q = q_generator(space, coeffs, max_weight)?;
    Ok(recover_coefficients_with::<DefaultExecutor, _>(
        space,
        |x| Ok(q.eval(x, x)?.value.re),
        max_weight,
        &RecoveryOptions::default(),
    )?)
}

fn recovery(config: &RunConfig) -> CliResult<Vec<CaseRecord>> {
    const S: &str = "recovery";
    let space = config.space()?;
    let m = config.max_weight_or(6);
    let mut generators = vec![config.coefficients.clone()];
    if config.coefficients != CoefficientConfig::Hardy {
        generators.push(CoefficientConfig::Hardy);
    }
    let tol = config.tolerance("recovery.round-trip", 1e-8);
    let mut out = Vec::new();
    let mut tables = Vec::new();
    for (g, gen) in generators.iter().enumerate() {
        let table = match recover_from_generator(&space, gen, m) {
            Ok(t) => t,
            Err(CliError::Numerical(e)) => {
                out.push(CaseRecord::failed(S, format!("round-trip {gen}"), g, &e));
                continue;
            }
            Err(e) => return Err(e),
        };
        let seq = gen.sequence()?;
        for (p, v) in &table.entries {
            let rec = match seq.rho(&space, p) {
                Ok(exact) => CaseRecord::real(
                    S,
                    format!("round-trip {gen} {p}"),
                    g,
                    *v,
                    exact,
                    (v - exact).abs(),
                    tol,
                ),
                Err(e) => CaseRecord::failed(S, format!("round-trip {gen} {p}"), g, &e),
            };
            out.push(rec);
        }
        tables.push(table);
    }
    if tables.len() == 2 {
        let gap = tables[0]
            .max_discrepancy(&tables[1])
            .map_err(CliError::Numerical)?;
        out.push(
            CaseRecord::at_least(
                S,
                "distinct",
                0,
                gap,
                config.tolerance("recovery.distinct", 1e-3),
            )
            .with_note(format!("{} vs {}", generators[0], generators[1])),
        );
    }
    Ok(out)
}
