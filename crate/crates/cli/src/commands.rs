//! The three subcommands, as functions returning their output text.

use std::path::Path;

use jordan_kepler::blowup::{metric_curvature_with, ChartPoint, SingularModule};
use jordan_kepler::exec::DefaultExecutor;
use jordan_kepler::jordan::{TripleElement, TripleSpace, Tripotent};
use jordan_kepler::kernel::{
    recover_coefficients_with, sample_grid, KernelSeries, KernelSpec, RecoveredTable,
    RecoveryOptions,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{CoefficientConfig, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::suites::{q_generator, run_suite, Suite};

pub const CURVATURE_SCHEMA: &str = "# kepler-curvature v1";
pub const RECOVER_SCHEMA: &str = "kepler-recover v1";
pub const SAMPLES_SCHEMA: &str = "# kepler-samples v1";

pub fn verify(config: &RunConfig, suites: &[Suite]) -> CliResult<Report> {
    config.validate()?;
    let mut cases = Vec::new();
    for &s in suites {
        cases.extend(run_suite(config, s)?);
    }
    Ok(Report {
        config: config.clone(),
        suites: suites.iter().map(|s| s.name().to_string()).collect(),
        cases,
    })
}

/// The grid values along one real axis.
fn axis(points: usize, min: f64, max: f64) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5 * (min + max)],
        n => (0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `log Q` and its first two derivatives at `x` for `Q(x) = Σ q_m x^m / m!`.
fn log_q_derivatives(series: &KernelSeries, x: f64) -> (f64, f64) {
    let (mut q, mut dq, mut ddq) = (0.0, 0.0, 0.0);
    for (p, coef) in series.terms() {
        let m = p.weight();
        let fact: f64 = (1..=m).map(|k| k as f64).product();
        let c = coef / fact;
        q += c * x.powi(m as i32);
        if m >= 1 {
            dq += c * m as f64 * x.powi(m as i32 - 1);
        }
        if m >= 2 {
            ddq += c * (m * (m - 1)) as f64 * x.powi(m as i32 - 2);
        }
    }
    let f1 = dq / q;
    (f1, ddq / q - f1 * f1)
}

/// Rank-one oracle for `κ_{ττ}` at `s = σ^{1/2}`, `t` with the single
/// nonzero coordinate `τ`.
fn rank_one_oracle(series: &KernelSeries, sigma: f64, tau: Complex64) -> f64 {
    let u = 1.0 + tau.norm_sqr();
    let (f1, f2) = log_q_derivatives(series, sigma * u);
    -(1.0 / (u * u) + f2 * sigma * sigma * tau.norm_sqr() + f1 * sigma)
}

/// Curvature of the submodule metric over a grid in the first `t`
/// coordinate of the standard chart, as CSV.
///
/// Columns: every chart coordinate as `coordK_re, coordK_im`, then `h`,
/// `k_i_j_re, k_i_j_im` for `κ = −∂∂̄ log h`, `fd_err`, `oracle` (the
/// analytic `κ` entry of the scanned coordinate when `λ = 1`, else empty)
/// and `flag` (empty, or the reason the row could not be computed).
pub fn curvature_scan(config: &RunConfig) -> CliResult<String> {
    config.validate()?;
    let space = config.space()?;
    let (r, s, l) = (space.r(), space.s(), space.lambda());
    let spec = KernelSpec::new(
        space,
        config.coefficients.sequence()?,
        config.max_weight_or(14),
        1,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let module = SingularModule::new(&spec)?;
    let c = Tripotent::standard(r, s, l)?;
    let base = ChartPoint::projected(
        c.clone(),
        &TripleElement::block_identity(r, s, l).scale(Complex64::new(config.grid.s_value, 0.0)),
        &TripleElement::zeros(r, s),
    )?;
    let mut coords = base.coordinates();
    let n = coords.len();
    let scanned = l * l;
    let g = &config.grid;

    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header: Vec<String> = Vec::new();
    for k in 0..n {
        header.push(format!("coord{k}_re"));
        header.push(format!("coord{k}_im"));
    }
    header.push("h".into());
    for i in 0..n {
        for j in 0..n {
            header.push(format!("k_{i}_{j}_re"));
            header.push(format!("k_{i}_{j}_im"));
        }
    }
    for col in ["fd_err", "oracle", "flag"] {
        header.push(col.into());
    }
    w.write_record(&header)?;

    let xs = axis(g.points, g.min, g.max);
    for &re in &xs {
        for &im in &xs {
            coords[scanned] = Complex64::new(re, im);
            let mut row: Vec<String> = Vec::with_capacity(header.len());
            for z in &coords {
                row.push(z.re.to_string());
                row.push(z.im.to_string());
            }
            let computed = ChartPoint::from_coordinates(c.clone(), &coords).and_then(|p| {
                let h = module.metric(&p)?;
                let report = metric_curvature_with::<DefaultExecutor>(&module, &p, g.steps)?;
                Ok((h, report))
            });
            match computed {
                Ok((h, report)) => {
                    row.push(h.to_string());
                    let k = report.curvature();
                    for i in 0..n {
                        for j in 0..n {
                            row.push(k[(i, j)].re.to_string());
                            row.push(k[(i, j)].im.to_string());
                        }
                    }
                    row.push(report.error_estimate.to_string());
                    row.push(if l == 1 {
                        rank_one_oracle(module.q_kernel(), g.s_value * g.s_value, coords[scanned])
                            .to_string()
                    } else {
                        String::new()
                    });
                    row.push(String::new());
                }
                Err(e) => {
                    row.resize(header.len() - 1, "NaN".into());
                    row.push(e.to_string());
                }
            }
            w.write_record(&row)?;
        }
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?)
        .expect("csv output is utf-8");
    Ok(format!("{CURVATURE_SCHEMA}\n{body}"))
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveredEntry {
    pub partition: Vec<usize>,
    pub rho: f64,
    /// The generator's own value, when the generator is a known sequence.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveredOutput {
    pub source: String,
    pub condition: f64,
    pub residual: f64,
    pub samples: usize,
    pub entries: Vec<RecoveredEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    /// `equal` or `distinct`.
    pub verdict: String,
    pub max_discrepancy: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoverOutput {
    pub schema: &'static str,
    pub r: usize,
    pub s: usize,
    pub lambda: usize,
    pub max_weight: usize,
    pub tables: Vec<RecoveredOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Verdict>,
}

/// Where a table comes from: a coefficient sequence, or measured Q values.
#[derive(Debug, Clone)]
pub enum RecoverSource {
    Generator(CoefficientConfig),
    Samples(SampleTable),
}

impl RecoverSource {
    fn label(&self) -> String {
        match self {
            RecoverSource::Generator(g) => g.to_string(),
            RecoverSource::Samples(s) => format!("samples[{}]", s.rows.len()),
        }
    }
}

/// Diagonal evaluations `Q(x, x)` at `x = Σ t_i e_ii`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable {
    pub rows: Vec<(Vec<f64>, f64)>,
}

impl SampleTable {
    /// Parse the CSV written by [`emit_samples`]: a schema line, a header
    /// `t1, …, tλ, q`, then one row per grid point.
    pub fn parse(text: &str, lambda: usize) -> CliResult<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(SAMPLES_SCHEMA) {
            return Err(CliError::Config(format!(
                "samples file must start with `{SAMPLES_SCHEMA}`"
            )));
        }
        let rest: String = lines.collect::<Vec<_>>().join("\n");
        let mut reader = csv::Reader::from_reader(rest.as_bytes());
        let width = reader.headers()?.len();
        if width != lambda + 1 {
            return Err(CliError::Config(format!(
                "samples file has {width} columns, expected {} for λ = {lambda}",
                lambda + 1
            )));
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| CliError::Config(format!("bad number in samples file: {e}")))?;
            rows.push((vals[..lambda].to_vec(), vals[lambda]));
        }
        Ok(SampleTable { rows })
    }

    fn lookup(&self, x: &TripleElement, lambda: usize) -> jordan_kepler::Result<f64> {
        let t: Vec<f64> = (0..lambda).map(|i| x.matrix()[(i, i)].re).collect();
        self.rows
            .iter()
            .find(|(p, _)| {
                p.iter()
                    .zip(&t)
                    .all(|(a, b)| (a - b).abs() <= 1e-12 * b.abs().max(1.0))
            })
            .map(|(_, q)| *q)
            .ok_or_else(|| jordan_kepler::Error::Inconsistent(format!("no sample at t = {t:?}")))
    }
}

fn grid_for(space: &TripleSpace, max_weight: usize) -> Vec<Vec<f64>> {
    let o = RecoveryOptions::default();
    let k = (o.oversample * (max_weight + 1) as f64).ceil() as usize;
    sample_grid(space.lambda(), k.max(max_weight + 1), o.t_min, o.t_max)
}

/// Evaluate the Q-kernel of `generator` on the recovery grid, as a samples
/// file that `recover --samples` accepts.
pub fn emit_samples(config: &RunConfig, generator: &CoefficientConfig) -> CliResult<String> {
    config.validate()?;
    let space = config.space()?;
    let m = config.max_weight_or(6);
    let q = q_generator(&space, generator, m)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=space.lambda()).map(|i| format!("t{i}")).collect();
    header.push("q".into());
    w.write_record(&header)?;
    for t in grid_for(&space, m) {
        let x = jordan_kepler::kernel::diagonal_point(&space, &t)?;
        let v = q.eval(&x, &x)?.value.re;
        let mut row: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        row.push(v.to_string());
        w.write_record(&row)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?)
        .expect("csv output is utf-8");
    Ok(format!("{SAMPLES_SCHEMA}\n{body}"))
}

fn recover_table(
    space: &TripleSpace,
    source: &RecoverSource,
    m: usize,
) -> CliResult<RecoveredTable> {
    let options = RecoveryOptions::default();
    let table = match source {
        RecoverSource::Generator(g) => {
            let q = q_generator(space, g, m)?;
            recover_coefficients_with::<DefaultExecutor, _>(
                space,
                |x| Ok(q.eval(x, x)?.value.re),
                m,
                &options,
            )?
        }
        RecoverSource::Samples(s) => {
            let l = space.lambda();
            recover_coefficients_with::<DefaultExecutor, _>(space, |x| s.lookup(x, l), m, &options)?
        }
    };
    Ok(table)
}

/// Recover the coefficient table of each source; with exactly two sources,
/// also decide whether the tables agree.
pub fn recover(config: &RunConfig, sources: &[RecoverSource]) -> CliResult<RecoverOutput> {
    config.validate()?;
    let space = config.space()?;
    let m = config.max_weight_or(6);
    let defaults = [RecoverSource::Generator(config.coefficients.clone())];
    let sources = if sources.is_empty() {
        &defaults[..]
    } else {
        sources
    };
    let mut tables = Vec::new();
    let mut raw = Vec::new();
    for src in sources {
        let table = recover_table(&space, src, m)?;
        let seq = match src {
            RecoverSource::Generator(g) => Some(g.sequence()?),
            RecoverSource::Samples(_) => None,
        };
        let entries = table
            .entries
            .iter()
            .map(|(p, rho)| RecoveredEntry {
                partition: p.parts().to_vec(),
                rho: *rho,
                exact: seq.as_ref().and_then(|s| s.rho(&space, p).ok()),
            })
            .collect();
        tables.push(RecoveredOutput {
            source: src.label(),
            condition: table.condition,
            residual: table.residual,
            samples: table.samples,
            entries,
        });
        raw.push(table);
    }
    let comparison = if raw.len() == 2 {
        let gap = raw[0].max_discrepancy(&raw[1])?;
        let threshold = config.tolerance("recover.equal", 1e-6);
        Some(Verdict {
            verdict: if gap < threshold { "equal" } else { "distinct" }.into(),
            max_discrepancy: gap,
            threshold,
        })
    } else {
        None
    };
    Ok(RecoverOutput {
        schema: RECOVER_SCHEMA,
        r: space.r(),
        s: space.s(),
        lambda: space.lambda(),
        max_weight: m,
        tables,
        comparison,
    })
}

pub fn read_samples(path: &Path, lambda: usize) -> CliResult<SampleTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    SampleTable::parse(&text, lambda)
}
