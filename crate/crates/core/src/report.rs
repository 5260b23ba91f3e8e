//! Serializable reports: whole-knot analysis, path samples, the randomized
//! verification suite, and the JSON/CSV encoders used by the CLI.

use std::collections::BTreeMap;
use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::boundary_path::boundary_holonomy;
use crate::chebyshev::cheb_ratio;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::knot::PretzelKnot;
use crate::representation::{build_unchecked, Sign};
use crate::trace_locus::{cover_threshold, find_r1_star, limit_t, solve_locus, theta0};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seed used by [`analyze`] for its embedded verification run.
pub const ANALYZE_SEED: u64 = 0;
pub const ANALYZE_SAMPLES: usize = 100;

pub const CSV_HEADER: [&str; 10] = [
    "r1",
    "r2",
    "r3",
    "gamma",
    "delta",
    "T",
    "theta",
    "phi",
    "slope_neg",
    "slope_pos",
];

/// Worst residual per category over a verification run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub chebyshev_identity: f64,
    pub locus_equations: f64,
    pub lhs_identity: f64,
    pub determinant: f64,
    pub trace: f64,
    pub trace_imaginary: f64,
    pub relation: f64,
    pub eigenvalue_equation: f64,
    pub longitude_closed_form: f64,
}

impl ResidualSummary {
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        [
            ("chebyshev_identity", self.chebyshev_identity),
            ("locus_equations", self.locus_equations),
            ("lhs_identity", self.lhs_identity),
            ("determinant", self.determinant),
            ("trace", self.trace),
            ("trace_imaginary", self.trace_imaginary),
            ("relation", self.relation),
            ("eigenvalue_equation", self.eigenvalue_equation),
            ("longitude_closed_form", self.longitude_closed_form),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// Both certified ranges for one knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub knot: PretzelKnot,
    #[serde(rename = "limit_T")]
    pub limit_t: f64,
    pub theta0: f64,
    pub cover_threshold: u32,
    pub r1_star: f64,
    pub surgery_interval: String,
    pub suite_passed: bool,
    pub residual_summary: ResidualSummary,
}

pub fn analyze(knot: &PretzelKnot, cfg: &ToleranceConfig) -> Result<AnalysisReport> {
    cfg.validate()?;
    let suite = verify_suite(knot, ANALYZE_SAMPLES, ANALYZE_SEED, cfg)?;
    Ok(AnalysisReport {
        knot: *knot,
        limit_t: limit_t(knot),
        theta0: theta0(knot),
        cover_threshold: cover_threshold(knot),
        r1_star: find_r1_star(knot, cfg)?,
        surgery_interval: "(-inf, 1)".to_string(),
        suite_passed: suite.passed,
        residual_summary: suite.summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub gamma: f64,
    pub delta: f64,
    #[serde(rename = "T")]
    pub t_squared: f64,
    pub theta: f64,
    pub phi: f64,
    /// `-phi/theta` on the plus branch.
    pub slope_neg: f64,
    /// `-phi/(theta - pi)` on the minus branch.
    pub slope_pos: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub knot: PretzelKnot,
    pub r1_star: f64,
    pub rows: Vec<PathRow>,
}

/// Samples the elliptic path with `r1 - 2` spaced geometrically from
/// `boundary_eps` up to `r1* - 2 - boundary_eps`.
pub fn sample_path(knot: &PretzelKnot, count: usize, cfg: &ToleranceConfig) -> Result<PathSample> {
    cfg.validate()?;
    if count < 2 {
        return Err(Error::InvalidInput(format!(
            "path needs at least 2 samples, got {count}"
        )));
    }
    let r1_star = find_r1_star(knot, cfg)?;
    let first = cfg.boundary_eps;
    let last = r1_star - 2.0 - cfg.boundary_eps;
    let ratio = last / first;
    let rows = (0..count)
        .map(|i| {
            let excess = if i == count - 1 {
                last
            } else {
                first * ratio.powf(i as f64 / (count - 1) as f64)
            };
            path_row(knot, 2.0 + excess, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathSample {
        knot: *knot,
        r1_star,
        rows,
    })
}

fn path_row(knot: &PretzelKnot, r1: f64, cfg: &ToleranceConfig) -> Result<PathRow> {
    let point = solve_locus(knot, r1, cfg)?;
    let plus = boundary_holonomy(&point, Sign::Plus)?;
    let minus = boundary_holonomy(&point, Sign::Minus)?;
    Ok(PathRow {
        r1: point.r1,
        r2: point.r2,
        r3: point.r3,
        gamma: point.gamma,
        delta: point.delta,
        t_squared: point.t_squared,
        theta: plus.theta,
        phi: plus.phi,
        slope_neg: plus.slope,
        slope_pos: minus.slope,
    })
}

impl PathSample {
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| Error::InvalidInput(format!("csv encoding failed: {e}"));
        writer.write_record(CSV_HEADER).map_err(io_err)?;
        for row in &self.rows {
            let fields = [
                row.r1,
                row.r2,
                row.r3,
                row.gamma,
                row.delta,
                row.t_squared,
                row.theta,
                row.phi,
                row.slope_neg,
                row.slope_pos,
            ];
            writer
                .write_record(fields.iter().map(|v| format!("{v:.16e}")))
                .map_err(io_err)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::InvalidInput(format!("csv encoding failed: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }
}

/// One named check of the verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst residual (for residual checks) or smallest margin (for strict
    /// inequalities) seen.
    pub worst: f64,
    pub tolerance: f64,
    pub evaluated: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub knot: PretzelKnot,
    pub samples: usize,
    pub seed: u64,
    pub r1_star: f64,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    pub summary: ResidualSummary,
    /// Largest gap between `L` and the expanded formulas taken over
    /// `alpha^2 + beta^2 - 2 alpha beta cos(theta)`. Informational only.
    pub cos_theta_denominator_gap: f64,
}

/// Accumulates a residual check (`value <= tolerance`).
struct Residual {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    evaluated: usize,
    failures: usize,
}

impl Residual {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Residual {
            name,
            tolerance,
            worst: 0.0,
            evaluated: 0,
            failures: 0,
        }
    }

    fn record(&mut self, value: f64) {
        self.evaluated += 1;
        if value.is_nan() || value > self.worst {
            self.worst = value;
        }
        if !(value <= self.tolerance) {
            self.failures += 1;
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            passed: self.failures == 0 && self.evaluated > 0,
            worst: self.worst,
            tolerance: self.tolerance,
            evaluated: self.evaluated,
            failures: self.failures,
        }
    }
}

/// Accumulates a strict inequality check (`margin > 0`).
struct Margin {
    name: &'static str,
    smallest: f64,
    evaluated: usize,
    failures: usize,
}

impl Margin {
    fn new(name: &'static str) -> Self {
        Margin {
            name,
            smallest: f64::INFINITY,
            evaluated: 0,
            failures: 0,
        }
    }

    fn record(&mut self, margin: f64) {
        self.evaluated += 1;
        if margin.is_nan() || margin < self.smallest {
            self.smallest = margin;
        }
        if !(margin > 0.0) {
            self.failures += 1;
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            passed: self.failures == 0 && self.evaluated > 0,
            worst: self.smallest,
            tolerance: 0.0,
            evaluated: self.evaluated,
            failures: self.failures,
        }
    }
}

/// Draws `r1` in `(2, r1*)` resolving both ends: the offset from the
/// nearer end is log-uniform in `[1e-6, 1]` of the interval length.
fn elliptic_sample(rng: &mut ChaCha8Rng, r1_star: f64) -> f64 {
    let span = r1_star - 2.0;
    let offset = span * 0.5 * 10f64.powf(rng.gen_range(-6.0..=0.0));
    if rng.gen_bool(0.5) {
        2.0 + offset
    } else {
        r1_star - offset
    }
}

/// Runs every invariant check at `samples` seeded random points.
///
/// Failures are reported in the returned report, never raised; only
/// invalid arguments or a solver breakdown produce an error.
pub fn verify_suite(
    knot: &PretzelKnot,
    samples: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<SuiteReport> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    cfg.validate()?;
    let solver_cfg = *cfg;
    let tol = cfg.residual_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r1_star = find_r1_star(knot, &solver_cfg)?;

    let mut cheb_identity = Residual::new("chebyshev_identity", tol);
    let mut cheb_mono_n = Margin::new("chebyshev_monotone_in_n");
    let mut cheb_mono_z = Margin::new("chebyshev_monotone_in_z");
    let mut equations = Residual::new("locus_equations", tol);
    let mut triangle = Margin::new("triangle_inequalities");
    let mut delta_bound = Margin::new("delta_lower_bound");
    let mut sigma_gamma = Margin::new("sigma_gamma_positive");
    let mut meridian_bounds = Margin::new("meridian_trace_bounds");
    let mut lhs_identity = Residual::new("lhs_identity", tol);
    let mut determinant = Residual::new("representation_determinant", tol);
    let mut traces = Residual::new("representation_traces", tol);
    let mut trace_imag = Residual::new("trace_reality", tol);
    let mut relations = Residual::new("wirtinger_relations", tol);
    let mut branch = Residual::new("branch_symmetry", tol);
    let mut pair_trace = Margin::new("pair_trace_exceeds_two");
    let mut eigen_eq = Residual::new("longitude_eigenvalue_equation", tol);
    let mut unit = Residual::new("longitude_unit_modulus", tol);
    let mut upper = Margin::new("longitude_upper_half_plane");
    let mut alpha_beta = Margin::new("alpha_beta_ordering");
    let mut closed_form = Residual::new("longitude_closed_form", tol);
    let mut cos_theta_gap: f64 = 0.0;

    for _ in 0..samples {
        // Chebyshev identities and monotonicity.
        let n: u32 = rng.gen_range(1..=12);
        let z: f64 = rng.gen_range(-3.0..=5.0);
        let pair = cheb_ratio(n, z);
        let next = z * pair.w - pair.v;
        let scale = pair.w * pair.w + (next * pair.v).abs();
        cheb_identity.record(pair.cassini_defect().abs() / scale.max(1.0));
        let scale = pair.w * pair.w + pair.v * pair.v + (z * pair.w * pair.v).abs();
        cheb_identity.record(pair.quadratic_defect().abs() / scale.max(1.0));

        let (lo, hi) = {
            let a: u32 = rng.gen_range(1..=12);
            let b: u32 = rng.gen_range(1..=12);
            (a.min(b), a.max(b))
        };
        if lo < hi {
            let z: f64 = rng.gen_range(2.0..=4.0);
            let (p, q) = (cheb_ratio(lo, z), cheb_ratio(hi, z));
            // S_lo / S_{lo-1} > S_hi / S_{hi-1}, cross-multiplied.
            cheb_mono_n.record(p.w * q.v - q.w * p.v);
        }
        let z1: f64 = rng.gen_range(2.0..5.0);
        let z2: f64 = rng.gen_range(2.0..5.0);
        if z1 != z2 {
            let (z1, z2) = (z1.min(z2), z1.max(z2));
            let (p1, p2) = (cheb_ratio(n, z1), cheb_ratio(n, z2));
            cheb_mono_z.record(p2.w * p1.v - p1.w * p2.v);
            let g = |z: f64, w: f64, v: f64| (z - 2.0) * v / (w - v);
            cheb_mono_z.record(g(z2, p2.w, p2.v) - g(z1, p1.w, p1.v));
        }

        // Locus invariants at log-uniform r1 = 2 + 10^u.
        let u: f64 = rng.gen_range(-6.0..=1.0);
        let point = solve_locus(knot, 2.0 + 10f64.powf(u), &solver_cfg)?;
        let check = point.check();
        equations.record(check.equation_residual);
        for m in point.triangle_margins() {
            triangle.record(m);
        }
        let lower = point.excess_product();
        delta_bound.record((point.delta - lower).min(lower));
        sigma_gamma.record(point.sigma_gamma_margin());
        meridian_bounds
            .record((point.t_squared - (point.r1 - 2.0)).min(point.r1 + 2.0 - point.t_squared));
        lhs_identity.record(check.lhs_identity_defect);

        // Representations and holonomy on the elliptic stretch.
        let point = solve_locus(knot, elliptic_sample(&mut rng, r1_star), &solver_cfg)?;
        let reps = [Sign::Plus, Sign::Minus].map(|s| build_unchecked(&point, s));
        for rep in reps.iter().flatten() {
            determinant.record(rep.det_residuals().into_iter().fold(0.0, f64::max));
            traces.record(rep.trace_residual(&point));
            trace_imag.record(rep.traces().max_imag());
            relations.record(rep.relation_residual);
            pair_trace.record(rep.traces().r1.re - 2.0);
        }
        match &reps {
            [Ok(plus), Ok(minus)] => {
                let (a, b) = (plus.traces(), minus.traces());
                let gap = [
                    (a.t[0] + b.t[0]).norm(),
                    (a.r1 - b.r1).norm(),
                    (a.r2 - b.r2).norm(),
                    (a.r3 - b.r3).norm(),
                ];
                branch.record(gap.into_iter().fold(0.0, f64::max));
            }
            _ => {
                // A singular system is a failure of every representation check.
                for check in [&mut determinant, &mut traces, &mut relations, &mut branch] {
                    check.record(f64::INFINITY);
                }
            }
        }
        for sign in [Sign::Plus, Sign::Minus] {
            match boundary_holonomy(&point, sign) {
                Ok(h) => {
                    eigen_eq.record(h.eigenvalue_equation_residual(&point));
                    unit.record((h.longitude.norm() - 1.0).abs());
                    upper.record(h.longitude.im);
                    alpha_beta.record((h.alpha - h.beta).min(h.beta));
                    closed_form.record(h.closed_form_defect());
                    cos_theta_gap = cos_theta_gap.max(h.cos_theta_denominator_gap());
                }
                Err(_) => {
                    eigen_eq.record(f64::INFINITY);
                    upper.record(f64::NAN);
                }
            }
        }
    }

    let summary = ResidualSummary {
        chebyshev_identity: cheb_identity.worst,
        locus_equations: equations.worst,
        lhs_identity: lhs_identity.worst,
        determinant: determinant.worst,
        trace: traces.worst,
        trace_imaginary: trace_imag.worst,
        relation: relations.worst,
        eigenvalue_equation: eigen_eq.worst,
        longitude_closed_form: closed_form.worst,
    };
    let checks = vec![
        cheb_identity.finish(),
        cheb_mono_n.finish(),
        cheb_mono_z.finish(),
        equations.finish(),
        triangle.finish(),
        delta_bound.finish(),
        sigma_gamma.finish(),
        meridian_bounds.finish(),
        lhs_identity.finish(),
        determinant.finish(),
        traces.finish(),
        trace_imag.finish(),
        relations.finish(),
        branch.finish(),
        pair_trace.finish(),
        eigen_eq.finish(),
        unit.finish(),
        upper.finish(),
        alpha_beta.finish(),
        closed_form.finish(),
    ];
    // The n-monotonicity check can draw lo == hi on every sample when
    // samples is tiny; an unevaluated check is not a failure.
    let passed = checks.iter().all(|c| c.passed || c.evaluated == 0);
    Ok(SuiteReport {
        knot: *knot,
        samples,
        seed,
        r1_star,
        passed,
        checks,
        summary,
        cos_theta_denominator_gap: cos_theta_gap,
    })
}

/// What the CLI was asked to do.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Query {
    Analyze,
    Locus { r1: f64 },
    Slope { slope: String },
    Cover { n: u32 },
    Path { samples: usize },
    Verify { samples: usize, seed: u64 },
}

/// Top-level JSON document emitted by every CLI subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<R> {
    pub knot: PretzelKnot,
    pub query: Query,
    pub result: R,
    pub residuals: BTreeMap<String, f64>,
    pub config: ToleranceConfig,
    pub version: String,
}

impl<R> Envelope<R> {
    pub fn new(
        knot: PretzelKnot,
        query: Query,
        result: R,
        residuals: BTreeMap<String, f64>,
        config: ToleranceConfig,
    ) -> Self {
        Envelope {
            knot,
            query,
            result,
            residuals,
            config,
            version: VERSION.to_string(),
        }
    }
}

/// Pretty JSON with every float written with 17 significant digits.
struct SigFigFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SigFigFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
