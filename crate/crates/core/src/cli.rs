//! `analyze`, `verify` and `faces` workflows behind the command-line tool.
//!
//! Every report is wrapped in an envelope with the tool version and the fully
//! resolved configuration. Reports contain no timings or other run-dependent
//! data, so a fixed input, seed and tolerance give byte-identical output.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a check failed.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::normalform::{all_c_coefficients, compute_mgs, dimension_report, DimReport, MgsData, MgsStructure};
use crate::oracle::{
    eig_hermitian, isotropy_group_check, sample_KM_conjugate, spectrum_deviation, symplectic_form_check,
    tangent_slice_dims, tangent_slice_dims_at, IsotropyReport, Prng, SliceReport, RANK_TOL,
};
use crate::pattern::{build_pattern, multiset_stats, parse_spectrum, sum_identity_residual, Shape, SpectrumPair};
use crate::polytope::{enumerate_faces, face_invariants, TightFlag};
use crate::realization::{
    build_point_spec, factorization_check, membership_check, moment_projection, reduced_identity_check, render_numeric,
    PointSpec,
};

pub const TOOL: &str = "interlacing-nf";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Convergence threshold for the Jacobi eigensolver.
const EIG_TOL: f64 = 1e-14;
/// Sampled points must project to `diag(μ)` to this relative accuracy.
const MOMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Verify,
    Faces,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Comma-separated rationals; `mu` may be omitted for `faces`.
    Inline { lambda: String, mu: Option<String> },
    /// JSON object `{"lambda": [...], "mu": [...]}` with rationals as strings.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: Source,
    pub tolerance: f64,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    /// Also compute slice dimensions at every sampled point.
    pub sample_slices: bool,
}

impl RunConfig {
    pub fn new(command: Command, source: Source) -> Self {
        RunConfig {
            command,
            source,
            tolerance: 1e-8,
            seed: 0,
            samples: 10,
            format: Format::Json,
            sample_slices: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Input(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct InputFile {
    lambda: Vec<Rational>,
    mu: Option<Vec<Rational>>,
}

/// `λ` and, if given, `μ` from the configured source.
fn load_spectra(source: &Source) -> Result<(Vec<Rational>, Option<Vec<Rational>>)> {
    match source {
        Source::Inline { lambda, mu } => {
            let lambda = parse_spectrum(lambda)?;
            let mu = mu.as_deref().map(parse_spectrum).transpose()?;
            Ok((lambda, mu))
        }
        Source::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let raw: InputFile = serde_json::from_str(&text)?;
            Ok((raw.lambda, raw.mu))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: Command,
    pub lambda: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub tolerance: f64,
    pub rank_tolerance: f64,
    pub seed: u64,
    pub samples: usize,
    pub sample_slices: bool,
    pub format: Format,
}

#[derive(Debug, Clone, Serialize)]
struct Envelope<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: ResolvedConfig,
    passed: bool,
    report: T,
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub label: Rational,
    pub shape: Shape,
    pub top_count: usize,
    pub bottom_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternSummary {
    pub components: Vec<ComponentSummary>,
    /// Vertex ids: `0..=n` top row, `n+1..=2n` bottom row.
    pub edges: Vec<(usize, usize)>,
    pub w_labels: Vec<Rational>,
    pub m_labels: Vec<Rational>,
    pub p_labels: Vec<Rational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactCheck {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ExactCheck {
    fn new(name: &'static str, passed: bool) -> Self {
        ExactCheck {
            name,
            passed,
            detail: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub n: usize,
    pub pattern: PatternSummary,
    pub normal_form: MgsData,
    pub l_group: String,
    pub w_space: String,
    pub dimensions: Option<DimReport>,
    pub point: PointSpec,
    pub checks: Vec<ExactCheck>,
}

impl AnalyzeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn cmd_analyze(pair: &SpectrumPair) -> AnalyzeReport {
    let pattern = build_pattern(pair);
    let mgs = compute_mgs(pair);
    let spec = build_point_spec(pair);
    let mut checks = Vec::new();

    checks.push(ExactCheck::new("sum_identity", sum_identity_residual(pair).is_zero()));

    let mut bad = Vec::new();
    for (value, shape, cc) in all_c_coefficients(pair) {
        if cc.is_zero() != (shape == Shape::W) {
            bad.push(format!("C({value}) = {cc} on a {shape}-shape"));
        }
    }
    for (b, r) in mgs.mu_blocks.iter().zip(&mgs.r_squared) {
        if r.r_squared.is_positive() != (b.shape == Shape::M) || r.r_squared.is_negative() {
            bad.push(format!("r^2({}) = {} on a {}-shape", b.value, r.r_squared, b.shape));
        }
    }
    checks.push(ExactCheck {
        name: "c_vanishing",
        passed: bad.is_empty(),
        detail: (!bad.is_empty()).then(|| bad.join("; ")),
    });
    checks.push(ExactCheck::new("membership", membership_check(pair, &spec)));
    checks.push(ExactCheck::new("reduced_identity", reduced_identity_check(pair)));
    checks.push(ExactCheck::new("factorization", factorization_check(pair)));
    let dimensions = match dimension_report(&mgs, &multiset_stats(pair.lambda())) {
        Ok(d) => {
            checks.push(ExactCheck::new("dimension", true));
            Some(d)
        }
        Err(e) => {
            checks.push(ExactCheck {
                name: "dimension",
                passed: false,
                detail: Some(e.to_string()),
            });
            None
        }
    };

    AnalyzeReport {
        n: pair.n(),
        pattern: PatternSummary {
            components: pattern
                .components
                .iter()
                .map(|c| ComponentSummary {
                    label: c.label.clone(),
                    shape: c.shape,
                    top_count: c.top_count,
                    bottom_count: c.bottom_count,
                })
                .collect(),
            edges: pattern.edges.clone(),
            w_labels: pattern.labels_with_shape(Shape::W),
            m_labels: pattern.labels_with_shape(Shape::M),
            p_labels: pattern.labels_with_shape(Shape::P),
        },
        l_group: mgs.l_display(),
        w_space: mgs.w_display(),
        normal_form: mgs,
        dimensions,
        point: spec,
        checks,
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

impl AnalyzeReport {
    fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.pattern;
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "W-shapes: {{{}}}", join(&p.w_labels));
        let _ = writeln!(s, "M-shapes: {{{}}}", join(&p.m_labels));
        let _ = writeln!(s, "parallelograms: {{{}}}", join(&p.p_labels));
        let _ = writeln!(s, "c = {}", self.normal_form.c);
        for r in &self.normal_form.r_squared {
            if !r.r_squared.is_zero() {
                let _ = writeln!(s, "r^2({}) = {}", r.value, r.r_squared);
            }
        }
        for w in &self.normal_form.w_summands {
            let _ = writeln!(
                s,
                "C({}) = {}  dim_C = {}  coefficient = {}",
                w.value, w.c_mu, w.dim_complex, w.coefficient
            );
        }
        let _ = writeln!(s, "L = {}", self.l_group);
        let _ = writeln!(s, "W = {}", self.w_space);
        if let Some(d) = &self.dimensions {
            let _ = writeln!(
                s,
                "dim orbit = {} = {} + {} + {}  (K/L + m* + W)",
                d.dim_orbit, d.dim_k_mod_l, d.dim_mstar, d.dim_w
            );
        }
        for c in &self.checks {
            let _ = write!(s, "[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            if let Some(d) = &c.detail {
                let _ = write!(s, ": {d}");
            }
            s.push('\n');
        }
        s
    }
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericCheck {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl NumericCheck {
    fn deviation(name: &'static str, deviation: f64, tolerance: f64) -> Self {
        NumericCheck {
            name,
            status: if deviation <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            deviation: Some(deviation),
            tolerance: Some(tolerance),
            seed: None,
            detail: None,
        }
    }

    fn boolean(name: &'static str, ok: bool, detail: Option<String>) -> Self {
        NumericCheck {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            deviation: None,
            tolerance: None,
            seed: None,
            detail,
        }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        NumericCheck {
            name,
            status: Status::Skipped,
            deviation: None,
            tolerance: None,
            seed: None,
            detail: Some(why.to_string()),
        }
    }

    fn errored(name: &'static str, e: &Error) -> Self {
        NumericCheck::boolean(name, false, Some(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleResult {
    pub seed: u64,
    pub moment_deviation: f64,
    pub spectrum_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice_matches: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<NumericCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice: Option<SliceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropy: Option<IsotropyReport>,
    pub samples: Vec<SampleResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&NumericCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn lambda_f64(pair: &SpectrumPair) -> Vec<f64> {
    pair.lambda().iter().map(Rational::to_f64).collect()
}

/// Numerical oracles at the canonical point and at `samples` random
/// `K_M`-conjugates of it.
pub fn cmd_verify(pair: &SpectrumPair, tol: f64, seed: u64, samples: usize, sample_slices: bool) -> VerifyReport {
    let spec = build_point_spec(pair);
    let p = render_numeric(&spec);
    let lambda = lambda_f64(pair);
    let mu: Vec<f64> = pair.mu().iter().map(Rational::to_f64).collect();
    let mut checks = Vec::new();

    checks.push(match eig_hermitian(&p, EIG_TOL) {
        Ok(ev) => NumericCheck::deviation("eigenvalues", spectrum_deviation(&ev, &lambda), tol),
        Err(e) => NumericCheck::errored("eigenvalues", &e),
    });

    let slice = match tangent_slice_dims(pair, RANK_TOL) {
        Ok(r) => {
            let detail = format!(
                "quotients {:?}, predicted {:?}{}",
                r.blocks.iter().map(|b| b.dim_quotient).collect::<Vec<_>>(),
                r.blocks.iter().map(|b| b.predicted).collect::<Vec<_>>(),
                if r.rank_warning {
                    ", singular value near rank threshold"
                } else {
                    ""
                }
            );
            checks.push(NumericCheck::boolean(
                "slice_dimensions",
                r.matches_prediction(),
                Some(detail),
            ));
            Some(r)
        }
        Err(e) => {
            checks.push(NumericCheck::errored("slice_dimensions", &e));
            None
        }
    };

    checks.push(match symplectic_form_check(pair, RANK_TOL) {
        Ok(dev) => NumericCheck::deviation("symplectic_form", dev, tol),
        Err(Error::EmptyCheck) => NumericCheck::skipped("symplectic_form", "W = {0}"),
        Err(e) => NumericCheck::errored("symplectic_form", &e),
    });

    let isotropy = match isotropy_group_check(pair, RANK_TOL) {
        Ok(r) => {
            let detail = format!("dim found {}, expected {}", r.dim_found, r.dim_expected);
            checks.push(NumericCheck::boolean("isotropy", r.matches(), Some(detail)));
            Some(r)
        }
        Err(e) => {
            checks.push(NumericCheck::errored("isotropy", &e));
            None
        }
    };

    let mut results = Vec::new();
    if samples == 0 {
        checks.push(NumericCheck::skipped("sample_moment", "samples = 0"));
        checks.push(NumericCheck::skipped("sample_spectrum", "samples = 0"));
    } else {
        let mut prng = Prng::new(seed);
        let mut failure = None;
        for _ in 0..samples {
            let mut child = prng.fork();
            let child_seed = child.seed();
            let q = sample_KM_conjugate(&spec, &mut child);
            let moment = moment_projection(&q).map(|m| {
                let scale = 1.0 + mu.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let mut dev: f64 = 0.0;
                for i in 0..mu.len() {
                    for j in 0..mu.len() {
                        let target = if i == j { mu[i] } else { 0.0 };
                        dev = dev.max((m.entry(i, j).re - target).abs().max(m.entry(i, j).im.abs()));
                    }
                }
                dev / scale
            });
            let spectrum = eig_hermitian(&q, EIG_TOL).map(|ev| spectrum_deviation(&ev, &lambda));
            let slice_matches = if sample_slices {
                match tangent_slice_dims_at(pair, &q, RANK_TOL) {
                    Ok(r) => Some(r.matches_prediction()),
                    Err(e) => {
                        failure.get_or_insert_with(|| e.to_string());
                        Some(false)
                    }
                }
            } else {
                None
            };
            match (moment, spectrum) {
                (Ok(m), Ok(s)) => results.push(SampleResult {
                    seed: child_seed,
                    moment_deviation: m,
                    spectrum_deviation: s,
                    slice_matches,
                }),
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert_with(|| e.to_string());
                    results.push(SampleResult {
                        seed: child_seed,
                        moment_deviation: f64::INFINITY,
                        spectrum_deviation: f64::INFINITY,
                        slice_matches,
                    });
                }
            }
        }
        let worst = |f: fn(&SampleResult) -> f64| results.iter().map(f).fold(0.0, f64::max);
        let mut moment = NumericCheck::deviation("sample_moment", worst(|r| r.moment_deviation), MOMENT_TOL);
        let mut spectrum = NumericCheck::deviation("sample_spectrum", worst(|r| r.spectrum_deviation), tol);
        moment.seed = Some(seed);
        spectrum.seed = Some(seed);
        if let Some(f) = &failure {
            moment.detail = Some(f.clone());
        }
        checks.push(moment);
        checks.push(spectrum);
        if sample_slices {
            let ok = results.iter().all(|r| r.slice_matches == Some(true));
            let mut c = NumericCheck::boolean(
                "sample_slices",
                ok,
                Some("extrapolated to K_M-conjugates of the canonical point".into()),
            );
            c.seed = Some(seed);
            checks.push(c);
        }
    }

    VerifyReport {
        checks,
        slice,
        isotropy,
        samples: results,
    }
}

impl VerifyReport {
    fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(s, "[{tag}] {}", c.name);
            if let (Some(d), Some(t)) = (c.deviation, c.tolerance) {
                let _ = write!(s, "  deviation {d:.3e} (tol {t:.1e})");
            }
            if let Some(seed) = c.seed {
                let _ = write!(s, "  seed {seed}");
            }
            if let Some(d) = &c.detail {
                let _ = write!(s, "  {d}");
            }
            s.push('\n');
        }
        s
    }
}

// ---------------------------------------------------------------- faces

#[derive(Debug, Clone, Serialize)]
pub struct FaceEntry {
    pub index: usize,
    pub dimension: usize,
    pub tight_set: Vec<TightFlag>,
    pub shape_signature: Vec<(Shape, usize, usize)>,
    pub representative_mu: Vec<Rational>,
    pub l_group: String,
    pub w_space: String,
    pub structure: MgsStructure,
    pub dimensions: DimReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacesReport {
    pub lambda: Vec<Rational>,
    pub f_vector: Vec<usize>,
    pub faces: Vec<FaceEntry>,
    /// Hasse diagram as `(sub-face, super-face)` indices.
    pub order_relation: Vec<(usize, usize)>,
}

pub fn cmd_faces(lambda: &[Rational]) -> Result<FacesReport> {
    let lattice = enumerate_faces(lambda)?;
    let faces = lattice
        .faces
        .iter()
        .enumerate()
        .map(|(index, f)| {
            let inv = face_invariants(lambda, f)?;
            Ok(FaceEntry {
                index,
                dimension: f.dimension,
                tight_set: f.tight_set.clone(),
                shape_signature: f.shape_signature.clone(),
                representative_mu: f.representative_mu.clone(),
                l_group: inv.mgs.l_display(),
                w_space: inv.mgs.w_display(),
                structure: inv.mgs.structure(),
                dimensions: inv.dims,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FacesReport {
        lambda: lambda.to_vec(),
        f_vector: lattice.f_vector(),
        faces,
        order_relation: lattice.order_relation,
    })
}

impl FacesReport {
    fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "f-vector: ({})", join(&self.f_vector));
        for f in &self.faces {
            let tight: Vec<String> = f.tight_set.iter().map(TightFlag::to_string).collect();
            let _ = writeln!(
                s,
                "#{} dim {}  mu = ({})  tight {{{}}}  L = {}  W = {}",
                f.index,
                f.dimension,
                join(&f.representative_mu),
                tight.join(", "),
                f.l_group,
                f.w_space
            );
        }
        s
    }
}

// ---------------------------------------------------------------- driver

/// What the binary prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

fn render<T: Serialize>(format: Format, env: &Envelope<T>, text: impl FnOnce(&T) -> String) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(env)?;
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = format!("{} {}  {:?}\n", env.tool, env.version, env.config.command).to_lowercase();
            out.push_str(&text(&env.report));
            out.push_str(if env.passed {
                "overall: PASS\n"
            } else {
                "overall: FAIL\n"
            });
            out
        }
    })
}

fn execute(config: &RunConfig) -> Result<(String, bool)> {
    config.validate()?;
    let (lambda, mu) = load_spectra(&config.source)?;
    let resolved = |mu: Option<Vec<Rational>>| ResolvedConfig {
        command: config.command,
        lambda: lambda.clone(),
        mu,
        input: match &config.source {
            Source::File(p) => Some(p.display().to_string()),
            Source::Inline { .. } => None,
        },
        tolerance: config.tolerance,
        rank_tolerance: RANK_TOL,
        seed: config.seed,
        samples: config.samples,
        sample_slices: config.sample_slices,
        format: config.format,
    };
    match config.command {
        Command::Analyze | Command::Verify => {
            let mu = mu.ok_or_else(|| Error::Input("mu is required for this command".into()))?;
            let pair = SpectrumPair::new(lambda.clone(), mu.clone())?;
            if config.command == Command::Analyze {
                let report = cmd_analyze(&pair);
                let env = Envelope {
                    tool: TOOL,
                    version: VERSION,
                    config: resolved(Some(mu)),
                    passed: report.passed(),
                    report,
                };
                Ok((render(config.format, &env, AnalyzeReport::to_text)?, env.passed))
            } else {
                let report = cmd_verify(
                    &pair,
                    config.tolerance,
                    config.seed,
                    config.samples,
                    config.sample_slices,
                );
                let env = Envelope {
                    tool: TOOL,
                    version: VERSION,
                    config: resolved(Some(mu)),
                    passed: report.passed(),
                    report,
                };
                Ok((render(config.format, &env, VerifyReport::to_text)?, env.passed))
            }
        }
        Command::Faces => {
            if let Some(mu) = &mu {
                // μ is not needed, but if present it must still be valid
                SpectrumPair::new(lambda.clone(), mu.clone())?;
            }
            let report = cmd_faces(&lambda)?;
            let env = Envelope {
                tool: TOOL,
                version: VERSION,
                config: resolved(mu),
                passed: true,
                report,
            };
            Ok((render(config.format, &env, FacesReport::to_text)?, true))
        }
    }
}

/// Runs one command. Never panics on bad input; the error message goes to
/// `stderr` and the exit code follows the contract above.
pub fn run(config: &RunConfig) -> Outcome {
    match execute(config) {
        Ok((stdout, passed)) => Outcome {
            stdout,
            stderr: String::new(),
            exit_code: if passed { 0 } else { 2 },
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            exit_code: if e.is_input_error() { 1 } else { 2 },
        },
    }
}
