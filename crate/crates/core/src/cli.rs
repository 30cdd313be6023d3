//! Config-driven runs: operator build, ellipticity probe, kernel basis and
//! one trace test, reported as JSON with a reproducibility digest.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diffop::{builtin_operator, ellipticity_probe, Builtin, DiffOperator, EllipticityReport, OperatorSpec};
use crate::error::Error;
use crate::geometry::{interior_points, line_points, sample_grid, DomainSpec, GridSpec, SampleGrid, StarDomain};
use crate::kernel::{kernel_basis, KernelExport};
use crate::normtest::{
    classify, point_measure_test, Verdict, VerdictJson, VerdictTag, TraceKind, DEFAULT_DENSE_FACTOR,
    DEFAULT_SIGMA_REL, DEFAULT_TOL_DENSE,
};
use crate::scalar::serde_real;

pub const DEFAULT_PROBE_TRIALS: usize = 32;

/// Failure of a run, carrying its process exit status.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Unreadable or invalid configuration.
    #[error("config error: {0}")]
    Schema(String),
    /// Boundary parametrization broke down at a sample.
    #[error("{0}")]
    Geometry(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Schema(_) | RunError::Io(_) => 2,
            RunError::Geometry(_) => 3,
        }
    }

    /// Attribute a library error to a config field.
    fn field(field: &str, err: Error) -> Self {
        match err {
            Error::DegenerateGeometry { .. } => RunError::Geometry(err.to_string()),
            other => RunError::Schema(format!("{field}: {other}")),
        }
    }
}

fn schema(field: &str, msg: impl fmt::Display) -> RunError {
    RunError::Schema(format!("{field}: {msg}"))
}

/// Operator selection: a builtin by name or a custom JSON operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorConfig {
    Builtin {
        builtin: String,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<u32>,
    },
    Custom {
        custom: OperatorSpec,
    },
}

impl OperatorConfig {
    pub fn builtin(op: Builtin, n: usize) -> Self {
        let order = match op {
            Builtin::GradK(k) => Some(k),
            _ => None,
        };
        let name = match op {
            Builtin::GradK(_) => "grad_k".to_string(),
            other => other.name(),
        };
        OperatorConfig::Builtin { builtin: name, n, order }
    }

    pub fn build(&self) -> Result<DiffOperator, RunError> {
        let op = match self {
            OperatorConfig::Builtin { builtin, n, order } => {
                Builtin::from_name(builtin, *order).and_then(|b| builtin_operator(b, *n))
            }
            OperatorConfig::Custom { custom } => custom.build(),
        };
        op.map_err(|e| RunError::field("operator", e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Boundary,
    Points,
}

/// Real number read from a JSON number or a rational string.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Real(#[serde(with = "serde_real")] pub f64);

fn reals(v: &[Real]) -> Vec<f64> {
    v.iter().map(|r| r.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteriorSpec {
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub p0: Vec<Real>,
    pub dir: Vec<Real>,
    pub count: usize,
    pub extent: Real,
}

/// Point set of a point-measure test. All parts are concatenated.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior: Option<InteriorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<LineSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub explicit: Vec<Vec<Real>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_sigma_rel")]
    pub sigma_rel: f64,
    /// Residual bound for certificates, on the dense grid or at the points.
    #[serde(default = "default_tol_dense")]
    pub tol_dense: f64,
}

fn default_sigma_rel() -> f64 {
    DEFAULT_SIGMA_REL
}

fn default_tol_dense() -> f64 {
    DEFAULT_TOL_DENSE
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { sigma_rel: DEFAULT_SIGMA_REL, tol_dense: DEFAULT_TOL_DENSE }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plots: Option<PathBuf>,
}

impl OutputConfig {
    fn is_empty(&self) -> bool {
        self.report.is_none() && self.plots.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub operator: OperatorConfig,
    #[serde(rename = "K")]
    pub degree: u32,
    /// Accept `K` below the operator order.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_low_degree: bool,
    /// Absent means kernel and probe only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<TestKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse: Option<GridSpec>,
    /// Defaults to the coarse grid refined by a factor of 8.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<PointSetSpec>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_probe_trials")]
    pub probe_trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<VerdictTag>,
    #[serde(default, skip_serializing_if = "OutputConfig::is_empty")]
    pub output: OutputConfig,
}

fn default_probe_trials() -> usize {
    DEFAULT_PROBE_TRIALS
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = fs::read_to_string(path)
            .map_err(|e| RunError::Schema(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            RunError::Schema(msg) => RunError::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks the cross-field rules that serde cannot express.
    pub fn validate(&self, op: &DiffOperator) -> Result<(), RunError> {
        if self.degree < op.order() && !self.allow_low_degree {
            return Err(schema(
                "K",
                format!(
                    "degree {} is below the operator order {}; set allow_low_degree to accept",
                    self.degree,
                    op.order()
                ),
            ));
        }
        if self.probe_trials == 0 {
            return Err(schema("probe_trials", "must be positive"));
        }
        let tol = &self.tolerances;
        if !(tol.sigma_rel > 0.0 && tol.sigma_rel < 1.0) {
            return Err(schema("tolerances.sigma_rel", "must lie in (0, 1)"));
        }
        if !(tol.tol_dense > 0.0) {
            return Err(schema("tolerances.tol_dense", "must be positive"));
        }
        if let Some(dom) = &self.domain {
            if dom.n != op.n() {
                return Err(schema("domain.n", format!("{} does not match operator dimension {}", dom.n, op.n())));
            }
        }
        match self.test {
            None => {
                for (field, set) in [
                    ("trace", self.trace.is_some()),
                    ("coarse", self.coarse.is_some()),
                    ("dense", self.dense.is_some()),
                    ("points", self.points.is_some()),
                    ("expected", self.expected.is_some()),
                ] {
                    if set {
                        return Err(schema(field, "given but no test is selected"));
                    }
                }
            }
            Some(TestKind::Boundary) => {
                if self.domain.is_none() {
                    return Err(schema("domain", "required for a boundary test"));
                }
                if self.trace.is_none() {
                    return Err(schema("trace", "required for a boundary test"));
                }
                if self.coarse.is_none() {
                    return Err(schema("coarse", "required for a boundary test"));
                }
                if self.points.is_some() {
                    return Err(schema("points", "not allowed with a boundary test"));
                }
            }
            Some(TestKind::Points) => {
                let Some(points) = &self.points else {
                    return Err(schema("points", "required for a points test"));
                };
                for (field, set) in [
                    ("trace", self.trace.is_some()),
                    ("coarse", self.coarse.is_some()),
                    ("dense", self.dense.is_some()),
                ] {
                    if set {
                        return Err(schema(field, "not allowed with a points test"));
                    }
                }
                if points.interior.is_some() && self.domain.is_none() {
                    return Err(schema("domain", "required for interior points"));
                }
            }
        }
        Ok(())
    }

    fn point_set(&self, n: usize) -> Result<Vec<Vec<f64>>, RunError> {
        let spec = self.points.clone().unwrap_or_default();
        let mut pts = Vec::new();
        if let Some(interior) = &spec.interior {
            let dom = self.star_domain()?.expect("validated");
            pts.extend(interior_points(&dom, interior.count, self.seed));
        }
        for (i, line) in spec.lines.iter().enumerate() {
            let field = format!("points.lines[{i}]");
            if line.p0.len() != n {
                return Err(schema(&field, format!("p0 must have {n} entries")));
            }
            let p = line_points(&reals(&line.p0), &reals(&line.dir), line.count, line.extent.0)
                .map_err(|e| RunError::field(&field, e))?;
            pts.extend(p);
        }
        for (i, p) in spec.explicit.iter().enumerate() {
            if p.len() != n {
                return Err(schema(&format!("points.explicit[{i}]"), format!("must have {n} entries")));
            }
            pts.push(reals(p));
        }
        if pts.is_empty() {
            return Err(schema("points", "the point set is empty"));
        }
        Ok(pts)
    }

    fn star_domain(&self) -> Result<Option<StarDomain>, RunError> {
        self.domain
            .as_ref()
            .map(|d| StarDomain::from_spec(d).map_err(|e| RunError::field("domain", e)))
            .transpose()
    }
}

/// Ellipticity record with exact values as strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticityRecord {
    pub elliptic_evidence: bool,
    pub real_trials: usize,
    pub c_elliptic_evidence: bool,
    pub complex_trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub xi: Vec<String>,
    pub v: Vec<String>,
}

impl From<&EllipticityReport> for EllipticityRecord {
    fn from(r: &EllipticityReport) -> Self {
        EllipticityRecord {
            elliptic_evidence: r.elliptic_evidence,
            real_trials: r.real_trials,
            c_elliptic_evidence: r.c_elliptic_evidence,
            complex_trials: r.complex_trials,
            witness: r.witness.as_ref().map(|w| WitnessRecord { xi: w.xi_strings(), v: w.v_strings() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSummary {
    pub n: usize,
    pub order: u32,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
}

/// Wall-clock milliseconds per stage. Excluded from the digest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub build_ms: f64,
    pub probe_ms: f64,
    pub kernel_ms: f64,
    pub test_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotRecord {
    pub dir: PathBuf,
    pub files: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub operator: OperatorSummary,
    pub kernel: KernelExport,
    pub ellipticity: EllipticityRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plots: Option<PlotRecord>,
    pub timings: Timings,
    /// SHA-256 of the report with timings and digest cleared.
    pub digest: String,
}

impl RunReport {
    pub fn compute_digest(&self) -> String {
        let mut stripped = self.clone();
        stripped.timings = Timings::default();
        stripped.digest.clear();
        let bytes = serde_json::to_vec(&stripped).expect("report serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn seal(&mut self) {
        self.digest = self.compute_digest();
    }

    pub fn tag(&self) -> Option<VerdictTag> {
        self.verdict.as_ref().map(|v| v.verdict)
    }

    /// False iff an expected verdict is set and differs from the result.
    pub fn meets_expectation(&self) -> bool {
        match self.config.expected {
            Some(want) => self.tag() == Some(want),
            None => true,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.meets_expectation() {
            0
        } else {
            1
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.config.name {
            out.push_str(&format!("run: {name}\n"));
        }
        let op = &self.operator;
        out.push_str(&format!(
            "operator: n={} order={} {}->{}\n",
            op.n, op.order, op.dim_v, op.dim_w
        ));
        out.push_str(&format!(
            "kernel: K={} dim={} (ambient {})\n",
            self.kernel.degree, self.kernel.dim, self.kernel.ambient_dim
        ));
        let e = &self.ellipticity;
        out.push_str(&format!(
            "ellipticity: elliptic={} c-elliptic={}",
            e.elliptic_evidence, e.c_elliptic_evidence
        ));
        if let Some(w) = &e.witness {
            out.push_str(&format!(" witness xi=({}) v=({})", w.xi.join(", "), w.v.join(", ")));
        }
        out.push('\n');
        if let Some(v) = &self.verdict {
            out.push_str(&format!("verdict: {}\n", v.verdict));
            for c in &v.certificates {
                out.push_str(&format!("  certificate (residual {:.3e}): {}\n", c.residual, c.pretty));
            }
            if let Some(note) = &v.diagnostics.note {
                out.push_str(&format!("  note: {note}\n"));
            }
        }
        if let Some(want) = self.config.expected {
            let status = if self.meets_expectation() { "ok" } else { "MISMATCH" };
            out.push_str(&format!("expected: {want} ({status})\n"));
        }
        out.push_str(&format!("digest: {}\n", self.digest));
        out
    }
}

/// Test inputs kept for plot emission.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
enum TestContext {
    Boundary { dom: StarDomain, kind: TraceKind, coarse: SampleGrid, dense: SampleGrid, verdict: Verdict },
    Points { points: Vec<Vec<f64>>, verdict: Verdict },
}

/// A finished run: the report plus what is needed to emit plot data.
#[derive(Clone, Debug)]
pub struct Run {
    pub report: RunReport,
    context: Option<TestContext>,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Execute a parsed config.
pub fn execute(config: RunConfig) -> Result<Run, RunError> {
    let mut timings = Timings::default();

    let t = Instant::now();
    let op = config.operator.build()?;
    config.validate(&op)?;
    let dom = config.star_domain()?;
    timings.build_ms = ms(t);

    let t = Instant::now();
    let probe = ellipticity_probe(&op, config.probe_trials, config.seed);
    timings.probe_ms = ms(t);

    let t = Instant::now();
    let kernel = kernel_basis(&op, config.degree).map_err(|e| RunError::field("operator", e))?;
    timings.kernel_ms = ms(t);

    let t = Instant::now();
    let tol = config.tolerances;
    let context = match config.test {
        None => None,
        Some(TestKind::Boundary) => {
            let dom = dom.expect("validated");
            let kind = config.trace.expect("validated");
            let coarse_spec = config.coarse.clone().expect("validated");
            let dense_spec = config.dense.clone().unwrap_or_else(|| coarse_spec.refined(DEFAULT_DENSE_FACTOR));
            let coarse = sample_grid(&dom, &coarse_spec).map_err(|e| RunError::field("coarse", e))?;
            let dense = sample_grid(&dom, &dense_spec).map_err(|e| RunError::field("dense", e))?;
            let verdict = classify(&kernel, &dom, kind, &coarse, &dense, tol.sigma_rel, tol.tol_dense)
                .map_err(|e| RunError::field("domain", e))?;
            Some(TestContext::Boundary { dom, kind, coarse, dense, verdict })
        }
        Some(TestKind::Points) => {
            let points = config.point_set(op.n())?;
            let verdict = point_measure_test(&kernel, &points, tol.sigma_rel, tol.tol_dense)
                .map_err(|e| RunError::field("points", e))?;
            Some(TestContext::Points { points, verdict })
        }
    };
    timings.test_ms = ms(t);

    let verdict = context.as_ref().map(|c| match c {
        TestContext::Boundary { verdict, .. } | TestContext::Points { verdict, .. } => verdict.to_json(),
    });
    let mut report = RunReport {
        operator: OperatorSummary { n: op.n(), order: op.order(), dim_v: op.dim_v(), dim_w: op.dim_w() },
        kernel: kernel.export(),
        ellipticity: EllipticityRecord::from(&probe),
        verdict,
        plots: None,
        timings,
        digest: String::new(),
        config,
    };
    report.seal();
    Ok(Run { report, context })
}

/// Load, execute and (if configured) write the report and plot data.
pub fn run_config(path: &Path) -> Result<Run, RunError> {
    let config = RunConfig::load(path)?;
    let plots = config.output.plots.clone();
    let mut run = execute(config)?;
    if let Some(dir) = plots {
        run.emit_plot_data(&dir)?;
    }
    if let Some(out) = run.report.config.output.report.clone() {
        write_file(&out, run.report.to_json_pretty().as_bytes())?;
    }
    Ok(run)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

/// `{:.16e}` prints 17 significant digits, enough to round-trip an f64.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_table(header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_float).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn numbered(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

impl Run {
    /// Write CSV plot data into `dir` and record it in the report.
    ///
    /// Boundary tests give `boundary.csv` (coarse samples with point and
    /// normal) and `residual.csv` (dense samples, one trace residual column
    /// per certificate). Point tests give `points.csv` with one residual
    /// column per certificate. Without certificates no residual table is
    /// written.
    pub fn emit_plot_data(&mut self, dir: &Path) -> Result<PlotRecord, RunError> {
        let Some(context) = &self.context else {
            return Err(RunError::Schema("plots: no test was run, nothing to plot".into()));
        };
        fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
        let geometry = |e: Error| RunError::field("domain", e);
        let mut files = Vec::new();
        let mut note = None;
        match context {
            TestContext::Boundary { dom, kind, coarse, dense, verdict } => {
                let n = dom.n();
                let mut header = numbered("theta", n - 1);
                header.extend(numbered("x", n));
                header.extend(numbered("nu", n));
                let rows = coarse
                    .angles
                    .iter()
                    .map(|theta| {
                        let mut row = theta.clone();
                        row.extend(dom.boundary_point(theta)?);
                        row.extend(dom.outward_normal(theta)?);
                        Ok(row)
                    })
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(geometry)?;
                write_file(&dir.join("boundary.csv"), csv_table(&header, rows.into_iter()).as_bytes())?;
                files.push("boundary.csv".to_string());

                if verdict.certificates.is_empty() {
                    note = Some(format!("verdict {}: no certificates, residual.csv not written", verdict.tag));
                } else {
                    let mut header = numbered("theta", n - 1);
                    header.extend(numbered("residual", verdict.certificates.len()));
                    let rows = dense
                        .angles
                        .iter()
                        .map(|theta| {
                            let x = dom.boundary_point(theta)?;
                            let nu = dom.outward_normal(theta)?;
                            let mut row = theta.clone();
                            for c in &verdict.certificates {
                                let value = c.poly.eval_f64(&x)?;
                                let traced = match kind {
                                    TraceKind::Full => value,
                                    TraceKind::Normal => vec![crate::geometry::dot(&value, &nu)],
                                    TraceKind::Tangential => crate::geometry::tangential_project(&value, &nu)?,
                                };
                                row.push(traced.iter().fold(0.0f64, |a, v| a.max(v.abs())));
                            }
                            Ok(row)
                        })
                        .collect::<crate::Result<Vec<_>>>()
                        .map_err(geometry)?;
                    write_file(&dir.join("residual.csv"), csv_table(&header, rows.into_iter()).as_bytes())?;
                    files.push("residual.csv".to_string());
                }
            }
            TestContext::Points { points, verdict } => {
                let n = points[0].len();
                let mut header = numbered("x", n);
                header.extend(numbered("residual", verdict.certificates.len()));
                let rows = points
                    .iter()
                    .map(|x| {
                        let mut row = x.clone();
                        for c in &verdict.certificates {
                            let value = c.poly.eval_f64(x)?;
                            row.push(value.iter().fold(0.0f64, |a, v| a.max(v.abs())));
                        }
                        Ok(row)
                    })
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(|e| RunError::field("points", e))?;
                write_file(&dir.join("points.csv"), csv_table(&header, rows.into_iter()).as_bytes())?;
                files.push("points.csv".to_string());
                if verdict.certificates.is_empty() {
                    note = Some(format!("verdict {}: no certificates, residual columns omitted", verdict.tag));
                }
            }
        }
        let record = PlotRecord { dir: dir.to_path_buf(), files, note };
        self.report.plots = Some(record.clone());
        self.report.seal();
        Ok(record)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym_grad_ball() -> RunConfig {
        RunConfig::from_json(
            r#"{
                "operator": {"builtin": "sym_grad", "n": 2},
                "K": 1,
                "test": "boundary",
                "domain": {"n": 2, "radial": {"family": "constant", "c": 1}},
                "trace": "normal",
                "coarse": {"counts": [6]},
                "dense": {"counts": [48]}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn boundary_run_reports_verdict() {
        let run = execute(sym_grad_ball()).unwrap();
        assert_eq!(run.report.tag(), Some(VerdictTag::A2));
        assert_eq!(run.report.exit_code(), 0);
        assert_eq!(run.report.digest, run.report.compute_digest());
    }

    #[test]
    fn expectation_mismatch_exits_one() {
        let mut cfg = sym_grad_ball();
        cfg.expected = Some(VerdictTag::A1);
        assert_eq!(execute(cfg).unwrap().report.exit_code(), 1);
    }

    #[test]
    fn missing_domain_names_the_field() {
        let mut cfg = sym_grad_ball();
        cfg.domain = None;
        let err = execute(cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("domain"), "{err}");
    }

    #[test]
    fn low_degree_needs_flag() {
        let mut cfg = sym_grad_ball();
        cfg.degree = 0;
        let err = execute(cfg.clone()).unwrap_err();
        assert!(err.to_string().contains("K:"), "{err}");
        cfg.allow_low_degree = true;
        assert!(execute(cfg).is_ok());
    }

    #[test]
    fn unknown_field_is_a_schema_error() {
        let err = RunConfig::from_json(r#"{"operator": {"builtin": "grad", "n": 2}, "K": 1, "bogus": 1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn report_round_trips() {
        let run = execute(sym_grad_ball()).unwrap();
        let text = run.report.to_json_pretty();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, run.report);
        assert_eq!(back.to_json_pretty(), text);
    }
}
