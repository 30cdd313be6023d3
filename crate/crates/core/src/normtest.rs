//! Norm test for trace seminorms on a polynomial kernel.
//!
//! A kernel basis is evaluated under a trace (full, normal or tangential) at
//! boundary samples; the resulting constraint matrix has a trivial nullspace
//! exactly when the sampled seminorm is a norm on the kernel (A1). Otherwise
//! the candidate directions are re-tested on a much denser grid: directions
//! that survive are reported as certificates (A2), and if none survive the
//! test is inconclusive for the chosen samples (A3).

use std::fmt;

use nalgebra::DMatrix;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dot, tangential_project, SampleGrid, StarDomain};
use crate::kernel::KernelBasis;
use crate::polyalg::PolyVec;

pub const DEFAULT_SIGMA_REL: f64 = 1e-10;
pub const DEFAULT_TOL_DENSE: f64 = 1e-8;
pub const DEFAULT_DENSE_FACTOR: usize = 8;

/// Relative pivot floor when reducing certificate spans to echelon form.
const ECHELON_PIVOT_FLOOR: f64 = 1e-9;
/// Certificate coefficients below this fraction of the largest one are
/// rounding noise and are zeroed.
const CHOP: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Full,
    Normal,
    Tangential,
}

impl TraceKind {
    /// Constraint rows contributed by one sample.
    pub fn rows_per_sample(&self, n: usize) -> usize {
        match self {
            TraceKind::Normal => 1,
            TraceKind::Full | TraceKind::Tangential => n,
        }
    }

    fn apply(&self, value: &[f64], nu: &[f64]) -> Result<Vec<f64>> {
        Ok(match self {
            TraceKind::Full => value.to_vec(),
            TraceKind::Normal => vec![dot(value, nu)],
            TraceKind::Tangential => tangential_project(value, nu)?,
        })
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TraceKind::Full => "full",
            TraceKind::Normal => "normal",
            TraceKind::Tangential => "tangential",
        };
        f.write_str(s)
    }
}

/// `q × d` matrix whose column `j` holds the trace of kernel element `j` at
/// every sample (grid order, then component).
#[derive(Clone, Debug)]
pub struct ConstraintMatrix {
    pub entries: DMatrix<f64>,
    pub kind: TraceKind,
    pub samples: usize,
}

/// Kernel basis converted to floats and scaled to unit coefficient norm.
pub fn normalized_basis(basis: &KernelBasis) -> Vec<PolyVec<f64>> {
    basis
        .elements()
        .iter()
        .map(|p| {
            let f = p.to_f64();
            let norm = f.coeff_norm();
            f.scale(&(1.0 / norm))
        })
        .collect()
}

/// Trace blocks of `polys` at boundary samples.
fn boundary_blocks(
    polys: &[PolyVec<f64>],
    dom: &StarDomain,
    kind: TraceKind,
    grid: &SampleGrid,
) -> Result<Vec<Vec<Vec<f64>>>> {
    grid.angles
        .par_iter()
        .map(|theta| {
            let x = dom.boundary_point(theta)?;
            let nu = dom.outward_normal(theta)?;
            polys
                .iter()
                .map(|p| kind.apply(&p.eval_f64(&x)?, &nu))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Stack per-sample blocks (`block[j]` = rows of column `j`) into a matrix.
fn stack(blocks: &[Vec<Vec<f64>>], cols: usize, rows_per_sample: usize) -> DMatrix<f64> {
    let rows = blocks.len() * rows_per_sample;
    DMatrix::from_fn(rows, cols, |r, c| blocks[r / rows_per_sample][c][r % rows_per_sample])
}

fn check_dims(basis: &KernelBasis, n: usize) -> Result<()> {
    if basis.n() != n || basis.operator().dim_v() != n {
        return Err(Error::Dimension(format!(
            "kernel of fields R^{} -> R^{} cannot be traced on a domain in R^{n}",
            basis.n(),
            basis.operator().dim_v()
        )));
    }
    Ok(())
}

pub fn assemble_constraints(
    basis: &KernelBasis,
    dom: &StarDomain,
    kind: TraceKind,
    grid: &SampleGrid,
) -> Result<ConstraintMatrix> {
    check_dims(basis, dom.n())?;
    if grid.is_empty() {
        return Err(Error::Invalid("sample grid is empty".into()));
    }
    assemble_polys(&normalized_basis(basis), dom, kind, grid)
}

fn assemble_polys(
    polys: &[PolyVec<f64>],
    dom: &StarDomain,
    kind: TraceKind,
    grid: &SampleGrid,
) -> Result<ConstraintMatrix> {
    let blocks = boundary_blocks(polys, dom, kind, grid)?;
    let per = kind.rows_per_sample(dom.n());
    Ok(ConstraintMatrix {
        entries: stack(&blocks, polys.len(), per),
        kind,
        samples: grid.len(),
    })
}

/// Singular spectrum and near-nullspace of a constraint matrix.
#[derive(Clone, Debug)]
pub struct NumericNullspace {
    /// Descending; one value per column (rank-deficient shapes padded with 0).
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Orthonormal nullspace directions, each of length `cols`.
    pub basis: Vec<Vec<f64>>,
}

impl NumericNullspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Right singular vectors with `σ_i ≤ σ_rel · max(σ_max, 1)`.
pub fn numeric_nullspace(matrix: &DMatrix<f64>, sigma_rel: f64) -> Result<NumericNullspace> {
    if !(sigma_rel > 0.0 && sigma_rel < 1.0) {
        return Err(Error::Invalid(format!("sigma_rel must lie in (0, 1), got {sigma_rel}")));
    }
    let (rows, cols) = matrix.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::Invalid("constraint matrix is empty".into()));
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("constraint matrix has non-finite entries".into()));
    }
    // pad short matrices so that V is square
    let padded = if rows < cols {
        let mut m = DMatrix::zeros(cols, cols);
        m.view_mut((0, 0), (rows, cols)).copy_from(matrix);
        m
    } else {
        matrix.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let threshold = sigma_rel * sigma_max.max(1.0);
    let basis = order
        .iter()
        .filter(|&&i| svd.singular_values[i] <= threshold)
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect();
    Ok(NumericNullspace { singular_values, threshold, basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictTag {
    /// The sampled seminorm is a norm on the kernel.
    A1,
    /// A nonzero kernel element with vanishing trace was found.
    A2,
    /// Neither could be established with the given samples.
    A3,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for VerdictTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A1" => Ok(VerdictTag::A1),
            "A2" => Ok(VerdictTag::A2),
            "A3" => Ok(VerdictTag::A3),
            other => Err(Error::Parse(format!("unknown verdict `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    /// Unit coefficient norm.
    pub poly: PolyVec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub coarse_sv: Vec<f64>,
    pub dense_sv: Vec<f64>,
    /// Dense-grid residual of every candidate direction, kept or not.
    pub candidate_residuals: Vec<f64>,
    pub max_residual: Option<f64>,
    pub coarse_samples: usize,
    pub dense_samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub certificates: Vec<Certificate>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub coeffs: Vec<f64>,
    pub pretty: String,
    pub residual: f64,
}

/// Wire form of a [`Verdict`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub verdict: VerdictTag,
    pub certificates: Vec<CertificateJson>,
    pub diagnostics: Diagnostics,
}

impl Verdict {
    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            verdict: self.tag,
            certificates: self
                .certificates
                .iter()
                .map(|c| CertificateJson {
                    coeffs: c.poly.coeffs().to_vec(),
                    pretty: c.poly.pretty(),
                    residual: c.residual,
                })
                .collect(),
            diagnostics: self.diagnostics.clone(),
        }
    }

    /// Certificate coefficient vectors.
    pub fn certificate_vectors(&self) -> Vec<Vec<f64>> {
        self.certificates.iter().map(|c| c.poly.coeffs().to_vec()).collect()
    }
}

/// Sup over the grid of the largest trace component of `rho`.
pub fn certificate_residual(
    rho: &PolyVec<f64>,
    dom: &StarDomain,
    kind: TraceKind,
    grid: &SampleGrid,
) -> Result<f64> {
    let blocks = boundary_blocks(std::slice::from_ref(rho), dom, kind, grid)?;
    Ok(blocks
        .iter()
        .flat_map(|b| b[0].iter())
        .fold(0.0, |acc: f64, v| acc.max(v.abs())))
}

/// Combine normalized basis polynomials with weights `z`.
fn combine(polys: &[PolyVec<f64>], z: &[f64]) -> Vec<f64> {
    let len = polys[0].coeffs().len();
    let mut out = vec![0.0; len];
    for (p, w) in polys.iter().zip(z) {
        for (o, c) in out.iter_mut().zip(p.coeffs()) {
            *o += w * c;
        }
    }
    out
}

/// Reduced row echelon form of a spanning set, rows rescaled to unit norm.
/// Gives a basis of the span that does not depend on how the span was found.
/// Residuals are always recomputed from the returned rows.
pub fn canonical_span(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let cols = first.len();
    let mut rows: Vec<Vec<f64>> = vectors.to_vec();
    let scale = rows.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    let floor = ECHELON_PIVOT_FLOOR * scale.max(f64::MIN_POSITIVE);
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows.len() {
            break;
        }
        let (best, best_abs) = (lead..rows.len())
            .map(|r| (r, rows[r][col].abs()))
            .fold((lead, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_abs <= floor {
            continue;
        }
        rows.swap(lead, best);
        let p = rows[lead][col];
        for x in rows[lead].iter_mut() {
            *x /= p;
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != lead {
                let f = row[col];
                if f != 0.0 {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        lead += 1;
    }
    rows.truncate(lead);
    for row in rows.iter_mut() {
        let peak = row.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for x in row.iter_mut() {
            if x.abs() < CHOP * peak {
                *x = 0.0;
            }
        }
        let norm = dot(row, row).sqrt();
        for x in row.iter_mut() {
            *x /= norm;
        }
    }
    rows
}

/// Inputs of a boundary test beyond the kernel and domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub sigma_rel: f64,
    pub tol_dense: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { sigma_rel: DEFAULT_SIGMA_REL, tol_dense: DEFAULT_TOL_DENSE }
    }
}

pub fn classify(
    basis: &KernelBasis,
    dom: &StarDomain,
    kind: TraceKind,
    coarse: &SampleGrid,
    dense: &SampleGrid,
    sigma_rel: f64,
    tol_dense: f64,
) -> Result<Verdict> {
    check_dims(basis, dom.n())?;
    if basis.dim() == 0 {
        return Ok(Verdict {
            tag: VerdictTag::A1,
            certificates: Vec::new(),
            diagnostics: Diagnostics {
                note: Some("trivial kernel".into()),
                ..Diagnostics::default()
            },
        });
    }
    if coarse.is_empty() || dense.is_empty() {
        return Err(Error::Invalid("sample grid is empty".into()));
    }
    let polys = normalized_basis(basis);
    let coarse_c = assemble_polys(&polys, dom, kind, coarse)?;
    let stage1 = numeric_nullspace(&coarse_c.entries, sigma_rel)?;
    let mut diagnostics = Diagnostics {
        coarse_sv: stage1.singular_values.clone(),
        coarse_samples: coarse.len(),
        ..Diagnostics::default()
    };
    if stage1.dim() == 0 {
        return Ok(Verdict { tag: VerdictTag::A1, certificates: Vec::new(), diagnostics });
    }

    // restrict the dense constraints to the coarse nullspace
    let d = polys.len();
    let null = DMatrix::from_fn(d, stage1.dim(), |i, j| stage1.basis[j][i]);
    let dense_c = assemble_polys(&polys, dom, kind, dense)?;
    let restricted = &dense_c.entries * &null;
    let stage2 = numeric_nullspace(&restricted, sigma_rel)?;
    diagnostics.dense_sv = stage2.singular_values.clone();
    diagnostics.dense_samples = dense.len();

    let candidates: Vec<Vec<f64>> = stage2
        .basis
        .iter()
        .map(|w| {
            let z: Vec<f64> = (0..d).map(|i| (0..w.len()).map(|j| null[(i, j)] * w[j]).sum()).collect();
            combine(&polys, &z)
        })
        .collect();
    let template = &polys[0];
    let mut certificates = Vec::new();
    for coeffs in canonical_span(&candidates) {
        let poly = PolyVec::from_coeffs(template.basis().clone(), template.dim_v(), coeffs)?;
        let residual = certificate_residual(&poly, dom, kind, dense)?;
        diagnostics.candidate_residuals.push(residual);
        if residual < tol_dense {
            certificates.push(Certificate { poly, residual });
        }
    }
    diagnostics.max_residual = certificates.iter().map(|c| c.residual).reduce(f64::max);

    if certificates.is_empty() {
        diagnostics.note = Some(format!(
            "coarse nullspace of dimension {} does not survive the dense grid; enlarge the coarse sample set",
            stage1.dim()
        ));
        return Ok(Verdict { tag: VerdictTag::A3, certificates, diagnostics });
    }
    Ok(Verdict { tag: VerdictTag::A2, certificates, diagnostics })
}

/// Full-trace test at explicit points. Points are exact inputs, so there is
/// no refinement stage and the verdict is A1 or A2.
pub fn point_measure_test(
    basis: &KernelBasis,
    points: &[Vec<f64>],
    sigma_rel: f64,
    tol: f64,
) -> Result<Verdict> {
    if points.is_empty() {
        return Err(Error::Invalid("point set is empty".into()));
    }
    let n = basis.operator().dim_v();
    if let Some(bad) = points.iter().find(|p| p.len() != basis.n()) {
        return Err(Error::Dimension(format!(
            "point {bad:?} does not live in R^{}",
            basis.n()
        )));
    }
    if basis.dim() == 0 {
        return Ok(Verdict {
            tag: VerdictTag::A1,
            certificates: Vec::new(),
            diagnostics: Diagnostics { note: Some("trivial kernel".into()), ..Diagnostics::default() },
        });
    }
    let polys = normalized_basis(basis);
    let blocks = points
        .par_iter()
        .map(|x| polys.iter().map(|p| p.eval_f64(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let matrix = stack(&blocks, polys.len(), n);
    let null = numeric_nullspace(&matrix, sigma_rel)?;
    let mut diagnostics = Diagnostics {
        coarse_sv: null.singular_values.clone(),
        coarse_samples: points.len(),
        ..Diagnostics::default()
    };
    let candidates: Vec<Vec<f64>> = null.basis.iter().map(|z| combine(&polys, z)).collect();
    let template = &polys[0];
    let mut certificates = Vec::new();
    for coeffs in canonical_span(&candidates) {
        let poly = PolyVec::from_coeffs(template.basis().clone(), template.dim_v(), coeffs)?;
        let residual = points
            .iter()
            .map(|x| poly.eval_f64(x))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .fold(0.0f64, |a, v| a.max(v.abs()));
        diagnostics.candidate_residuals.push(residual);
        if residual < tol {
            certificates.push(Certificate { poly, residual });
        }
    }
    diagnostics.max_residual = certificates.iter().map(|c| c.residual).reduce(f64::max);
    let tag = if certificates.is_empty() { VerdictTag::A1 } else { VerdictTag::A2 };
    if tag == VerdictTag::A1 && null.dim() > 0 {
        diagnostics.note = Some("near-null directions exceeded the residual tolerance".into());
    }
    Ok(Verdict { tag, certificates, diagnostics })
}

/// Largest principal angle between the spans of `a` and `b` (radians),
/// computed from sines so that tiny angles are resolved. Spans of different
/// dimension are at angle π/2.
pub fn max_principal_angle(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let qa = orthonormalize(a);
    let qb = orthonormalize(b);
    if qa.len() != qb.len() {
        return std::f64::consts::FRAC_PI_2;
    }
    if qa.is_empty() {
        return 0.0;
    }
    let residual_sine = |qa: &[Vec<f64>], qb: &[Vec<f64>]| {
        let cols: Vec<Vec<f64>> = qb
            .iter()
            .map(|v| {
                let mut r = v.clone();
                for u in qa {
                    let c = dot(u, v);
                    for (x, y) in r.iter_mut().zip(u) {
                        *x -= c * y;
                    }
                }
                r
            })
            .collect();
        let m = DMatrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i]);
        m.singular_values().iter().copied().fold(0.0, f64::max)
    };
    residual_sine(&qa, &qb).max(residual_sine(&qb, &qa)).min(1.0).asin()
}

fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for u in &out {
                let c = dot(u, &r);
                for (x, y) in r.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let norm = dot(&r, &r).sqrt();
        let scale = dot(v, v).sqrt();
        if norm > 1e-12 * scale.max(1e-300) && !norm.is_zero() {
            out.push(r.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{builtin_operator, Builtin};
    use crate::geometry::{sample_grid, GridSpec};
    use crate::kernel::kernel_basis;

    fn kb(op: Builtin, n: usize, k: u32) -> KernelBasis {
        kernel_basis(&builtin_operator(op, n).unwrap(), k).unwrap()
    }

    #[test]
    fn nullspace_of_trivial_matrices() {
        let z = DMatrix::<f64>::zeros(4, 3);
        assert_eq!(numeric_nullspace(&z, 1e-10).unwrap().dim(), 3);
        let id = DMatrix::<f64>::identity(3, 3);
        assert_eq!(numeric_nullspace(&id, 1e-10).unwrap().dim(), 0);
        assert!(numeric_nullspace(&DMatrix::<f64>::zeros(0, 3), 1e-10).is_err());
        assert!(numeric_nullspace(&id, 1.5).is_err());
        let wide = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        assert_eq!(numeric_nullspace(&wide, 1e-10).unwrap().dim(), 2);
    }

    #[test]
    fn dev_grad_ball_normal_columns() {
        let basis = kb(Builtin::DevGrad, 2, 1);
        let dom = StarDomain::unit_ball(2);
        let grid = sample_grid(&dom, &GridSpec::full(vec![6])).unwrap();
        let c = assemble_constraints(&basis, &dom, TraceKind::Normal, &grid).unwrap();
        assert_eq!(c.entries.shape(), (6, 3));
        // find the column that is constant: the dilation x
        let polys = normalized_basis(&basis);
        for (j, p) in polys.iter().enumerate() {
            let col: Vec<f64> = c.entries.column(j).iter().copied().collect();
            let at_origin = p.eval_f64(&[0.0, 0.0]).unwrap();
            if at_origin.iter().all(|v| v.abs() < 1e-15) {
                // dilation: constant x.nu = coefficient
                assert!(col.iter().all(|v| (v - col[0]).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn canonical_span_is_basis_independent() {
        let a = vec![vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]];
        let b = vec![vec![1.0, 3.0, 1.0], vec![2.0, 3.0, -1.0]];
        let ca = canonical_span(&a);
        let cb = canonical_span(&b);
        for (x, y) in ca.iter().flatten().zip(cb.iter().flatten()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn principal_angles() {
        let a = vec![vec![1.0, 0.0, 0.0]];
        let b = vec![vec![2.0, 0.0, 0.0]];
        assert!(max_principal_angle(&a, &b) < 1e-15);
        let c = vec![vec![0.0, 1.0, 0.0]];
        assert!((max_principal_angle(&a, &c) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let tilt = vec![vec![1.0, 1e-9, 0.0]];
        assert!((max_principal_angle(&a, &tilt) - 1e-9).abs() < 1e-15);
    }

    #[test]
    fn trivial_kernel_is_a1() {
        let basis = kb(Builtin::SymGrad, 2, 1).with_elements(Vec::new());
        let dom = StarDomain::unit_ball(2);
        let grid = sample_grid(&dom, &GridSpec::full(vec![4])).unwrap();
        let v = classify(&basis, &dom, TraceKind::Normal, &grid, &grid, 1e-10, 1e-8).unwrap();
        assert_eq!(v.tag, VerdictTag::A1);
        assert!(v.diagnostics.coarse_sv.is_empty());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let basis = kb(Builtin::SymGrad, 3, 1);
        let dom = StarDomain::unit_ball(2);
        let grid = sample_grid(&dom, &GridSpec::full(vec![4])).unwrap();
        assert!(assemble_constraints(&basis, &dom, TraceKind::Normal, &grid).is_err());
        assert!(point_measure_test(&basis, &[vec![0.0, 1.0]], 1e-10, 1e-8).is_err());
        assert!(point_measure_test(&basis, &[], 1e-10, 1e-8).is_err());
    }
}
