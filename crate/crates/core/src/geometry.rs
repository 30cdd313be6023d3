//! Star-shaped domains `{ x = s·r(θ)·dir(θ) : 0 ≤ s < 1 }` in two and three
//! dimensions, with boundary points, outward normals and sample sets.
//!
//! Angles follow spherical conventions: `θ ∈ [0, 2π)` in 2D and
//! `(θ1, θ2) ∈ [0, π] × [0, 2π)` in 3D, with
//! `dir(θ1, θ2) = (sin θ1 cos θ2, sin θ1 sin θ2, cos θ1)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::serde_real;

const VALIDATION_SAMPLES: usize = 10_000;
const TANGENT_FLOOR: f64 = 1e-14;
/// Default azimuthal phase in 3D, as a fraction of one grid step.
pub const DEFAULT_AZIMUTH_OFFSET: f64 = 0.25;

/// Builtin radial profiles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Radial {
    Constant {
        #[serde(with = "serde_real")]
        c: f64,
    },
    /// `c + a sin(m θ)`
    #[serde(rename = "sine2d")]
    Sine2D {
        #[serde(with = "serde_real")]
        c: f64,
        #[serde(with = "serde_real")]
        a: f64,
        #[serde(with = "serde_real")]
        m: f64,
    },
    /// `c + a sin(m1 θ1) sin(m2 θ2)`
    #[serde(rename = "sine3d")]
    Sine3D {
        #[serde(with = "serde_real")]
        c: f64,
        #[serde(with = "serde_real")]
        a: f64,
        #[serde(with = "serde_real")]
        m1: f64,
        #[serde(with = "serde_real")]
        m2: f64,
    },
}

impl Radial {
    /// `r(θ)` and its partial derivatives.
    fn eval(&self, theta: &[f64]) -> (f64, [f64; 2]) {
        match *self {
            Radial::Constant { c } => (c, [0.0, 0.0]),
            Radial::Sine2D { c, a, m } => {
                let t = theta[0];
                (c + a * (m * t).sin(), [a * m * (m * t).cos(), 0.0])
            }
            Radial::Sine3D { c, a, m1, m2 } => {
                let (t1, t2) = (theta[0], theta[1]);
                let (s1, s2) = ((m1 * t1).sin(), (m2 * t2).sin());
                (
                    c + a * s1 * s2,
                    [a * m1 * (m1 * t1).cos() * s2, a * m2 * s1 * (m2 * t2).cos()],
                )
            }
        }
    }
}

/// Domain spec as read from JSON: `{"n": 2, "radial": {"family": "sine2d", ...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub n: usize,
    pub radial: Radial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarDomain {
    n: usize,
    radial: Radial,
}

fn linspace_open(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let h = (hi - lo) / count as f64;
    (0..count).map(move |i| lo + (i as f64 + 0.5) * h)
}

fn extremes(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

impl StarDomain {
    pub fn new(n: usize, radial: Radial) -> Result<Self> {
        let compatible = matches!(
            (n, radial),
            (2 | 3, Radial::Constant { .. }) | (2, Radial::Sine2D { .. }) | (3, Radial::Sine3D { .. })
        );
        if !compatible {
            return Err(Error::Domain(format!("radial family {radial:?} is not available for n = {n}")));
        }
        let dom = StarDomain { n, radial };
        let min_r = dom.validation_min_radius();
        if !(min_r > 0.0) {
            return Err(Error::Domain(format!(
                "radial function is not positive (minimum {min_r} on the validation grid)"
            )));
        }
        Ok(dom)
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        Self::new(spec.n, spec.radial)
    }

    pub fn spec(&self) -> DomainSpec {
        DomainSpec { n: self.n, radial: self.radial }
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::new(n, Radial::Constant { c: 1.0 }).expect("unit ball is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radial(&self) -> &Radial {
        &self.radial
    }

    /// Minimum of `r` over `VALIDATION_SAMPLES` points per angular coordinate.
    /// The 3D family is a product, so its grid minimum is found from
    /// per-coordinate extremes.
    fn validation_min_radius(&self) -> f64 {
        match self.radial {
            Radial::Constant { c } => c,
            Radial::Sine2D { .. } => linspace_open(0.0, 2.0 * PI, VALIDATION_SAMPLES)
                .map(|t| self.radius(&[t]))
                .fold(f64::INFINITY, f64::min),
            Radial::Sine3D { c, a, m1, m2 } => {
                let (lo1, hi1) = extremes(linspace_open(0.0, PI, VALIDATION_SAMPLES).map(|t| (m1 * t).sin()));
                let (lo2, hi2) =
                    extremes(linspace_open(0.0, 2.0 * PI, VALIDATION_SAMPLES).map(|t| (m2 * t).sin()));
                let products = [lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2];
                let lowest = products
                    .iter()
                    .map(|p| a * p)
                    .fold(f64::INFINITY, f64::min);
                c + lowest
            }
        }
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n - 1 {
            return Err(Error::Dimension(format!(
                "expected {} angles for n = {}, got {}",
                self.n - 1,
                self.n,
                theta.len()
            )));
        }
        Ok(())
    }

    pub fn radius(&self, theta: &[f64]) -> f64 {
        self.radial.eval(theta).0
    }

    /// Unit direction for the given angles.
    pub fn direction(&self, theta: &[f64]) -> Vec<f64> {
        if self.n == 2 {
            vec![theta[0].cos(), theta[0].sin()]
        } else {
            let (t1, t2) = (theta[0], theta[1]);
            vec![t1.sin() * t2.cos(), t1.sin() * t2.sin(), t1.cos()]
        }
    }

    pub fn boundary_point(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_theta(theta)?;
        let r = self.radius(theta);
        Ok(self.direction(theta).into_iter().map(|d| r * d).collect())
    }

    /// Analytic tangent vectors `∂x/∂θ_i`.
    pub fn tangents(&self, theta: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_theta(theta)?;
        let (r, dr) = self.radial.eval(theta);
        if self.n == 2 {
            let (c, s) = (theta[0].cos(), theta[0].sin());
            Ok(vec![vec![dr[0] * c - r * s, dr[0] * s + r * c]])
        } else {
            let (t1, t2) = (theta[0], theta[1]);
            let (c1, s1, c2, s2) = (t1.cos(), t1.sin(), t2.cos(), t2.sin());
            let dir = [s1 * c2, s1 * s2, c1];
            let d_dir1 = [c1 * c2, c1 * s2, -s1];
            let d_dir2 = [-s1 * s2, s1 * c2, 0.0];
            let t_1 = (0..3).map(|i| dr[0] * dir[i] + r * d_dir1[i]).collect();
            let t_2 = (0..3).map(|i| dr[1] * dir[i] + r * d_dir2[i]).collect();
            Ok(vec![t_1, t_2])
        }
    }

    /// Outward unit normal, oriented so that `ν · x(θ) > 0`.
    pub fn outward_normal(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let tangents = self.tangents(theta)?;
        let raw = if self.n == 2 {
            let t = &tangents[0];
            vec![t[1], -t[0]]
        } else {
            cross(&tangents[0], &tangents[1])
        };
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm >= TANGENT_FLOOR) {
            return Err(Error::DegenerateGeometry {
                theta: theta.to_vec(),
                reason: format!("tangent frame norm {norm:e} below {TANGENT_FLOOR:e}"),
            });
        }
        let x = self.boundary_point(theta)?;
        let sign = if dot(&raw, &x) < 0.0 { -1.0 } else { 1.0 };
        Ok(raw.into_iter().map(|v| sign * v / norm).collect())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `v - (v·ν)ν`. `ν` must be a unit vector (within `1e-10`).
pub fn tangential_project(v: &[f64], nu: &[f64]) -> Result<Vec<f64>> {
    if v.len() != nu.len() {
        return Err(Error::Dimension(format!("vector length {} vs normal length {}", v.len(), nu.len())));
    }
    let norm = dot(nu, nu).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Invalid(format!("normal has length {norm}, expected 1")));
    }
    let vn = dot(v, nu);
    Ok(v.iter().zip(nu).map(|(a, b)| a - vn * b).collect())
}

/// Angular sub-interval per coordinate, `[lo, hi]`.
pub type AngleRange = [f64; 2];

/// Grid spec as read from JSON: `{"counts": [6], "range": [[0, 6.2832]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub counts: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Vec<AngleRange>>,
    /// Phase of the full-circle azimuth samples in 3D, in grid steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub azimuth_offset: Option<f64>,
}

impl GridSpec {
    pub fn full(counts: Vec<usize>) -> Self {
        GridSpec { counts, range: None, azimuth_offset: None }
    }

    /// The same range with every count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        GridSpec {
            counts: self.counts.iter().map(|c| c * factor).collect(),
            range: self.range.clone(),
            azimuth_offset: self.azimuth_offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    pub spec: GridSpec,
    pub angles: Vec<Vec<f64>>,
}

impl SampleGrid {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

fn full_range(n: usize, coord: usize) -> AngleRange {
    if n == 3 && coord == 0 {
        [0.0, PI]
    } else {
        [0.0, 2.0 * PI]
    }
}

/// Uniform angle samples.
///
/// In 2D the full circle is sampled at `2πj/N`. In 3D the polar angle uses the
/// half-step offsets `(i + 1/2)π/N` so the poles are never hit, and the azimuth
/// is sampled at `2π(j + φ)/N` with `φ = 1/4` unless overridden. A phase of 0
/// or 1/2 puts every sample on a zero or on a critical point of profiles such
/// as `sin(3θ2)` when `N = 6`, which creates spurious coarse nullspaces.
/// With an explicit sub-range each coordinate uses midpoints of `N` equal
/// cells, which keeps all samples inside the patch.
pub fn sample_grid(dom: &StarDomain, spec: &GridSpec) -> Result<SampleGrid> {
    let dims = dom.n() - 1;
    if spec.counts.len() != dims {
        return Err(Error::Dimension(format!(
            "grid needs {dims} counts for n = {}, got {}",
            dom.n(),
            spec.counts.len()
        )));
    }
    if spec.counts.contains(&0) {
        return Err(Error::Invalid("grid counts must be at least 1".into()));
    }
    if let Some(range) = &spec.range {
        if range.len() != dims {
            return Err(Error::Dimension(format!("grid needs {dims} ranges, got {}", range.len())));
        }
    }
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(dims);
    for coord in 0..dims {
        let count = spec.counts[coord];
        let [full_lo, full_hi] = full_range(dom.n(), coord);
        let axis: Vec<f64> = match spec.range.as_ref().map(|r| r[coord]) {
            Some([lo, hi]) => {
                if !(lo < hi) {
                    return Err(Error::Invalid(format!("empty angular range [{lo}, {hi}]")));
                }
                if lo < full_lo - 1e-12 || hi > full_hi + 1e-3 {
                    return Err(Error::Invalid(format!(
                        "range [{lo}, {hi}] exceeds [{full_lo}, {full_hi}]"
                    )));
                }
                linspace_open(lo, hi, count).collect()
            }
            None if dom.n() == 3 && coord == 0 => linspace_open(0.0, PI, count).collect(),
            None if dom.n() == 3 => {
                let phase = spec.azimuth_offset.unwrap_or(DEFAULT_AZIMUTH_OFFSET);
                (0..count).map(|j| 2.0 * PI * (j as f64 + phase) / count as f64).collect()
            }
            None => (0..count).map(|j| 2.0 * PI * j as f64 / count as f64).collect(),
        };
        axes.push(axis);
    }
    let angles = if dims == 1 {
        axes[0].iter().map(|&t| vec![t]).collect()
    } else {
        axes[0]
            .iter()
            .flat_map(|&t1| axes[1].iter().map(move |&t2| vec![t1, t2]))
            .collect()
    };
    Ok(SampleGrid { spec: spec.clone(), angles })
}

/// Random points `s · r(θ) · dir(θ)` with `s` uniform in `(0, 1)` and `θ`
/// uniform over the angle box.
pub fn interior_points(dom: &StarDomain, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let theta: Vec<f64> = (0..dom.n() - 1)
                .map(|coord| {
                    let [lo, hi] = full_range(dom.n(), coord);
                    rng.random_range(lo..hi)
                })
                .collect();
            let mut s: f64 = rng.random();
            while s == 0.0 {
                s = rng.random();
            }
            let r = dom.radius(&theta);
            dom.direction(&theta).into_iter().map(|d| s * r * d).collect()
        })
        .collect()
}

/// `count` equally spaced points `p0 + t·dir`, `t ∈ [-extent, extent]`.
/// The direction is normalized.
pub fn line_points(p0: &[f64], dir: &[f64], count: usize, extent: f64) -> Result<Vec<Vec<f64>>> {
    if p0.len() != dir.len() {
        return Err(Error::Dimension("line origin and direction differ in length".into()));
    }
    if count < 2 {
        return Err(Error::Invalid("a line needs at least 2 points".into()));
    }
    if !(extent > 0.0) {
        return Err(Error::Invalid("line extent must be positive".into()));
    }
    let norm = dot(dir, dir).sqrt();
    if !(norm > 0.0) {
        return Err(Error::Invalid("line direction is zero".into()));
    }
    Ok((0..count)
        .map(|i| {
            let t = -extent + 2.0 * extent * i as f64 / (count - 1) as f64;
            p0.iter().zip(dir).map(|(p, d)| p + t * d / norm).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn sine2d() -> StarDomain {
        StarDomain::new(2, Radial::Sine2D { c: 2.0, a: 1.0, m: 2.0 }).unwrap()
    }

    #[test]
    fn boundary_points() {
        let ball = StarDomain::unit_ball(2);
        assert!(close(&ball.boundary_point(&[PI / 2.0]).unwrap(), &[0.0, 1.0], 1e-15));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(&sine2d().boundary_point(&[PI / 4.0]).unwrap(), &[3.0 * h, 3.0 * h], 1e-14));
        let ball3 = StarDomain::unit_ball(3);
        assert!(close(&ball3.boundary_point(&[PI / 2.0, 0.0]).unwrap(), &[1.0, 0.0, 0.0], 1e-15));
        assert!(ball3.boundary_point(&[0.1]).is_err());
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(StarDomain::new(2, Radial::Sine2D { c: 1.0, a: 2.0, m: 1.0 }).is_err());
        assert!(StarDomain::new(3, Radial::Sine2D { c: 2.0, a: 1.0, m: 1.0 }).is_err());
        assert!(StarDomain::new(2, Radial::Constant { c: 0.0 }).is_err());
        assert!(StarDomain::new(3, Radial::Sine3D { c: 1.0, a: 1.5, m1: 2.0, m2: 3.0 }).is_err());
        assert!(StarDomain::new(3, Radial::Sine3D { c: 2.0, a: 1.0, m1: 2.0, m2: 3.0 }).is_ok());
    }

    #[test]
    fn ball_normal_is_radial() {
        let ball = StarDomain::unit_ball(2);
        for t in [0.0, 0.3, 2.0, 5.5] {
            let x = ball.boundary_point(&[t]).unwrap();
            assert!(close(&ball.outward_normal(&[t]).unwrap(), &x, 1e-14));
        }
    }

    #[test]
    fn sine_normal_is_orthogonal_to_fd_tangent() {
        let dom = sine2d();
        let t = PI / 8.0;
        let h = 1e-6;
        let xp = dom.boundary_point(&[t + h]).unwrap();
        let xm = dom.boundary_point(&[t - h]).unwrap();
        let fd: Vec<f64> = xp.iter().zip(&xm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let nu = dom.outward_normal(&[t]).unwrap();
        let fd_norm = dot(&fd, &fd).sqrt();
        assert!((dot(&nu, &nu).sqrt() - 1.0).abs() < 1e-12);
        assert!(dot(&nu, &fd).abs() / fd_norm < 1e-6);
        let analytic = &dom.tangents(&[t]).unwrap()[0];
        assert!(dot(&nu, analytic).abs() < 1e-10);
    }

    #[test]
    fn tangential_projection_cases() {
        assert!(close(&tangential_project(&[0.6, 0.8], &[0.6, 0.8]).unwrap(), &[0.0, 0.0], 1e-15));
        assert_eq!(tangential_project(&[0.0, 2.0], &[1.0, 0.0]).unwrap(), vec![0.0, 2.0]);
        assert_eq!(tangential_project(&[1.0, 1.0], &[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        assert!(tangential_project(&[1.0, 1.0], &[2.0, 0.0]).is_err());
    }

    #[test]
    fn grid_shapes() {
        let ball = StarDomain::unit_ball(2);
        let g = sample_grid(&ball, &GridSpec::full(vec![6])).unwrap();
        let expected: Vec<f64> = (0..6).map(|j| 2.0 * PI * j as f64 / 6.0).collect();
        assert_eq!(g.angles.iter().map(|t| t[0]).collect::<Vec<_>>(), expected);

        let ball3 = StarDomain::unit_ball(3);
        let g = sample_grid(&ball3, &GridSpec::full(vec![4, 4])).unwrap();
        assert_eq!(g.len(), 16);
        for t in &g.angles {
            let i = t[0] / (PI / 4.0) - 0.5;
            assert!((i - i.round()).abs() < 1e-12);
        }

        let patch = GridSpec { counts: vec![8], range: Some(vec![[0.0, PI / 8.0]]), azimuth_offset: None };
        let g = sample_grid(&ball, &patch).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.angles.iter().all(|t| t[0] > 0.0 && t[0] < PI / 8.0));

        let empty = GridSpec { counts: vec![8], range: Some(vec![[1.0, 1.0]]), azimuth_offset: None };
        assert!(sample_grid(&ball, &empty).is_err());
        assert!(sample_grid(&ball, &GridSpec::full(vec![0])).is_err());
    }

    #[test]
    fn interior_points_are_inside_and_seeded() {
        let dom = sine2d();
        let pts = interior_points(&dom, 200, 11);
        assert_eq!(pts, interior_points(&dom, 200, 11));
        assert!(interior_points(&dom, 0, 11).is_empty());
        for p in &pts {
            let theta = p[1].atan2(p[0]).rem_euclid(2.0 * PI);
            assert!(dot(p, p).sqrt() < dom.radius(&[theta]));
        }
    }

    #[test]
    fn line_point_samples() {
        let pts = line_points(&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], 5, 1.0).unwrap();
        let ts = [-1.0, -0.5, 0.0, 0.5, 1.0];
        for (p, t) in pts.iter().zip(ts) {
            assert_eq!(p, &vec![0.0, 0.0, t]);
        }
        assert!(line_points(&[0.0; 3], &[0.0; 3], 5, 1.0).is_err());
        assert!(line_points(&[0.0; 3], &[1.0, 0.0, 0.0], 1, 1.0).is_err());
    }
}
