//! Homogeneous constant-coefficient differential operators
//! `A = Σ_{|α|=k} A_α ∂^α` acting on `ℝ^{dim_v}`-valued polynomials.
//!
//! Matrix-valued operators are flattened row-major, so `(∇u)_{ij} = ∂_j u_i`
//! lives in output component `i * n + j`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polyalg::{MultiIndex, PolyVec};
use crate::scalar::{self, format_complex, serde_rational, ExactField, Field, FromRational};

pub type RationalMatrix = Vec<Vec<BigRational>>;

#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    n: usize,
    order: u32,
    dim_v: usize,
    dim_w: usize,
    terms: BTreeMap<MultiIndex, RationalMatrix>,
}

/// Operators shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    Grad,
    Div,
    SymGrad,
    DevGrad,
    DevSymGrad,
    /// `∇^k` of a vector field.
    GradK(u32),
}

impl Builtin {
    pub fn from_name(name: &str, order: Option<u32>) -> Result<Self> {
        let op = match name {
            "grad" => Builtin::Grad,
            "div" => Builtin::Div,
            "sym_grad" => Builtin::SymGrad,
            "dev_grad" => Builtin::DevGrad,
            "dev_sym_grad" => Builtin::DevSymGrad,
            "grad_k" => Builtin::GradK(order.ok_or_else(|| {
                Error::Operator("grad_k requires an order".into())
            })?),
            other => {
                // also accept the inline form grad_k(3)
                if let Some(k) = other.strip_prefix("grad_k(").and_then(|s| s.strip_suffix(')')) {
                    let k = k
                        .parse()
                        .map_err(|_| Error::Operator(format!("bad order in `{other}`")))?;
                    Builtin::GradK(k)
                } else {
                    return Err(Error::Operator(format!("unknown operator `{other}`")));
                }
            }
        };
        Ok(op)
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Grad => "grad".into(),
            Builtin::Div => "div".into(),
            Builtin::SymGrad => "sym_grad".into(),
            Builtin::DevGrad => "dev_grad".into(),
            Builtin::DevSymGrad => "dev_sym_grad".into(),
            Builtin::GradK(k) => format!("grad_k({k})"),
        }
    }

    pub fn all_first_order() -> [Builtin; 5] {
        [Builtin::Grad, Builtin::Div, Builtin::SymGrad, Builtin::DevGrad, Builtin::DevSymGrad]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Builtin::from_name(s, None)
    }
}

fn delta(a: usize, b: usize) -> BigRational {
    if a == b {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

pub fn builtin_operator(op: Builtin, n: usize) -> Result<DiffOperator> {
    if n == 0 {
        return Err(Error::Operator("dimension must be at least 1".into()));
    }
    let needs_two = matches!(op, Builtin::SymGrad | Builtin::DevGrad | Builtin::DevSymGrad);
    if needs_two && n < 2 {
        return Err(Error::Operator(format!("{op} requires n >= 2, got n = {n}")));
    }
    let inv_n = scalar::ratio(1, n as i64);
    let half = scalar::ratio(1, 2);
    match op {
        Builtin::Div => first_order(n, 1, |_, k, l| delta(k, l)),
        Builtin::Grad => first_order(n, n * n, |row, k, l| {
            let (i, j) = (row / n, row % n);
            delta(i, k) * delta(j, l)
        }),
        Builtin::SymGrad => first_order(n, n * n, |row, k, l| {
            let (i, j) = (row / n, row % n);
            half.clone() * (delta(i, k) * delta(j, l) + delta(j, k) * delta(i, l))
        }),
        Builtin::DevGrad => first_order(n, n * n, |row, k, l| {
            let (i, j) = (row / n, row % n);
            delta(i, k) * delta(j, l) - inv_n.clone() * delta(i, j) * delta(k, l)
        }),
        Builtin::DevSymGrad => first_order(n, n * n, |row, k, l| {
            let (i, j) = (row / n, row % n);
            half.clone() * (delta(i, k) * delta(j, l) + delta(j, k) * delta(i, l))
                - inv_n.clone() * delta(i, j) * delta(k, l)
        }),
        Builtin::GradK(k) => grad_k(n, k),
    }
}

/// First-order operator from `coeff(row, k, l)`, the coefficient of
/// `∂_l u_k` in output row `row`.
fn first_order(
    n: usize,
    dim_w: usize,
    coeff: impl Fn(usize, usize, usize) -> BigRational,
) -> Result<DiffOperator> {
    let terms = (0..n)
        .map(|l| {
            let matrix = (0..dim_w)
                .map(|row| (0..n).map(|k| coeff(row, k, l)).collect())
                .collect();
            (MultiIndex::unit(n, l, 1), matrix)
        })
        .collect();
    custom_operator(terms)
}

fn grad_k(n: usize, k: u32) -> Result<DiffOperator> {
    if k == 0 {
        return Err(Error::Operator("grad_k requires order >= 1".into()));
    }
    let block = n.pow(k);
    let dim_w = n * block;
    let mut terms: BTreeMap<MultiIndex, RationalMatrix> = MultiIndex::of_order(n, k)
        .into_iter()
        .map(|alpha| (alpha, vec![vec![BigRational::zero(); n]; dim_w]))
        .collect();
    for flat in 0..block {
        // base-n digits of `flat` are the derivative directions (i_1, ..., i_k)
        let mut counts = vec![0u32; n];
        let mut rest = flat;
        for _ in 0..k {
            counts[rest % n] += 1;
            rest /= n;
        }
        let matrix = terms.get_mut(&MultiIndex::new(counts)).expect("multi-index of order k");
        for c in 0..n {
            matrix[c * block + flat][c] = BigRational::one();
        }
    }
    custom_operator(terms.into_iter().collect())
}

/// Validate and assemble an operator from `(α, A_α)` pairs. All-zero matrices
/// are dropped.
pub fn custom_operator(spec: Vec<(MultiIndex, RationalMatrix)>) -> Result<DiffOperator> {
    let Some((first_alpha, first_matrix)) = spec.first() else {
        return Err(Error::Operator("operator needs at least one term".into()));
    };
    let n = first_alpha.dim();
    let order = first_alpha.order();
    let dim_w = first_matrix.len();
    let dim_v = first_matrix.first().map_or(0, Vec::len);
    if n == 0 || dim_w == 0 || dim_v == 0 {
        return Err(Error::Operator("empty multi-index or matrix".into()));
    }
    let mut terms = BTreeMap::new();
    for (alpha, matrix) in spec {
        if alpha.dim() != n {
            return Err(Error::Operator(format!(
                "multi-index {alpha} has dimension {}, expected {n}",
                alpha.dim()
            )));
        }
        if alpha.order() != order {
            return Err(Error::Operator(format!(
                "mixed orders: {alpha} has order {}, expected {order}",
                alpha.order()
            )));
        }
        if matrix.len() != dim_w || matrix.iter().any(|r| r.len() != dim_v) {
            return Err(Error::Operator(format!(
                "matrix for {alpha} is not {dim_w}x{dim_v}"
            )));
        }
        if terms.contains_key(&alpha) {
            return Err(Error::Operator(format!("duplicate multi-index {alpha}")));
        }
        if matrix.iter().flatten().all(Zero::is_zero) {
            continue;
        }
        terms.insert(alpha, matrix);
    }
    if terms.is_empty() {
        return Err(Error::Operator("all coefficient matrices are zero".into()));
    }
    Ok(DiffOperator { n, order, dim_v, dim_w, terms })
}

/// First-order operator `(Au)_{ij} = Σ_{k,l} A_{ijkl} ∂_l u_k` from a
/// `n×n×n×n` tensor.
pub fn from_tensor4(tensor: &[Vec<Vec<Vec<BigRational>>>]) -> Result<DiffOperator> {
    let n = tensor.len();
    let well_formed = n > 0
        && tensor.iter().all(|a| {
            a.len() == n && a.iter().all(|b| b.len() == n && b.iter().all(|c| c.len() == n))
        });
    if !well_formed {
        return Err(Error::Operator("tensor4 must be n x n x n x n".into()));
    }
    first_order(n, n * n, |row, k, l| tensor[row / n][row % n][k][l].clone())
}

impl DiffOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, RationalMatrix> {
        &self.terms
    }

    /// `A p = Σ_α A_α ∂^α p`, in the degree `deg p - k` basis.
    pub fn apply<T: FromRational>(&self, p: &PolyVec<T>) -> Result<PolyVec<T>> {
        if p.n() != self.n || p.dim_v() != self.dim_v {
            return Err(Error::Dimension(format!(
                "operator acts on {}-vars {}-component fields, got {} vars {} components",
                self.n,
                self.dim_v,
                p.n(),
                p.dim_v()
            )));
        }
        let out_degree = p.degree().saturating_sub(self.order);
        let mut out = PolyVec::<T>::zero(self.n, out_degree, self.dim_w);
        if p.degree() < self.order {
            return Ok(out);
        }
        let out_len = out.basis().len();
        let mut acc: Vec<T> = out.coeffs().to_vec();
        for (alpha, matrix) in &self.terms {
            let d = p.differentiate(alpha);
            debug_assert_eq!(d.basis().len(), out_len);
            let dc = d.coeffs();
            for (w, row) in matrix.iter().enumerate() {
                for (v, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let a = T::from_rational(a);
                    for i in 0..out_len {
                        let x = &dc[v * out_len + i];
                        if !x.is_zero() {
                            acc[w * out_len + i] = acc[w * out_len + i].clone() + a.clone() * x.clone();
                        }
                    }
                }
            }
        }
        out = PolyVec::from_coeffs(out.basis().clone(), self.dim_w, acc)?;
        Ok(out)
    }

    /// Fourier symbol `A[ξ] = Σ_α ξ^α A_α`.
    pub fn symbol<T: FromRational>(&self, xi: &[T]) -> Result<SymbolMatrix<T>> {
        if xi.len() != self.n {
            return Err(Error::Dimension(format!(
                "symbol needs a {}-vector, got length {}",
                self.n,
                xi.len()
            )));
        }
        let mut matrix = vec![vec![T::zero(); self.dim_v]; self.dim_w];
        for (alpha, a) in &self.terms {
            let weight = alpha
                .entries()
                .iter()
                .zip(xi)
                .fold(T::one(), |acc, (&e, x)| (0..e).fold(acc, |acc, _| acc * x.clone()));
            for (out_row, a_row) in matrix.iter_mut().zip(a) {
                for (entry, coeff) in out_row.iter_mut().zip(a_row) {
                    if !coeff.is_zero() {
                        *entry = entry.clone() + weight.clone() * T::from_rational(coeff);
                    }
                }
            }
        }
        Ok(SymbolMatrix { xi: xi.to_vec(), matrix })
    }
}

pub fn apply_operator(op: &DiffOperator, p: &PolyVec<BigRational>) -> Result<PolyVec<BigRational>> {
    op.apply(p)
}

pub fn symbol_matrix<T: FromRational>(op: &DiffOperator, xi: &[T]) -> Result<SymbolMatrix<T>> {
    op.symbol(xi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix<T> {
    pub xi: Vec<T>,
    pub matrix: Vec<Vec<T>>,
}

impl<T: Field> SymbolMatrix<T> {
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl<T: ExactField> SymbolMatrix<T> {
    pub fn rank(&self) -> usize {
        let cols = self.matrix.first().map_or(0, Vec::len);
        linalg::rank(&self.matrix, cols)
    }
}

pub type ComplexRational = Complex<BigRational>;

/// A nonzero `ξ` and nonzero `v` with `A[ξ] v = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub xi: Vec<ComplexRational>,
    pub v: Vec<ComplexRational>,
}

impl Witness {
    /// Re-check `A[ξ]v = 0` in exact arithmetic.
    pub fn verify(&self, op: &DiffOperator) -> bool {
        let nonzero = |x: &[ComplexRational]| x.iter().any(|c| !c.is_zero());
        if !nonzero(&self.xi) || !nonzero(&self.v) {
            return false;
        }
        match op.symbol(&self.xi) {
            Ok(sym) => sym.apply(&self.v).iter().all(Zero::is_zero),
            Err(_) => false,
        }
    }

    pub fn xi_strings(&self) -> Vec<String> {
        self.xi.iter().map(format_complex).collect()
    }

    pub fn v_strings(&self) -> Vec<String> {
        self.v.iter().map(format_complex).collect()
    }
}

/// One-sided evidence about (ℂ-)ellipticity from exact symbol ranks.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticityReport {
    pub elliptic_evidence: bool,
    pub real_trials: usize,
    pub c_elliptic_evidence: bool,
    pub complex_trials: usize,
    pub witness: Option<Witness>,
}

const RANDOM_BOUND: i64 = 1_000_000;

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let numer = rng.random_range(-RANDOM_BOUND..=RANDOM_BOUND);
    let mut denom = 0;
    while denom == 0 {
        denom = rng.random_range(-RANDOM_BOUND..=RANDOM_BOUND);
    }
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

fn random_nonzero<T: Field>(n: usize, mut draw: impl FnMut() -> T) -> Vec<T> {
    loop {
        let v: Vec<T> = (0..n).map(|_| draw()).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn kernel_witness(op: &DiffOperator, xi: Vec<ComplexRational>) -> Option<Witness> {
    let sym = op.symbol(&xi).ok()?;
    let mut v = linalg::nullspace(&sym.matrix, op.dim_v).into_iter().next()?;
    linalg::normalize_leading(&mut v);
    Some(Witness { xi, v })
}

fn to_complex(v: &[BigRational]) -> Vec<ComplexRational> {
    v.iter().map(ComplexRational::from_rational).collect()
}

/// Random exact rank tests of the symbol at real and complex frequencies plus
/// the fixed family `ξ = e_1 + i e_j`. The first rank deficiency found yields
/// the recorded witness, with the fixed family tried first.
pub fn ellipticity_probe(op: &DiffOperator, trials: usize, seed: u64) -> EllipticityReport {
    let trials = trials.max(1);
    let n = op.n;
    let full = op.dim_v;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness: Option<Witness> = None;
    let mut c_elliptic = true;

    for j in 1..n {
        let mut xi = vec![ComplexRational::zero(); n];
        xi[0] = ComplexRational::one();
        xi[j] = ComplexRational::i();
        let sym = op.symbol(&xi).expect("length n");
        if sym.rank() < full {
            c_elliptic = false;
            if witness.is_none() {
                witness = kernel_witness(op, xi);
            }
        }
    }

    let mut elliptic = true;
    for _ in 0..trials {
        let xi = random_nonzero(n, || random_rational(&mut rng));
        let sym = op.symbol(&xi).expect("length n");
        if sym.rank() < full {
            elliptic = false;
            c_elliptic = false;
            if witness.is_none() {
                witness = kernel_witness(op, to_complex(&xi));
            }
        }
    }

    for _ in 0..trials {
        let xi = random_nonzero(n, || {
            ComplexRational::new(random_rational(&mut rng), random_rational(&mut rng))
        });
        let sym = op.symbol(&xi).expect("length n");
        if sym.rank() < full {
            c_elliptic = false;
            if witness.is_none() {
                witness = kernel_witness(op, xi);
            }
        }
    }

    EllipticityReport {
        elliptic_evidence: elliptic,
        real_trials: trials,
        c_elliptic_evidence: c_elliptic,
        complex_trials: trials + n.saturating_sub(1),
        witness,
    }
}

/// JSON operator description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Terms {
        order: u32,
        #[serde(rename = "dimV")]
        dim_v: usize,
        #[serde(rename = "dimW")]
        dim_w: usize,
        terms: Vec<TermSpec>,
    },
    Tensor4 {
        tensor4: Vec<Vec<Vec<Vec<RationalLit>>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub alpha: Vec<u32>,
    pub matrix: Vec<Vec<RationalLit>>,
}

/// Rational carried as a `"p/q"` string in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalLit(#[serde(with = "serde_rational")] pub BigRational);

impl OperatorSpec {
    pub fn build(&self) -> Result<DiffOperator> {
        match self {
            OperatorSpec::Terms { order, dim_v, dim_w, terms } => {
                let spec = terms
                    .iter()
                    .map(|t| {
                        let m = t
                            .matrix
                            .iter()
                            .map(|r| r.iter().map(|x| x.0.clone()).collect())
                            .collect();
                        (MultiIndex::new(t.alpha.clone()), m)
                    })
                    .collect();
                let op = custom_operator(spec)?;
                if op.order != *order || op.dim_v != *dim_v || op.dim_w != *dim_w {
                    return Err(Error::Operator(format!(
                        "declared order/dimV/dimW ({order}, {dim_v}, {dim_w}) do not match terms ({}, {}, {})",
                        op.order, op.dim_v, op.dim_w
                    )));
                }
                Ok(op)
            }
            OperatorSpec::Tensor4 { tensor4 } => {
                let t: Vec<Vec<Vec<Vec<BigRational>>>> = tensor4
                    .iter()
                    .map(|a| {
                        a.iter()
                            .map(|b| b.iter().map(|c| c.iter().map(|x| x.0.clone()).collect()).collect())
                            .collect()
                    })
                    .collect();
                from_tensor4(&t)
            }
        }
    }

    pub fn from_operator(op: &DiffOperator) -> Self {
        OperatorSpec::Terms {
            order: op.order,
            dim_v: op.dim_v,
            dim_w: op.dim_w,
            terms: op
                .terms
                .iter()
                .map(|(alpha, m)| TermSpec {
                    alpha: alpha.entries().to_vec(),
                    matrix: m
                        .iter()
                        .map(|r| r.iter().cloned().map(RationalLit).collect())
                        .collect(),
                })
                .collect(),
        }
    }
}
