//! Vector-valued polynomials of bounded total degree.
//!
//! A [`PolyVec`] stores one coefficient per (component, monomial) pair over a
//! graded-lexicographic [`MonomialBasis`]. Coefficients are laid out
//! component-major: all monomials of component 0, then component 1, and so on.

use std::collections::HashMap;
use std::fmt::{self, Display};
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, RealScalar};

/// Exponent tuple of a monomial `x^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `e_i` scaled by `power`.
    pub fn unit(n: usize, i: usize, power: u32) -> Self {
        let mut e = vec![0; n];
        e[i] = power;
        MultiIndex(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if componentwise nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All multi-indices of dimension `n` and total degree exactly `degree`,
    /// in graded-lex order (larger leading exponents first).
    pub fn of_order(n: usize, degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; n];
        fill(&mut current, 0, degree, &mut out);
        out
    }
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    let n = current.len();
    if pos + 1 == n {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

impl Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug)]
struct BasisInner {
    n: usize,
    degree: u32,
    list: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

/// All monomials in `n` variables of total degree at most `degree`, in
/// graded-lex order. Cheap to clone.
#[derive(Clone, Debug)]
pub struct MonomialBasis(Arc<BasisInner>);

impl PartialEq for MonomialBasis {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n && self.0.degree == other.0.degree
    }
}

impl Eq for MonomialBasis {}

impl MonomialBasis {
    pub fn new(n: usize, degree: u32) -> Self {
        assert!(n >= 1, "monomial basis needs at least one variable");
        let list: Vec<MultiIndex> = (0..=degree)
            .flat_map(|d| MultiIndex::of_order(n, d))
            .collect();
        let index = list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonomialBasis(Arc::new(BasisInner { n, degree, list, index }))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn len(&self) -> usize {
        self.0.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.list.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.0.list
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.0.index.get(alpha).copied()
    }
}

/// Shorthand for [`MonomialBasis::new`].
pub fn monomial_basis(n: usize, degree: u32) -> MonomialBasis {
    MonomialBasis::new(n, degree)
}

/// A `dim_v`-valued polynomial of degree at most `basis.degree()`.
#[derive(Clone, Debug)]
pub struct PolyVec<T> {
    basis: MonomialBasis,
    dim_v: usize,
    coeffs: Vec<T>,
}

impl<T: Field> PolyVec<T> {
    pub fn zero(n: usize, degree: u32, dim_v: usize) -> Self {
        let basis = MonomialBasis::new(n, degree);
        let coeffs = vec![T::zero(); basis.len() * dim_v];
        PolyVec { basis, dim_v, coeffs }
    }

    pub fn from_coeffs(basis: MonomialBasis, dim_v: usize, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != basis.len() * dim_v {
            return Err(Error::Dimension(format!(
                "expected {} coefficients ({} components x {} monomials), got {}",
                basis.len() * dim_v,
                dim_v,
                basis.len(),
                coeffs.len()
            )));
        }
        Ok(PolyVec { basis, dim_v, coeffs })
    }

    /// The polynomial `coeff * x^alpha * e_component`.
    pub fn monomial(n: usize, degree: u32, dim_v: usize, component: usize, alpha: &MultiIndex, coeff: T) -> Self {
        let mut p = Self::zero(n, degree, dim_v);
        p.set(component, alpha, coeff);
        p
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    fn slot(&self, component: usize, alpha: &MultiIndex) -> Option<usize> {
        self.basis
            .index_of(alpha)
            .map(|i| component * self.basis.len() + i)
    }

    pub fn coeff(&self, component: usize, alpha: &MultiIndex) -> T {
        self.slot(component, alpha)
            .map(|s| self.coeffs[s].clone())
            .unwrap_or_else(T::zero)
    }

    /// Panics if `alpha` exceeds the degree of the basis.
    pub fn set(&mut self, component: usize, alpha: &MultiIndex, value: T) {
        let slot = self
            .slot(component, alpha)
            .unwrap_or_else(|| panic!("monomial {alpha} outside basis of degree {}", self.degree()));
        self.coeffs[slot] = value;
    }

    pub fn add_to(&mut self, component: usize, alpha: &MultiIndex, value: T) {
        if let Some(slot) = self.slot(component, alpha) {
            self.coeffs[slot] = self.coeffs[slot].clone() + value;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-express in the degree-`degree` basis. Fails when that would drop
    /// nonzero terms.
    pub fn embed(&self, degree: u32) -> Result<Self> {
        if degree == self.degree() {
            return Ok(self.clone());
        }
        let mut out = Self::zero(self.n(), degree, self.dim_v);
        for c in 0..self.dim_v {
            for (i, alpha) in self.basis.monomials().iter().enumerate() {
                let value = &self.coeffs[c * self.basis.len() + i];
                if value.is_zero() {
                    continue;
                }
                if alpha.order() > degree {
                    return Err(Error::Dimension(format!(
                        "cannot embed degree-{} term {alpha} into degree {degree}",
                        alpha.order()
                    )));
                }
                out.set(c, alpha, value.clone());
            }
        }
        Ok(out)
    }

    /// Equality as polynomials, after embedding into the larger basis.
    pub fn same_polynomial(&self, other: &Self) -> bool {
        if self.n() != other.n() || self.dim_v != other.dim_v {
            return false;
        }
        let degree = self.degree().max(other.degree());
        match (self.embed(degree), other.embed(degree)) {
            (Ok(a), Ok(b)) => a.coeffs == b.coeffs,
            _ => false,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.dim_v != other.dim_v {
            return Err(Error::Dimension(format!(
                "polynomials in {} vars with {} components vs {} vars with {} components",
                self.n(),
                self.dim_v,
                other.n(),
                other.dim_v
            )));
        }
        Ok(())
    }

    /// `a * self + b * other`, in the larger of the two bases.
    pub fn combine(&self, a: &T, other: &Self, b: &T) -> Result<Self> {
        self.check_compatible(other)?;
        let degree = self.degree().max(other.degree());
        let lhs = self.embed(degree)?;
        let rhs = other.embed(degree)?;
        let coeffs = lhs
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
            .collect();
        Ok(PolyVec { basis: lhs.basis, dim_v: self.dim_v, coeffs })
    }

    pub fn scale(&self, a: &T) -> Self {
        PolyVec {
            basis: self.basis.clone(),
            dim_v: self.dim_v,
            coeffs: self.coeffs.iter().map(|x| a.clone() * x.clone()).collect(),
        }
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> PolyVec<U> {
        PolyVec {
            basis: self.basis.clone(),
            dim_v: self.dim_v,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Exact evaluation at a point with coordinates in the coefficient field.
    pub fn eval(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_point(x.len())?;
        let monomials = monomial_values(&self.basis, x);
        Ok(self.contract(&monomials))
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::Dimension(format!(
                "point has {len} coordinates, polynomial has {} variables",
                self.n()
            )));
        }
        Ok(())
    }

    fn contract(&self, monomials: &[T]) -> Vec<T> {
        let len = self.basis.len();
        (0..self.dim_v)
            .map(|c| {
                self.coeffs[c * len..(c + 1) * len]
                    .iter()
                    .zip(monomials)
                    .fold(T::zero(), |acc, (a, m)| acc + a.clone() * m.clone())
            })
            .collect()
    }

    /// `∂^alpha` of every component, in the degree `deg - |alpha|` basis
    /// (degree zero and identically zero when `|alpha|` exceeds the degree).
    pub fn differentiate(&self, alpha: &MultiIndex) -> Self {
        assert_eq!(alpha.dim(), self.n(), "multi-index dimension mismatch");
        let order = alpha.order();
        if order > self.degree() {
            return Self::zero(self.n(), 0, self.dim_v);
        }
        let mut out = Self::zero(self.n(), self.degree() - order, self.dim_v);
        let len = self.basis.len();
        for c in 0..self.dim_v {
            for (i, beta) in self.basis.monomials().iter().enumerate() {
                let value = &self.coeffs[c * len + i];
                if value.is_zero() {
                    continue;
                }
                let Some(rest) = beta.checked_sub(alpha) else {
                    continue;
                };
                let factor = falling_factorial_product::<T>(beta, alpha);
                out.add_to(c, &rest, factor * value.clone());
            }
        }
        out
    }

    /// One printed term per nonzero coefficient, e.g. `(-3/2)*x1^2*x2 e_1`,
    /// in graded-lex order of monomials and then by component.
    pub fn pretty(&self) -> String
    where
        T: Display,
    {
        let len = self.basis.len();
        let mut terms = Vec::new();
        for (i, alpha) in self.basis.monomials().iter().enumerate() {
            for c in 0..self.dim_v {
                let value = &self.coeffs[c * len + i];
                if value.is_zero() {
                    continue;
                }
                let mut term = format!("({value})");
                for (var, &e) in alpha.entries().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => term.push_str(&format!("*x{}", var + 1)),
                        _ => term.push_str(&format!("*x{}^{e}", var + 1)),
                    }
                }
                term.push_str(&format!(" e_{}", c + 1));
                terms.push(term);
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Inverse of [`PolyVec::pretty`] for a known shape.
    pub fn parse(text: &str, n: usize, degree: u32, dim_v: usize) -> Result<Self>
    where
        T: FromStr,
    {
        let mut p = Self::zero(n, degree, dim_v);
        let text = text.trim();
        if text == "0" {
            return Ok(p);
        }
        for term in text.split(" + ") {
            let term = term.trim();
            let bad = || Error::Parse(format!("malformed term `{term}`"));
            let rest = term.strip_prefix('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            let value: T = rest[..close].parse().map_err(|_| bad())?;
            let rest = &rest[close + 1..];
            let (mono, comp) = rest.rsplit_once(" e_").ok_or_else(bad)?;
            let comp: usize = comp.parse().map_err(|_| bad())?;
            if comp == 0 || comp > dim_v {
                return Err(bad());
            }
            let mut exps = vec![0u32; n];
            for factor in mono.split('*').filter(|s| !s.is_empty()) {
                let factor = factor.strip_prefix('x').ok_or_else(bad)?;
                let (var, e) = match factor.split_once('^') {
                    Some((v, e)) => (v, e.parse::<u32>().map_err(|_| bad())?),
                    None => (factor, 1),
                };
                let var: usize = var.parse().map_err(|_| bad())?;
                if var == 0 || var > n {
                    return Err(bad());
                }
                exps[var - 1] += e;
            }
            let alpha = MultiIndex(exps);
            if alpha.order() > degree {
                return Err(Error::Parse(format!("term `{term}` exceeds degree {degree}")));
            }
            p.add_to(comp - 1, &alpha, value);
        }
        Ok(p)
    }
}

impl<T: RealScalar> PolyVec<T> {
    /// Double-precision evaluation from direct monomial products.
    pub fn eval_f64(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x.len())?;
        let monomials = monomial_values(&self.basis, x);
        let len = self.basis.len();
        Ok((0..self.dim_v)
            .map(|c| {
                self.coeffs[c * len..(c + 1) * len]
                    .iter()
                    .zip(&monomials)
                    .map(|(a, m)| a.to_f64_lossy() * m)
                    .sum()
            })
            .collect())
    }

    pub fn to_f64(&self) -> PolyVec<f64> {
        self.map(|c| c.to_f64_lossy())
    }
}

impl PolyVec<f64> {
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Values of every basis monomial at `x`, built from per-variable power
/// tables.
pub fn monomial_values<T: Field>(basis: &MonomialBasis, x: &[T]) -> Vec<T> {
    let degree = basis.degree() as usize;
    let powers: Vec<Vec<T>> = x
        .iter()
        .map(|xi| {
            let mut row = Vec::with_capacity(degree + 1);
            row.push(T::one());
            for k in 0..degree {
                row.push(row[k].clone() * xi.clone());
            }
            row
        })
        .collect();
    basis
        .monomials()
        .iter()
        .map(|alpha| {
            alpha
                .entries()
                .iter()
                .enumerate()
                .fold(T::one(), |acc, (i, &e)| acc * powers[i][e as usize].clone())
        })
        .collect()
}

/// `∏_i β_i! / (β_i - α_i)!`, the factor produced by `∂^α x^β`.
fn falling_factorial_product<T: Field>(beta: &MultiIndex, alpha: &MultiIndex) -> T {
    let mut acc = T::one();
    for (&b, &a) in beta.entries().iter().zip(alpha.entries()) {
        for k in 0..a {
            acc = acc * from_u32::<T>(b - k);
        }
    }
    acc
}

pub(crate) fn from_u32<T: Field>(k: u32) -> T {
    let mut acc = T::zero();
    for _ in 0..k {
        acc = acc + T::one();
    }
    acc
}
