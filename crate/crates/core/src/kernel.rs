//! Exact polynomial nullspaces `S_{A,K} = ker A ∩ P_K`.
//!
//! `A` maps the coefficient vector of a degree-`K` field linearly onto the
//! coefficients of `Ap`, so the kernel is the rational nullspace of that
//! coefficient matrix. No sampling is involved.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffop::DiffOperator;
use crate::error::Result;
use crate::linalg;
use crate::polyalg::{MonomialBasis, PolyVec};
use crate::scalar::serde_rational;

#[derive(Clone, Debug)]
pub struct KernelBasis {
    op: DiffOperator,
    degree: u32,
    basis: Vec<PolyVec<BigRational>>,
    ambient: usize,
    rank: usize,
}

impl KernelBasis {
    pub fn operator(&self) -> &DiffOperator {
        &self.op
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> &[PolyVec<BigRational>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim_v * binomial(n + K, K)`.
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Rank of the coefficient map.
    pub fn map_rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.op.n()
    }

    /// Same space, different basis. Used to check basis independence of
    /// downstream results.
    pub fn with_elements(&self, basis: Vec<PolyVec<BigRational>>) -> Self {
        KernelBasis { basis, ..self.clone() }
    }

    pub fn export(&self) -> KernelExport {
        KernelExport {
            n: self.n(),
            degree: self.degree,
            dim: self.dim(),
            ambient_dim: self.ambient,
            basis: self
                .basis
                .iter()
                .map(|p| ExportedPoly { coeffs: p.coeffs().to_vec(), pretty: p.pretty() })
                .collect(),
        }
    }
}

/// Matrix of the linear map `coefficients(p) ↦ coefficients(Ap)` for
/// degree-`degree` fields. Row-major, one column per unknown coefficient.
pub fn coefficient_map(op: &DiffOperator, degree: u32) -> Result<Vec<Vec<BigRational>>> {
    let basis = MonomialBasis::new(op.n(), degree);
    let unknowns = op.dim_v() * basis.len();
    let columns: Vec<Vec<BigRational>> = (0..unknowns)
        .map(|j| {
            let mut unit = vec![BigRational::zero(); unknowns];
            unit[j] = BigRational::one();
            let p = PolyVec::from_coeffs(basis.clone(), op.dim_v(), unit)?;
            Ok(op.apply(&p)?.into_coeffs())
        })
        .collect::<Result<_>>()?;
    let rows = columns.first().map_or(0, Vec::len);
    Ok((0..rows)
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect())
}

/// Exact basis of `ker A ∩ P_K`, each element scaled so its first nonzero
/// coefficient is one. For `K < order` this is all of `P_K`.
pub fn kernel_basis(op: &DiffOperator, degree: u32) -> Result<KernelBasis> {
    let basis = MonomialBasis::new(op.n(), degree);
    let ambient = op.dim_v() * basis.len();
    let map = coefficient_map(op, degree)?;
    let echelon = linalg::rref(&map, ambient);
    let elements = echelon
        .nullspace()
        .into_iter()
        .map(|mut v| {
            linalg::normalize_leading(&mut v);
            PolyVec::from_coeffs(basis.clone(), op.dim_v(), v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelBasis {
        op: op.clone(),
        degree,
        basis: elements,
        ambient,
        rank: echelon.rank(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelProfile {
    pub dims: Vec<usize>,
    pub stabilized: bool,
}

/// `dim S_{A,K}` for `K = 0..=max_degree`. Stabilized iff the last two entries
/// agree.
pub fn kernel_dim_profile(op: &DiffOperator, max_degree: u32) -> Result<KernelProfile> {
    let dims = (0..=max_degree)
        .into_par_iter()
        .map(|k| {
            let basis_len = MonomialBasis::new(op.n(), k).len();
            let map = coefficient_map(op, k)?;
            Ok(op.dim_v() * basis_len - linalg::rank(&map, op.dim_v() * basis_len))
        })
        .collect::<Result<Vec<usize>>>()?;
    let stabilized = dims.len() >= 2 && dims[dims.len() - 1] == dims[dims.len() - 2];
    Ok(KernelProfile { dims, stabilized })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedPoly {
    #[serde(with = "serde_rational::vec")]
    pub coeffs: Vec<BigRational>,
    pub pretty: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelExport {
    pub n: usize,
    #[serde(rename = "K")]
    pub degree: u32,
    pub dim: usize,
    pub ambient_dim: usize,
    pub basis: Vec<ExportedPoly>,
}
