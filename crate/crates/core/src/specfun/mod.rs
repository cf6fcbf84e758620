//! Stable evaluation of the Hermite and Laguerre basis functions, the scaled
//! modified Bessel function of real order, and the coefficients of its
//! large-argument expansion.

pub mod bessel;
pub mod gamma;
pub mod hermite;
pub mod laguerre;

pub use bessel::{bessel_i_scaled, bracket_coeff, AsymptoticCoefficients};
pub use gamma::{gamma, ln_gamma};
pub use hermite::{hermite_function, hermite_function_all};
pub use laguerre::{laguerre_function, laguerre_function_all};

use crate::error::{contract, domain, Result};
use crate::real::Real;

/// Where a basis lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Line,
    HalfLine,
}

/// One of the two orthonormal bases the library works with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisId<R> {
    HermiteLine,
    LaguerreHalfLine { alpha: R },
}

impl<R: Real> BasisId<R> {
    pub fn hermite() -> Self {
        BasisId::HermiteLine
    }

    pub fn laguerre(alpha: R) -> Result<Self> {
        if !(alpha > R::of(-0.5)) {
            return Err(domain(format!("laguerre type alpha = {alpha} must exceed -1/2")));
        }
        Ok(BasisId::LaguerreHalfLine { alpha })
    }

    pub fn domain(&self) -> Domain {
        match self {
            BasisId::HermiteLine => Domain::Line,
            BasisId::LaguerreHalfLine { .. } => Domain::HalfLine,
        }
    }

    /// Heat-semigroup eigenvalue of the `n`-th basis function:
    /// `n + 1/2` (Hermite) or `2n + alpha + 1` (Laguerre).
    pub fn eigenvalue(&self, n: usize) -> R {
        match self {
            BasisId::HermiteLine => R::of_usize(n) + R::of(0.5),
            BasisId::LaguerreHalfLine { alpha } => {
                R::of(2.0) * R::of_usize(n) + *alpha + R::one()
            }
        }
    }

    pub fn evaluate(&self, n: usize, x: R) -> Result<R> {
        match self {
            BasisId::HermiteLine => Ok(hermite_function(n, x)),
            BasisId::LaguerreHalfLine { alpha } => laguerre_function(n, *alpha, x),
        }
    }

    pub fn evaluate_all(&self, nmax: usize, x: R) -> Result<Vec<R>> {
        let mut out = Vec::with_capacity(nmax + 1);
        self.evaluate_all_into(nmax, x, &mut out)?;
        Ok(out)
    }

    pub(crate) fn evaluate_all_into(&self, nmax: usize, x: R, out: &mut Vec<R>) -> Result<()> {
        match self {
            BasisId::HermiteLine => {
                hermite::hermite_function_all_into(nmax, x, out);
                Ok(())
            }
            BasisId::LaguerreHalfLine { alpha } => {
                if !(x > R::zero()) {
                    return Err(domain(format!("laguerre argument x = {x} must be positive")));
                }
                laguerre::laguerre_all_unchecked(nmax, *alpha, x, out);
                Ok(())
            }
        }
    }
}

/// Cached evaluation of the first `nmax + 1` basis functions on a node set.
/// Row `n` holds the `n`-th basis function at every node.
#[derive(Debug, Clone)]
pub struct BasisFunctionTable<R> {
    pub basis: BasisId<R>,
    pub nmax: usize,
    pub nodes: Vec<R>,
    pub values: Vec<Vec<R>>,
}

impl<R: Real> BasisFunctionTable<R> {
    pub fn new(basis: BasisId<R>, nmax: usize, nodes: &[R]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(contract("basis table needs a nonempty node set"));
        }
        let mut values = vec![Vec::with_capacity(nodes.len()); nmax + 1];
        let mut col = Vec::with_capacity(nmax + 1);
        for &x in nodes {
            basis.evaluate_all_into(nmax, x, &mut col)?;
            for (n, &v) in col.iter().enumerate() {
                values[n].push(v);
            }
        }
        Ok(Self {
            basis,
            nmax,
            nodes: nodes.to_vec(),
            values,
        })
    }

    pub fn row(&self, n: usize) -> &[R] {
        &self.values[n]
    }
}
