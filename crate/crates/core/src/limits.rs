//! Resource guards and the cooperative progress hook shared by the
//! long-running operations (inversion, reduction chains, moment sums).

use std::ops::ControlFlow;

/// Configurable resource limits. Exceeding any of them is an error, never a
/// silent truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest inverse-degree cutoff `d^(n-1)` that `polynomial_inverse` accepts.
    pub max_inverse_degree: u64,
    /// Largest number of stored terms across all components of an iterate.
    pub max_terms: usize,
    /// Degree cutoff for the parametrized partial inverse `R^{-1}(0, z1)`.
    pub partial_cutoff: u32,
    /// Largest dimension a reduction chain may reach.
    pub max_vars: usize,
    /// Largest number of Gaussian moment evaluations per series coefficient.
    pub max_moments: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_inverse_degree: 1024,
            max_terms: 2_000_000,
            partial_cutoff: 64,
            max_vars: 2000,
            max_moments: 5_000_000,
        }
    }
}

/// Snapshot handed to a [`Progress`] hook after each completed degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub degree: u32,
    pub terms: usize,
}

/// Cancellation and progress reporting for iterative computations.
///
/// Returning `ControlFlow::Break(())` aborts the computation with
/// [`crate::Error::Cancelled`].
pub trait Progress: Sync {
    fn step(&self, step: Step) -> ControlFlow<()>;
}

/// Hook that never cancels.
#[derive(Debug, Clone, Copy, Default)]
pub struct Silent;

impl Progress for Silent {
    fn step(&self, _step: Step) -> ControlFlow<()> {
        ControlFlow::Continue(())
    }
}

impl<F> Progress for F
where
    F: Fn(Step) -> ControlFlow<()> + Sync,
{
    fn step(&self, step: Step) -> ControlFlow<()> {
        self(step)
    }
}
