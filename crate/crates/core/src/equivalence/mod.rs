//! SLOCC and LU equivalence deciders with witness construction.
//!
//! Every checker returns a three-valued [`Verdict`]. `Equivalent` always
//! carries a witness that was re-verified with plain tensor arithmetic;
//! `NotEquivalent` only cites quantities that local operations provably
//! preserve; anything else is `Inconclusive`.

mod align;
mod brute;
mod generate;
mod invariants;
mod mixed;
mod pure;
mod verify;

pub use brute::{brute_force_local_search, BruteBudget, BruteResult};
pub use generate::{generate_equivalent_pair, EquivalentPair};
pub use invariants::{mixed_lu_invariants, pure_necessary_invariants};
pub use mixed::{mixed_lu_check, mixed_slocc_necessary, CoefficientEvidence, MixedSloccOutcome};
pub use pure::{build_witness_svd, pivot_form, pure_lu_check, pure_slocc_check, PivotEvidence, WitnessSearch};
pub use verify::{verify_mixed_witness, verify_witness, WitnessCheck};

use crate::error::{domain, Result};
use crate::linalg::{singular_values, unitarity_error};
use crate::tensor::Matrix;

/// Which local group a witness belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMode {
    /// SLOCC: invertible local operators.
    Invertible,
    /// LU: local unitaries.
    Unitary,
}

/// Per-party operators certifying an equivalence.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalWitness {
    pub matrices: Vec<Matrix>,
    pub mode: WitnessMode,
}

impl LocalWitness {
    pub fn new(matrices: Vec<Matrix>, mode: WitnessMode) -> Result<Self> {
        let w = LocalWitness { matrices, mode };
        w.validate()?;
        Ok(w)
    }

    /// Unitary mode: `max |U U† - I| <= 1e-8`; invertible mode:
    /// smallest singular value above `1e-10`.
    pub fn validate(&self) -> Result<()> {
        if self.matrices.is_empty() {
            return domain("witness without operators");
        }
        for (k, m) in self.matrices.iter().enumerate() {
            if !m.is_square() {
                return domain(format!("witness operator {k} is not square"));
            }
            match self.mode {
                WitnessMode::Unitary => {
                    let err = unitarity_error(m);
                    if err > 1e-8 {
                        return domain(format!("witness operator {k} is not unitary ({err:e})"));
                    }
                }
                WitnessMode::Invertible => {
                    let sv = singular_values(m)?;
                    if sv[sv.len() - 1] <= 1e-10 {
                        return domain(format!("witness operator {k} is singular"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.matrices.iter().map(|m| m.ncols()).collect()
    }
}

/// Invariant named by a [`Certificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    UnfoldingRank,
    UnfoldingSingularValues,
    Spectrum,
    DensityRank,
    CoefficientUnfoldingRank,
}

impl Invariant {
    pub fn name(&self) -> &'static str {
        match self {
            Invariant::UnfoldingRank => "unfolding rank",
            Invariant::UnfoldingSingularValues => "unfolding singular values",
            Invariant::Spectrum => "density spectrum",
            Invariant::DensityRank => "density matrix rank",
            Invariant::CoefficientUnfoldingRank => "coefficient tensor unfolding rank",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InvariantValue {
    Rank(usize),
    Values(Vec<f64>),
}

/// A violated invariant with the value computed for each state.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub invariant: Invariant,
    /// 0-based mode for unfolding invariants.
    pub mode: Option<usize>,
    pub left: InvariantValue,
    pub right: InvariantValue,
}

/// Evidence gathered when no witness was found.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Best `σ_2/σ_1` of the realigned `Q_i` (pure) or `P_{j|ĵ}` (mixed) per mode.
    pub mode_gaps: Vec<f64>,
    /// Smallest relative residual reached by any candidate witness.
    pub best_residual: f64,
    /// `(R, fit of A, fit of B)` of CP models at matched rank; informational only.
    pub cp_fits: Option<(usize, f64, f64)>,
    pub notes: Vec<String>,
}

/// Successful outcome with its verified witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence {
    pub witness: LocalWitness,
    /// `‖(⊗M) X - Y‖ / ‖Y‖` for pure states, `‖W ρ W† - ρ'‖ / ‖ρ'‖` for mixed.
    pub residual: f64,
    /// Pivot-mode construction for pure states (the mode that produced the witness).
    pub pivot: Option<PivotEvidence>,
    /// Rank-one gaps of the realigned conjugating matrix for mixed states.
    pub mode_gaps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Equivalent(Equivalence),
    NotEquivalent(Certificate),
    Inconclusive(Diagnostics),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equivalent(_) => "Equivalent",
            Verdict::NotEquivalent(_) => "NotEquivalent",
            Verdict::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn witness(&self) -> Option<&LocalWitness> {
        match self {
            Verdict::Equivalent(e) => Some(&e.witness),
            _ => None,
        }
    }
}

/// Tolerances and seeding shared by the checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Verification tolerance and relative rank tolerance.
    pub tol: f64,
    /// Absolute tolerance on singular values and spectra.
    pub value_tol: f64,
    /// Relative gap below which singular values or eigenvalues form one cluster.
    pub cluster_tol: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Sweeps per alignment restart.
    pub sweeps: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol: 1e-8,
            value_tol: 1e-8,
            cluster_tol: 1e-6,
            seed: 0,
            restarts: 32,
            sweeps: 4000,
        }
    }
}

impl CheckOptions {
    pub fn with_tol(tol: f64) -> Self {
        CheckOptions { tol, ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !ok(self.tol) || !ok(self.value_tol) || !ok(self.cluster_tol) {
            return domain("tolerances must be positive and finite");
        }
        if self.restarts == 0 || self.sweeps == 0 {
            return domain("need at least one restart and one sweep");
        }
        Ok(())
    }
}
