//! Exact algorithms for scheduling jobs on parallel machines under
//! incompatibility cliques, minimizing total (weighted) completion time.
//!
//! The job set is partitioned into cliques; two jobs of the same clique may
//! never run on the same machine. Machines are identical or unrelated, with
//! optional per-job and per-clique machine eligibility. All solvers are
//! deterministic and work in exact integer (or rational) arithmetic.

pub mod model;
pub mod netopt;
pub mod oracle;
pub mod identical;
pub mod flow_solvers;
pub mod enum_solvers;
pub mod ipmodels;
pub mod reductions;
pub mod instgen;

pub use model::{Instance, JobSpec, ProcTime, Schedule};

/// Shared failure modes of the exact solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// No feasible schedule exists.
    Infeasible,
    /// A clique holds more jobs than there are machines (identical-machine
    /// pipeline); a special case of infeasibility reported separately.
    CliqueTooLarge { clique: usize, size: usize },
    /// The configured search budget was exhausted before an optimum was proven.
    BudgetExceeded,
    /// The instance does not satisfy the solver's preconditions.
    NotApplicable(String),
}

impl std::fmt::Display for SolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveError::Infeasible => write!(f, "instance admits no feasible schedule"),
            SolveError::CliqueTooLarge { clique, size } => {
                write!(f, "clique {clique} has {size} jobs, more than machines")
            }
            SolveError::BudgetExceeded => write!(f, "search budget exceeded"),
            SolveError::NotApplicable(why) => write!(f, "solver not applicable: {why}"),
        }
    }
}

impl std::error::Error for SolveError {}

/// Search budget for solvers with exponential worst cases. Counts abstract
/// "states" (search nodes, DP extensions, enumerated candidates).
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub states: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { states: 10_000_000 }
    }
}

impl Budget {
    pub fn new(states: u64) -> Self {
        Budget { states }
    }
}

/// Mutable state counter checked against a [`Budget`].
#[derive(Debug, Clone)]
pub struct BudgetMeter {
    limit: u64,
    used: u64,
}

impl BudgetMeter {
    pub fn new(budget: Budget) -> Self {
        BudgetMeter { limit: budget.states, used: 0 }
    }

    /// Consume `n` states; false once the limit is crossed.
    pub fn spend(&mut self, n: u64) -> bool {
        self.used = self.used.saturating_add(n);
        self.used <= self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
