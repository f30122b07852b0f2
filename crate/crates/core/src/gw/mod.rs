//! Gromov-Wasserstein distances between metric-measure fields.
//!
//! For fields `X` and `Y` over the same target `B`, a coupling `P` of the two
//! measures is scored by two costs:
//!
//! * the metric distortion `m(x, y, x', y') = |d_X(x, x') - d_Y(y, y')|`,
//!   integrated against `P ⊗ P`;
//! * the value gap `d_B(pi_X(x), pi_Y(y))`, integrated against `P`.
//!
//! For `1 <= p < ∞` the objective is
//! `max{ ½ (∫ m^p d(P⊗P))^{1/p}, (∫ d_B^p dP)^{1/p} }`; for `p = ∞` both
//! integrals become suprema over the support. The distance is the infimum
//! over couplings.
//!
//! Two solvers are provided. The exact oracle searches a certified candidate
//! set: at `p = ∞` every support pattern that some coupling fits into, and
//! for finite `p` the vertices of the transportation polytope plus a grid on
//! the segments between them. Local search runs conditional-gradient descent
//! from random starts and only ever reports an upper bound.

mod costs;
mod exact;
mod glue;
mod local;

pub use costs::FieldPairCosts;
pub use glue::{embedding_bound_check, glue, EmbeddingBound, Glued};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::MMField;
use crate::metric::DEFAULT_TOL;
use crate::rng;
use crate::transport::{Coupling, DEFAULT_SUPPORT_EPS};

/// Order of the objective: finite `p >= 1` or `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else {
            Err(Error::InvalidParameter(format!("p = {p} must be >= 1")))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse p = {other:?}")))?;
                Exponent::finite(p)
            }
        }
    }
}

/// Which solver produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    ExactOracle,
    LocalSearch,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::ExactOracle => "exact",
            SolverKind::LocalSearch => "local",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-oracle" => Ok(SolverKind::ExactOracle),
            "local" | "local-search" => Ok(SolverKind::LocalSearch),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

/// Solver knobs. The defaults match the documented behaviour of the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct GwOptions {
    pub mode: SolverKind,
    /// Grid step on polytope segments for the finite-`p` oracle.
    pub grid_step: f64,
    /// Random restarts for local search.
    pub restarts: usize,
    pub seed: u64,
    pub support_eps: f64,
    /// Largest number of positive-mass cells the `p = ∞` oracle enumerates.
    pub max_exact_cells: usize,
    /// Largest side length for the finite-`p` oracle.
    pub max_exact_side: usize,
}

impl Default for GwOptions {
    fn default() -> Self {
        GwOptions {
            mode: SolverKind::ExactOracle,
            grid_step: 1e-2,
            restarts: 32,
            seed: 0,
            support_eps: DEFAULT_SUPPORT_EPS,
            max_exact_cells: 16,
            max_exact_side: 4,
        }
    }
}

impl GwOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn local_search(restarts: usize, seed: u64) -> Self {
        GwOptions { mode: SolverKind::LocalSearch, restarts, seed, ..Self::default() }
    }
}

/// Outcome of [`gw_distance`].
#[derive(Debug, Clone, PartialEq)]
pub struct GwResult {
    pub value: f64,
    pub coupling: Coupling,
    pub p: Exponent,
    pub solver: SolverKind,
    /// Additive error bound. Zero for the exact `p = ∞` oracle; the grid
    /// Lipschitz bound for the finite-`p` oracle; infinite for local search,
    /// whose value is only an upper bound.
    pub error_bound: f64,
    /// Number of candidates the solver evaluated.
    pub candidates: usize,
}

/// Evaluates the objective of a coupling.
pub fn gw_objective(coupling: &Coupling, costs: &FieldPairCosts, p: Exponent, support_eps: f64) -> f64 {
    match p {
        Exponent::Finite(p) => {
            let plan = coupling.plan().as_slice();
            let (a, b) = costs.power_integrals(plan, p);
            (0.5 * a.max(0.0).powf(1.0 / p)).max(b.max(0.0).powf(1.0 / p))
        }
        Exponent::Infinity => {
            let support: Vec<usize> = coupling
                .plan()
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > support_eps)
                .map(|(k, _)| k)
                .collect();
            costs.support_objective(&support)
        }
    }
}

fn check_pair(fx: &MMField, fy: &MMField) -> Result<()> {
    if fx.target() != fy.target() {
        return Err(Error::TargetMismatch);
    }
    fx.require_valid(DEFAULT_TOL)?;
    fy.require_valid(DEFAULT_TOL)
}

/// Field Gromov-Wasserstein distance `d_GW,p` between two fields.
pub fn gw_distance(fx: &MMField, fy: &MMField, p: Exponent, options: &GwOptions) -> Result<GwResult> {
    check_pair(fx, fy)?;
    let costs = FieldPairCosts::new(fx, fy)?;
    let (mu, nu) = (fx.measure(), fy.measure());
    match options.mode {
        SolverKind::ExactOracle => match p {
            Exponent::Infinity => exact::infinity(&costs, mu, nu, options),
            Exponent::Finite(q) => exact::finite(&costs, mu, nu, q, options),
        },
        SolverKind::LocalSearch => local::search(&costs, mu, nu, p, options),
    }
}

/// Draws `seq_len` i.i.d. pairs from an optimal `p = ∞` coupling and
/// evaluates `max{ ½ max m, max d_B }` over the drawn pairs.
///
/// The value never exceeds `d_GW,∞` and reaches it once every support cell
/// has been drawn.
pub fn gw_uniform_certificate(fx: &MMField, fy: &MMField, seq_len: usize, seed: u64) -> Result<f64> {
    if seq_len == 0 {
        return Err(Error::InvalidParameter("sequence length must be positive".into()));
    }
    let options = GwOptions::exact();
    let result = gw_distance(fx, fy, Exponent::Infinity, &options)?;
    let costs = FieldPairCosts::new(fx, fy)?;
    let weights: Vec<f64> = result
        .coupling
        .plan()
        .as_slice()
        .iter()
        .map(|&v| if v > options.support_eps { v } else { 0.0 })
        .collect();
    let mut drawn: Vec<usize> = (0..seq_len as u64).map(|k| rng::categorical(&weights, seed, 0, k)).collect();
    drawn.sort_unstable();
    drawn.dedup();
    Ok(costs.support_objective(&drawn))
}
