//! The two dimensional theory: Turaev algebra data, its orbifold, and closed
//! surface partition functions computed by three routes.

mod frobenius;
mod partition;
mod turaev;

use serde::Serialize;

pub use frobenius::{check_unoriented_frobenius, orbifold, UnorientedFrobeniusData};
pub use partition::{
    consistency_report, kr_rank, kr_rank_from, one_loop, partition_direct, partition_tqft, partition_verlinde,
    signed_square_root_count, ConsistencyReport, ReportOptions, RouteRecord, SummaryRecord,
};
pub use turaev::{check_turaev_axioms, turaev_from_cocycle, turaev_from_tau, Monomial, ScaledPhase, TuraevAlgebraData};

/// Outcome of one named condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub(crate) fn record(&mut self, name: &'static str, witness: Option<String>) {
        self.checks.push(AxiomCheck {
            name,
            passed: witness.is_none(),
            witness,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}
