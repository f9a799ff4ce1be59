//! The transport-mode selection program and its exact solver.
//!
//! Each session must keep exactly one of its displayed modes, the chosen
//! mode's travel time may not exceed the clicked one, and the weighted sum
//! of CO2 grams and travel seconds over all sessions is minimized. There
//! are no constraints coupling sessions, so the program decomposes: each
//! row is solved by exact argmin over its feasible modes. A guarded
//! brute-force enumeration over the joint assignment space validates that
//! decomposition.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::emission::EmissionTable;
use crate::error::{Error, Result};
use crate::ingest::{ModeId, Session};
use crate::modes::{ModeMapping, TransportMeans};

/// One defined matrix entry: the cost of a displayed plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub co2_g: f64,
    pub eta_s: u64,
}

/// The assembled optimization instance: per-session emission and time
/// matrices with explicit "not offered" entries, the clicked-time budgets,
/// and the objective weights.
#[derive(Debug, Clone)]
pub struct Instance<'a> {
    sessions: &'a [Session],
    /// Column index -> mode id, ascending.
    mode_ids: Vec<ModeId>,
    /// Row-major m x n; `None` where the mode was not displayed.
    cells: Vec<Vec<Option<Cell>>>,
    clicked_col: Vec<usize>,
    /// Per-session time budget: the clicked plan's travel time.
    qprime: Vec<u64>,
    alpha: f64,
    beta: f64,
}

/// One chosen column per session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub chosen: Vec<usize>,
}

/// An assignment together with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub assignment: Assignment,
    pub objective: f64,
}

/// Builds the instance from joined sessions.
///
/// Every displayed option becomes a defined entry: its CO2 grams from
/// distance times the means' rate, its time straight from the displayed
/// eta. Modes that were not displayed stay absent rather than zero.
pub fn build_instance<'a>(
    sessions: &'a [Session],
    mapping: &ModeMapping,
    table: &EmissionTable,
    alpha: f64,
    beta: f64,
) -> Result<Instance<'a>> {
    if !(alpha.is_finite() && beta.is_finite() && alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::Config(format!(
            "objective weights must be finite and non-negative, got alpha={alpha} beta={beta}"
        )));
    }
    let mut mode_ids: Vec<ModeId> = sessions
        .iter()
        .flat_map(|s| s.options.iter().map(|o| o.mode_id))
        .collect();
    mode_ids.sort_unstable();
    mode_ids.dedup();
    let col_of = |mode: ModeId| mode_ids.binary_search(&mode).expect("mode is a column");

    let mut cells = Vec::with_capacity(sessions.len());
    let mut clicked_col = Vec::with_capacity(sessions.len());
    let mut qprime = Vec::with_capacity(sessions.len());
    for session in sessions {
        let mut row: Vec<Option<Cell>> = vec![None; mode_ids.len()];
        for opt in &session.options {
            let means = mapping.means_of(opt.mode_id);
            if means == TransportMeans::Unknown {
                return Err(Error::Instance(format!(
                    "session {}: option mode {} maps to unknown means",
                    session.sid, opt.mode_id
                )));
            }
            let co2_g = table.plan_emission_g(opt.distance_m as f64, means)?;
            row[col_of(opt.mode_id)] = Some(Cell {
                co2_g,
                eta_s: opt.eta_s,
            });
        }
        let clicked = col_of(session.clicked_mode_id);
        match row[clicked] {
            Some(cell) if cell.eta_s == session.clicked_eta_s => {}
            _ => {
                return Err(Error::Instance(format!(
                    "session {}: clicked mode entry missing or inconsistent",
                    session.sid
                )))
            }
        }
        clicked_col.push(clicked);
        qprime.push(session.clicked_eta_s);
        cells.push(row);
    }
    Ok(Instance {
        sessions,
        mode_ids,
        cells,
        clicked_col,
        qprime,
        alpha,
        beta,
    })
}

impl<'a> Instance<'a> {
    /// Session count.
    pub fn m(&self) -> usize {
        self.cells.len()
    }

    /// Mode (column) count.
    pub fn n(&self) -> usize {
        self.mode_ids.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sessions(&self) -> &'a [Session] {
        self.sessions
    }

    pub fn mode_ids(&self) -> &[ModeId] {
        &self.mode_ids
    }

    pub fn mode_of_col(&self, col: usize) -> ModeId {
        self.mode_ids[col]
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<Cell> {
        self.cells[row][col]
    }

    pub fn clicked_col(&self, row: usize) -> usize {
        self.clicked_col[row]
    }

    pub fn clicked_cell(&self, row: usize) -> Cell {
        self.cells[row][self.clicked_col[row]].expect("clicked entry is defined")
    }

    /// The row's time budget: travel time of the clicked plan.
    pub fn time_budget(&self, row: usize) -> u64 {
        self.qprime[row]
    }

    /// Objective contribution of one entry.
    pub fn objective_term(&self, cell: Cell) -> f64 {
        self.alpha * cell.co2_g + self.beta * cell.eta_s as f64
    }

    /// Objective of the user's own clicks.
    pub fn baseline_objective(&self) -> f64 {
        (0..self.m())
            .map(|i| self.objective_term(self.clicked_cell(i)))
            .sum()
    }

    /// Objective of an assignment, summed in row order.
    pub fn objective_of(&self, assignment: &Assignment) -> f64 {
        assignment
            .chosen
            .iter()
            .enumerate()
            .map(|(i, &j)| self.objective_term(self.cells[i][j].expect("chosen entry is defined")))
            .sum()
    }

    /// Columns a row may choose: defined entries within the time budget.
    /// Never empty, since the clicked entry spends exactly the budget.
    pub fn feasible_cols(&self, row: usize) -> Vec<usize> {
        (0..self.n())
            .filter(|&j| self.cells[row][j].is_some_and(|cell| cell.eta_s <= self.qprime[row]))
            .collect()
    }

    fn row_key(&self, row: usize, col: usize) -> CandidateKey {
        let cell = self.cells[row][col].expect("key of a defined entry");
        CandidateKey {
            objective: self.objective_term(cell),
            co2_g: cell.co2_g,
            clicked_rank: u8::from(col != self.clicked_col[row]),
            mode_id: self.mode_ids[col].get(),
        }
    }
}

/// Tie-break key: objective first, then lower CO2, then the clicked mode,
/// then the lower mode id. Distinct columns always compare unequal because
/// the mode id is unique within a row.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CandidateKey {
    objective: f64,
    co2_g: f64,
    clicked_rank: u8,
    mode_id: u8,
}

impl CandidateKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.objective
            .total_cmp(&other.objective)
            .then(self.co2_g.total_cmp(&other.co2_g))
            .then(self.clicked_rank.cmp(&other.clicked_rank))
            .then(self.mode_id.cmp(&other.mode_id))
    }
}

/// Exact argmin for one session over its feasible modes.
pub fn solve_session(instance: &Instance, row: usize) -> usize {
    let mut best: Option<(usize, CandidateKey)> = None;
    for col in instance.feasible_cols(row) {
        let key = instance.row_key(row, col);
        match &best {
            Some((_, incumbent)) if key.cmp(incumbent) != Ordering::Less => {}
            _ => best = Some((col, key)),
        }
    }
    best.expect("clicked mode is always feasible").0
}

/// Solves the whole program exactly by solving each row independently.
///
/// Rows are fanned out across the current thread pool; the result is
/// identical to sequential execution regardless of worker count.
pub fn solve(instance: &Instance) -> Solution {
    let chosen: Vec<usize> = (0..instance.m())
        .into_par_iter()
        .map(|i| solve_session(instance, i))
        .collect();
    let assignment = Assignment { chosen };
    let objective = instance.objective_of(&assignment);
    Solution {
        assignment,
        objective,
    }
}

/// Upper bound on the joint assignments the oracle will enumerate.
pub const ORACLE_GUARD: u128 = 10_000_000;

/// Exhaustively enumerates every joint feasible assignment and returns the
/// best one, with ties broken lexicographically by the same per-row key the
/// solver uses. Refuses search spaces larger than [`ORACLE_GUARD`].
pub fn brute_force_oracle(instance: &Instance) -> Result<Solution> {
    let feasible: Vec<Vec<usize>> = (0..instance.m())
        .map(|i| instance.feasible_cols(i))
        .collect();
    let mut space: u128 = 1;
    for row in &feasible {
        space = space.saturating_mul(row.len() as u128);
        if space > ORACLE_GUARD {
            return Err(Error::OracleGuard(format!(
                "search space exceeds {ORACLE_GUARD} joint assignments"
            )));
        }
    }

    let m = instance.m();
    let mut odometer = vec![0usize; m];
    let mut best: Option<(Vec<usize>, f64, Vec<CandidateKey>)> = None;
    loop {
        let chosen: Vec<usize> = (0..m).map(|i| feasible[i][odometer[i]]).collect();
        let total: f64 = chosen
            .iter()
            .enumerate()
            .map(|(i, &j)| instance.objective_term(instance.cells[i][j].unwrap()))
            .sum();
        let keys: Vec<CandidateKey> = (0..m).map(|i| instance.row_key(i, chosen[i])).collect();
        let better = match &best {
            None => true,
            Some((_, best_total, best_keys)) => match total.total_cmp(best_total) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    keys.iter()
                        .zip(best_keys)
                        .map(|(a, b)| a.cmp(b))
                        .find(|o| *o != Ordering::Equal)
                        == Some(Ordering::Less)
                }
            },
        };
        if better {
            best = Some((chosen, total, keys));
        }

        // Advance the odometer; done once every digit wraps.
        let mut digit = 0;
        loop {
            if digit == m {
                let (chosen, objective, _) = best.expect("space is never empty");
                return Ok(Solution {
                    assignment: Assignment { chosen },
                    objective,
                });
            }
            odometer[digit] += 1;
            if odometer[digit] < feasible[digit].len() {
                break;
            }
            odometer[digit] = 0;
            digit += 1;
        }
    }
}

/// One constraint violation found by [`verify_assignment`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// The assignment does not have one entry per session.
    WrongLength { expected: usize, found: usize },
    /// A chosen column index is out of range.
    ColumnOutOfRange { row: usize, col: usize },
    /// The chosen mode was not displayed for this session.
    NotOffered { row: usize, col: usize },
    /// The chosen mode's travel time exceeds the clicked plan's.
    TimeBudgetExceeded {
        row: usize,
        eta_s: u64,
        budget_s: u64,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::WrongLength { expected, found } => {
                write!(f, "assignment has {found} entries for {expected} sessions")
            }
            Violation::ColumnOutOfRange { row, col } => {
                write!(f, "row {row}: column {col} out of range")
            }
            Violation::NotOffered { row, col } => {
                write!(f, "row {row}: chosen mode (column {col}) was not displayed")
            }
            Violation::TimeBudgetExceeded {
                row,
                eta_s,
                budget_s,
            } => {
                write!(
                    f,
                    "row {row}: chosen time {eta_s}s exceeds clicked time {budget_s}s"
                )
            }
        }
    }
}

/// Checks an assignment against every constraint and lists all violations.
/// One-mode-per-session holds structurally when the length matches, since
/// an assignment stores exactly one column per row.
pub fn verify_assignment(instance: &Instance, assignment: &Assignment) -> Vec<Violation> {
    let mut violations = Vec::new();
    if assignment.chosen.len() != instance.m() {
        violations.push(Violation::WrongLength {
            expected: instance.m(),
            found: assignment.chosen.len(),
        });
        return violations;
    }
    for (row, &col) in assignment.chosen.iter().enumerate() {
        if col >= instance.n() {
            violations.push(Violation::ColumnOutOfRange { row, col });
            continue;
        }
        match instance.cells[row][col] {
            None => violations.push(Violation::NotOffered { row, col }),
            Some(cell) => {
                if cell.eta_s > instance.qprime[row] {
                    violations.push(Violation::TimeBudgetExceeded {
                        row,
                        eta_s: cell.eta_s,
                        budget_s: instance.qprime[row],
                    });
                }
            }
        }
    }
    violations
}
