use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::restarts::scheduled::{run_cycles, Budget};
use crate::restarts::Schedule;
use crate::solvers::{validate_start, Trace};
use crate::{Error, Point, ProximalOracle, Result};

/// Result of the logarithmic grid search over restart schedules.
#[derive(Debug, Clone)]
pub struct GridOutcome {
    /// Budget `N` every scheme was run against.
    pub budget: usize,
    /// Completed schemes keyed by `(i, j)`; each ran `N ≤ N′ ≤ 2N` iterations.
    pub runs: BTreeMap<(u32, u32), Trace>,
    /// Schemes whose first cycle alone exceeds `2N`.
    pub skipped: Vec<(u32, u32)>,
    /// Scheme with the lowest final objective (ties: smaller `i`, then `j`).
    pub best: (u32, u32),
    /// Accepted iterations summed over all schemes.
    pub total_inner_iterations: usize,
}

impl GridOutcome {
    pub fn best_trace(&self) -> &Trace {
        &self.runs[&self.best]
    }
}

/// Schedule of scheme `S_{i,j}`: `t_k = 2^i` for `j = 0`, `t_k = 2^i e^(2^(−j) k)` otherwise.
type Cell = (u32, u32);

pub fn grid_schedule(i: u32, j: u32) -> Schedule {
    let constant = 2f64.powi(i as i32);
    let schedule = if j == 0 {
        Schedule::constant(constant)
    } else {
        Schedule::geometric(constant, 2f64.powi(-(j as i32)))
    };
    schedule.expect("grid schedules are valid by construction")
}

/// Grid ranges `(i_max, j_max) = (⌊log₂N⌋, ⌈log₂N⌉)`.
pub(crate) fn grid_ranges(n: usize) -> (u32, u32) {
    let floor = usize::BITS - 1 - n.leading_zeros();
    let ceil = if n.is_power_of_two() { floor } else { floor + 1 };
    (floor, ceil)
}

/// Runs every scheme `S_{i,j}`, `i ∈ [1, ⌊log₂N⌋]`, `j ∈ [0, ⌈log₂N⌉]`.
///
/// Each scheme stops at the first cycle boundary where its total reaches
/// `N`; a cycle that would push the total past `2N` is truncated there.
/// Schemes run concurrently; the reduction is independent of completion order.
pub fn adaptive_grid<O>(oracle: &O, x0: &Point, n: usize, l0: f64) -> Result<GridOutcome>
where
    O: ProximalOracle + ?Sized,
{
    if n < 4 {
        return Err(Error::InvalidArgument(format!("grid search needs N ≥ 4, got {n}")));
    }
    validate_start(oracle, x0, l0, n)?;
    let (i_max, j_max) = grid_ranges(n);
    let cells: Vec<(u32, u32)> = (1..=i_max).flat_map(|i| (0..=j_max).map(move |j| (i, j))).collect();
    let budget = Budget { target: n, cap: 2 * n };
    // `None` marks a scheme whose first cycle alone exceeds the cap.
    let results: Vec<(Cell, Option<Result<Trace>>)> = cells
        .par_iter()
        .map(|&(i, j)| {
            let schedule = grid_schedule(i, j);
            if schedule.iterations(1) > budget.cap {
                return ((i, j), None);
            }
            ((i, j), Some(run_cycles(oracle, x0, &schedule, budget, None, l0)))
        })
        .collect();

    let mut runs = BTreeMap::new();
    let mut skipped = Vec::new();
    for (cell, result) in results {
        match result {
            Some(trace) => {
                runs.insert(cell, trace?);
            }
            None => skipped.push(cell),
        }
    }
    let mut best: Option<((u32, u32), f64)> = None;
    for (&cell, trace) in &runs {
        let value = trace.final_value();
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((cell, value));
        }
    }
    let best = best
        .map(|(cell, _)| cell)
        .ok_or_else(|| Error::InvalidArgument("no grid scheme fits in the budget".into()))?;
    let total_inner_iterations = runs.values().map(Trace::iterations).sum();
    Ok(GridOutcome {
        budget: n,
        runs,
        skipped,
        best,
        total_inner_iterations,
    })
}
