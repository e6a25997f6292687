use crate::Point;

/// One accepted inner iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    /// Cumulative accepted inner iterations, starting at 1.
    pub iteration: usize,
    /// Full objective at the iterate.
    pub value: f64,
    /// `value − f*`, present once an optimum is attached.
    pub gap: Option<f64>,
    /// The iterate closes a restart cycle.
    pub restart: bool,
    /// Accuracy target of the cycle the iterate belongs to.
    pub epsilon_target: Option<f64>,
}

/// Bookkeeping for one restart cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    /// Accepted iterations the schedule asked for (`None` for criterion cycles).
    pub planned: Option<usize>,
    /// Accepted iterations actually run.
    pub iterations: usize,
    /// Cumulative accepted iterations at the end of the cycle.
    pub end_iteration: usize,
    pub epsilon_target: Option<f64>,
    /// Objective at the cycle output.
    pub end_value: f64,
    /// For criterion cycles, whether the target was met.
    pub reached_target: Option<bool>,
}

/// Conditions worth surfacing that do not abort a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// The line search hit its doubling cap without satisfying the descent
    /// condition; the run stopped at the last accepted iterate.
    LineSearchStalled { iteration: usize },
    /// The final cycle was cut short by the iteration budget.
    BudgetTruncated {
        cycle: usize,
        planned: usize,
        executed: usize,
    },
    /// A criterion cycle ran out of budget before reaching its target.
    TargetNotReached { cycle: usize, target: f64 },
    /// An iterate fell below the supplied optimum by more than rounding.
    BelowSuppliedOptimum { iteration: usize, value: f64 },
    /// A grid scheme could not complete its first cycle within `2N`.
    Skipped,
}

/// Record of a solver or restart-scheme run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    /// Objective at the starting point.
    pub initial_value: f64,
    pub final_point: Point,
    /// Lipschitz estimate at exit, usable as a warm start.
    pub final_lipschitz: f64,
    /// Points at which the smooth part was evaluated.
    pub oracle_calls: usize,
    /// Line-search doublings.
    pub backtracks: usize,
    pub cycles: Vec<Cycle>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Trace {
    pub(crate) fn empty(x0: Point, initial_value: f64, lipschitz: f64) -> Self {
        Self {
            entries: Vec::new(),
            initial_value,
            final_point: x0,
            final_lipschitz: lipschitz,
            oracle_calls: 0,
            backtracks: 0,
            cycles: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    /// Accepted inner iterations.
    pub fn iterations(&self) -> usize {
        self.entries.last().map_or(0, |e| e.iteration)
    }

    pub fn final_value(&self) -> f64 {
        self.entries.last().map_or(self.initial_value, |e| e.value)
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.entries.last().and_then(|e| e.gap)
    }

    pub fn restart_count(&self) -> usize {
        self.entries.iter().filter(|e| e.restart).count()
    }

    /// Fills every entry's gap from a known optimum.
    pub fn with_optimum(mut self, f_star: f64) -> Self {
        for entry in &mut self.entries {
            entry.gap = Some(entry.value - f_star);
        }
        self
    }

    pub fn stalled(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| matches!(d, Diagnostic::LineSearchStalled { .. }))
    }

    /// Appends the run of one restart cycle, shifting its iteration counts.
    ///
    /// The last appended entry is marked as a restart point.
    pub(crate) fn push_cycle(&mut self, inner: Trace, mut cycle: Cycle) {
        let offset = self.iterations();
        let start = self.entries.len();
        self.entries.extend(inner.entries.into_iter().map(|mut e| {
            e.iteration += offset;
            e.epsilon_target = cycle.epsilon_target;
            e
        }));
        if self.entries.len() > start {
            if let Some(last) = self.entries.last_mut() {
                last.restart = true;
            }
        }
        self.final_point = inner.final_point;
        self.final_lipschitz = inner.final_lipschitz;
        self.oracle_calls += inner.oracle_calls;
        self.backtracks += inner.backtracks;
        self.diagnostics.extend(inner.diagnostics.into_iter().map(|d| match d {
            Diagnostic::LineSearchStalled { iteration } => Diagnostic::LineSearchStalled {
                iteration: iteration + offset,
            },
            Diagnostic::BelowSuppliedOptimum { iteration, value } => Diagnostic::BelowSuppliedOptimum {
                iteration: iteration + offset,
                value,
            },
            other => other,
        }));
        cycle.end_iteration = self.iterations();
        cycle.end_value = self.final_value();
        self.cycles.push(cycle);
    }
}
