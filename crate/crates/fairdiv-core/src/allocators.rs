//! Constructive allocators.
//!
//! All three share one greedy step: give the next resource to the
//! lowest-indexed agent that values it maximally among those with minimum
//! partial utility so far. They differ only in the order resources are
//! processed: input order (`gamma`), descending price order (`gamma_star`),
//! and descending shared-value order on identical scenarios
//! (`alg_identical`).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::model::{classify_scenario, Allocation, Scenario, ScenarioClass};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AllocatorError {
    NotIdenticalScenario,
}

impl fmt::Display for AllocatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AllocatorError::NotIdenticalScenario => write!(f, "NotIdenticalScenario"),
        }
    }
}

/// One greedy step: which resource was processed, who competed, who won.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// Zero-based resource index processed at this step.
    pub resource: usize,
    /// Highest valuation any agent assigns to the resource.
    pub max_value: Rational,
    /// Agents attaining `max_value` (all agents when it is zero).
    pub maximizers: Vec<usize>,
    /// The subset of `maximizers` with minimum partial utility.
    pub poorest: Vec<usize>,
    /// The winner: minimum index of `poorest`.
    pub chosen: usize,
    /// Partial utilities of all agents after the assignment.
    pub partials: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AllocatorTrace {
    pub steps: Vec<TraceStep>,
}

/// Runs the greedy step-loop over `order`. The returned allocation is
/// indexed by original resource positions regardless of the order.
fn run_greedy(s: &Scenario, order: &[usize], with_trace: bool) -> (Allocation, Option<AllocatorTrace>) {
    let n = s.agents();
    let mut partials = vec![Rational::zero(); n];
    let mut assignment = vec![0usize; s.resources()];
    let mut steps = Vec::new();
    for &k in order {
        let max_value = (0..n).map(|i| s.value(i, k)).max().expect("n >= 1").clone();
        // A resource nobody values goes through the same min-utility rule
        // over all agents; it adds zero utility wherever it lands.
        let maximizers: Vec<usize> = if max_value.is_zero() {
            (0..n).collect()
        } else {
            (0..n).filter(|&i| *s.value(i, k) == max_value).collect()
        };
        let min_partial = maximizers
            .iter()
            .map(|&i| &partials[i])
            .min()
            .expect("maximizers nonempty")
            .clone();
        let poorest: Vec<usize> = maximizers
            .iter()
            .copied()
            .filter(|&i| partials[i] == min_partial)
            .collect();
        let chosen = poorest[0];
        assignment[k] = chosen;
        let gained = s.value(chosen, k).clone();
        partials[chosen] += gained;
        if with_trace {
            steps.push(TraceStep {
                resource: k,
                max_value,
                maximizers,
                poorest,
                chosen,
                partials: partials.clone(),
            });
        }
    }
    let trace = with_trace.then_some(AllocatorTrace { steps });
    (Allocation::new(assignment), trace)
}

/// Greedy utilitarian-welfare maximizer over resources in input order.
/// O(nm); the result attains the exact welfare bound (sum of column maxima)
/// on every additive scenario.
pub fn gamma(s: &Scenario) -> (Allocation, AllocatorTrace) {
    let order: Vec<usize> = (0..s.resources()).collect();
    let (a, t) = run_greedy(s, &order, true);
    (a, t.expect("trace requested"))
}

/// `gamma` without trace bookkeeping, for hot paths.
pub fn gamma_allocation(s: &Scenario) -> Allocation {
    let order: Vec<usize> = (0..s.resources()).collect();
    run_greedy(s, &order, false).0
}

fn descending_order(keys: &[Rational]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    // Stable: ties keep ascending original index.
    order.sort_by(|&a, &b| keys[b].cmp(&keys[a]));
    order
}

/// The greedy step-loop over resources sorted descending by their maximum
/// valuation (the price, in buyer scenarios), ties broken by ascending
/// original index. EFX on buyer scenarios; O(m log m + nm).
pub fn gamma_star(s: &Scenario) -> (Allocation, AllocatorTrace) {
    let order = descending_order(&s.column_maxima());
    let (a, t) = run_greedy(s, &order, true);
    (a, t.expect("trace requested"))
}

pub fn gamma_star_allocation(s: &Scenario) -> Allocation {
    let order = descending_order(&s.column_maxima());
    run_greedy(s, &order, false).0
}

/// Greedy baseline for identical scenarios: sort resources descending by
/// their shared value, then repeatedly hand the next resource to the agent
/// with minimum partial utility (ties to the smallest index).
pub fn alg_identical(s: &Scenario) -> Result<Allocation, AllocatorError> {
    if classify_scenario(s) != ScenarioClass::Identical {
        return Err(AllocatorError::NotIdenticalScenario);
    }
    // All rows are equal in an identical scenario, so the maximizer set is
    // always every agent and the step-loop degenerates to pure min-utility.
    let order = descending_order(s.row(0));
    Ok(run_greedy(s, &order, false).0)
}

/// Benchmark fast path over a plain value vector (the shared row of an
/// identical scenario): assign each value in input order to the agent with
/// the minimum running total. Equivalent to `gamma` on the identical
/// scenario with those values.
pub fn buyer_identical_values(values: &[u64], n: usize) -> Vec<usize> {
    let mut totals = vec![0u64; n];
    let mut assignment = Vec::with_capacity(values.len());
    for &v in values {
        let mut j = 0;
        for i in 1..n {
            if totals[i] < totals[j] {
                j = i;
            }
        }
        assignment.push(j);
        totals[j] += v;
    }
    assignment
}

/// Benchmark fast path matching `alg_identical`: sort descending (stable),
/// then run the same min-total loop; the result is indexed by original
/// positions.
pub fn alg_identical_values(values: &[u64], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]));
    let mut totals = vec![0u64; n];
    let mut assignment = vec![0usize; values.len()];
    for &k in &order {
        let mut j = 0;
        for i in 1..n {
            if totals[i] < totals[j] {
                j = i;
            }
        }
        assignment[k] = j;
        totals[j] += values[k];
    }
    assignment
}
