//! Exact fairness and efficiency predicates for a given allocation.
//!
//! Every verdict is exact (no tolerance) and every failure carries a
//! concrete witness that re-checks against the definitions. Witnesses are
//! always the lexicographically smallest violating tuple, so verdicts are
//! deterministic and golden-test friendly.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::allocators::gamma_allocation;
use crate::model::{
    bundle_utilities, classify_scenario, Allocation, ModelError, Scenario, ScenarioClass,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    Model(ModelError),
    /// The buyer shortcut was requested on a non-buyer scenario.
    NotBuyerScenario,
    /// A stated precondition of the operation does not hold.
    PreconditionViolated(&'static str),
}

impl From<ModelError> for CheckError {
    fn from(e: ModelError) -> Self {
        CheckError::Model(e)
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Model(e) => write!(f, "{e}"),
            CheckError::NotBuyerScenario => write!(f, "NotBuyerScenario"),
            CheckError::PreconditionViolated(what) => {
                write!(f, "PreconditionViolated({what})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    /// The brute-force search space exceeds the enumeration cap.
    CapExceeded,
    /// The predicate was not evaluated (e.g. enumeration disabled).
    NotEvaluated,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::CapExceeded => write!(f, "cap-exceeded"),
            UnknownReason::NotEvaluated => write!(f, "not-evaluated"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
    Unknown(UnknownReason),
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Fail(w) => Some(w),
            _ => None,
        }
    }
}

/// Witness for envy-style failures: agent `envier` still envies `envied`,
/// after removing `good` when one is named. Indices zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvyWitness {
    pub envier: usize,
    pub envied: usize,
    pub good: Option<usize>,
}

/// Cross-utility matrix: entry (i, j) is u_i of the bundle assigned to j.
pub fn cross_utilities(s: &Scenario, a: &Allocation) -> Result<Vec<Vec<Rational>>, CheckError> {
    a.validate_for(s)?;
    let n = s.agents();
    let mut b = vec![vec![Rational::zero(); n]; n];
    for (k, &owner) in a.assignment().iter().enumerate() {
        for (i, row) in b.iter_mut().enumerate() {
            row[owner] += s.value(i, k);
        }
    }
    Ok(b)
}

/// Envy-free: no agent strictly prefers another agent's bundle.
pub fn is_ef(s: &Scenario, a: &Allocation) -> Result<Verdict<EnvyWitness>, CheckError> {
    let b = cross_utilities(s, a)?;
    for i in 0..s.agents() {
        for j in 0..s.agents() {
            if i != j && b[i][i] < b[i][j] {
                return Ok(Verdict::Fail(EnvyWitness {
                    envier: i,
                    envied: j,
                    good: None,
                }));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Envy-free up to one good: every envied bundle contains some good whose
/// removal eliminates the envy.
pub fn is_ef1(s: &Scenario, a: &Allocation) -> Result<Verdict<EnvyWitness>, CheckError> {
    let b = cross_utilities(s, a)?;
    for i in 0..s.agents() {
        for j in 0..s.agents() {
            if i == j || b[i][i] >= b[i][j] {
                continue;
            }
            // Envy implies a nonempty bundle; removing the good i values
            // most is the best possible single removal.
            let best = a
                .bundle(j)
                .map(|k| s.value(i, k))
                .max()
                .expect("envied bundle nonempty");
            if b[i][i] < b[i][j].clone() - best {
                return Ok(Verdict::Fail(EnvyWitness {
                    envier: i,
                    envied: j,
                    good: None,
                }));
            }
        }
    }
    Ok(Verdict::Pass)
}

fn envy_up_to_any(
    s: &Scenario,
    a: &Allocation,
    positive_only: bool,
) -> Result<Verdict<EnvyWitness>, CheckError> {
    let b = cross_utilities(s, a)?;
    for i in 0..s.agents() {
        for j in 0..s.agents() {
            if i == j {
                continue;
            }
            for k in a.bundle(j) {
                let v = s.value(i, k);
                if positive_only && v.is_zero() {
                    continue;
                }
                if b[i][i] < b[i][j].clone() - v {
                    return Ok(Verdict::Fail(EnvyWitness {
                        envier: i,
                        envied: j,
                        good: Some(k),
                    }));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Envy-free up to any positively valued good.
pub fn is_efx(s: &Scenario, a: &Allocation) -> Result<Verdict<EnvyWitness>, CheckError> {
    envy_up_to_any(s, a, true)
}

/// Envy-free up to any good, including zero-valued ones.
pub fn is_efx0(s: &Scenario, a: &Allocation) -> Result<Verdict<EnvyWitness>, CheckError> {
    envy_up_to_any(s, a, false)
}

/// Sufficient condition for EFX0 in buyer scenarios: an EFX allocation in
/// which every envied bundle consists solely of goods both agents value at
/// the same positive price is EFX0. When the condition passes, the
/// conclusion is cross-checked against `is_efx0` directly.
pub fn efx0_sufficient_condition(
    s: &Scenario,
    a: &Allocation,
) -> Result<Verdict<EnvyWitness>, CheckError> {
    if classify_scenario(s) == ScenarioClass::General {
        return Err(CheckError::PreconditionViolated("scenario is not buyer"));
    }
    if !is_efx(s, a)?.is_pass() {
        return Err(CheckError::PreconditionViolated("allocation is not EFX"));
    }
    let b = cross_utilities(s, a)?;
    for i in 0..s.agents() {
        for j in 0..s.agents() {
            if i == j || b[i][i] >= b[i][j] {
                continue;
            }
            for k in a.bundle(j) {
                let vi = s.value(i, k);
                if vi.is_zero() || vi != s.value(j, k) {
                    return Ok(Verdict::Fail(EnvyWitness {
                        envier: i,
                        envied: j,
                        good: Some(k),
                    }));
                }
            }
        }
    }
    assert!(
        is_efx0(s, a)?.is_pass(),
        "sufficient condition passed but EFX0 failed; checker bug"
    );
    Ok(Verdict::Pass)
}

/// Welfare of one allocation: per-agent utilities, their sum and product,
/// and the exact achievable utilitarian maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WelfareReport {
    pub per_agent: Vec<Rational>,
    pub sw_u: Rational,
    pub sw_nash: Rational,
    pub max_sw_u: Rational,
}

pub fn welfare(s: &Scenario, a: &Allocation) -> Result<WelfareReport, CheckError> {
    let per_agent = bundle_utilities(s, a)?;
    let mut sw_u = Rational::zero();
    let mut sw_nash = Rational::one();
    for u in &per_agent {
        sw_u += u;
        sw_nash *= u;
    }
    Ok(WelfareReport {
        per_agent,
        sw_u,
        sw_nash,
        max_sw_u: s.max_utilitarian_welfare(),
    })
}

/// Membership in the utilitarian-welfare-maximizing set, decided against
/// the analytic bound (sum of column maxima) rather than by enumeration.
/// A failure carries an allocation that attains the bound.
pub fn in_msw_u(s: &Scenario, a: &Allocation) -> Result<Verdict<Allocation>, CheckError> {
    let w = welfare(s, a)?;
    if w.sw_u == w.max_sw_u {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail(gamma_allocation(s)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoMode {
    /// Enumerate all n^m allocations looking for a Pareto dominator.
    BruteForce { cap: u64 },
    /// Buyer scenarios only: PO is equivalent to utilitarian maximality.
    BuyerShortcut,
}

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Number of allocations, saturating past the cap.
pub fn allocation_count(n: usize, m: usize) -> Option<u64> {
    let mut total: u64 = 1;
    for _ in 0..m {
        total = total.checked_mul(n as u64)?;
    }
    Some(total)
}

fn dominates(candidate: &[Rational], incumbent: &[Rational]) -> bool {
    let mut strict = false;
    for (c, i) in candidate.iter().zip(incumbent) {
        if c < i {
            return false;
        }
        if c > i {
            strict = true;
        }
    }
    strict
}

/// Pareto optimality. Brute force scans assignment vectors in lexicographic
/// order and reports the first (lexicographically smallest) dominator; the
/// buyer shortcut maps the question to utilitarian maximality and, on
/// failure, constructs a dominator by moving one wasted resource to an
/// agent that values it.
pub fn is_po(
    s: &Scenario,
    a: &Allocation,
    mode: PoMode,
) -> Result<Verdict<Allocation>, CheckError> {
    a.validate_for(s)?;
    match mode {
        PoMode::BuyerShortcut => {
            if classify_scenario(s) == ScenarioClass::General {
                return Err(CheckError::NotBuyerScenario);
            }
            match in_msw_u(s, a)? {
                Verdict::Pass => Ok(Verdict::Pass),
                Verdict::Fail(_) => Ok(Verdict::Fail(buyer_dominator(s, a))),
                Verdict::Unknown(r) => Ok(Verdict::Unknown(r)),
            }
        }
        PoMode::BruteForce { cap } => {
            match allocation_count(s.agents(), s.resources()) {
                Some(total) if total <= cap => {}
                _ => return Ok(Verdict::Unknown(UnknownReason::CapExceeded)),
            }
            let mine = bundle_utilities(s, a)?;
            let n = s.agents();
            let m = s.resources();
            let mut assignment = vec![0usize; m];
            loop {
                let candidate = Allocation::new(assignment.clone());
                let theirs = bundle_utilities(s, &candidate)?;
                if dominates(&theirs, &mine) {
                    return Ok(Verdict::Fail(candidate));
                }
                // Odometer increment, rightmost digit least significant.
                let mut pos = m;
                loop {
                    if pos == 0 {
                        return Ok(Verdict::Pass);
                    }
                    pos -= 1;
                    assignment[pos] += 1;
                    if assignment[pos] < n {
                        break;
                    }
                    assignment[pos] = 0;
                }
            }
        }
    }
}

/// In a buyer scenario where `a` wastes welfare, some resource with a
/// positive price sits with an agent valuing it at zero; handing it to the
/// smallest-index agent that values it yields a Pareto dominator.
fn buyer_dominator(s: &Scenario, a: &Allocation) -> Allocation {
    for (k, &owner) in a.assignment().iter().enumerate() {
        if !s.value(owner, k).is_zero() {
            continue;
        }
        if let Some(j) = (0..s.agents()).find(|&j| !s.value(j, k).is_zero()) {
            let mut assignment = a.assignment().to_vec();
            assignment[k] = j;
            return Allocation::new(assignment);
        }
    }
    unreachable!("non-maximal buyer allocation must waste some priced resource")
}

/// Aggregated verdicts for one (scenario, allocation) pair. The membership
/// verdicts for the Nash-optimal set come from the enumeration oracle and
/// stay Unknown when enumeration was not run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessReport {
    pub ef: Verdict<EnvyWitness>,
    pub efx0: Verdict<EnvyWitness>,
    pub efx: Verdict<EnvyWitness>,
    pub ef1: Verdict<EnvyWitness>,
    pub po: Verdict<Allocation>,
    pub in_msw_u: Verdict<Allocation>,
    pub in_msw_nash: Verdict<Allocation>,
}
