//! Scenarios (agents x resources valuation matrices) and allocations.
//!
//! Agent and resource indices are zero-based everywhere inside the crate;
//! the CLI and file formats translate to the one-based external convention.
//! A `Scenario` is immutable after validation, so it is safe to share across
//! concurrent readers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// n or m is zero.
    EmptyDimension,
    /// An entry is negative; indices are one-based, matching reports.
    NegativeUtility { agent: usize, resource: usize },
    /// A valuation row has the wrong length.
    RaggedRow { row: usize },
    IndexOutOfRange { index: usize, len: usize },
    /// Allocation length or agent indices do not match the scenario.
    DimensionMismatch,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyDimension => write!(f, "EmptyDimension"),
            ModelError::NegativeUtility { agent, resource } => {
                write!(f, "NegativeUtility({agent},{resource})")
            }
            ModelError::RaggedRow { row } => write!(f, "RaggedRow({row})"),
            ModelError::IndexOutOfRange { index, len } => {
                write!(f, "IndexOutOfRange({index},{len})")
            }
            ModelError::DimensionMismatch => write!(f, "DimensionMismatch"),
        }
    }
}

/// The most specific class a scenario belongs to. Identical implies Buyer
/// implies General.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioClass {
    General,
    Buyer,
    Identical,
}

impl ScenarioClass {
    /// True when `self` is at least as specific as `other` in the
    /// Identical => Buyer => General lattice.
    pub fn satisfies(self, other: ScenarioClass) -> bool {
        match other {
            ScenarioClass::General => true,
            ScenarioClass::Buyer => self != ScenarioClass::General,
            ScenarioClass::Identical => self == ScenarioClass::Identical,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioClass::General => "general",
            ScenarioClass::Buyer => "buyer",
            ScenarioClass::Identical => "identical",
        }
    }
}

impl fmt::Display for ScenarioClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A validated allocation problem: n agents, m resources, and the exact
/// non-negative valuation each agent assigns to each resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    valuations: Vec<Vec<Rational>>,
    n: usize,
    m: usize,
    label: Option<String>,
}

impl Scenario {
    /// Validates a raw matrix: non-empty, rectangular, every entry >= 0.
    pub fn new(valuations: Vec<Vec<Rational>>) -> Result<Self, ModelError> {
        let n = valuations.len();
        if n == 0 {
            return Err(ModelError::EmptyDimension);
        }
        let m = valuations[0].len();
        if m == 0 {
            return Err(ModelError::EmptyDimension);
        }
        for (i, row) in valuations.iter().enumerate() {
            if row.len() != m {
                return Err(ModelError::RaggedRow { row: i + 1 });
            }
            for (k, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(ModelError::NegativeUtility {
                        agent: i + 1,
                        resource: k + 1,
                    });
                }
            }
        }
        Ok(Scenario {
            valuations,
            n,
            m,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn resources(&self) -> usize {
        self.m
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// u_i(r_k), zero-based.
    pub fn value(&self, agent: usize, resource: usize) -> &Rational {
        &self.valuations[agent][resource]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.valuations[agent]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.valuations
    }

    /// The maximum valuation any agent assigns to each resource.
    pub fn column_maxima(&self) -> Vec<Rational> {
        (0..self.m)
            .map(|k| {
                (0..self.n)
                    .map(|i| &self.valuations[i][k])
                    .max()
                    .expect("n >= 1")
                    .clone()
            })
            .collect()
    }

    /// Sum of the column maxima: the exact utilitarian welfare optimum,
    /// attained by the greedy allocator on every additive scenario.
    pub fn max_utilitarian_welfare(&self) -> Rational {
        let mut total = Rational::zero();
        for alpha in self.column_maxima() {
            total += alpha;
        }
        total
    }
}

/// Returns the most specific class: Identical when every agent values every
/// resource at the same positive price, Buyer when each resource's nonzero
/// valuations agree on a single price, General otherwise.
pub fn classify_scenario(s: &Scenario) -> ScenarioClass {
    let mut any_zero = false;
    for k in 0..s.resources() {
        let mut price: Option<&Rational> = None;
        for i in 0..s.agents() {
            let v = s.value(i, k);
            if v.is_zero() {
                any_zero = true;
            } else {
                match price {
                    None => price = Some(v),
                    Some(p) if p == v => {}
                    Some(_) => return ScenarioClass::General,
                }
            }
        }
    }
    if any_zero {
        ScenarioClass::Buyer
    } else {
        ScenarioClass::Identical
    }
}

/// A total assignment of every resource to exactly one agent (zero-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Allocation {
    assignment: Vec<usize>,
}

impl Allocation {
    pub fn new(assignment: Vec<usize>) -> Self {
        Allocation { assignment }
    }

    /// Builds an allocation from one-based agent indices (the external
    /// convention); fails on a zero index.
    pub fn from_one_based(indices: &[usize]) -> Result<Self, ModelError> {
        let mut assignment = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 {
                return Err(ModelError::DimensionMismatch);
            }
            assignment.push(i - 1);
        }
        Ok(Allocation { assignment })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.assignment.iter().map(|&a| a + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Total over the scenario: right length, every agent index in range.
    pub fn validate_for(&self, s: &Scenario) -> Result<(), ModelError> {
        if self.assignment.len() != s.resources() {
            return Err(ModelError::DimensionMismatch);
        }
        if self.assignment.iter().any(|&a| a >= s.agents()) {
            return Err(ModelError::DimensionMismatch);
        }
        Ok(())
    }

    /// Resources assigned to `agent`, in ascending index order.
    pub fn bundle(&self, agent: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &a)| a == agent)
            .map(|(k, _)| k)
    }
}

/// u_agent of its assigned bundle; zero for an empty bundle.
pub fn bundle_utility(
    s: &Scenario,
    a: &Allocation,
    agent: usize,
) -> Result<Rational, ModelError> {
    if agent >= s.agents() {
        return Err(ModelError::IndexOutOfRange {
            index: agent,
            len: s.agents(),
        });
    }
    a.validate_for(s)?;
    let mut total = Rational::zero();
    for k in a.bundle(agent) {
        total += s.value(agent, k);
    }
    Ok(total)
}

/// All n bundle utilities in one pass.
pub fn bundle_utilities(s: &Scenario, a: &Allocation) -> Result<Vec<Rational>, ModelError> {
    a.validate_for(s)?;
    let mut totals = alloc::vec![Rational::zero(); s.agents()];
    for (k, &agent) in a.assignment().iter().enumerate() {
        totals[agent] += s.value(agent, k);
    }
    Ok(totals)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::int;
    use alloc::vec;

    /// Two agents, two resources; the unique utilitarian optimum fails EF1.
    pub fn general_2x2() -> Scenario {
        Scenario::new(vec![
            vec![int(10), int(10)],
            vec![int(3), int(2)],
        ])
        .unwrap()
    }

    /// Three agents, five resources, prices (500, 200, 50, 100, 250).
    pub fn buyer_3x5() -> Scenario {
        Scenario::new(vec![
            vec![int(500), int(200), int(50), int(0), int(0)],
            vec![int(500), int(0), int(50), int(100), int(250)],
            vec![int(500), int(200), int(0), int(100), int(0)],
        ])
        .unwrap()
    }

    /// Three agents, eight resources; the price-sorted allocator is EFX here
    /// but not EFX0.
    pub fn buyer_3x8() -> Scenario {
        Scenario::new(vec![
            vec![
                int(20),
                int(0),
                int(10),
                int(2),
                int(0),
                int(0),
                int(3),
                int(1),
            ],
            vec![
                int(20),
                int(0),
                int(10),
                int(2),
                int(11),
                int(19),
                int(0),
                int(1),
            ],
            vec![
                int(20),
                int(9),
                int(0),
                int(2),
                int(0),
                int(19),
                int(3),
                int(1),
            ],
        ])
        .unwrap()
    }
}
