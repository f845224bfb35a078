//! Box-world scenarios, the joint sample space and its distinguished subsets.
//!
//! A scenario lists, for each box, the inputs and the outcome labels of each
//! input. A point of the sample space fixes one outcome for every input of
//! both boxes; subsets of the sample space are [`BitSet`]s indexed by a
//! mixed-radix encoding of points.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{FormatError, ScenarioError};

/// Which of the two boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Resource caps shared by the builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Maximum number of sample points.
    pub gamma: usize,
    /// Maximum number of logic elements produced by closure.
    pub closure: usize,
    /// Maximum number of polytope variables (atoms).
    pub vars: usize,
    /// Maximum size of a set passed to the set-compatibility check.
    pub compatible_set: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            gamma: 1 << 20,
            closure: 1_000_000,
            vars: 200,
            compatible_set: 12,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    left: Vec<Vec<String>>,
    right: Vec<Vec<String>>,
}

/// Outcome labels of every input of the left and right boxes.
///
/// Order is significant: the position of an input and of a label within it
/// is the index used everywhere else.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoxWorldSpec {
    left: Vec<Vec<String>>,
    right: Vec<Vec<String>>,
}

impl BoxWorldSpec {
    pub fn new(left: Vec<Vec<String>>, right: Vec<Vec<String>>) -> Result<Self, ScenarioError> {
        for (side, inputs) in [(Side::Left, &left), (Side::Right, &right)] {
            if inputs.is_empty() {
                return Err(ScenarioError::NoInputs(side));
            }
            for (input, labels) in inputs.iter().enumerate() {
                if labels.len() < 2 {
                    return Err(ScenarioError::TooFewOutcomes {
                        side,
                        input,
                        count: labels.len(),
                    });
                }
                let mut seen = HashSet::new();
                for label in labels {
                    if !seen.insert(label) {
                        return Err(ScenarioError::DuplicateLabel {
                            side,
                            input,
                            label: label.clone(),
                        });
                    }
                }
            }
        }
        Ok(Self { left, right })
    }

    /// Scenario with numeric labels `"0", "1", ..` and the given outcome counts.
    pub fn with_outcome_counts(left: &[usize], right: &[usize]) -> Result<Self, ScenarioError> {
        let labels = |counts: &[usize]| -> Vec<Vec<String>> {
            counts
                .iter()
                .map(|&n| (0..n).map(|i| i.to_string()).collect())
                .collect()
        };
        Self::new(labels(left), labels(right))
    }

    /// Two binary inputs per box.
    pub fn chsh() -> Self {
        Self::with_outcome_counts(&[2, 2], &[2, 2]).expect("valid")
    }

    pub fn from_json(text: &str) -> Result<Self, crate::Error> {
        let raw: ScenarioFile = serde_json::from_str(text).map_err(FormatError::from)?;
        Ok(Self::new(raw.left, raw.right)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn inputs(&self, side: Side) -> &[Vec<String>] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn input_count(&self, side: Side) -> usize {
        self.inputs(side).len()
    }

    pub fn outcome_count(&self, side: Side, input: usize) -> usize {
        self.inputs(side)[input].len()
    }

    pub fn outcome_counts(&self, side: Side) -> Vec<usize> {
        self.inputs(side).iter().map(Vec::len).collect()
    }

    /// Total number of atoms, `(sum_a |U_a|) * (sum_b |V_b|)`.
    pub fn atom_count(&self) -> usize {
        let l: usize = self.left.iter().map(Vec::len).sum();
        let r: usize = self.right.iter().map(Vec::len).sum();
        l * r
    }

    /// All atom identifiers in lexicographic `(a, alpha, b, beta)` order.
    pub fn atom_ids(&self) -> Vec<AtomId> {
        let mut out = Vec::with_capacity(self.atom_count());
        for (a, us) in self.left.iter().enumerate() {
            for alpha in 0..us.len() {
                for (b, vs) in self.right.iter().enumerate() {
                    for beta in 0..vs.len() {
                        out.push(AtomId { a, alpha, b, beta });
                    }
                }
            }
        }
        out
    }

    pub fn check_atom(&self, id: AtomId) -> Result<(), ScenarioError> {
        let ok = id.a < self.left.len()
            && id.b < self.right.len()
            && id.alpha < self.left[id.a].len()
            && id.beta < self.right[id.b].len();
        if ok {
            Ok(())
        } else {
            Err(ScenarioError::AtomOutOfRange {
                a: id.a,
                alpha: id.alpha,
                b: id.b,
                beta: id.beta,
            })
        }
    }
}

/// The question "inputs `(a, b)` give outputs `(alpha, beta)`", all zero-based.
///
/// The derived order is lexicographic in `(a, alpha, b, beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomId {
    pub a: usize,
    pub alpha: usize,
    pub b: usize,
    pub beta: usize,
}

impl AtomId {
    pub fn new(a: usize, alpha: usize, b: usize, beta: usize) -> Self {
        Self { a, alpha, b, beta }
    }

    /// Two atoms are disjoint iff they share an input on one side with
    /// different outcomes there.
    pub fn excludes(&self, other: &AtomId) -> bool {
        (self.a == other.a && self.alpha != other.alpha) || (self.b == other.b && self.beta != other.beta)
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}, {} {}]", self.a, self.alpha, self.b, self.beta)
    }
}

/// A proposition about one box only: input `input` on `side` yields an
/// outcome in `outcomes`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LocalizedSpec {
    pub side: Side,
    pub input: usize,
    pub outcomes: Vec<usize>,
}

impl LocalizedSpec {
    pub fn new(side: Side, input: usize, outcomes: impl IntoIterator<Item = usize>) -> Self {
        let mut outcomes: Vec<usize> = outcomes.into_iter().collect();
        outcomes.sort_unstable();
        outcomes.dedup();
        Self { side, input, outcomes }
    }

    pub fn validate(&self, spec: &BoxWorldSpec) -> Result<(), ScenarioError> {
        if self.outcomes.is_empty() {
            return Err(ScenarioError::EmptyOutcomeSet);
        }
        let inputs = spec.inputs(self.side);
        let Some(labels) = inputs.get(self.input) else {
            return Err(ScenarioError::InputOutOfRange {
                side: self.side,
                input: self.input,
            });
        };
        if let Some(&outcome) = self.outcomes.iter().find(|&&o| o >= labels.len()) {
            return Err(ScenarioError::OutcomeOutOfRange {
                side: self.side,
                input: self.input,
                outcome,
            });
        }
        Ok(())
    }

    /// Every localized proposition of the scenario with a non-empty outcome
    /// set, side by side, input by input, outcome subsets in bitmask order.
    /// With `proper_only`, the full outcome set (which is the whole space)
    /// is skipped.
    pub fn enumerate(spec: &BoxWorldSpec, proper_only: bool) -> Vec<LocalizedSpec> {
        let mut out = Vec::new();
        for side in [Side::Left, Side::Right] {
            for (input, labels) in spec.inputs(side).iter().enumerate() {
                let n = labels.len();
                let top = if proper_only { (1u64 << n) - 1 } else { 1u64 << n };
                for mask in 1..top {
                    out.push(LocalizedSpec::new(side, input, (0..n).filter(|i| mask >> i & 1 == 1)));
                }
            }
        }
        out
    }
}

impl fmt::Display for LocalizedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = self
            .outcomes
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match self.side {
            Side::Left => write!(f, "[{}∈{{{}}}, 1]", self.input, set),
            Side::Right => write!(f, "[1, {}∈{{{}}}]", self.input, set),
        }
    }
}

/// The joint sample space `Γ = Γ₁ × Γ₂` with a mixed-radix point encoding.
///
/// Coordinates are ordered left inputs first, then right inputs; the first
/// coordinate is the least significant digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaIndex {
    radices: Vec<usize>,
    strides: Vec<usize>,
    left_inputs: usize,
    gamma1_size: usize,
    gamma2_size: usize,
}

impl GammaIndex {
    pub fn build(spec: &BoxWorldSpec, limits: &Limits) -> Result<Self, ScenarioError> {
        let left = spec.outcome_counts(Side::Left);
        let right = spec.outcome_counts(Side::Right);
        let too_large = ScenarioError::GammaTooLarge { cap: limits.gamma };
        let product = |xs: &[usize]| {
            xs.iter()
                .try_fold(1usize, |acc, &x| acc.checked_mul(x))
                .ok_or(too_large.clone())
        };
        let gamma1_size = product(&left)?;
        let gamma2_size = product(&right)?;
        let size = gamma1_size.checked_mul(gamma2_size).ok_or(too_large.clone())?;
        if size > limits.gamma {
            return Err(too_large);
        }
        let radices: Vec<usize> = left.iter().chain(right.iter()).copied().collect();
        let mut strides = Vec::with_capacity(radices.len());
        let mut s = 1;
        for &r in &radices {
            strides.push(s);
            s *= r;
        }
        Ok(Self {
            radices,
            strides,
            left_inputs: left.len(),
            gamma1_size,
            gamma2_size,
        })
    }

    pub fn gamma1_size(&self) -> usize {
        self.gamma1_size
    }

    pub fn gamma2_size(&self) -> usize {
        self.gamma2_size
    }

    pub fn size(&self) -> usize {
        self.gamma1_size * self.gamma2_size
    }

    fn coordinate(&self, side: Side, input: usize) -> usize {
        match side {
            Side::Left => input,
            Side::Right => self.left_inputs + input,
        }
    }

    /// Outcome of `input` on `side` at the point with the given index.
    pub fn digit(&self, point: usize, side: Side, input: usize) -> usize {
        let c = self.coordinate(side, input);
        point / self.strides[c] % self.radices[c]
    }

    /// Splits a point index into its left and right outcome tuples.
    pub fn point(&self, index: usize) -> (Vec<usize>, Vec<usize>) {
        let digits: Vec<usize> = (0..self.radices.len())
            .map(|c| index / self.strides[c] % self.radices[c])
            .collect();
        let (x, y) = digits.split_at(self.left_inputs);
        (x.to_vec(), y.to_vec())
    }

    /// Inverse of [`GammaIndex::point`].
    pub fn index(&self, x: &[usize], y: &[usize]) -> Option<usize> {
        if x.len() != self.left_inputs || x.len() + y.len() != self.radices.len() {
            return None;
        }
        let mut idx = 0;
        for (c, &d) in x.iter().chain(y.iter()).enumerate() {
            if d >= self.radices[c] {
                return None;
            }
            idx += d * self.strides[c];
        }
        Some(idx)
    }

    fn select(&self, pred: impl Fn(usize) -> bool) -> BitSet {
        BitSet::from_indices(self.size(), (0..self.size()).filter(|&p| pred(p)))
    }

    /// `[aα, bβ] = {(x, y) : x_a = α, y_b = β}`.
    pub fn atom(&self, spec: &BoxWorldSpec, id: AtomId) -> Result<BitSet, ScenarioError> {
        spec.check_atom(id)?;
        Ok(self.select(|p| self.digit(p, Side::Left, id.a) == id.alpha && self.digit(p, Side::Right, id.b) == id.beta))
    }

    /// `[a∈P, 1]` or `[1, b∈Q]`.
    pub fn localized(&self, spec: &BoxWorldSpec, loc: &LocalizedSpec) -> Result<BitSet, ScenarioError> {
        loc.validate(spec)?;
        Ok(self.select(|p| loc.outcomes.binary_search(&self.digit(p, loc.side, loc.input)).is_ok()))
    }

    pub fn complement(&self, e: &BitSet) -> BitSet {
        debug_assert_eq!(e.len(), self.size());
        e.complement()
    }

    pub fn full(&self) -> BitSet {
        BitSet::full(self.size())
    }

    pub fn empty(&self) -> BitSet {
        BitSet::empty(self.size())
    }
}
