//! Finite observables, their moments, and zero-dispersion witnesses.

use num_traits::Zero;

use crate::bits::BitSet;
use crate::error::{ObservableError, ScenarioError};
use crate::logic::{BoxLogic, ElemIdx, Logic};
use crate::rational::{self, Rational};
use crate::states::{point_state, LogicState};

/// Largest number of outcomes whose value-subset joins are checked.
pub const MAX_OUTCOMES: usize = 20;

/// A finite-valued observable: distinct values on pairwise disjoint
/// elements covering the sample space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable {
    outcomes: Vec<(Rational, ElemIdx)>,
}

impl Observable {
    /// Outcomes sorted by value.
    pub fn outcomes(&self) -> &[(Rational, ElemIdx)] {
        &self.outcomes
    }

    /// The same observable with every value moved by `c`.
    pub fn shifted(&self, c: &Rational) -> Observable {
        Observable {
            outcomes: self.outcomes.iter().map(|(v, e)| (v + c, *e)).collect(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.outcomes.len() == 1
    }
}

pub fn make_observable(logic: &Logic, assignment: Vec<(Rational, ElemIdx)>) -> Result<Observable, ObservableError> {
    if assignment.is_empty() {
        return Err(ObservableError::Empty);
    }
    if assignment.len() > MAX_OUTCOMES {
        return Err(ObservableError::TooManyOutcomes {
            cap: MAX_OUTCOMES,
            found: assignment.len(),
        });
    }
    let mut outcomes = assignment;
    if let Some(&(_, e)) = outcomes.iter().find(|(_, e)| *e >= logic.len()) {
        return Err(ObservableError::UnknownElement(e));
    }
    outcomes.sort_by(|x, y| x.0.cmp(&y.0));
    if let Some(w) = outcomes.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(ObservableError::DuplicateValue(rational::format(&w[0].0)));
    }
    for i in 0..outcomes.len() {
        for j in i + 1..outcomes.len() {
            let (ei, ej) = (outcomes[i].1, outcomes[j].1);
            if !logic.element(ei).is_disjoint(logic.element(ej)) {
                return Err(ObservableError::OverlappingSupports(ei, ej));
            }
        }
    }
    // unions of value subsets, built one bit at a time
    let n = outcomes.len();
    let mut unions: Vec<BitSet> = Vec::with_capacity(1 << n);
    unions.push(BitSet::empty(logic.ground_size()));
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let u = unions[mask & (mask - 1)].union(logic.element(outcomes[low].1));
        if !logic.contains(&u) {
            return Err(ObservableError::SubJoinNotInLogic(u.to_hex()));
        }
        unions.push(u);
    }
    if !unions[(1 << n) - 1].is_full() {
        return Err(ObservableError::IncompleteCover);
    }
    Ok(Observable { outcomes })
}

/// `Σ v ρ(e)`.
pub fn mean(x: &Observable, rho: &LogicState) -> Rational {
    x.outcomes.iter().map(|(v, e)| v * rho.value(*e)).sum()
}

/// `Σ (v − μ)² ρ(e)`, without a square root.
pub fn variance(x: &Observable, rho: &LogicState) -> Rational {
    let mu = mean(x, rho);
    x.outcomes
        .iter()
        .map(|(v, e)| {
            let d = v - &mu;
            &d * &d * rho.value(*e)
        })
        .sum()
}

/// A state on which both observables are dispersion-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncertaintyWitness {
    pub point: usize,
    pub state: LogicState,
    pub variance_x: Rational,
    pub variance_y: Rational,
    pub product: Rational,
}

/// Evaluates `Var(X)·Var(Y)` at the point state of the first sample point.
pub fn heisenberg_infimum_witness(
    bl: &BoxLogic,
    x: &Observable,
    y: &Observable,
) -> Result<UncertaintyWitness, ScenarioError> {
    let state = point_state(bl, 0)?;
    let variance_x = variance(x, &state);
    let variance_y = variance(y, &state);
    let product = &variance_x * &variance_y;
    Ok(UncertaintyWitness {
        point: 0,
        state,
        variance_x,
        variance_y,
        product,
    })
}

pub fn is_dispersion_free(x: &Observable, rho: &LogicState) -> bool {
    variance(x, rho).is_zero()
}
