use super::Logic;
use crate::bits::BitSet;
use crate::error::LogicError;

pub const EVEN_SET_MAX_K: usize = 6;

/// All even-cardinality subsets of a `2k`-point set.
#[derive(Clone, Debug)]
pub struct EvenSetLogic {
    k: usize,
    logic: Logic,
}

impl EvenSetLogic {
    pub fn new(k: usize) -> Result<Self, LogicError> {
        if k == 0 || k > EVEN_SET_MAX_K {
            return Err(LogicError::EvenSetCap { k, cap: EVEN_SET_MAX_K });
        }
        let n = 2 * k;
        let sets = (0u32..1 << n)
            .filter(|m| m.count_ones() % 2 == 0)
            .map(|m| BitSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)));
        Ok(Self {
            k,
            logic: Logic::from_family(n, sets),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn logic(&self) -> &Logic {
        &self.logic
    }

    /// Element holding the given one-based points.
    pub fn element(&self, points: &[usize]) -> Result<usize, LogicError> {
        let n = 2 * self.k;
        if let Some(&p) = points.iter().find(|&&p| p == 0 || p > n) {
            return Err(LogicError::ForeignElement(format!("point {p}")));
        }
        self.logic
            .lookup(&BitSet::from_indices(n, points.iter().map(|p| p - 1)))
    }
}
