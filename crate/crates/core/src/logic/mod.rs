//! Finite concrete logics: families of subsets of a finite ground set,
//! ordered by inclusion, with set complement as orthocomplement.

mod axioms;
mod boxlogic;
mod closure;
mod even;

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::bits::BitSet;
use crate::error::LogicError;

pub use axioms::{verify_axioms, Axiom, AxiomCheck, AxiomReport};
pub use boxlogic::{BoxLogic, AboveAtomCase, OrderClassification};
pub use closure::close_family;
pub use even::{EvenSetLogic, EVEN_SET_MAX_K};

/// Index of an element in a [`Logic`] table.
pub type ElemIdx = usize;

/// An enumerated family of subsets of `{0, .., ground - 1}`.
///
/// The table is canonically ordered: the empty set first and the whole set
/// second (when present), then by cardinality and numeric value.
/// Nothing here assumes the family satisfies the logic axioms; see
/// [`verify_axioms`].
#[derive(Clone, Debug)]
pub struct Logic {
    ground: usize,
    elements: Vec<BitSet>,
    index: HashMap<BitSet, ElemIdx>,
    complement: Vec<Option<ElemIdx>>,
    atoms: Vec<ElemIdx>,
    atomistic: bool,
}

fn table_cmp(a: &BitSet, b: &BitSet) -> Ordering {
    let rank = |s: &BitSet| {
        if s.is_empty() {
            0
        } else if s.is_full() {
            1
        } else {
            2
        }
    };
    rank(a).cmp(&rank(b)).then_with(|| a.canonical_cmp(b))
}

impl Logic {
    /// Panics if a set's width differs from `ground`.
    pub fn from_family(ground: usize, sets: impl IntoIterator<Item = BitSet>) -> Self {
        let mut elements: Vec<BitSet> = sets.into_iter().collect();
        for s in &elements {
            assert_eq!(s.len(), ground, "set width differs from ground size");
        }
        elements.sort_by(table_cmp);
        elements.dedup();
        let index: HashMap<BitSet, ElemIdx> = elements.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let complement = elements.iter().map(|s| index.get(&s.complement()).copied()).collect();

        // Minimal non-empty elements. Only smaller sets can sit below a set.
        let atoms: Vec<ElemIdx> = (0..elements.len())
            .filter(|&i| {
                let e = &elements[i];
                !e.is_empty()
                    && !elements
                        .iter()
                        .any(|o| !o.is_empty() && o.count() < e.count() && o.is_subset(e))
            })
            .collect();
        let atomistic = elements.iter().all(|e| {
            let mut u = BitSet::empty(ground);
            for &a in &atoms {
                if elements[a].is_subset(e) {
                    u.union_with(&elements[a]);
                }
            }
            &u == e
        });

        Self {
            ground,
            elements,
            index,
            complement,
            atoms,
            atomistic,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: ElemIdx) -> &BitSet {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[BitSet] {
        &self.elements
    }

    pub fn position(&self, set: &BitSet) -> Option<ElemIdx> {
        self.index.get(set).copied()
    }

    pub fn contains(&self, set: &BitSet) -> bool {
        self.index.contains_key(set)
    }

    /// Like [`Logic::position`] but rejects sets outside the family.
    pub fn lookup(&self, set: &BitSet) -> Result<ElemIdx, LogicError> {
        if set.len() != self.ground {
            return Err(LogicError::WidthMismatch {
                expected: self.ground,
                found: set.len(),
            });
        }
        self.position(set)
            .ok_or_else(|| LogicError::ForeignElement(set.to_hex()))
    }

    pub fn zero(&self) -> Option<ElemIdx> {
        self.position(&BitSet::empty(self.ground))
    }

    pub fn one(&self) -> Option<ElemIdx> {
        self.position(&BitSet::full(self.ground))
    }

    /// Index of the set complement, if the family contains it.
    pub fn complement_of(&self, i: ElemIdx) -> Option<ElemIdx> {
        self.complement[i]
    }

    pub fn complement_map(&self) -> &[Option<ElemIdx>] {
        &self.complement
    }

    fn complement_total(&self) -> bool {
        self.complement.iter().all(Option::is_some)
    }

    pub fn atoms(&self) -> &[ElemIdx] {
        &self.atoms
    }

    pub fn is_atom(&self, i: ElemIdx) -> bool {
        self.atoms.binary_search(&i).is_ok()
    }

    /// Every element is the union of the atoms below it.
    pub fn is_atomistic(&self) -> bool {
        self.atomistic
    }

    pub fn leq(&self, p: ElemIdx, q: ElemIdx) -> bool {
        self.elements[p].is_subset(&self.elements[q])
    }

    /// Greatest lower bound in the family's own order, or `None` when the
    /// lower bounds have no greatest element.
    ///
    /// This is not set intersection: `p ∩ q` may lie outside the family.
    pub fn meet(&self, p: ElemIdx, q: ElemIdx) -> Option<ElemIdx> {
        if !self.atomistic {
            return self.meet_by_scan(p, q);
        }
        // Every lower bound is a union of atoms below p ∩ q, so a greatest
        // lower bound exists iff the union of those atoms is itself present.
        let cap = self.elements[p].intersection(&self.elements[q]);
        let mut u = BitSet::empty(self.ground);
        for &a in &self.atoms {
            if self.elements[a].is_subset(&cap) {
                u.union_with(&self.elements[a]);
            }
        }
        match self.position(&u) {
            Some(i) => Some(i),
            // only ∅ may be missing without atoms below
            None if u.is_empty() => self.meet_by_scan(p, q),
            None => None,
        }
    }

    /// Least upper bound in the family's own order.
    pub fn join(&self, p: ElemIdx, q: ElemIdx) -> Option<ElemIdx> {
        if self.complement_total() {
            let (cp, cq) = (self.complement[p]?, self.complement[q]?);
            self.meet(cp, cq).and_then(|m| self.complement[m])
        } else {
            self.join_by_scan(p, q)
        }
    }

    /// Meet found by scanning every element; independent of atoms and complements.
    pub fn meet_by_scan(&self, p: ElemIdx, q: ElemIdx) -> Option<ElemIdx> {
        let cap = self.elements[p].intersection(&self.elements[q]);
        let lower: Vec<ElemIdx> = (0..self.len()).filter(|&r| self.elements[r].is_subset(&cap)).collect();
        lower.iter().copied().find(|&g| lower.iter().all(|&r| self.leq(r, g)))
    }

    /// Join found by scanning every element.
    pub fn join_by_scan(&self, p: ElemIdx, q: ElemIdx) -> Option<ElemIdx> {
        let cup = self.elements[p].union(&self.elements[q]);
        let upper: Vec<ElemIdx> = (0..self.len()).filter(|&r| cup.is_subset(&self.elements[r])).collect();
        upper.iter().copied().find(|&g| upper.iter().all(|&r| self.leq(g, r)))
    }

    /// Every pair has a meet and a join.
    pub fn is_lattice(&self) -> bool {
        (0..self.len()).all(|p| (p + 1..self.len()).all(|q| self.meet(p, q).is_some() && self.join(p, q).is_some()))
    }

    /// A lattice in which `p ∨ (q ∧ r) = (p ∨ q) ∧ (p ∨ r)` for all triples.
    pub fn is_boolean(&self) -> bool {
        if !self.is_lattice() {
            return false;
        }
        let n = self.len();
        let meet = |a, b| self.meet(a, b).expect("lattice");
        let join = |a, b| self.join(a, b).expect("lattice");
        (0..n).all(|p| (0..n).all(|q| (0..n).all(|r| join(p, meet(q, r)) == meet(join(p, q), join(p, r)))))
    }

    /// Cover pairs `(lower, upper)` of the Hasse diagram, sorted.
    pub fn hasse_covers(&self) -> Vec<(ElemIdx, ElemIdx)> {
        let mut covers = Vec::new();
        for q in 0..self.len() {
            let mut below: Vec<ElemIdx> = (0..self.len()).filter(|&r| r != q && self.leq(r, q)).collect();
            below.sort_by_key(|&r| std::cmp::Reverse(self.elements[r].count()));
            let mut maximal: Vec<ElemIdx> = Vec::new();
            for r in below {
                if !maximal.iter().any(|&m| self.leq(r, m)) {
                    maximal.push(r);
                }
            }
            covers.extend(maximal.into_iter().map(|r| (r, q)));
        }
        covers.sort_unstable();
        covers
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(len: usize, ix: &[usize]) -> BitSet {
        BitSet::from_indices(len, ix.iter().copied())
    }

    #[test]
    fn canonical_table_order() {
        let l = Logic::from_family(
            3,
            [
                set(3, &[0, 1, 2]),
                set(3, &[2]),
                set(3, &[0, 1]),
                set(3, &[]),
                set(3, &[0]),
                set(3, &[1, 2]),
            ],
        );
        let hex: Vec<String> = l.elements().iter().map(BitSet::to_hex).collect();
        assert_eq!(hex, ["0", "7", "1", "4", "3", "6"]);
        assert_eq!(l.zero(), Some(0));
        assert_eq!(l.one(), Some(1));
        assert_eq!(l.complement_of(2), Some(5));
        assert_eq!(l.complement_of(3), Some(4));
        assert!(l.lookup(&set(3, &[0, 2])).is_err());
    }

    #[test]
    fn fast_meet_agrees_with_scan_on_powerset_fragments() {
        // {∅, Ω} plus pairs of a 4-set: not a lattice
        let mut family = vec![set(4, &[]), set(4, &[0, 1, 2, 3])];
        for i in 0..4 {
            for j in i + 1..4 {
                family.push(set(4, &[i, j]));
            }
        }
        let l = Logic::from_family(4, family);
        assert!(l.is_atomistic());
        for p in 0..l.len() {
            for q in 0..l.len() {
                assert_eq!(l.meet(p, q), l.meet_by_scan(p, q));
                assert_eq!(l.join(p, q), l.join_by_scan(p, q));
            }
        }
        assert!(l.is_lattice());
        assert!(!l.is_boolean());
    }

    #[test]
    fn covers_of_a_chain() {
        let l = Logic::from_family(2, [set(2, &[]), set(2, &[0]), set(2, &[0, 1])]);
        // order: ∅, Ω, {0}
        assert_eq!(l.hasse_covers(), vec![(0, 2), (2, 1)]);
    }
}
