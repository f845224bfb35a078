use serde::Serialize;

use super::{close_family, ElemIdx, Logic};
use crate::bits::BitSet;
use crate::error::{LogicError, Result};
use crate::scenario::{AtomId, BoxWorldSpec, GammaIndex, Limits, LocalizedSpec, Side};

/// The concrete logic generated by the atoms `[aα, bβ]` of a scenario.
#[derive(Clone, Debug)]
pub struct BoxLogic {
    spec: BoxWorldSpec,
    gamma: GammaIndex,
    logic: Logic,
    atom_ids: Vec<AtomId>,
    atom_sets: Vec<BitSet>,
    atom_elements: Vec<ElemIdx>,
    decompositions: Vec<Option<Vec<usize>>>,
}

impl BoxLogic {
    /// Closes the atoms of `spec` under complement and disjoint union.
    pub fn build(spec: &BoxWorldSpec, limits: &Limits) -> Result<Self> {
        let gamma = GammaIndex::build(spec, limits)?;
        let atom_ids = spec.atom_ids();
        let atom_sets: Vec<BitSet> = atom_ids
            .iter()
            .map(|&id| gamma.atom(spec, id))
            .collect::<Result<_, _>>()?;
        let family = close_family(gamma.size(), atom_sets.iter().cloned(), limits.closure)?;
        let logic = Logic::from_family(gamma.size(), family);
        Ok(Self::assemble(spec.clone(), gamma, logic, atom_ids, atom_sets))
    }

    fn assemble(
        spec: BoxWorldSpec,
        gamma: GammaIndex,
        logic: Logic,
        atom_ids: Vec<AtomId>,
        atom_sets: Vec<BitSet>,
    ) -> Self {
        let atom_elements = atom_sets
            .iter()
            .map(|s| logic.position(s).expect("atoms generate the logic"))
            .collect();
        let decompositions = logic
            .elements()
            .iter()
            .map(|e| least_decomposition(&atom_sets, e))
            .collect();
        Self {
            spec,
            gamma,
            logic,
            atom_ids,
            atom_sets,
            atom_elements,
            decompositions,
        }
    }

    pub fn spec(&self) -> &BoxWorldSpec {
        &self.spec
    }

    pub fn gamma(&self) -> &GammaIndex {
        &self.gamma
    }

    pub fn logic(&self) -> &Logic {
        &self.logic
    }

    /// Atom identifiers in lexicographic order.
    pub fn atom_ids(&self) -> &[AtomId] {
        &self.atom_ids
    }

    /// Element index of the atom at position `k` of [`BoxLogic::atom_ids`].
    pub fn atom_element(&self, k: usize) -> ElemIdx {
        self.atom_elements[k]
    }

    pub fn atom_elements(&self) -> &[ElemIdx] {
        &self.atom_elements
    }

    pub fn atom_index(&self, id: AtomId) -> Option<ElemIdx> {
        self.atom_ids.binary_search(&id).ok().map(|k| self.atom_elements[k])
    }

    /// Position in [`BoxLogic::atom_ids`] of the atom stored at element `e`.
    pub fn atom_position(&self, e: ElemIdx) -> Option<usize> {
        self.atom_elements.iter().position(|&x| x == e)
    }

    pub fn localized(&self, loc: &LocalizedSpec) -> Result<ElemIdx> {
        let set = self.gamma.localized(&self.spec, loc)?;
        Ok(self.logic.lookup(&set)?)
    }

    pub fn element_of(&self, set: &BitSet) -> Result<ElemIdx, LogicError> {
        self.logic.lookup(set)
    }

    /// Lexicographically least list of pairwise-disjoint atoms whose union
    /// is element `e`; `None` when no such list exists. `∅` has the empty
    /// list.
    pub fn canonical_decomposition(&self, e: ElemIdx) -> Option<Vec<AtomId>> {
        self.decompositions[e]
            .as_ref()
            .map(|ks| ks.iter().map(|&k| self.atom_ids[k]).collect())
    }

    /// Canonical decomposition as positions into [`BoxLogic::atom_ids`].
    pub fn canonical_decomposition_positions(&self, e: ElemIdx) -> Option<&[usize]> {
        self.decompositions[e].as_deref()
    }

    /// Every way of writing element `e` as a union of pairwise-disjoint
    /// atoms. Each decomposition is sorted and the list is sorted; `∅`
    /// yields no decompositions.
    pub fn atomic_decompositions(&self, e: ElemIdx) -> Vec<Vec<AtomId>> {
        self.decomposition_positions(e)
            .into_iter()
            .map(|d| d.into_iter().map(|k| self.atom_ids[k]).collect())
            .collect()
    }

    /// [`BoxLogic::atomic_decompositions`] as atom positions.
    pub fn decomposition_positions(&self, e: ElemIdx) -> Vec<Vec<usize>> {
        let target = self.logic.element(e);
        if target.is_empty() {
            return Vec::new();
        }
        let below: Vec<usize> = (0..self.atom_sets.len())
            .filter(|&k| self.atom_sets[k].is_subset(target))
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        exact_covers(&self.atom_sets, &below, target.clone(), &mut chosen, &mut out);
        for d in &mut out {
            d.sort_unstable();
        }
        out.sort();
        out
    }

    /// Which alternative of the order classification describes `q` above
    /// the atom `p`, with the remainder `q'`.
    ///
    /// Alternatives are tried in the order `q = Γ`, `[aα, 1] ⊕ q'`,
    /// `[1, bβ] ⊕ q'`, `p ⊕ q'`.
    pub fn classify_above_atom(&self, p: ElemIdx, q: ElemIdx) -> Result<OrderClassification, LogicError> {
        let k = self.atom_position(p).ok_or(LogicError::NotAnAtom(p))?;
        if !self.logic.leq(p, q) {
            return Err(LogicError::NotAbove { atom: p, element: q });
        }
        let id = self.atom_ids[k];
        let qs = self.logic.element(q);
        let zero = self.logic.zero().expect("closure contains ∅");
        if qs.is_full() {
            return Ok(OrderClassification {
                case: AboveAtomCase::Top,
                atom: id,
                remainder: zero,
            });
        }
        let left = self
            .gamma
            .localized(&self.spec, &LocalizedSpec::new(Side::Left, id.a, [id.alpha]))
            .expect("atom indices are valid");
        let right = self
            .gamma
            .localized(&self.spec, &LocalizedSpec::new(Side::Right, id.b, [id.beta]))
            .expect("atom indices are valid");
        let atom = self.logic.element(p).clone();
        for (case, part) in [
            (AboveAtomCase::LeftLocalized, left),
            (AboveAtomCase::RightLocalized, right),
            (AboveAtomCase::AtomPlusRest, atom),
        ] {
            if part.is_subset(qs) {
                if let Some(rest) = self.logic.position(&qs.difference(&part)) {
                    return Ok(OrderClassification {
                        case,
                        atom: id,
                        remainder: rest,
                    });
                }
            }
        }
        Err(LogicError::UnclassifiedOrder { atom: p, element: q })
    }

    /// The part `p`, `[aα, 1]`, `[1, bβ]` or `Γ` that a classification
    /// splits off.
    pub fn classification_part(&self, c: &OrderClassification) -> BitSet {
        let id = c.atom;
        match c.case {
            AboveAtomCase::Top => self.gamma.full(),
            AboveAtomCase::LeftLocalized => self
                .gamma
                .localized(&self.spec, &LocalizedSpec::new(Side::Left, id.a, [id.alpha]))
                .expect("valid"),
            AboveAtomCase::RightLocalized => self
                .gamma
                .localized(&self.spec, &LocalizedSpec::new(Side::Right, id.b, [id.beta]))
                .expect("valid"),
            AboveAtomCase::AtomPlusRest => self.atom_sets[self.atom_ids.binary_search(&id).expect("atom")].clone(),
        }
    }
}

/// Alternatives for an element above an atom `[aα, bβ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AboveAtomCase {
    /// `q = [aα, bβ] ⊕ q'`
    AtomPlusRest,
    /// `q = [aα, 1] ⊕ q'`
    LeftLocalized,
    /// `q = [1, bβ] ⊕ q'`
    RightLocalized,
    /// `q = Γ`
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderClassification {
    pub case: AboveAtomCase,
    pub atom: AtomId,
    /// Element index of `q'`; `∅` for [`AboveAtomCase::Top`].
    pub remainder: ElemIdx,
}

fn least_decomposition(atoms: &[BitSet], target: &BitSet) -> Option<Vec<usize>> {
    fn go(atoms: &[BitSet], below: &[usize], from: usize, rest: &BitSet, acc: &mut Vec<usize>) -> bool {
        let Some(pt) = rest.first() else {
            return true;
        };
        // the lowest uncovered point must be covered by a later atom
        if !below[from..]
            .iter()
            .any(|&k| atoms[k].contains(pt) && atoms[k].is_subset(rest))
        {
            return false;
        }
        for (off, &k) in below[from..].iter().enumerate() {
            if atoms[k].is_subset(rest) {
                acc.push(k);
                if go(atoms, below, from + off + 1, &rest.difference(&atoms[k]), acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let below: Vec<usize> = (0..atoms.len()).filter(|&k| atoms[k].is_subset(target)).collect();
    let mut acc = Vec::new();
    go(atoms, &below, 0, target, &mut acc).then_some(acc)
}

fn exact_covers(atoms: &[BitSet], below: &[usize], rest: BitSet, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let Some(pt) = rest.first() else {
        out.push(chosen.clone());
        return;
    };
    for &k in below {
        if atoms[k].contains(pt) && atoms[k].is_subset(&rest) {
            chosen.push(k);
            exact_covers(atoms, below, rest.difference(&atoms[k]), chosen, out);
            chosen.pop();
        }
    }
}
