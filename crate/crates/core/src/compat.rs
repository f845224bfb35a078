//! Compatibility of propositions, Boolean sublogics, and the single-box
//! logic as a pasting of Boolean blocks.

use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{LogicError, Result};
use crate::logic::{verify_axioms, BoxLogic, ElemIdx, Logic};
use crate::scenario::{AtomId, BoxWorldSpec, GammaIndex, Limits, LocalizedSpec, Side};

/// `p = p1 ⊕ r`, `q = q1 ⊕ r` with `p1, q1, r` pairwise disjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityWitness {
    pub p1: ElemIdx,
    pub q1: ElemIdx,
    pub r: ElemIdx,
}

/// Searches `r` over the table in canonical order.
pub fn are_compatible(logic: &Logic, p: ElemIdx, q: ElemIdx) -> Option<CompatibilityWitness> {
    let (sp, sq) = (logic.element(p), logic.element(q));
    let cap = sp.intersection(sq);
    (0..logic.len()).find_map(|r| {
        let sr = logic.element(r);
        if !sr.is_subset(&cap) {
            return None;
        }
        let p1 = logic.position(&sp.difference(sr))?;
        let q1 = logic.position(&sq.difference(sr))?;
        logic
            .element(p1)
            .is_disjoint(logic.element(q1))
            .then_some(CompatibilityWitness { p1, q1, r })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PartitionMethod {
    /// One element split into its canonical atoms.
    SingleElement,
    /// The `p_i, q_j, r_ij` construction for localized families.
    LocalizedConstruction,
    /// Cells of the Venn diagram of the family.
    VennCells,
}

/// Mutually disjoint elements `parts` such that every input element is the
/// union of the parts listed for it in `representation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatiblePartition {
    pub method: PartitionMethod,
    pub parts: Vec<ElemIdx>,
    pub representation: Vec<Vec<ElemIdx>>,
}

/// Proper localized form `(side, input, P)` of an element, if it has one.
/// `∅` and `Γ` have none.
pub fn localized_form(bl: &BoxLogic, e: ElemIdx) -> Option<LocalizedSpec> {
    let set = bl.logic().element(e);
    if set.is_empty() || set.is_full() {
        return None;
    }
    let g = bl.gamma();
    LocalizedSpec::enumerate(bl.spec(), true)
        .into_iter()
        .find(|loc| g.localized(bl.spec(), loc).as_ref() == Ok(set))
}

/// Looks for a mutually-disjoint `G ⊆ ℒ` from which every element of
/// `elems` is a union. `Ok(None)` means the family is not compatible.
///
/// Localized families take the constructive route; other families are
/// decided by their Venn cells, which must all lie in the logic because
/// every admissible `G` refines them.
pub fn is_compatible_set(
    bl: &BoxLogic,
    elems: &[ElemIdx],
    limits: &Limits,
) -> Result<Option<CompatiblePartition>, LogicError> {
    if elems.len() > limits.compatible_set {
        return Err(LogicError::CompatibleSetTooLarge {
            cap: limits.compatible_set,
            found: elems.len(),
        });
    }
    if let [e] = elems {
        let parts: Vec<ElemIdx> = bl
            .canonical_decomposition(*e)
            .expect("every element decomposes into atoms")
            .into_iter()
            .map(|id| bl.atom_index(id).expect("atom"))
            .collect();
        return Ok(Some(CompatiblePartition {
            method: PartitionMethod::SingleElement,
            representation: vec![parts.clone()],
            parts,
        }));
    }
    if let Some(p) = localized_partition(bl, elems) {
        return Ok(Some(p));
    }
    Ok(venn_partition(bl.logic(), elems))
}

fn represent(logic: &Logic, elems: &[ElemIdx], parts: &[ElemIdx]) -> Option<Vec<Vec<ElemIdx>>> {
    elems
        .iter()
        .map(|&e| {
            let target = logic.element(e);
            let inside: Vec<ElemIdx> = parts
                .iter()
                .copied()
                .filter(|&g| logic.element(g).is_subset(target))
                .collect();
            let mut u = BitSet::empty(logic.ground_size());
            for &g in &inside {
                u.union_with(logic.element(g));
            }
            (&u == target).then_some(inside)
        })
        .collect()
}

fn pairwise_disjoint(logic: &Logic, parts: &[ElemIdx]) -> bool {
    parts.iter().enumerate().all(|(i, &x)| {
        parts[i + 1..]
            .iter()
            .all(|&y| logic.element(x).is_disjoint(logic.element(y)))
    })
}

/// Groups outcome indices `0..n` by membership signature in `sets`,
/// keeping only outcomes that lie in at least one set.
fn refine(n: usize, sets: &[&[usize]]) -> Vec<Vec<usize>> {
    let mut cells: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    for o in 0..n {
        let sig: Vec<bool> = sets.iter().map(|s| s.contains(&o)).collect();
        if !sig.iter().any(|&b| b) {
            continue;
        }
        match cells.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, members)) => members.push(o),
            None => cells.push((sig, vec![o])),
        }
    }
    cells.into_iter().map(|(_, m)| m).collect()
}

fn localized_partition(bl: &BoxLogic, elems: &[ElemIdx]) -> Option<CompatiblePartition> {
    let logic = bl.logic();
    let spec = bl.spec();
    let mut left: Vec<LocalizedSpec> = Vec::new();
    let mut right: Vec<LocalizedSpec> = Vec::new();
    for &e in elems {
        let set = logic.element(e);
        if set.is_empty() || set.is_full() {
            continue;
        }
        let loc = localized_form(bl, e)?;
        match loc.side {
            Side::Left => left.push(loc),
            Side::Right => right.push(loc),
        }
    }
    let a = left.first().map_or(0, |l| l.input);
    let b = right.first().map_or(0, |l| l.input);
    if left.iter().any(|l| l.input != a) || right.iter().any(|l| l.input != b) {
        return None;
    }
    let nu = spec.outcome_count(Side::Left, a);
    let nv = spec.outcome_count(Side::Right, b);
    let p_sets: Vec<&[usize]> = left.iter().map(|l| l.outcomes.as_slice()).collect();
    let q_sets: Vec<&[usize]> = right.iter().map(|l| l.outcomes.as_slice()).collect();
    let p_cells = refine(nu, &p_sets);
    let q_cells = refine(nv, &q_sets);
    let p_all: Vec<usize> = p_cells.iter().flatten().copied().collect();
    let q_all: Vec<usize> = q_cells.iter().flatten().copied().collect();
    let not_p: Vec<usize> = (0..nu).filter(|o| !p_all.contains(o)).collect();
    let not_q: Vec<usize> = (0..nv).filter(|o| !q_all.contains(o)).collect();

    let block = |alphas: &[usize], betas: &[usize]| -> Option<ElemIdx> {
        let mut u = BitSet::empty(logic.ground_size());
        for &alpha in alphas {
            for &beta in betas {
                let atom = bl.atom_index(AtomId::new(a, alpha, b, beta))?;
                u.union_with(logic.element(atom));
            }
        }
        if u.is_empty() {
            None
        } else {
            logic.position(&u)
        }
    };
    let mut parts = Vec::new();
    for ps in &p_cells {
        parts.extend(block(ps, &not_q));
    }
    for qs in &q_cells {
        parts.extend(block(&not_p, qs));
    }
    for ps in &p_cells {
        for qs in &q_cells {
            parts.extend(block(ps, qs));
        }
    }
    if !pairwise_disjoint(logic, &parts) {
        return None;
    }
    let representation = represent(logic, elems, &parts)?;
    Some(CompatiblePartition {
        method: PartitionMethod::LocalizedConstruction,
        parts,
        representation,
    })
}

fn venn_partition(logic: &Logic, elems: &[ElemIdx]) -> Option<CompatiblePartition> {
    let n = logic.ground_size();
    let mut cells: Vec<(Vec<bool>, BitSet)> = Vec::new();
    for pt in 0..n {
        let sig: Vec<bool> = elems.iter().map(|&e| logic.element(e).contains(pt)).collect();
        if !sig.iter().any(|&b| b) {
            continue;
        }
        match cells.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, set)) => set.insert(pt),
            None => cells.push((sig, BitSet::from_indices(n, [pt]))),
        }
    }
    let parts: Vec<ElemIdx> = cells
        .iter()
        .map(|(_, set)| logic.position(set))
        .collect::<Option<_>>()?;
    let representation = represent(logic, elems, &parts)?;
    Some(CompatiblePartition {
        method: PartitionMethod::VennCells,
        parts,
        representation,
    })
}

/// A Boolean algebra of elements of the logic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BooleanSublogic {
    /// Disjoint generators whose unions form the sublogic; they cover `Γ`.
    pub generators: Vec<ElemIdx>,
    /// Element indices, ascending.
    pub elements: Vec<ElemIdx>,
}

/// Largest generator count for which a sublogic is materialised.
pub const BOOLEAN_SUBLOGIC_MAX_GENERATORS: usize = 16;
/// Up to this size, distributivity is checked over all triples.
const TRIPLE_CHECK_MAX: usize = 64;

/// The Boolean sublogic spanned by a compatible family's partition and its
/// remainder. `Ok(None)` when the family is not compatible.
pub fn boolean_sublogic_containing(
    bl: &BoxLogic,
    elems: &[ElemIdx],
    limits: &Limits,
) -> Result<Option<BooleanSublogic>, LogicError> {
    let Some(partition) = is_compatible_set(bl, elems, limits)? else {
        return Ok(None);
    };
    let logic = bl.logic();
    let mut generators = partition.parts;
    let mut covered = BitSet::empty(logic.ground_size());
    for &g in &generators {
        covered.union_with(logic.element(g));
    }
    if !covered.is_full() {
        let rest = covered.complement();
        generators.push(
            logic
                .position(&rest)
                .ok_or_else(|| LogicError::ForeignElement(rest.to_hex()))?,
        );
    }
    generators.sort_unstable();
    if generators.len() > BOOLEAN_SUBLOGIC_MAX_GENERATORS {
        return Err(LogicError::CompatibleSetTooLarge {
            cap: BOOLEAN_SUBLOGIC_MAX_GENERATORS,
            found: generators.len(),
        });
    }
    let mut elements = Vec::with_capacity(1 << generators.len());
    for mask in 0u32..1 << generators.len() {
        let mut u = BitSet::empty(logic.ground_size());
        for (i, &g) in generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                u.union_with(logic.element(g));
            }
        }
        elements.push(
            logic
                .position(&u)
                .ok_or_else(|| LogicError::ForeignElement(u.to_hex()))?,
        );
    }
    elements.sort_unstable();
    elements.dedup();
    Ok(Some(BooleanSublogic { generators, elements }))
}

/// Checks that a family of elements is a sublogic and a Boolean algebra in
/// its own order.
pub fn is_boolean_sublogic(logic: &Logic, elements: &[ElemIdx]) -> bool {
    let sets: Vec<BitSet> = elements.iter().map(|&e| logic.element(e).clone()).collect();
    let sub = Logic::from_family(logic.ground_size(), sets.iter().cloned());
    let closed = sets
        .iter()
        .all(|s| sub.contains(&s.complement()) && sets.iter().all(|t| !s.is_disjoint(t) || sub.contains(&s.union(t))));
    if !closed {
        return false;
    }
    if sub.len() <= TRIPLE_CHECK_MAX {
        sub.is_boolean()
    } else {
        // a family of sets closed under ∩, ∪ and complement is a field of sets
        sets.iter().all(|s| {
            sets.iter()
                .all(|t| sub.contains(&s.intersection(t)) && sub.contains(&s.union(t)))
        })
    }
}

/// One Boolean block `{[a∈P, 1] : P ⊆ U_a}` of a single-box logic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub input: usize,
    /// `(P, element)` for every outcome subset `P`, subsets in bitmask order.
    pub isomorphism: Vec<(Vec<usize>, ElemIdx)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PastingReport {
    pub side: Side,
    pub element_count: usize,
    /// `Σ_a (2^{|U_a|} − 2) + 2`
    pub expected_count: usize,
    pub block_sizes: Vec<usize>,
    pub blocks: Vec<Block>,
    pub blocks_boolean: bool,
    /// Distinct blocks share only `∅` and `Γ`.
    pub blocks_meet_in_bounds: bool,
    /// Nontrivial elements of distinct blocks have meet `∅` and join `Γ`.
    pub cross_block_bounds: bool,
    pub orthomodular_lattice: bool,
}

impl PastingReport {
    pub fn passed(&self) -> bool {
        self.element_count == self.expected_count
            && self.block_sizes.len() == self.blocks.len()
            && self.blocks_boolean
            && self.blocks_meet_in_bounds
            && self.cross_block_bounds
            && self.orthomodular_lattice
    }
}

/// The logic of one box: all elements localized on `side`, built directly
/// from the scenario.
#[derive(Clone, Debug)]
pub struct SingleBoxLogic {
    pub side: Side,
    pub logic: Logic,
    pub report: PastingReport,
}

pub fn single_box_logic(spec: &BoxWorldSpec, side: Side, limits: &Limits) -> Result<SingleBoxLogic> {
    let gamma = GammaIndex::build(spec, limits)?;
    let mut block_sets: Vec<Vec<(Vec<usize>, BitSet)>> = Vec::new();
    for (input, labels) in spec.inputs(side).iter().enumerate() {
        let n = labels.len();
        let mut block = Vec::new();
        for mask in 0u64..1 << n {
            let outs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let set = if outs.is_empty() {
                gamma.empty()
            } else {
                gamma.localized(spec, &LocalizedSpec::new(side, input, outs.iter().copied()))?
            };
            block.push((outs, set));
        }
        block_sets.push(block);
    }
    let logic = Logic::from_family(gamma.size(), block_sets.iter().flatten().map(|(_, s)| s.clone()));
    let blocks: Vec<Block> = block_sets
        .iter()
        .enumerate()
        .map(|(input, b)| Block {
            input,
            isomorphism: b
                .iter()
                .map(|(outs, s)| (outs.clone(), logic.position(s).expect("member")))
                .collect(),
        })
        .collect();
    let members = |b: &Block| -> Vec<ElemIdx> {
        let mut v: Vec<ElemIdx> = b.isomorphism.iter().map(|&(_, e)| e).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let zero = logic.zero().expect("∅ present");
    let one = logic.one().expect("Γ present");
    let trivial = |e: ElemIdx| e == zero || e == one;

    let blocks_boolean = blocks.iter().all(|b| {
        let m = members(b);
        m.len() == 1 << spec.outcome_count(side, b.input) && is_boolean_sublogic(&logic, &m)
    });
    let mut blocks_meet_in_bounds = true;
    let mut cross_block_bounds = true;
    for (i, bi) in blocks.iter().enumerate() {
        for bj in &blocks[i + 1..] {
            let (mi, mj) = (members(bi), members(bj));
            for &p in mi.iter().filter(|&&p| !trivial(p)) {
                for &q in mj.iter().filter(|&&q| !trivial(q)) {
                    if p == q {
                        blocks_meet_in_bounds = false;
                    }
                    if logic.meet(p, q) != Some(zero) || logic.join(p, q) != Some(one) {
                        cross_block_bounds = false;
                    }
                }
            }
        }
    }
    let orthomodular_lattice = logic.is_lattice() && verify_axioms(&logic).all_passed();
    let expected_count = spec
        .outcome_counts(side)
        .iter()
        .map(|&n| (1usize << n) - 2)
        .sum::<usize>()
        + 2;
    let report = PastingReport {
        side,
        element_count: logic.len(),
        expected_count,
        block_sizes: blocks.iter().map(|b| members(b).len()).collect(),
        blocks,
        blocks_boolean,
        blocks_meet_in_bounds,
        cross_block_bounds,
        orthomodular_lattice,
    };
    Ok(SingleBoxLogic { side, logic, report })
}

/// Every element of the single-box logic lies in the full logic.
pub fn single_box_within(single: &SingleBoxLogic, full: &BoxLogic) -> bool {
    single.logic.elements().iter().all(|s| full.logic().contains(s))
}

/// Outcome of one exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Finding {
    fn new() -> Self {
        Self {
            passed: true,
            checked: 0,
            counterexample: None,
            note: None,
        }
    }

    fn fail(&mut self, msg: impl FnOnce() -> String) {
        if self.passed {
            self.passed = false;
            self.counterexample = Some(msg());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizedReport {
    /// Left- and right-localized pairs are compatible with the explicit
    /// `p1, q1, r` witness.
    pub cross_side: Finding,
    /// Same-side proper pairs are compatible iff they share an input, with
    /// meets and joins as tabulated and the distributivity certificate for
    /// different inputs.
    pub same_side: Finding,
    /// Families of pairwise-compatible localized elements are compatible
    /// through the constructive partition.
    pub families: Finding,
}

impl LocalizedReport {
    pub fn passed(&self) -> bool {
        self.cross_side.passed && self.same_side.passed && self.families.passed
    }
}

/// Families larger than this many candidates per (left input, right input)
/// are restricted to at most three members.
const FAMILY_ENUM_LIMIT: u32 = 16;

pub fn verify_localized_propositions(bl: &BoxLogic, limits: &Limits) -> Result<LocalizedReport> {
    let logic = bl.logic();
    let spec = bl.spec();
    let zero = logic.zero().expect("∅");
    let one = logic.one().expect("Γ");
    let all = LocalizedSpec::enumerate(spec, false);
    let proper = LocalizedSpec::enumerate(spec, true);
    let idx = |loc: &LocalizedSpec| bl.localized(loc);
    let atoms_union = |a: usize, alphas: &[usize], b: usize, betas: &[usize]| -> Result<ElemIdx> {
        let mut u = BitSet::empty(logic.ground_size());
        for &alpha in alphas {
            for &beta in betas {
                u.union_with(logic.element(bl.atom_index(AtomId::new(a, alpha, b, beta)).expect("atom")));
            }
        }
        Ok(logic.lookup(&u)?)
    };
    let local_or_bound = |side: Side, input: usize, outs: Vec<usize>| -> Result<ElemIdx> {
        if outs.is_empty() {
            Ok(zero)
        } else {
            idx(&LocalizedSpec::new(side, input, outs))
        }
    };

    let mut cross = Finding::new();
    for p in all.iter().filter(|l| l.side == Side::Left) {
        for q in all.iter().filter(|l| l.side == Side::Right) {
            cross.checked += 1;
            let (pi, qi) = (idx(p)?, idx(q)?);
            let nu = spec.outcome_count(Side::Left, p.input);
            let nv = spec.outcome_count(Side::Right, q.input);
            let not_p: Vec<usize> = (0..nu).filter(|o| !p.outcomes.contains(o)).collect();
            let not_q: Vec<usize> = (0..nv).filter(|o| !q.outcomes.contains(o)).collect();
            let expected = CompatibilityWitness {
                p1: atoms_union(p.input, &p.outcomes, q.input, &not_q)?,
                q1: atoms_union(p.input, &not_p, q.input, &q.outcomes)?,
                r: atoms_union(p.input, &p.outcomes, q.input, &q.outcomes)?,
            };
            let found = are_compatible(logic, pi, qi);
            if found != Some(expected) {
                cross.fail(|| format!("{p} and {q}: expected {expected:?}, found {found:?}"));
            }
        }
    }

    let mut same = Finding::new();
    for p in &proper {
        for q in proper.iter().filter(|q| q.side == p.side) {
            same.checked += 1;
            let (pi, qi) = (idx(p)?, idx(q)?);
            let compatible = are_compatible(logic, pi, qi).is_some();
            if compatible != (p.input == q.input) {
                same.fail(|| format!("{p} and {q}: compatible = {compatible}"));
            }
            let (meet, join) = if p.input == q.input {
                let n = spec.outcome_count(p.side, p.input);
                let inter: Vec<usize> = p.outcomes.iter().copied().filter(|o| q.outcomes.contains(o)).collect();
                let union: Vec<usize> = (0..n)
                    .filter(|o| p.outcomes.contains(o) || q.outcomes.contains(o))
                    .collect();
                (
                    local_or_bound(p.side, p.input, inter)?,
                    idx(&LocalizedSpec::new(p.side, p.input, union))?,
                )
            } else {
                (zero, one)
            };
            if logic.meet(pi, qi) != Some(meet) || logic.join(pi, qi) != Some(join) {
                same.fail(|| format!("{p} and {q}: meet/join differ from the case table"));
            }
            if p.input != q.input {
                // p ∨ (p⊥ ∧ q) = p while (p ∨ p⊥) ∧ (p ∨ q) = Γ
                let pc = logic.complement_of(pi).expect("complement");
                let lhs = logic.meet(pc, qi).and_then(|m| logic.join(pi, m));
                let rhs = logic
                    .join(pi, pc)
                    .zip(logic.join(pi, qi))
                    .and_then(|(x, y)| logic.meet(x, y));
                if lhs != Some(pi) || rhs != Some(one) {
                    same.fail(|| format!("{p} and {q}: distributivity certificate missing"));
                }
            }
        }
    }

    let mut families = Finding::new();
    for a in 0..spec.input_count(Side::Left) {
        for b in 0..spec.input_count(Side::Right) {
            let candidates: Vec<ElemIdx> = proper
                .iter()
                .filter(|l| (l.side == Side::Left && l.input == a) || (l.side == Side::Right && l.input == b))
                .map(idx)
                .collect::<Result<_>>()?;
            let n = candidates.len() as u32;
            let restricted = n > FAMILY_ENUM_LIMIT;
            let max_size = if restricted { 3 } else { limits.compatible_set as u32 };
            if restricted {
                families.note = Some("families restricted to at most three members".into());
            }
            for mask in 1u64..1 << n {
                if mask.count_ones() > max_size {
                    continue;
                }
                let family: Vec<ElemIdx> = (0..n as usize)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| candidates[i])
                    .collect();
                families.checked += 1;
                match is_compatible_set(bl, &family, limits)? {
                    Some(part) if family.len() == 1 || part.method == PartitionMethod::LocalizedConstruction => {
                        let boolean = boolean_sublogic_containing(bl, &family, limits)?;
                        let ok = boolean
                            .as_ref()
                            .is_some_and(|k| family.iter().all(|e| k.elements.binary_search(e).is_ok()));
                        if !ok {
                            families.fail(|| format!("family {family:?}: no Boolean sublogic"));
                        }
                    }
                    other => families.fail(|| format!("family {family:?}: {other:?}")),
                }
            }
        }
    }

    Ok(LocalizedReport {
        cross_side: cross,
        same_side: same,
        families,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chsh() -> BoxLogic {
        BoxLogic::build(&BoxWorldSpec::chsh(), &Limits::default()).unwrap()
    }

    fn loc(bl: &BoxLogic, side: Side, input: usize, outs: &[usize]) -> ElemIdx {
        bl.localized(&LocalizedSpec::new(side, input, outs.iter().copied()))
            .unwrap()
    }

    fn atom(bl: &BoxLogic, a: usize, alpha: usize, b: usize, beta: usize) -> ElemIdx {
        bl.atom_index(AtomId::new(a, alpha, b, beta)).unwrap()
    }

    #[test]
    fn identical_elements_are_compatible() {
        let bl = chsh();
        let p = loc(&bl, Side::Left, 0, &[0]);
        assert_eq!(
            are_compatible(bl.logic(), p, p),
            Some(CompatibilityWitness { p1: 0, q1: 0, r: p })
        );
    }

    #[test]
    fn cross_side_witness() {
        let bl = chsh();
        let p = loc(&bl, Side::Left, 0, &[0]);
        let q = loc(&bl, Side::Right, 0, &[0]);
        let w = are_compatible(bl.logic(), p, q).unwrap();
        assert_eq!(w.p1, atom(&bl, 0, 0, 0, 1));
        assert_eq!(w.q1, atom(&bl, 0, 1, 0, 0));
        assert_eq!(w.r, atom(&bl, 0, 0, 0, 0));
    }

    #[test]
    fn different_inputs_incompatible() {
        let bl = chsh();
        let p = loc(&bl, Side::Left, 0, &[0]);
        let q = loc(&bl, Side::Left, 1, &[0]);
        assert_eq!(are_compatible(bl.logic(), p, q), None);
        assert_eq!(is_compatible_set(&bl, &[p, q], &Limits::default()).unwrap(), None);
        assert_eq!(
            boolean_sublogic_containing(&bl, &[p, q], &Limits::default()).unwrap(),
            None
        );
    }

    #[test]
    fn compatibility_symmetric_reflexive_and_orthogonal() {
        let bl = chsh();
        let l = bl.logic();
        for p in 0..l.len() {
            assert!(are_compatible(l, p, p).is_some());
            for q in 0..l.len() {
                let pq = are_compatible(l, p, q).is_some();
                assert_eq!(pq, are_compatible(l, q, p).is_some());
                if l.element(p).is_disjoint(l.element(q)) {
                    assert_eq!(
                        are_compatible(l, p, q),
                        Some(CompatibilityWitness { p1: p, q1: q, r: 0 })
                    );
                }
                if l.leq(p, q) && l.contains(&l.element(q).difference(l.element(p))) {
                    assert!(pq);
                }
            }
        }
    }

    #[test]
    fn localized_family_uses_construction() {
        let bl = chsh();
        let fam = [
            loc(&bl, Side::Left, 0, &[0]),
            loc(&bl, Side::Left, 0, &[1]),
            loc(&bl, Side::Right, 0, &[0]),
        ];
        let part = is_compatible_set(&bl, &fam, &Limits::default()).unwrap().unwrap();
        assert_eq!(part.method, PartitionMethod::LocalizedConstruction);
        assert_eq!(part.representation.len(), 3);
        let k = boolean_sublogic_containing(&bl, &fam, &Limits::default())
            .unwrap()
            .unwrap();
        assert!(k.elements.len() <= 1 << part.parts.len().max(k.generators.len()));
        assert!(fam.iter().all(|e| k.elements.contains(e)));
        assert!(is_boolean_sublogic(bl.logic(), &k.elements));
    }

    #[test]
    fn single_element_partition_and_sublogic() {
        let bl = chsh();
        let p = atom(&bl, 1, 0, 1, 1);
        let part = is_compatible_set(&bl, &[p], &Limits::default()).unwrap().unwrap();
        assert_eq!(part.parts, vec![p]);
        let k = boolean_sublogic_containing(&bl, &[p], &Limits::default())
            .unwrap()
            .unwrap();
        assert_eq!(k.elements.len(), 4);
        assert!(is_boolean_sublogic(bl.logic(), &k.elements));
        assert!(is_compatible_set(&bl, &[0; 13], &Limits::default()).is_err());
    }

    #[test]
    fn pasting_reports() {
        let chsh = single_box_logic(&BoxWorldSpec::chsh(), Side::Left, &Limits::default()).unwrap();
        assert_eq!(chsh.logic.len(), 6);
        assert_eq!(chsh.report.block_sizes, vec![4, 4]);
        assert!(chsh.report.passed(), "{:?}", chsh.report);
        assert!(!chsh.logic.is_boolean());

        let spec = BoxWorldSpec::with_outcome_counts(&[3, 2], &[2]).unwrap();
        let s = single_box_logic(&spec, Side::Left, &Limits::default()).unwrap();
        assert_eq!(s.logic.len(), 10);
        assert!(s.report.passed());

        let spec = BoxWorldSpec::with_outcome_counts(&[2], &[3]).unwrap();
        let s = single_box_logic(&spec, Side::Right, &Limits::default()).unwrap();
        assert_eq!(s.logic.len(), 8);
        assert!(s.logic.is_boolean());

        let full = BoxLogic::build(&BoxWorldSpec::chsh(), &Limits::default()).unwrap();
        assert!(single_box_within(&chsh, &full));
    }

    #[test]
    fn chsh_localized_propositions() {
        let bl = chsh();
        let r = verify_localized_propositions(&bl, &Limits::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.cross_side.checked, 36);
    }
}
