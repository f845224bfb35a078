use std::collections::HashSet;

use crate::bits::BitSet;
use crate::error::LogicError;

/// Smallest family containing `∅` and `generators` that is closed under set
/// complement and under unions of pairwise-disjoint members.
///
/// Works with a growing generator list: every member is kept as a disjoint
/// union of generators, so closing under "member ∪ disjoint generator"
/// reaches every disjoint union of members. A complement that is not yet
/// present becomes a new generator. Returned in discovery order; wrap in
/// [`super::Logic::from_family`] for the canonical table.
pub fn close_family(
    ground: usize,
    generators: impl IntoIterator<Item = BitSet>,
    cap: usize,
) -> Result<Vec<BitSet>, LogicError> {
    let mut table = Table {
        items: Vec::new(),
        seen: HashSet::new(),
        cap,
    };
    table.push(BitSet::empty(ground))?;
    let mut gens: Vec<BitSet> = Vec::new();
    for g in generators {
        assert_eq!(g.len(), ground, "generator width differs from ground size");
        table.push(g.clone())?;
        if !g.is_empty() && !gens.contains(&g) {
            gens.push(g);
        }
    }
    // done[i]: generators already combined with table.items[i]
    let mut done: Vec<usize> = Vec::new();

    loop {
        let mut i = 0;
        while i < table.items.len() {
            if done.len() <= i {
                done.push(0);
            }
            while done[i] < gens.len() {
                let g = &gens[done[i]];
                if table.items[i].is_disjoint(g) {
                    let u = table.items[i].union(g);
                    table.push(u)?;
                }
                done[i] += 1;
            }
            i += 1;
        }

        let mut missing: Vec<BitSet> = table
            .items
            .iter()
            .map(BitSet::complement)
            .filter(|c| !table.seen.contains(c))
            .collect();
        if missing.is_empty() {
            return Ok(table.items);
        }
        missing.sort_by(|a, b| a.canonical_cmp(b));
        missing.dedup();
        for c in missing {
            table.push(c.clone())?;
            gens.push(c);
        }
    }
}

struct Table {
    items: Vec<BitSet>,
    seen: HashSet<BitSet>,
    cap: usize,
}

impl Table {
    fn push(&mut self, s: BitSet) -> Result<(), LogicError> {
        if self.seen.contains(&s) {
            return Ok(());
        }
        if self.items.len() >= self.cap {
            return Err(LogicError::ClosureBudgetExceeded { cap: self.cap });
        }
        self.seen.insert(s.clone());
        self.items.push(s);
        Ok(())
    }
}
