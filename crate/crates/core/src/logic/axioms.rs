use serde::Serialize;

use super::{ElemIdx, Logic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// Greatest and least elements exist.
    L1,
    /// Orthocomplement reverses order.
    L2,
    /// Orthocomplement is an involution.
    L3,
    /// Orthogonal families have a supremum.
    L4,
    /// Orthomodular law.
    L5,
    /// Contains the empty set.
    C1,
    /// Closed under set complement.
    C2,
    /// Closed under unions of disjoint members.
    C3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    /// Number of elements, pairs or families examined.
    pub checked: u64,
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is checked")
    }
}

struct Check {
    axiom: Axiom,
    checked: u64,
    counterexample: Option<String>,
    note: Option<String>,
}

impl Check {
    fn new(axiom: Axiom) -> Self {
        Self {
            axiom,
            checked: 0,
            counterexample: None,
            note: None,
        }
    }

    fn fail(&mut self, msg: String) {
        if self.counterexample.is_none() {
            self.counterexample = Some(msg);
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            axiom: self.axiom,
            passed: self.counterexample.is_none(),
            checked: self.checked,
            counterexample: self.counterexample,
            note: self.note,
        }
    }
}

/// Checks L1–L5 (with set complement as the orthocomplement map) and
/// C1–C3 over every element and pair of elements.
///
/// Disjoint families are reduced to pairs: when the join of every
/// orthogonal pair is its set union and lies in the family, any finite
/// orthogonal family has its union as supremum by chaining.
pub fn verify_axioms(logic: &Logic) -> AxiomReport {
    let n = logic.len();
    let el = |i: ElemIdx| logic.element(i).to_hex();
    let comp = |i: ElemIdx| logic.complement_of(i);

    let mut l1 = Check::new(Axiom::L1);
    let mut l2 = Check::new(Axiom::L2);
    let mut l3 = Check::new(Axiom::L3);
    let mut l4 = Check::new(Axiom::L4);
    let mut l5 = Check::new(Axiom::L5);
    let mut c1 = Check::new(Axiom::C1);
    let mut c2 = Check::new(Axiom::C2);
    let mut c3 = Check::new(Axiom::C3);

    l1.checked = 2 * n as u64;
    let greatest = (0..n).find(|&g| (0..n).all(|r| logic.leq(r, g)));
    let least = (0..n).find(|&z| (0..n).all(|r| logic.leq(z, r)));
    if greatest.is_none() {
        l1.fail("no greatest element".into());
    }
    if least.is_none() {
        l1.fail("no least element".into());
    }

    c1.checked = 1;
    if logic.zero().is_none() {
        c1.fail("empty set missing".into());
    }

    for p in 0..n {
        c2.checked += 1;
        l3.checked += 1;
        match comp(p) {
            None => {
                c2.fail(format!("complement of {} missing", el(p)));
                l3.fail(format!("{} has no orthocomplement", el(p)));
            }
            Some(cp) => {
                if comp(cp) != Some(p) {
                    l3.fail(format!("complement of complement of {} differs", el(p)));
                }
            }
        }
    }

    l4.note = Some("orthogonal families reduced to pairs; pair joins must equal set unions".into());
    c3.note = Some("disjoint families reduced to pairs by chaining".into());
    for p in 0..n {
        for q in 0..n {
            let (sp, sq) = (logic.element(p), logic.element(q));
            if sp.is_disjoint(sq) {
                c3.checked += 1;
                if !logic.contains(&sp.union(sq)) {
                    c3.fail(format!("union of disjoint {} and {} missing", el(p), el(q)));
                }
            }
            // orthogonality is the order relation p ≤ q⊥
            if let Some(cq) = comp(q) {
                if logic.leq(p, cq) {
                    l4.checked += 1;
                    match logic.join(p, q) {
                        None => l4.fail(format!("orthogonal {} and {} have no join", el(p), el(q))),
                        Some(j) if *logic.element(j) != sp.union(sq) => {
                            l4.fail(format!("join of orthogonal {} and {} is not their union", el(p), el(q)))
                        }
                        Some(_) => {}
                    }
                }
            }
            if logic.leq(p, q) {
                l2.checked += 1;
                match (comp(p), comp(q)) {
                    (Some(cp), Some(cq)) => {
                        if !logic.leq(cq, cp) {
                            l2.fail(format!("{} ≤ {} but complements are not reversed", el(p), el(q)));
                        }
                    }
                    _ => l2.fail(format!("{} ≤ {} but a complement is missing", el(p), el(q))),
                }

                l5.checked += 1;
                let ok = comp(p).and_then(|cp| logic.meet(q, cp)).and_then(|m| logic.join(p, m)) == Some(q);
                if !ok {
                    l5.fail(format!("orthomodular law fails for {} ≤ {}", el(p), el(q)));
                }
            }
        }
    }

    AxiomReport {
        checks: [l1, l2, l3, l4, l5, c1, c2, c3]
            .into_iter()
            .map(Check::finish)
            .collect(),
    }
}
