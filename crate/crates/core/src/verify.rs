//! The consolidated verification suite run by `boxlogic verify`.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitSet;
use crate::compat::{single_box_logic, single_box_within, Finding};
use crate::error::Result;
use crate::logic::{verify_axioms, AxiomCheck, BoxLogic, ElemIdx, EvenSetLogic, Logic};
use crate::observables::{heisenberg_infimum_witness, make_observable, variance, Observable};
use crate::rational::{self, Rational};
use crate::scenario::{BoxWorldSpec, Limits, Side};
use crate::states::{
    check_order_determining, enumerate_vertices, ns_polytope, point_state, pr_from_state_with, sample_states,
    state_from_pr_with, DecompositionTable, LogicState, PrState, VertexClass,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub limits: Limits,
    pub seed: u64,
    /// Random states checked on top of the polytope vertices.
    pub samples: usize,
    /// Upper bound on observables enumerated for the uncertainty check.
    pub observables: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            limits: Limits::default(),
            seed: 0,
            samples: 100,
            observables: 64,
        }
    }
}

/// One named result with a slot for the first counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
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

    fn from_axiom(c: &AxiomCheck) -> Self {
        Self {
            name: format!("axiom {:?}", c.axiom),
            passed: c.passed,
            checked: c.checked,
            counterexample: c.counterexample.clone(),
            note: c.note.clone(),
        }
    }

    fn from_finding(name: &str, f: &Finding) -> Self {
        Self {
            name: name.to_string(),
            passed: f.passed,
            checked: f.checked,
            counterexample: f.counterexample.clone(),
            note: f.note.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicSummary {
    pub sample_points: usize,
    pub elements: usize,
    pub atoms: usize,
    pub atomistic: bool,
    pub lattice: bool,
    pub boolean: bool,
}

impl LogicSummary {
    pub fn of(logic: &Logic) -> Self {
        Self {
            sample_points: logic.ground_size(),
            elements: logic.len(),
            atoms: logic.atoms().len(),
            atomistic: logic.is_atomistic(),
            lattice: logic.is_lattice(),
            boolean: logic.is_boolean(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeSummary {
    pub variables: usize,
    pub equalities: usize,
    pub vertices: usize,
    pub deterministic: usize,
    pub nondeterministic: usize,
    pub affine_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub logic: LogicSummary,
    pub polytope: Option<PolytopeSummary>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_suite(spec: &BoxWorldSpec, opts: &SuiteOptions) -> Result<SuiteReport> {
    let bl = BoxLogic::build(spec, &opts.limits)?;
    let logic = bl.logic();
    let mut checks: Vec<Check> = verify_axioms(logic).checks.iter().map(Check::from_axiom).collect();
    checks.push(check_observation(&bl));
    checks.push(check_order_classification(&bl));

    let loc = crate::compat::verify_localized_propositions(&bl, &opts.limits)?;
    checks.push(Check::from_finding(
        "localized cross-side compatibility",
        &loc.cross_side,
    ));
    checks.push(Check::from_finding("localized same-side compatibility", &loc.same_side));
    checks.push(Check::from_finding("localized family compatibility", &loc.families));
    for side in [Side::Left, Side::Right] {
        checks.push(check_pasting(&bl, side, &opts.limits)?);
    }

    let h = ns_polytope(spec, &opts.limits)?;
    let v = enumerate_vertices(&h);
    let polytope = PolytopeSummary {
        variables: h.variables.len(),
        equalities: h.equalities.len(),
        vertices: v.vertices.len(),
        deterministic: v.count(VertexClass::Deterministic),
        nondeterministic: v.count(VertexClass::Nondeterministic),
        affine_dimension: v.affine_dimension,
    };
    let vertices = v.states(spec);
    let table = DecompositionTable::new(&bl);
    checks.push(check_correspondence(&bl, &table, &vertices, opts));

    let order = check_order_determining(&bl, &table, &vertices)?;
    let mut c = Check::new("order determining");
    c.checked = order.pairs_checked;
    c.passed = order.passed();
    c.counterexample = order.failures.first().map(|(p, q)| format!("p={p} q={q}"));
    c.note = Some(format!("{} pairs with p ⊆ q skipped", order.pairs_skipped_by_inclusion));
    checks.push(c);

    let (witness, contrast) = check_uncertainty(&bl, opts)?;
    checks.push(witness);
    checks.push(contrast);

    Ok(SuiteReport {
        logic: LogicSummary::of(logic),
        polytope: Some(polytope),
        checks,
    })
}

/// Every nonzero element is a disjoint union of atoms.
fn check_observation(bl: &BoxLogic) -> Check {
    let logic = bl.logic();
    let mut c = Check::new("atomic decomposition");
    for e in 0..logic.len() {
        let set = logic.element(e);
        if set.is_empty() {
            continue;
        }
        c.checked += 1;
        let ok = bl.canonical_decomposition_positions(e).is_some_and(|ks| {
            let mut u = BitSet::empty(logic.ground_size());
            ks.iter().all(|&k| {
                let a = logic.element(bl.atom_element(k));
                let disjoint = u.is_disjoint(a);
                u.union_with(a);
                disjoint
            }) && u == *set
        });
        if !ok {
            c.fail(|| format!("element {}", set.to_hex()));
        }
    }
    c
}

/// Every element above an atom splits off one of the four parts with a
/// remainder in the logic.
fn check_order_classification(bl: &BoxLogic) -> Check {
    let logic = bl.logic();
    let mut c = Check::new("classification above atoms");
    for &p in bl.atom_elements() {
        for q in 0..logic.len() {
            if !logic.leq(p, q) {
                continue;
            }
            c.checked += 1;
            let ok = bl.classify_above_atom(p, q).is_ok_and(|cl| {
                let part = bl.classification_part(&cl);
                let rest = logic.element(cl.remainder);
                part.is_disjoint(rest) && part.union(rest) == *logic.element(q) && part.is_subset(logic.element(q))
            });
            if !ok {
                c.fail(|| {
                    format!(
                        "atom {} element {}",
                        logic.element(p).to_hex(),
                        logic.element(q).to_hex()
                    )
                });
            }
        }
    }
    c
}

fn check_pasting(bl: &BoxLogic, side: Side, limits: &Limits) -> Result<Check> {
    let single = single_box_logic(bl.spec(), side, limits)?;
    let r = &single.report;
    let mut c = Check::new(&format!("single-box pasting {side}"));
    c.checked = r.element_count as u64;
    c.passed = r.passed() && single_box_within(&single, bl);
    if !c.passed {
        c.counterexample = Some(format!(
            "count {} expected {}, boolean {}, bounds {}/{}, lattice {}",
            r.element_count,
            r.expected_count,
            r.blocks_boolean,
            r.blocks_meet_in_bounds,
            r.cross_block_bounds,
            r.orthomodular_lattice
        ));
    }
    c.note = Some(format!("{} elements, block sizes {:?}", r.element_count, r.block_sizes));
    Ok(c)
}

/// Tables to states and back, exactly, over every vertex plus seeded
/// random mixtures.
fn check_correspondence(bl: &BoxLogic, table: &DecompositionTable, vertices: &[PrState], opts: &SuiteOptions) -> Check {
    let mut c = Check::new("state correspondence");
    let samples = sample_states(vertices, opts.samples, opts.seed);
    for p in vertices.iter().chain(&samples) {
        c.checked += 1;
        match state_from_pr_with(bl, table, p) {
            Err(e) => c.fail(|| format!("{e}")),
            Ok(rho) => match pr_from_state_with(bl, table, &rho) {
                Err(e) => c.fail(|| format!("{e}")),
                Ok(back) => {
                    if back != *p {
                        c.fail(|| "table round trip differs".to_string());
                    }
                    match state_from_pr_with(bl, table, &back) {
                        Ok(again) if again == rho => {}
                        _ => c.fail(|| "state round trip differs".to_string()),
                    }
                }
            },
        }
    }
    c.note = Some(format!(
        "{} vertices and {} sampled mixtures",
        vertices.len(),
        samples.len()
    ));
    c
}

/// All partitions of `n` items as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            if i == 0 && b > 0 {
                break;
            }
            cur.push(b);
            go(i + 1, n, max.max(b), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(0, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Observables whose supports are unions of the atoms of one input pair,
/// with the value `i` on block `i`.
pub fn single_pair_observables(bl: &BoxLogic) -> Result<Vec<Observable>> {
    let spec = bl.spec();
    let logic = bl.logic();
    let mut out = Vec::new();
    for a in 0..spec.input_count(Side::Left) {
        for b in 0..spec.input_count(Side::Right) {
            let ks: Vec<usize> = (0..bl.atom_ids().len())
                .filter(|&k| bl.atom_ids()[k].a == a && bl.atom_ids()[k].b == b)
                .collect();
            for rgs in set_partitions(ks.len()) {
                let blocks = rgs.iter().max().map_or(0, |m| m + 1);
                let mut sets = vec![BitSet::empty(logic.ground_size()); blocks];
                for (i, &k) in ks.iter().enumerate() {
                    sets[rgs[i]].union_with(logic.element(bl.atom_element(k)));
                }
                let assignment: Vec<(Rational, ElemIdx)> = sets
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Ok((rational::int(i as i64), logic.lookup(s)?)))
                    .collect::<Result<_>>()?;
                out.push(make_observable(logic, assignment)?);
            }
        }
    }
    Ok(out)
}

/// Zero variance products at point states for every pair of single-pair
/// observables, and strictly positive products at the uniform state for
/// nonconstant pairs.
fn check_uncertainty(bl: &BoxLogic, opts: &SuiteOptions) -> Result<(Check, Check)> {
    let mut all = single_pair_observables(bl)?;
    let total = all.len();
    let mut witness = Check::new("zero-dispersion witness");
    if total > opts.observables {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        all.shuffle(&mut rng);
        all.truncate(opts.observables);
        witness.note = Some(format!("{} of {total} single-pair observables, seeded", all.len()));
    } else {
        witness.note = Some(format!("all {total} single-pair observables"));
    }
    let points: Vec<LogicState> = (0..bl.gamma().size().min(64))
        .map(|w| point_state(bl, w))
        .collect::<Result<_, _>>()?;
    let table = DecompositionTable::new(bl);
    let uniform = state_from_pr_with(bl, &table, &PrState::uniform(bl.spec()))?;
    let mut contrast = Check::new("uniform state dispersion");
    for x in &all {
        for y in &all {
            witness.checked += 1;
            let w = heisenberg_infimum_witness(bl, x, y)?;
            let every_point = points.iter().all(|s| (variance(x, s) * variance(y, s)).is_zero());
            if !w.product.is_zero() || !every_point {
                witness.fail(|| format!("observables {:?} / {:?}", x.outcomes(), y.outcomes()));
            }
            if !x.is_constant() && !y.is_constant() {
                contrast.checked += 1;
                let prod = variance(x, &uniform) * variance(y, &uniform);
                if !prod.is_positive() {
                    contrast.fail(|| format!("product {}", rational::format(&prod)));
                }
            }
        }
    }
    Ok((witness, contrast))
}

/// Expected classification of the even-subset fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub k: usize,
    pub logic: LogicSummary,
    pub orthomodular: bool,
    pub distributive: bool,
    /// First pair of elements without a join, as hex.
    pub pair_without_join: Option<(String, String)>,
    pub checks: Vec<Check>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn fixture_report(k: usize) -> Result<FixtureReport> {
    let fixture = EvenSetLogic::new(k)?;
    let logic = fixture.logic();
    let axioms = verify_axioms(logic);
    let summary = LogicSummary::of(logic);
    let mut pair_without_join = None;
    'outer: for p in 0..logic.len() {
        for q in p + 1..logic.len() {
            if logic.join(p, q).is_none() {
                pair_without_join = Some((logic.element(p).to_hex(), logic.element(q).to_hex()));
                break 'outer;
            }
        }
    }
    let mut checks: Vec<Check> = axioms.checks.iter().map(Check::from_axiom).collect();
    let mut count = Check::new("element count");
    count.checked = 1;
    let expected = 1usize << (2 * k - 1);
    if logic.len() != expected {
        count.fail(|| format!("{} elements, expected {expected}", logic.len()));
    }
    checks.push(count);
    let mut class = Check::new("classification");
    class.checked = 1;
    let ok = match k {
        1 => summary.boolean,
        2 => summary.lattice && !summary.boolean,
        _ => pair_without_join.is_some() && !summary.lattice,
    };
    if !ok {
        class.fail(|| format!("lattice {} boolean {}", summary.lattice, summary.boolean));
    }
    checks.push(class);
    Ok(FixtureReport {
        k,
        orthomodular: axioms.all_passed(),
        distributive: summary.boolean,
        logic: summary,
        pair_without_join,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_count_bell_numbers() {
        let bell: Vec<usize> = (1..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, [1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn chsh_suite_passes() {
        let r = run_suite(&BoxWorldSpec::chsh(), &SuiteOptions::default()).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
            assert!(c.checked > 0, "{c:?}");
        }
        let p = r.polytope.unwrap();
        assert_eq!((p.vertices, p.affine_dimension), (24, 8));
        assert_eq!(r.logic.atoms, 16);
    }

    #[test]
    fn fixtures() {
        for k in 1..=3 {
            let r = fixture_report(k).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
