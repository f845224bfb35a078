mod common;

use boxlogic::rational::{self, Rational};
use boxlogic::states::{
    enumerate_vertices, is_vertex, ns_polytope, point_state, pr_from_state, pr_from_state_with, state_from_pr,
    state_from_pr_with, validate_pr_state, DecompositionTable, LogicState, PrState, ViolationKind,
};
use boxlogic::{AtomId, BoxWorldSpec, Limits, LocalizedSpec, Side};
use common::{build, spec};
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::sync::OnceLock;

fn chsh_vertices() -> &'static [PrState] {
    static V: OnceLock<Vec<PrState>> = OnceLock::new();
    V.get_or_init(|| {
        let s = BoxWorldSpec::chsh();
        enumerate_vertices(&ns_polytope(&s, &Limits::default()).unwrap()).states(&s)
    })
}

#[test]
fn uniform_values_agree_across_decompositions() {
    let s = BoxWorldSpec::chsh();
    let bl = build(&s);
    let rho = state_from_pr(&bl, &PrState::uniform(&s)).unwrap();
    let p = bl.localized(&LocalizedSpec::new(Side::Left, 0, [0])).unwrap();
    assert_eq!(rho.value(p), &rational::ratio(1, 2));
    for d in bl.atomic_decompositions(p) {
        let sum: Rational = d.iter().map(|id| PrState::uniform(&s).get(*id).clone()).sum();
        assert_eq!(sum, rational::ratio(1, 2));
    }
    assert!(rho.value(bl.logic().zero().unwrap()).is_zero());
    assert!(rho.value(bl.logic().one().unwrap()).is_one());
}

#[test]
fn pr_box_values() {
    let s = BoxWorldSpec::chsh();
    let bl = build(&s);
    let rho = state_from_pr(&bl, &PrState::pr_box(&s, 0, 0, 0)).unwrap();
    let atom = |a, alpha, b, beta| bl.atom_index(AtomId::new(a, alpha, b, beta)).unwrap();
    assert_eq!(rho.value(atom(0, 0, 0, 0)), &rational::ratio(1, 2));
    assert!(rho.value(atom(0, 0, 1, 1)).is_zero());
}

#[test]
fn bumped_table_signals() {
    let s = BoxWorldSpec::chsh();
    let mut values = PrState::uniform(&s).values().to_vec();
    let ids = s.atom_ids();
    let at = |id: AtomId| ids.iter().position(|x| *x == id).unwrap();
    values[at(AtomId::new(1, 0, 1, 0))] += rational::ratio(1, 4);
    values[at(AtomId::new(1, 0, 1, 1))] -= rational::ratio(1, 4);
    let p = PrState::from_values(&s, values).unwrap();
    let v = validate_pr_state(&p);
    assert!(!v.is_empty());
    assert!(v
        .iter()
        .all(|x| x.kind != ViolationKind::Normalization && x.kind != ViolationKind::Negative));
    let bl = build(&s);
    assert!(state_from_pr(&bl, &p).is_err());
}

#[test]
fn fifty_vertex_round_trips() {
    let s = BoxWorldSpec::chsh();
    let bl = build(&s);
    let table = DecompositionTable::new(&bl);
    let vs = chsh_vertices();
    for i in 0..50 {
        let p = &vs[(i * 7) % vs.len()];
        let rho = state_from_pr_with(&bl, &table, p).unwrap();
        assert_eq!(&pr_from_state_with(&bl, &table, &rho).unwrap(), p);
    }
}

#[test]
fn point_states_are_deterministic_vertices() {
    let s = spec(&[2, 3], &[2]);
    let bl = build(&s);
    let h = ns_polytope(&s, &Limits::default()).unwrap();
    for omega in 0..bl.gamma().size() {
        let rho = point_state(&bl, omega).unwrap();
        assert!(rho.is_two_valued());
        let l = bl.logic();
        for e in 0..l.len() {
            let c = l.complement_of(e).unwrap();
            assert_eq!(rho.value(e) + rho.value(c), Rational::one());
        }
        let p = pr_from_state(&bl, &rho).unwrap();
        assert!(p.is_deterministic());
        assert!(is_vertex(&h, p.values()));
        let (x, y) = bl.gamma().point(omega);
        assert_eq!(p, PrState::deterministic(&s, &x, &y));
    }
    assert!(point_state(&bl, bl.gamma().size()).is_err());
}

#[test]
fn non_states_are_rejected() {
    let s = BoxWorldSpec::chsh();
    let bl = build(&s);
    let n = bl.logic().len();
    let half = LogicState::new(vec![rational::ratio(1, 2); n]);
    assert!(pr_from_state(&bl, &half).is_err());
    let short = LogicState::new(vec![Rational::zero(); 3]);
    assert!(pr_from_state(&bl, &short).is_err());
}

fn mixture() -> impl Strategy<Value = PrState> {
    prop::collection::vec((0usize..24, 1i64..=20), 1..=5).prop_map(|parts| {
        let total: i64 = parts.iter().map(|p| p.1).sum();
        let vs = chsh_vertices();
        let weighted: Vec<(Rational, &PrState)> = parts
            .iter()
            .map(|&(i, w)| (rational::ratio(w, total), &vs[i]))
            .collect();
        PrState::mix(&weighted)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixtures_of_vertices_are_valid(p in mixture()) {
        prop_assert!(validate_pr_state(&p).is_empty());
    }

    #[test]
    fn correspondence_round_trips(p in mixture()) {
        let bl = build(p.spec());
        let rho = state_from_pr(&bl, &p).unwrap();
        let back = pr_from_state(&bl, &rho).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(state_from_pr(&bl, &back).unwrap(), rho);
    }

    #[test]
    fn states_are_monotone(p in mixture()) {
        let bl = build(p.spec());
        let rho = state_from_pr(&bl, &p).unwrap();
        let l = bl.logic();
        for a in 0..l.len() {
            for b in 0..l.len() {
                if l.leq(a, b) {
                    prop_assert!(rho.value(a) <= rho.value(b));
                }
            }
        }
    }

    #[test]
    fn marginal_elements_take_the_marginal(p in mixture()) {
        let s = p.spec().clone();
        let bl = build(&s);
        let rho = state_from_pr(&bl, &p).unwrap();
        for a in 0..2 {
            for alpha in 0..2 {
                let e = bl.localized(&LocalizedSpec::new(Side::Left, a, [alpha])).unwrap();
                for b in 0..2 {
                    let m: Rational = (0..2).map(|beta| p.get(AtomId::new(a, alpha, b, beta)).clone()).sum();
                    prop_assert_eq!(rho.value(e), &m);
                }
            }
        }
    }

    #[test]
    fn state_mixing_commutes_with_the_correspondence(p in mixture(), q in mixture(), w in 0i64..=10) {
        let bl = build(p.spec());
        let lambda = rational::ratio(w, 10);
        let rp = state_from_pr(&bl, &p).unwrap();
        let rq = state_from_pr(&bl, &q).unwrap();
        let mixed = PrState::mix(&[(lambda.clone(), &p), (Rational::one() - &lambda, &q)]);
        prop_assert_eq!(state_from_pr(&bl, &mixed).unwrap(), rp.mix(&rq, &lambda));
    }
}
