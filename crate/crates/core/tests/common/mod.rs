#![allow(dead_code)]

use boxlogic::{BoxLogic, BoxWorldSpec, Limits};
use proptest::prelude::*;

pub fn spec(left: &[usize], right: &[usize]) -> BoxWorldSpec {
    BoxWorldSpec::with_outcome_counts(left, right).unwrap()
}

pub fn build(spec: &BoxWorldSpec) -> BoxLogic {
    BoxLogic::build(spec, &Limits::default()).unwrap()
}

/// Scenarios with at most two inputs per side and at most 36 sample points.
pub fn small_spec() -> impl Strategy<Value = BoxWorldSpec> {
    let side = prop::collection::vec(2usize..=3, 1..=2);
    (side.clone(), side)
        .prop_filter("at most 36 points", |(l, r)| {
            l.iter().product::<usize>() * r.iter().product::<usize>() <= 36
        })
        .prop_map(|(l, r)| spec(&l, &r))
}
