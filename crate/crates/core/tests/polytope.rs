use std::collections::BTreeSet;
use std::time::Instant;

use boxlogic::rational::{self, Rational};
use boxlogic::states::{enumerate_vertices, is_vertex, ns_polytope, validate_pr_state, PrState, VertexClass};
use boxlogic::{BoxWorldSpec, Limits};
use num_traits::{One, Zero};

/// Rank over the rationals by plain Gaussian elimination.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// A feasible table is extreme iff no nonzero direction supported inside its
/// support keeps every constraint of the system satisfied.
fn extreme(spec: &BoxWorldSpec, p: &PrState) -> bool {
    let h = ns_polytope(spec, &Limits::default()).unwrap();
    let support: Vec<usize> = (0..p.values().len()).filter(|&i| !p.values()[i].is_zero()).collect();
    let cols: Vec<Vec<Rational>> = support
        .iter()
        .map(|&i| h.equalities.iter().map(|e| e.coeffs[i].clone()).collect())
        .collect();
    rank(cols) == support.len()
}

fn chsh_oracle() -> (Vec<PrState>, Vec<PrState>) {
    let spec = BoxWorldSpec::chsh();
    let mut det = Vec::new();
    for bits in 0..16usize {
        let x = [bits & 1, bits >> 1 & 1];
        let y = [bits >> 2 & 1, bits >> 3 & 1];
        det.push(PrState::from_fn(&spec, |id| {
            if x[id.a] == id.alpha && y[id.b] == id.beta {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
    }
    let mut pr = Vec::new();
    for m in 0..8usize {
        let (mu, nu, g) = (m & 1, m >> 1 & 1, m >> 2 & 1);
        pr.push(PrState::from_fn(&spec, |id| {
            if id.alpha ^ id.beta == (id.a & id.b) ^ (mu & id.a) ^ (nu & id.b) ^ g {
                rational::ratio(1, 2)
            } else {
                Rational::zero()
            }
        }));
    }
    (det, pr)
}

#[test]
fn chsh_vertices_match_oracle() {
    let spec = BoxWorldSpec::chsh();
    let (det, pr) = chsh_oracle();
    for p in det.iter().chain(&pr) {
        assert!(validate_pr_state(p).is_empty());
        assert!(extreme(&spec, p));
    }
    let expected: BTreeSet<Vec<Rational>> = det.iter().chain(&pr).map(|p| p.values().to_vec()).collect();
    assert_eq!(expected.len(), 24);

    let h = ns_polytope(&spec, &Limits::default()).unwrap();
    let v = enumerate_vertices(&h);
    let got: BTreeSet<Vec<Rational>> = v.vertices.iter().cloned().collect();
    assert_eq!(got, expected);
    assert_eq!(v.affine_dimension, 8);
    assert_eq!(v.count(VertexClass::Deterministic), 16);
    assert_eq!(v.count(VertexClass::Nondeterministic), 8);
    for x in &v.vertices {
        assert!(h.satisfies(x));
        assert!(is_vertex(&h, x));
    }
}

#[test]
fn vertices_are_canonically_sorted() {
    let spec = BoxWorldSpec::chsh();
    let v = enumerate_vertices(&ns_polytope(&spec, &Limits::default()).unwrap());
    assert!(v.vertices.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn larger_scenarios_are_consistent() {
    for counts in [
        (vec![3, 3], vec![3, 3]),
        (vec![2, 2, 2], vec![2, 2, 2]),
        (vec![3, 2], vec![2]),
    ] {
        let spec = BoxWorldSpec::with_outcome_counts(&counts.0, &counts.1).unwrap();
        let start = Instant::now();
        let h = ns_polytope(&spec, &Limits::default()).unwrap();
        let v = enumerate_vertices(&h);
        let dets: usize = counts.0.iter().product::<usize>() * counts.1.iter().product::<usize>();
        eprintln!(
            "{counts:?}: {} vertices, dim {}, {:?}",
            v.vertices.len(),
            v.affine_dimension,
            start.elapsed()
        );
        assert_eq!(v.count(VertexClass::Deterministic), dets);
        for x in &v.vertices {
            assert!(h.satisfies(x) && is_vertex(&h, x));
            assert!(extreme(&spec, &PrState::from_values(&spec, x.clone()).unwrap()));
        }
    }
}
