//! The non-signalling polytope `{P ≥ 0 : normalization, no-signalling}` and
//! its exact vertex enumeration by incremental double description.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::linalg::{dot, primitive, rank_int, rank_rational, rref, sign, to_integer_row};
use super::{state_from_pr_with, DecompositionTable, PrState};
use crate::error::StateError;
use crate::logic::BoxLogic;
use crate::rational::{self, Rational};
use crate::scenario::{AtomId, BoxWorldSpec, Limits, Side};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equality {
    pub label: String,
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

/// `{x : x ≥ 0, A x = b}` over the atom variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HRep {
    pub variables: Vec<AtomId>,
    pub equalities: Vec<Equality>,
    /// Every variable is non-negative.
    pub nonnegative: bool,
}

/// Constraint system of non-signalling tables on the atoms of `spec`.
pub fn ns_polytope(spec: &BoxWorldSpec, limits: &Limits) -> Result<HRep, StateError> {
    let vars = spec.atom_ids();
    if vars.len() > limits.vars {
        return Err(StateError::TooManyVariables {
            cap: limits.vars,
            found: vars.len(),
        });
    }
    let nl = spec.input_count(Side::Left);
    let nr = spec.input_count(Side::Right);
    let row = |f: &dyn Fn(&AtomId) -> i64| -> Vec<Rational> { vars.iter().map(|id| rational::int(f(id))).collect() };
    let mut equalities = Vec::new();
    for a in 0..nl {
        for b in 0..nr {
            equalities.push(Equality {
                label: format!("normalization a={a} b={b}"),
                coeffs: row(&|id| (id.a == a && id.b == b) as i64),
                rhs: Rational::one(),
            });
        }
    }
    for a in 0..nl {
        for alpha in 0..spec.outcome_count(Side::Left, a) {
            for b in 1..nr {
                equalities.push(Equality {
                    label: format!("no-signalling left a={a} alpha={alpha} b=0 vs b={b}"),
                    coeffs: row(&|id| {
                        let hit = id.a == a && id.alpha == alpha;
                        (hit && id.b == b) as i64 - (hit && id.b == 0) as i64
                    }),
                    rhs: Rational::zero(),
                });
            }
        }
    }
    for b in 0..nr {
        for beta in 0..spec.outcome_count(Side::Right, b) {
            for a in 1..nl {
                equalities.push(Equality {
                    label: format!("no-signalling right b={b} beta={beta} a=0 vs a={a}"),
                    coeffs: row(&|id| {
                        let hit = id.b == b && id.beta == beta;
                        (hit && id.a == a) as i64 - (hit && id.a == 0) as i64
                    }),
                    rhs: Rational::zero(),
                });
            }
        }
    }
    Ok(HRep {
        variables: vars,
        equalities,
        nonnegative: true,
    })
}

impl HRep {
    /// Whether `x` satisfies every constraint exactly.
    pub fn satisfies(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len()
            && x.iter().all(|v| !v.is_negative())
            && self.equalities.iter().all(|eq| {
                let lhs: Rational = eq.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
                lhs == eq.rhs
            })
    }
}

/// A feasible `x` is a vertex iff the equality columns on its support are
/// linearly independent.
pub fn is_vertex(h: &HRep, x: &[Rational]) -> bool {
    if !h.satisfies(x) {
        return false;
    }
    let support: Vec<usize> = (0..x.len()).filter(|&i| !x[i].is_zero()).collect();
    let cols: Vec<Vec<Rational>> = support
        .iter()
        .map(|&i| h.equalities.iter().map(|eq| eq.coeffs[i].clone()).collect())
        .collect();
    rank_rational(&cols) == support.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Deterministic,
    Nondeterministic,
}

/// Vertices in lexicographic order of their coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Rational>>,
    pub affine_dimension: usize,
}

impl VRep {
    pub fn class(v: &[Rational]) -> VertexClass {
        if v.iter().all(|x| x.is_zero() || x.is_one()) {
            VertexClass::Deterministic
        } else {
            VertexClass::Nondeterministic
        }
    }

    pub fn count(&self, class: VertexClass) -> usize {
        self.vertices.iter().filter(|v| Self::class(v) == class).count()
    }

    pub fn states(&self, spec: &BoxWorldSpec) -> Vec<PrState> {
        self.vertices
            .iter()
            .map(|v| PrState::from_values(spec, v.clone()).expect("vertex length"))
            .collect()
    }
}

struct Ray {
    v: Vec<BigInt>,
    /// processed constraints tight at this ray
    active: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn bit_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_iter(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    (0..bits.len() * 64).filter(move |&i| bits[i / 64] >> (i % 64) & 1 == 1)
}

fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = x.iter().zip(y).map(|(p, q)| a * p - b * q).collect();
    primitive(&mut out);
    out
}

/// Extreme rays of `{z : h_i · z ≥ 0}` by double description, inserting the
/// rows in the given order. Returns the rays and the remaining lineality.
fn double_description(rows: &[Vec<BigInt>], dim: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let words = rows.len().div_ceil(64).max(1);
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed = vec![0u64; words];

    for (c, h) in rows.iter().enumerate() {
        if let Some(li) = lineality.iter().position(|l| !dot(h, l).is_zero()) {
            let mut l = lineality.remove(li);
            let mut hl = dot(h, &l);
            if hl.is_negative() {
                l.iter_mut().for_each(|x| *x = -x.clone());
                hl = -hl;
            }
            for other in lineality.iter_mut() {
                let ho = dot(h, other);
                if !ho.is_zero() {
                    *other = combine(&hl, other, &ho, &l);
                }
            }
            for r in rays.iter_mut() {
                let hr = dot(h, &r.v);
                if !hr.is_zero() {
                    r.v = combine(&hl, &r.v, &hr, &l);
                }
                bit_set(&mut r.active, c);
            }
            rays.push(Ray {
                v: l,
                active: processed.clone(),
            });
        } else {
            let target = dim - lineality.len() - 2;
            let signs: Vec<(BigInt, i8)> = rays
                .iter()
                .map(|r| {
                    let d = dot(h, &r.v);
                    let s = sign(&d);
                    (d, s)
                })
                .collect();
            let mut next: Vec<Ray> = Vec::new();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].1 > 0).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].1 < 0).collect();
            for &p in &pos {
                for &n in &neg {
                    let common = bit_and(&rays[p].active, &rays[n].active);
                    let idx: Vec<usize> = bits_iter(&common).collect();
                    if idx.len() < target {
                        continue;
                    }
                    let sub: Vec<&[BigInt]> = idx.iter().map(|&i| rows[i].as_slice()).collect();
                    if rank_int(&sub) != target {
                        continue;
                    }
                    let v = combine(&signs[p].0, &rays[n].v, &signs[n].0, &rays[p].v);
                    let mut active = common;
                    bit_set(&mut active, c);
                    next.push(Ray { v, active });
                }
            }
            let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
            for (r, (_, s)) in rays.into_iter().zip(signs) {
                match s {
                    1 => kept.push(r),
                    0 => {
                        let mut r = r;
                        bit_set(&mut r.active, c);
                        kept.push(r);
                    }
                    _ => {}
                }
            }
            kept.extend(next);
            rays = kept;
        }
        bit_set(&mut processed, c);
    }
    (rays.into_iter().map(|r| r.v).collect(), lineality)
}

/// Exact vertices of a bounded `{x ≥ 0, A x = b}`.
///
/// The equalities are solved exactly, `x = x0 + K t`, and the cone
/// `{(t, s) : s x0 + K t ≥ 0, s ≥ 0}` is enumerated with `s ≥ 0` first and
/// then the variables in order; rays with `s > 0` give the vertices.
pub fn enumerate_vertices(h: &HRep) -> VRep {
    let n = h.variables.len();
    let mut aug: Vec<Vec<Rational>> = h
        .equalities
        .iter()
        .map(|eq| {
            let mut r = eq.coeffs.clone();
            r.push(eq.rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return VRep {
            vertices: Vec::new(),
            affine_dimension: 0,
        };
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let d = free.len();
    let mut x0 = vec![Rational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x0[p] = aug[r][n].clone();
    }
    // kernel[i][j]: coefficient of t_j in x_i
    let mut kernel = vec![vec![Rational::zero(); d]; n];
    for (j, &f) in free.iter().enumerate() {
        kernel[f][j] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            kernel[p][j] = -aug[r][f].clone();
        }
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    let mut s_row = vec![BigInt::zero(); d + 1];
    s_row[d] = BigInt::one();
    rows.push(s_row);
    for i in 0..n {
        let mut r = kernel[i].clone();
        r.push(x0[i].clone());
        rows.push(to_integer_row(&r));
    }
    let (rays, lineality) = double_description(&rows, d + 1);
    debug_assert!(lineality.is_empty(), "polytope is bounded");

    let mut vertices: Vec<Vec<Rational>> = rays
        .iter()
        .filter(|r| r[d].is_positive())
        .map(|r| {
            let s = Rational::from_integer(r[d].clone());
            (0..n)
                .map(|i| {
                    let mut x = x0[i].clone();
                    for j in 0..d {
                        x += &kernel[i][j] * Rational::from_integer(r[j].clone()) / &s;
                    }
                    x
                })
                .collect()
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    let affine_dimension = affine_dimension(&vertices);
    VRep {
        vertices,
        affine_dimension,
    }
}

/// Dimension of the affine hull of a point set.
pub fn affine_dimension(points: &[Vec<Rational>]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    rank_rational(&diffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub pairs_checked: u64,
    pub pairs_skipped_by_inclusion: u64,
    /// Pairs `p ⊄ q` with `ρ(p) ≤ ρ(q)` at every vertex, hex-encoded.
    pub failures: Vec<(String, String)>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every pair `p ⊄ q`, looks for a vertex state with `ρ(p) > ρ(q)`.
///
/// Each vertex state is scaled by its common denominator to 64-bit
/// integers. The deterministic vertex of a point in `p ∖ q` is tried first;
/// the verdict always comes from the stored values.
pub fn check_order_determining(
    bl: &BoxLogic,
    table: &DecompositionTable,
    vertices: &[PrState],
) -> Result<OrderReport, StateError> {
    let logic = bl.logic();
    let mut scaled: Vec<Vec<i64>> = Vec::with_capacity(vertices.len());
    for v in vertices {
        let rho = state_from_pr_with(bl, table, v)?;
        let l = rho.values().iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let lr = Rational::from_integer(l);
        let ints: Option<Vec<i64>> = rho.values().iter().map(|x| (x * &lr).to_integer().to_i64()).collect();
        scaled.push(ints.ok_or_else(|| StateError::Invalid("vertex values exceed 64-bit scaling".into()))?);
    }
    let mut hint: Vec<Option<usize>> = vec![None; bl.gamma().size()];
    for (vi, v) in vertices.iter().enumerate() {
        if v.is_deterministic() {
            let omega = (0..bl.gamma().size()).find(|&pt| {
                let (x, y) = bl.gamma().point(pt);
                PrState::deterministic(bl.spec(), &x, &y) == *v
            });
            if let Some(omega) = omega {
                hint[omega] = Some(vi);
            }
        }
    }
    let separates = |vi: usize, p: usize, q: usize| scaled[vi][p] > scaled[vi][q];
    let mut report = OrderReport {
        pairs_checked: 0,
        pairs_skipped_by_inclusion: 0,
        failures: Vec::new(),
    };
    for p in 0..logic.len() {
        for q in 0..logic.len() {
            let (sp, sq) = (logic.element(p), logic.element(q));
            let Some(outside) = sp.first_outside(sq) else {
                report.pairs_skipped_by_inclusion += 1;
                continue;
            };
            report.pairs_checked += 1;
            let first_try = hint[outside];
            let found =
                first_try.is_some_and(|vi| separates(vi, p, q)) || (0..vertices.len()).any(|vi| separates(vi, p, q));
            if !found && report.failures.len() < 16 {
                report.failures.push((sp.to_hex(), sq.to_hex()));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chsh_h_rep() {
        let h = ns_polytope(&BoxWorldSpec::chsh(), &Limits::default()).unwrap();
        assert_eq!(h.variables.len(), 16);
        // 4 normalizations + 4 left + 4 right no-signalling rows
        assert_eq!(h.equalities.len(), 12);
        let limits = Limits {
            vars: 10,
            ..Limits::default()
        };
        assert!(ns_polytope(&BoxWorldSpec::chsh(), &limits).is_err());
    }

    #[test]
    fn single_pair_is_simplex() {
        let spec = BoxWorldSpec::with_outcome_counts(&[2], &[2]).unwrap();
        let v = enumerate_vertices(&ns_polytope(&spec, &Limits::default()).unwrap());
        assert_eq!(v.vertices.len(), 4);
        assert_eq!(v.affine_dimension, 3);
        assert_eq!(v.count(VertexClass::Deterministic), 4);
    }

    #[test]
    fn square_by_dd() {
        // 0 ≤ x, y and x + u = 1, y + w = 1: the unit square
        let h = HRep {
            variables: (0..4).map(|i| AtomId::new(0, i, 0, 0)).collect(),
            equalities: vec![
                Equality {
                    label: "x".into(),
                    coeffs: [1, 0, 1, 0].map(rational::int).to_vec(),
                    rhs: Rational::one(),
                },
                Equality {
                    label: "y".into(),
                    coeffs: [0, 1, 0, 1].map(rational::int).to_vec(),
                    rhs: Rational::one(),
                },
            ],
            nonnegative: true,
        };
        let v = enumerate_vertices(&h);
        assert_eq!(v.vertices.len(), 4);
        assert_eq!(v.affine_dimension, 2);
        assert!(v.vertices.iter().all(|x| is_vertex(&h, x)));
        let centre = vec![rational::ratio(1, 2); 4];
        assert!(h.satisfies(&centre) && !is_vertex(&h, &centre));
    }

    #[test]
    fn infeasible_is_empty() {
        let h = HRep {
            variables: vec![AtomId::new(0, 0, 0, 0)],
            equalities: vec![
                Equality {
                    label: "a".into(),
                    coeffs: vec![Rational::one()],
                    rhs: Rational::one(),
                },
                Equality {
                    label: "b".into(),
                    coeffs: vec![Rational::one()],
                    rhs: Rational::zero(),
                },
            ],
            nonnegative: true,
        };
        assert!(enumerate_vertices(&h).vertices.is_empty());
    }
}
