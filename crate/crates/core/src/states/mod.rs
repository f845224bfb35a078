//! Non-signalling probability tables, states on the logic, and the
//! correspondence between them.

mod linalg;
mod polytope;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{ScenarioError, StateError};
use crate::logic::{BoxLogic, ElemIdx};
use crate::rational::{self, Rational};
use crate::scenario::{AtomId, BoxWorldSpec, Side};

pub use linalg::{rank_int, rank_rational, rref};
pub use polytope::{
    check_order_determining, enumerate_vertices, is_vertex, ns_polytope, Equality, HRep, OrderReport, VRep, VertexClass,
};

/// Conditional probabilities `P(αβ|ab)`, one entry per atom in
/// lexicographic `(a, α, b, β)` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrState {
    spec: BoxWorldSpec,
    values: Vec<Rational>,
}

impl PrState {
    pub fn from_fn(spec: &BoxWorldSpec, mut f: impl FnMut(AtomId) -> Rational) -> Self {
        Self {
            spec: spec.clone(),
            values: spec.atom_ids().into_iter().map(&mut f).collect(),
        }
    }

    /// Values in [`BoxWorldSpec::atom_ids`] order.
    pub fn from_values(spec: &BoxWorldSpec, values: Vec<Rational>) -> Result<Self, StateError> {
        if values.len() != spec.atom_count() {
            return Err(StateError::LengthMismatch {
                expected: spec.atom_count(),
                found: values.len(),
            });
        }
        Ok(Self {
            spec: spec.clone(),
            values,
        })
    }

    /// Builds a table from per-input-pair matrices `tables(a, b)[α][β]`.
    pub fn from_tables(
        spec: &BoxWorldSpec,
        mut tables: impl FnMut(usize, usize) -> Option<Vec<Vec<Rational>>>,
    ) -> Result<Self, StateError> {
        let nl = spec.input_count(Side::Left);
        let nr = spec.input_count(Side::Right);
        let mut mats = vec![vec![Vec::new(); nr]; nl];
        for (a, row) in mats.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                let m = tables(a, b).ok_or(StateError::MissingPair { a, b })?;
                let ok = m.len() == spec.outcome_count(Side::Left, a)
                    && m.iter().all(|r| r.len() == spec.outcome_count(Side::Right, b));
                if !ok {
                    return Err(StateError::PairShape { a, b });
                }
                *slot = m;
            }
        }
        Ok(Self::from_fn(spec, |id| mats[id.a][id.b][id.alpha][id.beta].clone()))
    }

    /// Uniform product of uniform marginals.
    pub fn uniform(spec: &BoxWorldSpec) -> Self {
        Self::from_fn(spec, |id| {
            let n = spec.outcome_count(Side::Left, id.a) * spec.outcome_count(Side::Right, id.b);
            rational::ratio(1, n as i64)
        })
    }

    /// Deterministic table of the sample point `(x, y)`.
    pub fn deterministic(spec: &BoxWorldSpec, x: &[usize], y: &[usize]) -> Self {
        Self::from_fn(spec, |id| {
            if x[id.a] == id.alpha && y[id.b] == id.beta {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Binary two-input box with `α ⊕ β = a·b ⊕ μa ⊕ νb ⊕ γ` and uniform
    /// marginals. Needs two binary inputs on each side.
    pub fn pr_box(spec: &BoxWorldSpec, mu: usize, nu: usize, gamma: usize) -> Self {
        Self::from_fn(spec, |id| {
            if (id.alpha ^ id.beta) == ((id.a * id.b) ^ (mu * id.a) ^ (nu * id.b) ^ gamma) & 1 {
                rational::ratio(1, 2)
            } else {
                Rational::zero()
            }
        })
    }

    pub fn spec(&self) -> &BoxWorldSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Panics for out-of-range ids.
    pub fn get(&self, id: AtomId) -> &Rational {
        let k = self.spec.atom_ids().binary_search(&id).expect("atom in range");
        &self.values[k]
    }

    pub fn matrix(&self, a: usize, b: usize) -> Vec<Vec<Rational>> {
        let nu = self.spec.outcome_count(Side::Left, a);
        let nv = self.spec.outcome_count(Side::Right, b);
        let ids = self.spec.atom_ids();
        let mut m = vec![vec![Rational::zero(); nv]; nu];
        for (id, v) in ids.iter().zip(&self.values) {
            if id.a == a && id.b == b {
                m[id.alpha][id.beta] = v.clone();
            }
        }
        m
    }

    pub fn is_deterministic(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// `Σ w_i P_i`.
    pub fn mix(parts: &[(Rational, &PrState)]) -> Self {
        let spec = parts[0].1.spec.clone();
        let mut values = vec![Rational::zero(); spec.atom_count()];
        for (w, p) in parts {
            for (acc, v) in values.iter_mut().zip(&p.values) {
                *acc += w * v;
            }
        }
        Self { spec, values }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Negative,
    Normalization,
    /// Left marginal depends on the right input.
    SignallingLeft,
    /// Right marginal depends on the left input.
    SignallingRight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: String,
    /// Difference from the required value, as `"p/q"`.
    pub residual: String,
}

/// Every violated constraint: non-negativity, per-pair normalization, and
/// both no-signalling conditions.
#[allow(clippy::needless_range_loop)]
pub fn validate_pr_state(p: &PrState) -> Vec<Violation> {
    let spec = p.spec();
    let nl = spec.input_count(Side::Left);
    let nr = spec.input_count(Side::Right);
    let mut out = Vec::new();
    for (id, v) in spec.atom_ids().iter().zip(p.values()) {
        if v.is_negative() {
            out.push(Violation {
                kind: ViolationKind::Negative,
                at: id.to_string(),
                residual: rational::format(v),
            });
        }
    }
    let mats: Vec<Vec<Vec<Vec<Rational>>>> = (0..nl).map(|a| (0..nr).map(|b| p.matrix(a, b)).collect()).collect();
    for (a, row) in mats.iter().enumerate() {
        for (b, m) in row.iter().enumerate() {
            let total: Rational = m.iter().flatten().sum();
            if !total.is_one() {
                out.push(Violation {
                    kind: ViolationKind::Normalization,
                    at: format!("a={a} b={b}"),
                    residual: rational::format(&(total - Rational::one())),
                });
            }
        }
    }
    // left marginal of (a, α) must not depend on b
    for (a, row) in mats.iter().enumerate() {
        for alpha in 0..spec.outcome_count(Side::Left, a) {
            let marg = |b: usize| -> Rational { row[b][alpha].iter().sum() };
            let base = marg(0);
            for b in 1..nr {
                let d = marg(b) - &base;
                if !d.is_zero() {
                    out.push(Violation {
                        kind: ViolationKind::SignallingLeft,
                        at: format!("a={a} alpha={alpha} b=0 vs b={b}"),
                        residual: rational::format(&d),
                    });
                }
            }
        }
    }
    for b in 0..nr {
        for beta in 0..spec.outcome_count(Side::Right, b) {
            let marg = |a: usize| -> Rational { mats[a][b].iter().map(|r| &r[beta]).sum() };
            let base = marg(0);
            for a in 1..nl {
                let d = marg(a) - &base;
                if !d.is_zero() {
                    out.push(Violation {
                        kind: ViolationKind::SignallingRight,
                        at: format!("b={b} beta={beta} a=0 vs a={a}"),
                        residual: rational::format(&d),
                    });
                }
            }
        }
    }
    out
}

/// Exact values on every element of a logic, indexed by element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogicState {
    values: Vec<Rational>,
}

impl LogicState {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, e: ElemIdx) -> &Rational {
        &self.values[e]
    }

    /// `λ·self + (1 − λ)·other`.
    pub fn mix(&self, other: &LogicState, lambda: &Rational) -> LogicState {
        let mu = Rational::one() - lambda;
        LogicState {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| lambda * x + &mu * y)
                .collect(),
        }
    }

    pub fn is_two_valued(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// All atomic decompositions of every element, computed once per logic.
#[derive(Clone, Debug)]
pub struct DecompositionTable {
    per_element: Vec<Vec<Vec<usize>>>,
}

impl DecompositionTable {
    pub fn new(bl: &BoxLogic) -> Self {
        Self {
            per_element: (0..bl.logic().len()).map(|e| bl.decomposition_positions(e)).collect(),
        }
    }

    /// Decompositions of `e` as atom positions.
    pub fn of(&self, e: ElemIdx) -> &[Vec<usize>] {
        &self.per_element[e]
    }

    pub fn total(&self) -> usize {
        self.per_element.iter().map(Vec::len).sum()
    }

    /// Whether every nonempty element has at least one decomposition.
    pub fn complete(&self, bl: &BoxLogic) -> bool {
        self.per_element
            .iter()
            .enumerate()
            .all(|(e, ds)| !ds.is_empty() || bl.logic().element(e).is_empty())
    }
}

/// Rationals over a common denominator, summed as integers.
///
/// Numerators are kept as `i128` when they all fit and as big integers
/// otherwise.
enum Scaled {
    Small { nums: Vec<i128>, den: BigInt },
    Big { nums: Vec<BigInt>, den: BigInt },
}

#[derive(PartialEq, Eq)]
enum ScaledSum {
    Small(i128),
    Big(BigInt),
}

impl Scaled {
    fn new(values: &[Rational]) -> Self {
        let den = values.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let nums: Vec<BigInt> = values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        // room for sums of up to 2^32 terms
        let small: Option<Vec<i128>> = nums
            .iter()
            .map(|n| n.to_i128().filter(|x| x.unsigned_abs() < 1 << 94))
            .collect();
        match small {
            Some(nums) => Scaled::Small { nums, den },
            None => Scaled::Big { nums, den },
        }
    }

    fn at(&self, i: usize) -> ScaledSum {
        match self {
            Scaled::Small { nums, .. } => ScaledSum::Small(nums[i]),
            Scaled::Big { nums, .. } => ScaledSum::Big(nums[i].clone()),
        }
    }

    fn sum(&self, idx: &[usize]) -> ScaledSum {
        match self {
            Scaled::Small { nums, .. } => ScaledSum::Small(idx.iter().map(|&i| nums[i]).sum()),
            Scaled::Big { nums, .. } => ScaledSum::Big(idx.iter().map(|&i| &nums[i]).sum()),
        }
    }

    fn sum_mapped(&self, idx: &[usize], map: &[usize]) -> ScaledSum {
        match self {
            Scaled::Small { nums, .. } => ScaledSum::Small(idx.iter().map(|&i| nums[map[i]]).sum()),
            Scaled::Big { nums, .. } => ScaledSum::Big(idx.iter().map(|&i| &nums[map[i]]).sum()),
        }
    }

    fn value(&self, s: &ScaledSum) -> Rational {
        let (num, den) = match (self, s) {
            (Scaled::Small { den, .. }, ScaledSum::Small(n)) => (BigInt::from(*n), den),
            (Scaled::Big { den, .. }, ScaledSum::Big(n)) => (n.clone(), den),
            _ => unreachable!("sums come from the same scaling"),
        };
        Rational::new(num, den.clone())
    }
}

/// [`state_from_pr_with`] with a freshly computed decomposition table.
pub fn state_from_pr(bl: &BoxLogic, p: &PrState) -> Result<LogicState, StateError> {
    state_from_pr_with(bl, &DecompositionTable::new(bl), p)
}

/// Extends `P` additively from the atoms to the whole logic, checking that
/// every atomic decomposition of every element gives the same value.
pub fn state_from_pr_with(bl: &BoxLogic, table: &DecompositionTable, p: &PrState) -> Result<LogicState, StateError> {
    if p.values().len() != bl.atom_ids().len() {
        return Err(StateError::LengthMismatch {
            expected: bl.atom_ids().len(),
            found: p.values().len(),
        });
    }
    let violations = validate_pr_state(p);
    if let Some(v) = violations.first() {
        return Err(StateError::Invalid(format!(
            "{:?} at {} (residual {})",
            v.kind, v.at, v.residual
        )));
    }
    let mut values = Vec::with_capacity(bl.logic().len());
    let scaled = Scaled::new(p.values());
    for e in 0..bl.logic().len() {
        let ds = table.of(e);
        let Some(first) = ds.first() else {
            values.push(Rational::zero());
            continue;
        };
        let v = scaled.sum(first);
        for d in &ds[1..] {
            let w = scaled.sum(d);
            if w != v {
                return Err(StateError::WellDefinedness {
                    element: e,
                    first: rational::format(&scaled.value(&v)),
                    second: rational::format(&scaled.value(&w)),
                });
            }
        }
        values.push(scaled.value(&v));
    }
    Ok(LogicState { values })
}

/// [`pr_from_state_with`] with a freshly computed decomposition table.
pub fn pr_from_state(bl: &BoxLogic, rho: &LogicState) -> Result<PrState, StateError> {
    pr_from_state_with(bl, &DecompositionTable::new(bl), rho)
}

/// Reads `P(αβ|ab) = ρ([aα, bβ])` after checking that `ρ` is a state.
///
/// Additivity is checked against every atomic decomposition, which is
/// equivalent to pairwise additivity when every element decomposes;
/// otherwise all disjoint pairs are checked directly.
pub fn pr_from_state_with(bl: &BoxLogic, table: &DecompositionTable, rho: &LogicState) -> Result<PrState, StateError> {
    let logic = bl.logic();
    if rho.values.len() != logic.len() {
        return Err(StateError::LengthMismatch {
            expected: logic.len(),
            found: rho.values.len(),
        });
    }
    for (e, v) in rho.values.iter().enumerate() {
        if !rational::in_unit_interval(v) {
            return Err(StateError::OutOfRange {
                element: e,
                value: rational::format(v),
            });
        }
    }
    let one = logic.one().expect("Γ");
    if !rho.values[one].is_one() {
        return Err(StateError::NotAdditive("value of the whole space is not 1".into()));
    }
    if let Some(z) = logic.zero() {
        if !rho.values[z].is_zero() {
            return Err(StateError::NotAdditive("value of the empty set is not 0".into()));
        }
    }
    let atom_value = |k: usize| &rho.values[bl.atom_element(k)];
    if table.complete(bl) {
        let scaled = Scaled::new(&rho.values);
        let atoms: Vec<usize> = (0..bl.atom_ids().len()).map(|k| bl.atom_element(k)).collect();
        for e in 0..logic.len() {
            for d in table.of(e) {
                let s = scaled.sum_mapped(d, &atoms);
                if s != scaled.at(e) {
                    return Err(StateError::NotAdditive(format!(
                        "element {} differs from the sum over a decomposition",
                        logic.element(e).to_hex()
                    )));
                }
            }
        }
    } else {
        for p in 0..logic.len() {
            for q in p + 1..logic.len() {
                let (sp, sq) = (logic.element(p), logic.element(q));
                if sp.is_disjoint(sq) {
                    let u = logic.position(&sp.union(sq)).expect("closed under disjoint union");
                    if rho.values[u] != &rho.values[p] + &rho.values[q] {
                        return Err(StateError::NotAdditive(format!("{} ⊕ {}", sp.to_hex(), sq.to_hex())));
                    }
                }
            }
        }
    }
    let values = (0..bl.atom_ids().len()).map(|k| atom_value(k).clone()).collect();
    let p = PrState::from_values(bl.spec(), values)?;
    if let Some(v) = validate_pr_state(&p).first() {
        return Err(StateError::Invalid(format!("{:?} at {}", v.kind, v.at)));
    }
    Ok(p)
}

/// Two-valued state of membership of the sample point `omega`.
pub fn point_state(bl: &BoxLogic, omega: usize) -> Result<LogicState, ScenarioError> {
    let size = bl.gamma().size();
    if omega >= size {
        return Err(ScenarioError::PointOutOfRange { point: omega, size });
    }
    Ok(LogicState {
        values: bl
            .logic()
            .elements()
            .iter()
            .map(|s| {
                if s.contains(omega) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    })
}

/// Seeded random convex combinations of up to four vertices with integer
/// weights in `1..=16`.
pub fn sample_states(vertices: &[PrState], count: usize, seed: u64) -> Vec<PrState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=vertices.len().min(4));
            let picks = sample(&mut rng, vertices.len(), k).into_vec();
            let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=16)).collect();
            let total: i64 = weights.iter().sum();
            let parts: Vec<(Rational, &PrState)> = picks
                .iter()
                .zip(&weights)
                .map(|(&i, &w)| (rational::ratio(w, total), &vertices[i]))
                .collect();
            PrState::mix(&parts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::scenario::Limits;

    fn chsh() -> BoxLogic {
        BoxLogic::build(&BoxWorldSpec::chsh(), &Limits::default()).unwrap()
    }

    #[test]
    fn validation_examples() {
        let spec = BoxWorldSpec::chsh();
        assert!(validate_pr_state(&PrState::uniform(&spec)).is_empty());
        assert!(validate_pr_state(&PrState::pr_box(&spec, 0, 0, 0)).is_empty());
        let mut v = PrState::pr_box(&spec, 0, 0, 0).values().to_vec();
        let ids = spec.atom_ids();
        let k00 = ids.binary_search(&AtomId::new(1, 0, 1, 0)).unwrap();
        let k01 = ids.binary_search(&AtomId::new(1, 0, 1, 1)).unwrap();
        v[k00] += ratio(1, 4);
        v[k01] -= ratio(1, 4);
        let bad = PrState::from_values(&spec, v).unwrap();
        let violations = validate_pr_state(&bad);
        assert!(!violations.is_empty());
        assert!(violations.iter().all(|v| v.kind != ViolationKind::Normalization));
        assert!(violations.iter().any(|v| v.kind == ViolationKind::SignallingRight));
    }

    #[test]
    fn missing_pair_rejected() {
        let spec = BoxWorldSpec::chsh();
        let r = PrState::from_tables(&spec, |a, b| (a + b < 2).then(|| vec![vec![ratio(1, 4); 2]; 2]));
        assert_eq!(r, Err(StateError::MissingPair { a: 1, b: 1 }));
        let r = PrState::from_tables(&spec, |_, _| Some(vec![vec![ratio(1, 4); 3]; 2]));
        assert_eq!(r, Err(StateError::PairShape { a: 0, b: 0 }));
    }

    #[test]
    fn uniform_state_values() {
        let bl = chsh();
        let rho = state_from_pr(&bl, &PrState::uniform(bl.spec())).unwrap();
        assert_eq!(rho.value(0), &Rational::zero());
        assert_eq!(rho.value(1), &Rational::one());
        let half = bl.localized(&crate::LocalizedSpec::new(Side::Left, 0, [0])).unwrap();
        assert_eq!(rho.value(half), &ratio(1, 2));
        let back = pr_from_state(&bl, &rho).unwrap();
        assert_eq!(back, PrState::uniform(bl.spec()));
    }

    #[test]
    fn pr_box_values() {
        let bl = chsh();
        let rho = state_from_pr(&bl, &PrState::pr_box(bl.spec(), 0, 0, 0)).unwrap();
        assert_eq!(rho.value(bl.atom_index(AtomId::new(0, 0, 0, 0)).unwrap()), &ratio(1, 2));
        assert_eq!(
            rho.value(bl.atom_index(AtomId::new(0, 0, 1, 1)).unwrap()),
            &Rational::zero()
        );
        // a·b = 1 only for inputs (1, 1)
        assert_eq!(
            rho.value(bl.atom_index(AtomId::new(1, 0, 1, 0)).unwrap()),
            &Rational::zero()
        );
    }

    #[test]
    fn point_states() {
        let bl = chsh();
        for omega in 0..bl.gamma().size() {
            let rho = point_state(&bl, omega).unwrap();
            assert!(rho.is_two_valued());
            assert_eq!(rho.value(1), &Rational::one());
            assert_eq!(rho.value(0), &Rational::zero());
            for e in 0..bl.logic().len() {
                let c = bl.logic().complement_of(e).unwrap();
                assert_eq!(rho.value(e) + rho.value(c), Rational::one());
            }
            let p = pr_from_state(&bl, &rho).unwrap();
            assert!(p.is_deterministic());
            let (x, y) = bl.gamma().point(omega);
            assert_eq!(p, PrState::deterministic(bl.spec(), &x, &y));
        }
        assert!(point_state(&bl, 16).is_err());
    }

    #[test]
    fn non_additive_state_rejected() {
        let bl = chsh();
        let mut values = point_state(&bl, 0).unwrap().values().to_vec();
        let a = bl.atom_index(AtomId::new(0, 0, 0, 0)).unwrap();
        values[a] = ratio(1, 2);
        assert!(matches!(
            pr_from_state(&bl, &LogicState::new(values)),
            Err(StateError::NotAdditive(_))
        ));
    }

    #[test]
    fn sampling_is_seeded() {
        let spec = BoxWorldSpec::chsh();
        let verts = vec![
            PrState::uniform(&spec),
            PrState::pr_box(&spec, 0, 0, 0),
            PrState::pr_box(&spec, 1, 0, 1),
        ];
        assert_eq!(sample_states(&verts, 5, 7), sample_states(&verts, 5, 7));
        for s in sample_states(&verts, 20, 3) {
            assert!(validate_pr_state(&s).is_empty());
        }
    }
}
