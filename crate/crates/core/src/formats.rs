//! File formats: PR-state tables, observables, logic and polytope exports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::compat::SingleBoxLogic;
use crate::error::{FormatError, Result};
use crate::logic::{ElemIdx, Logic};
use crate::observables::{make_observable, Observable};
use crate::rational::{self, Rational};
use crate::scenario::{BoxWorldSpec, Side};
use crate::states::{PrState, VRep};

fn parse_pair_key(key: &str) -> Result<(usize, usize), FormatError> {
    let bad = || FormatError::PairKey(key.to_string());
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    if !digits(a) || !digits(b) {
        return Err(bad());
    }
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

/// Parses `{"a,b": [["p/q", ..], ..]}` with zero-based input indices.
///
/// Without a scenario, inputs and outcome counts are read off the keys and
/// matrix shapes, and outcomes are labelled `0, 1, ..`.
pub fn parse_pr_state(text: &str, spec: Option<&BoxWorldSpec>) -> Result<PrState> {
    let raw: BTreeMap<String, Vec<Vec<String>>> = serde_json::from_str(text).map_err(FormatError::from)?;
    let mut tables: BTreeMap<(usize, usize), Vec<Vec<Rational>>> = BTreeMap::new();
    for (key, m) in &raw {
        let pair = parse_pair_key(key)?;
        let parsed = m
            .iter()
            .map(|row| row.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if tables.insert(pair, parsed).is_some() {
            return Err(FormatError::PairKey(key.clone()).into());
        }
    }
    let spec = match spec {
        Some(s) => s.clone(),
        None => infer_spec(&tables)?,
    };
    Ok(PrState::from_tables(&spec, |a, b| tables.get(&(a, b)).cloned())?)
}

fn infer_spec(tables: &BTreeMap<(usize, usize), Vec<Vec<Rational>>>) -> Result<BoxWorldSpec> {
    let shape = |msg: String| FormatError::Shape(msg);
    let nl = tables
        .keys()
        .map(|k| k.0 + 1)
        .max()
        .ok_or_else(|| shape("no input pairs".into()))?;
    let nr = tables.keys().map(|k| k.1 + 1).max().unwrap_or(0);
    let mut left = vec![None; nl];
    let mut right = vec![None; nr];
    for (&(a, b), m) in tables {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        if m.iter().any(|r| r.len() != cols) {
            return Err(shape(format!("ragged matrix for pair {a},{b}")).into());
        }
        for (slot, n, what) in [(&mut left[a], rows, "rows"), (&mut right[b], cols, "columns")] {
            match *slot {
                None => *slot = Some(n),
                Some(prev) if prev != n => {
                    return Err(shape(format!("pair {a},{b} has {n} {what}, expected {prev}")).into());
                }
                _ => {}
            }
        }
    }
    let counts = |v: Vec<Option<usize>>| -> Result<Vec<usize>> {
        v.into_iter()
            .enumerate()
            .map(|(i, n)| n.ok_or_else(|| shape(format!("input {i} never appears")).into()))
            .collect()
    };
    Ok(BoxWorldSpec::with_outcome_counts(&counts(left)?, &counts(right)?)?)
}

pub fn write_pr_state(p: &PrState) -> String {
    let spec = p.spec();
    let mut out: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    for a in 0..spec.input_count(Side::Left) {
        for b in 0..spec.input_count(Side::Right) {
            let m = p.matrix(a, b);
            out.insert(
                format!("{a},{b}"),
                m.iter().map(|r| r.iter().map(rational::format).collect()).collect(),
            );
        }
    }
    serde_json::to_string_pretty(&out).expect("plain data serializes")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableEntry {
    value: String,
    element: String,
}

/// Parses `[{"value": "p/q", "element": "<hex>"}, ..]` against `logic`.
pub fn parse_observable(text: &str, logic: &Logic) -> Result<Observable> {
    let entries: Vec<ObservableEntry> = serde_json::from_str(text).map_err(FormatError::from)?;
    let mut assignment = Vec::with_capacity(entries.len());
    for e in entries {
        let value = rational::parse(&e.value)?;
        let set = BitSet::from_hex(logic.ground_size(), &e.element)?;
        assignment.push((value, logic.lookup(&set)?));
    }
    Ok(make_observable(logic, assignment)?)
}

pub fn write_observable(x: &Observable, logic: &Logic) -> String {
    let entries: Vec<ObservableEntry> = x
        .outcomes()
        .iter()
        .map(|(v, e)| ObservableEntry {
            value: rational::format(v),
            element: logic.element(*e).to_hex(),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("plain data serializes")
}

#[derive(Serialize)]
struct LogicExport<'a> {
    ground_size: usize,
    elements: Vec<String>,
    complement: &'a [Option<ElemIdx>],
    atoms: &'a [ElemIdx],
    covers: Vec<(ElemIdx, ElemIdx)>,
}

/// Elements as hex bit vectors with complement map, atoms and Hasse covers.
pub fn logic_json(logic: &Logic) -> String {
    let export = LogicExport {
        ground_size: logic.ground_size(),
        elements: logic.elements().iter().map(BitSet::to_hex).collect(),
        complement: logic.complement_map(),
        atoms: logic.atoms(),
        covers: logic.hasse_covers(),
    };
    serde_json::to_string_pretty(&export).expect("plain data serializes")
}

/// Hasse diagram in Graphviz format, bottom to top.
pub fn logic_dot(logic: &Logic) -> String {
    let mut s = String::from("digraph logic {\n  rankdir=BT;\n  node [shape=box, fontname=monospace];\n");
    for (i, e) in logic.elements().iter().enumerate() {
        writeln!(s, "  e{i} [label=\"{}\"];", e.to_hex()).unwrap();
    }
    for (lo, hi) in logic.hasse_covers() {
        writeln!(s, "  e{lo} -> e{hi};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// One row per vertex with a trailing `class` column.
pub fn vertices_csv(spec: &BoxWorldSpec, v: &VRep) -> String {
    let mut s = String::new();
    let names: Vec<String> = spec
        .atom_ids()
        .iter()
        .map(|id| {
            let l = &spec.inputs(Side::Left)[id.a][id.alpha];
            let r = &spec.inputs(Side::Right)[id.b][id.beta];
            csv_field(&format!("P({l} {r}|{} {})", id.a, id.b))
        })
        .collect();
    s.push_str(&names.join(","));
    s.push_str(",class\n");
    for x in &v.vertices {
        for r in x {
            s.push_str(&rational::format(r));
            s.push(',');
        }
        let class = match VRep::class(x) {
            crate::states::VertexClass::Deterministic => "deterministic",
            crate::states::VertexClass::Nondeterministic => "nondeterministic",
        };
        s.push_str(class);
        s.push('\n');
    }
    s
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

pub fn pasting_json(single: &SingleBoxLogic) -> String {
    serde_json::to_string_pretty(&single.report).expect("plain data serializes")
}

/// Block diagram of a single-box logic: one cluster per input, joined at
/// the shared bottom and top.
pub fn pasting_dot(spec: &BoxWorldSpec, single: &SingleBoxLogic) -> String {
    let logic = &single.logic;
    let labels = spec.inputs(single.side);
    let (zero, one) = (logic.zero(), logic.one());
    let mut s = String::from("graph pasting {\n  node [shape=ellipse];\n  zero [label=\"0\"];\n  one [label=\"1\"];\n");
    for block in &single.report.blocks {
        writeln!(
            s,
            "  subgraph cluster_{} {{\n    label=\"input {}\";",
            block.input, block.input
        )
        .unwrap();
        for (subset, e) in &block.isomorphism {
            if Some(*e) == zero || Some(*e) == one {
                continue;
            }
            let names: Vec<&str> = subset.iter().map(|&o| labels[block.input][o].as_str()).collect();
            writeln!(s, "    e{e} [label=\"{} ∈ {{{}}}\"];", block.input, names.join(",")).unwrap();
        }
        s.push_str("  }\n");
        for (subset, e) in &block.isomorphism {
            if Some(*e) == zero || Some(*e) == one || subset.len() != 1 {
                continue;
            }
            writeln!(s, "  zero -- e{e};").unwrap();
        }
        for (subset, e) in &block.isomorphism {
            if Some(*e) == zero || Some(*e) == one || subset.len() + 1 != labels[block.input].len() {
                continue;
            }
            writeln!(s, "  e{e} -- one;").unwrap();
        }
    }
    s.push_str("}\n");
    s
}
