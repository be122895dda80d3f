use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::ir::{Circuit, Gate, SignedControl, SubroutineDef, WireKind};

/// Counting key: gate name plus positive and negative control counts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GateKey {
    pub name: String,
    pub pos: usize,
    pub neg: usize,
}

impl GateKey {
    pub fn new(name: impl Into<String>, pos: usize, neg: usize) -> Self {
        GateKey { name: name.into(), pos, neg }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateCountReport {
    /// Sorted by (name, pos, neg).
    pub entries: BTreeMap<GateKey, BigUint>,
    pub total: BigUint,
    pub inputs: usize,
    pub outputs: usize,
    /// Peak number of simultaneously live wires.
    pub qubits: usize,
    pub aggregated: bool,
}

fn split(cs: &[SignedControl], cc: &[SignedControl]) -> (usize, usize) {
    let pos = cs.iter().chain(cc).filter(|c| c.is_positive()).count();
    (pos, cs.len() + cc.len() - pos)
}

fn kinded(kind: WireKind, name: &str) -> String {
    match kind {
        WireKind::Quantum => name.to_string(),
        WireKind::Classical => format!("C{name}"),
    }
}

/// Key for a primitive gate, and whether the key shifts under extra controls.
fn primitive_key(g: &Gate) -> Option<(GateKey, bool)> {
    Some(match g {
        Gate::Unitary { name, controls, classical_controls, .. } => {
            let (p, n) = split(controls, classical_controls);
            (GateKey::new(name.clone(), p, n), true)
        }
        Gate::Init { kind, value, .. } => {
            (GateKey::new(kinded(*kind, if *value { "Init1" } else { "Init0" }), 0, 0), false)
        }
        Gate::TermAssert { kind, value, .. } => {
            (GateKey::new(kinded(*kind, if *value { "Term1" } else { "Term0" }), 0, 0), false)
        }
        Gate::Discard { kind, .. } => (GateKey::new(kinded(*kind, "Discard"), 0, 0), false),
        Gate::Measure { .. } => (GateKey::new("Meas", 0, 0), false),
        Gate::Classical { op, .. } => (GateKey::new(format!("C{}", op.name()), 0, 0), false),
        Gate::Call { .. } | Gate::Comment { .. } => return None,
    })
}

/// Aggregated counts of one subroutine: per (key, controllable).
type Tally = BTreeMap<(GateKey, bool), BigUint>;

struct Summary {
    tally: Tally,
    peak: usize,
}

struct Counter<'a> {
    table: &'a BTreeMap<String, SubroutineDef>,
    memo: HashMap<String, Summary>,
}

impl Counter<'_> {
    fn summarize(&mut self, c: &Circuit) -> Summary {
        let mut tally = Tally::new();
        let mut live = c.inputs.len();
        let mut peak = live;
        for g in &c.gates {
            match g {
                Gate::Call { name, inputs, outputs, controls, classical_controls } => {
                    let (p, n) = split(controls, classical_controls);
                    if !self.memo.contains_key(name) {
                        if let Some(def) = self.table.get(name) {
                            let s = self.summarize(&def.circuit);
                            self.memo.insert(name.clone(), s);
                        }
                    }
                    let Some(sub) = self.memo.get(name) else { continue };
                    for ((k, ctl), v) in &sub.tally {
                        let key = if *ctl {
                            GateKey::new(k.name.clone(), k.pos + p, k.neg + n)
                        } else {
                            k.clone()
                        };
                        *tally.entry((key, *ctl)).or_insert_with(BigUint::zero) += v;
                    }
                    peak = peak.max(live - inputs.len() + sub.peak);
                    live = live - inputs.len() + outputs.len();
                }
                other => {
                    if let Some(k) = primitive_key(other) {
                        *tally.entry(k).or_insert_with(BigUint::zero) += 1u32;
                    }
                    match other {
                        Gate::Init { .. } => live += 1,
                        Gate::TermAssert { .. } | Gate::Discard { .. } => live -= 1,
                        _ => {}
                    }
                }
            }
            peak = peak.max(live);
        }
        Summary { tally, peak }
    }
}

/// Count gates. With `aggregate`, each subroutine is counted once and its
/// counts are multiplied through the call hierarchy (no inlining); without
/// it, only top-level gates are counted and calls appear under the
/// subroutine's name. Comments are never counted.
pub fn gate_count(c: &Circuit, aggregate: bool) -> GateCountReport {
    let mut entries: BTreeMap<GateKey, BigUint> = BTreeMap::new();
    let qubits;
    if aggregate {
        let mut counter = Counter { table: &c.subroutines, memo: HashMap::new() };
        let s = counter.summarize(c);
        for ((k, _), v) in s.tally {
            *entries.entry(k).or_insert_with(BigUint::zero) += v;
        }
        qubits = s.peak;
    } else {
        let mut counter = Counter { table: &c.subroutines, memo: HashMap::new() };
        qubits = counter.summarize(c).peak;
        for g in &c.gates {
            let key = match g {
                Gate::Call { name, controls, classical_controls, .. } => {
                    let (p, n) = split(controls, classical_controls);
                    Some(GateKey::new(name.clone(), p, n))
                }
                other => primitive_key(other).map(|(k, _)| k),
            };
            if let Some(k) = key {
                *entries.entry(k).or_insert_with(BigUint::zero) += 1u32;
            }
        }
    }
    let total = entries.values().sum();
    GateCountReport {
        entries,
        total,
        inputs: c.inputs.len(),
        outputs: c.outputs.len(),
        qubits,
        aggregated: aggregate,
    }
}
