//! The circuit data model.
//!
//! A [`Circuit`] is an immutable, ordered list of [`Gate`]s over typed wires,
//! together with a table of named subroutines (boxed subcircuits). Besides
//! unitary gates the model carries explicit wire allocation ([`Gate::Init`]),
//! asserted deallocation ([`Gate::TermAssert`]), unasserted deallocation
//! ([`Gate::Discard`]) and measurement, which turns a quantum wire into a
//! classical one while keeping its id.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Identifier of a wire, unique within one circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WireId(pub u32);

impl fmt::Display for WireId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WireKind {
    Quantum,
    Classical,
}

impl fmt::Display for WireKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireKind::Quantum => f.write_str("Quantum"),
            WireKind::Classical => f.write_str("Classical"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// A control wire together with the value it must hold for the gate to fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedControl {
    pub wire: WireId,
    pub polarity: Polarity,
}

impl SignedControl {
    pub fn pos(wire: WireId) -> Self {
        SignedControl { wire, polarity: Polarity::Positive }
    }

    pub fn neg(wire: WireId) -> Self {
        SignedControl { wire, polarity: Polarity::Negative }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    /// Whether a wire holding `value` satisfies this control.
    pub fn fires_on(&self, value: bool) -> bool {
        value == self.is_positive()
    }
}

/// Classical gates. All operate on classical wires only.
///
/// `Not` flips its target, `Xor` adds the parity of its sources into the
/// target; both are self-inverse. `And`, `Or` and `Copy` overwrite the target
/// and are therefore irreversible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassicalOp {
    Not,
    Xor,
    And,
    Or,
    Copy,
}

impl ClassicalOp {
    pub fn name(self) -> &'static str {
        match self {
            ClassicalOp::Not => "not",
            ClassicalOp::Xor => "xor",
            ClassicalOp::And => "and",
            ClassicalOp::Or => "or",
            ClassicalOp::Copy => "copy",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "not" => ClassicalOp::Not,
            "xor" => ClassicalOp::Xor,
            "and" => ClassicalOp::And,
            "or" => ClassicalOp::Or,
            "copy" => ClassicalOp::Copy,
            _ => return None,
        })
    }

    pub fn is_reversible(self) -> bool {
        matches!(self, ClassicalOp::Not | ClassicalOp::Xor)
    }

    /// Allowed number of sources, as an inclusive range.
    fn source_arity(self) -> (usize, usize) {
        match self {
            ClassicalOp::Not => (0, 0),
            ClassicalOp::Copy => (1, 1),
            ClassicalOp::Xor | ClassicalOp::And | ClassicalOp::Or => (1, usize::MAX),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Unitary {
        name: String,
        params: Vec<f64>,
        targets: Vec<WireId>,
        controls: Vec<SignedControl>,
        classical_controls: Vec<SignedControl>,
    },
    Init {
        wire: WireId,
        kind: WireKind,
        value: bool,
    },
    TermAssert {
        wire: WireId,
        kind: WireKind,
        value: bool,
    },
    Discard {
        wire: WireId,
        kind: WireKind,
    },
    Measure {
        wire: WireId,
    },
    Classical {
        op: ClassicalOp,
        targets: Vec<WireId>,
        sources: Vec<WireId>,
    },
    /// Invocation of a boxed subcircuit.
    Call {
        name: String,
        inputs: Vec<WireId>,
        outputs: Vec<WireId>,
        controls: Vec<SignedControl>,
        classical_controls: Vec<SignedControl>,
    },
    Comment {
        text: String,
        labels: Vec<(WireId, String)>,
    },
}

impl Gate {
    /// Uncontrolled unitary.
    pub fn unitary(name: impl Into<String>, targets: Vec<WireId>) -> Self {
        Gate::Unitary {
            name: name.into(),
            params: Vec::new(),
            targets,
            controls: Vec::new(),
            classical_controls: Vec::new(),
        }
    }

    pub fn controlled(
        name: impl Into<String>,
        targets: Vec<WireId>,
        controls: Vec<SignedControl>,
    ) -> Self {
        Gate::Unitary {
            name: name.into(),
            params: Vec::new(),
            targets,
            controls,
            classical_controls: Vec::new(),
        }
    }

    /// Gates that accept additional controls.
    pub fn is_controllable(&self) -> bool {
        matches!(self, Gate::Unitary { .. } | Gate::Call { .. } | Gate::Comment { .. })
    }

    /// Every wire the gate operates on, in operand order. Comment labels are
    /// not operands.
    pub fn wires(&self) -> Vec<WireId> {
        match self {
            Gate::Unitary { targets, controls, classical_controls, .. } => targets
                .iter()
                .copied()
                .chain(controls.iter().map(|c| c.wire))
                .chain(classical_controls.iter().map(|c| c.wire))
                .collect(),
            Gate::Init { wire, .. }
            | Gate::TermAssert { wire, .. }
            | Gate::Discard { wire, .. }
            | Gate::Measure { wire } => vec![*wire],
            Gate::Classical { targets, sources, .. } => {
                targets.iter().chain(sources.iter()).copied().collect()
            }
            Gate::Call { inputs, outputs, controls, classical_controls, .. } => {
                let mut ws: Vec<WireId> = inputs.clone();
                for w in outputs {
                    if !ws.contains(w) {
                        ws.push(*w);
                    }
                }
                ws.extend(controls.iter().map(|c| c.wire));
                ws.extend(classical_controls.iter().map(|c| c.wire));
                ws
            }
            Gate::Comment { .. } => Vec::new(),
        }
    }

    /// Number of distinct wires touched. Used for gate-set width limits.
    pub fn width(&self) -> usize {
        self.wires().into_iter().collect::<BTreeSet<_>>().len()
    }

    /// Apply `f` to every wire id mentioned by the gate, including labels.
    pub fn map_wires(&self, mut f: impl FnMut(WireId) -> WireId) -> Gate {
        let ctl = |cs: &[SignedControl], f: &mut dyn FnMut(WireId) -> WireId| {
            cs.iter()
                .map(|c| SignedControl { wire: f(c.wire), polarity: c.polarity })
                .collect::<Vec<_>>()
        };
        match self {
            Gate::Unitary { name, params, targets, controls, classical_controls } => {
                Gate::Unitary {
                    name: name.clone(),
                    params: params.clone(),
                    targets: targets.iter().map(|w| f(*w)).collect(),
                    controls: ctl(controls, &mut f),
                    classical_controls: ctl(classical_controls, &mut f),
                }
            }
            Gate::Init { wire, kind, value } => {
                Gate::Init { wire: f(*wire), kind: *kind, value: *value }
            }
            Gate::TermAssert { wire, kind, value } => {
                Gate::TermAssert { wire: f(*wire), kind: *kind, value: *value }
            }
            Gate::Discard { wire, kind } => Gate::Discard { wire: f(*wire), kind: *kind },
            Gate::Measure { wire } => Gate::Measure { wire: f(*wire) },
            Gate::Classical { op, targets, sources } => Gate::Classical {
                op: *op,
                targets: targets.iter().map(|w| f(*w)).collect(),
                sources: sources.iter().map(|w| f(*w)).collect(),
            },
            Gate::Call { name, inputs, outputs, controls, classical_controls } => Gate::Call {
                name: name.clone(),
                inputs: inputs.iter().map(|w| f(*w)).collect(),
                outputs: outputs.iter().map(|w| f(*w)).collect(),
                controls: ctl(controls, &mut f),
                classical_controls: ctl(classical_controls, &mut f),
            },
            Gate::Comment { text, labels } => Gate::Comment {
                text: text.clone(),
                labels: labels.iter().map(|(w, l)| (f(*w), l.clone())).collect(),
            },
        }
    }

    /// Largest wire id mentioned by the gate.
    pub fn max_wire(&self) -> Option<WireId> {
        let mut m = self.wires().into_iter().max();
        if let Gate::Comment { labels, .. } = self {
            m = labels.iter().map(|(w, _)| *w).max();
        }
        m
    }
}

/// A named subcircuit in a circuit's subroutine table.
#[derive(Clone, Debug, PartialEq)]
pub struct SubroutineDef {
    pub name: String,
    pub circuit: Circuit,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub inputs: Vec<(WireId, WireKind)>,
    pub gates: Vec<Gate>,
    pub outputs: Vec<(WireId, WireKind)>,
    /// Flat table shared by the top-level circuit and every subroutine body.
    /// Subroutine bodies keep their own table empty.
    pub subroutines: BTreeMap<String, SubroutineDef>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IrError {
    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),
    #[error("subroutine \"{0}\" defined twice with different bodies")]
    SubroutineClash(String),
}

impl Circuit {
    pub fn input_kinds(&self) -> Vec<WireKind> {
        self.inputs.iter().map(|(_, k)| *k).collect()
    }

    pub fn output_kinds(&self) -> Vec<WireKind> {
        self.outputs.iter().map(|(_, k)| *k).collect()
    }

    /// Largest wire id used anywhere in the top-level body.
    pub fn max_wire(&self) -> Option<WireId> {
        self.inputs
            .iter()
            .chain(self.outputs.iter())
            .map(|(w, _)| *w)
            .chain(self.gates.iter().filter_map(Gate::max_wire))
            .max()
    }

    /// Next id guaranteed to be unused by the top-level body.
    pub fn fresh_wire(&self) -> u32 {
        self.max_wire().map_or(0, |w| w.0 + 1)
    }

    /// Apply a wire renaming to the top-level body (not to subroutines).
    pub fn rename_wires(&self, mut f: impl FnMut(WireId) -> WireId) -> Circuit {
        Circuit {
            inputs: self.inputs.iter().map(|(w, k)| (f(*w), *k)).collect(),
            gates: self.gates.iter().map(|g| g.map_wires(&mut f)).collect(),
            outputs: self.outputs.iter().map(|(w, k)| (f(*w), *k)).collect(),
            subroutines: self.subroutines.clone(),
        }
    }

    /// Renumber wires 0, 1, 2, ... in order of first appearance (inputs first).
    /// Two circuits are equal "up to wire renaming" iff their canonical forms
    /// are equal.
    pub fn canonical(&self) -> Circuit {
        let mut map: HashMap<WireId, WireId> = HashMap::new();
        let mut next = 0u32;
        let mut visit = |w: WireId, map: &mut HashMap<WireId, WireId>| {
            map.entry(w).or_insert_with(|| {
                next += 1;
                WireId(next - 1)
            });
        };
        for (w, _) in &self.inputs {
            visit(*w, &mut map);
        }
        for g in &self.gates {
            g.map_wires(|w| {
                visit(w, &mut map);
                w
            });
        }
        for (w, _) in &self.outputs {
            visit(*w, &mut map);
        }
        let mut c = self.rename_wires(|w| map[&w]);
        c.subroutines = self
            .subroutines
            .iter()
            .map(|(n, s)| {
                (n.clone(), SubroutineDef { name: n.clone(), circuit: s.circuit.canonical() })
            })
            .collect();
        c
    }

    /// Structural equality modulo wire renaming.
    pub fn structurally_eq(&self, other: &Circuit) -> bool {
        self.canonical() == other.canonical()
    }

    /// Merge another subroutine table into this circuit's table.
    pub fn merge_subroutines(
        &mut self,
        table: &BTreeMap<String, SubroutineDef>,
    ) -> Result<(), IrError> {
        merge_tables(&mut self.subroutines, table)
    }
}

pub(crate) fn merge_tables(
    into: &mut BTreeMap<String, SubroutineDef>,
    from: &BTreeMap<String, SubroutineDef>,
) -> Result<(), IrError> {
    for (name, def) in from {
        match into.get(name) {
            Some(existing) if !existing.circuit.structurally_eq(&def.circuit) => {
                return Err(IrError::SubroutineClash(name.clone()));
            }
            Some(_) => {}
            None => {
                into.insert(name.clone(), def.clone());
            }
        }
    }
    Ok(())
}

/// The gateless circuit over wires of the given kinds.
pub fn identity(kinds: &[WireKind]) -> Circuit {
    let wires: Vec<(WireId, WireKind)> =
        kinds.iter().enumerate().map(|(i, k)| (WireId(i as u32), *k)).collect();
    Circuit {
        inputs: wires.clone(),
        gates: Vec::new(),
        outputs: wires,
        subroutines: BTreeMap::new(),
    }
}

/// Sequential composition: `b` runs on the outputs of `a`.
///
/// The wires of `b` are renamed so that its inputs coincide positionally with
/// the outputs of `a` and its internal wires do not collide with any wire of
/// `a`.
pub fn concat(a: &Circuit, b: &Circuit) -> Result<Circuit, IrError> {
    if a.output_kinds() != b.input_kinds() {
        return Err(IrError::InterfaceMismatch(format!(
            "outputs {:?} do not match inputs {:?}",
            a.output_kinds(),
            b.input_kinds()
        )));
    }
    let mut map: HashMap<WireId, WireId> = b
        .inputs
        .iter()
        .zip(&a.outputs)
        .map(|((bw, _), (aw, _))| (*bw, *aw))
        .collect();
    let mut next = a.fresh_wire();
    let renamed = b.rename_wires(|w| {
        *map.entry(w).or_insert_with(|| {
            next += 1;
            WireId(next - 1)
        })
    });
    let mut out = Circuit {
        inputs: a.inputs.clone(),
        gates: a.gates.iter().chain(renamed.gates.iter()).cloned().collect(),
        outputs: renamed.outputs,
        subroutines: a.subroutines.clone(),
    };
    out.merge_subroutines(&b.subroutines)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateWire(WireId),
    DeadWire(WireId),
    AlreadyLive(WireId),
    WrongKind { wire: WireId, expected: WireKind, found: WireKind },
    BadArity(String),
    UnknownSubroutine(String),
    CallInterface(String),
    CyclicSubroutines(String),
    DuplicateInput(WireId),
    OutputMismatch(String),
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::DuplicateWire(w) => write!(f, "duplicate wire {w}"),
            ViolationKind::DeadWire(w) => write!(f, "wire {w} is not live"),
            ViolationKind::AlreadyLive(w) => write!(f, "wire {w} is already live"),
            ViolationKind::WrongKind { wire, found, .. } => write!(f, "wire {wire} is {found}"),
            ViolationKind::BadArity(s) => write!(f, "bad arity: {s}"),
            ViolationKind::UnknownSubroutine(s) => write!(f, "unknown subroutine \"{s}\""),
            ViolationKind::CallInterface(s) => write!(f, "call interface mismatch: {s}"),
            ViolationKind::CyclicSubroutines(s) => {
                write!(f, "subroutine \"{s}\" is part of a call cycle")
            }
            ViolationKind::DuplicateInput(w) => write!(f, "input wire {w} listed twice"),
            ViolationKind::OutputMismatch(s) => write!(f, "outputs do not match live wires: {s}"),
        }
    }
}

/// A well-formedness violation. `gate` is the index into the body's gate
/// list; `None` for interface-level problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subroutine: Option<String>,
    pub gate: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.subroutine {
            write!(f, "in \"{s}\": ")?;
        }
        match self.gate {
            Some(i) => write!(f, "gate {i}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Check liveness, kinds, no-cloning, call interfaces and acyclicity of the
/// subroutine graph. Returns every violation found; empty means valid.
pub fn validate(circuit: &Circuit) -> Vec<Violation> {
    let table = &circuit.subroutines;
    let mut out = validate_body(circuit, table, None);
    for (name, def) in table {
        out.extend(validate_body(&def.circuit, table, Some(name)));
    }
    for name in cyclic_subroutines(table) {
        out.push(Violation {
            subroutine: None,
            gate: None,
            kind: ViolationKind::CyclicSubroutines(name),
        });
    }
    out
}

fn cyclic_subroutines(table: &BTreeMap<String, SubroutineDef>) -> Vec<String> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    fn visit(
        name: &str,
        table: &BTreeMap<String, SubroutineDef>,
        marks: &mut HashMap<String, Mark>,
        cyclic: &mut BTreeSet<String>,
    ) {
        match marks.get(name) {
            Some(Mark::Done) => return,
            Some(Mark::Visiting) => {
                cyclic.insert(name.to_string());
                return;
            }
            None => {}
        }
        marks.insert(name.to_string(), Mark::Visiting);
        if let Some(def) = table.get(name) {
            for g in &def.circuit.gates {
                if let Gate::Call { name: callee, .. } = g {
                    visit(callee, table, marks, cyclic);
                }
            }
        }
        marks.insert(name.to_string(), Mark::Done);
    }
    let mut marks = HashMap::new();
    let mut cyclic = BTreeSet::new();
    for name in table.keys() {
        visit(name, table, &mut marks, &mut cyclic);
    }
    cyclic.into_iter().collect()
}

/// Liveness walk over a single body.
struct Walk<'a> {
    live: HashMap<WireId, WireKind>,
    out: Vec<Violation>,
    sub: Option<&'a String>,
    gate: Option<usize>,
}

impl Walk<'_> {
    fn report(&mut self, kind: ViolationKind) {
        self.out.push(Violation { subroutine: self.sub.cloned(), gate: self.gate, kind });
    }

    fn expect(&mut self, w: WireId, kind: WireKind) {
        match self.live.get(&w) {
            None => self.report(ViolationKind::DeadWire(w)),
            Some(k) if *k != kind => {
                let found = *k;
                self.report(ViolationKind::WrongKind { wire: w, expected: kind, found })
            }
            Some(_) => {}
        }
    }

    fn expect_live(&mut self, w: WireId) -> Option<WireKind> {
        let k = self.live.get(&w).copied();
        if k.is_none() {
            self.report(ViolationKind::DeadWire(w));
        }
        k
    }

    fn distinct(&mut self, ws: &[WireId]) {
        let mut seen = BTreeSet::new();
        for w in ws {
            if !seen.insert(*w) {
                self.report(ViolationKind::DuplicateWire(*w));
            }
        }
    }
}

fn validate_body(
    c: &Circuit,
    table: &BTreeMap<String, SubroutineDef>,
    sub: Option<&String>,
) -> Vec<Violation> {
    let mut walk = Walk { live: HashMap::new(), out: Vec::new(), sub, gate: None };
    for (w, k) in &c.inputs {
        if walk.live.insert(*w, *k).is_some() {
            walk.report(ViolationKind::DuplicateInput(*w));
        }
    }
    for (i, g) in c.gates.iter().enumerate() {
        walk.gate = Some(i);
        check_gate(&mut walk, g, table);
    }
    walk.gate = None;
    let mut listed = BTreeSet::new();
    for (w, k) in &c.outputs {
        if !listed.insert(*w) {
            walk.report(ViolationKind::OutputMismatch(format!("wire {w} listed twice")));
        }
        match walk.live.get(w) {
            None => walk.report(ViolationKind::OutputMismatch(format!("wire {w} is not live"))),
            Some(found) if found != k => walk.report(ViolationKind::OutputMismatch(format!(
                "wire {w} is {found}, declared {k}"
            ))),
            Some(_) => {}
        }
    }
    let mut dangling: Vec<WireId> =
        walk.live.keys().filter(|w| !listed.contains(w)).copied().collect();
    dangling.sort();
    if !dangling.is_empty() {
        walk.report(ViolationKind::OutputMismatch(format!(
            "live wires {dangling:?} missing from outputs"
        )));
    }
    walk.out
}

fn check_gate(walk: &mut Walk<'_>, g: &Gate, table: &BTreeMap<String, SubroutineDef>) {
    match g {
        Gate::Unitary { name, targets, controls, classical_controls, .. } => {
            walk.distinct(&g.wires());
            if targets.is_empty() {
                walk.report(ViolationKind::BadArity(format!("gate \"{name}\" has no targets")));
            }
            for t in targets {
                walk.expect(*t, WireKind::Quantum);
            }
            for c in controls {
                walk.expect(c.wire, WireKind::Quantum);
            }
            for c in classical_controls {
                walk.expect(c.wire, WireKind::Classical);
            }
        }
        Gate::Init { wire, kind, .. } => {
            if walk.live.insert(*wire, *kind).is_some() {
                walk.report(ViolationKind::AlreadyLive(*wire));
            }
        }
        Gate::TermAssert { wire, kind, .. } | Gate::Discard { wire, kind } => {
            walk.expect(*wire, *kind);
            walk.live.remove(wire);
        }
        Gate::Measure { wire } => {
            walk.expect(*wire, WireKind::Quantum);
            if walk.live.contains_key(wire) {
                walk.live.insert(*wire, WireKind::Classical);
            }
        }
        Gate::Classical { op, targets, sources } => {
            walk.distinct(&g.wires());
            let (lo, hi) = op.source_arity();
            if targets.len() != 1 || sources.len() < lo || sources.len() > hi {
                walk.report(ViolationKind::BadArity(format!(
                    "classical \"{}\" with {} targets and {} sources",
                    op.name(),
                    targets.len(),
                    sources.len()
                )));
            }
            for w in targets.iter().chain(sources) {
                walk.expect(*w, WireKind::Classical);
            }
        }
        Gate::Call { name, inputs, outputs, controls, classical_controls } => {
            let mut operands = inputs.clone();
            operands.extend(controls.iter().map(|c| c.wire));
            operands.extend(classical_controls.iter().map(|c| c.wire));
            walk.distinct(&operands);
            walk.distinct(outputs);
            let in_kinds: Vec<Option<WireKind>> =
                inputs.iter().map(|w| walk.expect_live(*w)).collect();
            for c in controls {
                walk.expect(c.wire, WireKind::Quantum);
            }
            for c in classical_controls {
                walk.expect(c.wire, WireKind::Classical);
            }
            let Some(def) = table.get(name) else {
                walk.report(ViolationKind::UnknownSubroutine(name.clone()));
                for w in inputs {
                    walk.live.remove(w);
                }
                for w in outputs {
                    walk.live.insert(*w, WireKind::Quantum);
                }
                return;
            };
            let body = &def.circuit;
            if inputs.len() != body.inputs.len() || outputs.len() != body.outputs.len() {
                walk.report(ViolationKind::CallInterface(format!(
                    "\"{name}\" takes {} inputs and {} outputs, called with {} and {}",
                    body.inputs.len(),
                    body.outputs.len(),
                    inputs.len(),
                    outputs.len()
                )));
            } else {
                for ((w, k), (_, want)) in inputs.iter().zip(&in_kinds).zip(&body.inputs) {
                    if let Some(k) = k {
                        if k != want {
                            walk.report(ViolationKind::WrongKind {
                                wire: *w,
                                expected: *want,
                                found: *k,
                            });
                        }
                    }
                }
                // Pass-through outputs must reuse the matching input id;
                // everything else must be a fresh id.
                for (j, (sw, _)) in body.outputs.iter().enumerate() {
                    let through = body.inputs.iter().position(|(iw, _)| iw == sw);
                    match through {
                        Some(i) if outputs[j] != inputs[i] => {
                            walk.report(ViolationKind::CallInterface(format!(
                                "output {j} of \"{name}\" passes input {i} through but is renamed"
                            )))
                        }
                        None if inputs.contains(&outputs[j]) => {
                            walk.report(ViolationKind::CallInterface(format!(
                                "output {j} of \"{name}\" is a new wire but reuses an input id"
                            )))
                        }
                        _ => {}
                    }
                }
            }
            for w in inputs {
                walk.live.remove(w);
            }
            for (j, w) in outputs.iter().enumerate() {
                let kind = body.outputs.get(j).map_or(WireKind::Quantum, |(_, k)| *k);
                if walk.live.insert(*w, kind).is_some() {
                    walk.report(ViolationKind::AlreadyLive(*w));
                }
            }
        }
        Gate::Comment { labels, .. } => {
            for (w, _) in labels {
                walk.expect_live(*w);
            }
        }
    }
}
