//! Procedural circuit construction.
//!
//! A [`BuildContext`] holds the circuit under construction: qubits and bits
//! are plain wire references, gates are appended one at a time, and block
//! operators ([`BuildContext::with_controls`], [`BuildContext::with_ancilla`],
//! [`BuildContext::with_computed`], [`BuildContext::boxed`]) structure the
//! result. Every gate is checked against the live-wire set as it is emitted.
//!
//! In interactive mode the context also drives a [`Session`], so measured
//! bits can be read back during generation ([`BuildContext::dynamic_lift`]).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::ir::{merge_tables, Circuit, Gate, IrError, SignedControl, SubroutineDef, WireId, WireKind};
use crate::sim::{GateRegistry, Session, SimConfig, SimError};
use crate::transforms::{describe, reverse_circuit, reverse_gates, reversed_subroutines, TransformError};

/// Reference to a live quantum wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qubit(pub WireId);

/// Reference to a live classical wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bit(pub WireId);

impl Qubit {
    pub fn wire(self) -> WireId {
        self.0
    }
    pub fn pos(self) -> SignedControl {
        SignedControl::pos(self.0)
    }
    pub fn neg(self) -> SignedControl {
        SignedControl::neg(self.0)
    }
}

impl Bit {
    pub fn wire(self) -> WireId {
        self.0
    }
    pub fn pos(self) -> SignedControl {
        SignedControl::pos(self.0)
    }
    pub fn neg(self) -> SignedControl {
        SignedControl::neg(self.0)
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    RecordOnly,
    Interactive(SimConfig),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("wire {0} is not live")]
    DeadWire(WireId),
    #[error("wire {wire} is {found}, expected {expected}")]
    WrongKind { wire: WireId, expected: WireKind, found: WireKind },
    #[error("duplicate wire {0}")]
    DuplicateWire(WireId),
    #[error("{0} not controllable")]
    NotControllable(String),
    #[error("control wire {0} used as a target")]
    ControlAsTarget(WireId),
    #[error("ancilla {0} was terminated inside its scope")]
    AncillaTerminated(WireId),
    #[error("computed segment contains irreversible gate: {0}")]
    Irreversible(String),
    #[error("dynamic lifting unavailable in record-only mode")]
    LiftUnavailable,
    #[error("dynamic lifting inside a computed segment")]
    LiftInComputed,
    #[error("dangling wire {0}")]
    DanglingWire(WireId),
    #[error("subroutine \"{0}\" already defined with a different body")]
    BoxClash(String),
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

impl From<IrError> for BuildError {
    fn from(e: IrError) -> Self {
        match e {
            IrError::SubroutineClash(n) => BuildError::BoxClash(n),
            IrError::InterfaceMismatch(m) => BuildError::Interface(m),
        }
    }
}

pub type BuildResult<T> = Result<T, BuildError>;

pub struct BuildContext {
    next_id: u32,
    inputs: Vec<(WireId, WireKind)>,
    live: BTreeMap<WireId, WireKind>,
    gates: Vec<Gate>,
    control_stack: Vec<Vec<SignedControl>>,
    subroutines: BTreeMap<String, SubroutineDef>,
    registry: Arc<GateRegistry>,
    session: Option<Session>,
    /// Gates before this index have been sent to the session.
    flushed: usize,
    /// Nesting depth of boxed bodies under construction.
    depth: usize,
    /// Nesting depth of `with_computed` compute segments.
    computing: usize,
}

impl Default for BuildContext {
    fn default() -> Self {
        BuildContext::new(Backend::RecordOnly)
    }
}

impl BuildContext {
    pub fn new(backend: Backend) -> Self {
        let (registry, session) = match backend {
            Backend::RecordOnly => (Arc::new(GateRegistry::builtins()), None),
            Backend::Interactive(cfg) => (cfg.registry.clone(), Some(Session::new(&cfg))),
        };
        BuildContext {
            next_id: 0,
            inputs: Vec::new(),
            live: BTreeMap::new(),
            gates: Vec::new(),
            control_stack: Vec::new(),
            subroutines: BTreeMap::new(),
            registry,
            session,
            flushed: 0,
            depth: 0,
            computing: 0,
        }
    }

    /// Record-only context using `registry` for reversal.
    pub fn with_registry(registry: GateRegistry) -> Self {
        BuildContext { registry: Arc::new(registry), ..BuildContext::default() }
    }

    pub fn interactive(config: SimConfig) -> Self {
        BuildContext::new(Backend::Interactive(config))
    }

    fn child(&self) -> Self {
        BuildContext {
            subroutines: self.subroutines.clone(),
            registry: self.registry.clone(),
            depth: self.depth + 1,
            ..BuildContext::default()
        }
    }

    pub fn registry(&self) -> &GateRegistry {
        &self.registry
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn subroutines(&self) -> &BTreeMap<String, SubroutineDef> {
        &self.subroutines
    }

    pub fn is_live(&self, w: WireId) -> bool {
        self.live.contains_key(&w)
    }

    pub fn kind_of(&self, w: WireId) -> Option<WireKind> {
        self.live.get(&w).copied()
    }

    /// Live wires in id order.
    pub fn live_wires(&self) -> Vec<WireId> {
        self.live.keys().copied().collect()
    }

    fn fresh(&mut self) -> WireId {
        self.next_id += 1;
        WireId(self.next_id - 1)
    }

    fn declare(&mut self, kind: WireKind) -> BuildResult<WireId> {
        let w = self.fresh();
        self.inputs.push((w, kind));
        self.live.insert(w, kind);
        if let Some(s) = self.session.as_mut() {
            s.declare_input(w, kind)?;
        }
        Ok(w)
    }

    pub fn input_qubit(&mut self) -> BuildResult<Qubit> {
        self.declare(WireKind::Quantum).map(Qubit)
    }

    pub fn input_bit(&mut self) -> BuildResult<Bit> {
        self.declare(WireKind::Classical).map(Bit)
    }

    pub fn input_qubits(&mut self, n: usize) -> BuildResult<Vec<Qubit>> {
        (0..n).map(|_| self.input_qubit()).collect()
    }

    fn expect(&self, w: WireId, kind: WireKind) -> BuildResult<()> {
        match self.live.get(&w) {
            None => Err(BuildError::DeadWire(w)),
            Some(k) if *k != kind => Err(BuildError::WrongKind { wire: w, expected: kind, found: *k }),
            Some(_) => Ok(()),
        }
    }

    fn effective_controls(&self) -> Vec<SignedControl> {
        self.control_stack.iter().flatten().copied().collect()
    }

    /// Check a gate against the live set and update it.
    fn track(&mut self, g: &Gate) -> BuildResult<()> {
        let ws = g.wires();
        for (i, w) in ws.iter().enumerate() {
            if ws[..i].contains(w) {
                return Err(BuildError::DuplicateWire(*w));
            }
        }
        let q = WireKind::Quantum;
        let c = WireKind::Classical;
        match g {
            Gate::Unitary { targets, controls, classical_controls, .. } => {
                for w in targets.iter().chain(controls.iter().map(|x| &x.wire)) {
                    self.expect(*w, q)?;
                }
                for x in classical_controls {
                    self.expect(x.wire, c)?;
                }
            }
            Gate::Init { wire, kind, .. } => {
                if self.live.contains_key(wire) {
                    return Err(BuildError::DuplicateWire(*wire));
                }
                self.live.insert(*wire, *kind);
            }
            Gate::TermAssert { wire, kind, .. } | Gate::Discard { wire, kind } => {
                self.expect(*wire, *kind)?;
                self.live.remove(wire);
            }
            Gate::Measure { wire } => {
                self.expect(*wire, q)?;
                self.live.insert(*wire, c);
            }
            Gate::Classical { targets, sources, .. } => {
                for w in targets.iter().chain(sources) {
                    self.expect(*w, c)?;
                }
            }
            Gate::Call { name, inputs, outputs, controls, classical_controls } => {
                let def = self.subroutines.get(name).ok_or_else(|| {
                    BuildError::Transform(TransformError::UnknownSubroutine(name.clone()))
                })?;
                let ins = def.circuit.input_kinds();
                let outs = def.circuit.output_kinds();
                if ins.len() != inputs.len() || outs.len() != outputs.len() {
                    return Err(BuildError::Interface(format!("call to \"{name}\"")));
                }
                for x in controls {
                    self.expect(x.wire, q)?;
                }
                for x in classical_controls {
                    self.expect(x.wire, c)?;
                }
                for (w, k) in inputs.iter().zip(&ins) {
                    self.expect(*w, *k)?;
                }
                for w in inputs {
                    self.live.remove(w);
                }
                for (w, k) in outputs.iter().zip(outs) {
                    if self.live.insert(*w, k).is_some() {
                        return Err(BuildError::DuplicateWire(*w));
                    }
                }
            }
            Gate::Comment { labels, .. } => {
                for (w, _) in labels {
                    if !self.live.contains_key(w) {
                        return Err(BuildError::DeadWire(*w));
                    }
                }
            }
        }
        Ok(())
    }

    /// Append a gate as is, without the surrounding controls.
    fn emit_raw(&mut self, g: Gate) -> BuildResult<()> {
        self.track(&g)?;
        self.gates.push(g);
        Ok(())
    }

    /// Append a gate, attaching the controls of every enclosing
    /// `with_controls` block.
    pub fn emit(&mut self, g: Gate) -> BuildResult<()> {
        let ctl = self.effective_controls();
        if ctl.is_empty() {
            return self.emit_raw(g);
        }
        let (mut qctl, mut cctl) = (Vec::new(), Vec::new());
        for c in &ctl {
            match self.live.get(&c.wire) {
                Some(WireKind::Quantum) => qctl.push(*c),
                Some(WireKind::Classical) => cctl.push(*c),
                None => return Err(BuildError::DeadWire(c.wire)),
            }
        }
        let touched = g.wires();
        if let Some(c) = ctl.iter().find(|c| touched.contains(&c.wire)) {
            return Err(BuildError::ControlAsTarget(c.wire));
        }
        let g = match g {
            Gate::Unitary { name, params, targets, mut controls, mut classical_controls } => {
                controls.extend(qctl);
                classical_controls.extend(cctl);
                Gate::Unitary { name, params, targets, controls, classical_controls }
            }
            Gate::Call { name, inputs, outputs, mut controls, mut classical_controls } => {
                controls.extend(qctl);
                classical_controls.extend(cctl);
                Gate::Call { name, inputs, outputs, controls, classical_controls }
            }
            g @ Gate::Comment { .. } => g,
            other => return Err(BuildError::NotControllable(describe(&other))),
        };
        self.emit_raw(g)
    }

    pub fn qinit_bool(&mut self, value: bool) -> BuildResult<Qubit> {
        let w = WireId(self.next_id);
        self.emit(Gate::Init { wire: w, kind: WireKind::Quantum, value })?;
        self.next_id += 1;
        Ok(Qubit(w))
    }

    pub fn cinit_bool(&mut self, value: bool) -> BuildResult<Bit> {
        let w = WireId(self.next_id);
        self.emit(Gate::Init { wire: w, kind: WireKind::Classical, value })?;
        self.next_id += 1;
        Ok(Bit(w))
    }

    /// Assertively terminate a qubit known to be in `|value⟩`.
    pub fn qterm(&mut self, q: Qubit, value: bool) -> BuildResult<()> {
        self.emit(Gate::TermAssert { wire: q.0, kind: WireKind::Quantum, value })
    }

    pub fn cterm(&mut self, b: Bit, value: bool) -> BuildResult<()> {
        self.emit(Gate::TermAssert { wire: b.0, kind: WireKind::Classical, value })
    }

    /// Terminate a wire without asserting its value.
    pub fn discard(&mut self, w: WireId) -> BuildResult<()> {
        let kind = self.kind_of(w).ok_or(BuildError::DeadWire(w))?;
        self.emit(Gate::Discard { wire: w, kind })
    }

    pub fn measure(&mut self, q: Qubit) -> BuildResult<Bit> {
        self.emit(Gate::Measure { wire: q.0 })?;
        Ok(Bit(q.0))
    }

    /// Named unitary on `targets`. Unregistered names are allowed; they only
    /// matter to simulation and reversal.
    pub fn gate(&mut self, name: &str, params: &[f64], targets: &[Qubit]) -> BuildResult<()> {
        self.gate_ctrl(name, params, targets, &[])
    }

    /// Named unitary with explicit controls, placed before any block controls.
    pub fn gate_ctrl(
        &mut self,
        name: &str,
        params: &[f64],
        targets: &[Qubit],
        controls: &[SignedControl],
    ) -> BuildResult<()> {
        let (mut qctl, mut cctl) = (Vec::new(), Vec::new());
        for c in controls {
            match self.live.get(&c.wire) {
                Some(WireKind::Quantum) => qctl.push(*c),
                Some(WireKind::Classical) => cctl.push(*c),
                None => return Err(BuildError::DeadWire(c.wire)),
            }
        }
        self.emit(Gate::Unitary {
            name: name.to_string(),
            params: params.to_vec(),
            targets: targets.iter().map(|q| q.0).collect(),
            controls: qctl,
            classical_controls: cctl,
        })
    }

    pub fn hadamard(&mut self, q: Qubit) -> BuildResult<()> {
        self.gate("H", &[], &[q])
    }

    pub fn qnot(&mut self, q: Qubit) -> BuildResult<()> {
        self.gate("not", &[], &[q])
    }

    /// `not` on `target` controlled by `control`. The target comes first.
    pub fn controlled_not(&mut self, target: Qubit, control: Qubit) -> BuildResult<()> {
        self.gate_ctrl("not", &[], &[target], &[control.pos()])
    }

    /// Run `body` with `controls` attached to every gate it emits. Gates that
    /// cannot be controlled are rejected.
    pub fn with_controls<R>(
        &mut self,
        controls: &[SignedControl],
        body: impl FnOnce(&mut Self) -> BuildResult<R>,
    ) -> BuildResult<R> {
        for (i, c) in controls.iter().enumerate() {
            if !self.live.contains_key(&c.wire) {
                return Err(BuildError::DeadWire(c.wire));
            }
            if controls[..i].iter().any(|d| d.wire == c.wire) {
                return Err(BuildError::DuplicateWire(c.wire));
            }
        }
        self.control_stack.push(controls.to_vec());
        let r = body(self);
        self.control_stack.pop();
        r
    }

    /// Scoped ancilla: `Init0`, `body`, `TermAssert0`.
    pub fn with_ancilla<R>(&mut self, body: impl FnOnce(&mut Self, Qubit) -> BuildResult<R>) -> BuildResult<R> {
        self.with_ancilla_init(&[false], |ctx, qs| body(ctx, qs[0]))
    }

    /// Scoped ancillas initialized to `values` and asserted to hold the same
    /// values at the end.
    pub fn with_ancilla_init<R>(
        &mut self,
        values: &[bool],
        body: impl FnOnce(&mut Self, &[Qubit]) -> BuildResult<R>,
    ) -> BuildResult<R> {
        let qs: Vec<Qubit> = values.iter().map(|v| self.qinit_bool(*v)).collect::<Result<_, _>>()?;
        let r = body(self, &qs)?;
        for (q, v) in qs.iter().zip(values).rev() {
            if self.kind_of(q.0) != Some(WireKind::Quantum) {
                return Err(BuildError::AncillaTerminated(q.0));
            }
            self.qterm(*q, *v)?;
        }
        Ok(r)
    }

    /// Emit `compute`, then `use_`, then the inverse of `compute`. Wires
    /// created by `compute` are uncomputed and dead afterwards.
    pub fn with_computed<T, R>(
        &mut self,
        compute: impl FnOnce(&mut Self) -> BuildResult<T>,
        use_: impl FnOnce(&mut Self, &T) -> BuildResult<R>,
    ) -> BuildResult<R> {
        let mark = self.gates.len();
        self.computing += 1;
        let t = compute(self);
        self.computing -= 1;
        let t = t?;
        let segment = self.gates[mark..].to_vec();
        let undo = reverse_gates(&segment, &self.registry).map_err(|e| match e {
            TransformError::Irreversible { gate, .. } => BuildError::Irreversible(gate),
            other => BuildError::Transform(other),
        })?;
        let inv_subs = reversed_subroutines(&segment, &self.subroutines, &self.registry)?;
        merge_tables(&mut self.subroutines, &inv_subs)?;
        let r = use_(self, &t)?;
        for g in undo {
            self.emit_raw(g)?;
        }
        Ok(r)
    }

    /// Boxed subcircuit: `f` is generated once into the subroutine table
    /// under `name` and every use emits a single `Call`. Returns the call's
    /// output wires; wires passed through by `f` keep their ids.
    ///
    /// A repeated top-level use regenerates the body and fails if it
    /// differs from the stored one.
    pub fn boxed(
        &mut self,
        name: &str,
        inputs: &[WireId],
        f: impl FnOnce(&mut BuildContext, &[WireId]) -> BuildResult<Vec<WireId>>,
    ) -> BuildResult<Vec<WireId>> {
        let kinds: Vec<WireKind> =
            inputs.iter().map(|w| self.kind_of(*w).ok_or(BuildError::DeadWire(*w))).collect::<Result<_, _>>()?;
        let known = self.subroutines.contains_key(name);
        if !known || self.depth == 0 {
            let mut child = self.child();
            let args: Vec<WireId> = kinds.iter().map(|k| child.declare(*k)).collect::<Result<_, _>>()?;
            let outs = f(&mut child, &args)?;
            let body = child.finalize(&outs)?;
            let mut table = body.subroutines.clone();
            let def = SubroutineDef { name: name.to_string(), circuit: Circuit { subroutines: BTreeMap::new(), ..body } };
            match self.subroutines.get(name) {
                Some(old) if !old.circuit.structurally_eq(&def.circuit) => {
                    return Err(BuildError::BoxClash(name.to_string()));
                }
                Some(_) => {}
                None => {
                    table.insert(name.to_string(), def);
                }
            }
            merge_tables(&mut self.subroutines, &table)?;
        }
        let def = &self.subroutines[name].circuit;
        if def.input_kinds() != kinds {
            return Err(BuildError::Interface(format!("box \"{name}\" called with different input kinds")));
        }
        let pass: HashMap<WireId, usize> = def.inputs.iter().enumerate().map(|(i, (w, _))| (*w, i)).collect();
        let out_ids: Vec<Option<usize>> = def.outputs.iter().map(|(w, _)| pass.get(w).copied()).collect();
        let outputs: Vec<WireId> = out_ids
            .into_iter()
            .map(|p| match p {
                Some(i) => inputs[i],
                None => self.fresh(),
            })
            .collect();
        self.emit(Gate::Call {
            name: name.to_string(),
            inputs: inputs.to_vec(),
            outputs: outputs.clone(),
            controls: Vec::new(),
            classical_controls: Vec::new(),
        })?;
        Ok(outputs)
    }

    /// Append a whole circuit with its inputs bound to `inputs`; returns the
    /// wires carrying its outputs.
    pub fn append_circuit(&mut self, c: &Circuit, inputs: &[WireId]) -> BuildResult<Vec<WireId>> {
        if c.inputs.len() != inputs.len() {
            return Err(BuildError::Interface(format!(
                "circuit takes {} inputs, got {}",
                c.inputs.len(),
                inputs.len()
            )));
        }
        for ((_, k), w) in c.inputs.iter().zip(inputs) {
            self.expect(*w, *k)?;
        }
        merge_tables(&mut self.subroutines, &c.subroutines)?;
        let mut map: HashMap<WireId, WireId> = c.inputs.iter().zip(inputs).map(|((s, _), t)| (*s, *t)).collect();
        for g in &c.gates {
            let g = g.map_wires(|w| *map.entry(w).or_insert_with(|| {
                self.next_id += 1;
                WireId(self.next_id - 1)
            }));
            self.emit(g)?;
        }
        Ok(c.outputs.iter().map(|(w, _)| map[w]).collect())
    }

    /// Emit the inverse of the circuit generated by `f` on wires of the same
    /// kinds as `inputs`. `f` must map its interface onto itself.
    pub fn reverse_simple(
        &mut self,
        f: impl FnOnce(&mut BuildContext, &[WireId]) -> BuildResult<Vec<WireId>>,
        inputs: &[WireId],
    ) -> BuildResult<Vec<WireId>> {
        let kinds: Vec<WireKind> =
            inputs.iter().map(|w| self.kind_of(*w).ok_or(BuildError::DeadWire(*w))).collect::<Result<_, _>>()?;
        let mut child = self.child();
        let args: Vec<WireId> = kinds.iter().map(|k| child.declare(*k)).collect::<Result<_, _>>()?;
        let outs = f(&mut child, &args)?;
        let forward = child.finalize(&outs)?;
        if forward.output_kinds() != kinds {
            return Err(BuildError::Interface("reversed function changes its interface".into()));
        }
        let inverse = reverse_circuit(&forward, &self.registry)?;
        self.append_circuit(&inverse, inputs)
    }

    pub fn comment(&mut self, text: &str) -> BuildResult<()> {
        self.comment_with_label(text, &[])
    }

    /// Zero-semantics annotation, optionally naming some wires.
    pub fn comment_with_label(&mut self, text: &str, labels: &[(WireId, &str)]) -> BuildResult<()> {
        self.emit(Gate::Comment {
            text: text.to_string(),
            labels: labels.iter().map(|(w, l)| (*w, l.to_string())).collect(),
        })
    }

    fn flush(&mut self) -> BuildResult<()> {
        if let Some(s) = self.session.as_mut() {
            s.execute(&self.gates[self.flushed..], &self.subroutines)?;
            self.flushed = self.gates.len();
        }
        Ok(())
    }

    /// Execute everything emitted so far and return the value of `b`.
    pub fn dynamic_lift(&mut self, b: Bit) -> BuildResult<bool> {
        if self.session.is_none() {
            return Err(BuildError::LiftUnavailable);
        }
        if self.computing > 0 {
            return Err(BuildError::LiftInComputed);
        }
        self.expect(b.0, WireKind::Classical)?;
        self.flush()?;
        let s = self.session.as_ref().expect("checked above");
        Ok(s.bit(b.0)?)
    }

    /// The finished circuit with `outputs` in the given order. Every other
    /// live wire is an error.
    pub fn finalize(self, outputs: &[WireId]) -> BuildResult<Circuit> {
        self.finish(outputs).map(|(c, _)| c)
    }

    /// Like [`finalize`](Self::finalize), also running any unexecuted gates
    /// and returning the interactive session.
    pub fn finish_session(mut self, outputs: &[WireId]) -> BuildResult<(Circuit, Option<Session>)> {
        self.flush()?;
        self.finish(outputs)
    }

    fn finish(self, outputs: &[WireId]) -> BuildResult<(Circuit, Option<Session>)> {
        let mut outs = Vec::with_capacity(outputs.len());
        for (i, w) in outputs.iter().enumerate() {
            let k = self.kind_of(*w).ok_or(BuildError::DeadWire(*w))?;
            if outputs[..i].contains(w) {
                return Err(BuildError::DuplicateWire(*w));
            }
            outs.push((*w, k));
        }
        if let Some(w) = self.live.keys().find(|w| !outputs.contains(w)) {
            return Err(BuildError::DanglingWire(*w));
        }
        let c = Circuit { inputs: self.inputs, gates: self.gates, outputs: outs, subroutines: self.subroutines };
        Ok((c, self.session))
    }
}

/// Wire ids of a list of qubits.
pub fn wires(qs: &[Qubit]) -> Vec<WireId> {
    qs.iter().map(|q| q.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::validate;
    use crate::sim::{boolean_simulate, simulate, SimInput};

    fn mycirc(ctx: &mut BuildContext, a: Qubit, b: Qubit) -> BuildResult<()> {
        ctx.hadamard(a)?;
        ctx.hadamard(b)?;
        ctx.controlled_not(a, b)
    }

    #[test]
    fn mycirc_has_three_gates() {
        let mut ctx = BuildContext::default();
        let (a, b) = (ctx.input_qubit().unwrap(), ctx.input_qubit().unwrap());
        mycirc(&mut ctx, a, b).unwrap();
        let c = ctx.finalize(&[a.0, b.0]).unwrap();
        assert_eq!(c.gates.len(), 3);
        assert_eq!(c.gates[2], Gate::controlled("not", vec![a.0], vec![b.pos()]));
        assert!(validate(&c).is_empty());
    }

    #[test]
    fn dangling_wire_is_reported() {
        let mut ctx = BuildContext::default();
        let q = ctx.qinit_bool(false).unwrap();
        assert_eq!(ctx.finalize(&[]).unwrap_err(), BuildError::DanglingWire(q.0));
    }

    #[test]
    fn controls_distribute_and_nest() {
        let mut ctx = BuildContext::default();
        let qs = ctx.input_qubits(4).unwrap();
        ctx.with_controls(&[qs[2].pos()], |ctx| {
            ctx.with_controls(&[qs[3].neg()], |ctx| {
                ctx.hadamard(qs[0])?;
                ctx.controlled_not(qs[0], qs[1])
            })
        })
        .unwrap();
        let c = ctx.finalize(&wires(&qs)).unwrap();
        assert_eq!(c.gates[0], Gate::controlled("H", vec![qs[0].0], vec![qs[2].pos(), qs[3].neg()]));
        assert_eq!(
            c.gates[1],
            Gate::controlled("not", vec![qs[0].0], vec![qs[1].pos(), qs[2].pos(), qs[3].neg()])
        );
    }

    #[test]
    fn init_and_measure_under_controls_fail() {
        let mut ctx = BuildContext::default();
        let c = ctx.input_qubit().unwrap();
        let r = ctx.with_controls(&[c.pos()], |ctx| ctx.qinit_bool(false));
        assert_eq!(r.unwrap_err(), BuildError::NotControllable("Init".into()));
        let q = ctx.input_qubit().unwrap();
        let r = ctx.with_controls(&[c.pos()], |ctx| ctx.measure(q));
        assert!(matches!(r, Err(BuildError::NotControllable(_))));
        let r = ctx.with_controls(&[c.pos()], |ctx| ctx.hadamard(c));
        assert_eq!(r.unwrap_err(), BuildError::ControlAsTarget(c.0));
    }

    #[test]
    fn with_computed_uncomputes() {
        let mut ctx = BuildContext::default();
        let (x, y, z) = (ctx.input_qubit().unwrap(), ctx.input_qubit().unwrap(), ctx.input_qubit().unwrap());
        ctx.with_computed(
            |ctx| {
                let s = ctx.qinit_bool(false)?;
                ctx.controlled_not(s, x)?;
                ctx.controlled_not(s, y)?;
                Ok(s)
            },
            |ctx, s| ctx.controlled_not(z, *s),
        )
        .unwrap();
        let c = ctx.finalize(&[x.0, y.0, z.0]).unwrap();
        assert_eq!(c.gates.len(), 7);
        for i in 0..8u8 {
            let (a, b, t) = (i & 4 != 0, i & 2 != 0, i & 1 != 0);
            assert_eq!(boolean_simulate(&c, &[a, b, t]).unwrap(), vec![a, b, t ^ a ^ b]);
        }
    }

    #[test]
    fn with_computed_rejects_measurement() {
        let mut ctx = BuildContext::default();
        let q = ctx.input_qubit().unwrap();
        let r = ctx.with_computed(|ctx| ctx.measure(q), |_, _| Ok(()));
        assert_eq!(r.unwrap_err(), BuildError::Irreversible("Measure".into()));
    }

    #[test]
    fn boxes_are_stored_once() {
        let mut ctx = BuildContext::default();
        let qs = ctx.input_qubits(2).unwrap();
        for _ in 0..3 {
            ctx.boxed("o4", &wires(&qs), |ctx, ws| {
                ctx.hadamard(Qubit(ws[0]))?;
                Ok(ws.to_vec())
            })
            .unwrap();
        }
        let c = ctx.finalize(&wires(&qs)).unwrap();
        assert_eq!(c.gates.len(), 3);
        assert_eq!(c.subroutines.len(), 1);
        assert!(validate(&c).is_empty());

        let mut ctx = BuildContext::default();
        let q = ctx.input_qubit().unwrap();
        ctx.boxed("f", &[q.0], |ctx, ws| ctx.hadamard(Qubit(ws[0])).map(|_| ws.to_vec())).unwrap();
        let r = ctx.boxed("f", &[q.0], |ctx, ws| ctx.qnot(Qubit(ws[0])).map(|_| ws.to_vec()));
        assert_eq!(r.unwrap_err(), BuildError::BoxClash("f".into()));
    }

    #[test]
    fn lift_requires_interactive_backend() {
        let mut ctx = BuildContext::default();
        let b = ctx.cinit_bool(true).unwrap();
        assert_eq!(ctx.dynamic_lift(b), Err(BuildError::LiftUnavailable));

        let mut ctx = BuildContext::interactive(SimConfig::default());
        let b = ctx.cinit_bool(true).unwrap();
        assert_eq!(ctx.dynamic_lift(b), Ok(true));
    }

    #[test]
    fn reverse_simple_undoes() {
        let mut ctx = BuildContext::default();
        let qs = ctx.input_qubits(2).unwrap();
        mycirc(&mut ctx, qs[0], qs[1]).unwrap();
        ctx.reverse_simple(|ctx, ws| mycirc(ctx, Qubit(ws[0]), Qubit(ws[1])).map(|_| ws.to_vec()), &wires(&qs))
            .unwrap();
        let c = ctx.finalize(&wires(&qs)).unwrap();
        assert_eq!(c.gates.len(), 6);
        let r = simulate(&c, &SimInput::Basis(vec![true, false]), &SimConfig::default()).unwrap();
        assert_eq!(r.basis_outputs(1e-9), Some(vec![true, false]));
    }
}
