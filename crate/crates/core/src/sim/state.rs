use std::collections::BTreeMap;

use nalgebra::DVector;

use super::exec::{Executor, Machine};
use super::{GateRegistry, SimConfig, SimError, SplitMix64, C64};
use crate::ir::{Circuit, SignedControl, WireId, WireKind};

/// Amplitudes over the live qubits plus the values of live classical bits.
///
/// Bit `k` of an amplitude index is the state of `qubits()[k]`; a newly
/// initialized qubit becomes bit 0, shifting the others up.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: Vec<WireId>,
    amps: Vec<C64>,
    bits: BTreeMap<WireId, bool>,
}

impl Default for StateVector {
    fn default() -> Self {
        StateVector { qubits: Vec::new(), amps: vec![C64::new(1.0, 0.0)], bits: BTreeMap::new() }
    }
}

impl StateVector {
    pub fn qubits(&self) -> &[WireId] {
        &self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn bits(&self) -> &BTreeMap<WireId, bool> {
        &self.bits
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn position(&self, w: WireId) -> Result<usize, SimError> {
        self.qubits.iter().position(|q| *q == w).ok_or(SimError::DeadWire(w))
    }

    fn is_live(&self, w: WireId) -> bool {
        self.qubits.contains(&w) || self.bits.contains_key(&w)
    }

    fn push_qubit(&mut self, w: WireId, value: bool) {
        let v = usize::from(value);
        let mut next = vec![C64::new(0.0, 0.0); self.amps.len() * 2];
        for (i, a) in self.amps.iter().enumerate() {
            next[(i << 1) | v] = *a;
        }
        self.amps = next;
        self.qubits.insert(0, w);
    }

    /// Probability that qubit at `pos` reads 1.
    fn prob_one(&self, pos: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> pos & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Project the qubit at `pos` onto `value`, remove it and renormalize.
    fn project_out(&mut self, pos: usize, value: bool) {
        let v = usize::from(value);
        let low = (1usize << pos) - 1;
        let mut next = vec![C64::new(0.0, 0.0); self.amps.len() / 2];
        for (j, slot) in next.iter_mut().enumerate() {
            let i = ((j & !low) << 1) | (v << pos) | (j & low);
            *slot = self.amps[i];
        }
        let norm = next.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for a in &mut next {
                *a /= norm;
            }
        }
        self.amps = next;
        self.qubits.remove(pos);
    }

    fn apply(&mut self, m: &super::Matrix, targets: &[WireId], controls: &[SignedControl]) -> Result<(), SimError> {
        let k = targets.len();
        let tpos: Vec<usize> = targets.iter().map(|t| self.position(*t)).collect::<Result<_, _>>()?;
        let mut cmask = 0usize;
        let mut cval = 0usize;
        for c in controls {
            let p = self.position(c.wire)?;
            cmask |= 1 << p;
            if c.is_positive() {
                cval |= 1 << p;
            }
        }
        let tmask: usize = tpos.iter().map(|p| 1usize << p).sum();
        // offsets[l] = index bits for local basis state l; targets[0] is the MSB.
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|l| (0..k).filter(|j| l >> (k - 1 - j) & 1 == 1).map(|j| 1 << tpos[j]).sum())
            .collect();
        let mut local = DVector::<C64>::zeros(1 << k);
        for base in 0..self.amps.len() {
            if base & tmask != 0 || base & cmask != cval {
                continue;
            }
            for (l, off) in offsets.iter().enumerate() {
                local[l] = self.amps[base | off];
            }
            let out = m * &local;
            for (l, off) in offsets.iter().enumerate() {
                self.amps[base | off] = out[l];
            }
        }
        Ok(())
    }

    /// Amplitudes reordered so that `order[0]` is the most significant bit.
    pub fn amplitudes_in(&self, order: &[WireId]) -> Result<Vec<C64>, SimError> {
        if order.len() != self.qubits.len() {
            return Err(SimError::BadInput(format!(
                "ordering names {} qubits, state has {}",
                order.len(),
                self.qubits.len()
            )));
        }
        let n = order.len();
        let pos: Vec<usize> = order.iter().map(|w| self.position(*w)).collect::<Result<_, _>>()?;
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let j = (0..n).fold(0usize, |acc, k| (acc << 1) | (i >> pos[k] & 1));
            out[j] = *a;
        }
        Ok(out)
    }
}

/// Circuit input: a basis assignment for every input wire, or a state over
/// the quantum inputs (first quantum input is the most significant bit)
/// together with values for the classical inputs.
#[derive(Clone, Debug, PartialEq)]
pub enum SimInput {
    Basis(Vec<bool>),
    State { amplitudes: Vec<C64>, bits: Vec<bool> },
}

pub(crate) struct QuantumMachine {
    pub state: StateVector,
    pub rng: SplitMix64,
    pub registry: std::sync::Arc<GateRegistry>,
    pub epsilon: f64,
    pub cap: usize,
    pub measurements: Vec<(WireId, bool)>,
}

impl QuantumMachine {
    pub fn new(config: &SimConfig) -> Self {
        QuantumMachine {
            state: StateVector::default(),
            rng: SplitMix64::new(config.seed),
            registry: config.registry.clone(),
            epsilon: config.epsilon,
            cap: config.qubit_cap,
            measurements: Vec::new(),
        }
    }

    fn check_fresh(&self, w: WireId) -> Result<(), SimError> {
        if self.state.is_live(w) {
            return Err(SimError::AlreadyLive(w));
        }
        Ok(())
    }

    /// Sample and remove a qubit; one rng draw.
    fn sample(&mut self, w: WireId) -> Result<bool, SimError> {
        let pos = self.state.position(w)?;
        let p1 = self.state.prob_one(pos);
        let outcome = self.rng.next_f64() < p1;
        self.state.project_out(pos, outcome);
        Ok(outcome)
    }

    pub fn load(&mut self, c: &Circuit, input: &SimInput) -> Result<(), SimError> {
        match input {
            SimInput::Basis(vals) => {
                if vals.len() != c.inputs.len() {
                    return Err(SimError::BadInput(format!(
                        "expected {} input values, got {}",
                        c.inputs.len(),
                        vals.len()
                    )));
                }
                for ((w, k), v) in c.inputs.iter().zip(vals) {
                    self.init(*w, *k, *v)?;
                }
            }
            SimInput::State { amplitudes, bits } => {
                let qs: Vec<WireId> =
                    c.inputs.iter().filter(|(_, k)| *k == WireKind::Quantum).map(|(w, _)| *w).collect();
                let cs: Vec<WireId> =
                    c.inputs.iter().filter(|(_, k)| *k == WireKind::Classical).map(|(w, _)| *w).collect();
                if amplitudes.len() != 1 << qs.len() || bits.len() != cs.len() {
                    return Err(SimError::BadInput(format!(
                        "state over {} qubits and {} bits expected",
                        qs.len(),
                        cs.len()
                    )));
                }
                if qs.len() > self.cap {
                    return Err(SimError::QubitCap(self.cap));
                }
                self.state.qubits = qs.into_iter().rev().collect();
                self.state.amps = amplitudes.clone();
                for (w, v) in cs.into_iter().zip(bits) {
                    self.state.bits.insert(w, *v);
                }
            }
        }
        Ok(())
    }
}

impl Machine for QuantumMachine {
    fn init(&mut self, w: WireId, kind: WireKind, value: bool) -> Result<(), SimError> {
        self.check_fresh(w)?;
        match kind {
            WireKind::Quantum => {
                if self.state.qubits.len() >= self.cap {
                    return Err(SimError::QubitCap(self.cap));
                }
                self.state.push_qubit(w, value);
            }
            WireKind::Classical => {
                self.state.bits.insert(w, value);
            }
        }
        Ok(())
    }

    fn term(&mut self, w: WireId, kind: WireKind, value: bool) -> Result<(), SimError> {
        match kind {
            WireKind::Quantum => {
                let pos = self.state.position(w)?;
                let p1 = self.state.prob_one(pos);
                let p = if value { 1.0 - p1 } else { p1 };
                if p > self.epsilon {
                    return Err(SimError::AssertionFailed { wire: w, expected: value, p });
                }
                self.state.project_out(pos, value);
            }
            WireKind::Classical => {
                let b = self.bit(w)?;
                if b != value {
                    return Err(SimError::BitAssertionFailed { wire: w, expected: value });
                }
                self.state.bits.remove(&w);
            }
        }
        Ok(())
    }

    fn discard(&mut self, w: WireId, kind: WireKind) -> Result<(), SimError> {
        match kind {
            WireKind::Quantum => self.sample(w).map(|_| ()),
            WireKind::Classical => {
                self.state.bits.remove(&w).ok_or(SimError::DeadWire(w))?;
                Ok(())
            }
        }
    }

    fn measure(&mut self, w: WireId) -> Result<(), SimError> {
        let outcome = self.sample(w)?;
        self.state.bits.insert(w, outcome);
        self.measurements.push((w, outcome));
        Ok(())
    }

    fn unitary(
        &mut self,
        name: &str,
        params: &[f64],
        targets: &[WireId],
        controls: &[SignedControl],
    ) -> Result<(), SimError> {
        let def = self.registry.get(name).ok_or_else(|| SimError::UnregisteredGate(name.to_string()))?;
        if def.arity != targets.len() {
            return Err(SimError::GateArity {
                name: name.to_string(),
                expected: def.arity,
                found: targets.len(),
            });
        }
        let m = def.matrix(params);
        self.state.apply(&m, targets, controls)?;
        debug_assert!((self.state.norm() - 1.0).abs() < 1e-9, "norm drift after {name}");
        Ok(())
    }

    fn bit(&self, w: WireId) -> Result<bool, SimError> {
        self.state.bits.get(&w).copied().ok_or(SimError::DeadWire(w))
    }

    fn set_bit(&mut self, w: WireId, v: bool) -> Result<(), SimError> {
        let slot = self.state.bits.get_mut(&w).ok_or(SimError::DeadWire(w))?;
        *slot = v;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub state: StateVector,
    pub outputs: Vec<(WireId, WireKind)>,
    /// Every measurement outcome in program order.
    pub measurements: Vec<(WireId, bool)>,
}

impl RunResult {
    /// Values of the classical outputs, in output order.
    pub fn output_bits(&self) -> Vec<bool> {
        self.outputs
            .iter()
            .filter(|(_, k)| *k == WireKind::Classical)
            .map(|(w, _)| self.state.bits[w])
            .collect()
    }

    /// Final amplitudes with the first quantum output as the most significant bit.
    pub fn output_amplitudes(&self) -> Vec<C64> {
        let order: Vec<WireId> = self
            .outputs
            .iter()
            .filter(|(_, k)| *k == WireKind::Quantum)
            .map(|(w, _)| *w)
            .collect();
        self.state.amplitudes_in(&order).expect("outputs are exactly the live qubits")
    }

    /// If the final state is a computational basis state (within `eps`), the
    /// value of every output wire in output order.
    pub fn basis_outputs(&self, eps: f64) -> Option<Vec<bool>> {
        let amps = self.output_amplitudes();
        let (idx, a) = amps.iter().enumerate().max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))?;
        if (a.norm() - 1.0).abs() > eps {
            return None;
        }
        let nq = self.outputs.iter().filter(|(_, k)| *k == WireKind::Quantum).count();
        let mut qi = 0;
        Some(
            self.outputs
                .iter()
                .map(|(w, k)| match k {
                    WireKind::Quantum => {
                        qi += 1;
                        idx >> (nq - qi) & 1 == 1
                    }
                    WireKind::Classical => self.state.bits[w],
                })
                .collect(),
        )
    }
}

fn run_once(c: &Circuit, input: &SimInput, m: &mut QuantumMachine) -> Result<(), SimError> {
    m.load(c, input)?;
    let mut exec = Executor { table: &c.subroutines, fresh: c.fresh_wire() };
    exec.run(m, &c.gates)
}

/// Full state-vector simulation. Deterministic given circuit, input and seed.
pub fn simulate(c: &Circuit, input: &SimInput, config: &SimConfig) -> Result<RunResult, SimError> {
    let mut m = QuantumMachine::new(config);
    run_once(c, input, &mut m)?;
    Ok(RunResult { state: m.state, outputs: c.outputs.clone(), measurements: m.measurements })
}

/// Run the circuit `shots` times with one continuing random stream seeded
/// from `config.seed`; returns a histogram of classical output values.
pub fn run_shots(
    c: &Circuit,
    input: &SimInput,
    config: &SimConfig,
    shots: usize,
) -> Result<BTreeMap<Vec<bool>, usize>, SimError> {
    let mut hist = BTreeMap::new();
    let mut rng = SplitMix64::new(config.seed);
    for _ in 0..shots {
        let mut m = QuantumMachine::new(config);
        m.rng = rng;
        run_once(c, input, &mut m)?;
        rng = m.rng.clone();
        let r = RunResult { state: m.state, outputs: c.outputs.clone(), measurements: Vec::new() };
        *hist.entry(r.output_bits()).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Overlap `|⟨a|b⟩|`; insensitive to global phase.
pub fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>().norm()
}
