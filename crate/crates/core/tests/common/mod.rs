//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qcdl_core::classical::ClassicalExpr;
use qcdl_core::ir::{Circuit, ClassicalOp, Gate, SignedControl, SubroutineDef, WireId, WireKind};
use qcdl_core::sim::EXP_Z;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which gates the circuit generator may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mix {
    /// Quantum unitaries with signed quantum controls; no other gates.
    Unitary,
    /// Everything that `reverse` accepts: unitaries, Init/TermAssert,
    /// classical not/xor, classical controls, calls and comments.
    Reversible,
    /// Every gate form.
    Full,
}

const ONE_QUBIT: &[&str] = &["H", "X", "not", "Y", "Z", "S", "S_inv", "T", "T_inv"];

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    mix: Mix,
    live: Vec<(WireId, WireKind)>,
    next: u32,
    gates: Vec<Gate>,
    max_qubits: usize,
}

impl Gen<'_> {
    fn of_kind(&self, k: WireKind) -> Vec<WireId> {
        self.live.iter().filter(|(_, kk)| *kk == k).map(|(w, _)| *w).collect()
    }

    fn fresh(&mut self) -> WireId {
        self.next += 1;
        WireId(self.next - 1)
    }

    fn signed(&mut self, pool: &mut Vec<WireId>, max: usize) -> Vec<SignedControl> {
        pool.shuffle(self.rng);
        let k = self.rng.gen_range(0..=max.min(pool.len()));
        pool.drain(..k)
            .map(|w| if self.rng.gen_bool(0.6) { SignedControl::pos(w) } else { SignedControl::neg(w) })
            .collect()
    }

    fn unitary(&mut self) -> Option<Gate> {
        let mut qs = self.of_kind(WireKind::Quantum);
        if qs.is_empty() {
            return None;
        }
        qs.shuffle(self.rng);
        let roll = self.rng.gen_range(0..10);
        let (name, params, arity) = if roll < 7 || qs.len() < 2 {
            if roll == 6 {
                (EXP_Z.to_string(), vec![self.rng.gen_range(-3.0..3.0)], 1)
            } else {
                (ONE_QUBIT.choose(self.rng).unwrap().to_string(), vec![], 1)
            }
        } else {
            ("swap".to_string(), vec![], 2)
        };
        let targets: Vec<WireId> = qs.drain(..arity).collect();
        let controls = self.signed(&mut qs, 3);
        let classical_controls = if self.mix == Mix::Unitary {
            Vec::new()
        } else {
            let mut cs = self.of_kind(WireKind::Classical);
            self.signed(&mut cs, 1)
        };
        Some(Gate::Unitary { name, params, targets, controls, classical_controls })
    }

    fn step(&mut self, subs: &BTreeMap<String, SubroutineDef>) -> Option<Gate> {
        if self.mix == Mix::Unitary {
            return self.unitary();
        }
        let nq = self.of_kind(WireKind::Quantum).len();
        let cs = self.of_kind(WireKind::Classical);
        match self.rng.gen_range(0..20) {
            0 if nq < self.max_qubits => {
                let w = self.fresh();
                self.live.push((w, WireKind::Quantum));
                Some(Gate::Init { wire: w, kind: WireKind::Quantum, value: self.rng.gen() })
            }
            1 if cs.len() < 4 => {
                let w = self.fresh();
                self.live.push((w, WireKind::Classical));
                Some(Gate::Init { wire: w, kind: WireKind::Classical, value: self.rng.gen() })
            }
            2 if self.live.len() > 1 => {
                let i = self.rng.gen_range(0..self.live.len());
                let (w, kind) = self.live.remove(i);
                if self.mix == Mix::Full && self.rng.gen_bool(0.5) {
                    Some(Gate::Discard { wire: w, kind })
                } else {
                    Some(Gate::TermAssert { wire: w, kind, value: self.rng.gen() })
                }
            }
            3 if self.mix == Mix::Full && nq > 1 => {
                let qs = self.of_kind(WireKind::Quantum);
                let w = *qs.choose(self.rng).unwrap();
                for e in self.live.iter_mut().filter(|e| e.0 == w) {
                    e.1 = WireKind::Classical;
                }
                Some(Gate::Measure { wire: w })
            }
            4 | 5 if !cs.is_empty() => {
                let mut pool = cs.clone();
                pool.shuffle(self.rng);
                let t = pool.pop().unwrap();
                let ops: &[ClassicalOp] = if self.mix == Mix::Full {
                    &[ClassicalOp::Not, ClassicalOp::Xor, ClassicalOp::And, ClassicalOp::Or, ClassicalOp::Copy]
                } else {
                    &[ClassicalOp::Not, ClassicalOp::Xor]
                };
                let op = *ops.choose(self.rng).unwrap();
                let sources: Vec<WireId> = match op {
                    ClassicalOp::Not => vec![],
                    _ if pool.is_empty() => return None,
                    ClassicalOp::Copy => vec![pool[0]],
                    _ => {
                        let k = self.rng.gen_range(1..=pool.len().min(2));
                        pool[..k].to_vec()
                    }
                };
                Some(Gate::Classical { op, targets: vec![t], sources })
            }
            6 if !subs.is_empty() => {
                let (name, def) = subs.iter().nth(self.rng.gen_range(0..subs.len())).unwrap();
                let mut qs = self.of_kind(WireKind::Quantum);
                let arity = def.circuit.inputs.len();
                if qs.len() < arity {
                    return None;
                }
                qs.shuffle(self.rng);
                let inputs: Vec<WireId> = qs.drain(..arity).collect();
                let controls = self.signed(&mut qs, 2);
                Some(Gate::Call {
                    name: name.clone(),
                    outputs: inputs.clone(),
                    inputs,
                    controls,
                    classical_controls: Vec::new(),
                })
            }
            7 => {
                let labels = self
                    .live
                    .iter()
                    .take(self.rng.gen_range(0..3))
                    .map(|(w, _)| (*w, format!("w{w}")))
                    .collect();
                Some(Gate::Comment { text: "step \"x\"\\".into(), labels })
            }
            _ => self.unitary(),
        }
    }
}

/// A random unitary-only subroutine on `arity` qubits.
pub fn random_subroutine(rng: &mut ChaCha8Rng, arity: usize, len: usize) -> Circuit {
    random_circuit_with(rng, arity, len, Mix::Unitary, &BTreeMap::new())
}

fn random_circuit_with(
    rng: &mut ChaCha8Rng,
    qubits: usize,
    len: usize,
    mix: Mix,
    subs: &BTreeMap<String, SubroutineDef>,
) -> Circuit {
    let inputs: Vec<(WireId, WireKind)> = (0..qubits as u32).map(|i| (WireId(i), WireKind::Quantum)).collect();
    let mut g = Gen { rng, mix, live: inputs.clone(), next: qubits as u32, gates: Vec::new(), max_qubits: qubits + 2 };
    while g.gates.len() < len {
        if let Some(gate) = g.step(subs) {
            g.gates.push(gate);
        } else if g.of_kind(WireKind::Quantum).is_empty() {
            break;
        }
    }
    Circuit { inputs, gates: g.gates, outputs: g.live, subroutines: subs.clone() }
}

/// A random valid circuit on `qubits` input qubits with `len` gates. In the
/// non-unitary mixes it may carry one or two unitary subroutines.
pub fn random_circuit(rng: &mut ChaCha8Rng, qubits: usize, len: usize, mix: Mix) -> Circuit {
    let mut subs = BTreeMap::new();
    if mix != Mix::Unitary {
        for i in 0..rng.gen_range(0..3) {
            let arity = rng.gen_range(1..=qubits.clamp(1, 2));
            let len = rng.gen_range(1..4);
            let name = format!("sub{i}");
            let circuit = random_subroutine(rng, arity, len);
            subs.insert(name.clone(), SubroutineDef { name, circuit });
        }
    }
    random_circuit_with(rng, qubits, len, mix, &subs)
}

/// A random expression over `v0 .. v(n-1)` of depth at most `depth`.
pub fn random_expr(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> ClassicalExpr {
    if depth <= 1 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.08) { ClassicalExpr::Const(rng.gen()) } else { ClassicalExpr::var(rng.gen_range(0..n)) };
    }
    match rng.gen_range(0..4) {
        0 => ClassicalExpr::not(random_expr(rng, n, depth - 1)),
        1 => ClassicalExpr::and(random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1)),
        2 => ClassicalExpr::or(random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1)),
        _ => ClassicalExpr::xor(random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1)),
    }
}

/// Bits of `x`, least significant first.
pub fn bits(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

pub fn value(bs: &[bool]) -> u64 {
    bs.iter().enumerate().map(|(i, b)| u64::from(*b) << i).sum()
}

pub fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}
