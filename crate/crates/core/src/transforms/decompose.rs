//! Gate-set decomposition.
//!
//! Lowering proceeds per gate: negative controls are conjugated with X (or a
//! classical not), multiply-controlled gates are reduced with a chain of
//! clean ancillas holding partial conjunctions, and under the binary base
//! each remaining Toffoli is expanded into the standard H/T/T†/CNOT network.

use std::collections::BTreeMap;

use super::inline::expand_call;
use super::{describe, TransformError};
use crate::ir::{Circuit, ClassicalOp, Gate, SignedControl, SubroutineDef, WireId, WireKind};

/// Target gate base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateBase {
    /// Every primitive gate touches at most 3 wires.
    Toffoli,
    /// Every primitive gate touches at most 2 wires.
    Binary,
}

impl GateBase {
    pub fn max_width(self) -> usize {
        match self {
            GateBase::Toffoli => 3,
            GateBase::Binary => 2,
        }
    }
}

/// Widest primitive gate (calls and comments excluded).
pub fn max_primitive_width(c: &Circuit) -> usize {
    c.gates
        .iter()
        .filter(|g| !matches!(g, Gate::Call { .. } | Gate::Comment { .. }))
        .map(Gate::width)
        .max()
        .unwrap_or(0)
}

/// Decompose the circuit and every subroutine body into `base`.
///
/// Uncontrolled calls are kept; controlled calls are expanded in place since
/// their controls must land on primitive gates.
pub fn decompose(c: &Circuit, base: GateBase) -> Result<Circuit, TransformError> {
    let mut out = decompose_body(c, &c.subroutines, base)?;
    let subs: Result<BTreeMap<String, SubroutineDef>, TransformError> = c
        .subroutines
        .iter()
        .map(|(n, d)| {
            let body = decompose_body(&d.circuit, &c.subroutines, base)?;
            Ok((n.clone(), SubroutineDef { name: n.clone(), circuit: body }))
        })
        .collect();
    out.subroutines = subs?;
    Ok(out)
}

fn decompose_body(
    c: &Circuit,
    table: &BTreeMap<String, SubroutineDef>,
    base: GateBase,
) -> Result<Circuit, TransformError> {
    let mut lw = Lowering { base, fresh: c.fresh_wire(), out: Vec::with_capacity(c.gates.len()) };
    lw.gates(&c.gates, table)?;
    Ok(Circuit {
        inputs: c.inputs.clone(),
        gates: lw.out,
        outputs: c.outputs.clone(),
        subroutines: BTreeMap::new(),
    })
}

fn is_not(name: &str) -> bool {
    name == "not" || name == "X"
}

struct Lowering {
    base: GateBase,
    fresh: u32,
    out: Vec<Gate>,
}

impl Lowering {
    fn ancilla(&mut self) -> WireId {
        self.fresh += 1;
        let w = WireId(self.fresh - 1);
        self.out.push(Gate::Init { wire: w, kind: WireKind::Quantum, value: false });
        w
    }

    fn release(&mut self, w: WireId) {
        self.out.push(Gate::TermAssert { wire: w, kind: WireKind::Quantum, value: false });
    }

    fn gates(
        &mut self,
        gates: &[Gate],
        table: &BTreeMap<String, SubroutineDef>,
    ) -> Result<(), TransformError> {
        for g in gates {
            match g {
                Gate::Unitary { name, params, targets, controls, classical_controls } => {
                    self.unitary(name, params, targets, controls, classical_controls)?
                }
                Gate::Call { controls, classical_controls, .. }
                    if !controls.is_empty() || !classical_controls.is_empty() =>
                {
                    let expanded = expand_call(g, table, &mut self.fresh)?;
                    self.gates(&expanded, table)?;
                }
                Gate::Classical { op: ClassicalOp::Xor, targets, sources } if sources.len() > 1 => {
                    for s in sources {
                        self.out.push(Gate::Classical {
                            op: ClassicalOp::Xor,
                            targets: targets.clone(),
                            sources: vec![*s],
                        });
                    }
                }
                Gate::Classical { .. } if g.width() > self.base.max_width() => {
                    return Err(TransformError::NoRule(describe(g)));
                }
                other => self.out.push(other.clone()),
            }
        }
        Ok(())
    }

    fn unitary(
        &mut self,
        name: &str,
        params: &[f64],
        targets: &[WireId],
        controls: &[SignedControl],
        classical_controls: &[SignedControl],
    ) -> Result<(), TransformError> {
        // Conjugate negative controls so that everything below is positive.
        let neg_q: Vec<WireId> = controls.iter().filter(|c| !c.is_positive()).map(|c| c.wire).collect();
        let neg_c: Vec<WireId> =
            classical_controls.iter().filter(|c| !c.is_positive()).map(|c| c.wire).collect();
        self.flip(&neg_q, &neg_c);

        let qctl: Vec<WireId> = controls.iter().map(|c| c.wire).collect();
        let cctl: Vec<WireId> = classical_controls.iter().map(|c| c.wire).collect();
        let width = targets.len() + qctl.len() + cctl.len();
        if width <= self.base.max_width() {
            self.out.push(Gate::Unitary {
                name: name.to_string(),
                params: params.to_vec(),
                targets: targets.to_vec(),
                controls: qctl.into_iter().map(SignedControl::pos).collect(),
                classical_controls: cctl.into_iter().map(SignedControl::pos).collect(),
            });
        } else {
            // Quantum copies of classical controls.
            let copies: Vec<(WireId, WireId)> = cctl
                .iter()
                .map(|&c| {
                    let a = self.ancilla();
                    self.out.push(classically_controlled_not(a, c));
                    (a, c)
                })
                .collect();
            let mut ctl = qctl;
            ctl.extend(copies.iter().map(|(a, _)| *a));
            self.positive(name, params, targets, &ctl)?;
            for &(a, c) in copies.iter().rev() {
                self.out.push(classically_controlled_not(a, c));
                self.release(a);
            }
        }
        self.flip(&neg_q, &neg_c);
        Ok(())
    }

    fn flip(&mut self, quantum: &[WireId], classical: &[WireId]) {
        for w in quantum {
            self.out.push(Gate::unitary("not", vec![*w]));
        }
        for w in classical {
            self.out.push(Gate::Classical { op: ClassicalOp::Not, targets: vec![*w], sources: vec![] });
        }
    }

    /// Lower a gate whose controls are all positive and quantum.
    fn positive(
        &mut self,
        name: &str,
        params: &[f64],
        targets: &[WireId],
        ctl: &[WireId],
    ) -> Result<(), TransformError> {
        let limit = self.base.max_width();
        if targets.len() + ctl.len() <= limit {
            self.out.push(Gate::Unitary {
                name: name.to_string(),
                params: params.to_vec(),
                targets: targets.to_vec(),
                controls: ctl.iter().map(|w| SignedControl::pos(*w)).collect(),
                classical_controls: vec![],
            });
            return Ok(());
        }
        match targets {
            [t] => {
                let keep = if is_not(name) || self.base == GateBase::Toffoli { 2 } else { 1 };
                let (folded, chain) = self.and_chain(ctl, keep);
                let mut rest: Vec<WireId> = folded.into_iter().collect();
                rest.extend_from_slice(&ctl[chain.len() + usize::from(!chain.is_empty())..]);
                if is_not(name) && rest.len() == 2 {
                    self.toffoli(*t, rest[0], rest[1]);
                } else {
                    self.out.push(Gate::Unitary {
                        name: name.to_string(),
                        params: params.to_vec(),
                        targets: vec![*t],
                        controls: rest.iter().map(|w| SignedControl::pos(*w)).collect(),
                        classical_controls: vec![],
                    });
                }
                self.undo_chain(chain);
                Ok(())
            }
            [a, b] if name == "swap" => {
                let mut mid = vec![*a];
                mid.extend_from_slice(ctl);
                self.positive("not", &[], &[*a], &[*b])?;
                self.positive("not", &[], &[*b], &mid)?;
                self.positive("not", &[], &[*a], &[*b])?;
                Ok(())
            }
            _ => Err(TransformError::NoRule(format!(
                "\"{name}\" with {} targets and {} controls",
                targets.len(),
                ctl.len()
            ))),
        }
    }

    /// Fold the first `ctl.len() - keep + 1` controls into one ancilla via a
    /// chain of Toffolis, leaving `keep` controls in total. Returns the folded
    /// wire and the chain to undo.
    fn and_chain(&mut self, ctl: &[WireId], keep: usize) -> (Option<WireId>, Vec<(WireId, WireId, WireId)>) {
        let folds = ctl.len().saturating_sub(keep);
        if folds == 0 {
            return (None, Vec::new());
        }
        let mut chain = Vec::with_capacity(folds);
        let mut acc = ctl[0];
        for &c in &ctl[1..=folds] {
            let anc = self.ancilla();
            self.toffoli(anc, acc, c);
            chain.push((anc, acc, c));
            acc = anc;
        }
        (Some(acc), chain)
    }

    fn undo_chain(&mut self, chain: Vec<(WireId, WireId, WireId)>) {
        for (anc, a, b) in chain.into_iter().rev() {
            self.toffoli(anc, a, b);
            self.release(anc);
        }
    }

    fn toffoli(&mut self, t: WireId, a: WireId, b: WireId) {
        match self.base {
            GateBase::Toffoli => self.out.push(Gate::controlled(
                "not",
                vec![t],
                vec![SignedControl::pos(a), SignedControl::pos(b)],
            )),
            GateBase::Binary => self.out.extend(toffoli_network(t, a, b)),
        }
    }
}

fn classically_controlled_not(target: WireId, control: WireId) -> Gate {
    Gate::Unitary {
        name: "not".into(),
        params: vec![],
        targets: vec![target],
        controls: vec![],
        classical_controls: vec![SignedControl::pos(control)],
    }
}

/// Toffoli with target `t` and controls `a`, `b` as 2 H, 6 CNOT and 7 T/T†.
pub(crate) fn toffoli_network(t: WireId, a: WireId, b: WireId) -> Vec<Gate> {
    let cx = |tgt: WireId, ctl: WireId| Gate::controlled("not", vec![tgt], vec![SignedControl::pos(ctl)]);
    let one = |n: &str, w: WireId| Gate::unitary(n, vec![w]);
    vec![
        one("H", t),
        cx(t, b),
        one("T_inv", t),
        cx(t, a),
        one("T", t),
        cx(t, b),
        one("T_inv", t),
        cx(t, a),
        one("T", b),
        one("T", t),
        one("H", t),
        cx(b, a),
        one("T", a),
        one("T_inv", b),
        cx(b, a),
    ]
}
