use std::collections::BTreeMap;

use super::{describe, InverseRule, TransformError};
use crate::ir::{Circuit, Gate, SubroutineDef};
use crate::sim::GateRegistry;

const INV_SUFFIX: &str = "_inv";

/// Name of the reversed version of a subroutine: `f` ↔ `f_inv`.
pub fn inverse_name(name: &str) -> String {
    match name.strip_suffix(INV_SUFFIX) {
        Some(base) => base.to_string(),
        None => format!("{name}{INV_SUFFIX}"),
    }
}

fn invert_gate(g: &Gate, index: usize, reg: &GateRegistry) -> Result<Gate, TransformError> {
    Ok(match g {
        Gate::Unitary { name, params, targets, controls, classical_controls } => {
            let rule = reg.inverse_rule(name).ok_or_else(|| TransformError::NoInverse(name.clone()))?;
            let (name, params) = match rule {
                InverseRule::SelfInverse => (name.clone(), params.clone()),
                InverseRule::Named(other) => (other.clone(), params.clone()),
                InverseRule::ParamNegate => (name.clone(), params.iter().map(|p| -p).collect()),
            };
            Gate::Unitary {
                name,
                params,
                targets: targets.clone(),
                controls: controls.clone(),
                classical_controls: classical_controls.clone(),
            }
        }
        Gate::Init { wire, kind, value } => Gate::TermAssert { wire: *wire, kind: *kind, value: *value },
        Gate::TermAssert { wire, kind, value } => Gate::Init { wire: *wire, kind: *kind, value: *value },
        Gate::Classical { op, .. } if op.is_reversible() => g.clone(),
        Gate::Call { name, inputs, outputs, controls, classical_controls } => Gate::Call {
            name: inverse_name(name),
            inputs: outputs.clone(),
            outputs: inputs.clone(),
            controls: controls.clone(),
            classical_controls: classical_controls.clone(),
        },
        Gate::Comment { .. } => g.clone(),
        Gate::Measure { .. } | Gate::Discard { .. } | Gate::Classical { .. } => {
            return Err(TransformError::Irreversible { index, gate: describe(g) })
        }
    })
}

/// Reverse a gate sequence, inverting each gate. Calls are redirected to the
/// `_inv` names; the matching bodies come from [`reversed_subroutines`].
pub(crate) fn reverse_gates(gates: &[Gate], reg: &GateRegistry) -> Result<Vec<Gate>, TransformError> {
    gates.iter().enumerate().rev().map(|(i, g)| invert_gate(g, i, reg)).collect()
}

fn reverse_body(c: &Circuit, reg: &GateRegistry) -> Result<Circuit, TransformError> {
    Ok(Circuit {
        inputs: c.outputs.clone(),
        gates: reverse_gates(&c.gates, reg)?,
        outputs: c.inputs.clone(),
        subroutines: BTreeMap::new(),
    })
}

/// Reversed bodies for every subroutine transitively called by `gates`, keyed
/// by their inverted names.
pub(crate) fn reversed_subroutines(
    gates: &[Gate],
    table: &BTreeMap<String, SubroutineDef>,
    reg: &GateRegistry,
) -> Result<BTreeMap<String, SubroutineDef>, TransformError> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<String> = called(gates);
    while let Some(name) = stack.pop() {
        let inv = inverse_name(&name);
        if out.contains_key(&inv) {
            continue;
        }
        let def = table.get(&name).ok_or_else(|| TransformError::UnknownSubroutine(name.clone()))?;
        let body = reverse_body(&def.circuit, reg)?;
        stack.extend(called(&def.circuit.gates));
        out.insert(inv.clone(), SubroutineDef { name: inv, circuit: body });
    }
    Ok(out)
}

fn called(gates: &[Gate]) -> Vec<String> {
    gates
        .iter()
        .filter_map(|g| match g {
            Gate::Call { name, .. } => Some(name.clone()),
            _ => None,
        })
        .collect()
}

/// The inverse circuit: gates in reverse order, each inverted. `Init` and
/// `TermAssert` swap roles; every subroutine is replaced by its reversal under
/// the inverted name, so reversing twice gives back the original.
pub fn reverse_circuit(c: &Circuit, reg: &GateRegistry) -> Result<Circuit, TransformError> {
    let mut out = reverse_body(c, reg)?;
    for (name, def) in &c.subroutines {
        let inv = inverse_name(name);
        let body = reverse_body(&def.circuit, reg)?;
        out.subroutines.insert(inv.clone(), SubroutineDef { name: inv, circuit: body });
    }
    Ok(out)
}
