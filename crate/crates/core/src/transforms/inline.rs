use std::collections::{BTreeMap, HashMap};

use super::{describe, TransformError};
use crate::ir::{Circuit, Gate, SignedControl, SubroutineDef, WireId};

/// Add controls to a gate taken from a subroutine body.
pub(crate) fn push_controls(
    g: Gate,
    qctl: &[SignedControl],
    cctl: &[SignedControl],
) -> Result<Gate, TransformError> {
    if qctl.is_empty() && cctl.is_empty() {
        return Ok(g);
    }
    match g {
        Gate::Unitary { name, params, targets, mut controls, mut classical_controls } => {
            controls.extend_from_slice(qctl);
            classical_controls.extend_from_slice(cctl);
            Ok(Gate::Unitary { name, params, targets, controls, classical_controls })
        }
        Gate::Call { name, inputs, outputs, mut controls, mut classical_controls } => {
            controls.extend_from_slice(qctl);
            classical_controls.extend_from_slice(cctl);
            Ok(Gate::Call { name, inputs, outputs, controls, classical_controls })
        }
        g @ Gate::Comment { .. } => Ok(g),
        other => Err(TransformError::NotControllable(describe(&other))),
    }
}

/// Expand one `Call` gate into the body of its subroutine, one level deep.
///
/// Subroutine inputs map onto the call's inputs, pass-through outputs keep
/// those ids, new outputs take the call's output ids and every other
/// internal wire gets a fresh id from `fresh`. The call's controls are pushed
/// onto every body gate.
pub(crate) fn expand_call(
    call: &Gate,
    table: &BTreeMap<String, SubroutineDef>,
    fresh: &mut u32,
) -> Result<Vec<Gate>, TransformError> {
    let Gate::Call { name, inputs, outputs, controls, classical_controls } = call else {
        return Ok(vec![call.clone()]);
    };
    let def = table.get(name).ok_or_else(|| TransformError::UnknownSubroutine(name.clone()))?;
    let body = &def.circuit;
    if body.inputs.len() != inputs.len() || body.outputs.len() != outputs.len() {
        return Err(TransformError::CallInterface(name.clone()));
    }
    let mut map: HashMap<WireId, WireId> =
        body.inputs.iter().zip(inputs).map(|((s, _), t)| (*s, *t)).collect();
    for ((s, _), t) in body.outputs.iter().zip(outputs) {
        map.entry(*s).or_insert(*t);
    }
    let mut rename = |w: WireId| {
        *map.entry(w).or_insert_with(|| {
            *fresh += 1;
            WireId(*fresh - 1)
        })
    };
    body.gates
        .iter()
        .map(|g| push_controls(g.map_wires(&mut rename), controls, classical_controls))
        .collect()
}

fn inline_into(
    gates: &[Gate],
    table: &BTreeMap<String, SubroutineDef>,
    fresh: &mut u32,
    out: &mut Vec<Gate>,
) -> Result<(), TransformError> {
    for g in gates {
        if matches!(g, Gate::Call { .. }) {
            let expanded = expand_call(g, table, fresh)?;
            inline_into(&expanded, table, fresh, out)?;
        } else {
            out.push(g.clone());
        }
    }
    Ok(())
}

/// Replace every call by the body of its subroutine, recursively. The result
/// has an empty subroutine table.
pub fn inline_all(c: &Circuit) -> Result<Circuit, TransformError> {
    let mut fresh = c.fresh_wire();
    let mut gates = Vec::with_capacity(c.gates.len());
    inline_into(&c.gates, &c.subroutines, &mut fresh, &mut gates)?;
    Ok(Circuit {
        inputs: c.inputs.clone(),
        gates,
        outputs: c.outputs.clone(),
        subroutines: BTreeMap::new(),
    })
}
