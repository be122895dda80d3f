use std::collections::HashMap;

use super::exec::{Executor, Machine};
use super::SimError;
use crate::ir::{Circuit, SignedControl, WireId, WireKind};

/// Every live wire, quantum or classical, holds a definite bit.
#[derive(Default)]
struct BoolMachine {
    vals: HashMap<WireId, bool>,
}

impl BoolMachine {
    fn get(&self, w: WireId) -> Result<bool, SimError> {
        self.vals.get(&w).copied().ok_or(SimError::DeadWire(w))
    }

    fn flip(&mut self, w: WireId) -> Result<(), SimError> {
        let v = self.vals.get_mut(&w).ok_or(SimError::DeadWire(w))?;
        *v = !*v;
        Ok(())
    }
}

impl Machine for BoolMachine {
    fn init(&mut self, w: WireId, _kind: WireKind, value: bool) -> Result<(), SimError> {
        if self.vals.insert(w, value).is_some() {
            return Err(SimError::AlreadyLive(w));
        }
        Ok(())
    }

    fn term(&mut self, w: WireId, kind: WireKind, value: bool) -> Result<(), SimError> {
        let v = self.vals.remove(&w).ok_or(SimError::DeadWire(w))?;
        if v != value {
            return Err(match kind {
                WireKind::Quantum => SimError::AssertionFailed { wire: w, expected: value, p: 1.0 },
                WireKind::Classical => SimError::BitAssertionFailed { wire: w, expected: value },
            });
        }
        Ok(())
    }

    fn discard(&mut self, w: WireId, _kind: WireKind) -> Result<(), SimError> {
        self.vals.remove(&w).map(|_| ()).ok_or(SimError::DeadWire(w))
    }

    fn measure(&mut self, w: WireId) -> Result<(), SimError> {
        self.get(w).map(|_| ())
    }

    fn unitary(
        &mut self,
        name: &str,
        _params: &[f64],
        targets: &[WireId],
        controls: &[SignedControl],
    ) -> Result<(), SimError> {
        let classical = matches!((name, targets.len()), ("not" | "X", 1) | ("swap", 2));
        if !classical {
            return Err(SimError::NotClassical(name.to_string()));
        }
        for c in controls {
            if !c.fires_on(self.get(c.wire)?) {
                return Ok(());
            }
        }
        match targets {
            [t] => self.flip(*t),
            [a, b] => {
                let (va, vb) = (self.get(*a)?, self.get(*b)?);
                self.vals.insert(*a, vb);
                self.vals.insert(*b, va);
                Ok(())
            }
            _ => unreachable!(),
        }
    }

    fn bit(&self, w: WireId) -> Result<bool, SimError> {
        self.get(w)
    }

    fn set_bit(&mut self, w: WireId, v: bool) -> Result<(), SimError> {
        let slot = self.vals.get_mut(&w).ok_or(SimError::DeadWire(w))?;
        *slot = v;
        Ok(())
    }
}

/// Bitwise simulation of a circuit built from basis-preserving gates: `not`,
/// `X` and `swap` with any signed controls, initialization, termination,
/// measurement, discarding, classical gates and calls. Returns the value of
/// every output wire in order.
pub fn boolean_simulate(c: &Circuit, input: &[bool]) -> Result<Vec<bool>, SimError> {
    if input.len() != c.inputs.len() {
        return Err(SimError::BadInput(format!(
            "expected {} input values, got {}",
            c.inputs.len(),
            input.len()
        )));
    }
    let mut m = BoolMachine::default();
    for ((w, k), v) in c.inputs.iter().zip(input) {
        m.init(*w, *k, *v)?;
    }
    let mut exec = Executor { table: &c.subroutines, fresh: c.fresh_wire() };
    exec.run(&mut m, &c.gates)?;
    c.outputs.iter().map(|(w, _)| m.get(*w)).collect()
}
