use std::collections::BTreeMap;

use super::SimError;
use crate::ir::{ClassicalOp, Gate, SignedControl, SubroutineDef, WireId, WireKind};
use crate::transforms::expand_call;

/// Primitive operations shared by the state-vector and boolean simulators.
pub(crate) trait Machine {
    fn init(&mut self, w: WireId, kind: WireKind, value: bool) -> Result<(), SimError>;
    fn term(&mut self, w: WireId, kind: WireKind, value: bool) -> Result<(), SimError>;
    fn discard(&mut self, w: WireId, kind: WireKind) -> Result<(), SimError>;
    fn measure(&mut self, w: WireId) -> Result<(), SimError>;
    /// A unitary whose classical controls have already fired.
    fn unitary(
        &mut self,
        name: &str,
        params: &[f64],
        targets: &[WireId],
        controls: &[SignedControl],
    ) -> Result<(), SimError>;
    fn bit(&self, w: WireId) -> Result<bool, SimError>;
    fn set_bit(&mut self, w: WireId, v: bool) -> Result<(), SimError>;
}

/// Runs gate lists on a machine, expanding calls on the fly.
pub(crate) struct Executor<'a> {
    pub table: &'a BTreeMap<String, SubroutineDef>,
    pub fresh: u32,
}

impl Executor<'_> {
    pub fn run<M: Machine>(&mut self, m: &mut M, gates: &[Gate]) -> Result<(), SimError> {
        for g in gates {
            self.step(m, g)?;
        }
        Ok(())
    }

    fn step<M: Machine>(&mut self, m: &mut M, g: &Gate) -> Result<(), SimError> {
        match g {
            Gate::Unitary { name, params, targets, controls, classical_controls } => {
                for c in classical_controls {
                    if !c.fires_on(m.bit(c.wire)?) {
                        return Ok(());
                    }
                }
                m.unitary(name, params, targets, controls)
            }
            Gate::Init { wire, kind, value } => m.init(*wire, *kind, *value),
            Gate::TermAssert { wire, kind, value } => m.term(*wire, *kind, *value),
            Gate::Discard { wire, kind } => m.discard(*wire, *kind),
            Gate::Measure { wire } => m.measure(*wire),
            Gate::Classical { op, targets, sources } => {
                let vals: Vec<bool> = sources.iter().map(|s| m.bit(*s)).collect::<Result<_, _>>()?;
                for t in targets {
                    let old = m.bit(*t)?;
                    let new = match op {
                        ClassicalOp::Not => !old,
                        ClassicalOp::Xor => vals.iter().fold(old, |a, b| a ^ b),
                        ClassicalOp::And => vals.iter().all(|b| *b),
                        ClassicalOp::Or => vals.iter().any(|b| *b),
                        ClassicalOp::Copy => vals[0],
                    };
                    m.set_bit(*t, new)?;
                }
                Ok(())
            }
            Gate::Call { .. } => {
                let body = expand_call(g, self.table, &mut self.fresh)?;
                self.run(m, &body)
            }
            Gate::Comment { .. } => Ok(()),
        }
    }
}
