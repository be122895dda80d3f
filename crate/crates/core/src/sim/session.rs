use std::collections::BTreeMap;

use super::exec::{Executor, Machine};
use super::state::QuantumMachine;
use super::{SimConfig, SimError, StateVector};
use crate::ir::{Gate, SubroutineDef, WireId, WireKind};

/// Ids handed out to wires internal to expanded calls. They never survive a
/// call, so they cannot clash with wires the builder allocates later.
const EXPANSION_BASE: u32 = 1 << 31;

/// Incremental state-vector execution: the backend of the builder's
/// interactive mode. Gate segments are executed as they arrive and measured
/// bits can be read back in between.
pub struct Session {
    machine: QuantumMachine,
    fresh: u32,
}

impl Session {
    pub fn new(config: &SimConfig) -> Self {
        Session { machine: QuantumMachine::new(config), fresh: EXPANSION_BASE }
    }

    /// Bring circuit inputs to life in |0⟩ / false.
    pub fn declare_input(&mut self, w: WireId, kind: WireKind) -> Result<(), SimError> {
        self.machine.init(w, kind, false)
    }

    pub fn execute(
        &mut self,
        gates: &[Gate],
        table: &BTreeMap<String, SubroutineDef>,
    ) -> Result<(), SimError> {
        let mut exec = Executor { table, fresh: self.fresh };
        let r = exec.run(&mut self.machine, gates);
        self.fresh = exec.fresh;
        r
    }

    /// Current value of a classical wire.
    pub fn bit(&self, w: WireId) -> Result<bool, SimError> {
        self.machine.bit(w)
    }

    pub fn state(&self) -> &StateVector {
        &self.machine.state
    }

    pub fn measurements(&self) -> &[(WireId, bool)] {
        &self.machine.measurements
    }
}
