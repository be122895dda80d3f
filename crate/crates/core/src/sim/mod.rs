//! Run functions: state-vector simulation with assertive-termination checks
//! and seeded measurement, boolean simulation of classical circuits, and the
//! interactive session behind dynamic lifting.

mod boolean;
mod exec;
mod registry;
mod rng;
mod session;
mod state;

use std::sync::Arc;

use thiserror::Error;

pub use boolean::boolean_simulate;
pub use registry::{
    unitarity_deviation, GateDef, GateRegistry, Matrix, MatrixBuilder, RegistryError, C64, EXP_Z,
    UNITARY_TOLERANCE,
};
pub use rng::SplitMix64;
pub use session::Session;
pub use state::{fidelity, run_shots, simulate, RunResult, SimInput, StateVector};

use crate::ir::WireId;
use crate::transforms::TransformError;

/// Default tolerance for assertive termination.
pub const DEFAULT_EPSILON: f64 = 1e-9;
/// Default limit on simultaneously live qubits.
pub const DEFAULT_QUBIT_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("TermAssert: qubit {wire} not in |{}⟩ (p = {p:.12})", u8::from(*.expected))]
    AssertionFailed { wire: WireId, expected: bool, p: f64 },
    #[error("TermAssert: bit {wire} is not {}", u8::from(*.expected))]
    BitAssertionFailed { wire: WireId, expected: bool },
    #[error("unregistered gate {0}")]
    UnregisteredGate(String),
    #[error("gate {name} expects {expected} targets, got {found}")]
    GateArity { name: String, expected: usize, found: usize },
    #[error("qubit cap of {0} exceeded")]
    QubitCap(usize),
    #[error("gate {0} is not classically simulable")]
    NotClassical(String),
    #[error("wire {0} is not live")]
    DeadWire(WireId),
    #[error("wire {0} is already live")]
    AlreadyLive(WireId),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Simulation settings.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub registry: Arc<GateRegistry>,
    pub seed: u64,
    pub epsilon: f64,
    pub qubit_cap: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            registry: Arc::new(GateRegistry::builtins()),
            seed: 0,
            epsilon: DEFAULT_EPSILON,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

impl SimConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_registry(mut self, registry: GateRegistry) -> Self {
        self.registry = Arc::new(registry);
        self
    }
}
