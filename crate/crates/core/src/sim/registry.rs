//! Named gate definitions: matrices for simulation and inverse metadata for
//! reversal.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

use crate::transforms::InverseRule;

pub type C64 = Complex<f64>;
pub type Matrix = DMatrix<C64>;
pub type MatrixBuilder = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

/// Unitarity tolerance on `‖U†U − I‖`.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

/// Name of the parameterized Z rotation `diag(e^{-it}, e^{it})`.
pub const EXP_Z: &str = "exp(-iZt)";

#[derive(Clone)]
pub struct GateDef {
    /// Number of target qubits.
    pub arity: usize,
    pub num_params: usize,
    pub inverse: InverseRule,
    builder: MatrixBuilder,
}

impl GateDef {
    pub fn new(
        arity: usize,
        num_params: usize,
        inverse: InverseRule,
        builder: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        GateDef { arity, num_params, inverse, builder: Arc::new(builder) }
    }

    pub fn matrix(&self, params: &[f64]) -> Matrix {
        (self.builder)(params)
    }

    fn sample_params(&self) -> [Vec<f64>; 2] {
        [vec![0.0; self.num_params], (0..self.num_params).map(|i| 0.7 - 1.3 * i as f64).collect()]
    }
}

impl fmt::Debug for GateDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GateDef")
            .field("arity", &self.arity)
            .field("num_params", &self.num_params)
            .field("inverse", &self.inverse)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegistryError {
    #[error("gate \"{name}\" matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { name: String, deviation: f64 },
    #[error("gate \"{name}\" matrix has dimension {found}, expected {expected}")]
    WrongDimension { name: String, expected: usize, found: usize },
    #[error("gate \"{0}\" is already registered with a different definition")]
    Conflict(String),
}

/// Deviation `‖U†U − I‖_F`.
pub fn unitarity_deviation(m: &Matrix) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - Matrix::identity(n, n)).norm()
}

#[derive(Clone, Debug, Default)]
pub struct GateRegistry {
    gates: BTreeMap<String, GateDef>,
}

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn mat(n: usize, entries: &[C64]) -> Matrix {
    Matrix::from_row_slice(n, n, entries)
}

impl GateRegistry {
    pub fn empty() -> Self {
        GateRegistry::default()
    }

    /// Registry with the built-in gates `not`, `X`, `Y`, `Z`, `H`, `S`,
    /// `S_inv`, `T`, `T_inv`, `swap` and `exp(-iZt)`.
    pub fn builtins() -> Self {
        let mut r = GateRegistry::empty();
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let x = mat(2, &[zero, one, one, zero]);
        let h = c(FRAC_1_SQRT_2, 0.0);
        let t = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let fixed = |m: Matrix| move |_: &[f64]| m.clone();
        let entries: Vec<(&str, usize, InverseRule, Matrix)> = vec![
            ("not", 1, InverseRule::SelfInverse, x.clone()),
            ("X", 1, InverseRule::SelfInverse, x),
            ("Y", 1, InverseRule::SelfInverse, mat(2, &[zero, c(0.0, -1.0), c(0.0, 1.0), zero])),
            ("Z", 1, InverseRule::SelfInverse, mat(2, &[one, zero, zero, -one])),
            ("H", 1, InverseRule::SelfInverse, mat(2, &[h, h, h, -h])),
            ("S", 1, InverseRule::Named("S_inv".into()), mat(2, &[one, zero, zero, c(0.0, 1.0)])),
            ("S_inv", 1, InverseRule::Named("S".into()), mat(2, &[one, zero, zero, c(0.0, -1.0)])),
            ("T", 1, InverseRule::Named("T_inv".into()), mat(2, &[one, zero, zero, t])),
            ("T_inv", 1, InverseRule::Named("T".into()), mat(2, &[one, zero, zero, t.conj()])),
            (
                "swap",
                2,
                InverseRule::SelfInverse,
                mat(
                    4,
                    &[
                        one, zero, zero, zero, //
                        zero, zero, one, zero, //
                        zero, one, zero, zero, //
                        zero, zero, zero, one,
                    ],
                ),
            ),
        ];
        for (name, arity, inv, m) in entries {
            r.register(name, GateDef::new(arity, 0, inv, fixed(m)))
                .expect("built-in gates are unitary");
        }
        r.register(
            EXP_Z,
            GateDef::new(1, 1, InverseRule::ParamNegate, |p: &[f64]| {
                let t = p.first().copied().unwrap_or(0.0);
                let zero = c(0.0, 0.0);
                mat(2, &[Complex::from_polar(1.0, -t), zero, zero, Complex::from_polar(1.0, t)])
            }),
        )
        .expect("rotation is unitary");
        r
    }

    /// Register a gate. Re-registering an identical definition is a no-op;
    /// a conflicting one is an error.
    pub fn register(&mut self, name: &str, def: GateDef) -> Result<(), RegistryError> {
        let dim = 1usize << def.arity;
        for params in def.sample_params() {
            let m = def.matrix(&params);
            if m.nrows() != dim || m.ncols() != dim {
                return Err(RegistryError::WrongDimension {
                    name: name.to_string(),
                    expected: dim,
                    found: m.nrows().max(m.ncols()),
                });
            }
            let deviation = unitarity_deviation(&m);
            if deviation >= UNITARY_TOLERANCE {
                return Err(RegistryError::NotUnitary { name: name.to_string(), deviation });
            }
        }
        if let Some(existing) = self.gates.get(name) {
            let same = existing.arity == def.arity
                && existing.num_params == def.num_params
                && existing.inverse == def.inverse
                && existing.sample_params().iter().all(|p| {
                    (existing.matrix(p) - def.matrix(p)).norm() < UNITARY_TOLERANCE
                });
            return if same { Ok(()) } else { Err(RegistryError::Conflict(name.to_string())) };
        }
        self.gates.insert(name.to_string(), def);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&GateDef> {
        self.gates.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.gates.contains_key(name)
    }

    pub fn inverse_rule(&self, name: &str) -> Option<&InverseRule> {
        self.gates.get(name).map(|d| &d.inverse)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.gates.keys().map(String::as_str)
    }
}
