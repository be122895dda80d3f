//! Example circuit families and a name-indexed catalog for the CLI.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::Complex;
use thiserror::Error;

use crate::builder::{wires, Bit, BuildContext, BuildError, BuildResult, Qubit};
use crate::classical::{classical_to_reversible, lift, ClassicalExpr, ClassicalFunc};
use crate::ir::{Circuit, WireId};
use crate::sim::{GateDef, GateRegistry, Matrix, RegistryError, SimConfig, EXP_Z};
use crate::transforms::{decompose, GateBase, InverseRule, TransformError};

#[derive(Debug, Error)]
pub enum ExampleError {
    #[error("unknown example \"{0}\"")]
    Unknown(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

fn mycirc_body(ctx: &mut BuildContext, a: Qubit, b: Qubit) -> BuildResult<()> {
    ctx.hadamard(a)?;
    ctx.hadamard(b)?;
    ctx.controlled_not(a, b)
}

fn three_qubits(
    body: impl FnOnce(&mut BuildContext, Qubit, Qubit, Qubit) -> BuildResult<()>,
) -> BuildResult<Circuit> {
    let mut ctx = BuildContext::default();
    let q = ctx.input_qubits(3)?;
    body(&mut ctx, q[0], q[1], q[2])?;
    ctx.finalize(&wires(&q))
}

/// `H a; H b; not a ctrl b`.
pub fn mycirc() -> BuildResult<Circuit> {
    let mut ctx = BuildContext::default();
    let q = ctx.input_qubits(2)?;
    mycirc_body(&mut ctx, q[0], q[1])?;
    ctx.finalize(&wires(&q))
}

/// mycirc on (a,b); the block mycirc(a,b); mycirc(b,a) controlled by c;
/// then mycirc on (a,c). Twelve gates.
pub fn mycirc2() -> BuildResult<Circuit> {
    three_qubits(|ctx, a, b, c| {
        mycirc_body(ctx, a, b)?;
        ctx.with_controls(&[c.pos()], |ctx| {
            mycirc_body(ctx, a, b)?;
            mycirc_body(ctx, b, a)
        })?;
        mycirc_body(ctx, a, c)
    })
}

/// Scoped ancilla x: Toffoli onto x, H on c controlled by x, Toffoli again.
pub fn mycirc3() -> BuildResult<Circuit> {
    three_qubits(|ctx, a, b, c| {
        ctx.with_ancilla(|ctx, x| {
            ctx.with_controls(&[a.pos(), b.pos()], |ctx| ctx.qnot(x))?;
            ctx.with_controls(&[x.pos()], |ctx| ctx.hadamard(c))?;
            ctx.with_controls(&[a.pos(), b.pos()], |ctx| ctx.qnot(x))
        })
    })
}

/// mycirc(a,b); not c ctrl (a,b); the inverse of mycirc on (a,b).
pub fn timestep() -> BuildResult<Circuit> {
    three_qubits(|ctx, a, b, c| {
        mycirc_body(ctx, a, b)?;
        ctx.with_controls(&[a.pos(), b.pos()], |ctx| ctx.qnot(c))?;
        ctx.reverse_simple(
            |ctx, ws| {
                mycirc_body(ctx, Qubit(ws[0]), Qubit(ws[1]))?;
                Ok(ws.to_vec())
            },
            &[a.0, b.0],
        )?;
        Ok(())
    })
}

/// `timestep` lowered to gates on at most two wires.
pub fn timestep2() -> Result<Circuit, ExampleError> {
    Ok(decompose(&timestep()?, GateBase::Binary)?)
}

/// `v0 ⊕ (v1 ⊕ (… ⊕ v(n-1)))`.
pub fn parity(n: usize) -> Result<ClassicalFunc, ExampleError> {
    if n == 0 {
        return Err(ExampleError::BadParam("parity needs n >= 1".into()));
    }
    let mut e = ClassicalExpr::var(n - 1);
    for i in (0..n - 1).rev() {
        e = ClassicalExpr::xor(ClassicalExpr::var(i), e);
    }
    Ok(ClassicalFunc::new(n, vec![e]).expect("variables are in range"))
}

/// `f` lifted onto fresh inputs. Outputs: the inputs, then the result
/// wires, then the scratch ancillas, all left live.
pub fn lifted(f: &ClassicalFunc) -> BuildResult<Circuit> {
    let mut ctx = BuildContext::default();
    let x = ctx.input_qubits(f.arity)?;
    let l = lift(&mut ctx, f, &x)?;
    let mut outs = wires(&x);
    for q in l.outputs.iter().chain(&l.scratch) {
        if !outs.contains(&q.0) {
            outs.push(q.0);
        }
    }
    ctx.finalize(&outs)
}

/// `(x, y) ↦ (x, y ⊕ f(x))` on `arity + outputs` inputs.
pub fn reversible(f: &ClassicalFunc) -> BuildResult<Circuit> {
    let mut ctx = BuildContext::default();
    let x = ctx.input_qubits(f.arity)?;
    let y = ctx.input_qubits(f.outputs.len())?;
    classical_to_reversible(&mut ctx, f, &x, &y)?;
    let all: Vec<WireId> = wires(&x).into_iter().chain(wires(&y)).collect();
    ctx.finalize(&all)
}

/// Control polarities of the diffusion step: (a_i, b_i) for the not-gates
/// onto the ancilla, and r for the central rotation.
pub const BWT_POLARITY: (bool, bool, bool) = (true, false, false);

fn signed(q: Qubit, positive: bool) -> crate::ir::SignedControl {
    if positive {
        q.pos()
    } else {
        q.neg()
    }
}

/// One diffusion step over `2n` wire pairs `(a_i, b_i)` and a control `r`.
/// Inputs are `a_1, b_1, …, a_2n, b_2n, r`. Uses the gates `W`, `W_inv`
/// and `exp(-iZt)`.
pub fn bwt_diffusion(n: usize, t: f64) -> Result<Circuit, ExampleError> {
    if n == 0 {
        return Err(ExampleError::BadParam("bwt-diffusion needs n >= 1".into()));
    }
    let (pa, pb, pr) = BWT_POLARITY;
    let mut ctx = BuildContext::default();
    let pairs: Vec<(Qubit, Qubit)> = (0..2 * n)
        .map(|_| Ok((ctx.input_qubit()?, ctx.input_qubit()?)))
        .collect::<BuildResult<_>>()?;
    let r = ctx.input_qubit()?;
    for (a, b) in &pairs {
        ctx.gate("W", &[], &[*a, *b])?;
    }
    ctx.with_ancilla(|ctx, h| {
        for (a, b) in &pairs {
            ctx.gate_ctrl("not", &[], &[h], &[signed(*a, pa), signed(*b, pb)])?;
        }
        ctx.gate_ctrl(EXP_Z, &[t], &[h], &[signed(r, pr)])?;
        for (a, b) in pairs.iter().rev() {
            ctx.gate_ctrl("not", &[], &[h], &[signed(*a, pa), signed(*b, pb)])?;
        }
        Ok(())
    })?;
    for (a, b) in &pairs {
        ctx.gate("W_inv", &[], &[*a, *b])?;
    }
    let mut outs: Vec<WireId> = pairs.iter().flat_map(|(a, b)| [a.0, b.0]).collect();
    outs.push(r.0);
    Ok(ctx.finalize(&outs)?)
}

/// The two-qubit `W`: identity on |00⟩ and |11⟩, a Hadamard on the span of
/// |01⟩ and |10⟩. It is its own adjoint.
pub fn w_matrix() -> Matrix {
    let z = Complex::new(0.0, 0.0);
    let o = Complex::new(1.0, 0.0);
    let h = Complex::new(FRAC_1_SQRT_2, 0.0);
    Matrix::from_row_slice(4, 4, &[o, z, z, z, z, h, h, z, z, h, -h, z, z, z, z, o])
}

/// Register `W` and `W_inv`.
pub fn register_w(reg: &mut GateRegistry) -> Result<(), RegistryError> {
    reg.register("W", GateDef::new(2, 0, InverseRule::Named("W_inv".into()), |_| w_matrix()))?;
    reg.register("W_inv", GateDef::new(2, 0, InverseRule::Named("W".into()), |_| w_matrix().adjoint()))
}

/// Built-in gates plus `W`.
pub fn registry_with_w() -> GateRegistry {
    let mut r = GateRegistry::builtins();
    register_w(&mut r).expect("W is unitary");
    r
}

fn maj(ctx: &mut BuildContext, x: Qubit, y: Qubit, z: Qubit) -> BuildResult<()> {
    ctx.controlled_not(y, z)?;
    ctx.controlled_not(x, z)?;
    ctx.gate_ctrl("not", &[], &[z], &[x.pos(), y.pos()])
}

fn uma(ctx: &mut BuildContext, x: Qubit, y: Qubit, z: Qubit) -> BuildResult<()> {
    ctx.gate_ctrl("not", &[], &[z], &[x.pos(), y.pos()])?;
    ctx.controlled_not(x, z)?;
    ctx.controlled_not(y, x)
}

/// In-place ripple-carry adder `(a, b) ↦ (a, b + a mod 2^l)`. Inputs are
/// `a` then `b`, each little-endian. One carry ancilla.
pub fn adder(l: usize) -> Result<Circuit, ExampleError> {
    if l == 0 {
        return Err(ExampleError::BadParam("adder needs l >= 1".into()));
    }
    let mut ctx = BuildContext::default();
    let a = ctx.input_qubits(l)?;
    let b = ctx.input_qubits(l)?;
    ctx.with_ancilla(|ctx, c| {
        let carry = |i: usize| if i == 0 { c } else { a[i - 1] };
        for i in 0..l {
            maj(ctx, carry(i), b[i], a[i])?;
        }
        for i in (0..l).rev() {
            uma(ctx, carry(i), b[i], a[i])?;
        }
        Ok(())
    })?;
    let all: Vec<WireId> = wires(&a).into_iter().chain(wires(&b)).collect();
    Ok(ctx.finalize(&all)?)
}

/// `levels` nested boxes, each calling the one below `fanout` times, over a
/// leaf box holding a single `H`: `fanout^levels` gates once inlined. One
/// qubit in and out.
pub fn nested_boxes(levels: usize, fanout: usize) -> BuildResult<Circuit> {
    fn level(ctx: &mut BuildContext, k: usize, fanout: usize, q: WireId) -> BuildResult<WireId> {
        if k == 0 {
            return ctx.boxed("leaf", &[q], |ctx, ws| {
                ctx.hadamard(Qubit(ws[0]))?;
                Ok(ws.to_vec())
            })
            .map(|o| o[0]);
        }
        let name = format!("level{k}");
        ctx.boxed(&name, &[q], |ctx, ws| {
            let mut w = ws[0];
            for _ in 0..fanout {
                w = level(ctx, k - 1, fanout, w)?;
            }
            Ok(vec![w])
        })
        .map(|o| o[0])
    }
    let mut ctx = BuildContext::default();
    let q = ctx.input_qubit()?;
    let out = level(&mut ctx, levels, fanout, q.0)?;
    ctx.finalize(&[out])
}

/// Outcome of [`dynamic_lift_demo`].
#[derive(Clone, Debug)]
pub struct LiftDemo {
    pub circuit: Circuit,
    /// The lifted measurement outcome.
    pub outcome: bool,
    /// Amplitude of |0⟩ on the output qubit.
    pub zero_amplitude: Complex<f64>,
}

/// Measure `H|0⟩`, lift the bit, prepare a qubit holding that value and
/// apply `X` to it when the value was 1. The qubit always ends in |0⟩ and
/// the emitted circuit depends on the outcome.
pub fn dynamic_lift_demo(seed: u64) -> BuildResult<LiftDemo> {
    let mut ctx = BuildContext::interactive(SimConfig::default().with_seed(seed));
    let q = ctx.qinit_bool(false)?;
    ctx.hadamard(q)?;
    let m: Bit = ctx.measure(q)?;
    let outcome = ctx.dynamic_lift(m)?;
    let p = ctx.qinit_bool(outcome)?;
    if outcome {
        ctx.gate("X", &[], &[p])?;
    }
    let (circuit, session) = ctx.finish_session(&[p.0, m.0])?;
    let session = session.expect("interactive context");
    let amps = session.state().amplitudes_in(&[p.0])?;
    Ok(LiftDemo { circuit, outcome, zero_amplitude: amps[0] })
}

/// Parameters accepted by the catalog.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub t: Option<f64>,
    /// Parity only: build `(x, y) ↦ (x, y ⊕ f(x))` instead of the lifted form.
    pub reversible: bool,
}

/// A catalog entry.
#[derive(Clone, Copy, Debug)]
pub struct ExampleSpec {
    pub name: &'static str,
    /// Parameters with defaults, e.g. `n=4`.
    pub params: &'static [(&'static str, &'static str)],
    pub summary: &'static str,
}

impl fmt::Display for ExampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{:<14} {:<12} {}", self.name, ps.join(" "), self.summary)
    }
}

/// Every example, in listing order.
pub const CATALOG: &[ExampleSpec] = &[
    ExampleSpec { name: "mycirc", params: &[], summary: "H on a and b, then not a controlled by b" },
    ExampleSpec { name: "mycirc2", params: &[], summary: "mycirc blocks under a control" },
    ExampleSpec { name: "mycirc3", params: &[], summary: "scoped ancilla with Toffolis" },
    ExampleSpec { name: "timestep", params: &[], summary: "mycirc, Toffoli, inverse of mycirc" },
    ExampleSpec { name: "timestep2", params: &[], summary: "timestep in gates on at most two wires" },
    ExampleSpec { name: "parity", params: &[("n", "4")], summary: "lifted xor of n bits (--reversible for the oracle form)" },
    ExampleSpec { name: "bwt-diffusion", params: &[("n", "1"), ("t", "1.0")], summary: "diffusion step over 2n wire pairs (needs W)" },
    ExampleSpec { name: "adder", params: &[("l", "3")], summary: "in-place ripple-carry adder on two l-bit registers" },
    ExampleSpec { name: "nest", params: &[("n", "3"), ("l", "10")], summary: "n nested boxes, each calling the next l times (l^n gates)" },
];

pub fn find(name: &str) -> Option<&'static ExampleSpec> {
    CATALOG.iter().find(|s| s.name == name)
}

fn check(spec: &ExampleSpec, p: &Params) -> Result<(), ExampleError> {
    for (key, given) in [("n", p.n.is_some()), ("l", p.l.is_some()), ("t", p.t.is_some())] {
        if given && !spec.params.iter().any(|(k, _)| *k == key) {
            return Err(ExampleError::BadParam(format!("{} takes no parameter {key}", spec.name)));
        }
    }
    if p.reversible && spec.name != "parity" {
        return Err(ExampleError::BadParam(format!("--reversible applies to parity, not {}", spec.name)));
    }
    Ok(())
}

/// Build a catalog example.
pub fn build(name: &str, p: &Params) -> Result<Circuit, ExampleError> {
    let spec = find(name).ok_or_else(|| ExampleError::Unknown(name.to_string()))?;
    check(spec, p)?;
    Ok(match name {
        "mycirc" => mycirc()?,
        "mycirc2" => mycirc2()?,
        "mycirc3" => mycirc3()?,
        "timestep" => timestep()?,
        "timestep2" => timestep2()?,
        "parity" => {
            let f = parity(p.n.unwrap_or(4))?;
            if p.reversible {
                reversible(&f)?
            } else {
                lifted(&f)?
            }
        }
        "bwt-diffusion" => bwt_diffusion(p.n.unwrap_or(1), p.t.unwrap_or(1.0))?,
        "adder" => adder(p.l.unwrap_or(3))?,
        "nest" => nested_boxes(p.n.unwrap_or(3), p.l.unwrap_or(10))?,
        _ => unreachable!("catalog entry without a generator"),
    })
}
