mod common;

use std::sync::Arc;

use nalgebra::Complex;
use rand::Rng;

use common::{bits, golden, rng};
use qcdl_core::builder::{wires, BuildContext};
use qcdl_core::examples::{self, Params, CATALOG};
use qcdl_core::formats::{parse, render_ascii, render_counts, serialize, AsciiOptions};
use qcdl_core::ir::{concat, validate, Gate, SignedControl, WireId};
use qcdl_core::sim::{fidelity, simulate, GateRegistry, SimConfig, SimError, SimInput, C64};
use qcdl_core::transforms::{decompose, gate_count, inline_all, reverse_circuit, GateBase};

const LISTINGS: [&str; 5] = ["mycirc", "mycirc2", "mycirc3", "timestep", "timestep2"];

#[test]
fn goldens_match_generators() {
    for name in LISTINGS {
        let c = examples::build(name, &Params::default()).unwrap();
        assert_eq!(serialize(&c), golden(&format!("{name}.txt")), "{name} text");
        assert_eq!(render_counts(&gate_count(&c, true)), golden(&format!("{name}.count")), "{name} count");
        assert_eq!(render_ascii(&c, &AsciiOptions::default()), golden(&format!("{name}.ascii")), "{name} ascii");
    }
    let lifted = examples::lifted(&examples::parity(4).unwrap()).unwrap();
    assert_eq!(serialize(&lifted), golden("parity4_lifted.txt"));
    let rev = examples::reversible(&examples::parity(4).unwrap()).unwrap();
    assert_eq!(render_counts(&gate_count(&rev, true)), golden("parity4_reversible.count"));
    assert_eq!(serialize(&examples::adder(2).unwrap()), golden("adder2.txt"));
    assert_eq!(serialize(&examples::bwt_diffusion(1, 1.0).unwrap()), golden("bwt1.txt"));
    let nest = examples::nested_boxes(2, 3).unwrap();
    assert_eq!(serialize(&nest), golden("nest2x3.txt"));
    assert_eq!(render_counts(&gate_count(&nest, false)), golden("nest_per_box.count"));
}

#[test]
fn mycirc_counts() {
    let rep = render_counts(&gate_count(&examples::mycirc().unwrap(), true));
    assert!(rep.contains(" 2: \"H\"\n") && rep.contains(" 1: \"not\", controls 1\n") && rep.contains("Total gates: 3\n"));
}

#[test]
fn reverse_of_mycirc_is_cnot_h_h() {
    let c = examples::mycirc().unwrap();
    let r = reverse_circuit(&c, &GateRegistry::builtins()).unwrap();
    assert_eq!(
        r.gates,
        vec![
            Gate::controlled("not", vec![WireId(0)], vec![SignedControl::pos(WireId(1))]),
            Gate::unitary("H", vec![WireId(1)]),
            Gate::unitary("H", vec![WireId(0)]),
        ]
    );
}

#[test]
fn mycirc_then_reverse_is_identity() {
    let c = examples::mycirc().unwrap();
    let round = concat(&c, &reverse_circuit(&c, &GateRegistry::builtins()).unwrap()).unwrap();
    for x in 0..4 {
        let out = simulate(&round, &SimInput::Basis(bits(x, 2)), &SimConfig::default()).unwrap();
        assert_eq!(out.basis_outputs(1e-9), Some(bits(x, 2)));
    }
}

#[test]
fn decompose_fixed_point_and_timestep2_fidelity() {
    let m = examples::mycirc().unwrap();
    assert_eq!(decompose(&m, GateBase::Toffoli).unwrap(), m);
    let t = examples::timestep().unwrap();
    let t2 = examples::timestep2().unwrap();
    for x in 0..8 {
        let input = SimInput::Basis(bits(x, 3));
        let a = simulate(&t, &input, &SimConfig::default()).unwrap().output_amplitudes();
        let b = simulate(&t2, &input, &SimConfig::default()).unwrap().output_amplitudes();
        assert!(fidelity(&a, &b) >= 1.0 - 1e-9);
    }
}

#[test]
fn box_used_twice_inlines_to_six_gates() {
    let mut ctx = BuildContext::default();
    let q = ctx.input_qubits(2).unwrap();
    let body = |ctx: &mut BuildContext, ws: &[WireId]| {
        ctx.hadamard(qcdl_core::builder::Qubit(ws[0]))?;
        ctx.hadamard(qcdl_core::builder::Qubit(ws[1]))?;
        ctx.gate_ctrl("not", &[], &[qcdl_core::builder::Qubit(ws[0])], &[SignedControl::pos(ws[1])])?;
        Ok(ws.to_vec())
    };
    let ws = wires(&q);
    ctx.boxed("f", &ws, body).unwrap();
    ctx.boxed("f", &ws, body).unwrap();
    let c = ctx.finalize(&ws).unwrap();
    assert_eq!(c.gates.len(), 2);
    assert_eq!(inline_all(&c).unwrap().gates.len(), 6);
}

#[test]
fn parity_one_has_no_ancillas() {
    let c = examples::lifted(&examples::parity(1).unwrap()).unwrap();
    assert!(c.gates.is_empty());
    assert!(examples::parity(0).is_err());
}

#[test]
fn adder_with_zero_b_is_identity() {
    let c = examples::adder(3).unwrap();
    for a in 0..8 {
        let input: Vec<bool> = bits(a, 3).into_iter().chain(bits(0, 3)).collect();
        let out = qcdl_core::sim::boolean_simulate(&c, &input).unwrap();
        assert_eq!(&out[..3], &input[..3]);
        assert_eq!(&out[3..], &input[..3]);
    }
}

#[test]
fn w_gate_behaviour() {
    let reg = examples::registry_with_w();
    let cfg = SimConfig { registry: Arc::new(reg), ..SimConfig::default() };
    let mut c = qcdl_core::ir::identity(&[qcdl_core::ir::WireKind::Quantum; 2]);
    c.gates = vec![Gate::unitary("W", vec![WireId(0), WireId(1)])];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expect = [[1.0, 0.0, 0.0, 0.0], [0.0, h, h, 0.0], [0.0, h, -h, 0.0], [0.0, 0.0, 0.0, 1.0]];
    for (x, want) in expect.iter().enumerate() {
        // Input bits are in output order; the first wire is the most significant.
        let input = vec![x & 2 != 0, x & 1 != 0];
        let amps = simulate(&c, &SimInput::Basis(input), &cfg).unwrap().output_amplitudes();
        for (a, w) in amps.iter().zip(want) {
            assert!((a - Complex::new(*w, 0.0)).norm() < 1e-12, "column {x}: {amps:?}");
        }
    }
    let mut round = c.clone();
    round.gates.push(Gate::unitary("W_inv", vec![WireId(0), WireId(1)]));
    let mut r = rng(7);
    for _ in 0..10 {
        let v: Vec<C64> = (0..4).map(|_| Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = v.into_iter().map(|a| a / n).collect();
        let out = simulate(&round, &SimInput::State { amplitudes: v.clone(), bits: vec![] }, &cfg).unwrap();
        assert!(fidelity(&out.output_amplitudes(), &v) > 1.0 - 1e-9);
    }
}

#[test]
fn bwt_needs_w_and_preserves_norm() {
    let c = examples::bwt_diffusion(1, 1.0).unwrap();
    let err = simulate(&c, &SimInput::Basis(vec![false; 5]), &SimConfig::default()).unwrap_err();
    assert_eq!(err, SimError::UnregisteredGate("W".into()));
    let cfg = SimConfig { registry: Arc::new(examples::registry_with_w()), ..SimConfig::default() };
    for n in 1..=2 {
        let c = examples::bwt_diffusion(n, 0.4).unwrap();
        let q = c.inputs.len();
        let mut r = rng(n as u64);
        for _ in 0..5 {
            let x: Vec<bool> = (0..q).map(|_| r.gen()).collect();
            let out = simulate(&c, &SimInput::Basis(x), &cfg).unwrap();
            assert!((out.state.norm() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn bwt_reverse_negates_the_angle() {
    let reg = examples::registry_with_w();
    let cfg = SimConfig { registry: Arc::new(reg.clone()), ..SimConfig::default() };
    let sorted = |c: &qcdl_core::ir::Circuit| {
        let mut lines: Vec<String> = serialize(c).lines().map(str::to_string).collect();
        lines.sort();
        lines
    };
    for n in 1..=2 {
        let fwd = examples::bwt_diffusion(n, 0.8).unwrap();
        let back = examples::bwt_diffusion(n, -0.8).unwrap();
        let rev = reverse_circuit(&fwd, &reg).unwrap();
        // Same gates; only the order of the commuting W layers is mirrored.
        assert_eq!(sorted(&rev), sorted(&back), "n={n}");
        assert!(reverse_circuit(&rev, &reg).unwrap().structurally_eq(&fwd));
        let mut r = rng(n as u64);
        for _ in 0..5 {
            let x: Vec<bool> = (0..fwd.inputs.len()).map(|_| r.gen()).collect();
            let a = simulate(&rev, &SimInput::Basis(x.clone()), &cfg).unwrap().output_amplitudes();
            let b = simulate(&back, &SimInput::Basis(x), &cfg).unwrap().output_amplitudes();
            assert!(fidelity(&a, &b) > 1.0 - 1e-9);
        }
    }
}

#[test]
fn catalog_builds_validates_and_decomposes() {
    let names: Vec<&str> = CATALOG.iter().map(|s| s.name).collect();
    for want in ["mycirc", "timestep", "parity", "bwt-diffusion", "adder"] {
        assert!(names.contains(&want));
    }
    for spec in CATALOG {
        let c = examples::build(spec.name, &Params::default()).unwrap();
        assert!(validate(&c).is_empty());
        assert_eq!(parse(&serialize(&c)).unwrap(), c);
        for base in [GateBase::Binary, GateBase::Toffoli] {
            let d = decompose(&c, base).unwrap();
            assert!(validate(&d).is_empty(), "{} {base:?}", spec.name);
        }
    }
}
