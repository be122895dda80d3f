//! Acceptance suite: one line per criterion with its time budget, non-zero
//! exit if any criterion fails. Runs as a plain binary (`harness = false`).

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use nalgebra::Complex;
use num_bigint::BigUint;
use rand::Rng;

use common::{bits, golden, random_circuit, random_expr, rng, value, Mix};
use qcdl_core::builder::{wires, BuildContext};
use qcdl_core::classical::{lift, ClassicalFunc};
use qcdl_core::examples;
use qcdl_core::formats::{parse, render_counts, serialize};
use qcdl_core::ir::{concat, identity, Circuit, Gate, WireId, WireKind};
use qcdl_core::sim::{
    boolean_simulate, fidelity, run_shots, simulate, GateRegistry, SimConfig, SimError, SimInput, C64,
};
use qcdl_core::transforms::{
    decompose, gate_count, inline_all, max_primitive_width, reverse_circuit, GateBase, GateCountReport, GateKey,
};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn all_inputs(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |x| bits(x, n))
}

fn c1_listings() -> Check {
    let built: [(&str, Circuit); 4] = [
        ("mycirc", examples::mycirc().map_err(err)?),
        ("mycirc2", examples::mycirc2().map_err(err)?),
        ("mycirc3", examples::mycirc3().map_err(err)?),
        ("timestep", examples::timestep().map_err(err)?),
    ];
    for (name, c) in built {
        let want = golden(&format!("{name}.txt"));
        ensure!(serialize(&c) == want, "{name} differs from its golden file");
    }
    Ok(())
}

fn c2_parity_lift() -> Check {
    let f = examples::parity(4).map_err(err)?;
    let c = examples::lifted(&f).map_err(err)?;
    let wires: BTreeSet<WireId> = c.inputs.iter().map(|(w, _)| *w).chain(c.gates.iter().flat_map(Gate::wires)).collect();
    let inits = c.gates.iter().filter(|g| matches!(g, Gate::Init { .. })).count();
    ensure!(wires.len() == 7, "{} wires", wires.len());
    ensure!(c.inputs.len() == 4 && inits == 3, "{} inputs, {inits} ancillas", c.inputs.len());
    // Outputs: inputs, the result, then the two scratch wires.
    for x in all_inputs(4) {
        let out = boolean_simulate(&c, &x).map_err(err)?;
        let want = x.iter().fold(false, |a, b| a ^ b);
        ensure!(out[..4] == x[..] && out[4] == want, "input {x:?} gives {out:?}");
    }
    Ok(())
}

fn c3_reversible_parity() -> Check {
    for n in 1..=8 {
        let c = examples::reversible(&examples::parity(n).map_err(err)?).map_err(err)?;
        for xy in all_inputs(n + 1) {
            let out = boolean_simulate(&c, &xy).map_err(|e| format!("n={n}: {e}"))?;
            let mut want = xy.clone();
            want[n] ^= xy[..n].iter().fold(false, |a, b| a ^ b);
            ensure!(out == want, "n={n} input {xy:?} gives {out:?}");
        }
    }
    Ok(())
}

fn c4_random_oracles() -> Check {
    let mut r = rng(4);
    for case in 0..200 {
        let n = r.gen_range(1..=8);
        let depth = r.gen_range(1..=10);
        let e = random_expr(&mut r, n, depth);
        let f = ClassicalFunc::new(n, vec![e.clone()]).map_err(err)?;

        let mut ctx = BuildContext::default();
        let x = ctx.input_qubits(n).map_err(err)?;
        let l = lift(&mut ctx, &f, &x).map_err(err)?;
        let mut outs = wires(&x);
        for q in l.outputs.iter().chain(&l.scratch) {
            if !outs.contains(&q.0) {
                outs.push(q.0);
            }
        }
        let at = outs.iter().position(|w| *w == l.outputs[0].0).expect("result is an output");
        let lifted = ctx.finalize(&outs).map_err(err)?;
        let ancillas = lifted.gates.iter().filter(|g| matches!(g, Gate::Init { .. })).count();
        ensure!(ancillas == e.op_count(), "case {case} {e}: {ancillas} ancillas for {} operators", e.op_count());

        let rev = examples::reversible(&f).map_err(err)?;
        for xs in all_inputs(n) {
            let want = e.eval(&xs);
            let out = boolean_simulate(&lifted, &xs).map_err(err)?;
            ensure!(out[at] == want && out[..n] == xs[..], "case {case} {e}: lift wrong on {xs:?}");
            for y in [false, true] {
                let mut input = xs.clone();
                input.push(y);
                let out = boolean_simulate(&rev, &input).map_err(err)?;
                ensure!(out[..n] == xs[..] && out[n] == (y ^ want), "case {case} {e}: oracle wrong on {input:?}");
            }
        }
    }
    Ok(())
}

fn random_state(r: &mut impl Rng, qubits: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..1usize << qubits).map(|_| Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

fn c5_decompose() -> Check {
    let mut r = rng(5);
    let mut corpus = vec![examples::timestep().map_err(err)?];
    for _ in 0..50 {
        let q = r.gen_range(1..=5);
        let len = r.gen_range(1..=12);
        corpus.push(random_circuit(&mut r, q, len, Mix::Unitary));
    }
    let cfg = SimConfig::default();
    for (i, c) in corpus.iter().enumerate() {
        for base in [GateBase::Binary, GateBase::Toffoli] {
            let d = decompose(c, base).map_err(|e| format!("circuit {i}: {e}"))?;
            ensure!(
                max_primitive_width(&d) <= base.max_width(),
                "circuit {i}: {base:?} output has a gate on {} wires",
                max_primitive_width(&d)
            );
            for _ in 0..10 {
                let input = SimInput::State { amplitudes: random_state(&mut r, c.inputs.len()), bits: vec![] };
                let a = simulate(c, &input, &cfg).map_err(err)?.output_amplitudes();
                let b = simulate(&d, &input, &cfg).map_err(err)?.output_amplitudes();
                let f = fidelity(&a, &b);
                ensure!(f >= 1.0 - 1e-9, "circuit {i} {base:?}: overlap {f}");
            }
        }
    }
    Ok(())
}

fn c6_reverse() -> Check {
    let reg = GateRegistry::builtins();
    let mut r = rng(6);
    for i in 0..1000 {
        let q = r.gen_range(1..=5);
        let len = r.gen_range(0..=20);
        let c = random_circuit(&mut r, q, len, Mix::Reversible);
        let back = reverse_circuit(&reverse_circuit(&c, &reg).map_err(err)?, &reg).map_err(err)?;
        ensure!(back.structurally_eq(&c), "circuit {i}: reverse is not an involution");
    }
    let cfg = SimConfig::default();
    for i in 0..100 {
        let q = r.gen_range(1..=5);
        let len = r.gen_range(0..=15);
        let c = random_circuit(&mut r, q, len, Mix::Unitary);
        let round = concat(&c, &reverse_circuit(&c, &reg).map_err(err)?).map_err(err)?;
        for x in all_inputs(q) {
            let out = simulate(&round, &SimInput::Basis(x.clone()), &cfg).map_err(err)?;
            ensure!(out.basis_outputs(1e-9) == Some(x.clone()), "circuit {i}: basis state {x:?} moved");
        }
    }
    Ok(())
}

fn c7_counting() -> Check {
    let start = Instant::now();
    let c = examples::nested_boxes(5, 100).map_err(err)?;
    let rep = gate_count(&c, true);
    ensure!(rep.total == BigUint::from(10u64.pow(10)), "total {}", rep.total);
    ensure!(start.elapsed() < Duration::from_secs(1), "large nest took {:?}", start.elapsed());
    for levels in 1..=3 {
        for fanout in 1..=4 {
            let c = examples::nested_boxes(levels, fanout).map_err(err)?;
            let agg = gate_count(&c, true);
            let flat = gate_count(&inline_all(&c).map_err(err)?, true);
            ensure!(agg.entries == flat.entries, "nest {levels}x{fanout}: entries differ");
            ensure!(agg.total == flat.total && agg.qubits == flat.qubits, "nest {levels}x{fanout}: totals differ");
        }
    }
    Ok(())
}

fn c8_report_format() -> Check {
    let entries = [
        (GateKey::new("Init0", 0, 0), 1636u32),
        (GateKey::new("Not", 1, 0), 3484),
        (GateKey::new("Not", 1, 1), 288),
        (GateKey::new("Not", 2, 0), 2592),
        (GateKey::new("Term0", 0, 0), 1632),
    ]
    .into_iter()
    .map(|(k, v)| (k, BigUint::from(v)))
    .collect::<std::collections::BTreeMap<_, _>>();
    let rep = GateCountReport {
        total: entries.values().sum(),
        entries,
        inputs: 4,
        outputs: 8,
        qubits: 71,
        aggregated: true,
    };
    ensure!(render_counts(&rep) == golden("report_layout.count"), "layout differs");
    let cases = [
        ("timestep.count", examples::timestep().map_err(err)?),
        ("bwt1.count", examples::bwt_diffusion(1, 1.0).map_err(err)?),
    ];
    for (file, c) in cases {
        ensure!(render_counts(&gate_count(&c, true)) == golden(file), "{file} differs");
    }
    Ok(())
}

fn c9_assertions() -> Check {
    let mut bad = identity(&[]);
    bad.gates = vec![
        Gate::Init { wire: WireId(0), kind: WireKind::Quantum, value: false },
        Gate::unitary("X", vec![WireId(0)]),
        Gate::TermAssert { wire: WireId(0), kind: WireKind::Quantum, value: false },
    ];
    match simulate(&bad, &SimInput::Basis(vec![]), &SimConfig::default()) {
        Err(SimError::AssertionFailed { p, .. }) => ensure!((p - 1.0).abs() <= 1e-9, "p = {p}"),
        other => return Err(format!("expected an assertion failure, got {other:?}")),
    }
    let with_w = SimConfig { registry: std::sync::Arc::new(examples::registry_with_w()), ..SimConfig::default() };
    let mut corpus = vec![
        examples::mycirc3().map_err(err)?,
        examples::timestep2().map_err(err)?,
        examples::bwt_diffusion(1, 0.7).map_err(err)?,
    ];
    for n in 1..=5 {
        corpus.push(examples::reversible(&examples::parity(n).map_err(err)?).map_err(err)?);
    }
    for l in 1..=3 {
        corpus.push(examples::adder(l).map_err(err)?);
    }
    for (i, c) in corpus.iter().enumerate() {
        for x in all_inputs(c.inputs.len()) {
            simulate(c, &SimInput::Basis(x.clone()), &with_w).map_err(|e| format!("corpus {i} on {x:?}: {e}"))?;
        }
    }
    Ok(())
}

fn c10_dynamic_lift() -> Check {
    let mut shapes = BTreeSet::new();
    for seed in 0..100 {
        let d = examples::dynamic_lift_demo(seed).map_err(err)?;
        ensure!((d.zero_amplitude.norm() - 1.0).abs() <= 1e-9, "seed {seed}: |0⟩ amplitude {}", d.zero_amplitude);
        shapes.insert(serialize(&d.circuit));
    }
    ensure!(shapes.len() == 2, "{} distinct circuit shapes", shapes.len());
    Ok(())
}

fn c11_statistics() -> Check {
    let mut c = identity(&[]);
    c.gates = vec![
        Gate::Init { wire: WireId(0), kind: WireKind::Quantum, value: false },
        Gate::unitary("H", vec![WireId(0)]),
        Gate::Measure { wire: WireId(0) },
    ];
    c.outputs = vec![(WireId(0), WireKind::Classical)];
    let hist = run_shots(&c, &SimInput::Basis(vec![]), &SimConfig::default().with_seed(11), 10_000).map_err(err)?;
    let ones = hist.get(&vec![true]).copied().unwrap_or(0);
    let freq = ones as f64 / 10_000.0;
    ensure!((0.47..=0.53).contains(&freq), "ones frequency {freq}");
    Ok(())
}

fn c12_adder() -> Check {
    let reg = GateRegistry::builtins();
    for l in 1..=4usize {
        let c = examples::adder(l).map_err(err)?;
        let round = concat(&c, &reverse_circuit(&c, &reg).map_err(err)?).map_err(err)?;
        let m = 1u64 << l;
        for a in 0..m {
            for b in 0..m {
                let input: Vec<bool> = bits(a, l).into_iter().chain(bits(b, l)).collect();
                let out = boolean_simulate(&c, &input).map_err(err)?;
                ensure!(value(&out[..l]) == a && value(&out[l..]) == (a + b) % m, "l={l}: {a}+{b}");
                ensure!(boolean_simulate(&round, &input).map_err(err)? == input, "l={l}: reverse does not undo {a}+{b}");
            }
        }
        let back = reverse_circuit(&reverse_circuit(&c, &reg).map_err(err)?, &reg).map_err(err)?;
        ensure!(back.structurally_eq(&c), "l={l}: reverse is not an involution");
    }
    Ok(())
}

fn c13_serialization() -> Check {
    let mut r = rng(13);
    for i in 0..1000 {
        let q = r.gen_range(0..=5);
        let len = r.gen_range(0..=25);
        let c = random_circuit(&mut r, q, len, Mix::Full);
        let text = serialize(&c);
        let back = parse(&text).map_err(|e| format!("circuit {i}: {e}\n{text}"))?;
        ensure!(back == c, "circuit {i}: round trip changed the circuit\n{text}");
    }
    for name in ["mycirc", "mycirc2", "mycirc3", "timestep", "timestep2", "parity4_lifted", "adder2", "bwt1", "nest2x3"] {
        let text = golden(&format!("{name}.txt"));
        let c = parse(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure!(serialize(&c) == text, "{name}: golden file not stable");
    }
    Ok(())
}

fn c14_agreement() -> Check {
    let mut corpus: Vec<Circuit> = Vec::new();
    for n in 1..=8 {
        let f = examples::parity(n).map_err(err)?;
        corpus.push(examples::lifted(&f).map_err(err)?);
        corpus.push(examples::reversible(&f).map_err(err)?);
    }
    for l in 1..=4 {
        corpus.push(examples::adder(l).map_err(err)?);
    }
    let mut r = rng(14);
    for _ in 0..30 {
        let n = r.gen_range(1..=4);
        let f = ClassicalFunc::new(n, vec![random_expr(&mut r, n, 4)]).map_err(err)?;
        corpus.push(examples::lifted(&f).map_err(err)?);
        corpus.push(examples::reversible(&f).map_err(err)?);
    }
    let cfg = SimConfig::default();
    let mut checked = 0;
    for (i, c) in corpus.iter().enumerate() {
        if gate_count(c, true).qubits > 12 {
            continue;
        }
        checked += 1;
        for x in all_inputs(c.inputs.len()) {
            let b = boolean_simulate(c, &x).map_err(err)?;
            let s = simulate(c, &SimInput::Basis(x.clone()), &cfg).map_err(err)?;
            ensure!(s.basis_outputs(1e-9) == Some(b.clone()), "corpus {i} on {x:?}: simulators disagree");
        }
    }
    ensure!(checked >= 40, "only {checked} circuits within 12 wires");
    Ok(())
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 14] = [
        (1, "listing fidelity", Duration::from_secs(1), c1_listings),
        (2, "parity oracle lift", Duration::from_secs(1), c2_parity_lift),
        (3, "reversibilization", Duration::from_secs(5), c3_reversible_parity),
        (4, "random oracle equivalence", Duration::from_secs(30), c4_random_oracles),
        (5, "decomposition soundness", Duration::from_secs(60), c5_decompose),
        (6, "reversal", Duration::from_secs(30), c6_reverse),
        (7, "hierarchical counting", Duration::from_secs(1), c7_counting),
        (8, "count report format", Duration::MAX, c8_report_format),
        (9, "assertive termination", Duration::from_secs(1), c9_assertions),
        (10, "dynamic lifting", Duration::from_secs(5), c10_dynamic_lift),
        (11, "measurement statistics", Duration::from_secs(5), c11_statistics),
        (12, "adder", Duration::from_secs(10), c12_adder),
        (13, "serialization", Duration::from_secs(10), c13_serialization),
        (14, "simulator agreement", Duration::from_secs(30), c14_agreement),
    ];
    let mut failed = 0;
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            if took > budget {
                Err(format!("took {took:?}, budget {budget:?}"))
            } else {
                Ok(())
            }
        });
        match result {
            Ok(()) => println!("criterion {n:>2} PASS  {name} ({:.3} s)", took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name} ({:.3} s): {e}", took.as_secs_f64());
            }
        }
    }
    println!("{} of 14 criteria passed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
