use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcdl_core::classical::{parse_expr, ClassicalFunc};
use qcdl_core::examples::{self, ExampleError, Params, CATALOG};
use qcdl_core::formats::{parse, render_ascii, render_counts, serialize, AsciiOptions};
use qcdl_core::ir::{Circuit, WireKind};
use qcdl_core::sim::{run_shots, simulate, GateRegistry, SimConfig, SimInput};
use qcdl_core::transforms::{decompose, gate_count, inline_all, reverse_circuit, GateBase};

/// Generate, transform, print and simulate quantum circuits.
#[derive(Parser, Debug)]
#[command(name = "qcdl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a catalog example.
    Example {
        name: String,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(short = 'l')]
        l: Option<usize>,
        /// Rotation angle (bwt-diffusion).
        #[arg(short = 't', allow_hyphen_values = true)]
        t: Option<f64>,
        /// Parity: emit (x, y) -> (x, y xor f(x)) instead of the lifted form.
        #[arg(long)]
        reversible: bool,
        #[command(flatten)]
        out: Output,
    },
    /// List the catalog with parameter defaults.
    List,
    /// Compile a boolean expression such as `(xor v0 (and v1 v2))`.
    Oracle {
        expr: String,
        /// Number of inputs; defaults to one more than the largest variable.
        #[arg(long)]
        arity: Option<usize>,
        /// Emit the lifted circuit (result and scratch left live) instead of
        /// the reversible oracle.
        #[arg(long)]
        oracle_only: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Read a circuit in the text format ("-" for stdin).
    Load {
        path: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Ascii,
    Gatecount,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Decompose {
    None,
    Toffoli,
    Binary,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(short = 'f', long = "format", value_enum, default_value = "text")]
    format: Format,
    /// Gate base to decompose into.
    #[arg(short = 'd', long = "decompose", value_enum, default_value = "none")]
    decompose: Decompose,
    /// Expand every call.
    #[arg(long)]
    inline: bool,
    /// Reverse the circuit.
    #[arg(short = 'r', long)]
    reverse: bool,
    /// Gate count per box instead of aggregated.
    #[arg(long)]
    per_box: bool,
    /// ASCII output without box-drawing characters.
    #[arg(long)]
    plain: bool,
    /// Wrap ASCII output at this many columns.
    #[arg(long)]
    width: Option<usize>,
    /// Register the W gate.
    #[arg(long)]
    with_w: bool,
    /// Simulate instead of printing the circuit.
    #[arg(long)]
    simulate: bool,
    /// Input values as a 0/1 string, one per input wire (default all 0).
    #[arg(long)]
    input: Option<String>,
    #[arg(short = 's', long, default_value_t = 0)]
    seed: u64,
    /// Run this many shots and print a histogram of classical outputs.
    #[arg(long)]
    shots: Option<usize>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("qcdl: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("qcdl: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::List => Ok(CATALOG.iter().map(|s| format!("{s}\n")).collect()),
        Command::Example { name, n, l, t, reversible, out } => {
            let p = Params { n, l, t, reversible };
            let c = examples::build(&name, &p).map_err(|e| match e {
                ExampleError::Unknown(_) | ExampleError::BadParam(_) => Failure::Usage(e.to_string()),
                e => runtime(e),
            })?;
            emit(c, &out)
        }
        Command::Oracle { expr, arity, oracle_only, out } => {
            let e = parse_expr(&expr).map_err(|e| Failure::Usage(e.to_string()))?;
            let arity = arity.unwrap_or(e.max_var().map_or(0, |v| v + 1));
            let f = ClassicalFunc::new(arity, vec![e]).map_err(|e| Failure::Usage(e.to_string()))?;
            let c = if oracle_only { examples::lifted(&f) } else { examples::reversible(&f) };
            emit(c.map_err(runtime)?, &out)
        }
        Command::Load { path, out } => {
            let text = if path == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(runtime)?
            } else {
                std::fs::read_to_string(&path).map_err(|e| runtime(format!("{path}: {e}")))?
            };
            let c = parse(&text).map_err(|e| runtime(format!("{path}: {e}")))?;
            emit(c, &out)
        }
    }
}

fn emit(c: Circuit, out: &Output) -> Result<String, Failure> {
    let registry = if out.with_w { examples::registry_with_w() } else { GateRegistry::builtins() };
    let mut c = c;
    if out.reverse {
        c = reverse_circuit(&c, &registry).map_err(runtime)?;
    }
    match out.decompose {
        Decompose::None => {}
        Decompose::Toffoli => c = decompose(&c, GateBase::Toffoli).map_err(runtime)?,
        Decompose::Binary => c = decompose(&c, GateBase::Binary).map_err(runtime)?,
    }
    if out.inline {
        c = inline_all(&c).map_err(runtime)?;
    }
    if out.simulate || out.shots.is_some() {
        return run_sim(&c, out, registry);
    }
    Ok(match out.format {
        Format::Text => serialize(&c),
        Format::Ascii => render_ascii(&c, &AsciiOptions { plain: out.plain, width: out.width }),
        Format::Gatecount => render_counts(&gate_count(&c, !out.per_box)),
    })
}

fn bits_str(bs: &[bool]) -> String {
    bs.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

fn run_sim(c: &Circuit, out: &Output, registry: GateRegistry) -> Result<String, Failure> {
    let input: Vec<bool> = match &out.input {
        None => vec![false; c.inputs.len()],
        Some(s) => s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Failure::Usage(format!("bad input character '{ch}'"))),
            })
            .collect::<Result<_, _>>()?,
    };
    if input.len() != c.inputs.len() {
        return Err(Failure::Usage(format!("circuit has {} inputs, got {}", c.inputs.len(), input.len())));
    }
    let cfg = SimConfig { registry: Arc::new(registry), ..SimConfig::default() }.with_seed(out.seed);
    let input = SimInput::Basis(input);
    let mut s = String::new();
    if let Some(shots) = out.shots {
        let hist = run_shots(c, &input, &cfg, shots).map_err(runtime)?;
        for (k, v) in hist {
            let _ = writeln!(s, "{}: {v}", bits_str(&k));
        }
        return Ok(s);
    }
    let r = simulate(c, &input, &cfg).map_err(runtime)?;
    for (w, b) in &r.measurements {
        let _ = writeln!(s, "measured {w} = {}", u8::from(*b));
    }
    let labels: Vec<String> = r
        .outputs
        .iter()
        .map(|(w, k)| format!("{w}:{}", if *k == WireKind::Quantum { "Qbit" } else { "Cbit" }))
        .collect();
    let _ = writeln!(s, "Outputs: {}", labels.join(", "));
    if let Some(bits) = r.basis_outputs(cfg.epsilon) {
        let _ = writeln!(s, "Basis state: {}", bits_str(&bits));
        return Ok(s);
    }
    let cbits = r.output_bits();
    if !cbits.is_empty() {
        let _ = writeln!(s, "Bits: {}", bits_str(&cbits));
    }
    let nq = r.outputs.iter().filter(|(_, k)| *k == WireKind::Quantum).count();
    for (i, a) in r.output_amplitudes().iter().enumerate() {
        if a.norm() > cfg.epsilon {
            let idx: String = (0..nq).rev().map(|j| if i >> j & 1 == 1 { '1' } else { '0' }).collect();
            let _ = writeln!(s, "|{idx}⟩ {:+.6}{:+.6}i", a.re, a.im);
        }
    }
    Ok(s)
}
