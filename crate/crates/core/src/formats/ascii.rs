//! ASCII-art circuit diagrams: one row per wire, one column per gate.

use std::collections::HashMap;

use crate::ir::{Circuit, ClassicalOp, Gate, SignedControl, WireId, WireKind};

#[derive(Clone, Debug, Default)]
pub struct AsciiOptions {
    /// Restrict output to 7-bit ASCII.
    pub plain: bool,
    /// Wrap columns so no line exceeds this many characters.
    pub width: Option<usize>,
}

struct Glyphs {
    qwire: char,
    cwire: char,
    qcross: char,
    ccross: char,
    vert: char,
    on: &'static str,
    off: &'static str,
    xor: &'static str,
    swap: &'static str,
    init: [&'static str; 2],
    term: [&'static str; 2],
    meas: &'static str,
    discard: &'static str,
}

const UNICODE: Glyphs = Glyphs {
    qwire: '─',
    cwire: '═',
    qcross: '┼',
    ccross: '╪',
    vert: '│',
    on: "•",
    off: "○",
    xor: "⊕",
    swap: "×",
    init: ["|0⟩", "|1⟩"],
    term: ["⟨0|", "⟨1|"],
    meas: "M",
    discard: "⊣",
};

const PLAIN: Glyphs = Glyphs {
    qwire: '-',
    cwire: '=',
    qcross: '+',
    ccross: '#',
    vert: '|',
    on: "*",
    off: "o",
    xor: "+",
    swap: "x",
    init: ["|0>", "|1>"],
    term: ["<0|", "<1|"],
    meas: "M",
    discard: "-|",
};

type State = Option<WireKind>;

struct Cell {
    symbol: String,
    before: State,
    after: State,
}

/// One column: the cells the gate touches, keyed by row.
struct Column {
    cells: HashMap<usize, Cell>,
}

fn wire_char(g: &Glyphs, s: State) -> char {
    match s {
        Some(WireKind::Quantum) => g.qwire,
        Some(WireKind::Classical) => g.cwire,
        None => ' ',
    }
}

/// Render a circuit (top level only; calls appear as boxes).
pub fn render_ascii(c: &Circuit, opts: &AsciiOptions) -> String {
    let g = if opts.plain { &PLAIN } else { &UNICODE };

    let mut rows: Vec<WireId> = Vec::new();
    let mut row_of: HashMap<WireId, usize> = HashMap::new();
    let mut add_row = |w: WireId, rows: &mut Vec<WireId>| {
        *row_of.entry(w).or_insert_with(|| {
            rows.push(w);
            rows.len() - 1
        })
    };
    for (w, _) in &c.inputs {
        add_row(*w, &mut rows);
    }
    for gate in &c.gates {
        for w in gate_wires(gate) {
            add_row(w, &mut rows);
        }
    }

    let mut state: Vec<State> = vec![None; rows.len()];
    for (w, k) in &c.inputs {
        state[row_of[w]] = Some(*k);
    }

    let mut columns: Vec<(Column, Vec<State>)> = Vec::new();
    for gate in &c.gates {
        if matches!(gate, Gate::Comment { .. }) {
            continue;
        }
        let before = state.clone();
        let mut cells: HashMap<usize, Cell> = HashMap::new();
        let mut put = |w: WireId, symbol: String, after: State, state: &mut Vec<State>| {
            let r = row_of[&w];
            cells.insert(r, Cell { symbol, before: before[r], after });
            state[r] = after;
        };
        let ctl = |c: &SignedControl| if c.is_positive() { g.on } else { g.off }.to_string();
        match gate {
            Gate::Unitary { name, targets, controls, classical_controls, .. } => {
                let sym = match (name.as_str(), targets.len()) {
                    ("not" | "X", 1) => g.xor.to_string(),
                    ("swap", 2) => g.swap.to_string(),
                    _ => format!("[{name}]"),
                };
                for t in targets {
                    let k = before[row_of[t]];
                    put(*t, sym.clone(), k, &mut state);
                }
                for c in controls.iter().chain(classical_controls) {
                    let k = before[row_of[&c.wire]];
                    put(c.wire, ctl(c), k, &mut state);
                }
            }
            Gate::Init { wire, kind, value } => {
                put(*wire, g.init[usize::from(*value)].into(), Some(*kind), &mut state)
            }
            Gate::TermAssert { wire, value, .. } => {
                put(*wire, g.term[usize::from(*value)].into(), None, &mut state)
            }
            Gate::Discard { wire, .. } => put(*wire, g.discard.into(), None, &mut state),
            Gate::Measure { wire } => {
                put(*wire, g.meas.into(), Some(WireKind::Classical), &mut state)
            }
            Gate::Classical { op, targets, sources } => {
                let sym = match op {
                    ClassicalOp::Not | ClassicalOp::Xor => g.xor.to_string(),
                    op => format!("[{}]", op.name()),
                };
                for t in targets {
                    put(*t, sym.clone(), Some(WireKind::Classical), &mut state);
                }
                for s in sources {
                    put(*s, g.on.into(), Some(WireKind::Classical), &mut state);
                }
            }
            Gate::Call { name, inputs, outputs, controls, classical_controls } => {
                let out_kinds: Vec<WireKind> =
                    c.subroutines.get(name).map(|d| d.circuit.output_kinds()).unwrap_or_default();
                let sym = format!("[{name}]");
                for w in inputs {
                    if !outputs.contains(w) {
                        put(*w, sym.clone(), None, &mut state);
                    }
                }
                for (i, w) in outputs.iter().enumerate() {
                    let k = out_kinds.get(i).copied().or(before[row_of[w]]).or(Some(WireKind::Quantum));
                    put(*w, sym.clone(), k, &mut state);
                }
                for c in controls.iter().chain(classical_controls) {
                    let k = before[row_of[&c.wire]];
                    put(c.wire, ctl(c), k, &mut state);
                }
            }
            Gate::Comment { .. } => unreachable!(),
        }
        columns.push((Column { cells }, before));
    }

    let label_w = rows.iter().map(|w| w.to_string().len()).max().unwrap_or(1);
    let mut rendered: Vec<Vec<String>> = Vec::new();
    let mut widths: Vec<usize> = Vec::new();
    for (col, before) in &columns {
        let sym_w = col.cells.values().map(|c| c.symbol.chars().count()).max().unwrap_or(1);
        let w = sym_w + 2;
        let touched: Vec<usize> = col.cells.keys().copied().collect();
        let (lo, hi) = (*touched.iter().min().unwrap(), *touched.iter().max().unwrap());
        let mut out = Vec::with_capacity(rows.len());
        for (r, st) in before.iter().enumerate() {
            let (sym, left, right) = match col.cells.get(&r) {
                Some(cell) => (cell.symbol.clone(), wire_char(g, cell.before), wire_char(g, cell.after)),
                None => {
                    let wc = wire_char(g, *st);
                    let s = if r > lo && r < hi {
                        match st {
                            Some(WireKind::Quantum) => g.qcross,
                            Some(WireKind::Classical) => g.ccross,
                            None => g.vert,
                        }
                    } else {
                        wc
                    };
                    (s.to_string(), wc, wc)
                }
            };
            let pad = w - sym.chars().count();
            let l = pad / 2;
            let mut s = String::new();
            s.extend(std::iter::repeat_n(left, l));
            s.push_str(&sym);
            s.extend(std::iter::repeat_n(right, pad - l));
            out.push(s);
        }
        rendered.push(out);
        widths.push(w);
    }

    // Split columns into chunks that fit the requested width.
    let prefix = label_w + 2;
    let mut chunks: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    let mut used = prefix;
    for (i, w) in widths.iter().enumerate() {
        if let Some(limit) = opts.width {
            if i > start && used + w + 1 > limit {
                chunks.push(start..i);
                start = i;
                used = prefix;
            }
        }
        used += w;
    }
    chunks.push(start..widths.len());

    let mut text = String::new();
    for (ci, range) in chunks.iter().enumerate() {
        if ci > 0 {
            text.push('\n');
        }
        for (r, w) in rows.iter().enumerate() {
            let mut line = format!("{:>label_w$}: ", w.to_string());
            let lead = match range.clone().next() {
                Some(i) => columns[i].1[r],
                None => state[r],
            };
            line.push(wire_char(g, lead));
            for col in &rendered[range.clone()] {
                line.push_str(&col[r]);
            }
            let tail = match range.end {
                e if e == columns.len() => state[r],
                e => columns[e].1[r],
            };
            line.push(wire_char(g, tail));
            text.push_str(line.trim_end());
            text.push('\n');
        }
    }
    text
}

fn gate_wires(g: &Gate) -> Vec<WireId> {
    match g {
        Gate::Comment { .. } => Vec::new(),
        g => g.wires(),
    }
}
