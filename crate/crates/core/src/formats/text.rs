//! The line-oriented circuit text format. See FORMAT.md for the grammar.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::ir::{
    validate, Circuit, ClassicalOp, Gate, Polarity, SignedControl, SubroutineDef, Violation, WireId,
    WireKind,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid circuit: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn ids(ws: &[WireId]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
}

fn ctrls(cs: &[SignedControl]) -> String {
    cs.iter()
        .map(|c| format!("{}{}", if c.is_positive() { '+' } else { '-' }, c.wire))
        .collect::<Vec<_>>()
        .join(",")
}

fn controls_suffix(out: &mut String, qc: &[SignedControl], cc: &[SignedControl]) {
    if !qc.is_empty() {
        let _ = write!(out, " ctrls=[{}]", ctrls(qc));
    }
    if !cc.is_empty() {
        let _ = write!(out, " cctrls=[{}]", ctrls(cc));
    }
}

fn kind_name(k: WireKind) -> &'static str {
    match k {
        WireKind::Quantum => "Qbit",
        WireKind::Classical => "Cbit",
    }
}

fn interface(label: &str, ws: &[(WireId, WireKind)]) -> String {
    let body = ws.iter().map(|(w, k)| format!("{w}:{}", kind_name(*k))).collect::<Vec<_>>().join(", ");
    if body.is_empty() {
        format!("{label}:")
    } else {
        format!("{label}: {body}")
    }
}

fn gate_line(g: &Gate) -> String {
    let prefix = |k: WireKind| if k == WireKind::Quantum { 'Q' } else { 'C' };
    let mut s = String::new();
    match g {
        Gate::Unitary { name, params, targets, controls, classical_controls } => {
            let _ = write!(s, "QGate[{}]", quote(name));
            if !params.is_empty() {
                let ps: Vec<String> = params.iter().map(|p| format!("{p:?}")).collect();
                let _ = write!(s, "({})", ps.join(","));
            }
            let _ = write!(s, "({})", ids(targets));
            controls_suffix(&mut s, controls, classical_controls);
        }
        Gate::Init { wire, kind, value } => {
            let _ = write!(s, "{}Init{}({wire})", prefix(*kind), u8::from(*value));
        }
        Gate::TermAssert { wire, kind, value } => {
            let _ = write!(s, "{}Term{}({wire})", prefix(*kind), u8::from(*value));
        }
        Gate::Discard { wire, kind } => {
            let _ = write!(s, "{}Discard({wire})", prefix(*kind));
        }
        Gate::Measure { wire } => {
            let _ = write!(s, "QMeas({wire})");
        }
        Gate::Classical { op, targets, sources } => {
            let _ = write!(s, "CGate[{}]({})({})", quote(op.name()), ids(targets), ids(sources));
        }
        Gate::Call { name, inputs, outputs, controls, classical_controls } => {
            let _ = write!(s, "Call[{}]({})({})", quote(name), ids(inputs), ids(outputs));
            controls_suffix(&mut s, controls, classical_controls);
        }
        Gate::Comment { text, labels } => {
            let ls: Vec<String> = labels.iter().map(|(w, l)| format!("{w}:{}", quote(l))).collect();
            let _ = write!(s, "Comment[{}]({})", quote(text), ls.join(","));
        }
    }
    s
}

fn body(out: &mut String, c: &Circuit) {
    out.push_str(&interface("Inputs", &c.inputs));
    out.push('\n');
    for g in &c.gates {
        out.push_str(&gate_line(g));
        out.push('\n');
    }
    out.push_str(&interface("Outputs", &c.outputs));
    out.push('\n');
}

/// Serialize a circuit and its subroutine table (sorted by name).
pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    body(&mut out, c);
    for (name, def) in &c.subroutines {
        let _ = write!(out, "\nSubroutine: {}\n", quote(name));
        body(&mut out, &def.circuit);
    }
    out
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax { line: self.line, message: message.into() })
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> PResult<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            let near: String = self.rest().chars().take(12).collect();
            self.err(format!("expected '{lit}' near '{near}'"))
        }
    }

    fn done(&self) -> PResult<()> {
        if self.rest().trim().is_empty() {
            Ok(())
        } else {
            self.err(format!("unexpected trailing text '{}'", self.rest().trim()))
        }
    }

    fn string(&mut self) -> PResult<String> {
        self.expect("\"")?;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, '"')) => out.push('"'),
                    Some((_, '\\')) => out.push('\\'),
                    Some((_, 'n')) => out.push('\n'),
                    _ => return self.err("bad escape in string"),
                },
                c => out.push(c),
            }
        }
        self.err("unterminated string")
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> PResult<T> {
        let r = self.rest();
        let n = r.find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '+'))).unwrap_or(r.len());
        match r[..n].parse() {
            Ok(v) if n > 0 => {
                self.pos += n;
                Ok(v)
            }
            _ => self.err(format!("bad {what} '{}'", &r[..n])),
        }
    }

    fn wire(&mut self) -> PResult<WireId> {
        let r = self.rest();
        let n = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        match r[..n].parse() {
            Ok(v) => {
                self.pos += n;
                Ok(WireId(v))
            }
            Err(_) => self.err(format!("bad wire id near '{}'", r.chars().take(8).collect::<String>())),
        }
    }

    /// `(a,b,c)`, possibly empty.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn wires(&mut self) -> PResult<Vec<WireId>> {
        self.list(Cursor::wire)
    }

    fn wire_arg(&mut self) -> PResult<WireId> {
        self.expect("(")?;
        let w = self.wire()?;
        self.expect(")")?;
        Ok(w)
    }

    fn controls(&mut self) -> PResult<Vec<SignedControl>> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            let polarity = if self.eat("+") {
                Polarity::Positive
            } else if self.eat("-") {
                Polarity::Negative
            } else {
                return self.err(format!(
                    "bad control token '{}'",
                    self.rest().chars().take_while(|c| *c != ',' && *c != ']').collect::<String>()
                ));
            };
            out.push(SignedControl { wire: self.wire()?, polarity });
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn control_suffix(&mut self) -> PResult<(Vec<SignedControl>, Vec<SignedControl>)> {
        let mut qc = Vec::new();
        let mut cc = Vec::new();
        if self.eat(" ctrls=") {
            qc = self.controls()?;
        }
        if self.eat(" cctrls=") {
            cc = self.controls()?;
        }
        Ok((qc, cc))
    }

    fn interface(&mut self, label: &str) -> PResult<Vec<(WireId, WireKind)>> {
        self.expect(label)?;
        self.expect(":")?;
        let mut out = Vec::new();
        if self.rest().trim().is_empty() {
            return Ok(out);
        }
        self.expect(" ")?;
        loop {
            let w = self.wire()?;
            self.expect(":")?;
            let k = if self.eat("Qbit") {
                WireKind::Quantum
            } else if self.eat("Cbit") {
                WireKind::Classical
            } else {
                return self.err("expected Qbit or Cbit");
            };
            out.push((w, k));
            if !self.eat(", ") {
                break;
            }
        }
        self.done()?;
        Ok(out)
    }

    fn gate(&mut self) -> PResult<Gate> {
        let q = WireKind::Quantum;
        let c = WireKind::Classical;
        let g = if self.eat("QGate[") {
            let name = self.string()?;
            self.expect("]")?;
            let first = self.list(|p| p.number::<f64>("parameter"))?;
            let (params, targets) = if self.rest().starts_with('(') {
                (first, self.wires()?)
            } else {
                let ts = first
                    .iter()
                    .map(|x| {
                        if x.fract() == 0.0 && *x >= 0.0 && *x <= u32::MAX as f64 {
                            Ok(WireId(*x as u32))
                        } else {
                            Err(())
                        }
                    })
                    .collect::<Result<Vec<_>, _>>();
                match ts {
                    Ok(ts) => (Vec::new(), ts),
                    Err(()) => return self.err("bad target list"),
                }
            };
            let (controls, classical_controls) = self.control_suffix()?;
            Gate::Unitary { name, params, targets, controls, classical_controls }
        } else if self.eat("CGate[") {
            let name = self.string()?;
            let Some(op) = ClassicalOp::from_name(&name) else {
                return self.err(format!("unknown classical gate \"{name}\""));
            };
            self.expect("]")?;
            let targets = self.wires()?;
            let sources = self.wires()?;
            Gate::Classical { op, targets, sources }
        } else if self.eat("Call[") {
            let name = self.string()?;
            self.expect("]")?;
            let inputs = self.wires()?;
            let outputs = self.wires()?;
            let (controls, classical_controls) = self.control_suffix()?;
            Gate::Call { name, inputs, outputs, controls, classical_controls }
        } else if self.eat("Comment[") {
            let text = self.string()?;
            self.expect("]")?;
            let labels = self.list(|p| {
                let w = p.wire()?;
                p.expect(":")?;
                Ok((w, p.string()?))
            })?;
            Gate::Comment { text, labels }
        } else if self.eat("QMeas") {
            Gate::Measure { wire: self.wire_arg()? }
        } else {
            let kind = if self.eat("Q") {
                q
            } else if self.eat("C") {
                c
            } else {
                return self.err(format!("unknown gate '{}'", self.rest()));
            };
            if self.eat("Init0") {
                Gate::Init { wire: self.wire_arg()?, kind, value: false }
            } else if self.eat("Init1") {
                Gate::Init { wire: self.wire_arg()?, kind, value: true }
            } else if self.eat("Term0") {
                Gate::TermAssert { wire: self.wire_arg()?, kind, value: false }
            } else if self.eat("Term1") {
                Gate::TermAssert { wire: self.wire_arg()?, kind, value: true }
            } else if self.eat("Discard") {
                Gate::Discard { wire: self.wire_arg()?, kind }
            } else {
                return self.err(format!("unknown gate '{}'", self.s.trim()));
            }
        };
        self.done()?;
        Ok(g)
    }
}

struct Lines<'a> {
    it: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn next_nonblank(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.it.by_ref() {
            if !l.trim().is_empty() {
                return Some((i + 1, l.trim_end()));
            }
        }
        None
    }
}

fn parse_body(lines: &mut Lines<'_>, first: Option<(usize, &str)>) -> PResult<Circuit> {
    let (n, l) = first.ok_or(ParseError::Syntax { line: 0, message: "missing Inputs line".into() })?;
    let inputs = Cursor { s: l, pos: 0, line: n }.interface("Inputs")?;
    let mut gates = Vec::new();
    loop {
        let Some((n, l)) = lines.next_nonblank() else {
            return Err(ParseError::Syntax { line: n + 1, message: "missing Outputs line".into() });
        };
        let mut cur = Cursor { s: l, pos: 0, line: n };
        if l.starts_with("Outputs:") {
            let outputs = cur.interface("Outputs")?;
            return Ok(Circuit { inputs, gates, outputs, subroutines: BTreeMap::new() });
        }
        gates.push(cur.gate()?);
    }
}

/// Parse and validate a circuit in the text format.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut lines = Lines { it: text.lines().enumerate().peekable() };
    let first = lines.next_nonblank();
    let mut c = parse_body(&mut lines, first)?;
    while let Some((n, l)) = lines.next_nonblank() {
        let mut cur = Cursor { s: l, pos: 0, line: n };
        cur.expect("Subroutine: ")?;
        let name = cur.string()?;
        cur.done()?;
        if c.subroutines.contains_key(&name) {
            return cur.err(format!("subroutine \"{name}\" defined twice"));
        }
        let first = lines.next_nonblank();
        let circuit = parse_body(&mut lines, first)?;
        c.subroutines.insert(name.clone(), SubroutineDef { name, circuit });
    }
    let violations = validate(&c);
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    Ok(c)
}
