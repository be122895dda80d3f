//! Boolean expressions and their compilation to reversible circuits.
//!
//! [`lift`] turns a [`ClassicalFunc`] into a circuit that writes every
//! operator node into its own fresh ancilla; [`classical_to_reversible`]
//! wraps it into the oracle `(x, y) ↦ (x, y ⊕ f(x))` with all scratch
//! uncomputed.

use std::fmt;

use thiserror::Error;

use crate::builder::{BuildContext, BuildError, BuildResult, Qubit};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalExpr {
    Var(usize),
    Const(bool),
    Not(Box<ClassicalExpr>),
    And(Box<ClassicalExpr>, Box<ClassicalExpr>),
    Or(Box<ClassicalExpr>, Box<ClassicalExpr>),
    Xor(Box<ClassicalExpr>, Box<ClassicalExpr>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("expected {expected} input bits, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("variable v{index} out of range for arity {arity}")]
    VarOutOfRange { index: usize, arity: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl ClassicalExpr {
    pub fn var(i: usize) -> Self {
        ClassicalExpr::Var(i)
    }

    pub fn not(e: ClassicalExpr) -> Self {
        ClassicalExpr::Not(Box::new(e))
    }

    pub fn and(a: ClassicalExpr, b: ClassicalExpr) -> Self {
        ClassicalExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ClassicalExpr, b: ClassicalExpr) -> Self {
        ClassicalExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: ClassicalExpr, b: ClassicalExpr) -> Self {
        ClassicalExpr::Xor(Box::new(a), Box::new(b))
    }

    /// Panics if a variable index is out of range; see [`ClassicalFunc::eval`].
    pub fn eval(&self, x: &[bool]) -> bool {
        match self {
            ClassicalExpr::Var(i) => x[*i],
            ClassicalExpr::Const(b) => *b,
            ClassicalExpr::Not(e) => !e.eval(x),
            ClassicalExpr::And(a, b) => a.eval(x) && b.eval(x),
            ClassicalExpr::Or(a, b) => a.eval(x) || b.eval(x),
            ClassicalExpr::Xor(a, b) => a.eval(x) ^ b.eval(x),
        }
    }

    /// Number of non-variable nodes; each gets one ancilla when lifted.
    pub fn op_count(&self) -> usize {
        match self {
            ClassicalExpr::Var(_) => 0,
            ClassicalExpr::Const(_) => 1,
            ClassicalExpr::Not(e) => 1 + e.op_count(),
            ClassicalExpr::And(a, b) | ClassicalExpr::Or(a, b) | ClassicalExpr::Xor(a, b) => {
                1 + a.op_count() + b.op_count()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ClassicalExpr::Var(_) | ClassicalExpr::Const(_) => 0,
            ClassicalExpr::Not(e) => 1 + e.depth(),
            ClassicalExpr::And(a, b) | ClassicalExpr::Or(a, b) | ClassicalExpr::Xor(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            ClassicalExpr::Var(i) => Some(*i),
            ClassicalExpr::Const(_) => None,
            ClassicalExpr::Not(e) => e.max_var(),
            ClassicalExpr::And(a, b) | ClassicalExpr::Or(a, b) | ClassicalExpr::Xor(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }
}

impl fmt::Display for ClassicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalExpr::Var(i) => write!(f, "v{i}"),
            ClassicalExpr::Const(b) => write!(f, "{}", u8::from(*b)),
            ClassicalExpr::Not(e) => write!(f, "(not {e})"),
            ClassicalExpr::And(a, b) => write!(f, "(and {a} {b})"),
            ClassicalExpr::Or(a, b) => write!(f, "(or {a} {b})"),
            ClassicalExpr::Xor(a, b) => write!(f, "(xor {a} {b})"),
        }
    }
}

/// `f : Bool^n → Bool^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalFunc {
    pub arity: usize,
    pub outputs: Vec<ClassicalExpr>,
}

impl ClassicalFunc {
    pub fn new(arity: usize, outputs: Vec<ClassicalExpr>) -> Result<Self, ClassicalError> {
        for e in &outputs {
            if let Some(i) = e.max_var().filter(|i| *i >= arity) {
                return Err(ClassicalError::VarOutOfRange { index: i, arity });
            }
        }
        Ok(ClassicalFunc { arity, outputs })
    }

    pub fn eval(&self, x: &[bool]) -> Result<Vec<bool>, ClassicalError> {
        if x.len() != self.arity {
            return Err(ClassicalError::Arity { expected: self.arity, found: x.len() });
        }
        Ok(self.outputs.iter().map(|e| e.eval(x)).collect())
    }

    pub fn op_count(&self) -> usize {
        self.outputs.iter().map(ClassicalExpr::op_count).sum()
    }
}

/// Result of [`lift`]: one wire per output expression plus the remaining
/// scratch ancillas, all still live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifted {
    pub outputs: Vec<Qubit>,
    pub scratch: Vec<Qubit>,
}

fn lift_node(
    ctx: &mut BuildContext,
    e: &ClassicalExpr,
    inputs: &[Qubit],
    made: &mut Vec<Qubit>,
) -> BuildResult<Qubit> {
    let (a, b) = match e {
        ClassicalExpr::Var(i) => return Ok(inputs[*i]),
        ClassicalExpr::Const(v) => {
            let anc = ctx.qinit_bool(false)?;
            if *v {
                ctx.qnot(anc)?;
            }
            made.push(anc);
            return Ok(anc);
        }
        ClassicalExpr::Not(x) => {
            let x = lift_node(ctx, x, inputs, made)?;
            let anc = ctx.qinit_bool(false)?;
            ctx.gate_ctrl("not", &[], &[anc], &[x.neg()])?;
            made.push(anc);
            return Ok(anc);
        }
        ClassicalExpr::And(a, b) | ClassicalExpr::Or(a, b) | ClassicalExpr::Xor(a, b) => (a, b),
    };
    let a = lift_node(ctx, a, inputs, made)?;
    let b = lift_node(ctx, b, inputs, made)?;
    let anc = ctx.qinit_bool(false)?;
    match e {
        ClassicalExpr::Xor(..) => {
            ctx.controlled_not(anc, a)?;
            ctx.controlled_not(anc, b)?;
        }
        _ if a == b => ctx.controlled_not(anc, a)?,
        ClassicalExpr::And(..) => ctx.gate_ctrl("not", &[], &[anc], &[a.pos(), b.pos()])?,
        _ => {
            ctx.gate_ctrl("not", &[], &[anc], &[a.neg(), b.neg()])?;
            ctx.qnot(anc)?;
        }
    }
    made.push(anc);
    Ok(anc)
}

/// Compile `f` onto `inputs`, leaving the inputs unchanged. Variables reuse
/// the input wires; every other node writes into a fresh ancilla.
pub fn lift(ctx: &mut BuildContext, f: &ClassicalFunc, inputs: &[Qubit]) -> BuildResult<Lifted> {
    if inputs.len() != f.arity {
        return Err(BuildError::Interface(format!("function takes {} inputs, got {}", f.arity, inputs.len())));
    }
    let mut made = Vec::new();
    let outputs: Vec<Qubit> =
        f.outputs.iter().map(|e| lift_node(ctx, e, inputs, &mut made)).collect::<Result<_, _>>()?;
    let scratch = made.into_iter().filter(|q| !outputs.contains(q)).collect();
    Ok(Lifted { outputs, scratch })
}

/// `(x, y) ↦ (x, y ⊕ f(x))`: compute `f`, copy the results into `y`, and
/// uncompute every ancilla.
pub fn classical_to_reversible(
    ctx: &mut BuildContext,
    f: &ClassicalFunc,
    x: &[Qubit],
    y: &[Qubit],
) -> BuildResult<()> {
    if y.len() != f.outputs.len() {
        return Err(BuildError::Interface(format!("function has {} outputs, got {}", f.outputs.len(), y.len())));
    }
    if let Some(q) = y.iter().find(|q| x.contains(q)) {
        return Err(BuildError::DuplicateWire(q.0));
    }
    ctx.with_computed(
        |ctx| lift(ctx, f, x),
        |ctx, l| {
            for (o, t) in l.outputs.iter().zip(y) {
                ctx.controlled_not(*t, *o)?;
            }
            Ok(())
        },
    )
}

/// Parse prefix notation: `v3`, `0`, `1`, `true`, `false`, `(not e)`,
/// `(and e e ...)`, `(or e e ...)`, `(xor e e ...)`. N-ary forms fold to
/// the right.
pub fn parse_expr(src: &str) -> Result<ClassicalExpr, ClassicalError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> ClassicalError {
        ClassicalError::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn atom(&mut self) -> &str {
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| c.is_whitespace() || c == '(' || c == ')').unwrap_or(rest.len());
        self.pos += n;
        &rest[..n]
    }

    fn expr(&mut self) -> Result<ClassicalExpr, ClassicalError> {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            None => Err(self.err("unexpected end of input")),
            Some(')') => Err(self.err("unexpected ')'")),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let start = self.pos;
                let op = self.atom().to_string();
                let mut args = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src[self.pos..].chars().next() {
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(self.err("missing ')'")),
                        _ => args.push(self.expr()?),
                    }
                }
                let fold = |args: Vec<ClassicalExpr>, f: fn(ClassicalExpr, ClassicalExpr) -> ClassicalExpr| {
                    let mut it = args.into_iter().rev();
                    let last = it.next()?;
                    Some(it.fold(last, |acc, e| f(e, acc)))
                };
                let bad = |m: &str| ClassicalError::Parse { offset: start, message: m.to_string() };
                match op.as_str() {
                    "not" if args.len() == 1 => Ok(ClassicalExpr::not(args.pop().expect("one argument"))),
                    "not" => Err(bad("not takes one argument")),
                    "and" => fold(args, ClassicalExpr::and).ok_or_else(|| bad("and needs arguments")),
                    "or" => fold(args, ClassicalExpr::or).ok_or_else(|| bad("or needs arguments")),
                    "xor" => fold(args, ClassicalExpr::xor).ok_or_else(|| bad("xor needs arguments")),
                    other => Err(bad(&format!("unknown operator '{other}'"))),
                }
            }
            Some(_) => {
                let start = self.pos;
                let a = self.atom();
                match a {
                    "0" | "false" => Ok(ClassicalExpr::Const(false)),
                    "1" | "true" => Ok(ClassicalExpr::Const(true)),
                    _ => a
                        .strip_prefix('v')
                        .and_then(|n| n.parse().ok())
                        .map(ClassicalExpr::Var)
                        .ok_or(ClassicalError::Parse { offset: start, message: format!("bad atom '{a}'") }),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::wires;
    use crate::sim::boolean_simulate;

    fn bits(i: usize, n: usize) -> Vec<bool> {
        (0..n).map(|k| i >> (n - 1 - k) & 1 == 1).collect()
    }

    #[test]
    fn parse_and_print() {
        let e = parse_expr("(xor v0 v1 v2)").unwrap();
        assert_eq!(e, ClassicalExpr::xor(ClassicalExpr::var(0), ClassicalExpr::xor(ClassicalExpr::var(1), ClassicalExpr::var(2))));
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        assert_eq!(parse_expr("(or true (not v4))").unwrap().to_string(), "(or 1 (not v4))");
        assert!(matches!(parse_expr("(nand v0 v1)"), Err(ClassicalError::Parse { .. })));
        assert!(matches!(parse_expr("(and v0"), Err(ClassicalError::Parse { .. })));
        assert!(matches!(parse_expr("v0 v1"), Err(ClassicalError::Parse { .. })));
    }

    #[test]
    fn var_lift_is_free() {
        let f = ClassicalFunc::new(1, vec![ClassicalExpr::var(0)]).unwrap();
        let mut ctx = BuildContext::default();
        let x = ctx.input_qubit().unwrap();
        let l = lift(&mut ctx, &f, &[x]).unwrap();
        assert_eq!(l.outputs, vec![x]);
        assert!(ctx.gates().is_empty());
    }

    #[test]
    fn every_operator_lifts_correctly() {
        let src = "(or (and v0 (not v1)) (xor v2 (or v0 v0)))";
        let f = ClassicalFunc::new(3, vec![parse_expr(src).unwrap(), ClassicalExpr::Const(true)]).unwrap();
        let mut ctx = BuildContext::default();
        let xs = ctx.input_qubits(3).unwrap();
        let l = lift(&mut ctx, &f, &xs).unwrap();
        assert_eq!(l.outputs.len() + l.scratch.len(), f.op_count());
        let mut outs = wires(&xs);
        outs.extend(wires(&l.outputs));
        outs.extend(wires(&l.scratch));
        let c = ctx.finalize(&outs).unwrap();
        for i in 0..8 {
            let x = bits(i, 3);
            let got = boolean_simulate(&c, &x).unwrap();
            assert_eq!(&got[..3], &x[..]);
            assert_eq!(&got[3..5], &f.eval(&x).unwrap()[..]);
        }
    }

    #[test]
    fn reversible_form_is_an_oracle() {
        let f = ClassicalFunc::new(2, vec![parse_expr("(and v0 v1)").unwrap(), parse_expr("(or v0 v1)").unwrap()])
            .unwrap();
        let mut ctx = BuildContext::default();
        let xs = ctx.input_qubits(2).unwrap();
        let ys = ctx.input_qubits(2).unwrap();
        classical_to_reversible(&mut ctx, &f, &xs, &ys).unwrap();
        let mut outs = wires(&xs);
        outs.extend(wires(&ys));
        let c = ctx.finalize(&outs).unwrap();
        for i in 0..16 {
            let v = bits(i, 4);
            let fx = f.eval(&v[..2]).unwrap();
            let want = vec![v[0], v[1], v[2] ^ fx[0], v[3] ^ fx[1]];
            assert_eq!(boolean_simulate(&c, &v).unwrap(), want);
        }
    }

    #[test]
    fn out_of_range_vars_rejected() {
        assert_eq!(
            ClassicalFunc::new(2, vec![ClassicalExpr::var(2)]),
            Err(ClassicalError::VarOutOfRange { index: 2, arity: 2 })
        );
    }
}
