//! Structured quantum data: shape trees over wires with generic
//! initialization, measurement and controlled-not.
//!
//! Integer registers are little-endian: leaf 0 is the least significant bit.

use std::collections::HashSet;

use crate::builder::{Bit, BuildContext, BuildError, BuildResult, Qubit};
use crate::ir::WireId;

/// The parameter part of a piece of data: its structure and sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Bit,
    Qubit,
    Tuple(Vec<Shape>),
    /// Element shape and length.
    List(Box<Shape>, usize),
    /// Integer register of the given width.
    IntReg(usize),
}

impl Shape {
    /// Same structure with every leaf quantum.
    pub fn quantum(&self) -> Shape {
        self.map_leaves(Shape::Qubit)
    }

    /// Same structure with every leaf classical.
    pub fn classical(&self) -> Shape {
        self.map_leaves(Shape::Bit)
    }

    fn map_leaves(&self, leaf: Shape) -> Shape {
        match self {
            Shape::Bit | Shape::Qubit => leaf,
            Shape::Tuple(xs) => Shape::Tuple(xs.iter().map(|x| x.map_leaves(leaf.clone())).collect()),
            Shape::List(e, n) => Shape::List(Box::new(e.map_leaves(leaf)), *n),
            Shape::IntReg(w) => Shape::IntReg(*w),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Shape::Bit | Shape::Qubit => 1,
            Shape::Tuple(xs) => xs.iter().map(Shape::leaf_count).sum(),
            Shape::List(e, n) => e.leaf_count() * n,
            Shape::IntReg(w) => *w,
        }
    }
}

/// A shape tree with leaves of type `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Data<L> {
    Leaf(L),
    Tuple(Vec<Data<L>>),
    List(Vec<Data<L>>),
    /// Little-endian integer register.
    Int(Vec<L>),
}

/// Parameter data: host booleans.
pub type BData = Data<bool>;
/// Quantum data.
pub type QData = Data<Qubit>;
/// Classical run-time data.
pub type CData = Data<Bit>;

/// Leaf types that know their shape.
pub trait LeafKind {
    fn leaf_shape() -> Shape;
}

impl LeafKind for bool {
    fn leaf_shape() -> Shape {
        Shape::Bit
    }
}

impl LeafKind for Bit {
    fn leaf_shape() -> Shape {
        Shape::Bit
    }
}

impl LeafKind for Qubit {
    fn leaf_shape() -> Shape {
        Shape::Qubit
    }
}

impl<L> Data<L> {
    pub fn pair(a: Data<L>, b: Data<L>) -> Self {
        Data::Tuple(vec![a, b])
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Data::Leaf(l) => out.push(l),
            Data::Tuple(xs) | Data::List(xs) => xs.iter().for_each(|x| x.collect(out)),
            Data::Int(ls) => out.extend(ls),
        }
    }

    pub fn try_map<M, E>(&self, f: &mut impl FnMut(&L) -> Result<M, E>) -> Result<Data<M>, E> {
        Ok(match self {
            Data::Leaf(l) => Data::Leaf(f(l)?),
            Data::Tuple(xs) => Data::Tuple(xs.iter().map(|x| x.try_map(f)).collect::<Result<_, _>>()?),
            Data::List(xs) => Data::List(xs.iter().map(|x| x.try_map(f)).collect::<Result<_, _>>()?),
            Data::Int(ls) => Data::Int(ls.iter().map(&mut *f).collect::<Result<_, _>>()?),
        })
    }

    pub fn map<M>(&self, mut f: impl FnMut(&L) -> M) -> Data<M> {
        self.try_map(&mut |l| Ok::<M, ()>(f(l))).expect("infallible")
    }
}

impl<L: LeafKind> Data<L> {
    /// Shape of the data. An empty list has element shape `Tuple([])`.
    pub fn shape_of(&self) -> Shape {
        match self {
            Data::Leaf(_) => L::leaf_shape(),
            Data::Tuple(xs) => Shape::Tuple(xs.iter().map(Data::shape_of).collect()),
            Data::List(xs) => Shape::List(
                Box::new(xs.first().map_or(Shape::Tuple(Vec::new()), Data::shape_of)),
                xs.len(),
            ),
            Data::Int(ls) => Shape::IntReg(ls.len()),
        }
    }
}

impl BData {
    /// Integer parameter of `width` bits; `value` must fit.
    pub fn int(width: usize, value: u64) -> BData {
        Data::Int((0..width).map(|i| i < 64 && value >> i & 1 == 1).collect())
    }

    /// Value of an integer register.
    pub fn to_int(&self) -> Option<u64> {
        match self {
            Data::Int(bits) => Some(bits.iter().enumerate().map(|(i, b)| u64::from(*b) << i).sum()),
            _ => None,
        }
    }

    /// Rebuild data of `shape` from leaf values in traversal order.
    pub fn from_bits(shape: &Shape, bits: &[bool]) -> Option<BData> {
        let mut it = bits.iter().copied();
        let d = build(shape, &mut it)?;
        it.next().is_none().then_some(d)
    }
}

fn build(shape: &Shape, it: &mut impl Iterator<Item = bool>) -> Option<BData> {
    Some(match shape {
        Shape::Bit | Shape::Qubit => Data::Leaf(it.next()?),
        Shape::Tuple(xs) => Data::Tuple(xs.iter().map(|x| build(x, it)).collect::<Option<_>>()?),
        Shape::List(e, n) => Data::List((0..*n).map(|_| build(e, it)).collect::<Option<_>>()?),
        Shape::IntReg(w) => Data::Int((0..*w).map(|_| it.next()).collect::<Option<_>>()?),
    })
}

fn distinct(ws: &[WireId]) -> BuildResult<()> {
    let mut seen = HashSet::new();
    for w in ws {
        if !seen.insert(*w) {
            return Err(BuildError::DuplicateWire(*w));
        }
    }
    Ok(())
}

/// Fresh quantum wires holding `value`; one `Init` per leaf.
pub fn qinit(ctx: &mut BuildContext, value: &BData) -> BuildResult<QData> {
    value.try_map(&mut |b| ctx.qinit_bool(*b))
}

/// Quantum circuit inputs of the given shape (all leaves become qubits).
pub fn qinput(ctx: &mut BuildContext, shape: &Shape) -> BuildResult<QData> {
    Ok(match shape {
        Shape::Bit | Shape::Qubit => Data::Leaf(ctx.input_qubit()?),
        Shape::Tuple(xs) => Data::Tuple(xs.iter().map(|x| qinput(ctx, x)).collect::<Result<_, _>>()?),
        Shape::List(e, n) => Data::List((0..*n).map(|_| qinput(ctx, e)).collect::<Result<_, _>>()?),
        Shape::IntReg(w) => Data::Int(ctx.input_qubits(*w)?),
    })
}

/// One `Measure` per leaf; structure preserved.
pub fn measure(ctx: &mut BuildContext, q: &QData) -> BuildResult<CData> {
    let ws: Vec<WireId> = q.leaves().into_iter().map(|q| q.0).collect();
    distinct(&ws)?;
    q.try_map(&mut |q| ctx.measure(*q))
}

/// `not` on each target leaf controlled by the corresponding control leaf.
pub fn controlled_not(ctx: &mut BuildContext, target: &QData, control: &QData) -> BuildResult<()> {
    let (ts, cs) = (target.shape_of(), control.shape_of());
    if ts != cs {
        return Err(BuildError::Shape(format!("{ts:?} vs {cs:?}")));
    }
    let tw: Vec<Qubit> = target.leaves().into_iter().copied().collect();
    let cw: Vec<Qubit> = control.leaves().into_iter().copied().collect();
    let all: Vec<WireId> = tw.iter().chain(&cw).map(|q| q.0).collect();
    distinct(&all)?;
    for (t, c) in tw.iter().zip(&cw) {
        ctx.controlled_not(*t, *c)?;
    }
    Ok(())
}

/// Wire ids of the leaves of quantum data.
pub fn qwires(q: &QData) -> Vec<WireId> {
    q.leaves().into_iter().map(|q| q.0).collect()
}
