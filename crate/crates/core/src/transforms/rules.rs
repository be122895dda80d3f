use std::collections::BTreeMap;
use std::sync::Arc;

use super::TransformError;
use crate::ir::{validate, Circuit, Gate, SubroutineDef, WireId};

/// What a rule matcher sees of a unitary gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateShape {
    pub name: String,
    /// Number of targets.
    pub arity: usize,
    /// Positive controls, quantum and classical.
    pub pos: usize,
    /// Negative controls, quantum and classical.
    pub neg: usize,
}

impl GateShape {
    pub fn of(g: &Gate) -> Option<GateShape> {
        let Gate::Unitary { name, targets, controls, classical_controls, .. } = g else {
            return None;
        };
        let all = controls.iter().chain(classical_controls);
        let pos = all.clone().filter(|c| c.is_positive()).count();
        Some(GateShape {
            name: name.clone(),
            arity: targets.len(),
            pos,
            neg: all.count() - pos,
        })
    }
}

/// Handed to replacement generators so they can allocate scratch wires.
pub struct RuleContext {
    next: u32,
}

impl RuleContext {
    pub fn fresh(&mut self) -> WireId {
        self.next += 1;
        WireId(self.next - 1)
    }
}

type Matcher = Arc<dyn Fn(&GateShape) -> bool + Send + Sync>;
type Replacer = Arc<dyn Fn(&Gate, &mut RuleContext) -> Vec<Gate> + Send + Sync>;

/// A rewrite rule on unitary gates.
#[derive(Clone)]
pub struct TransformRule {
    matcher: Matcher,
    replace: Replacer,
}

impl TransformRule {
    pub fn new(
        matcher: impl Fn(&GateShape) -> bool + Send + Sync + 'static,
        replace: impl Fn(&Gate, &mut RuleContext) -> Vec<Gate> + Send + Sync + 'static,
    ) -> Self {
        TransformRule { matcher: Arc::new(matcher), replace: Arc::new(replace) }
    }

    /// Rule matching every gate with the given name, target count and
    /// control counts.
    pub fn exact(
        name: &str,
        arity: usize,
        pos: usize,
        neg: usize,
        replace: impl Fn(&Gate, &mut RuleContext) -> Vec<Gate> + Send + Sync + 'static,
    ) -> Self {
        let want = GateShape { name: name.to_string(), arity, pos, neg };
        TransformRule::new(move |s| *s == want, replace)
    }

    pub fn matches(&self, shape: &GateShape) -> bool {
        (self.matcher)(shape)
    }
}

fn apply(c: &Circuit, rules: &[TransformRule]) -> Circuit {
    let mut ctx = RuleContext { next: c.fresh_wire() };
    let mut gates = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let rule = GateShape::of(g).and_then(|s| rules.iter().find(|r| r.matches(&s)));
        match rule {
            Some(r) => gates.extend((r.replace)(g, &mut ctx)),
            None => gates.push(g.clone()),
        }
    }
    Circuit {
        inputs: c.inputs.clone(),
        gates,
        outputs: c.outputs.clone(),
        subroutines: BTreeMap::new(),
    }
}

/// Rewrite every unitary gate matched by a rule (first match wins) in the
/// circuit and in every subroutine body. The result must validate.
pub fn transform(c: &Circuit, rules: &[TransformRule]) -> Result<Circuit, TransformError> {
    let mut out = apply(c, rules);
    out.subroutines = c
        .subroutines
        .iter()
        .map(|(n, d)| (n.clone(), SubroutineDef { name: n.clone(), circuit: apply(&d.circuit, rules) }))
        .collect();
    let violations = validate(&out);
    if violations.is_empty() {
        Ok(out)
    } else {
        Err(TransformError::Invalid(violations))
    }
}
