//! Compilation of deterministic counter automata into reversible ones.
//!
//! [`to_simple`] annotates every state with the counter update and head move that led
//! into it, which makes both functions of the new state alone. [`reversible_simulation`]
//! then replaces the forward computation with a depth-first traversal of the backward
//! configuration tree: state `(q, +)` walks forward, `(q, −)` walks backward, and sibling
//! and predecessor sets decide where the traversal turns.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::alphabet::Symbol;
use crate::automaton::{
    AutomatonError, CounterDelta, DeterministicAutomaton, FiniteControl, HeadDirection, Sign,
    SimpleAutomaton, StateId,
};
use crate::wellformed::check_reversible;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("column of {state:?} under ({symbol}, {sign}) is not a single 0/1 entry")]
    NotDeterministic { state: String, symbol: Symbol, sign: Sign },
    #[error("counter update of {state:?} depends on the scanned symbol ({first} vs {second})")]
    SymbolDependentCounter { state: String, first: Symbol, second: Symbol },
    #[error("compiled automaton is not reversible:\n{0}")]
    NotReversible(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Traversal direction attached to a state of the reversible simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Backward,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedState {
    pub base: StateId,
    pub polarity: Polarity,
}

impl SignedState {
    /// Index in the compiled automaton: `(q, −)` then `(q, +)` for each `q`.
    pub fn index(self) -> StateId {
        StateId(2 * self.base.0 + (self.polarity == Polarity::Forward) as usize)
    }

    pub fn name(self, base_name: &str) -> String {
        match self.polarity {
            Polarity::Backward => format!("{base_name}/-"),
            Polarity::Forward => format!("{base_name}/+"),
        }
    }
}

/// A state tagged with the counter update and head move that entered it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotatedState {
    pub base: StateId,
    pub counter: CounterDelta,
    pub head: HeadDirection,
}

impl AnnotatedState {
    /// Index in the annotated automaton: nine consecutive slots per base state, counter
    /// tag major.
    pub fn index(self) -> StateId {
        let c = (self.counter.value() + 1) as usize;
        let d = (self.head.displacement() + 1) as usize;
        StateId(9 * self.base.0 + 3 * c + d)
    }

    pub fn name(self, base_name: &str) -> String {
        format!("{base_name}.{}{}", self.counter, self.head)
    }
}

impl fmt::Display for AnnotatedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}{}", self.base.0, self.counter, self.head)
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Re-expresses a deterministic automaton as a simple one whose counter update ignores
/// the scanned symbol.
///
/// Halting states keep identity columns. The result has 0/1 entries but is generally not
/// unitary.
pub fn to_simple(automaton: &DeterministicAutomaton) -> Result<SimpleAutomaton, CompileError> {
    let control = automaton.control();
    let alphabet = control.alphabet();
    let base_states: Vec<StateId> = control.states().collect();
    let annotated: Vec<AnnotatedState> = base_states
        .iter()
        .flat_map(|&base| {
            CounterDelta::ALL.into_iter().flat_map(move |counter| {
                HeadDirection::ALL.into_iter().map(move |head| AnnotatedState { base, counter, head })
            })
        })
        .collect();
    let n = annotated.len();
    let names: Vec<String> = annotated.iter().map(|a| a.name(control.name(a.base))).collect();
    let lift = |set: &std::collections::BTreeSet<StateId>| -> Vec<&str> {
        annotated.iter().filter(|a| set.contains(&a.base)).map(|a| names[a.index().0].as_str()).collect()
    };
    let initial = AnnotatedState { base: control.initial(), counter: CounterDelta::Keep, head: HeadDirection::Stay };
    let new_control = FiniteControl::new(
        names.clone(),
        alphabet.clone(),
        &names[initial.index().0],
        &lift(control.accepting()),
        &lift(control.rejecting()),
    )?;

    let mut matrices = Vec::new();
    for symbol in alphabet.symbols() {
        for s in Sign::ALL {
            let mut m = DMatrix::zeros(n, n);
            for a in &annotated {
                let target = if control.is_halting(a.base) {
                    *a
                } else {
                    let t = automaton.transition(a.base, symbol, s).ok_or_else(|| AutomatonError::MissingTransition {
                        state: control.name(a.base).to_string(),
                        symbol,
                        sign: s,
                    })?;
                    AnnotatedState { base: t.target, counter: t.counter, head: t.head }
                };
                m[(target.index().0, a.index().0)] = one();
            }
            matrices.push(m);
        }
    }
    let width = alphabet.symbol_count();
    let counter = annotated.iter().flat_map(|a| std::iter::repeat_n(a.counter, width)).collect();
    let head = annotated.iter().map(|a| a.head).collect();
    Ok(SimpleAutomaton::new(new_control, matrices, counter, head)?)
}

/// The unique target of `q` under `(symbol, s)`, or `None` for halting states.
fn successor(automaton: &SimpleAutomaton, q: StateId, symbol: Symbol, s: Sign) -> Option<StateId> {
    if automaton.control().is_halting(q) {
        return None;
    }
    automaton.column(symbol, s, q).first().map(|&(to, _)| to)
}

/// Sibling set `I` (non-halting states with the same target as `q`, or `{q}` when `q`
/// halts) and predecessor set `J` (non-halting states whose target is `q`), both in state
/// order.
pub fn predecessor_sets(
    automaton: &SimpleAutomaton,
    q: StateId,
    symbol: Symbol,
    s: Sign,
) -> (Vec<StateId>, Vec<StateId>) {
    let states = automaton.control().states();
    let target = successor(automaton, q, symbol, s);
    let mut siblings = Vec::new();
    let mut preds = Vec::new();
    for p in states {
        let t = successor(automaton, p, symbol, s);
        if target.is_some() && t == target {
            siblings.push(p);
        }
        if t == Some(q) {
            preds.push(p);
        }
    }
    if target.is_none() {
        siblings.push(q);
    }
    (siblings, preds)
}

fn check_compilable(automaton: &SimpleAutomaton) -> Result<(), CompileError> {
    let control = automaton.control();
    for (symbol, s, m) in automaton.matrices() {
        for q in control.states() {
            let column: Vec<Complex64> = m.column(q.0).iter().copied().filter(|z| *z != Complex64::default()).collect();
            if column != [one()] {
                return Err(CompileError::NotDeterministic { state: control.name(q).to_string(), symbol, sign: s });
            }
        }
    }
    let symbols = control.alphabet().symbols();
    for q in control.states() {
        for &other in &symbols[1..] {
            if automaton.counter_fn(q, other) != automaton.counter_fn(q, symbols[0]) {
                return Err(CompileError::SymbolDependentCounter {
                    state: control.name(q).to_string(),
                    first: symbols[0],
                    second: other,
                });
            }
        }
    }
    Ok(())
}

/// Builds the reversible traversal automaton over `Q × {−, +}` with initial `(q0, +)`.
///
/// Forward: `(q, +)` goes to `(succ(q, I), −)` unless `q` is the last sibling, in which
/// case it follows the source transition to `(V q, +)`. Backward: `(q, −)` goes to
/// `(min J, −)`, or turns into `(q, +)` when `J` is empty. For a halting `h`, `(h, +)`
/// goes to `(h, −)`. Backward states undo the counter update and mirror the head move.
pub fn reversible_simulation(automaton: &SimpleAutomaton) -> Result<SimpleAutomaton, CompileError> {
    check_compilable(automaton)?;
    let control = automaton.control();
    let alphabet = control.alphabet();
    let n = control.state_count();
    let signed = |base: StateId, polarity| SignedState { base, polarity }.index().0;
    let (fwd, bwd) = (Polarity::Forward, Polarity::Backward);

    let mut matrices = Vec::new();
    for symbol in alphabet.symbols() {
        for s in Sign::ALL {
            let mut m = DMatrix::zeros(2 * n, 2 * n);
            for q in control.states() {
                let (siblings, preds) = predecessor_sets(automaton, q, symbol, s);
                let forward_target = match successor(automaton, q, symbol, s) {
                    None => signed(q, bwd),
                    Some(next) => {
                        let at = siblings.iter().position(|&p| p == q).expect("q is its own sibling");
                        match siblings.get(at + 1) {
                            Some(&sibling) => signed(sibling, bwd),
                            None => signed(next, fwd),
                        }
                    }
                };
                m[(forward_target, signed(q, fwd))] = one();
                let backward_target = match preds.first() {
                    Some(&p) => signed(p, bwd),
                    None => signed(q, fwd),
                };
                m[(backward_target, signed(q, bwd))] = one();
            }
            matrices.push(m);
        }
    }

    let mut names = Vec::with_capacity(2 * n);
    let mut counter = Vec::with_capacity(2 * n * alphabet.symbol_count());
    let mut head = Vec::with_capacity(2 * n);
    for q in control.states() {
        for polarity in [bwd, fwd] {
            names.push(SignedState { base: q, polarity }.name(control.name(q)));
            for symbol in alphabet.symbols() {
                let c = automaton.counter_fn(q, symbol);
                counter.push(if polarity == fwd { c } else { c.negated() });
            }
            let d = automaton.head_fn(q);
            head.push(if polarity == fwd { d } else { d.reversed() });
        }
    }
    let lift = |set: &std::collections::BTreeSet<StateId>| -> Vec<&str> {
        set.iter().flat_map(|q| [2 * q.0, 2 * q.0 + 1]).map(|i| names[i].as_str()).collect()
    };
    let new_control = FiniteControl::new(
        names.clone(),
        alphabet.clone(),
        &names[signed(control.initial(), fwd)],
        &lift(control.accepting()),
        &lift(control.rejecting()),
    )?;
    Ok(SimpleAutomaton::new(new_control, matrices, counter, head)?)
}

/// Which stages [`compile`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Simple,
    Reversible,
}

/// Runs [`to_simple`] and, for [`Stage::Reversible`], [`reversible_simulation`], and
/// verifies reversibility of the final result.
pub fn compile(automaton: &DeterministicAutomaton, stage: Stage) -> Result<SimpleAutomaton, CompileError> {
    let simple = to_simple(automaton)?;
    if stage == Stage::Simple {
        return Ok(simple);
    }
    let reversible = reversible_simulation(&simple)?;
    let report = check_reversible(&reversible);
    if !report.passed() {
        return Err(CompileError::NotReversible(report.to_string()));
    }
    Ok(reversible)
}
