//! Time evolution with a measurement after every step.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::alphabet::{InputError, Symbol, Tape};
use crate::automaton::{sign, DeterministicAutomaton, Sign, SimpleAutomaton, StateId};
use crate::superposition::{Configuration, Superposition};

pub mod oracle;

/// A run halts once the non-halting squared norm drops below this value.
pub const HALT_THRESHOLD: f64 = 1e-9;

/// Step cap for generic runs: 64·(|x| + 2).
pub fn default_step_cap(input_len: usize) -> usize {
    64 * (input_len + 2)
}

/// Step cap for zoo machines with `branches` paths: 16·N·(|x| + 2).
pub fn zoo_step_cap(branches: usize, input_len: usize) -> usize {
    16 * branches * (input_len + 2)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("step cap must be at least 1")]
    ZeroStepCap,
    #[error("transition undefined at ({state}, {symbol}, {sign})")]
    Undefined { state: String, symbol: Symbol, sign: Sign },
}

/// Accumulated measurement statistics of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    pub p_accept: f64,
    pub p_reject: f64,
    pub p_residual: f64,
    pub steps: usize,
    pub halted: bool,
}

/// One evolution step as seen before its measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub snapshot: Superposition,
    pub accept: f64,
    pub reject: f64,
}

/// Per-step record of a run; entry `k` belongs to step `k + 1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepTrace {
    pub steps: Vec<TraceStep>,
}

/// Applies the evolution operator once.
pub fn step(automaton: &SimpleAutomaton, tape: &Tape, psi: &Superposition) -> Superposition {
    let mut next = Superposition::new();
    for (config, &amp) in psi.iter() {
        let symbol = tape.at(config.head);
        for &(to, v) in automaton.column(symbol, sign(config.counter), config.state) {
            let counter = config.counter + automaton.counter_fn(to, symbol).value();
            let head = tape.wrap(config.head as i64 + automaton.head_fn(to).displacement());
            next.add(Configuration::new(to, counter, head), amp * v);
        }
    }
    next.pruned()
}

/// Projects out the halting parts: returns the accept and reject probabilities and the
/// unnormalized non-halting remainder.
pub fn measure(
    psi: Superposition,
    accepting: &BTreeSet<StateId>,
    rejecting: &BTreeSet<StateId>,
) -> (f64, f64, Superposition) {
    let mut residual = psi;
    let accepted = residual.split_off(|c| accepting.contains(&c.state));
    let rejected = residual.split_off(|c| rejecting.contains(&c.state));
    (accepted.norm_sqr(), rejected.norm_sqr(), residual)
}

/// Runs from `|q0, 0, 0⟩` until the residual falls below [`HALT_THRESHOLD`] or `step_cap`
/// steps have been taken. The initial superposition is measured before the first step.
pub fn run(
    automaton: &SimpleAutomaton,
    input: &str,
    step_cap: usize,
    trace: bool,
) -> Result<(RunOutcome, Option<StepTrace>), RunError> {
    if step_cap == 0 {
        return Err(RunError::ZeroStepCap);
    }
    let tape = Tape::for_alphabet(automaton.alphabet(), input)?;
    let control = automaton.control();
    let (accepting, rejecting) = (control.accepting(), control.rejecting());
    let start = Superposition::basis(Configuration::new(control.initial(), 0, 0));
    let (mut p_accept, mut p_reject, mut psi) = measure(start, accepting, rejecting);
    let mut record = trace.then(StepTrace::default);
    let mut steps = 0;
    while psi.norm_sqr() >= HALT_THRESHOLD && steps < step_cap {
        let evolved = step(automaton, &tape, &psi);
        steps += 1;
        let snapshot = record.as_ref().map(|_| evolved.clone());
        let (acc, rej, rest) = measure(evolved, accepting, rejecting);
        p_accept += acc;
        p_reject += rej;
        psi = rest;
        if let (Some(r), Some(snapshot)) = (record.as_mut(), snapshot) {
            r.steps.push(TraceStep { snapshot, accept: acc, reject: rej });
        }
    }
    let p_residual = psi.norm_sqr();
    let outcome = RunOutcome { p_accept, p_reject, p_residual, steps, halted: p_residual < HALT_THRESHOLD };
    Ok((outcome, record))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
    Timeout,
}

/// Follows the single computation path of a deterministic automaton.
pub fn run_deterministic(
    automaton: &DeterministicAutomaton,
    input: &str,
    step_cap: usize,
) -> Result<(Decision, usize), RunError> {
    if step_cap == 0 {
        return Err(RunError::ZeroStepCap);
    }
    let control = automaton.control();
    let tape = Tape::for_alphabet(control.alphabet(), input)?;
    let (mut q, mut counter, mut head) = (control.initial(), 0i64, 0usize);
    let mut steps = 0;
    loop {
        if control.is_accepting(q) {
            return Ok((Decision::Accept, steps));
        }
        if control.is_rejecting(q) {
            return Ok((Decision::Reject, steps));
        }
        if steps == step_cap {
            return Ok((Decision::Timeout, steps));
        }
        let symbol = tape.at(head);
        let s = sign(counter);
        let t = automaton.transition(q, symbol, s).ok_or_else(|| RunError::Undefined {
            state: control.name(q).to_string(),
            symbol,
            sign: s,
        })?;
        q = t.target;
        counter += t.counter.value();
        head = tape.wrap(head as i64 + t.head.displacement());
        steps += 1;
    }
}

/// Runs every input, concurrently, keeping input order. Without an explicit cap each row
/// uses [`default_step_cap`].
pub fn acceptance_table(
    automaton: &SimpleAutomaton,
    inputs: &[String],
    step_cap: Option<usize>,
) -> Vec<(String, Result<RunOutcome, RunError>)> {
    inputs
        .par_iter()
        .map(|input| {
            let cap = step_cap.unwrap_or_else(|| default_step_cap(input.chars().count()));
            let outcome = run(automaton, input, cap, false).map(|(o, _)| o);
            (input.clone(), outcome)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automaton::{CounterDelta, FiniteControl, HeadDirection};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn identity() -> SimpleAutomaton {
        let alphabet = Alphabet::new(['a']).unwrap();
        let control = FiniteControl::new(vec!["q".into()], alphabet, "q", &[], &[]).unwrap();
        SimpleAutomaton::new(
            control,
            vec![DMatrix::identity(1, 1); 6],
            vec![CounterDelta::Keep; 3],
            vec![HeadDirection::Stay],
        )
        .unwrap()
    }

    #[test]
    fn identity_step_is_identity() {
        let m = identity();
        let tape = Tape::new("aa").unwrap();
        let psi: Superposition = [
            (Configuration::new(StateId(0), 3, 1), Complex64::new(0.6, 0.0)),
            (Configuration::new(StateId(0), -2, 2), Complex64::new(0.0, 0.8)),
        ]
        .into_iter()
        .collect();
        assert_eq!(step(&m, &tape, &psi), psi);
    }

    #[test]
    fn measure_splits_by_born_rule() {
        let acc = StateId(0);
        let non = StateId(1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi: Superposition = [
            (Configuration::new(acc, 0, 0), Complex64::new(h, 0.0)),
            (Configuration::new(non, 0, 1), Complex64::new(h, 0.0)),
        ]
        .into_iter()
        .collect();
        let (a, r, rest) = measure(psi, &[acc].into(), &BTreeSet::new());
        assert!((a - 0.5).abs() < 1e-15);
        assert_eq!(r, 0.0);
        assert!((rest.norm_sqr() - 0.5).abs() < 1e-15);
        assert_eq!(rest.len(), 1);

        let (a, r, rest) =
            measure(Superposition::basis(Configuration::new(acc, 0, 0)), &[acc].into(), &BTreeSet::new());
        assert_eq!((a, r), (1.0, 0.0));
        assert!(rest.is_empty());
    }

    #[test]
    fn identity_never_halts() {
        let (outcome, trace) = run(&identity(), "a", 10, true).unwrap();
        assert_eq!(outcome.steps, 10);
        assert!(!outcome.halted);
        assert_eq!(outcome.p_residual, 1.0);
        assert_eq!(trace.unwrap().steps.len(), 10);
    }

    #[test]
    fn halting_initial_state_is_measured_first() {
        let alphabet = Alphabet::new(['a']).unwrap();
        let control = FiniteControl::new(vec!["q".into()], alphabet, "q", &["q"], &[]).unwrap();
        let m = SimpleAutomaton::new(
            control,
            vec![DMatrix::identity(1, 1); 6],
            vec![CounterDelta::Keep; 3],
            vec![HeadDirection::Stay],
        )
        .unwrap();
        let (outcome, _) = run(&m, "", 5, false).unwrap();
        assert_eq!(outcome.steps, 0);
        assert_eq!(outcome.p_accept, 1.0);
        assert!(outcome.halted);
    }

    #[test]
    fn run_rejects_bad_input_before_stepping() {
        assert!(matches!(run(&identity(), "a$", 5, false), Err(RunError::Input(_))));
        assert!(matches!(run(&identity(), "b", 5, false), Err(RunError::Input(_))));
        assert_eq!(run(&identity(), "a", 0, false), Err(RunError::ZeroStepCap));
    }

    #[test]
    fn empty_table() {
        assert!(acceptance_table(&identity(), &[], None).is_empty());
    }
}
