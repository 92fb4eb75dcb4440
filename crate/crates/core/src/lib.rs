//! Two-way quantum one-counter automata.
//!
//! Define automata over a circular `^ x $` tape, check that they are well formed, evolve
//! superpositions with a measurement after every step, compile deterministic counter
//! automata into reversible ones, and build a small zoo of language recognizers that use
//! Fourier-transform interference between synchronized computation paths.

pub mod alphabet;
pub mod cli;
pub mod evolution;
pub mod automaton;
pub mod compiler;
pub mod document;
pub mod superposition;
pub mod zoo;
pub mod wellformed;

pub use alphabet::{tape_symbol, Alphabet, Symbol, Tape};
pub use automaton::{
    expand_simple, sign, CounterDelta, DeterministicAutomaton, FiniteControl, GeneralKey,
    GeneralTransitionFunction, HeadDirection, Sign, SimpleAutomaton, StateId, Transition,
};
pub use superposition::{Configuration, Superposition};
pub use evolution::oracle::dense_oracle_run;
pub use evolution::{
    acceptance_table, measure, run, run_deterministic, step, Decision, RunError, RunOutcome, StepTrace,
};
pub use wellformed::{check_dense_unitarity, check_general, check_reversible, check_simple_unitarity, CheckReport};
