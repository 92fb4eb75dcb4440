//! Dense reference implementation of a run, written without the sparse engine.
//!
//! The state vector is a flat array over `Q × [-t, t] × cells`, where `t` grows by one
//! per step up to the step cap, and transitions come from the expanded general transition
//! function rather than the matrices directly. Nothing is pruned.

use num_complex::Complex64;

use super::{RunError, RunOutcome, HALT_THRESHOLD};
use crate::alphabet::{Symbol, Tape};
use crate::automaton::{expand_simple, Sign, SimpleAutomaton, StateId};

struct Band {
    radius: i64,
    cells: usize,
    amps: Vec<Complex64>,
}

impl Band {
    fn new(states: usize, radius: i64, cells: usize) -> Self {
        let len = states * (2 * radius as usize + 1) * cells;
        Band { radius, cells, amps: vec![Complex64::default(); len] }
    }

    fn index(&self, q: usize, a: i64, b: usize) -> usize {
        (q * (2 * self.radius as usize + 1) + (a + self.radius) as usize) * self.cells + b
    }
}

/// Same contract as [`super::run`] without tracing.
pub fn dense_oracle_run(automaton: &SimpleAutomaton, input: &str, step_cap: usize) -> Result<RunOutcome, RunError> {
    if step_cap == 0 {
        return Err(RunError::ZeroStepCap);
    }
    let tape = Tape::for_alphabet(automaton.alphabet(), input)?;
    let cells: Vec<Symbol> = tape.cells().to_vec();
    let width = cells.len();
    let control = automaton.control();
    let states = control.state_count();
    let delta = expand_simple(automaton);

    // moves[(q, cell, s)] = list of (q', counter change, head change, amplitude).
    let mut moves: Vec<Vec<(usize, i64, i64, Complex64)>> = vec![Vec::new(); states * width * 2];
    for (key, &amp) in delta.iter() {
        for (b, &symbol) in cells.iter().enumerate() {
            if symbol == key.symbol {
                let s = if key.sign == Sign::Zero { 0 } else { 1 };
                moves[(key.from.0 * width + b) * 2 + s].push((
                    key.to.0,
                    key.counter.value(),
                    key.head.displacement(),
                    amp,
                ));
            }
        }
    }
    let accepting: Vec<bool> = (0..states).map(|q| control.is_accepting(StateId(q))).collect();
    let rejecting: Vec<bool> = (0..states).map(|q| control.is_rejecting(StateId(q))).collect();

    let mut psi = Band::new(states, 0, width);
    let start = psi.index(control.initial().0, 0, 0);
    psi.amps[start] = Complex64::new(1.0, 0.0);
    let (mut p_accept, mut p_reject) = (0.0, 0.0);
    let mut observe = |band: &mut Band| {
        for q in 0..states {
            if !(accepting[q] || rejecting[q]) {
                continue;
            }
            for a in -band.radius..=band.radius {
                for b in 0..width {
                    let i = band.index(q, a, b);
                    let p = band.amps[i].norm_sqr();
                    band.amps[i] = Complex64::default();
                    if accepting[q] {
                        p_accept += p;
                    } else {
                        p_reject += p;
                    }
                }
            }
        }
        band.amps.iter().fold(0.0, |acc, a| acc + a.norm_sqr())
    };
    let mut residual = observe(&mut psi);
    let mut steps = 0;
    while residual >= HALT_THRESHOLD && steps < step_cap {
        let mut next = Band::new(states, psi.radius + 1, width);
        for q in 0..states {
            for a in -psi.radius..=psi.radius {
                let s = if a == 0 { 0 } else { 1 };
                for b in 0..width {
                    let amp = psi.amps[psi.index(q, a, b)];
                    if amp == Complex64::default() {
                        continue;
                    }
                    for &(to, dc, dh, v) in &moves[(q * width + b) * 2 + s] {
                        let b2 = (b as i64 + dh).rem_euclid(width as i64) as usize;
                        let i = next.index(to, a + dc, b2);
                        next.amps[i] += amp * v;
                    }
                }
            }
        }
        psi = next;
        steps += 1;
        residual = observe(&mut psi);
    }
    Ok(RunOutcome { p_accept, p_reject, p_residual: residual, steps, halted: residual < HALT_THRESHOLD })
}
