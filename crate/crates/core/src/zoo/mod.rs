//! Ready-made automata.
//!
//! The quantum recognizers split into `N` paths that take branch-dependent detours and
//! meet again in a Fourier transform over `N` output states. Only the last output state
//! accepts, so paths that arrive at the same step interfere into acceptance with
//! probability 1, while paths arriving at different steps leave acceptance at `1/N`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::{
    CounterDelta, DeterministicAutomaton, FiniteControl, HeadDirection, Sign, SimpleAutomaton,
    StateId, Transition,
};

mod design;

pub use design::{Design, DesignError};

use CounterDelta::{Dec, Inc, Keep};
use HeadDirection::{Left, Right, Stay};
use Sign::{NonZero, Zero};

const A: Symbol = Symbol::Letter('a');
const B: Symbol = Symbol::Letter('b');
const C: Symbol = Symbol::Letter('c');
const LEFT: Symbol = Symbol::LeftEnd;
const RIGHT: Symbol = Symbol::RightEnd;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZooError {
    #[error("at least 2 branches are required, got {0}")]
    TooFewBranches(usize),
    #[error(transparent)]
    Design(#[from] DesignError),
}

fn check_branches(branches: usize) -> Result<(), ZooError> {
    if branches < 2 {
        Err(ZooError::TooFewBranches(branches))
    } else {
        Ok(())
    }
}

fn alphabet(letters: &str) -> Alphabet {
    Alphabet::new(letters.chars()).expect("fixed alphabet")
}

/// Equal superposition of `targets`.
fn split(targets: &[StateId]) -> Vec<(StateId, Complex64)> {
    let amp = Complex64::new(1.0 / (targets.len() as f64).sqrt(), 0.0);
    targets.iter().map(|&q| (q, amp)).collect()
}

/// Column of branch `branch` (1-based) in the Fourier merge onto `outputs`.
fn fourier(branch: usize, outputs: &[StateId]) -> Vec<(StateId, Complex64)> {
    let n = outputs.len();
    let scale = 1.0 / (n as f64).sqrt();
    outputs
        .iter()
        .enumerate()
        .map(|(k, &q)| {
            let phase = 2.0 * PI * (branch * (k + 1) % n) as f64 / n as f64;
            (q, Complex64::from_polar(scale, phase))
        })
        .collect()
}

/// Declares the merge outputs: the last one accepts, the others reject.
fn merge_outputs(d: &mut Design, branches: usize) -> Vec<StateId> {
    let outputs: Vec<StateId> = (1..=branches).map(|k| d.state(format!("out{k}"))).collect();
    for (k, &q) in outputs.iter().enumerate() {
        if k + 1 == branches {
            d.accepting(q);
        } else {
            d.rejecting(q);
        }
    }
    outputs
}

/// Deterministic check that the input has the form `a⁺b⁺`, using states `q0..q3` and
/// `rej`. Ends in `q3` moving left onto the last `a`, whose `(a, 0)` column the caller
/// supplies.
fn check_ab_form(d: &mut Design) -> ([StateId; 4], StateId) {
    let q: [StateId; 4] = std::array::from_fn(|k| d.state(format!("q{k}")));
    let rej = d.state("rej");
    d.rejecting(rej);
    d.head(q[0], Right).head(q[1], Left).head(q[2], Right).head(q[3], Left);
    d.map(LEFT, Zero, q[0], q[0]);
    d.map(A, Zero, q[0], q[0]);
    d.map(B, Zero, q[0], q[1]);
    d.map(A, Zero, q[1], q[2]);
    d.map(B, Zero, q[2], q[2]);
    d.map(RIGHT, Zero, q[2], q[3]);
    d.map(B, Zero, q[3], q[3]);
    // Empty or b-free input, input starting with b, and an a after a b.
    d.map(RIGHT, Zero, q[0], rej);
    d.map(LEFT, Zero, q[1], rej);
    d.map(A, Zero, q[2], rej);
    (q, rej)
}

/// Recognizer of `{aᵐbⁿ | n = m², m ≥ 1}` with `branches` paths.
///
/// After the form check the head sits on the first `b` and the machine splits. Path `i`
/// sweeps the `a` block in widening zigzags, `m` rounds in total, spending `i + 1` steps
/// on every `a` it visits. It then walks right from the left end-marker spending
/// `N − i + 1` steps per input letter. Path `i` reaches the right end-marker at step
/// `(i+1)(m²+m) + (N−i+1)(m+n) + 2|x| + 7`, so all paths arrive together exactly when
/// `n = m²`.
///
/// The zigzag costs order `N·m²` steps whatever `n` is, so on inputs with many more
/// `a`s than the square root of the number of `b`s the running time is quadratic in
/// `|x|` rather than linear.
pub fn build_square(branches: usize) -> Result<SimpleAutomaton, ZooError> {
    check_branches(branches)?;
    let n = branches;
    let mut d = Design::new(alphabet("ab"));
    let (q, _rej) = check_ab_form(&mut d);
    let split_state = d.state("q4");
    d.head(split_state, Right);
    d.map(A, Zero, q[3], split_state);

    let mut entries = Vec::new();
    let mut scan_heads = Vec::new();
    for i in 1..=n {
        let left: Vec<StateId> = (0..=i).map(|j| d.state(format!("left{i}_{j}"))).collect();
        let right: Vec<StateId> = (0..=i).map(|j| d.state(format!("right{i}_{j}"))).collect();
        let scan: Vec<StateId> = (0..=n - i).map(|j| d.state(format!("scan{i}_{j}"))).collect();
        d.head(left[0], Left).head(right[0], Right).head(scan[0], Right);
        d.counter(left[0], A, Dec).counter(right[0], A, Inc);

        for j in 0..i {
            d.map_any(A, left[j], left[j + 1]);
            d.map(A, NonZero, right[j], right[j + 1]);
        }
        d.map(A, NonZero, left[i], left[0]);
        d.map(A, Zero, left[i], right[0]);
        d.map(A, NonZero, right[i], right[0]);
        d.map(B, NonZero, right[0], left[0]);
        d.map(LEFT, Zero, left[0], scan[0]);

        for symbol in [A, B] {
            for j in 0..scan.len() {
                d.map(symbol, Zero, scan[j], scan[(j + 1) % scan.len()]);
            }
        }
        entries.push(left[0]);
        scan_heads.push(scan[0]);
    }
    d.superpose(B, Zero, split_state, split(&entries));
    let outputs = merge_outputs(&mut d, n);
    for (i, &s) in scan_heads.iter().enumerate() {
        d.superpose(RIGHT, Zero, s, fourier(i + 1, &outputs));
    }
    Ok(d.build()?)
}

/// Recognizer of `{aᵐbⁿcˡ | l = mn, m, n ≥ 1}` with `branches` paths.
///
/// After checking the form `a⁺b⁺c⁺` and returning to the left end-marker the machine
/// splits. Each path repeats `m` rounds: count the `a`s up, cross the `b` block spending
/// `i` steps per `b`, then walk back decrementing once at the first `c` and once per `a`.
/// When the decrement at `c` reaches zero the path crosses the `c` block spending
/// `N − i + 1` steps per `c` and merges at the right end-marker.
pub fn build_prod(branches: usize) -> Result<SimpleAutomaton, ZooError> {
    check_branches(branches)?;
    let n = branches;
    let mut d = Design::new(alphabet("abc"));
    let q: [StateId; 6] = std::array::from_fn(|k| d.state(format!("q{k}")));
    let rej = [d.state("rej0"), d.state("rej1")];
    d.rejecting(rej[0]).rejecting(rej[1]);
    for k in [0, 2, 4] {
        d.head(q[k], Right);
    }
    for k in [1, 3, 5] {
        d.head(q[k], Left);
    }
    d.map(LEFT, Zero, q[0], q[0]);
    d.map(A, Zero, q[0], q[0]);
    d.map(B, Zero, q[0], q[1]);
    d.map(A, Zero, q[1], q[2]);
    d.map(B, Zero, q[2], q[2]);
    d.map(C, Zero, q[2], q[3]);
    d.map(B, Zero, q[3], q[4]);
    d.map(C, Zero, q[4], q[4]);
    d.map(RIGHT, Zero, q[4], q[5]);
    for symbol in [A, B, C] {
        d.map(symbol, Zero, q[5], q[5]);
    }
    d.map(LEFT, Zero, q[1], rej[0]);
    d.map(A, Zero, q[2], rej[0]);
    d.map(A, Zero, q[4], rej[1]);
    d.map(B, Zero, q[4], rej[0]);
    d.map(C, Zero, q[0], rej[0]);
    d.map(RIGHT, Zero, q[0], rej[0]);
    d.map(RIGHT, Zero, q[2], rej[1]);

    let mut entries = Vec::new();
    let mut finals = Vec::new();
    for i in 1..=n {
        let up = d.state(format!("up{i}"));
        let back = d.state(format!("back{i}"));
        let cross: Vec<StateId> = (1..=i).map(|j| d.state(format!("cross{i}_{j}"))).collect();
        let down = d.state(format!("down{i}"));
        let tail: Vec<StateId> = (1..=n - i + 1).map(|j| d.state(format!("tail{i}_{j}"))).collect();
        d.head(up, Right).head(back, Left).head(cross[0], Right).head(down, Left).head(tail[0], Right);
        d.counter(up, A, Inc).counter(down, A, Dec).counter(down, C, Dec);

        d.map_any(A, up, up);
        d.map_any(A, down, down);
        d.map(A, NonZero, back, cross[0]);
        d.map(B, NonZero, up, back);
        for j in 0..i {
            d.map(B, NonZero, cross[j], cross[(j + 1) % i]);
        }
        d.map(B, NonZero, down, down);
        d.map(B, Zero, down, tail[0]);
        d.map(C, NonZero, cross[0], down);
        for j in 0..tail.len() {
            d.map(C, Zero, tail[j], tail[(j + 1) % tail.len()]);
        }
        d.map(LEFT, NonZero, down, up);
        entries.push(up);
        finals.push(tail[0]);
    }
    d.superpose(LEFT, Zero, q[5], split(&entries));
    let outputs = merge_outputs(&mut d, n);
    for (i, &t) in finals.iter().enumerate() {
        d.superpose(RIGHT, Zero, t, fourier(i + 1, &outputs));
    }
    Ok(d.build()?)
}

/// Reversible recognizer of `{bᵏ | k = 2ʲ, j ≥ 0}` with nine states `q0..q8`; `q7`
/// accepts and `q8` rejects.
///
/// The counter update of `q2` on the right end-marker is −1. With +1 the machine accepts
/// `bᵏ` for `k = 5·2ʲ − 2` instead.
pub fn build_power_of_two() -> Result<SimpleAutomaton, ZooError> {
    let mut d = Design::new(alphabet("b"));
    let q: [StateId; 9] = std::array::from_fn(|k| d.state(format!("q{k}")));
    d.accepting(q[7]).rejecting(q[8]);
    d.map(LEFT, Zero, q[0], q[0]);
    d.map(LEFT, Zero, q[3], q[7]);
    d.map_any(LEFT, q[2], q[8]);
    d.map(RIGHT, Zero, q[0], q[1]);
    d.map(RIGHT, NonZero, q[1], q[2]);
    d.map(RIGHT, NonZero, q[6], q[1]);
    d.map(B, Zero, q[0], q[0]);
    d.map(B, Zero, q[2], q[3]);
    d.map(B, Zero, q[3], q[4]);
    d.map(B, Zero, q[4], q[6]);
    d.map(B, NonZero, q[2], q[2]);
    d.map(B, NonZero, q[5], q[6]);
    d.map(B, NonZero, q[6], q[5]);
    d.counter(q[1], RIGHT, Inc);
    d.counter(q[2], RIGHT, Dec);
    d.counter(q[2], B, Dec);
    d.counter(q[5], B, Inc);
    d.counter(q[6], B, Inc);
    for k in [0, 4, 6] {
        d.head(q[k], Right);
    }
    for k in [2, 3] {
        d.head(q[k], Left);
    }
    Ok(d.build()?)
}

/// Recognizer of `{aᵐbᵏ | k = 2ᵐ, m ≥ 1}` with `branches` paths.
///
/// After the form check the machine splits on the last `a`. Each path runs the
/// power-of-two test of [`build_power_of_two`] on the `b` block, with the last `a` in the
/// role of the left end-marker, and spends `N − i + 1` extra steps on every return to the
/// right end-marker after the first. A path that passes the test sweeps back over the `a`
/// block spending `i + 1` steps per `a` and merges at the left end-marker. A `b` block of
/// length `2ʲ` brings the head back to the right end-marker `j` times, so paths arrive
/// together exactly when `j = m`.
pub fn build_power(branches: usize) -> Result<SimpleAutomaton, ZooError> {
    check_branches(branches)?;
    let n = branches;
    let mut d = Design::new(alphabet("ab"));
    let (q, _rej) = check_ab_form(&mut d);

    let mut entries = Vec::new();
    let mut sweeps = Vec::new();
    for i in 1..=n {
        let name = |role: &str| format!("{role}{i}");
        let walk = d.state(name("walk"));
        let p: Vec<StateId> = (1..=6).map(|k| d.state(format!("p{i}_{k}"))).collect();
        let (p1, p2, p3, p4, p5, p6) = (p[0], p[1], p[2], p[3], p[4], p[5]);
        let wait: Vec<StateId> = (1..=n - i + 1).map(|j| d.state(format!("wait{i}_{j}"))).collect();
        let found = d.state(name("found"));
        let sweep: Vec<StateId> = (0..=i).map(|j| d.state(format!("sweep{i}_{j}"))).collect();
        let fail = d.state(name("fail"));
        d.rejecting(fail);
        for r in [walk, p4, p6, found] {
            d.head(r, Right);
        }
        for l in [p2, p3, sweep[0]] {
            d.head(l, Left);
        }
        d.counter(p1, RIGHT, Inc);
        d.counter(p2, RIGHT, Dec);
        d.counter(p2, B, Dec);
        d.counter(p5, B, Inc);
        d.counter(p6, B, Inc);

        d.map(B, Zero, walk, walk);
        d.map(RIGHT, Zero, walk, p1);
        d.map(RIGHT, NonZero, p1, p2);
        d.map(RIGHT, NonZero, p6, wait[0]);
        for j in 0..wait.len() - 1 {
            d.map(RIGHT, NonZero, wait[j], wait[j + 1]);
        }
        d.map(RIGHT, NonZero, wait[wait.len() - 1], p1);
        d.map(B, NonZero, p2, p2);
        d.map(B, Zero, p2, p3);
        d.map_any(A, p2, fail);
        d.map(B, Zero, p3, p4);
        d.map(A, Zero, p3, found);
        d.map(B, Zero, p4, p6);
        d.map(B, NonZero, p6, p5);
        d.map(B, NonZero, p5, p6);
        d.map(B, Zero, found, sweep[0]);
        for j in 0..=i {
            d.map(A, Zero, sweep[j], sweep[(j + 1) % (i + 1)]);
        }
        entries.push(walk);
        sweeps.push(sweep[0]);
    }
    d.superpose(A, Zero, q[3], split(&entries));
    let outputs = merge_outputs(&mut d, n);
    for (i, &s) in sweeps.iter().enumerate() {
        d.superpose(LEFT, Zero, s, fourier(i + 1, &outputs));
    }
    Ok(d.build()?)
}

/// Deterministic recognizer of `{aⁿbⁿ | n ≥ 1}`.
///
/// Counts `a`s up and `b`s down in a single left-to-right pass and accepts on the right
/// end-marker with a zero counter. Every non-halting move goes right.
pub fn build_balanced_2d1ca() -> DeterministicAutomaton {
    let names = ["q0", "q1", "qa", "qb", "acc", "rej"].map(String::from).to_vec();
    let control = FiniteControl::new(names, alphabet("ab"), "q0", &["acc"], &["rej"]).expect("fixed states");
    let id = |name: &str| control.id(name).expect("declared");
    let (q0, q1, qa, qb, acc, rej) = (id("q0"), id("q1"), id("qa"), id("qb"), id("acc"), id("rej"));
    let go = |target, counter, head| Transition { target, counter, head };
    let mut delta = HashMap::new();
    for q in [q0, q1, qa, qb] {
        for symbol in control.alphabet().symbols() {
            for s in Sign::ALL {
                delta.insert((q, symbol, s), go(rej, Keep, Stay));
            }
        }
    }
    for s in Sign::ALL {
        delta.insert((q0, LEFT, s), go(q1, Keep, Right));
        delta.insert((q1, A, s), go(qa, Inc, Right));
        delta.insert((qa, A, s), go(qa, Inc, Right));
        delta.insert((qa, B, s), go(qb, Dec, Right));
    }
    delta.insert((qb, B, NonZero), go(qb, Dec, Right));
    delta.insert((qb, RIGHT, Zero), go(acc, Keep, Stay));
    DeterministicAutomaton::new(control, delta).expect("total on live states")
}
