//! Language predicates and word generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;

use q1ca::{
    Alphabet, CounterDelta, DeterministicAutomaton, FiniteControl, HeadDirection, Sign, SimpleAutomaton, StateId,
    Transition,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Splits `w` into maximal runs of the given letters in order, or `None` if `w` has a
/// different shape.
fn blocks(w: &str, letters: &[char]) -> Option<Vec<usize>> {
    let mut rest = w;
    let mut counts = Vec::new();
    for &c in letters {
        let len = rest.len() - rest.trim_start_matches(c).len();
        if len == 0 {
            return None;
        }
        counts.push(len);
        rest = &rest[len..];
    }
    rest.is_empty().then_some(counts)
}

pub fn in_square(w: &str) -> bool {
    matches!(blocks(w, &['a', 'b']).as_deref(), Some(&[m, n]) if n == m * m)
}

pub fn in_prod(w: &str) -> bool {
    matches!(blocks(w, &['a', 'b', 'c']).as_deref(), Some(&[m, n, l]) if l == m * n)
}

pub fn in_power(w: &str) -> bool {
    matches!(blocks(w, &['a', 'b']).as_deref(), Some(&[m, n]) if m < 32 && n == 1 << m)
}

pub fn is_power_of_two_b(w: &str) -> bool {
    w.chars().all(|c| c == 'b') && w.len().is_power_of_two()
}

pub fn is_balanced(w: &str) -> bool {
    matches!(blocks(w, &['a', 'b']).as_deref(), Some(&[m, n]) if m == n)
}

/// `aᵐbⁿ…` from a list of counts.
pub fn word(parts: &[(char, usize)]) -> String {
    parts.iter().map(|&(c, k)| c.to_string().repeat(k)).collect()
}

/// Every word over `letters` of length at most `max_len`, in shortlex order.
pub fn all_words(letters: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |&c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn random_unitary(rng: &mut ChaCha8Rng, size: usize) -> DMatrix<Complex64> {
    let raw = DMatrix::from_fn(size, size, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    raw.qr().q()
}

pub fn random_automaton(rng: &mut ChaCha8Rng) -> SimpleAutomaton {
    let states = rng.random_range(1..=6);
    let letters: Vec<char> = "abc".chars().take(rng.random_range(1..=3)).collect();
    let alphabet = Alphabet::new(letters).unwrap();
    let width = alphabet.symbol_count();
    let names: Vec<String> = (0..states).map(|q| format!("q{q}")).collect();
    // Any state but the initial one may halt.
    let mut accepting = Vec::new();
    let mut rejecting = Vec::new();
    for name in &names[1..] {
        match rng.random_range(0..4) {
            0 => accepting.push(name.as_str()),
            1 => rejecting.push(name.as_str()),
            _ => {}
        }
    }
    let control = FiniteControl::new(names.clone(), alphabet, "q0", &accepting, &rejecting).unwrap();
    let matrices = (0..2 * width).map(|_| random_unitary(rng, states)).collect();
    let counter = (0..states * width)
        .map(|_| CounterDelta::from_value(rng.random_range(-1..=1)).unwrap())
        .collect();
    let head = (0..states)
        .map(|_| HeadDirection::from_displacement(rng.random_range(-1..=1)).unwrap())
        .collect();
    SimpleAutomaton::new(control, matrices, counter, head).unwrap()
}

#[test]
fn predicates() {
    assert!(!in_square("abbbb") && in_square("aabbbb") && !in_square("aab a"));
    assert!(in_prod("aabbbcccccc") && !in_prod("abcc") && !in_prod("acb"));
    assert!(!in_power("ab") && in_power("abb") && in_power("aaabbbbbbbb"));
    assert!(is_power_of_two_b("b") && !is_power_of_two_b("") && !is_power_of_two_b("bbb"));
    assert_eq!(all_words(&['a', 'b'], 8).len(), 511);
}

/// Random reversible automaton: every matrix is a permutation.
pub fn random_reversible(rng: &mut ChaCha8Rng) -> SimpleAutomaton {
    let m = random_automaton(rng);
    let states = m.state_count();
    let width = m.alphabet().symbol_count();
    let permutations = (0..2 * width)
        .map(|_| {
            let mut order: Vec<usize> = (0..states).collect();
            for k in (1..states).rev() {
                order.swap(k, rng.random_range(0..=k));
            }
            DMatrix::from_fn(states, states, |r, c| {
                if order[c] == r { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
            })
        })
        .collect();
    let control = m.control().clone();
    let symbols = m.alphabet().symbols();
    let counter = control
        .states()
        .flat_map(|q| symbols.iter().map(move |&s| (q, s)))
        .map(|(q, s)| m.counter_fn(q, s))
        .collect();
    let head = control.states().map(|q| m.head_fn(q)).collect();
    SimpleAutomaton::new(control, permutations, counter, head).unwrap()
}

/// Random deterministic automaton over `{a, b}` with halting states `acc` and `rej`.
pub fn random_deterministic(rng: &mut ChaCha8Rng) -> DeterministicAutomaton {
    let live = rng.random_range(1..=4);
    let mut names: Vec<String> = (0..live).map(|q| format!("q{q}")).collect();
    names.push("acc".into());
    names.push("rej".into());
    let alphabet = Alphabet::new(['a', 'b']).unwrap();
    let control = FiniteControl::new(names, alphabet, "q0", &["acc"], &["rej"]).unwrap();
    let mut delta = HashMap::new();
    for q in 0..live {
        for symbol in control.alphabet().symbols() {
            for sign in Sign::ALL {
                let transition = Transition {
                    target: StateId(rng.random_range(0..live + 2)),
                    counter: CounterDelta::from_value(rng.random_range(-1..=1)).unwrap(),
                    head: HeadDirection::from_displacement(rng.random_range(-1..=1)).unwrap(),
                };
                delta.insert((StateId(q), symbol, sign), transition);
            }
        }
    }
    DeterministicAutomaton::new(control, delta).unwrap()
}
