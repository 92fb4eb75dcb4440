//! Well-formedness checks: the local conditions on a transition function, the operator
//! on a finite window, and agreement with a dense reference simulation.

use num_complex::Complex64;
use q1ca::alphabet::Alphabet;
use q1ca::automaton::{GeneralKey, GeneralTransitionFunction, StateId};
use q1ca::evolution::default_step_cap;
use q1ca::zoo::build_square;
use q1ca::{check_dense_unitarity, check_general, dense_oracle_run, expand_simple, run, CounterDelta, HeadDirection, Sign};

fn main() {
    let m = build_square(2).unwrap();
    println!("square(2), local conditions:\n{}", check_general(&expand_simple(&m), m.alphabet(), 1e-9));
    println!("square(2), operator on \"aab\":\n{}", check_dense_unitarity(&m, "aab", 3, 1e-9).unwrap());

    let (sparse, _) = run(&m, "aabbbb", default_step_cap(6), false).unwrap();
    let dense = dense_oracle_run(&m, "aabbbb", default_step_cap(6)).unwrap();
    println!("sparse accept {:.12}, dense accept {:.12}\n", sparse.p_accept, dense.p_accept);

    // One state that moves left and right in superposition on every symbol. Both moves
    // can land on the same configuration, so the columns are not orthogonal.
    let alphabet = Alphabet::new(['a']).unwrap();
    let mut delta = GeneralTransitionFunction::new(1);
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for symbol in alphabet.symbols() {
        for sign in Sign::ALL {
            for head in [HeadDirection::Left, HeadDirection::Right] {
                let key = GeneralKey { from: StateId(0), symbol, sign, to: StateId(0), counter: CounterDelta::Keep, head };
                delta.insert(key, amp);
            }
        }
    }
    let report = check_general(&delta, &alphabet, 1e-9);
    println!("left/right splitter: {} violations, first one:", report.violations.len());
    if let Some(v) = report.violations.first() {
        println!("  {v:?}");
    }
}
