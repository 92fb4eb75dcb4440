//! Bounded-error recognition of `aⁿb^{n²}`.
//!
//! `cargo run --example square -- 8` uses eight paths; the default is four.

use q1ca::evolution::{acceptance_table, zoo_step_cap};
use q1ca::zoo::build_square;

fn main() {
    let branches: usize = std::env::args().nth(1).map_or(4, |s| s.parse().expect("N must be a number"));
    let m = build_square(branches).expect("N >= 2");
    println!("square recognizer, N = {branches}, {} states", m.state_count());

    let inputs: Vec<String> = ["ab", "aabbbb", "aaabbbbbbbbb", "aabbb", "aabbbbb", "ba", "", "aaabbb"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let cap = zoo_step_cap(branches, inputs.iter().map(String::len).max().unwrap_or(0));
    for (input, outcome) in acceptance_table(&m, &inputs, Some(cap)) {
        let o = outcome.expect("inputs are over {a, b}");
        println!("{input:>14}  accept {:.6}  reject {:.6}  steps {}", o.p_accept, o.p_reject, o.steps);
    }
}
