//! Compiles a deterministic counter automaton for `aⁿbⁿ` into a reversible one and
//! compares decisions.

use q1ca::compiler::{compile, Stage};
use q1ca::evolution::{run, run_deterministic, Decision};
use q1ca::zoo::build_balanced_2d1ca;
use q1ca::check_reversible;

fn main() {
    let source = build_balanced_2d1ca();
    let simple = compile(&source, Stage::Simple).unwrap();
    let reversible = compile(&source, Stage::Reversible).unwrap();
    println!(
        "source {} states, simple {} states, reversible {} states (reversible: {})",
        source.control().state_count(),
        simple.state_count(),
        reversible.state_count(),
        check_reversible(&reversible).passed()
    );
    for input in ["", "ab", "aabb", "aaabbb", "aab", "abab", "ba"] {
        let (decision, steps) = run_deterministic(&source, input, 1000).unwrap();
        let (o, _) = run(&reversible, input, 100_000, false).unwrap();
        let compiled = if o.p_accept == 1.0 { Decision::Accept } else { Decision::Reject };
        println!("{input:>8}  source {decision:?} in {steps} steps, reversible {compiled:?} in {} steps", o.steps);
    }
}
