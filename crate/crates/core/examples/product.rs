//! Bounded-error recognition of `aᵐbⁿc^{mn}`.

use q1ca::evolution::{run, zoo_step_cap};
use q1ca::zoo::build_prod;

fn main() {
    let branches = 4;
    let m = build_prod(branches).expect("N >= 2");
    for (a, b) in [(1, 1), (2, 3), (3, 3)] {
        for c in [a * b - 1, a * b, a * b + 1] {
            let input = format!("{}{}{}", "a".repeat(a), "b".repeat(b), "c".repeat(c));
            let (o, _) = run(&m, &input, zoo_step_cap(branches, input.len()), false).unwrap();
            let verdict = if c == a * b { "member" } else { "" };
            println!("a^{a} b^{b} c^{c:<2}  accept {:.6}  steps {:>4}  {verdict}", o.p_accept, o.steps);
        }
    }
}
