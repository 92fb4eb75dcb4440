//! The reversible recognizer of `b^{2ʲ}` and the quantum recognizer of `aⁿb^{2ⁿ}` built
//! on top of it.

use q1ca::evolution::{default_step_cap, run, zoo_step_cap};
use q1ca::zoo::{build_power, build_power_of_two};
use q1ca::check_reversible;

fn main() {
    let p2 = build_power_of_two().unwrap();
    println!("powers of two: reversible = {}", check_reversible(&p2).passed());
    let accepted: Vec<usize> = (0..=70)
        .filter(|&k| {
            let input = "b".repeat(k);
            run(&p2, &input, default_step_cap(k), false).unwrap().0.p_accept == 1.0
        })
        .collect();
    println!("  b^k accepted for k in {accepted:?}");

    let branches = 4;
    let m = build_power(branches).unwrap();
    println!("power recognizer, N = {branches}");
    for (a, b) in [(1, 2), (2, 4), (3, 8), (3, 7), (4, 16), (4, 12)] {
        let input = format!("{}{}", "a".repeat(a), "b".repeat(b));
        let (o, _) = run(&m, &input, zoo_step_cap(branches, input.len()), false).unwrap();
        println!("  a^{a} b^{b:<2}  accept {:.6}  reject {:.6}", o.p_accept, o.p_reject);
    }
}
