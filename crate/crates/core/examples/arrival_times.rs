//! Reads the step at which each path of the square recognizer reaches the right
//! end-marker off a traced run.

use q1ca::evolution::{run, zoo_step_cap};
use q1ca::zoo::build_square;

fn main() {
    let branches = 4;
    let m = build_square(branches).unwrap();
    for (a, b) in [(2, 4), (2, 3), (3, 9), (3, 4)] {
        let input = format!("{}{}", "a".repeat(a), "b".repeat(b));
        let (_, trace) = run(&m, &input, zoo_step_cap(branches, input.len()), true).unwrap();
        let trace = trace.unwrap();
        let arrivals: Vec<usize> = (1..=branches)
            .map(|i| {
                let scan = m.control().id(&format!("scan{i}_0")).unwrap();
                1 + trace
                    .steps
                    .iter()
                    .position(|t| t.snapshot.iter().any(|(c, _)| c.state == scan && c.head == input.len() + 1))
                    .unwrap()
            })
            .collect();
        println!("a^{a} b^{b}: arrivals by path {arrivals:?}");
    }
}
