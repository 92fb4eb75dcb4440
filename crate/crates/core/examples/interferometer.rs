//! A hand-built automaton: two paths race across the input, one slowed down by every
//! `b` and the other by every `a`, and meet in a Hadamard merge at the right end-marker.
//! They interfere into acceptance exactly when the counts match. The automaton is then
//! written in the interchange format and read back.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use q1ca::alphabet::{Alphabet, Symbol};
use q1ca::document::{parse_document, simple_document, AnyAutomaton};
use q1ca::evolution::run;
use q1ca::zoo::Design;
use q1ca::{check_simple_unitarity, HeadDirection, Sign};

fn main() {
    let (a, b) = (Symbol::Letter('a'), Symbol::Letter('b'));
    let zero = Sign::Zero;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);

    let mut d = Design::new(Alphabet::new(['a', 'b']).unwrap());
    let q0 = d.state("q0");
    let [l0, l1, r0, r1] = ["l0", "l1", "r0", "r1"].map(|name| d.state(name));
    let acc = d.state("acc");
    let rej = d.state("rej");
    d.accepting(acc).rejecting(rej);
    d.head(l0, HeadDirection::Right).head(r0, HeadDirection::Right);

    d.superpose(Symbol::LeftEnd, zero, q0, vec![(l0, h), (r0, h)]);
    d.map(a, zero, l0, l0).map(b, zero, l0, l1).map(b, zero, l1, l0);
    d.map(b, zero, r0, r0).map(a, zero, r0, r1).map(a, zero, r1, r0);
    d.superpose(Symbol::RightEnd, zero, l0, vec![(acc, h), (rej, h)]);
    d.superpose(Symbol::RightEnd, zero, r0, vec![(acc, h), (rej, -h)]);
    let m = d.build().expect("written columns are orthonormal");
    println!("unitary: {}", check_simple_unitarity(&m, 1e-12).passed());

    let text = simple_document(&m);
    let Ok(AnyAutomaton::Simple(back)) = parse_document(&text) else { panic!("round trip failed") };
    println!("document: {} bytes, round trip identical: {}", text.len(), simple_document(&back) == text);

    for input in ["", "ab", "ba", "aabb", "abb", "aaab", "abab"] {
        let (o, _) = run(&back, input, 100, false).unwrap();
        println!("{input:>5}  accept {:.3}  steps {}", o.p_accept, o.steps);
    }
}
