//! The branch-and-bound upper bound must never change the result, only the
//! work done: bounded and exhaustive runs are compared across many small
//! seeded corpora, including ones engineered to sit near utility ties.

use leroy_core::p2::parse_program;
use leroy_core::search::{search_best, SearchConfig};
use leroy_core::sexpr::{lispify, SExpr};
use leroy_core::Program;

struct XorShift(u64);

impl XorShift {
    fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn gen_corpus(rng: &mut XorShift) -> Vec<Program> {
    let shared = format!(
        "s = [{}, {}] + [{}]\nt = s + [{}]\nprint(t)\n",
        rng.below(5),
        rng.below(5),
        rng.below(5),
        rng.below(5)
    );
    let mut programs = Vec::new();
    for p in 0..3 + rng.below(3) {
        let mut text = String::new();
        if rng.below(3) != 0 {
            text.push_str(&shared);
        }
        for _ in 0..1 + rng.below(3) {
            match rng.below(5) {
                0 => text.push_str(&format!("a{p} = {} + {}\n", rng.below(8), rng.below(8))),
                1 => text.push_str(&format!("print([{}, {}])\n", rng.below(8), rng.below(8))),
                2 => text.push_str(&format!("b{p} = {{1: {}}}\nprint(b{p}[1])\n", rng.below(8))),
                3 => text.push_str(&format!("c{p} = {} if d{p} else {}\n", rng.below(8), rng.below(8))),
                _ => text.push_str(&format!("e{p} = eval(input())\nprint(e{p})\n")),
            }
        }
        programs.push(parse_program(&text).unwrap());
    }
    programs
}

#[test]
fn bound_never_changes_the_outcome() {
    let mut rng = XorShift::new(0xB0B0_1234);
    for round in 0..60 {
        let corpus = gen_corpus(&mut rng);
        let terms: Vec<SExpr> = corpus.iter().map(lispify).collect();
        for min_size in [1, 8] {
            let bounded = search_best(
                &terms,
                &SearchConfig { min_body_size: min_size, max_arity: 4, exhaustive: false },
            );
            let exhaustive = search_best(
                &terms,
                &SearchConfig { min_body_size: min_size, max_arity: 4, exhaustive: true },
            );
            let key = |c: &leroy_core::Candidate| (c.utility, c.pattern.serialized());
            assert_eq!(
                bounded.as_ref().map(key),
                exhaustive.as_ref().map(key),
                "round {round} min_size {min_size} diverged"
            );
        }
    }
}
