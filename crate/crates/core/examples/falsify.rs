//! Simulate sampled initial states and report the first one that leaves
//! the postcondition.
use diffinv::numsim::describe;
use diffinv::prelude::*;

fn main() {
    let cases = [
        ("drift", Problem::new(OdeSystem::from_text(&[("x", "-1")], "true"), fml("x >= 0"), fml("x >= 0"))),
        (
            "damped",
            Problem::new(
                OdeSystem::from_text(&[("x", "y"), ("y", "-x - y")], "true"),
                fml("x^2 + y^2 <= 1"),
                fml("x^2 + x*y + y^2 <= 3/2"),
            ),
        ),
    ];
    let cfg = FalsifyConfig { samples: 300, bounds: (rat(-2), rat(2)), seed: 7, ..FalsifyConfig::default() };
    for (name, problem) in &cases {
        match falsify(problem, &cfg).expect("valid configuration") {
            Some(c) => println!("{name}: {}", describe(&c)),
            None => println!("{name}: no counterexample in {} samples", cfg.samples),
        }
    }
}
