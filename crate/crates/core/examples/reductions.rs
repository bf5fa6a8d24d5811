//! Formula rewritings that move invariants between operator classes.
use diffinv::prelude::*;
use diffinv::reduce::Reduction;

fn main() {
    let inputs = ["x^2 + y^2 = 1", "x = 1 & y = 2", "x >= y | x = 0"];
    for text in inputs {
        let f = fml(text);
        println!("{text}  [{}]", classify(&f));
        for r in Reduction::ALL {
            match r.apply(&f) {
                Ok(g) => println!("  {:<16} {g}  [{}]", r.name(), classify(&g)),
                Err(e) => println!("  {:<16} ({e})", r.name()),
            }
        }
    }

    let sys = OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true");
    let circle = fml("x^2 + y^2 - 1 = 0");
    let weak = Reduction::EqToWeak.apply(&circle).unwrap();
    println!("D({circle}) = {}", derive_formula(&circle, &sys));
    println!("D({weak}) = {}", derive_formula(&weak, &sys));
}
