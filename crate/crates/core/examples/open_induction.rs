//! For open invariants the induction step may assume the invariant itself.
use diffinv::prelude::*;

fn main() {
    let sys = OdeSystem::from_text(&[("x", "x")], "true");
    let f = fml("x > 0");
    println!("open: {}", is_open(&f));
    println!("weak step: {}", derive_formula_with(&f, &sys, DerivationMode::Weak));
    println!("strict step: {}", derive_formula_with(&f, &sys, DerivationMode::Strict));

    let problem = Problem::new(sys, f.clone(), f);
    let kernel = Kernel::new(DerivationMode::Weak, 0);
    for text in ["invariant x > 0", "open-invariant x > 0"] {
        let proof = parse_script(text).unwrap().build(&problem.sequent(), &kernel).unwrap();
        let report = check_proof(&kernel, &proof).unwrap();
        println!("{text}: {}", report.verdict);
    }
}
