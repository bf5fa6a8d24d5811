//! Circles are invariant under rotation: derive the induction step by hand,
//! then let the kernel replay the whole proof.
use diffinv::prelude::*;

fn main() {
    let sys = OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true");
    let f = fml("x^2 + y^2 >= p^2");

    let lie = lie_derivative(&poly("x^2 + y^2 - p^2"), &sys);
    println!("D(x^2 + y^2 - p^2) = {lie}");
    println!("derived formula: {}", derive_formula(&f, &sys));

    let problem = Problem::new(sys, f.clone(), f.clone());
    let kernel = Kernel::new(DerivationMode::Weak, 0);
    let proof = Script::invariant(f).build(&problem.sequent(), &kernel).expect("DI applies");
    let report = check_proof(&kernel, &proof).expect("well-formed tree");
    for (path, leaf) in &report.leaves {
        println!("leaf {path}: {leaf}");
    }
    println!("verdict: {}", report.verdict);
    println!("hash: {}", report.hash);
}
