//! `x >= 0` under `x' = y, y' = y^2` is not inductive on its own, but it is
//! once `y >= 0` has been cut into the evolution domain.
use diffinv::prelude::*;

fn main() {
    let sys = OdeSystem::from_text(&[("x", "y"), ("y", "y^2")], "true");
    let pre = fml("x >= 0 & y >= 0");
    let problem = Problem::new(sys, pre.clone(), fml("x >= 0"));
    let kernel = Kernel::new(DerivationMode::Weak, 0);

    let direct = parse_script("invariant x >= 0").unwrap();
    let report = check_proof(&kernel, &direct.build(&problem.sequent(), &kernel).unwrap()).unwrap();
    println!("plain DI: {}", report.verdict);

    let cut = parse_script("cut y >= 0 { invariant y >= 0 } { invariant x >= 0 & y >= 0 }").unwrap();
    let proof = cut.build(&problem.sequent(), &kernel).unwrap();
    let report = check_proof(&kernel, &proof).unwrap();
    println!("with cut: {} ({} nodes)", report.verdict, proof.size());
    for (path, leaf) in &report.leaves {
        println!("  {path}: {leaf}");
    }
}
