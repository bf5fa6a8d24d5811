//! `x > 0` under `x' = -x` needs a ghost: with `y' = y/2`, the quantity
//! `x*y^2` stays at 1 and forces `x` to keep its sign.
use diffinv::prelude::*;

fn main() {
    let sys = OdeSystem::from_text(&[("x", "-x")], "true");
    let problem = Problem::new(sys, fml("x > 0"), fml("x > 0"));
    let kernel = Kernel::new(DerivationMode::Weak, 0);

    for text in ["invariant x > 0", "aux y' = 1/2*y with x*y^2 - 1 = 0 { invariant x*y^2 - 1 = 0 }"] {
        let script = parse_script(text).unwrap();
        let proof = script.build(&problem.sequent(), &kernel).unwrap();
        let report = check_proof(&kernel, &proof).unwrap();
        println!("{text}\n  -> {}", report.verdict);
    }

    let mut cfg = SearchConfig { allow_da: true, ..SearchConfig::default() };
    cfg.opclass = OperatorClass::parse("eq").unwrap();
    match search_with_cuts(&problem, &cfg) {
        Some(found) => println!("search found: {} after {} candidates", found.script, found.examined),
        None => println!("search found nothing"),
    }
}
