//! Energy ellipses shrink under damping, so `w^2 x^2 + y^2 <= c^2` is an
//! invariant whenever `w, d >= 0`.
use diffinv::prelude::*;

const PROBLEM: &str = "\
var x, y
const w, d, c
ode x' = y, y' = -w^2*x - 2*d*w*y
domain w >= 0 & d >= 0
pre w^2*x^2 + y^2 <= c^2
post w^2*x^2 + y^2 <= c^2
";

fn main() {
    let pf: ProblemFile = PROBLEM.parse().expect("valid problem file");
    let problem = &pf.problem;
    let post = &problem.post;
    println!("induction step: {}", derive_formula(post, &problem.sys));

    let kernel = Kernel::new(DerivationMode::Weak, 0);
    let script = parse_script("invariant w^2*x^2 + y^2 <= c^2").unwrap();
    let proof = script.build(&problem.sequent(), &kernel).unwrap();
    let report = check_proof(&kernel, &proof).unwrap();
    println!("verdict: {}", report.verdict);

    // without the domain the damping term has no sign
    let free = Problem::new(problem.sys.with_domain(Formula::True), problem.pre.clone(), post.clone());
    let proof = script.build(&free.sequent(), &kernel).unwrap();
    println!("without domain: {}", check_proof(&kernel, &proof).unwrap().verdict);
}
