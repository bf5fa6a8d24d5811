//! Enumerate candidate invariants of a bounded shape and let the search
//! find one that the kernel accepts.
use diffinv::prelude::*;

fn main() {
    let vars = [Var::new("x"), Var::new("y")];
    let cfg = SearchConfig { max_degree: 1, max_atoms: 1, ..SearchConfig::default() };
    let cands = enumerate_candidates(&vars, &cfg);
    println!("{} single-atom affine candidates, e.g.", cands.len());
    for c in cands.iter().take(5) {
        println!("  {c}");
    }

    let rotation = Problem::new(
        OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true"),
        fml("x^2 + y^2 = 1"),
        fml("x^2 + y^2 = 1"),
    );
    let cfg = SearchConfig { opclass: OperatorClass::parse("eq").unwrap(), ..SearchConfig::default() };
    if let Some(found) = search_invariant(&rotation, &cfg) {
        println!("rotation: {} ({} examined)", found.script, found.examined);
    }

    let quadrant = Problem::new(
        OdeSystem::from_text(&[("x", "y"), ("y", "y^2")], "true"),
        fml("x >= 0 & y >= 0"),
        fml("x >= 0"),
    );
    let cfg = SearchConfig {
        opclass: OperatorClass::parse("geq,and").unwrap(),
        max_degree: 1,
        max_cuts: 1,
        ..SearchConfig::default()
    };
    match search_with_cuts(&quadrant, &cfg) {
        Some(found) => println!("quadrant: {}", found.script),
        None => println!("quadrant: nothing within budget"),
    }
}
