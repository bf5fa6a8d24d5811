//! Integrate an ODE with RK4 and compare finite differences of a polynomial
//! along the trajectory with its Lie derivative.
use std::collections::BTreeMap;

use diffinv::prelude::*;

fn main() {
    let sys = OdeSystem::from_text(&[("x", "y"), ("y", "-x - y/2")], "true");
    let init = BTreeMap::from([(Var::new("x"), 1.0), (Var::new("y"), 0.0)]);
    let traj = integrate(&sys, &init, 1e-3, 5.0).unwrap();
    for i in (0..traj.len()).step_by(1000) {
        let s = traj.state(i);
        println!("t={:.1} x={:+.4} y={:+.4}", traj.times[i], s[&Var::new("x")], s[&Var::new("y")]);
    }

    let energy = poly("x^2 + y^2");
    println!("D(energy) = {}", lie_derivative(&energy, &sys));
    let dev = derivation_lemma_deviation(&energy, &sys, &init, 1e-3, 5.0).unwrap();
    println!("max |finite difference - D(energy)| = {dev:.2e}");
}
