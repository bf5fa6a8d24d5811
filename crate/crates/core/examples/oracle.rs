//! The arithmetic oracle is three-valued: valid with a certificate, invalid
//! with an exact witness, or unknown.
use diffinv::prelude::*;

fn main() {
    let queries: [(&[&str], &str); 6] = [
        (&[], "x^2 + y^2 >= 0"),
        (&[], "x^2 + 1 > 0"),
        (&["y >= 0"], "y^2 + x^2*y >= 0"),
        (&[], "x^3 - x + 1 > 0"),
        (&[], "-2*(x - y)*(1 - y) >= 0"),
        (&[], "x^2 - 2*x*y + y^2 - x >= 0"),
    ];
    for (assumptions, goal) in queries {
        let gamma: Vec<Formula> = assumptions.iter().map(|a| fml(a)).collect();
        let v = decide(&gamma, &fml(goal));
        let lhs = assumptions.join(", ");
        println!("{lhs} |- {goal}\n  {v}");
    }
}
