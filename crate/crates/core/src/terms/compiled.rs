use super::{Polynomial, Var};

/// Floating-point evaluator for a polynomial over a fixed variable layout.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    /// Panics if the polynomial mentions a variable missing from `layout`.
    pub fn new(p: &Polynomial, layout: &[Var]) -> CompiledPoly {
        let terms = p
            .to_f64_terms()
            .into_iter()
            .map(|(c, powers)| {
                let idx = powers
                    .into_iter()
                    .map(|(v, e)| {
                        let i = layout
                            .iter()
                            .position(|w| *w == v)
                            .unwrap_or_else(|| panic!("variable `{v}` missing from layout"));
                        (i, e)
                    })
                    .collect();
                (c, idx)
            })
            .collect();
        CompiledPoly { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_with_magnitude(x).0
    }

    /// Value together with the sum of absolute term values, which bounds
    /// the rounding error of the evaluation.
    pub fn eval_with_magnitude(&self, x: &[f64]) -> (f64, f64) {
        let mut acc = 0.0;
        let mut mag = 0.0;
        for (c, powers) in &self.terms {
            let mut t = *c;
            for &(i, e) in powers {
                t *= x[i].powi(e as i32);
            }
            acc += t;
            mag += t.abs();
        }
        (acc, mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::poly;

    #[test]
    fn matches_exact_value() {
        let layout = [Var::new("x"), Var::new("y")];
        let c = CompiledPoly::new(&poly("x^2*y - 3/2*y + 1"), &layout);
        assert_eq!(c.eval(&[2.0, 4.0]), 16.0 - 6.0 + 1.0);
    }
}
