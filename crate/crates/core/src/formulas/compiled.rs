use super::{Formula, Rel};
use crate::terms::{CompiledPoly, Var};

/// Floating-point view of a formula over a fixed variable layout.
#[derive(Debug, Clone)]
pub enum CompiledFormula {
    Const(bool),
    Atom(CompiledPoly, Rel),
    And(Box<CompiledFormula>, Box<CompiledFormula>),
    Or(Box<CompiledFormula>, Box<CompiledFormula>),
}

impl CompiledFormula {
    pub fn new(f: &Formula, layout: &[Var]) -> CompiledFormula {
        match f {
            Formula::True => CompiledFormula::Const(true),
            Formula::False => CompiledFormula::Const(false),
            Formula::Atom(a) => CompiledFormula::Atom(CompiledPoly::new(&a.poly, layout), a.rel),
            Formula::And(a, b) => {
                CompiledFormula::And(Box::new(Self::new(a, layout)), Box::new(Self::new(b, layout)))
            }
            Formula::Or(a, b) => CompiledFormula::Or(Box::new(Self::new(a, layout)), Box::new(Self::new(b, layout))),
        }
    }

    /// Kleene evaluation: `None` when rounding could flip the answer.
    pub fn eval3(&self, x: &[f64]) -> Option<bool> {
        match self {
            CompiledFormula::Const(b) => Some(*b),
            CompiledFormula::Atom(p, rel) => {
                let (v, mag) = p.eval_with_magnitude(x);
                if !v.is_finite() {
                    return None;
                }
                let tol = 1e-9 * (1.0 + mag);
                match rel {
                    Rel::Eq if v.abs() > tol => Some(false),
                    Rel::Eq => None,
                    Rel::Geq | Rel::Gt if v > tol => Some(true),
                    Rel::Geq | Rel::Gt if v < -tol => Some(false),
                    _ => None,
                }
            }
            CompiledFormula::And(a, b) => match (a.eval3(x), b.eval3(x)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            CompiledFormula::Or(a, b) => match (a.eval3(x), b.eval3(x)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
        }
    }

    /// Amount by which the formula fails at `x`; nonpositive when it holds
    /// (ignoring the strict/weak distinction).
    pub fn violation(&self, x: &[f64]) -> f64 {
        match self {
            CompiledFormula::Const(true) => f64::NEG_INFINITY,
            CompiledFormula::Const(false) => f64::INFINITY,
            CompiledFormula::Atom(p, rel) => {
                let v = p.eval(x);
                match rel {
                    Rel::Eq => v.abs(),
                    Rel::Geq | Rel::Gt => -v,
                }
            }
            CompiledFormula::And(a, b) => a.violation(x).max(b.violation(x)),
            CompiledFormula::Or(a, b) => a.violation(x).min(b.violation(x)),
        }
    }
}
