//! Syntactic total derivation of terms and formulas along an ODE.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formulas::{Atom, Formula, Rel};
use crate::terms::{Polynomial, Var};

/// `x' = θ & H`. Symbols without an equation are constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OdeSystem {
    pub equations: BTreeMap<Var, Polynomial>,
    pub domain: Formula,
}

impl OdeSystem {
    pub fn new<I: IntoIterator<Item = (Var, Polynomial)>>(equations: I, domain: Formula) -> OdeSystem {
        OdeSystem { equations: equations.into_iter().collect(), domain }
    }

    /// Builds a system from `(name, rhs)` text pairs; panics on bad input.
    pub fn from_text(eqs: &[(&str, &str)], domain: &str) -> OdeSystem {
        OdeSystem::new(
            eqs.iter().map(|(v, rhs)| (Var::new(v), crate::terms::poly(rhs))),
            crate::formulas::fml(domain),
        )
    }

    pub fn evolving(&self) -> impl Iterator<Item = &Var> {
        self.equations.keys()
    }

    pub fn with_domain(&self, domain: Formula) -> OdeSystem {
        OdeSystem { equations: self.equations.clone(), domain }
    }

    /// Every symbol mentioned by the equations or the domain.
    pub fn symbols(&self) -> BTreeSet<Var> {
        let mut s: BTreeSet<Var> = self.equations.keys().cloned().collect();
        for rhs in self.equations.values() {
            s.extend(rhs.vars());
        }
        s.extend(self.domain.vars());
        s
    }
}

impl fmt::Display for OdeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, rhs)) in self.equations.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}' = {rhs}")?;
        }
        if !self.domain.is_true() {
            write!(f, " & {}", self.domain)?;
        }
        Ok(())
    }
}

/// How a strict atom `p > 0` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivationMode {
    /// `p > 0` derives to `D(p) >= 0`.
    #[default]
    Weak,
    /// `p > 0` derives to `D(p) > 0`.
    Strict,
}

/// `Σ ∂p/∂xᵢ · θᵢ` over the evolving variables.
pub fn lie_derivative(p: &Polynomial, sys: &OdeSystem) -> Polynomial {
    let mut acc = Polynomial::zero();
    for (v, rhs) in &sys.equations {
        let d = p.partial_derivative(v);
        if !d.is_zero() {
            acc = acc + d * rhs.clone();
        }
    }
    acc
}

pub fn derive_formula(f: &Formula, sys: &OdeSystem) -> Formula {
    derive_formula_with(f, sys, DerivationMode::Weak)
}

/// Atoms derive atom-wise; conjunctions and disjunctions both derive to
/// conjunctions.
pub fn derive_formula_with(f: &Formula, sys: &OdeSystem, mode: DerivationMode) -> Formula {
    match f {
        Formula::True | Formula::False => Formula::True,
        Formula::Atom(a) => {
            let rel = match (a.rel, mode) {
                (Rel::Eq, _) => Rel::Eq,
                (Rel::Geq, _) | (Rel::Gt, DerivationMode::Weak) => Rel::Geq,
                (Rel::Gt, DerivationMode::Strict) => Rel::Gt,
            };
            Formula::Atom(Atom { poly: lie_derivative(&a.poly, sys), rel, flipped: a.flipped })
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            Formula::and(derive_formula_with(a, sys, mode), derive_formula_with(b, sys, mode))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::fml;
    use crate::terms::poly;

    fn rotation() -> OdeSystem {
        OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true")
    }

    #[test]
    fn lie_derivative_examples() {
        assert!(lie_derivative(&poly("x^2+y^2"), &rotation()).is_zero());
        let damped = OdeSystem::from_text(&[("x", "y"), ("y", "-w^2*x - 2*d*w*y")], "w >= 0 & d >= 0");
        assert_eq!(lie_derivative(&poly("w^2*x^2+y^2"), &damped), poly("-4*d*w*y^2"));
        let shift = OdeSystem::from_text(&[("x", "1")], "true");
        assert_eq!(lie_derivative(&poly("x"), &shift), poly("1"));
        assert!(lie_derivative(&poly("p^2 + 3*c"), &rotation()).is_zero());
    }

    #[test]
    fn formula_derivation_examples() {
        assert_eq!(derive_formula(&fml("x^2+y^2 >= p^2"), &rotation()), fml("0 >= 0"));
        let unit = OdeSystem::from_text(&[("x", "1"), ("y", "1")], "true");
        assert_eq!(derive_formula(&fml("x >= 0 | y >= 0"), &unit), fml("1 >= 0 & 1 >= 0"));
        let aux = OdeSystem::from_text(&[("x", "-x"), ("y", "y/2")], "true");
        assert_eq!(derive_formula(&fml("x*y^2 - 1 = 0"), &aux), fml("0 = 0"));
    }

    #[test]
    fn strict_mode_keeps_strictness() {
        let sys = OdeSystem::from_text(&[("x", "x")], "true");
        assert_eq!(derive_formula(&fml("x > 0"), &sys), fml("x >= 0"));
        assert_eq!(derive_formula_with(&fml("x > 0"), &sys, DerivationMode::Strict), fml("x > 0"));
    }

    #[test]
    fn flipped_atoms_print_in_written_orientation() {
        let damped = OdeSystem::from_text(&[("x", "y"), ("y", "-w^2*x - 2*d*w*y")], "w >= 0 & d >= 0");
        let d = derive_formula(&fml("w^2*x^2 + y^2 <= c^2"), &damped);
        assert_eq!(d.to_string(), "-4*d*w*y^2 <= 0");
    }
}
