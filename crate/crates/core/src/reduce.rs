//! Equivalence-preserving rewrites between operator classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulas::{classify, Atom, Formula, OperatorClass, Rel};
use crate::terms::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("{0} is not purely equational")]
    NotEquational(Formula),
    #[error("{0} is not an equation")]
    NotEquation(Atom),
    #[error("unknown reduction `{0}`")]
    UnknownReduction(String),
}

/// Moves everything to the left so each atom prints as `p rel 0`.
pub fn normalize_rhs_zero(f: &Formula) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(Atom::new(a.poly.clone(), a.rel)),
        Formula::And(a, b) => Formula::and(normalize_rhs_zero(a), normalize_rhs_zero(b)),
        Formula::Or(a, b) => Formula::or(normalize_rhs_zero(a), normalize_rhs_zero(b)),
        other => other.clone(),
    }
}

/// A single equation equivalent to an `=, &, |` formula: conjunctions
/// become sums of squares and disjunctions become products.
pub fn equational_collapse(f: &Formula) -> Result<Atom, ReduceError> {
    let eq_class = OperatorClass::EQ.union(OperatorClass::AND).union(OperatorClass::OR);
    if !classify(f).is_subset_of(eq_class) {
        return Err(ReduceError::NotEquational(f.clone()));
    }
    fn go(f: &Formula) -> Polynomial {
        match f {
            Formula::True => Polynomial::zero(),
            Formula::False => Polynomial::one(),
            Formula::Atom(a) => a.poly.clone(),
            Formula::And(a, b) => {
                let (p, q) = (go(a), go(b));
                &p * &p + &q * &q
            }
            Formula::Or(a, b) => go(a) * go(b),
        }
    }
    Ok(Atom::eq0(go(f)))
}

/// `p = 0` to `-p^2 >= 0`.
pub fn eq_to_weak(a: &Atom) -> Result<Atom, ReduceError> {
    if a.rel != Rel::Eq {
        return Err(ReduceError::NotEquation(a.clone()));
    }
    Ok(Atom::geq0(-(&a.poly * &a.poly)))
}

/// `p = 0` to `p >= 0 & -p >= 0`.
pub fn eq_to_conj_weak(a: &Atom) -> Result<Formula, ReduceError> {
    if a.rel != Rel::Eq {
        return Err(ReduceError::NotEquation(a.clone()));
    }
    Ok(Formula::and(Formula::Atom(Atom::geq0(a.poly.clone())), Formula::Atom(Atom::geq0(-&a.poly))))
}

fn map_atoms(f: &Formula, g: &impl Fn(&Atom) -> Result<Formula, ReduceError>) -> Result<Formula, ReduceError> {
    Ok(match f {
        Formula::Atom(a) => g(a)?,
        Formula::And(a, b) => Formula::and(map_atoms(a, g)?, map_atoms(b, g)?),
        Formula::Or(a, b) => Formula::or(map_atoms(a, g)?, map_atoms(b, g)?),
        other => other.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    Normalize,
    Collapse,
    EqToWeak,
    EqToConjWeak,
}

impl Reduction {
    pub const ALL: [Reduction; 4] = [Reduction::Normalize, Reduction::Collapse, Reduction::EqToWeak, Reduction::EqToConjWeak];

    pub fn name(self) -> &'static str {
        match self {
            Reduction::Normalize => "normalize",
            Reduction::Collapse => "collapse",
            Reduction::EqToWeak => "eq-to-weak",
            Reduction::EqToConjWeak => "eq-to-conj-weak",
        }
    }

    /// Applies the reduction to a whole formula. The weakening reductions
    /// rewrite every equation and fail if there is none.
    pub fn apply(self, f: &Formula) -> Result<Formula, ReduceError> {
        match self {
            Reduction::Normalize => Ok(normalize_rhs_zero(f)),
            Reduction::Collapse => Ok(Formula::Atom(equational_collapse(f)?)),
            Reduction::EqToWeak | Reduction::EqToConjWeak => {
                if !f.atoms().iter().any(|a| a.rel == Rel::Eq) {
                    return Err(ReduceError::NotEquational(f.clone()));
                }
                map_atoms(f, &|a| match (a.rel, self) {
                    (Rel::Eq, Reduction::EqToWeak) => eq_to_weak(a).map(Formula::Atom),
                    (Rel::Eq, _) => eq_to_conj_weak(a),
                    _ => Ok(Formula::Atom(a.clone())),
                })
            }
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reduction {
    type Err = ReduceError;
    fn from_str(s: &str) -> Result<Reduction, ReduceError> {
        Reduction::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| ReduceError::UnknownReduction(s.to_string()))
    }
}
