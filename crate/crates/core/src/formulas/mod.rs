//! Quantifier-free real-arithmetic formulas in negation normal form.

mod compiled;
mod parse;

pub use compiled::CompiledFormula;
pub use parse::parse_formula;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::terms::{ParseError, Point, Polynomial, TermError, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Eq,
    Geq,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Geq => ">=",
            Rel::Gt => ">",
        }
    }
}

/// `poly rel 0`. The `flipped` flag only remembers that the atom was
/// written with `<=`/`<` so it prints the way it was entered; equality,
/// ordering and hashing ignore it.
#[derive(Debug, Clone)]
pub struct Atom {
    pub poly: Polynomial,
    pub rel: Rel,
    pub flipped: bool,
}

impl PartialEq for Atom {
    fn eq(&self, other: &Atom) -> bool {
        self.rel == other.rel && self.poly == other.poly
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.rel.hash(h);
        self.poly.hash(h);
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Atom) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Atom) -> std::cmp::Ordering {
        (self.rel, &self.poly).cmp(&(other.rel, &other.poly))
    }
}

impl Atom {
    pub fn new(poly: Polynomial, rel: Rel) -> Atom {
        Atom { poly, rel, flipped: false }
    }

    pub fn eq0(poly: Polynomial) -> Atom {
        Atom::new(poly, Rel::Eq)
    }

    pub fn geq0(poly: Polynomial) -> Atom {
        Atom::new(poly, Rel::Geq)
    }

    pub fn gt0(poly: Polynomial) -> Atom {
        Atom::new(poly, Rel::Gt)
    }

    /// Constant atoms carry no information about the state.
    pub fn is_trivial(&self) -> bool {
        self.poly.is_constant()
    }

    /// Truth value of a constant atom.
    pub fn constant_truth(&self) -> Option<bool> {
        let c = self.poly.constant_value()?;
        Some(match self.rel {
            Rel::Eq => c.is_zero(),
            Rel::Geq => !c.is_negative(),
            Rel::Gt => c.is_positive(),
        })
    }

    /// Dual atom; `None` for equations since `!=` is not supported.
    pub fn negate(&self) -> Option<Atom> {
        let rel = match self.rel {
            Rel::Eq => return None,
            Rel::Geq => Rel::Gt,
            Rel::Gt => Rel::Geq,
        };
        Some(Atom { poly: -&self.poly, rel, flipped: !self.flipped })
    }

    pub fn eval(&self, point: &Point) -> Result<bool, TermError> {
        let v = self.poly.eval(point)?;
        Ok(match self.rel {
            Rel::Eq => v.is_zero(),
            Rel::Geq => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        })
    }

    pub fn with_poly(&self, poly: Polynomial) -> Atom {
        Atom { poly, rel: self.rel, flipped: self.flipped }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rel, self.flipped) {
            (Rel::Eq, _) => write!(f, "{} = 0", self.poly),
            (Rel::Geq, false) => write!(f, "{} >= 0", self.poly),
            (Rel::Gt, false) => write!(f, "{} > 0", self.poly),
            (Rel::Geq, true) => write!(f, "{} <= 0", -&self.poly),
            (Rel::Gt, true) => write!(f, "{} < 0", -&self.poly),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `True` for an empty list.
    pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` for an empty list.
    pub fn disj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Formula::True)
    }

    /// NNF negation. Fails on equations, whose negation needs `!=`.
    pub fn negate(&self) -> Option<Formula> {
        Some(match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(a) => Formula::Atom(a.negate()?),
            Formula::And(a, b) => Formula::or(a.negate()?, b.negate()?),
            Formula::Or(a, b) => Formula::and(a.negate()?, b.negate()?),
        })
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::True | Formula::False => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.atoms().into_iter().flat_map(|a| a.poly.vars()).collect()
    }

    pub fn max_degree(&self) -> u64 {
        self.atoms().into_iter().map(|a| a.poly.total_degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &Point) -> Result<bool, TermError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.eval(point)?,
            Formula::And(a, b) => a.eval(point)? && b.eval(point)?,
            Formula::Or(a, b) => a.eval(point)? || b.eval(point)?,
        })
    }

    /// Rewrites every atom polynomial.
    pub fn map_polys<E>(&self, f: &mut impl FnMut(&Polynomial) -> Result<Polynomial, E>) -> Result<Formula, E> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.with_poly(f(&a.poly)?)),
            Formula::And(a, b) => Formula::and(a.map_polys(f)?, b.map_polys(f)?),
            Formula::Or(a, b) => Formula::or(a.map_polys(f)?, b.map_polys(f)?),
        })
    }

    pub fn substitute(&self, v: &Var, q: &Polynomial) -> Result<Formula, TermError> {
        self.map_polys(&mut |p| p.substitute(v, q))
    }

    /// Flattened conjuncts (`True` contributes nothing).
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::True => {}
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::False => {}
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::And(a, b) => {
                a.fmt_child(f, matches!(**a, Formula::Or(..)))?;
                f.write_str(" & ")?;
                b.fmt_child(f, matches!(**b, Formula::Or(..) | Formula::And(..)))
            }
            Formula::Or(a, b) => {
                a.fmt_child(f, matches!(**a, Formula::And(..)))?;
                f.write_str(" | ")?;
                b.fmt_child(f, matches!(**b, Formula::Or(..) | Formula::And(..)))
            }
        }
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_formula(&s).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Shorthand for tests and examples; panics on bad input.
pub fn fml(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("bad formula `{text}`: {e}"))
}

/// A subset of {>=, >, =, &, |}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct OperatorClass(u8);

impl OperatorClass {
    pub const GEQ: OperatorClass = OperatorClass(1);
    pub const GT: OperatorClass = OperatorClass(2);
    pub const EQ: OperatorClass = OperatorClass(4);
    pub const AND: OperatorClass = OperatorClass(8);
    pub const OR: OperatorClass = OperatorClass(16);
    pub const EMPTY: OperatorClass = OperatorClass(0);
    pub const ALL: OperatorClass = OperatorClass(31);

    const NAMES: [(OperatorClass, &'static str); 5] = [
        (Self::GEQ, "geq"),
        (Self::GT, "gt"),
        (Self::EQ, "eq"),
        (Self::AND, "and"),
        (Self::OR, "or"),
    ];

    pub fn union(self, other: OperatorClass) -> OperatorClass {
        OperatorClass(self.0 | other.0)
    }

    pub fn contains(self, other: OperatorClass) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_subset_of(self, other: OperatorClass) -> bool {
        other.contains(self)
    }

    pub fn of_rel(rel: Rel) -> OperatorClass {
        match rel {
            Rel::Eq => Self::EQ,
            Rel::Geq => Self::GEQ,
            Rel::Gt => Self::GT,
        }
    }

    pub fn relations(self) -> Vec<Rel> {
        [Rel::Geq, Rel::Gt, Rel::Eq]
            .into_iter()
            .filter(|r| self.contains(Self::of_rel(*r)))
            .collect()
    }

    /// Parses a comma list such as `geq,and`.
    pub fn parse(text: &str) -> Result<OperatorClass, String> {
        let mut out = Self::EMPTY;
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (op, _) = Self::NAMES
                .iter()
                .find(|(_, n)| *n == part)
                .ok_or_else(|| format!("unknown operator `{part}` (expected geq, gt, eq, and, or)"))?;
            out = out.union(*op);
        }
        if out == Self::EMPTY {
            return Err("empty operator class".into());
        }
        Ok(out)
    }
}

impl fmt::Display for OperatorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = Self::NAMES.iter().filter(|(op, _)| self.contains(*op)).map(|(_, n)| *n).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Smallest operator class containing every relation and connective of `f`.
pub fn classify(f: &Formula) -> OperatorClass {
    match f {
        Formula::True | Formula::False => OperatorClass::EMPTY,
        Formula::Atom(a) => OperatorClass::of_rel(a.rel),
        Formula::And(a, b) => classify(a).union(classify(b)).union(OperatorClass::AND),
        Formula::Or(a, b) => classify(a).union(classify(b)).union(OperatorClass::OR),
    }
}

/// All atoms strict.
pub fn is_open(f: &Formula) -> bool {
    f.atoms().iter().all(|a| a.rel == Rel::Gt)
}

/// Propositional equivalence with atoms as opaque letters. Formulas with
/// more than 20 distinct atoms fall back to structural equality.
pub fn prop_equivalent(f: &Formula, g: &Formula) -> bool {
    let mut letters: Vec<&Atom> = f.atoms();
    letters.extend(g.atoms());
    letters.sort();
    letters.dedup();
    if letters.len() > 20 {
        return f == g;
    }
    (0u32..(1 << letters.len())).all(|mask| {
        let val = |a: &Atom| {
            let i = letters.binary_search(&a).expect("letter collected");
            mask & (1 << i) != 0
        };
        prop_eval(f, &val) == prop_eval(g, &val)
    })
}

pub(crate) fn prop_eval(f: &Formula, val: &impl Fn(&Atom) -> bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => val(a),
        Formula::And(a, b) => prop_eval(a, val) && prop_eval(b, val),
        Formula::Or(a, b) => prop_eval(a, val) || prop_eval(b, val),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::poly;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&fml("x >= 0 & y >= 0")), OperatorClass::GEQ.union(OperatorClass::AND));
        assert_eq!(classify(&fml("x^2 + y^2 = c^2")), OperatorClass::EQ);
        assert_eq!(classify(&fml("x > 0")), OperatorClass::GT);
    }

    #[test]
    fn openness() {
        assert!(is_open(&fml("x > 0")));
        assert!(!is_open(&fml("x >= 0")));
        assert!(is_open(&fml("x > 0 & y > 1")));
    }

    #[test]
    fn propositional_equivalence() {
        let f = fml("x >= 0");
        assert!(prop_equivalent(&Formula::and(f.clone(), f.clone()), &f));
        assert!(prop_equivalent(&fml("x >= 0 | y >= 0"), &fml("y >= 0 | x >= 0")));
        assert!(!prop_equivalent(&fml("x >= 0"), &fml("x > 0")));
    }

    #[test]
    fn operator_class_parsing() {
        let c = OperatorClass::parse("geq,and").unwrap();
        assert!(c.contains(OperatorClass::GEQ) && c.contains(OperatorClass::AND));
        assert!(!c.contains(OperatorClass::OR));
        assert_eq!(c.to_string(), "{geq,and}");
        assert!(OperatorClass::parse("leq").is_err());
    }

    #[test]
    fn trivial_atoms_are_flagged() {
        assert!(Atom::geq0(poly("3")).is_trivial());
        assert!(!Atom::geq0(poly("x")).is_trivial());
    }

    #[test]
    fn display_keeps_written_orientation() {
        assert_eq!(fml("w^2*x^2 + y^2 <= c^2").to_string(), "w^2*x^2 - c^2 + y^2 <= 0");
        assert_eq!(fml("x >= 0 & (y >= 0 & z > 0)").to_string(), "x >= 0 & (y >= 0 & z > 0)");
    }
}
