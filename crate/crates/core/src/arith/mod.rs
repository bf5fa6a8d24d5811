//! Sound but incomplete validity oracle for quantifier-free sequents.

pub mod search;
pub mod sign;
pub mod sturm;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formulas::{prop_eval, Atom, Formula, Rel};
use crate::terms::{fmt_rational, Point, Polynomial, Rational, Var};
use sign::{collect_facts, sign_of, sign_with_factors, Facts, SignSet};
pub use sturm::{count_real_roots, decide_univariate, sturm_chain, SturmChain, UniOutcome, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
}

/// Which tier justified a validity verdict, from cheapest to most involved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    Propositional,
    Identity,
    EvenSign,
    AssumptionSign,
    Sturm,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Propositional => "propositional",
            Certificate::Identity => "identity",
            Certificate::EvenSign => "even-sign",
            Certificate::AssumptionSign => "assumption-sign",
            Certificate::Sturm => "sturm",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid(Certificate),
    /// An exact point satisfying every assumption and falsifying the goal.
    Invalid(Point),
    Unknown,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid(_))
    }

    pub fn witness(&self) -> Option<&Point> {
        match self {
            Verdict::Invalid(w) => Some(w),
            _ => None,
        }
    }
}

pub fn fmt_point(p: &Point) -> String {
    let parts: Vec<String> = p.iter().map(|(v, r)| format!("{v} = {}", fmt_rational(r))).collect();
    parts.join(", ")
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid(c) => write!(f, "valid ({c})"),
            Verdict::Invalid(w) => write!(f, "invalid at {}", fmt_point(w)),
            Verdict::Unknown => f.write_str("unknown"),
        }
    }
}

pub fn point_json(p: &Point) -> serde_json::Value {
    serde_json::Value::Object(p.iter().map(|(v, r)| (v.to_string(), fmt_rational(r).into())).collect())
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            Verdict::Valid(c) => {
                m.serialize_entry("verdict", "valid")?;
                m.serialize_entry("certificate", c)?;
            }
            Verdict::Invalid(w) => {
                m.serialize_entry("verdict", "invalid")?;
                m.serialize_entry("witness", &point_json(w))?;
            }
            Verdict::Unknown => m.serialize_entry("verdict", "unknown")?,
        }
        m.end()
    }
}

/// Does `point` (unassigned symbols read as 0) satisfy every assumption
/// and falsify the goal, under exact evaluation?
pub fn refutes(assumptions: &[Formula], goal: &Formula, point: &Point) -> bool {
    let mut full = point.clone();
    for f in assumptions.iter().chain(std::iter::once(goal)) {
        for v in f.vars() {
            full.entry(v).or_insert_with(Rational::zero);
        }
    }
    assumptions.iter().all(|a| matches!(a.eval(&full), Ok(true))) && matches!(goal.eval(&full), Ok(false))
}

/// Oracle parameters. All randomness derives from `seed`, reseeded on every
/// call, so verdicts do not depend on call history.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub seed: u64,
    pub grid_radius: i64,
    pub grid_cap: usize,
    pub random_samples: usize,
    pub max_magnitude: i64,
    pub max_branches: usize,
}

impl Default for Oracle {
    fn default() -> Oracle {
        Oracle { seed: 0, grid_radius: 5, grid_cap: 20_000, random_samples: 1_000, max_magnitude: 100, max_branches: 64 }
    }
}

pub fn decide(assumptions: &[Formula], goal: &Formula) -> Verdict {
    Oracle::default().decide(assumptions, goal)
}

enum Outcome {
    Proved(Certificate),
    Refuted(Point),
    Unknown,
}

/// A DNF branch after eliminating variables fixed by linear equations.
struct Branch {
    atoms: Vec<Atom>,
    goal: Formula,
    eliminated: Vec<(Var, Polynomial)>,
    closed: bool,
}

impl Branch {
    fn new(mut atoms: Vec<Atom>, goal: &Formula) -> Branch {
        let mut goal = goal.clone();
        let mut eliminated = Vec::new();
        while let Some((i, v, sub)) = atoms.iter().enumerate().find_map(|(i, a)| linear_solution(a).map(|(v, s)| (i, v, s))) {
            atoms.remove(i);
            let substituted: Result<Vec<Atom>, _> =
                atoms.iter().map(|a| a.poly.substitute(&v, &sub).map(|p| a.with_poly(p))).collect();
            let (Ok(next), Ok(g)) = (substituted, goal.substitute(&v, &sub)) else {
                break;
            };
            atoms = next;
            goal = g;
            eliminated.push((v, sub));
        }
        let mut closed = false;
        atoms.retain(|a| match a.constant_truth() {
            Some(true) => false,
            Some(false) => {
                closed = true;
                true
            }
            None => true,
        });
        atoms.sort();
        atoms.dedup();
        Branch { atoms, goal, eliminated, closed }
    }

    fn vars(&self) -> Vec<Var> {
        let mut vs: BTreeSet<Var> = self.goal.vars();
        for a in &self.atoms {
            vs.extend(a.poly.vars());
        }
        vs.into_iter().collect()
    }

    /// Extends a witness of the reduced branch to the eliminated variables.
    fn lift(&self, mut w: Point) -> Point {
        for (v, sub) in self.eliminated.iter().rev() {
            for u in sub.vars() {
                w.entry(u).or_insert_with(Rational::zero);
            }
            let val = sub.eval(&w).expect("all variables assigned");
            w.insert(v.clone(), val);
        }
        w
    }
}

/// `a*v + r = 0` with constant `a` and `v` absent from `r` gives `v := -r/a`.
fn linear_solution(a: &Atom) -> Option<(Var, Polynomial)> {
    if a.rel != Rel::Eq {
        return None;
    }
    for v in a.poly.vars() {
        if a.poly.degree_in(&v) != 1 {
            continue;
        }
        let coeff = a.poly.coefficient(&crate::terms::Monomial::var(v.clone()));
        if coeff.is_zero() {
            continue;
        }
        let rest = &a.poly - &Polynomial::term(coeff.clone(), crate::terms::Monomial::var(v.clone()));
        if rest.degree_in(&v) == 0 {
            return Some((v, rest.scale(&(-Rational::from_integer(1.into()) / coeff))));
        }
    }
    None
}

fn propositional_tautology(assumptions: &[Formula], goal: &Formula) -> bool {
    let mut letters: Vec<&Atom> = assumptions.iter().flat_map(|f| f.atoms()).chain(goal.atoms()).collect();
    letters.sort();
    letters.dedup();
    if letters.len() > 16 {
        return false;
    }
    (0u32..(1 << letters.len())).all(|mask| {
        let val = |a: &Atom| mask & (1 << letters.binary_search(&a).expect("letter")) != 0;
        !assumptions.iter().all(|f| prop_eval(f, &val)) || prop_eval(goal, &val)
    })
}

/// Distributes disjunctive assumptions. Disjunctions that would push the
/// branch count past `cap` are dropped (a sound weakening).
fn dnf(assumptions: &[Formula], cap: usize) -> Vec<Vec<Atom>> {
    fn branches_of(f: &Formula, cap: usize) -> Option<Vec<Vec<Atom>>> {
        match f {
            Formula::True => Some(vec![vec![]]),
            Formula::False => Some(vec![]),
            Formula::Atom(a) => Some(vec![vec![a.clone()]]),
            Formula::And(a, b) => {
                let (l, r) = (branches_of(a, cap)?, branches_of(b, cap)?);
                if l.len() * r.len() > cap {
                    return None;
                }
                Some(l.iter().flat_map(|x| r.iter().map(move |y| [x.clone(), y.clone()].concat())).collect())
            }
            Formula::Or(a, b) => {
                let mut l = branches_of(a, cap)?;
                l.extend(branches_of(b, cap)?);
                (l.len() <= cap).then_some(l)
            }
        }
    }
    let mut out: Vec<Vec<Atom>> = vec![vec![]];
    for f in assumptions.iter().flat_map(|f| f.conjuncts()) {
        let Some(bs) = branches_of(f, cap) else { continue };
        if out.len() * bs.len().max(1) > cap {
            continue;
        }
        out = out.iter().flat_map(|x| bs.iter().map(move |y| [x.clone(), y.clone()].concat())).collect();
    }
    out
}

/// Equations implied by a branch: `p = 0`; `p >= 0` with `-p` a sum of
/// squares; `p >= 0` together with `-p >= 0`.
fn implied_equations(atoms: &[Atom]) -> Vec<Polynomial> {
    let mut eqs = Vec::new();
    for a in atoms {
        match a.rel {
            Rel::Eq => eqs.push(a.poly.clone()),
            Rel::Geq => {
                let neg = -&a.poly;
                if let Some(h) = square_part(&neg) {
                    eqs.push(h);
                } else if sign_of(&neg, &Facts::new()).entails(Rel::Geq)
                    || atoms.iter().any(|b| b.rel == Rel::Geq && b.poly == neg)
                {
                    eqs.push(a.poly.clone());
                }
            }
            Rel::Gt => {}
        }
    }
    eqs.sort();
    eqs.dedup();
    eqs
}

/// `h` with `p = c*h^2` for some constant `c > 0`.
fn square_part(p: &Polynomial) -> Option<Polynomial> {
    let (_, lc) = p.leading_monomial_lex(&[]).ok()?;
    if !lc.is_positive() || p.is_constant() {
        return None;
    }
    p.scale(&(Rational::from_integer(1.into()) / lc)).sqrt()
}

fn constant_entails(c: &Rational, rel: Rel) -> bool {
    match rel {
        Rel::Eq => c.is_zero(),
        Rel::Geq => !c.is_negative(),
        Rel::Gt => c.is_positive(),
    }
}

impl Oracle {
    pub fn with_seed(seed: u64) -> Oracle {
        Oracle { seed, ..Oracle::default() }
    }

    pub fn decide(&self, assumptions: &[Formula], goal: &Formula) -> Verdict {
        let v = self.decide_inner(assumptions, goal);
        if let Verdict::Invalid(w) = &v {
            debug_assert!(refutes(assumptions, goal, w), "witness does not refute the sequent");
        }
        v
    }

    fn decide_inner(&self, assumptions: &[Formula], goal: &Formula) -> Verdict {
        if propositional_tautology(assumptions, goal) {
            return Verdict::Valid(Certificate::Propositional);
        }
        let mut cert = Certificate::Propositional;
        let mut open = Vec::new();
        for atoms in dnf(assumptions, self.max_branches) {
            let b = Branch::new(atoms, goal);
            if b.closed {
                continue;
            }
            if let Some(w) = self.witness(&b, true) {
                let w = b.lift(w);
                if refutes(assumptions, goal, &w) {
                    return Verdict::Invalid(w);
                }
            }
            match prove_goal(&b.atoms, &b.goal) {
                Outcome::Proved(c) => cert = cert.max(c),
                Outcome::Refuted(w) => {
                    let w = b.lift(w);
                    if refutes(assumptions, goal, &w) {
                        return Verdict::Invalid(w);
                    }
                    open.push(b);
                }
                Outcome::Unknown => match refute_branch(&b.atoms) {
                    Some(c) => cert = cert.max(c),
                    None => open.push(b),
                },
            }
        }
        if open.is_empty() {
            return Verdict::Valid(cert);
        }
        for b in &open {
            if let Some(w) = self.witness(b, false) {
                let w = b.lift(w);
                if refutes(assumptions, goal, &w) {
                    return Verdict::Invalid(w);
                }
            }
        }
        Verdict::Unknown
    }

    fn witness(&self, b: &Branch, quick: bool) -> Option<Point> {
        let vars = b.vars();
        let assumptions = Formula::conj(b.atoms.iter().cloned().map(Formula::Atom));
        let s = search::WitnessSearch { vars: &vars, assumptions: &assumptions, goal: &b.goal };
        if quick {
            s.run(2.min(self.grid_radius), 600, 0, self.max_magnitude, self.seed)
        } else {
            s.run(self.grid_radius, self.grid_cap, self.random_samples, self.max_magnitude, self.seed)
        }
    }
}

fn prove_goal(atoms: &[Atom], goal: &Formula) -> Outcome {
    match goal {
        Formula::True => Outcome::Proved(Certificate::Propositional),
        Formula::False => Outcome::Unknown,
        Formula::Atom(a) => prove_atom(atoms, a),
        Formula::And(l, r) => match prove_goal(atoms, l) {
            Outcome::Proved(c1) => match prove_goal(atoms, r) {
                Outcome::Proved(c2) => Outcome::Proved(c1.max(c2)),
                other => other,
            },
            Outcome::Refuted(w) => Outcome::Refuted(w),
            Outcome::Unknown => match prove_goal(atoms, r) {
                Outcome::Refuted(w) => Outcome::Refuted(w),
                _ => Outcome::Unknown,
            },
        },
        Formula::Or(l, r) => {
            if let Outcome::Proved(c) = prove_goal(atoms, l) {
                return Outcome::Proved(c);
            }
            match prove_goal(atoms, r) {
                Outcome::Proved(c) => Outcome::Proved(c),
                _ => Outcome::Unknown,
            }
        }
    }
}

/// Tries to show the branch itself is unsatisfiable by proving the
/// negation of one of its inequalities from the others.
fn refute_branch(atoms: &[Atom]) -> Option<Certificate> {
    for (i, a) in atoms.iter().enumerate() {
        let Some(neg) = a.negate() else { continue };
        let rest: Vec<Atom> = atoms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| b.clone()).collect();
        if let Outcome::Proved(c) = prove_atom(&rest, &neg) {
            return Some(c);
        }
    }
    None
}

fn prove_atom(atoms: &[Atom], goal: &Atom) -> Outcome {
    if atoms.contains(goal) {
        return Outcome::Proved(Certificate::Propositional);
    }
    if let Some(c) = goal.poly.constant_value() {
        if constant_entails(&c, goal.rel) {
            return Outcome::Proved(Certificate::Identity);
        }
    }

    // identity modulo implied equations
    let eqs = implied_equations(atoms);
    let mut reduced = goal.poly.clone();
    for e in &eqs {
        reduced = reduced.rem_lex(e);
    }
    if let Some(c) = reduced.constant_value() {
        if constant_entails(&c, goal.rel) {
            return Outcome::Proved(Certificate::Identity);
        }
    }
    if goal.rel != Rel::Gt {
        let sq = &goal.poly * &goal.poly;
        if eqs.iter().any(|e| sq.rem_lex(e).is_zero()) {
            return Outcome::Proved(Certificate::Identity);
        }
    }
    let candidates: Vec<&Polynomial> = if reduced == goal.poly { vec![&goal.poly] } else { vec![&goal.poly, &reduced] };

    let empty = Facts::new();
    if candidates.iter().any(|p| sign_of(p, &empty).entails(goal.rel)) {
        return Outcome::Proved(Certificate::EvenSign);
    }

    let facts = collect_facts(atoms);
    if facts.values().any(|s| s.is_empty()) {
        return Outcome::Proved(Certificate::AssumptionSign);
    }
    let signed: Vec<(Polynomial, SignSet)> = atoms.iter().map(|a| (a.poly.clone(), SignSet::of_rel(a.rel))).collect();
    if candidates.iter().any(|p| sign_with_factors(p, &facts, &signed, 2).entails(goal.rel)) {
        return Outcome::Proved(Certificate::AssumptionSign);
    }

    for p in &candidates {
        let Ok(Some(v)) = p.univariate_var() else { continue };
        let relevant: Vec<Atom> =
            atoms.iter().filter(|a| a.poly.vars().iter().all(|u| *u == v)).cloned().collect();
        let complete = relevant.len() == atoms.len();
        match decide_univariate(&v, &relevant, &goal.with_poly((*p).clone())) {
            UniOutcome::Valid => return Outcome::Proved(Certificate::Sturm),
            UniOutcome::Counterexample(r) if complete && *p == &goal.poly => {
                return Outcome::Refuted(Point::from([(v, r)]));
            }
            _ => {}
        }
    }
    Outcome::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::fml;
    use crate::terms::rat;

    fn fs(texts: &[&str]) -> Vec<Formula> {
        texts.iter().map(|t| fml(t)).collect()
    }

    #[test]
    fn reference_queries() {
        assert_eq!(decide(&[], &fml("0 >= 0")), Verdict::Valid(Certificate::Identity));
        assert_eq!(decide(&fs(&["w >= 0", "d >= 0"]), &fml("-4*d*w*y^2 <= 0")), Verdict::Valid(Certificate::AssumptionSign));
        let v = decide(&[], &fml("-2*(x-y)*(1-y) >= 0"));
        let w = v.witness().expect("refuted");
        assert!(refutes(&[], &fml("-2*(x-y)*(1-y) >= 0"), w));
        assert!(decide(&[], &fml("x^2 + 1 > 0")).is_valid());
    }

    #[test]
    fn propositional_tier() {
        assert_eq!(decide(&fs(&["x >= 0 & y >= 0"]), &fml("y >= 0 | z > 0")), Verdict::Valid(Certificate::Propositional));
        assert_eq!(decide(&fs(&["false"]), &fml("x > 0")), Verdict::Valid(Certificate::Propositional));
    }

    #[test]
    fn equations_in_assumptions() {
        assert_eq!(decide(&fs(&["x = 0"]), &fml("-x^2 >= 0")), Verdict::Valid(Certificate::Identity));
        assert_eq!(decide(&fs(&["-x^2 >= 0"]), &fml("x = 0")), Verdict::Valid(Certificate::Identity));
        let e = "x^2 + y^2 - c^2";
        assert!(decide(&fs(&[&format!("{e} = 0")]), &fml(&format!("-({e})^2 >= 0"))).is_valid());
        assert!(decide(&fs(&[&format!("-({e})^2 >= 0")]), &fml(&format!("{e} = 0"))).is_valid());
        assert!(decide(&fs(&[&format!("{e} >= 0 & -({e}) >= 0")]), &fml(&format!("{e} = 0"))).is_valid());
    }

    #[test]
    fn squared_bound_versus_interval() {
        assert!(decide(&fs(&["-5 <= x & x <= 5"]), &fml("x^2 <= 25")).is_valid());
        assert_eq!(decide(&fs(&["x^2 <= 25"]), &fml("-5 <= x & x <= 5")), Verdict::Valid(Certificate::Sturm));
        assert!(decide(&[], &fml("-x >= 0 & x >= 0")).is_invalid());
    }

    #[test]
    fn refutations_are_exact() {
        for (a, g) in [
            (vec![], "x >= 0"),
            (vec!["x > 0"], "x - 1/2 >= 0"),
            (vec!["x = y + 1"], "x*y > 0"),
            (vec!["x >= 0 | y >= 0"], "x + y >= 0"),
        ] {
            let a = fs(&a);
            let v = decide(&a, &fml(g));
            let w = v.witness().unwrap_or_else(|| panic!("{g}: {v}"));
            assert!(refutes(&a, &fml(g), w));
        }
    }

    #[test]
    fn open_premise_and_contradictions() {
        assert!(decide(&fs(&["x > 0"]), &fml("x >= 0")).is_valid());
        assert!(decide(&fs(&["x > 0", "-x > 0"]), &fml("y = 7")).is_valid());
        assert_eq!(decide(&fs(&["x*y^2 - 1 = 0"]), &fml("x > 0")), Verdict::Unknown);
    }

    #[test]
    fn linear_elimination_lifts_witnesses() {
        let a = fs(&["y = 2*x + 1"]);
        let v = decide(&a, &fml("y <= 0"));
        let w = v.witness().expect("refuted");
        assert_eq!(w[&Var::new("y")], rat(2) * &w[&Var::new("x")] + rat(1));
    }
}
