//! Sign inference over monomials and assumption factors.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::formulas::{Atom, Rel};
use crate::terms::{Polynomial, Rational, Var};

/// The set of signs a quantity may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignSet {
    pub neg: bool,
    pub zero: bool,
    pub pos: bool,
}

impl SignSet {
    pub const ANY: SignSet = SignSet { neg: true, zero: true, pos: true };
    pub const POS: SignSet = SignSet { neg: false, zero: false, pos: true };
    pub const NEG: SignSet = SignSet { neg: true, zero: false, pos: false };
    pub const ZERO: SignSet = SignSet { neg: false, zero: true, pos: false };
    pub const NONNEG: SignSet = SignSet { neg: false, zero: true, pos: true };
    pub const NONPOS: SignSet = SignSet { neg: true, zero: true, pos: false };
    pub const NONZERO: SignSet = SignSet { neg: true, zero: false, pos: true };

    pub fn of(c: &Rational) -> SignSet {
        if c.is_zero() {
            Self::ZERO
        } else if c.is_positive() {
            Self::POS
        } else {
            Self::NEG
        }
    }

    pub fn of_rel(rel: Rel) -> SignSet {
        match rel {
            Rel::Eq => Self::ZERO,
            Rel::Geq => Self::NONNEG,
            Rel::Gt => Self::POS,
        }
    }

    pub fn is_empty(self) -> bool {
        !(self.neg || self.zero || self.pos)
    }

    pub fn intersect(self, o: SignSet) -> SignSet {
        SignSet { neg: self.neg && o.neg, zero: self.zero && o.zero, pos: self.pos && o.pos }
    }

    pub fn negate(self) -> SignSet {
        SignSet { neg: self.pos, zero: self.zero, pos: self.neg }
    }

    pub fn mul(self, o: SignSet) -> SignSet {
        if self.is_empty() || o.is_empty() {
            return SignSet { neg: false, zero: false, pos: false };
        }
        SignSet {
            neg: (self.neg && o.pos) || (self.pos && o.neg),
            zero: self.zero || o.zero,
            pos: (self.pos && o.pos) || (self.neg && o.neg),
        }
    }

    pub fn add(self, o: SignSet) -> SignSet {
        if self.is_empty() || o.is_empty() {
            return SignSet { neg: false, zero: false, pos: false };
        }
        SignSet {
            neg: self.neg || o.neg,
            zero: (self.zero && o.zero) || (self.neg && o.pos) || (self.pos && o.neg),
            pos: self.pos || o.pos,
        }
    }

    pub fn pow(self, e: u32) -> SignSet {
        if e == 0 {
            return Self::POS;
        }
        if e % 2 == 1 {
            return self;
        }
        SignSet { neg: false, zero: self.zero, pos: self.neg || self.pos }
    }

    /// Every value with a sign in this set satisfies `v rel 0`.
    pub fn entails(self, rel: Rel) -> bool {
        match rel {
            Rel::Eq => !self.neg && !self.pos,
            Rel::Geq => !self.neg,
            Rel::Gt => !self.neg && !self.zero,
        }
    }
}

pub type Facts = BTreeMap<Var, SignSet>;

/// Sign of a polynomial from the signs of its variables, term by term.
pub fn sign_of(p: &Polynomial, facts: &Facts) -> SignSet {
    let mut acc = SignSet::ZERO;
    for (m, c) in p.terms() {
        let mut t = SignSet::of(c);
        for (v, e) in m.exponents() {
            t = t.mul(facts.get(v).copied().unwrap_or(SignSet::ANY).pow(*e));
        }
        acc = acc.add(t);
    }
    acc
}

/// Sign facts about single variables implied by an atom.
pub fn variable_fact(a: &Atom) -> Option<(Var, SignSet)> {
    let vars = a.poly.vars();
    if vars.len() != 1 {
        return None;
    }
    let v = vars.into_iter().next().expect("one variable");
    if a.poly.num_terms() == 1 {
        let (m, c) = a.poly.terms().next().expect("one term");
        let e = m.degree_in(&v);
        let base = SignSet::of_rel(a.rel);
        // c * v^e rel 0
        let scaled = if c.is_positive() { base } else { base.negate() };
        let set = if e % 2 == 1 {
            scaled
        } else {
            match a.rel {
                Rel::Eq => SignSet::ZERO,
                Rel::Gt if c.is_positive() => SignSet::NONZERO,
                Rel::Geq if c.is_negative() => SignSet::ZERO,
                _ => return None,
            }
        };
        return Some((v, set));
    }
    if a.poly.total_degree() == 1 && a.poly.num_terms() == 2 {
        // a*v + b rel 0, i.e. v compared with the bound -b/a
        let lead = a.poly.coefficient(&crate::terms::Monomial::var(v.clone()));
        let bound = -a.poly.constant_term() / &lead;
        let upper = lead.is_negative();
        let strict = a.rel == Rel::Gt;
        let set = match (a.rel, upper) {
            (Rel::Eq, _) => SignSet::of(&bound),
            (_, false) if bound.is_positive() || (bound.is_zero() && strict) => SignSet::POS,
            (_, false) if bound.is_zero() => SignSet::NONNEG,
            (_, true) if bound.is_negative() || (bound.is_zero() && strict) => SignSet::NEG,
            (_, true) if bound.is_zero() => SignSet::NONPOS,
            _ => return None,
        };
        return Some((v, set));
    }
    None
}

pub fn collect_facts(atoms: &[Atom]) -> Facts {
    let mut facts = Facts::new();
    for a in atoms {
        if let Some((v, s)) = variable_fact(a) {
            let slot = facts.entry(v).or_insert(SignSet::ANY);
            *slot = slot.intersect(s);
        }
    }
    facts
}

/// Sign of `p`, sharpened by factoring out assumption polynomials of known
/// sign (at most `depth` of them).
pub fn sign_with_factors(p: &Polynomial, facts: &Facts, signed: &[(Polynomial, SignSet)], depth: usize) -> SignSet {
    let mut s = sign_of(p, facts);
    if depth == 0 || p.is_zero() {
        return s;
    }
    for (a, sa) in signed {
        if a.is_constant() || a.total_degree() > p.total_degree() {
            continue;
        }
        if let Some(q) = p.div_exact(a) {
            s = s.intersect(sa.mul(sign_with_factors(&q, facts, signed, depth - 1)));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::fml;
    use crate::terms::poly;

    fn atoms(text: &str) -> Vec<Atom> {
        fml(text).atoms().into_iter().cloned().collect()
    }

    #[test]
    fn even_monomials_are_nonnegative() {
        assert!(sign_of(&poly("2*x^2 + y^4"), &Facts::new()).entails(Rel::Geq));
        assert!(sign_of(&poly("x^2 + 1"), &Facts::new()).entails(Rel::Gt));
        assert!(!sign_of(&poly("x^2 - 1"), &Facts::new()).entails(Rel::Geq));
    }

    #[test]
    fn variable_facts_propagate_through_products() {
        let facts = collect_facts(&atoms("w >= 0 & d >= 0"));
        assert!(sign_of(&poly("4*d*w*y^2"), &facts).entails(Rel::Geq));
        let facts = collect_facts(&atoms("x - 1 >= 0"));
        assert_eq!(facts[&crate::terms::Var::new("x")], SignSet::POS);
    }

    #[test]
    fn factoring_by_assumptions() {
        let a = atoms("x + 5 >= 0 & 5 - x >= 0");
        let signed: Vec<_> = a.iter().map(|a| (a.poly.clone(), SignSet::of_rel(a.rel))).collect();
        let s = sign_with_factors(&poly("25 - x^2"), &Facts::new(), &signed, 2);
        assert!(s.entails(Rel::Geq));
    }
}
