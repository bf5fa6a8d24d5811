//! Exact multivariate polynomials over the rationals.

mod compiled;
mod parse;

pub use compiled::CompiledPoly;
pub use parse::{parse_polynomial, ParseError, Parser, Token, TokenKind};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

/// An assignment of exact values to variables.
pub type Point = BTreeMap<Var, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("no value assigned to `{0}`")]
    MissingAssignment(Var),
    #[error("polynomial is not univariate")]
    NotUnivariate,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

/// Variable or symbolic constant. Ordered by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Var::new(&s))
    }
}

/// Power product; zero exponents are never stored.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn from_powers<I: IntoIterator<Item = (Var, u32)>>(powers: I) -> Result<Monomial, TermError> {
        let mut m = BTreeMap::new();
        for (v, e) in powers {
            if e == 0 {
                continue;
            }
            let slot = m.entry(v).or_insert(0u32);
            *slot = slot.checked_add(e).ok_or(TermError::ExponentOverflow)?;
        }
        Ok(Monomial(m))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<Var, u32> {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.values().map(|&e| e as u64).sum()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    /// True when every exponent is even (the monomial is a square).
    pub fn is_even(&self) -> bool {
        self.0.values().all(|e| e % 2 == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            let slot = m.entry(v.clone()).or_insert(0);
            *slot = slot.checked_add(*e)?;
        }
        Some(Monomial(m))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| other.degree_in(v) >= *e)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            let slot = m.get_mut(v).expect("divisor variable present");
            *slot -= e;
            if *slot == 0 {
                m.remove(v);
            }
        }
        Some(Monomial(m))
    }

    fn derivative(&self, v: &Var) -> Option<(u32, Monomial)> {
        let e = *self.0.get(v)?;
        let mut m = self.0.clone();
        if e == 1 {
            m.remove(v);
        } else {
            m.insert(v.clone(), e - 1);
        }
        Some((e, Monomial(m)))
    }

    /// Lexicographic comparison; variables listed in `order` take precedence
    /// (first is largest), the rest follow alphabetically.
    pub fn cmp_lex(&self, other: &Monomial, order: &[Var]) -> Ordering {
        for v in order {
            match self.degree_in(v).cmp(&other.degree_in(v)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        let mut a = self.0.iter().filter(|(v, _)| !order.contains(v));
        let mut b = other.0.iter().filter(|(v, _)| !order.contains(v));
        let (mut x, mut y) = (a.next(), b.next());
        loop {
            match (x, y) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        x = a.next();
                        y = b.next();
                    }
                },
            }
        }
    }

    /// Graded lexicographic comparison with alphabetical precedence.
    pub fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.cmp_lex(other, &[]))
    }

    pub fn eval(&self, point: &Point) -> Result<Rational, TermError> {
        let mut acc = Rational::one();
        for (v, e) in &self.0 {
            let x = point.get(v).ok_or_else(|| TermError::MissingAssignment(v.clone()))?;
            acc *= num_traits::pow(x.clone(), *e as usize);
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical sparse polynomial: no zero coefficients are stored.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Polynomial {
        Polynomial::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Polynomial {
        Polynomial::constant(rat(n))
    }

    pub fn var(v: Var) -> Polynomial {
        Polynomial::term(Rational::one(), Monomial::var(v))
    }

    pub fn named(name: &str) -> Polynomial {
        Polynomial::var(Var::new(name))
    }

    pub fn term(c: Rational, m: Monomial) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, TermError> {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb).ok_or(TermError::ExponentOverflow)?;
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial, TermError> {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, v: &Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derivative(v) {
                out.add_term(dm, c * rat(e as i64));
            }
        }
        out
    }

    pub fn eval(&self, point: &Point) -> Result<Rational, TermError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(point)?;
        }
        Ok(acc)
    }

    /// Replaces every occurrence of `v` by `q`.
    pub fn substitute(&self, v: &Var, q: &Polynomial) -> Result<Polynomial, TermError> {
        let mut out = Polynomial::zero();
        let mut powers: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.degree_in(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let qe = match powers.get(&e) {
                Some(p) => p.clone(),
                None => {
                    let p = q.pow(e)?;
                    powers.insert(e, p.clone());
                    p
                }
            };
            let mut rest = m.clone();
            rest.0.remove(v);
            let part = Polynomial::term(c.clone(), rest).checked_mul(&qe)?;
            out = out + part;
        }
        Ok(out)
    }

    /// Leading term under the lexicographic order given by `order`
    /// (remaining variables alphabetical).
    pub fn leading_monomial_lex(&self, order: &[Var]) -> Result<(Monomial, Rational), TermError> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.cmp_lex(b.0, order))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(TermError::ZeroPolynomial)
    }

    /// Leading term under graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_grlex(b.0))
    }

    /// Remainder of division by `d` with respect to the alphabetical
    /// lexicographic order. Zero iff `d` divides `self`.
    pub fn rem_lex(&self, d: &Polynomial) -> Polynomial {
        self.div_rem_lex(d).1
    }

    pub fn div_rem_lex(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let Ok((ld, lc)) = d.leading_monomial_lex(&[]) else {
            return (Polynomial::zero(), self.clone());
        };
        let mut p = self.clone();
        let mut q = Polynomial::zero();
        let mut r = Polynomial::zero();
        while let Ok((lm, c)) = p.leading_monomial_lex(&[]) {
            match lm.checked_div(&ld) {
                Some(m) => {
                    let t = Polynomial::term(c / &lc, m);
                    p = p - t.clone() * d.clone();
                    q = q + t;
                }
                None => {
                    let t = Polynomial::term(c, lm);
                    p = p - t.clone();
                    r = r + t;
                }
            }
        }
        (q, r)
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem_lex(d);
        r.is_zero().then_some(q)
    }

    /// `h` with `h^2 = self`, when one with rational coefficients exists.
    pub fn sqrt(&self) -> Option<Polynomial> {
        fn sqrt_rat(c: &Rational) -> Option<Rational> {
            if c.is_negative() {
                return None;
            }
            let (n, d) = (c.numer().sqrt(), c.denom().sqrt());
            (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| Rational::new(n, d))
        }
        fn sqrt_mono(m: &Monomial) -> Option<Monomial> {
            m.is_even().then(|| Monomial(m.0.iter().map(|(v, e)| (v.clone(), e / 2)).collect()))
        }
        let Ok((lm, lc)) = self.leading_monomial_lex(&[]) else {
            return Some(Polynomial::zero());
        };
        let head = Polynomial::term(sqrt_rat(&lc)?, sqrt_mono(&lm)?);
        let (hm, hc) = head.leading_monomial_lex(&[]).ok()?;
        let mut h = head;
        for _ in 0..=self.num_terms() {
            let r = self - &(&h * &h);
            let Ok((rm, rc)) = r.leading_monomial_lex(&[]) else {
                return Some(h);
            };
            let m = rm.checked_div(&hm)?;
            if m.cmp_lex(&hm, &[]) != Ordering::Less {
                return None;
            }
            h = h + Polynomial::term(rc / (&hc * rat(2)), m);
        }
        None
    }

    /// The single variable of a non-constant univariate polynomial.
    pub fn univariate_var(&self) -> Result<Option<Var>, TermError> {
        let vars = self.vars();
        match vars.len() {
            0 => Ok(None),
            1 => Ok(vars.into_iter().next()),
            _ => Err(TermError::NotUnivariate),
        }
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn to_f64_terms(&self) -> Vec<(f64, Vec<(Var, u32)>)> {
        self.terms
            .iter()
            .map(|(m, c)| (rational_to_f64(c), m.0.iter().map(|(v, e)| (v.clone(), *e)).collect()))
            .collect()
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.clone() + rhs.clone()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.clone() - rhs.clone()
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self.checked_mul(&rhs).expect("exponent overflow in polynomial product")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("exponent overflow in polynomial product")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by(|a, b| b.0.cmp_grlex(a.0));
        for (i, (m, c)) in order.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_polynomial(&s).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Polynomial {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

/// Shorthand used throughout tests and examples; panics on bad input.
pub fn poly(text: &str) -> Polynomial {
    parse_polynomial(text).unwrap_or_else(|e| panic!("bad polynomial `{text}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_inverse_and_example_sum() {
        assert!((poly("x") + poly("-x")).is_zero());
        assert_eq!(poly("x^2+1") + poly("y^2"), poly("x^2+y^2+1"));
        assert!((poly("2*x*y") + poly("2*y*(-x)")).is_zero());
    }

    #[test]
    fn products() {
        assert_eq!(poly("x-y") * poly("x-y"), poly("x^2-2*x*y+y^2"));
        assert!((Polynomial::zero() * poly("x^3+y")).is_zero());
        let (p1, p2, q1, q2) = (poly("x"), Polynomial::zero(), poly("y"), Polynomial::zero());
        assert_eq!((p1 - p2) * (q1 - q2), poly("x*y"));
    }

    #[test]
    fn partials() {
        let x = Var::new("x");
        let y = Var::new("y");
        assert_eq!(poly("x^2+y^2").partial_derivative(&x), poly("2*x"));
        assert!(poly("7/3").partial_derivative(&x).is_zero());
        assert_eq!(poly("x*y^2").partial_derivative(&y), poly("2*x*y"));
    }

    #[test]
    fn evaluation() {
        let pt = |pairs: &[(&str, i64)]| -> Point { pairs.iter().map(|(v, n)| (Var::new(v), rat(*n))).collect() };
        assert_eq!(poly("x^2+y^2").eval(&pt(&[("x", 3), ("y", 4)])).unwrap(), rat(25));
        assert_eq!(poly("-2*(x-y)*(1-y)").eval(&pt(&[("x", 2), ("y", 0)])).unwrap(), rat(-4));
        assert_eq!(Polynomial::zero().eval(&Point::new()).unwrap(), rat(0));
        assert_eq!(
            poly("x+z").eval(&pt(&[("x", 1)])),
            Err(TermError::MissingAssignment(Var::new("z")))
        );
    }

    #[test]
    fn lex_leading_terms() {
        let order = [Var::new("x"), Var::new("y")];
        let (m, c) = poly("3*x^2*y + x^3").leading_monomial_lex(&order).unwrap();
        assert_eq!((m.to_string(), c), ("x^3".to_string(), rat(1)));
        let (m, c) = poly("2*x*y^4 + 3*x^2*y^2").leading_monomial_lex(&order).unwrap();
        assert_eq!((m.to_string(), c), ("x^2*y^2".to_string(), rat(3)));
        let (m, c) = poly("5").leading_monomial_lex(&order).unwrap();
        assert_eq!((m, c), (Monomial::one(), rat(5)));
        assert_eq!(Polynomial::zero().leading_monomial_lex(&order), Err(TermError::ZeroPolynomial));
        // precedence list overrides the alphabetical default
        let (m, _) = poly("x + y^2").leading_monomial_lex(&[Var::new("y")]).unwrap();
        assert_eq!(m.to_string(), "y^2");
    }

    #[test]
    fn square_roots() {
        assert_eq!(poly("(x^2 + y^2 - c^2)^2").sqrt(), Some(poly("c^2 - x^2 - y^2")));
        assert_eq!(poly("4/9*x^2").sqrt(), Some(poly("2/3*x")));
        assert_eq!(poly("x^2 + 1").sqrt(), None);
        assert_eq!(poly("-x^2").sqrt(), None);
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let big = Polynomial::term(rat(1), Monomial::from_powers([(Var::new("x"), u32::MAX)]).unwrap());
        assert_eq!(big.checked_mul(&poly("x")), Err(TermError::ExponentOverflow));
        assert!(poly("x").pow(u32::MAX).is_ok());
        assert!(poly("x^2").pow(u32::MAX).is_err());
    }

    #[test]
    fn display_is_graded_and_compact() {
        assert_eq!(poly("-4*d*w*y^2").to_string(), "-4*d*w*y^2");
        assert_eq!(poly("y/2").to_string(), "1/2*y");
        assert_eq!(poly("-2*(x-y)*(1-y)").to_string(), "2*x*y - 2*y^2 - 2*x + 2*y");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(poly("x^2+y^2-p^2").to_string(), "-p^2 + x^2 + y^2");
    }

    #[test]
    fn division() {
        let e = poly("x^2+y^2-c^2");
        assert!((e.clone() * poly("x-3")).rem_lex(&e).is_zero());
        assert_eq!(poly("25-x^2").div_exact(&poly("5-x")), Some(poly("5+x")));
        assert_eq!(poly("x").div_exact(&poly("x*y^2-1")), None);
    }

    #[test]
    fn substitution() {
        let r = poly("x^2*y + x").substitute(&Var::new("x"), &poly("y+1")).unwrap();
        assert_eq!(r, poly("(y+1)^2*y + y + 1"));
    }
}
