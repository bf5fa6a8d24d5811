//! Dense univariate polynomials, Sturm chains and an exact decision
//! procedure for univariate sequents.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;
use crate::formulas::{Atom, Rel};
use crate::terms::{Monomial, Polynomial, Rational, Var};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> UniPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_poly(p: &Polynomial, v: &Var) -> UniPoly {
        let mut c = vec![Rational::zero(); p.degree_in(v) as usize + 1];
        for (m, a) in p.terms() {
            c[m.degree_in(v) as usize] += a;
        }
        UniPoly::new(c)
    }

    pub fn to_poly(&self, v: &Var) -> Polynomial {
        Polynomial::from_terms(self.0.iter().enumerate().map(|(i, c)| {
            let m = Monomial::from_powers([(v.clone(), i as u32)]).expect("small exponent");
            (m, c.clone())
        }))
    }

    fn linear_root(r: &Rational) -> UniPoly {
        UniPoly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign(&self.eval(x))
    }

    /// Sign as the argument tends to +∞ (`positive`) or −∞.
    pub fn sign_at_infinity(&self, positive: bool) -> i8 {
        let s = sign(&self.lc());
        if positive || self.degree() % 2 == 0 {
            s
        } else {
            -s
        }
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(i.into())).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        let lc = d.lc();
        if r.len() < d.0.len() {
            return (UniPoly(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        UniPoly(self.0.iter().map(|c| c / &lc).collect())
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> UniPoly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Rational roots, by the rational root theorem. `None` when the
    /// coefficients are too large to enumerate divisors.
    pub fn rational_roots(&self) -> Option<BTreeSet<Rational>> {
        let mut out = BTreeSet::new();
        if self.degree() == 0 {
            return Some(out);
        }
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
        if low > 0 {
            out.insert(Rational::zero());
        }
        let a0 = ints[low].abs().to_u64()?;
        let an = ints.last().expect("nonzero").abs().to_u64()?;
        if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
            return None;
        }
        let (ps, qs) = (divisors(a0), divisors(an));
        for p in &ps {
            for q in &qs {
                for s in [1i64, -1] {
                    let r = Rational::new(BigInt::from(*p) * s, BigInt::from(*q));
                    if self.eval(&r).is_zero() {
                        out.insert(r);
                    }
                }
            }
        }
        Some(out)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn sign(r: &Rational) -> i8 {
    match r.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// `p, p', -rem(p, p'), ...` down to the last nonzero remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmChain {
    var: Option<Var>,
    seq: Vec<UniPoly>,
}

impl SturmChain {
    pub fn of(p: &UniPoly) -> SturmChain {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
            loop {
                let n = seq.len();
                let r = seq[n - 2].div_rem(&seq[n - 1]).1;
                if r.is_zero() {
                    break;
                }
                seq.push(r.neg());
            }
        }
        SturmChain { var: None, seq }
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        let v = self.var.clone().unwrap_or_else(|| Var::new("x"));
        self.seq.iter().map(|p| p.to_poly(&v)).collect()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    fn changes(signs: impl Iterator<Item = i8>) -> usize {
        let nz: Vec<i8> = signs.filter(|s| *s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn sign_changes_at(&self, x: &Rational) -> usize {
        Self::changes(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn sign_changes_at_infinity(&self, positive: bool) -> usize {
        Self::changes(self.seq.iter().map(|p| p.sign_at_infinity(positive)))
    }

    /// Distinct roots in `(a, b]`.
    pub fn roots_between(&self, a: &Rational, b: &Rational) -> usize {
        self.sign_changes_at(a).saturating_sub(self.sign_changes_at(b))
    }
}

pub fn sturm_chain(p: &Polynomial) -> Result<SturmChain, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let var = p.univariate_var().map_err(|_| ArithError::NotUnivariate)?;
    let u = match &var {
        Some(v) => UniPoly::from_poly(p, v),
        None => UniPoly::new(vec![p.constant_term()]),
    };
    let mut chain = SturmChain::of(&u);
    chain.var = var;
    Ok(chain)
}

/// Number of distinct real roots.
pub fn count_real_roots(chain: &SturmChain) -> usize {
    chain.sign_changes_at_infinity(false).saturating_sub(chain.sign_changes_at_infinity(true))
}

/// A split point of `(a, b)` that is not a root of `s`.
fn split_point(s: &UniPoly, a: &Rational, b: &Rational) -> Option<Rational> {
    let width = b - a;
    [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (4, 5), (2, 5), (3, 5)]
        .iter()
        .map(|(n, d)| a + &width * Rational::new(BigInt::from(*n), BigInt::from(*d)))
        .find(|m| !s.eval(m).is_zero())
}

/// Disjoint isolating intervals `(a, b)` with non-root endpoints, one per
/// real root of the squarefree polynomial `s`, in increasing order.
fn isolate(s: &UniPoly, chain: &SturmChain) -> Option<Vec<(Rational, Rational)>> {
    if s.degree() == 0 {
        return Some(Vec::new());
    }
    let lc = s.lc();
    let bound = Rational::one() + s.0.iter().map(|c| (c / &lc).abs()).max().expect("nonempty");
    let mut stack = vec![(-bound.clone(), bound)];
    let mut out = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match chain.roots_between(&a, &b) {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let m = split_point(s, &a, &b)?;
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Some(out)
}

/// Shrinks an isolating interval until its closure avoids `r` (not a root).
fn exclude(s: &UniPoly, chain: &SturmChain, mut iv: (Rational, Rational), r: &Rational) -> Option<(Rational, Rational)> {
    while iv.0 <= *r && *r <= iv.1 {
        let m = split_point(s, &iv.0, &iv.1)?;
        iv = if chain.roots_between(&iv.0, &m) == 1 { (iv.0, m) } else { (m, iv.1) };
    }
    Some(iv)
}

#[derive(Debug, Clone)]
enum Sample {
    Exact(Rational),
    Algebraic(Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniOutcome {
    Valid,
    Counterexample(Rational),
    /// Every counterexample is irrational.
    IrrationalCounterexample,
    Unknown,
}

/// Decides `∧ assumptions → goal` where every atom is univariate in `v`.
pub fn decide_univariate(v: &Var, assumptions: &[Atom], goal: &Atom) -> UniOutcome {
    let mut polys: Vec<UniPoly> = Vec::new();
    for a in assumptions.iter().chain(std::iter::once(goal)) {
        let u = UniPoly::from_poly(&a.poly, v);
        if u.degree() >= 1 && !polys.contains(&u) {
            polys.push(u);
        }
    }
    let mut rational: BTreeSet<Rational> = BTreeSet::new();
    let mut product = UniPoly::new(vec![Rational::one()]);
    for p in &polys {
        if let Some(rs) = p.rational_roots() {
            rational.extend(rs);
        }
        product = product.mul(&p.squarefree());
    }
    let mut s = product.squarefree();
    for r in &rational {
        let (q, rem) = s.div_rem(&UniPoly::linear_root(r));
        if rem.is_zero() {
            s = q;
        }
    }
    let chain = SturmChain::of(&s);
    let Some(intervals) = isolate(&s, &chain) else {
        return UniOutcome::Unknown;
    };
    let mut roots: Vec<Sample> = rational.iter().cloned().map(Sample::Exact).collect();
    for iv in intervals {
        let mut iv = Some(iv);
        for r in &rational {
            iv = iv.and_then(|iv| exclude(&s, &chain, iv, r));
        }
        match iv {
            Some((a, b)) => roots.push(Sample::Algebraic(a, b)),
            None => return UniOutcome::Unknown,
        }
    }
    let lower = |x: &Sample| match x {
        Sample::Exact(r) => r.clone(),
        Sample::Algebraic(a, _) => a.clone(),
    };
    let upper = |x: &Sample| match x {
        Sample::Exact(r) => r.clone(),
        Sample::Algebraic(_, b) => b.clone(),
    };
    roots.sort_by_key(|x| lower(x));

    let mut points: Vec<Sample> = Vec::new();
    match (roots.first(), roots.last()) {
        (Some(first), Some(last)) => {
            points.push(Sample::Exact(lower(first) - Rational::one()));
            for w in roots.windows(2) {
                points.push(Sample::Exact((upper(&w[0]) + lower(&w[1])) / Rational::from_integer(2.into())));
            }
            points.push(Sample::Exact(upper(last) + Rational::one()));
        }
        _ => points.push(Sample::Exact(Rational::zero())),
    }
    points.extend(roots);

    let sign_at = |p: &Polynomial, x: &Sample| -> i8 {
        let u = UniPoly::from_poly(p, v);
        match x {
            Sample::Exact(r) => u.sign_at(r),
            Sample::Algebraic(a, b) => {
                if u.degree() == 0 {
                    return sign(&u.lc());
                }
                let g = u.gcd(&s);
                if g.degree() >= 1 && SturmChain::of(&g).roots_between(a, b) > 0 {
                    0
                } else {
                    u.sign_at(a)
                }
            }
        }
    };
    let holds = |a: &Atom, x: &Sample| -> bool {
        let sg = sign_at(&a.poly, x);
        match a.rel {
            Rel::Eq => sg == 0,
            Rel::Geq => sg >= 0,
            Rel::Gt => sg > 0,
        }
    };
    let mut irrational = false;
    for x in &points {
        if assumptions.iter().all(|a| holds(a, x)) && !holds(goal, x) {
            match x {
                Sample::Exact(r) => return UniOutcome::Counterexample(r.clone()),
                Sample::Algebraic(..) => irrational = true,
            }
        }
    }
    if irrational {
        UniOutcome::IrrationalCounterexample
    } else {
        UniOutcome::Valid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::fml;
    use crate::terms::{poly, rat};

    fn chain_text(p: &str) -> Vec<String> {
        sturm_chain(&poly(p)).unwrap().polys().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn chains() {
        assert_eq!(chain_text("x^2 - 1"), ["x^2 - 1", "2*x", "1"]);
        assert_eq!(chain_text("x^2 + 1"), ["x^2 + 1", "2*x", "-1"]);
        assert_eq!(chain_text("x"), ["x", "1"]);
        assert_eq!(sturm_chain(&Polynomial::zero()), Err(ArithError::ZeroPolynomial));
        assert_eq!(sturm_chain(&poly("x*y")), Err(ArithError::NotUnivariate));
    }

    #[test]
    fn root_counts() {
        let n = |p: &str| count_real_roots(&sturm_chain(&poly(p)).unwrap());
        assert_eq!(n("x^2 - 1"), 2);
        assert_eq!(n("x^2 + 1"), 0);
        assert_eq!(n("x^3 - x"), 3);
        assert_eq!(n("(x-1)^2*(x+2)"), 2);
    }

    fn atom(text: &str) -> Atom {
        fml(text).atoms()[0].clone()
    }

    #[test]
    fn univariate_decisions() {
        let x = Var::new("x");
        assert_eq!(decide_univariate(&x, &[], &atom("x^2 + 1 > 0")), UniOutcome::Valid);
        assert_eq!(decide_univariate(&x, &[atom("x^2 <= 25")], &atom("x >= -5")), UniOutcome::Valid);
        assert_eq!(decide_univariate(&x, &[atom("x^2 <= 25")], &atom("x <= 5")), UniOutcome::Valid);
        match decide_univariate(&x, &[atom("x^2 <= 25")], &atom("x <= 4")) {
            UniOutcome::Counterexample(r) => assert!(r > rat(4) && &r * &r <= rat(25)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            decide_univariate(&x, &[], &atom("(x^2 - 2)^2 > 0")),
            UniOutcome::IrrationalCounterexample
        );
        match decide_univariate(&x, &[atom("x > 0")], &atom("2*x - 1 >= 0")) {
            UniOutcome::Counterexample(r) => assert!(r > rat(0) && r < crate::terms::ratio(1, 2)),
            other => panic!("{other:?}"),
        }
        assert_eq!(decide_univariate(&x, &[atom("x^2 - 2 = 0"), atom("x > 0")], &atom("x > 1")), UniOutcome::Valid);
    }
}
