use super::{Atom, Formula, Rel};
use crate::terms::{ParseError, Parser, TokenKind};

enum Surface {
    Lit(bool),
    Atom(Atom, usize),
    Not(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Iff(Box<Surface>, Box<Surface>),
}

impl Parser {
    /// formula := implication ('<->' implication)*
    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        let s = self.iff()?;
        nnf(&s, true)
    }

    fn iff(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&TokenKind::Iff) {
            let rhs = self.implication()?;
            lhs = Surface::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Surface, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&TokenKind::Implies) {
            let rhs = self.implication()?;
            return Ok(Surface::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&TokenKind::Or) {
            let rhs = self.conjunction()?;
            lhs = Surface::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.negation()?;
        while self.eat(&TokenKind::And) {
            let rhs = self.negation()?;
            lhs = Surface::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> Result<Surface, ParseError> {
        if self.eat(&TokenKind::Bang) {
            return Ok(Surface::Not(Box::new(self.negation()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Surface, ParseError> {
        if self.eat_keyword("true") {
            return Ok(Surface::Lit(true));
        }
        if self.eat_keyword("false") {
            return Ok(Surface::Lit(false));
        }
        let start = self.cursor;
        let cmp_err = match self.comparison() {
            Ok(a) => return Ok(a),
            Err(e) => e,
        };
        // a parenthesis may open a subformula rather than a term
        if self.kind_at(start) == Some(&TokenKind::LParen) {
            self.cursor = start + 1;
            if let Ok(inner) = self.iff() {
                if self.eat(&TokenKind::RParen) {
                    return Ok(inner);
                }
            }
        }
        self.cursor = start;
        Err(cmp_err)
    }

    fn comparison(&mut self) -> Result<Surface, ParseError> {
        let lhs = self.term()?;
        let pos = self.pos();
        let op = self.bump();
        let rhs_needed = |p: &mut Parser| p.term();
        let atom = match op {
            Some(TokenKind::Eq) => Atom::eq0(lhs - rhs_needed(self)?),
            Some(TokenKind::Ge) => Atom::geq0(lhs - rhs_needed(self)?),
            Some(TokenKind::Gt) => Atom::gt0(lhs - rhs_needed(self)?),
            Some(TokenKind::Le) => Atom { poly: rhs_needed(self)? - lhs, rel: Rel::Geq, flipped: true },
            Some(TokenKind::Lt) => Atom { poly: rhs_needed(self)? - lhs, rel: Rel::Gt, flipped: true },
            Some(TokenKind::Ne) => return Err(ParseError::UnsupportedOperator { pos, op: "!=".into() }),
            Some(_) => {
                self.cursor -= 1;
                return Err(self.unexpected("comparison operator"));
            }
            None => return Err(self.unexpected("comparison operator")),
        };
        Ok(Surface::Atom(atom, pos))
    }
}

fn nnf(s: &Surface, positive: bool) -> Result<Formula, ParseError> {
    Ok(match (s, positive) {
        (Surface::Lit(b), _) => {
            if *b == positive {
                Formula::True
            } else {
                Formula::False
            }
        }
        (Surface::Atom(a, _), true) => Formula::Atom(a.clone()),
        (Surface::Atom(a, pos), false) => match a.negate() {
            Some(n) => Formula::Atom(n),
            None => return Err(ParseError::UnsupportedOperator { pos: *pos, op: "negated equation (!=)".into() }),
        },
        (Surface::Not(inner), p) => nnf(inner, !p)?,
        (Surface::And(a, b), true) | (Surface::Or(a, b), false) => Formula::and(nnf(a, positive)?, nnf(b, positive)?),
        (Surface::Or(a, b), true) | (Surface::And(a, b), false) => Formula::or(nnf(a, positive)?, nnf(b, positive)?),
        (Surface::Implies(a, b), true) => Formula::or(nnf(a, false)?, nnf(b, true)?),
        (Surface::Implies(a, b), false) => Formula::and(nnf(a, true)?, nnf(b, false)?),
        (Surface::Iff(a, b), true) => Formula::and(
            Formula::or(nnf(a, false)?, nnf(b, true)?),
            Formula::or(nnf(b, false)?, nnf(a, true)?),
        ),
        (Surface::Iff(a, b), false) => Formula::or(
            Formula::and(nnf(a, true)?, nnf(b, false)?),
            Formula::and(nnf(a, false)?, nnf(b, true)?),
        ),
    })
}

/// Parses and ingests a formula: NNF, right-hand sides moved to zero.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::fml;
    use crate::terms::poly;

    fn single_atom(f: &Formula) -> &Atom {
        match f {
            Formula::Atom(a) => a,
            other => panic!("expected atom, got {other}"),
        }
    }

    #[test]
    fn ingestion_examples() {
        let f = fml("x^2+y^2 >= p^2");
        assert_eq!(single_atom(&f), &Atom::geq0(poly("x^2+y^2-p^2")));
        let f = fml("!(a >= b)");
        assert_eq!(single_atom(&f), &Atom::gt0(poly("b-a")));
        let f = fml("p <= q");
        assert_eq!(single_atom(&f), &Atom::geq0(poly("q-p")));
    }

    #[test]
    fn rejects_disequality_and_division() {
        assert!(matches!(parse_formula("x != 0"), Err(ParseError::UnsupportedOperator { .. })));
        assert!(matches!(parse_formula("!(x = 0)"), Err(ParseError::UnsupportedOperator { .. })));
        assert!(matches!(parse_formula("x/y > 0"), Err(ParseError::UnsupportedOperator { .. })));
        assert!(matches!(parse_formula("x >= "), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn parenthesised_terms_and_subformulas() {
        assert_eq!(fml("(x-y)^2 >= 0"), Formula::Atom(Atom::geq0(poly("(x-y)^2"))));
        assert_eq!(fml("(x >= 0 & y >= 0)"), fml("x >= 0 & y >= 0"));
        assert_eq!(fml("((x) >= 0)"), fml("x >= 0"));
    }

    #[test]
    fn implication_and_biimplication_are_eliminated() {
        assert_eq!(fml("x >= 0 -> y > 0"), fml("x < 0 | y > 0"));
        assert_eq!(fml("!(x >= 0 -> y > 0)"), fml("x >= 0 & y <= 0"));
        let f = fml("x > 0 <-> y > 0");
        assert!(crate::formulas::prop_equivalent(&f, &fml("(x <= 0 | y > 0) & (y <= 0 | x > 0)")));
        assert_eq!(fml("!true"), Formula::False);
    }
}
