//! Proof scripts: a nested directive language that expands into kernel
//! proof trees.
//!
//! ```text
//! cut y >= 0 { invariant y >= 0 } { invariant x >= 0 & y >= 0 }
//! aux y' = 1/2*y with x*y^2 = 1 { invariant x*y^2 = 1 }
//! ```

use std::fmt;

use thiserror::Error;

use crate::formulas::Formula;
use crate::kernel::{Fml, Kernel, KernelError, ProofNode, Rule, Sequent};
use crate::reduce::{ReduceError, Reduction};
use crate::terms::{ParseError, Parser, Polynomial, TokenKind, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Script {
    /// Prove `F` invariant (by DI unless a block is given) and conclude
    /// the goal from it.
    Invariant { formula: Formula, then: Option<Box<Script>> },
    OpenInvariant { formula: Formula },
    Weaken,
    /// Differential cut.
    Cut { cut: Formula, left: Box<Script>, right: Box<Script> },
    Aux { var: Var, rhs: Polynomial, psi: Formula, witness: Option<Polynomial>, assume_global: bool, body: Box<Script> },
    Generalize { formula: Formula, body: Box<Script> },
    UseReduction { reduction: Reduction, then: Option<Box<Script>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("`{directive}` needs a goal of the form Γ ⊢ [x' = θ & H]F, found {goal}")]
    NotModal { directive: &'static str, goal: String },
}

fn block(f: &mut fmt::Formatter<'_>, s: &Script) -> fmt::Result {
    write!(f, " {{ {s} }}")
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Script::Invariant { formula, then } => {
                write!(f, "invariant {formula}")?;
                then.as_deref().map_or(Ok(()), |s| block(f, s))
            }
            Script::OpenInvariant { formula } => write!(f, "open-invariant {formula}"),
            Script::Weaken => f.write_str("weaken"),
            Script::Cut { cut, left, right } => {
                write!(f, "cut {cut}")?;
                block(f, left)?;
                block(f, right)
            }
            Script::Aux { var, rhs, psi, witness, assume_global, body } => {
                write!(f, "aux {var}' = {rhs} with {psi}")?;
                if let Some(w) = witness {
                    write!(f, " witness {w}")?;
                }
                if *assume_global {
                    f.write_str(" assume-global")?;
                }
                block(f, body)
            }
            Script::Generalize { formula, body } => {
                write!(f, "generalize {formula}")?;
                block(f, body)
            }
            Script::UseReduction { reduction, then } => {
                write!(f, "use-reduction {reduction}")?;
                then.as_deref().map_or(Ok(()), |s| block(f, s))
            }
        }
    }
}

/// Blanks out `#` comments, keeping byte offsets intact.
fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| match l.find('#') {
            Some(i) => format!("{}{}", &l[..i], " ".repeat(l.len() - i)),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

impl Parser {
    /// An identifier possibly joined by dashes without spaces, e.g.
    /// `open-invariant`.
    fn word(&mut self) -> Result<String, ParseError> {
        let mut w = self.ident("directive")?;
        loop {
            let (Some(TokenKind::Minus), Some(TokenKind::Ident(next))) = (self.peek(), self.peek_at(1)) else {
                break;
            };
            let next = next.clone();
            self.cursor -= 1;
            let last_len = w.rsplit('-').next().map_or(0, str::len);
            let joined = self.glued(0, last_len) && self.glued(1, 1);
            self.cursor += 1;
            if !joined {
                break;
            }
            self.cursor += 2;
            w = format!("{w}-{next}");
        }
        Ok(w)
    }

    fn block(&mut self) -> Result<Script, ParseError> {
        self.expect(&TokenKind::LBrace, "`{`")?;
        let s = self.directive()?;
        self.expect(&TokenKind::RBrace, "`}`")?;
        Ok(s)
    }

    fn optional_block(&mut self) -> Result<Option<Box<Script>>, ParseError> {
        if self.peek() == Some(&TokenKind::LBrace) {
            Ok(Some(Box::new(self.block()?)))
        } else {
            Ok(None)
        }
    }

    fn directive(&mut self) -> Result<Script, ParseError> {
        let pos = self.pos();
        let word = self.word()?;
        Ok(match word.as_str() {
            "invariant" => Script::Invariant { formula: self.formula()?, then: self.optional_block()? },
            "open-invariant" => Script::OpenInvariant { formula: self.formula()? },
            "weaken" => Script::Weaken,
            "cut" => {
                let cut = self.formula()?;
                let left = Box::new(self.block()?);
                Script::Cut { cut, left, right: Box::new(self.block()?) }
            }
            "aux" => {
                let var = Var::new(&self.ident("auxiliary variable")?);
                self.expect(&TokenKind::Prime, "`'`")?;
                self.expect(&TokenKind::Eq, "`=`")?;
                let rhs = self.term()?;
                if !self.eat_keyword("with") {
                    return Err(self.unexpected("`with`"));
                }
                let psi = self.formula()?;
                let witness = if self.eat_keyword("witness") { Some(self.term()?) } else { None };
                let mut assume_global = false;
                if matches!(self.peek(), Some(TokenKind::Ident(_))) {
                    let at = self.pos();
                    match self.word()?.as_str() {
                        "assume-global" => assume_global = true,
                        other => return Err(ParseError::syntax(at, format!("unknown aux option `{other}`"))),
                    }
                }
                Script::Aux { var, rhs, psi, witness, assume_global, body: Box::new(self.block()?) }
            }
            "generalize" => Script::Generalize { formula: self.formula()?, body: Box::new(self.block()?) },
            "use-reduction" => {
                let at = self.pos();
                let name = self.word()?;
                let reduction = name.parse().map_err(|e: ReduceError| ParseError::syntax(at, e.to_string()))?;
                Script::UseReduction { reduction, then: self.optional_block()? }
            }
            other => return Err(ParseError::syntax(pos, format!("unknown directive `{other}`"))),
        })
    }
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut p = Parser::new(&strip_comments(text))?;
    let s = p.directive()?;
    p.finish()?;
    Ok(s)
}

impl std::str::FromStr for Script {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Script, ParseError> {
        parse_script(s)
    }
}

/// Closes a plain sequent by axiom when possible, else by arithmetic.
pub fn close(goal: Sequent) -> ProofNode {
    let rule = if Kernel::closes_by_axiom(&goal) { Rule::Axiom } else { Rule::Arith };
    ProofNode::leaf(goal, rule)
}

fn node(
    k: &Kernel,
    goal: &Sequent,
    rule: Rule,
    children: impl FnOnce(Vec<Sequent>) -> Result<Vec<ProofNode>, ScriptError>,
) -> Result<ProofNode, ScriptError> {
    let premises = k.apply(&rule, goal)?;
    Ok(ProofNode::new(goal.clone(), rule, children(premises)?))
}

fn modal<'a>(goal: &'a Sequent, directive: &'static str) -> Result<&'a Formula, ScriptError> {
    goal.modal_goal().map(|(_, post)| post).ok_or_else(|| ScriptError::NotModal { directive, goal: goal.to_string() })
}

/// Reduces `Γ ⊢ [sys]B` to `F ⊢ [sys]F` by variation, unless the goal
/// already has that shape.
fn focus(
    k: &Kernel,
    goal: &Sequent,
    f: &Formula,
    inner: impl FnOnce(&Sequent) -> Result<ProofNode, ScriptError>,
) -> Result<ProofNode, ScriptError> {
    let post = modal(goal, "invariant")?;
    if post == f && goal.antecedent.contains(&Fml::Plain(f.clone())) {
        return inner(goal);
    }
    node(k, goal, Rule::Variation { invariant: f.clone() }, |mut p| {
        let last = p.pop().expect("three premises");
        let mid = p.pop().expect("three premises");
        let first = p.pop().expect("three premises");
        Ok(vec![close(first), inner(&mid)?, close(last)])
    })
}

fn induct(k: &Kernel, goal: &Sequent, rule: Rule) -> Result<ProofNode, ScriptError> {
    node(k, goal, rule, |p| Ok(p.into_iter().map(close).collect()))
}

impl Script {
    /// Expands the script against `goal` into a proof tree. Rule failures
    /// are errors; arithmetic leaves are left for the checker to decide.
    pub fn build(&self, goal: &Sequent, k: &Kernel) -> Result<ProofNode, ScriptError> {
        match self {
            Script::Invariant { formula, then } => focus(k, goal, formula, |g| match then {
                Some(s) => s.build(g, k),
                None => induct(k, g, Rule::DiffInd),
            }),
            Script::OpenInvariant { formula } => focus(k, goal, formula, |g| induct(k, g, Rule::DiffIndOpen)),
            Script::Weaken => {
                modal(goal, "weaken")?;
                induct(k, goal, Rule::DiffWeaken)
            }
            Script::Cut { cut, left, right } => {
                modal(goal, "cut")?;
                node(k, goal, Rule::DiffCut { cut: cut.clone() }, |p| Ok(vec![left.build(&p[0], k)?, right.build(&p[1], k)?]))
            }
            Script::Aux { var, rhs, psi, witness, assume_global, body } => {
                let post = modal(goal, "aux")?.clone();
                focus(k, goal, &post, |g| {
                    let rule = Rule::DiffAux {
                        var: var.clone(),
                        rhs: rhs.clone(),
                        psi: psi.clone(),
                        witness: witness.clone(),
                        assume_global: *assume_global,
                    };
                    node(k, g, rule, |mut p| {
                        let main = p.pop().expect("main premise");
                        let mut out: Vec<ProofNode> = p.into_iter().map(close).collect();
                        out.push(body.build(&main, k)?);
                        Ok(out)
                    })
                })
            }
            Script::Generalize { formula, body } => {
                modal(goal, "generalize")?;
                let (sys, _) = goal.modal_goal().expect("checked");
                let boxed = Fml::modal(sys, formula);
                node(k, goal, Rule::Cut { formula: boxed }, |p| {
                    let left = body.build(&p[0], k)?;
                    let right = induct(k, &p[1], Rule::Generalize)?;
                    Ok(vec![left, right])
                })
            }
            Script::UseReduction { reduction, then } => {
                let f = reduction.apply(modal(goal, "use-reduction")?)?;
                Script::Invariant { formula: f, then: then.clone() }.build(goal, k)
            }
        }
    }

    pub fn invariant(f: Formula) -> Script {
        Script::Invariant { formula: f, then: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::OdeSystem;
    use crate::formulas::fml;
    use crate::kernel::{check_proof, Problem, TreeVerdict};

    fn check(eqs: &[(&str, &str)], domain: &str, pre: &str, post: &str, script: &str) -> TreeVerdict {
        let k = Kernel::default();
        let problem = Problem::new(OdeSystem::from_text(eqs, domain), fml(pre), fml(post));
        let tree = parse_script(script).unwrap().build(&problem.sequent(), &k).unwrap();
        check_proof(&k, &tree).unwrap().verdict
    }

    #[test]
    fn round_trips_through_text() {
        for text in [
            "invariant x^2 + y^2 >= p^2",
            "cut y >= 0 { invariant y >= 0 } { invariant x >= 0 & y >= 0 }",
            "aux y' = 1/2*y with x*y^2 - 1 = 0 { invariant x*y^2 - 1 = 0 }",
            "aux z' = z with -x + z = 0 witness x assume-global { weaken }",
            "open-invariant x > 0",
            "generalize x^2 - 25 <= 0 { invariant x^2 - 25 <= 0 }",
            "use-reduction eq-to-conj-weak",
            "use-reduction eq-to-weak { invariant -x^2 >= 0 }",
        ] {
            let s = parse_script(text).unwrap();
            let again = parse_script(&s.to_string()).unwrap();
            assert_eq!(again, s);
            assert_eq!(again.to_string(), s.to_string());
        }
    }

    #[test]
    fn dashes_need_no_spaces() {
        assert_eq!(parse_script("invariant -x >= 0").unwrap(), Script::invariant(fml("-x >= 0")));
        assert!(parse_script("open - invariant x > 0").is_err());
        assert!(parse_script("# comment\ninvariant x >= 0 # trailing\n").is_ok());
        assert!(parse_script("prove x >= 0").is_err());
        assert!(parse_script("cut x >= 0 { weaken }").is_err());
    }

    #[test]
    fn quadrant_cut() {
        let script = "cut y>=0 { invariant y>=0 } { invariant x>=0 & y>=0 }";
        let v = check(&[("x", "y"), ("y", "1")], "true", "x >= 0 & y >= 0", "x >= 0 & y >= 0", script);
        assert_eq!(v, TreeVerdict::Valid);
    }

    #[test]
    fn auxiliary_proof() {
        let script = "aux y' = (1/2)*y with x*y^2 = 1 { invariant x*y^2 = 1 }";
        assert_eq!(check(&[("x", "-x")], "true", "x > 0", "x > 0", script), TreeVerdict::Valid);
    }

    #[test]
    fn variation_and_generalization() {
        assert_eq!(check(&[("x", "-x")], "true", "x = 0", "x = 0", "invariant -x^2 >= 0"), TreeVerdict::Valid);
        let g = "generalize x^2 <= 25 { invariant x^2 <= 25 }";
        assert_eq!(check(&[("x", "-x")], "true", "-5 <= x & x <= 5", "-5 <= x & x <= 5", g), TreeVerdict::Valid);
        let reduce = "use-reduction eq-to-weak";
        let rot = [("x", "y"), ("y", "-x")];
        assert_eq!(check(&rot, "true", "x^2 + y^2 = c^2", "x^2 + y^2 = c^2", reduce), TreeVerdict::Valid);
    }

    #[test]
    fn wrong_shapes_are_errors() {
        let k = Kernel::default();
        let goal = Sequent::plain(&[fml("x >= 0")], &fml("x >= 0"));
        assert!(matches!(Script::Weaken.build(&goal, &k), Err(ScriptError::NotModal { .. })));
        let problem = Problem::new(OdeSystem::from_text(&[("x", "x")], "true"), fml("x >= 0"), fml("x >= 0"));
        let s = parse_script("open-invariant x >= 0").unwrap();
        assert!(matches!(s.build(&problem.sequent(), &k), Err(ScriptError::Kernel(KernelError::NotOpen(_)))));
    }
}
