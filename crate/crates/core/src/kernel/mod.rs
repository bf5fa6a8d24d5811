//! The trusted core: sequents, rule application and proof checking.
//!
//! Every rule is a function from a conclusion sequent plus instantiation
//! data to its list of premises. Nothing else is trusted: search and the
//! script interpreter only produce trees, which [`check_proof`] replays.

mod check;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Oracle, Verdict};
use crate::derivation::{derive_formula_with, DerivationMode, OdeSystem};
use crate::formulas::{is_open, Atom, Formula, Rel};
use crate::terms::{Polynomial, Var};

pub use check::{check_proof, CheckReport, LeafStatus, NodePath, TreeVerdict};

/// A sequent formula: plain arithmetic or a single ODE modality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Fml {
    Plain(Formula),
    Box { ode: OdeSystem, post: Formula },
}

impl Fml {
    pub fn modal(sys: &OdeSystem, post: &Formula) -> Fml {
        Fml::Box { ode: sys.clone(), post: post.clone() }
    }

    pub fn as_plain(&self) -> Option<&Formula> {
        match self {
            Fml::Plain(f) => Some(f),
            Fml::Box { .. } => None,
        }
    }

    fn mentions(&self, v: &Var) -> bool {
        match self {
            Fml::Plain(f) => f.vars().contains(v),
            Fml::Box { ode, post } => ode.symbols().contains(v) || post.vars().contains(v),
        }
    }
}

impl From<Formula> for Fml {
    fn from(f: Formula) -> Fml {
        Fml::Plain(f)
    }
}

impl fmt::Display for Fml {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fml::Plain(p) => write!(f, "{p}"),
            Fml::Box { ode, post } => match post {
                Formula::And(..) | Formula::Or(..) => write!(f, "[{ode}]({post})"),
                _ => write!(f, "[{ode}]{post}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub antecedent: Vec<Fml>,
    pub succedent: Vec<Fml>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Fml>, succedent: Vec<Fml>) -> Sequent {
        Sequent { antecedent, succedent }
    }

    /// `assumptions ⊢ goal` over plain formulas.
    pub fn plain(assumptions: &[Formula], goal: &Formula) -> Sequent {
        Sequent::new(assumptions.iter().cloned().map(Fml::Plain).collect(), vec![Fml::Plain(goal.clone())])
    }

    /// The unique modal formula of a single-formula succedent.
    pub fn modal_goal(&self) -> Option<(&OdeSystem, &Formula)> {
        match self.succedent.as_slice() {
            [Fml::Box { ode, post }] => Some((ode, post)),
            _ => None,
        }
    }

    pub fn plain_antecedent(&self) -> Vec<Formula> {
        self.antecedent.iter().filter_map(Fml::as_plain).cloned().collect()
    }

    /// The disjunction of the plain succedent formulas.
    pub fn plain_goal(&self) -> Formula {
        Formula::disj(self.succedent.iter().filter_map(Fml::as_plain).cloned())
    }

    fn mentions(&self, v: &Var) -> bool {
        self.antecedent.iter().chain(&self.succedent).any(|f| f.mentions(v))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Fml]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let ante = join(&self.antecedent);
        if ante.is_empty() {
            write!(f, "⊢ {}", join(&self.succedent))
        } else {
            write!(f, "{ante} ⊢ {}", join(&self.succedent))
        }
    }
}

/// A rule together with its instantiation data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rule {
    /// A formula on both sides, `false` on the left, or `true` on the right.
    Axiom,
    /// Closed by the arithmetic oracle on the plain formulas.
    Arith,
    AndL { index: usize },
    AndR { index: usize },
    OrL { index: usize },
    OrR { index: usize },
    Cut { formula: Fml },
    /// DI on `F ⊢ [x' = θ & H]F`.
    DiffInd,
    /// DI° for open `F`: the induction step may assume `F`.
    DiffIndOpen,
    DiffWeaken,
    DiffCut { cut: Formula },
    DiffAux {
        var: Var,
        rhs: Polynomial,
        psi: Formula,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Polynomial>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        assume_global: bool,
    },
    /// `Γ ⊢ F`, `F ⊢ [sys]F`, `F ⊢ B` for the goal `Γ ⊢ [sys]B`.
    Variation { invariant: Formula },
    /// `[sys]F ⊢ [sys]G` from `F ⊢ G`.
    Generalize,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::Arith => "arith",
            Rule::AndL { .. } => "and-l",
            Rule::AndR { .. } => "and-r",
            Rule::OrL { .. } => "or-l",
            Rule::OrR { .. } => "or-r",
            Rule::Cut { .. } => "cut",
            Rule::DiffInd => "di",
            Rule::DiffIndOpen => "di-open",
            Rule::DiffWeaken => "dw",
            Rule::DiffCut { .. } => "dc",
            Rule::DiffAux { .. } => "da",
            Rule::Variation { .. } => "variation",
            Rule::Generalize => "gen",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::AndL { index } | Rule::AndR { index } | Rule::OrL { index } | Rule::OrR { index } => {
                write!(f, "{} #{index}", self.id())
            }
            Rule::Cut { formula } => write!(f, "cut {formula}"),
            Rule::DiffCut { cut } => write!(f, "dc {cut}"),
            Rule::DiffAux { var, rhs, psi, witness, assume_global } => {
                write!(f, "da {var}' = {rhs} with {psi}")?;
                if let Some(w) = witness {
                    write!(f, " witness {w}")?;
                }
                if *assume_global {
                    f.write_str(" assume-global")?;
                }
                Ok(())
            }
            Rule::Variation { invariant } => write!(f, "variation {invariant}"),
            _ => f.write_str(self.id()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("rule {rule} does not apply: {reason}")]
    ShapeMismatch { rule: &'static str, reason: String },
    #[error("formula {0} is not open")]
    NotOpen(Formula),
    #[error("auxiliary variable {0} is not fresh")]
    NotFresh(Var),
    #[error("cannot verify that {var}' = {rhs} has global solutions; annotate with assume-global")]
    GlobalSolutionUnverified { var: Var, rhs: Polynomial },
    #[error("auxiliary formula {psi} needs a witness to establish {phi} <-> exists {var} {psi}")]
    DaPattern { var: Var, phi: Formula, psi: Formula },
    #[error("modalities differ: [{0}] vs [{1}]")]
    ModalMismatch(OdeSystem, OdeSystem),
    #[error("malformed proof tree at {path}: {cause}")]
    MalformedTree { path: NodePath, cause: Box<KernelError> },
    #[error("premise mismatch: expected {expected}, found {found}")]
    PremiseMismatch { expected: String, found: String },
    #[error("expected {expected} premises, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("cut nesting exceeds depth {0}")]
    CutDepthExceeded(usize),
}

fn shape(rule: &'static str, reason: impl Into<String>) -> KernelError {
    KernelError::ShapeMismatch { rule, reason: reason.into() }
}

/// A safety problem `pre -> [sys]post`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub sys: OdeSystem,
    pub pre: Formula,
    pub post: Formula,
}

impl Problem {
    pub fn new(sys: OdeSystem, pre: Formula, post: Formula) -> Problem {
        Problem { sys, pre, post }
    }

    pub fn sequent(&self) -> Sequent {
        Sequent::new(vec![Fml::Plain(self.pre.clone())], vec![Fml::modal(&self.sys, &self.post)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub conclusion: Sequent,
    #[serde(flatten)]
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<ProofNode>,
}

impl ProofNode {
    pub fn new(conclusion: Sequent, rule: Rule, premises: Vec<ProofNode>) -> ProofNode {
        ProofNode { conclusion, rule, premises }
    }

    pub fn leaf(conclusion: Sequent, rule: Rule) -> ProofNode {
        ProofNode::new(conclusion, rule, Vec::new())
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::size).sum::<usize>()
    }
}

/// Rule application, parameterized by how strict inequalities derive.
#[derive(Debug, Clone, Default)]
pub struct Kernel {
    pub mode: DerivationMode,
    pub oracle: Oracle,
}

fn domain_antecedent(h: &Formula) -> Vec<Fml> {
    if h.is_true() {
        Vec::new()
    } else {
        vec![Fml::Plain(h.clone())]
    }
}

/// `±(p*y^2 - 1) = 0` for `phi = p > 0`: then `phi <-> exists y psi`.
fn is_positivity_pattern(phi: &Formula, psi: &Formula, y: &Var) -> bool {
    let (Formula::Atom(a), Formula::Atom(b)) = (phi, psi) else {
        return false;
    };
    if a.rel != Rel::Gt || b.rel != Rel::Eq || a.poly.vars().contains(y) {
        return false;
    }
    let y2 = Polynomial::var(y.clone()) * Polynomial::var(y.clone());
    [b.poly.clone(), -&b.poly].into_iter().any(|q| (q + Polynomial::one()).div_exact(&y2).as_ref() == Some(&a.poly))
}

impl Kernel {
    pub fn new(mode: DerivationMode, seed: u64) -> Kernel {
        Kernel { mode, oracle: Oracle::with_seed(seed) }
    }

    pub fn derive(&self, f: &Formula, sys: &OdeSystem) -> Formula {
        derive_formula_with(f, sys, self.mode)
    }

    /// Oracle verdict for the plain part of a sequent.
    pub fn close_by_arith(&self, s: &Sequent) -> Verdict {
        self.oracle.decide(&s.plain_antecedent(), &s.plain_goal())
    }

    pub fn closes_by_axiom(s: &Sequent) -> bool {
        s.antecedent.iter().any(|a| a == &Fml::Plain(Formula::False) || s.succedent.contains(a))
            || s.succedent.contains(&Fml::Plain(Formula::True))
    }

    /// Premises of `rule` applied to `goal`, in order.
    pub fn apply(&self, rule: &Rule, goal: &Sequent) -> Result<Vec<Sequent>, KernelError> {
        match rule {
            Rule::Axiom => {
                if Self::closes_by_axiom(goal) {
                    Ok(vec![])
                } else {
                    Err(shape("axiom", "no formula occurs on both sides"))
                }
            }
            Rule::Arith => Ok(vec![]),
            Rule::AndL { index } => {
                let Some(Fml::Plain(Formula::And(a, b))) = goal.antecedent.get(*index) else {
                    return Err(shape("and-l", format!("antecedent #{index} is not a conjunction")));
                };
                let mut s = goal.clone();
                s.antecedent.splice(*index..=*index, [Fml::Plain((**a).clone()), Fml::Plain((**b).clone())]);
                Ok(vec![s])
            }
            Rule::AndR { index } => {
                let Some(Fml::Plain(Formula::And(a, b))) = goal.succedent.get(*index) else {
                    return Err(shape("and-r", format!("succedent #{index} is not a conjunction")));
                };
                Ok([a, b]
                    .into_iter()
                    .map(|part| {
                        let mut s = goal.clone();
                        s.succedent[*index] = Fml::Plain((**part).clone());
                        s
                    })
                    .collect())
            }
            Rule::OrL { index } => {
                let Some(Fml::Plain(Formula::Or(a, b))) = goal.antecedent.get(*index) else {
                    return Err(shape("or-l", format!("antecedent #{index} is not a disjunction")));
                };
                Ok([a, b]
                    .into_iter()
                    .map(|part| {
                        let mut s = goal.clone();
                        s.antecedent[*index] = Fml::Plain((**part).clone());
                        s
                    })
                    .collect())
            }
            Rule::OrR { index } => {
                let Some(Fml::Plain(Formula::Or(a, b))) = goal.succedent.get(*index) else {
                    return Err(shape("or-r", format!("succedent #{index} is not a disjunction")));
                };
                let mut s = goal.clone();
                s.succedent.splice(*index..=*index, [Fml::Plain((**a).clone()), Fml::Plain((**b).clone())]);
                Ok(vec![s])
            }
            Rule::Cut { formula } => {
                let left = Sequent::new(goal.antecedent.clone(), vec![formula.clone()]);
                let mut right = goal.clone();
                right.antecedent.push(formula.clone());
                Ok(vec![left, right])
            }
            Rule::DiffInd | Rule::DiffIndOpen => {
                let open = matches!(rule, Rule::DiffIndOpen);
                let name = if open { "di-open" } else { "di" };
                let (sys, f) = goal.modal_goal().ok_or_else(|| shape(name, "succedent is not a single modality"))?;
                if !goal.antecedent.contains(&Fml::Plain(f.clone())) {
                    return Err(shape(name, format!("antecedent does not contain the invariant {f}")));
                }
                let mut ante = domain_antecedent(&sys.domain);
                if open {
                    if !is_open(f) {
                        return Err(KernelError::NotOpen(f.clone()));
                    }
                    ante.push(Fml::Plain(f.clone()));
                }
                Ok(vec![Sequent::new(ante, vec![Fml::Plain(self.derive(f, sys))])])
            }
            Rule::DiffWeaken => {
                let (sys, f) = goal.modal_goal().ok_or_else(|| shape("dw", "succedent is not a single modality"))?;
                Ok(vec![Sequent::new(vec![Fml::Plain(sys.domain.clone())], vec![Fml::Plain(f.clone())])])
            }
            Rule::DiffCut { cut } => {
                let (sys, f) = goal.modal_goal().ok_or_else(|| shape("dc", "succedent is not a single modality"))?;
                let left = Sequent::new(goal.antecedent.clone(), vec![Fml::modal(sys, cut)]);
                let domain = if sys.domain.is_true() { cut.clone() } else { Formula::and(sys.domain.clone(), cut.clone()) };
                let right = Sequent::new(goal.antecedent.clone(), vec![Fml::modal(&sys.with_domain(domain), f)]);
                Ok(vec![left, right])
            }
            Rule::DiffAux { var, rhs, psi, witness, assume_global } => {
                let (sys, phi) = goal.modal_goal().ok_or_else(|| shape("da", "succedent is not a single modality"))?;
                if !goal.antecedent.contains(&Fml::Plain(phi.clone())) {
                    return Err(shape("da", format!("antecedent does not contain {phi}")));
                }
                if goal.mentions(var) {
                    return Err(KernelError::NotFresh(var.clone()));
                }
                if rhs.total_degree() > 1 && !assume_global {
                    return Err(KernelError::GlobalSolutionUnverified { var: var.clone(), rhs: rhs.clone() });
                }
                let mut premises = Vec::new();
                match witness {
                    Some(w) => {
                        if w.vars().contains(var) {
                            return Err(KernelError::NotFresh(var.clone()));
                        }
                        let inst = psi.substitute(var, w).map_err(|e| shape("da", e.to_string()))?;
                        premises.push(Sequent::plain(std::slice::from_ref(psi), phi));
                        premises.push(Sequent::plain(std::slice::from_ref(phi), &inst));
                    }
                    None if is_positivity_pattern(phi, psi, var) => {}
                    None => {
                        return Err(KernelError::DaPattern { var: var.clone(), phi: phi.clone(), psi: psi.clone() })
                    }
                }
                let mut equations = sys.equations.clone();
                equations.insert(var.clone(), rhs.clone());
                let extended = OdeSystem { equations, domain: sys.domain.clone() };
                premises.push(Sequent::new(vec![Fml::Plain(psi.clone())], vec![Fml::modal(&extended, psi)]));
                Ok(premises)
            }
            Rule::Variation { invariant } => {
                let (sys, post) =
                    goal.modal_goal().ok_or_else(|| shape("variation", "succedent is not a single modality"))?;
                let inv = Fml::Plain(invariant.clone());
                Ok(vec![
                    Sequent::new(goal.antecedent.clone(), vec![inv.clone()]),
                    Sequent::new(vec![inv.clone()], vec![Fml::modal(sys, invariant)]),
                    Sequent::new(vec![inv], vec![Fml::Plain(post.clone())]),
                ])
            }
            Rule::Generalize => {
                let (sys, g) = goal.modal_goal().ok_or_else(|| shape("gen", "succedent is not a single modality"))?;
                let mut other = None;
                for a in &goal.antecedent {
                    if let Fml::Box { ode, post } = a {
                        if ode == sys {
                            return Ok(vec![Sequent::plain(std::slice::from_ref(post), g)]);
                        }
                        other.get_or_insert(ode);
                    }
                }
                match other {
                    Some(ode) => Err(KernelError::ModalMismatch(ode.clone(), sys.clone())),
                    None => Err(shape("gen", "antecedent has no modality")),
                }
            }
        }
    }
}

/// `p > 0` and `p*y^2 - 1 = 0`, the built-in auxiliary pattern.
pub fn positivity_aux(p: &Polynomial, y: &Var) -> (Formula, Formula) {
    let y2 = Polynomial::var(y.clone()) * Polynomial::var(y.clone());
    (Formula::Atom(Atom::gt0(p.clone())), Formula::Atom(Atom::eq0(p * &y2 - Polynomial::one())))
}
