//! Class-restricted invariant search and the differential-cut loop.
//!
//! Candidates are enumerated level by level, where the level of a formula
//! is the total number of monomial terms over its atoms. Oracle results
//! are cached per atom: the DI premise of a conjunction or disjunction is
//! the conjunction of the atoms' premises, so most combinations are
//! decided without further arithmetic.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::search::GridShells;
use crate::arith::Oracle;
use crate::cli::script::Script;
use crate::derivation::{derive_formula_with, DerivationMode, OdeSystem};
use crate::formulas::{is_open, Atom, CompiledFormula, Formula, OperatorClass, Rel};
use crate::kernel::{check_proof, positivity_aux, Fml, Kernel, Problem, ProofNode, Sequent};
use crate::terms::{rat, Monomial, Polynomial, Rational, Var};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub opclass: OperatorClass,
    pub max_degree: u32,
    /// Coefficients available to templates; zero is implied.
    pub pool: Vec<Rational>,
    pub max_atoms: usize,
    pub max_cuts: usize,
    pub allow_open_di: bool,
    pub allow_da: bool,
    /// Rates `c` tried for auxiliaries `y' = c*y`. Empty means the pool
    /// together with its halves.
    pub aux_templates: Vec<Rational>,
    /// Cap on the number of candidates examined, across all stages.
    pub budget: usize,
    pub seed: u64,
    pub mode: DerivationMode,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            opclass: OperatorClass::ALL,
            max_degree: 2,
            pool: vec![rat(-1), rat(0), rat(1)],
            max_atoms: 2,
            max_cuts: 0,
            allow_open_di: false,
            allow_da: false,
            aux_templates: Vec::new(),
            budget: 100_000,
            seed: 0,
            mode: DerivationMode::Weak,
        }
    }
}

impl SearchConfig {
    /// Integer pool `lo..=hi`.
    pub fn with_range(mut self, lo: i64, hi: i64) -> SearchConfig {
        self.pool = (lo..=hi).map(rat).collect();
        self
    }

    fn kernel(&self) -> Kernel {
        Kernel::new(self.mode, self.seed)
    }

    /// The oracle used while searching: rejecting a candidate needs no
    /// witness, so counterexample search is kept short.
    fn oracle(&self) -> Oracle {
        Oracle { seed: self.seed, grid_cap: 300, random_samples: 40, ..Oracle::default() }
    }

    fn aux_rates(&self) -> Vec<Rational> {
        if !self.aux_templates.is_empty() {
            return self.aux_templates.clone();
        }
        let mut out: Vec<Rational> = Vec::new();
        let halves = self.pool.iter().map(|c| c / rat(2));
        for c in ordered_pool(&self.pool).into_iter().chain(ordered_pool(&halves.collect::<Vec<_>>())) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }
}

/// Nonzero pool values by magnitude, positive first.
fn ordered_pool(pool: &[Rational]) -> Vec<Rational> {
    let mut v: Vec<Rational> = pool.iter().filter(|c| !c.is_zero()).cloned().collect();
    v.sort_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
    v.dedup();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    And,
    Or,
}

/// Lazily materialized atoms, grouped by number of terms.
struct CandidateSpace {
    monomials: Vec<Monomial>,
    coeffs: Vec<Rational>,
    rels: Vec<Rel>,
    cap: usize,
    by_terms: Vec<Option<Vec<Atom>>>,
    seen: std::collections::HashSet<Atom>,
}

fn monomials_upto(vars: &[Var], degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![Monomial::one()];
    for _ in 0..degree {
        let mut next = BTreeSet::new();
        for m in &frontier {
            for v in vars {
                next.insert(m.checked_mul(&Monomial::var(v.clone())).expect("small degree"));
            }
        }
        frontier = next.into_iter().collect();
        out.extend(frontier.iter().cloned());
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then(b.cmp_lex(a, &[])));
    out.dedup();
    out
}

fn normalize(p: Polynomial, rel: Rel) -> Atom {
    let lc = p.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
    let scale = if rel == Rel::Eq { lc } else { lc.abs() };
    Atom::new(p.scale(&(rat(1) / scale)), rel)
}

impl CandidateSpace {
    fn new(vars: &[Var], cfg: &SearchConfig) -> CandidateSpace {
        let monomials = monomials_upto(vars, cfg.max_degree);
        let mut rels: Vec<Rel> = [Rel::Geq, Rel::Gt, Rel::Eq].into_iter().filter(|r| cfg.opclass.contains(OperatorClass::of_rel(*r))).collect();
        rels.dedup();
        let n = monomials.len();
        CandidateSpace {
            monomials,
            coeffs: ordered_pool(&cfg.pool),
            rels,
            cap: cfg.budget.max(1),
            by_terms: vec![None; n + 1],
            seen: Default::default(),
        }
    }

    fn max_terms(&self) -> usize {
        self.monomials.len()
    }

    fn ensure(&mut self, t: usize) {
        if t == 0 || t > self.max_terms() || self.by_terms[t].is_some() {
            return;
        }
        let mut out = Vec::new();
        let n = self.monomials.len();
        let mut subset: Vec<usize> = (0..t).collect();
        'subsets: loop {
            if !(t == 1 && self.monomials[subset[0]].is_one()) {
                let mut digits = vec![0usize; t];
                'coeffs: loop {
                    let p = Polynomial::from_terms(
                        subset.iter().zip(&digits).map(|(&i, &d)| (self.monomials[i].clone(), self.coeffs[d].clone())),
                    );
                    for &rel in &self.rels {
                        let a = normalize(p.clone(), rel);
                        if self.seen.insert(a.clone()) {
                            out.push(a);
                            if out.len() >= self.cap {
                                break 'subsets;
                            }
                        }
                    }
                    for j in (0..t).rev() {
                        digits[j] += 1;
                        if digits[j] < self.coeffs.len() {
                            continue 'coeffs;
                        }
                        digits[j] = 0;
                    }
                    break;
                }
            }
            // next t-subset of 0..n in lexicographic order
            let mut j = t;
            loop {
                if j == 0 {
                    break 'subsets;
                }
                j -= 1;
                if subset[j] < n - t + j {
                    subset[j] += 1;
                    for k in j + 1..t {
                        subset[k] = subset[k - 1] + 1;
                    }
                    break;
                }
            }
        }
        self.by_terms[t] = Some(out);
    }

    fn list(&self, t: usize) -> &[Atom] {
        self.by_terms.get(t).and_then(|l| l.as_deref()).unwrap_or(&[])
    }

    /// Visits candidates in order until `visit` returns true or the walk
    /// ends. Returns whether a visit succeeded.
    fn walk(&mut self, max_atoms: usize, ops: &[Op], visit: &mut dyn FnMut(Option<Op>, &[&Atom]) -> bool) -> bool {
        for level in 1..=max_atoms * self.max_terms() {
            for t in 1..=level.min(self.max_terms()) {
                self.ensure(t);
            }
            for k in 1..=max_atoms.min(level) {
                let op_choices: Vec<Option<Op>> = if k == 1 { vec![None] } else { ops.iter().map(|o| Some(*o)).collect() };
                for op in op_choices {
                    let mut parts = Vec::new();
                    if self.partitions(level, k, 1, &mut parts, &mut |space, parts| {
                        let mut chosen = Vec::with_capacity(k);
                        space.tuples(parts, 0, &mut chosen, &mut |atoms| visit(op, atoms))
                    }) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Nondecreasing term counts of length `k` summing to `level`.
    fn partitions(
        &self,
        level: usize,
        k: usize,
        min: usize,
        acc: &mut Vec<usize>,
        f: &mut dyn FnMut(&Self, &[usize]) -> bool,
    ) -> bool {
        if k == 0 {
            return level == 0 && f(self, acc);
        }
        for t in min..=level.min(self.max_terms()) {
            if t * k > level {
                break;
            }
            acc.push(t);
            let done = self.partitions(level - t, k - 1, t, acc, f);
            acc.pop();
            if done {
                return true;
            }
        }
        false
    }

    fn tuples<'a>(
        &'a self,
        parts: &[usize],
        start: usize,
        chosen: &mut Vec<&'a Atom>,
        f: &mut dyn FnMut(&[&Atom]) -> bool,
    ) -> bool {
        let j = chosen.len();
        if j == parts.len() {
            return f(chosen);
        }
        let list = self.list(parts[j]);
        for i in start..list.len() {
            chosen.push(&list[i]);
            let next_start = if j + 1 < parts.len() && parts[j + 1] == parts[j] { i + 1 } else { 0 };
            let done = self.tuples(parts, next_start, chosen, f);
            chosen.pop();
            if done {
                return true;
            }
        }
        false
    }
}

fn assemble(op: Option<Op>, atoms: &[&Atom]) -> Formula {
    let parts = atoms.iter().map(|a| Formula::Atom((*a).clone()));
    match op {
        Some(Op::Or) => Formula::disj(parts),
        _ => Formula::conj(parts),
    }
}

fn class_ops(class: OperatorClass) -> Vec<Op> {
    let mut ops = Vec::new();
    if class.contains(OperatorClass::AND) {
        ops.push(Op::And);
    }
    if class.contains(OperatorClass::OR) {
        ops.push(Op::Or);
    }
    ops
}

/// Candidate invariants over `vars` in enumeration order, at most
/// `cfg.budget` of them.
pub fn enumerate_candidates(vars: &[Var], cfg: &SearchConfig) -> Vec<Formula> {
    let mut space = CandidateSpace::new(vars, cfg);
    let mut out = Vec::new();
    space.walk(cfg.max_atoms.max(1), &class_ops(cfg.opclass), &mut |op, atoms| {
        out.push(assemble(op, atoms));
        out.len() >= cfg.budget
    });
    out
}

/// Floating-point prefilter: fixed sample points at which a sequent can
/// be seen to fail before asking the exact oracle.
struct Screen {
    layout: Vec<Var>,
    points: Vec<Vec<f64>>,
}

impl Screen {
    fn new(layout: Vec<Var>, seed: u64) -> Screen {
        let n = layout.len();
        let mut points: Vec<Vec<f64>> = GridShells::new(n, 2).take(125).map(|p| p.iter().map(|v| *v as f64).collect()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..24 {
            points.push((0..n).map(|_| rng.gen_range(-12i32..=12) as f64 / 4.0).collect());
        }
        Screen { layout, points }
    }

    fn mask(&self, assumptions: &[Formula]) -> Vec<bool> {
        let compiled: Vec<CompiledFormula> = assumptions.iter().map(|f| CompiledFormula::new(f, &self.layout)).collect();
        self.points.iter().map(|x| compiled.iter().all(|c| c.eval3(x) == Some(true))).collect()
    }

    fn refutes(&self, mask: &[bool], goal: &Formula) -> bool {
        let g = CompiledFormula::new(goal, &self.layout);
        self.points.iter().zip(mask).any(|(x, ok)| *ok && g.eval3(x) == Some(false))
    }

    fn refutes_with(&self, mask: &[bool], extra: &Formula, goal: &Formula) -> bool {
        let e = CompiledFormula::new(extra, &self.layout);
        let g = CompiledFormula::new(goal, &self.layout);
        self.points.iter().zip(mask).any(|(x, ok)| *ok && e.eval3(x) == Some(true) && g.eval3(x) == Some(false))
    }
}

#[derive(Default, Clone, Copy)]
struct AtomFacts {
    di: Option<bool>,
    pre: Option<bool>,
    post: Option<bool>,
}

/// What a candidate must satisfy.
enum Target<'a> {
    /// `Γ ⊢ F`, DI, `F ⊢ B`.
    Invariant(&'a Formula),
    /// `Γ ⊢ C`, DI, and `H ⊢ C` not provable.
    Cut,
}

/// Oracle checks for one goal `Γ ⊢ [x' = θ & H]B`, with per-atom caches.
struct Checker<'a> {
    cfg: &'a SearchConfig,
    oracle: Oracle,
    sys: &'a OdeSystem,
    gamma: Vec<Formula>,
    domain: Vec<Formula>,
    screen: Screen,
    gamma_mask: Vec<bool>,
    domain_mask: Vec<bool>,
    all_mask: Vec<bool>,
    facts: HashMap<Atom, AtomFacts>,
}

impl<'a> Checker<'a> {
    fn new(cfg: &'a SearchConfig, sys: &'a OdeSystem, gamma: Vec<Formula>, layout: Vec<Var>) -> Checker<'a> {
        let domain = if sys.domain.is_true() { Vec::new() } else { vec![sys.domain.clone()] };
        let screen = Screen::new(layout, cfg.seed);
        let gamma_mask = screen.mask(&gamma);
        let domain_mask = screen.mask(&domain);
        let all_mask = vec![true; screen.points.len()];
        Checker { cfg, oracle: cfg.oracle(), sys, gamma, domain, screen, gamma_mask, domain_mask, all_mask, facts: HashMap::new() }
    }

    fn valid(&self, assumptions: &[Formula], mask: &[bool], goal: &Formula) -> bool {
        !self.screen.refutes(mask, goal) && self.oracle.decide(assumptions, goal).is_valid()
    }

    fn derive(&self, f: &Formula) -> Formula {
        derive_formula_with(f, self.sys, self.cfg.mode)
    }

    fn di(&mut self, a: &Atom) -> bool {
        if let Some(v) = self.facts.get(a).and_then(|f| f.di) {
            return v;
        }
        let d = self.derive(&Formula::Atom(a.clone()));
        let v = self.valid(&self.domain, &self.domain_mask, &d);
        self.facts.entry(a.clone()).or_default().di = Some(v);
        v
    }

    fn pre(&mut self, a: &Atom) -> bool {
        if let Some(v) = self.facts.get(a).and_then(|f| f.pre) {
            return v;
        }
        let v = self.valid(&self.gamma, &self.gamma_mask, &Formula::Atom(a.clone()));
        self.facts.entry(a.clone()).or_default().pre = Some(v);
        v
    }

    fn post(&mut self, a: &Atom, post: &Formula) -> bool {
        if let Some(v) = self.facts.get(a).and_then(|f| f.post) {
            return v;
        }
        let f = Formula::Atom(a.clone());
        let v = !self.screen.refutes_with(&self.all_mask, &f, post) && self.oracle.decide(&[f], post).is_valid();
        self.facts.entry(a.clone()).or_default().post = Some(v);
        v
    }

    /// Whether the DI premise (or DI° premise, if allowed) closes; the
    /// flag says whether the open variant is needed.
    fn inductive(&mut self, atoms: &[&Atom], f: &Formula) -> Option<bool> {
        if atoms.iter().all(|a| self.di(a)) {
            return Some(false);
        }
        if !self.cfg.allow_open_di || !is_open(f) {
            return None;
        }
        let d = self.derive(f);
        let mut assumptions = self.domain.clone();
        assumptions.push(f.clone());
        let ok = !self.screen.refutes_with(&self.domain_mask, f, &d) && self.oracle.decide(&assumptions, &d).is_valid();
        ok.then_some(true)
    }

    fn accepts(&mut self, op: Option<Op>, atoms: &[&Atom], target: &Target) -> Option<(Formula, bool)> {
        let f = assemble(op, atoms);
        // cheapest decomposable checks first
        match op {
            None | Some(Op::And) => {
                if !atoms.iter().all(|a| self.pre(a)) {
                    return None;
                }
            }
            Some(Op::Or) => {
                if let Target::Invariant(post) = target {
                    if !atoms.iter().all(|a| self.post(a, post)) {
                        return None;
                    }
                }
            }
        }
        let open = self.inductive(atoms, &f)?;
        match op {
            None | Some(Op::And) => {}
            Some(Op::Or) => {
                if !atoms.iter().any(|a| self.pre(a)) && !self.valid(&self.gamma, &self.gamma_mask, &f) {
                    return None;
                }
            }
        }
        match target {
            Target::Invariant(post) => {
                let closes = match op {
                    None => self.post(atoms[0], post),
                    Some(Op::Or) => true,
                    Some(Op::And) => {
                        !self.screen.refutes_with(&self.all_mask, &f, post)
                            && self.oracle.decide(std::slice::from_ref(&f), post).is_valid()
                    }
                };
                closes.then_some((f, open))
            }
            Target::Cut => (!self.oracle.decide(&self.domain, &f).is_valid()).then_some((f, open)),
        }
    }
}

/// The result of a successful search.
#[derive(Debug, Clone)]
pub struct Found {
    pub script: Script,
    pub proof: ProofNode,
    /// Candidates examined before success.
    pub examined: usize,
}

struct Budget {
    left: usize,
    used: usize,
}

impl Budget {
    fn take(&mut self) -> bool {
        if self.left == 0 {
            return false;
        }
        self.left -= 1;
        self.used += 1;
        true
    }
}

fn problem_vars(goal: &Sequent) -> Vec<Var> {
    let mut vs = BTreeSet::new();
    for f in goal.antecedent.iter().chain(&goal.succedent) {
        match f {
            Fml::Plain(p) => vs.extend(p.vars()),
            Fml::Box { ode, post } => {
                vs.extend(ode.symbols());
                vs.extend(post.vars());
            }
        }
    }
    vs.into_iter().collect()
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    kernel: Kernel,
    budget: Budget,
}

impl Searcher<'_> {
    fn verified(&self, script: Script, goal: &Sequent) -> Option<(Script, ProofNode)> {
        let proof = script.build(goal, &self.kernel).ok()?;
        let report = check_proof(&self.kernel, &proof).ok()?;
        report.verdict.is_valid().then_some((script, proof))
    }

    /// First candidate meeting `target` on `goal`, as a script.
    fn find(&mut self, goal: &Sequent, target: Target) -> Option<Script> {
        let (sys, _) = goal.modal_goal()?;
        let vars = problem_vars(goal);
        let mut checker = Checker::new(self.cfg, sys, goal.plain_antecedent(), vars.clone());
        let mut space = CandidateSpace::new(&vars, self.cfg);
        let ops = class_ops(self.cfg.opclass);
        let mut found = None;
        let budget = &mut self.budget;
        let kernel = &self.kernel;
        space.walk(self.cfg.max_atoms.max(1), &ops, &mut |op, atoms| {
            if !budget.take() {
                return true;
            }
            let Some((f, open)) = checker.accepts(op, atoms, &target) else {
                return false;
            };
            let script = if open { Script::OpenInvariant { formula: f } } else { Script::invariant(f) };
            if let Target::Invariant(_) = target {
                let Ok(proof) = script.build(goal, kernel) else { return false };
                if !check_proof(kernel, &proof).is_ok_and(|r| r.verdict.is_valid()) {
                    return false;
                }
            }
            found = Some(script);
            true
        });
        found
    }

    fn weaken(&mut self, goal: &Sequent) -> Option<Script> {
        let (sys, post) = goal.modal_goal()?;
        if !self.budget.take() {
            return None;
        }
        let v = self.kernel.oracle.decide(std::slice::from_ref(&sys.domain), post);
        v.is_valid().then_some(Script::Weaken)
    }

    /// `p > 0` via `y' = c*y` and `p*y^2 = 1`.
    fn auxiliary(&mut self, goal: &Sequent) -> Option<Script> {
        let (sys, post) = goal.modal_goal()?;
        let Formula::Atom(a) = post else { return None };
        if a.rel != Rel::Gt {
            return None;
        }
        let taken = problem_vars(goal);
        let y = std::iter::once("y".to_string())
            .chain((0..).map(|i| format!("y{i}")))
            .map(|n| Var::new(&n))
            .find(|v| !taken.contains(v))
            .expect("fresh name");
        let (_, psi) = positivity_aux(&a.poly, &y);
        for c in self.cfg.aux_rates() {
            if !self.budget.take() {
                return None;
            }
            let rhs = Polynomial::var(y.clone()).scale(&c);
            let mut equations = sys.equations.clone();
            equations.insert(y.clone(), rhs.clone());
            let ext = OdeSystem { equations, domain: sys.domain.clone() };
            let d = derive_formula_with(&psi, &ext, self.cfg.mode);
            let domain: Vec<Formula> = if sys.domain.is_true() { vec![] } else { vec![sys.domain.clone()] };
            if !self.kernel.oracle.decide(&domain, &d).is_valid() {
                continue;
            }
            let script = Script::Aux {
                var: y.clone(),
                rhs,
                psi: psi.clone(),
                witness: None,
                assume_global: false,
                body: Box::new(Script::invariant(psi.clone())),
            };
            if let Some((s, _)) = self.verified(script, goal) {
                return Some(s);
            }
        }
        None
    }

    fn prove(&mut self, goal: &Sequent, cuts_left: usize) -> Option<Script> {
        if let Some(s) = self.weaken(goal) {
            return Some(s);
        }
        let (_, post) = goal.modal_goal()?;
        let post = post.clone();
        // a handful of templates; tried before enumeration can drain the budget
        if self.cfg.allow_da {
            if let Some(s) = self.auxiliary(goal) {
                return Some(s);
            }
        }
        if let Some(s) = self.find(goal, Target::Invariant(&post)) {
            return Some(s);
        }
        if cuts_left == 0 {
            return None;
        }
        let left = self.find(goal, Target::Cut)?;
        let (Script::Invariant { formula: cut, .. } | Script::OpenInvariant { formula: cut }) = &left else {
            return None;
        };
        let cut = cut.clone();
        let (sys, _) = goal.modal_goal()?;
        let domain = if sys.domain.is_true() { cut.clone() } else { Formula::and(sys.domain.clone(), cut.clone()) };
        let next = Sequent::new(goal.antecedent.clone(), vec![Fml::modal(&sys.with_domain(domain), &post)]);
        let right = self.prove(&next, cuts_left - 1)?;
        Some(Script::Cut { cut, left: Box::new(left), right: Box::new(right) })
    }
}

fn run(problem: &Problem, cfg: &SearchConfig, cuts: usize) -> Option<Found> {
    let mut s = Searcher { cfg, kernel: cfg.kernel(), budget: Budget { left: cfg.budget, used: 0 } };
    let goal = problem.sequent();
    let script = s.prove(&goal, cuts)?;
    let (script, proof) = s.verified(script, &goal)?;
    Some(Found { script, proof, examined: s.budget.used })
}

/// First invariant in enumeration order whose variation premises all
/// close, without cuts.
pub fn search_invariant(problem: &Problem, cfg: &SearchConfig) -> Option<Found> {
    let no_extras = SearchConfig { allow_da: false, ..cfg.clone() };
    run(problem, &no_extras, 0)
}

/// Weakening, auxiliaries and invariant search, strengthening the domain
/// with up to `cfg.max_cuts` differential cuts.
pub fn search_with_cuts(problem: &Problem, cfg: &SearchConfig) -> Option<Found> {
    run(problem, cfg, cfg.max_cuts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{classify, fml};

    fn problem(eqs: &[(&str, &str)], pre: &str, post: &str) -> Problem {
        Problem::new(OdeSystem::from_text(eqs, "true"), fml(pre), fml(post))
    }

    fn cfg(class: &str, degree: u32, lo: i64, hi: i64) -> SearchConfig {
        SearchConfig { opclass: OperatorClass::parse(class).unwrap(), max_degree: degree, ..SearchConfig::default() }
            .with_range(lo, hi)
    }

    #[test]
    fn enumeration_examples() {
        let x = [Var::new("x")];
        let c = SearchConfig { max_atoms: 1, ..cfg("geq", 1, -1, 1) };
        let all = enumerate_candidates(&x, &c);
        for f in ["x >= 0", "-x >= 0", "x + 1 >= 0", "x - 1 >= 0", "-x + 1 >= 0", "-x - 1 >= 0"] {
            assert!(all.contains(&fml(f)), "{f} missing from {all:?}");
        }
        assert_eq!(all.len(), 6);

        let xy = [Var::new("x"), Var::new("y")];
        let all = enumerate_candidates(&xy, &SearchConfig { max_atoms: 1, ..cfg("eq", 2, -1, 1) });
        assert!(all.contains(&fml("x^2 + y^2 - 1 = 0")));
        let all = enumerate_candidates(&xy, &SearchConfig { budget: 2000, ..cfg("geq,and", 1, -1, 1) });
        assert!(all.contains(&fml("x >= 0 & y >= 0")));
        assert!(all.iter().all(|f| classify(f).is_subset_of(OperatorClass::parse("geq,and").unwrap())));
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let xy = [Var::new("x"), Var::new("y")];
        let all = enumerate_candidates(&xy, &SearchConfig { budget: 5000, ..cfg("geq,gt,and,or", 2, -2, 2) });
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn finds_simple_invariants() {
        let found = search_invariant(&problem(&[("x", "1")], "x >= 0", "x >= 0"), &cfg("geq", 1, -1, 1)).unwrap();
        assert_eq!(found.script.to_string(), "invariant x >= 0");
        let found = search_invariant(&problem(&[("x", "-x")], "x = 0", "x = 0"), &cfg("geq", 2, -1, 1)).unwrap();
        assert_eq!(found.script.to_string(), "invariant -x^2 >= 0");
    }

    #[test]
    fn strict_goal_resists_weak_classes() {
        let c = SearchConfig { budget: 3000, ..cfg("geq,eq,and,or", 2, -1, 1) };
        assert!(search_invariant(&problem(&[("x", "1")], "x > 0", "x > 0"), &c).is_none());
    }

    #[test]
    fn quadrant_needs_one_cut() {
        let p = problem(&[("x", "y"), ("y", "1")], "x >= 0 & y >= 0", "x >= 0 & y >= 0");
        let c = SearchConfig { max_cuts: 1, ..cfg("geq,and", 1, -1, 1) };
        let found = search_with_cuts(&p, &c).unwrap();
        assert_eq!(found.script.to_string(), "cut y >= 0 { invariant y >= 0 } { invariant x >= 0 & y >= 0 }");
        let quartic = problem(&[("x", "y"), ("y", "y^4")], "x >= 0 & y >= 0", "x >= 0 & y >= 0");
        assert!(search_with_cuts(&quartic, &c).is_some());
    }

    #[test]
    fn auxiliary_template() {
        let p = problem(&[("x", "-x")], "x > 0", "x > 0");
        let c = SearchConfig { allow_da: true, max_atoms: 1, ..cfg("gt", 1, -1, 1) };
        let found = search_with_cuts(&p, &c).unwrap();
        assert_eq!(found.script.to_string(), "aux y' = 1/2*y with x*y^2 - 1 = 0 { invariant x*y^2 - 1 = 0 }");
    }

    #[test]
    fn aux_rates_include_halves() {
        let rates = SearchConfig::default().with_range(-2, 2).aux_rates();
        assert_eq!(rates[..4], [rat(1), rat(-1), rat(2), rat(-2)]);
        assert!(rates.contains(&(rat(1) / rat(2))));
    }
}
