//! Numeric semantics: fixed-step RK4, a sampling falsifier and the
//! derivation-lemma deviation check. Results here are advisory; they never
//! close or refute a proof.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::derivation::{lie_derivative, OdeSystem};
use crate::formulas::CompiledFormula;
use crate::kernel::Problem;
use crate::terms::{fmt_rational, rat, rational_to_f64, CompiledPoly, Point, Polynomial, Rational, Var};

pub const OVERFLOW_GUARD: f64 = 1e9;
pub const MAX_STEPS: usize = 50_000_000;
/// Slack allowed on domain atoms and required on postcondition violations.
pub const TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumsimError {
    #[error("step {h} is not positive")]
    BadStep { h: f64 },
    #[error("horizon {t} is negative")]
    BadHorizon { t: f64 },
    #[error("{steps} steps exceed the cap of {MAX_STEPS}")]
    StepTooSmall { steps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub vars: Vec<Var>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Set when the overflow guard cut the run short.
    pub diverged: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> BTreeMap<Var, f64> {
        self.vars.iter().cloned().zip(self.states[i].iter().copied()).collect()
    }

    pub fn last(&self) -> BTreeMap<Var, f64> {
        self.state(self.len() - 1)
    }

    pub fn value(&self, i: usize, v: &Var) -> Option<f64> {
        self.vars.iter().position(|w| w == v).map(|k| self.states[i][k])
    }
}

/// Right-hand sides compiled against a fixed layout; variables without an
/// equation are constants.
struct Field {
    layout: Vec<Var>,
    rhs: Vec<Option<CompiledPoly>>,
}

impl Field {
    fn new(sys: &OdeSystem, extra: impl IntoIterator<Item = Var>) -> Field {
        let mut vars: BTreeSet<Var> = sys.symbols();
        vars.extend(extra);
        let layout: Vec<Var> = vars.into_iter().collect();
        let rhs = layout.iter().map(|v| sys.equations.get(v).map(|p| CompiledPoly::new(p, &layout))).collect();
        Field { layout, rhs }
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        for (o, r) in out.iter_mut().zip(&self.rhs) {
            *o = r.as_ref().map_or(0.0, |p| p.eval(x));
        }
    }

    fn step(&self, x: &[f64], h: f64) -> Vec<f64> {
        let n = x.len();
        let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut tmp = vec![0.0; n];
        self.eval(x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        self.eval(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        self.eval(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        self.eval(&tmp, &mut k4);
        (0..n).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
    }
}

fn step_count(h: f64, t: f64) -> Result<usize, NumsimError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(NumsimError::BadStep { h });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(NumsimError::BadHorizon { t });
    }
    let steps = (t / h - 1e-9).ceil().max(0.0);
    if steps > MAX_STEPS as f64 {
        return Err(NumsimError::StepTooSmall { steps });
    }
    Ok(steps as usize)
}

/// Runs RK4 from `init`, calling `visit(t, x)` on every state including
/// the first; stops when `visit` returns false. Unset variables start at 0.
fn run(
    field: &Field,
    init: &BTreeMap<Var, f64>,
    h: f64,
    t_end: f64,
    mut visit: impl FnMut(f64, &[f64]) -> bool,
) -> Result<bool, NumsimError> {
    let steps = step_count(h, t_end)?;
    let mut x: Vec<f64> = field.layout.iter().map(|v| init.get(v).copied().unwrap_or(0.0)).collect();
    let mut t = 0.0;
    if !visit(t, &x) {
        return Ok(false);
    }
    for i in 0..steps {
        let dt = if i + 1 == steps { t_end - h * i as f64 } else { h };
        x = field.step(&x, dt);
        t = if i + 1 == steps { t_end } else { h * (i + 1) as f64 };
        if x.iter().any(|v| !v.is_finite() || v.abs() > OVERFLOW_GUARD) {
            return Ok(true);
        }
        if !visit(t, &x) {
            return Ok(false);
        }
    }
    Ok(false)
}

pub fn integrate(sys: &OdeSystem, init: &BTreeMap<Var, f64>, h: f64, t_end: f64) -> Result<Trajectory, NumsimError> {
    let field = Field::new(sys, init.keys().cloned());
    let mut times = Vec::new();
    let mut states = Vec::new();
    let diverged = run(&field, init, h, t_end, |t, x| {
        times.push(t);
        states.push(x.to_vec());
        true
    })?;
    Ok(Trajectory { vars: field.layout, times, states, diverged })
}

/// Largest gap between a centered difference of `c` along the trajectory
/// and the Lie derivative of `c` at the same state.
pub fn derivation_lemma_deviation(
    c: &Polynomial,
    sys: &OdeSystem,
    init: &BTreeMap<Var, f64>,
    h: f64,
    t_end: f64,
) -> Result<f64, NumsimError> {
    let mut start = init.clone();
    for v in c.vars() {
        start.entry(v).or_insert(0.0);
    }
    let traj = integrate(sys, &start, h, t_end)?;
    let value = CompiledPoly::new(c, &traj.vars);
    let derived = CompiledPoly::new(&lie_derivative(c, sys), &traj.vars);
    let vals: Vec<f64> = traj.states.iter().map(|x| value.eval(x)).collect();
    let mut worst: f64 = 0.0;
    for i in 1..vals.len().saturating_sub(1) {
        let span = traj.times[i + 1] - traj.times[i - 1];
        let fd = (vals[i + 1] - vals[i - 1]) / span;
        worst = worst.max((fd - derived.eval(&traj.states[i])).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FalsifyConfig {
    pub samples: usize,
    /// Every variable is sampled from `[lo, hi]`.
    pub bounds: (Rational, Rational),
    pub step: f64,
    pub time: f64,
    pub seed: u64,
}

impl Default for FalsifyConfig {
    fn default() -> FalsifyConfig {
        FalsifyConfig { samples: 1000, bounds: (rat(-5), rat(5)), step: 1e-3, time: 10.0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    #[serde(serialize_with = "ser_point")]
    pub initial: Point,
    pub exit_time: f64,
    pub exit_state: BTreeMap<Var, f64>,
    pub margin: f64,
    /// Which sample produced it.
    pub sample: usize,
}

fn ser_point<S: serde::Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(p.iter().map(|(k, v)| (k.name().to_string(), fmt_rational(v))))
}

fn problem_vars(problem: &Problem) -> BTreeSet<Var> {
    let mut vs = problem.sys.symbols();
    vs.extend(problem.pre.vars());
    vs.extend(problem.post.vars());
    vs
}

/// Sample 0 is the lower corner of the box; the rest are uniform on the
/// grid of quarters inside it.
fn sample_point(vars: &[Var], cfg: &FalsifyConfig, rng: &mut ChaCha8Rng, index: usize) -> Point {
    let (lo, hi) = &cfg.bounds;
    if index == 0 {
        return vars.iter().map(|v| (v.clone(), lo.clone())).collect();
    }
    let four = rat(4);
    let a = (lo * &four).ceil().to_integer().to_i64().unwrap_or(i64::MIN / 2);
    let b = (hi * &four).floor().to_integer().to_i64().unwrap_or(i64::MAX / 2);
    vars.iter()
        .map(|v| {
            let k = if a < b { rng.gen_range(a..=b) } else { a };
            (v.clone(), Rational::new(k.into(), 4.into()))
        })
        .collect()
}

/// Rejection-samples initial states satisfying the precondition exactly and
/// integrates each one, reporting the first that violates the
/// postcondition by more than the tolerance while still in the domain.
pub fn falsify(problem: &Problem, cfg: &FalsifyConfig) -> Result<Option<Counterexample>, NumsimError> {
    step_count(cfg.step, cfg.time)?;
    let vars: Vec<Var> = problem_vars(problem).into_iter().collect();
    let field = Field::new(&problem.sys, vars.iter().cloned());
    let domain = CompiledFormula::new(&problem.sys.domain, &field.layout);
    let post = CompiledFormula::new(&problem.post, &field.layout);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for index in 0..cfg.samples {
        let initial = sample_point(&vars, cfg, &mut rng, index);
        if !matches!(problem.pre.eval(&initial), Ok(true)) {
            continue;
        }
        let start: BTreeMap<Var, f64> = initial.iter().map(|(k, v)| (k.clone(), rational_to_f64(v))).collect();
        let mut hit = None;
        run(&field, &start, cfg.step, cfg.time, |t, x| {
            if domain.violation(x) > TOLERANCE {
                return false;
            }
            let margin = post.violation(x);
            if margin > TOLERANCE {
                hit = Some((t, x.to_vec(), margin));
                return false;
            }
            true
        })?;
        if let Some((exit_time, x, margin)) = hit {
            assert!(problem.pre.eval(&initial).unwrap_or(false), "sampled start must satisfy the precondition");
            let exit_state = field.layout.iter().cloned().zip(x).collect();
            return Ok(Some(Counterexample { initial, exit_time, exit_state, margin, sample: index }));
        }
    }
    Ok(None)
}

pub fn describe(c: &Counterexample) -> String {
    let start: Vec<String> = c.initial.iter().map(|(k, v)| format!("{k} = {}", fmt_rational(v))).collect();
    let end: Vec<String> = c.exit_state.iter().map(|(k, v)| format!("{k} = {v:.6}")).collect();
    format!(
        "counterexample from {} leaves the postcondition at t = {:.4} (margin {:.3e}) at {}",
        start.join(", "),
        c.exit_time,
        c.margin,
        end.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::fml;
    use crate::terms::poly;

    fn init(pairs: &[(&str, f64)]) -> BTreeMap<Var, f64> {
        pairs.iter().map(|(k, v)| (Var::new(k), *v)).collect()
    }

    #[test]
    fn rotation_returns_home() {
        let sys = OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true");
        let tr = integrate(&sys, &init(&[("x", 1.0), ("y", 0.0)]), 1e-3, 2.0 * std::f64::consts::PI).unwrap();
        let end = tr.last();
        assert!((end[&Var::new("x")] - 1.0).abs() < 1e-6 && end[&Var::new("y")].abs() < 1e-6);
        for s in &tr.states {
            assert!((s[0] * s[0] + s[1] * s[1] - 1.0).abs() < 1e-6);
        }
        assert_eq!(tr.times[0], 0.0);
        assert!((tr.times[1] - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn closed_forms() {
        let decay = OdeSystem::from_text(&[("x", "-x")], "true");
        let tr = integrate(&decay, &init(&[("x", 1.0)]), 1e-3, 1.0).unwrap();
        assert!((tr.last()[&Var::new("x")] - (-1.0f64).exp()).abs() < 1e-6);
        let line = OdeSystem::from_text(&[("x", "1")], "true");
        let tr = integrate(&line, &init(&[("x", 0.0)]), 1e-3, 1.0).unwrap();
        assert!((tr.last()[&Var::new("x")] - 1.0).abs() < 1e-9);
        assert_eq!(*tr.times.last().unwrap(), 1.0);
    }

    #[test]
    fn guards() {
        let sys = OdeSystem::from_text(&[("x", "x^2")], "true");
        let tr = integrate(&sys, &init(&[("x", 1.0)]), 1e-3, 5.0).unwrap();
        assert!(tr.diverged);
        assert!(matches!(integrate(&sys, &init(&[]), 0.0, 1.0), Err(NumsimError::BadStep { .. })));
        assert!(matches!(integrate(&sys, &init(&[]), 1e-12, 1.0), Err(NumsimError::StepTooSmall { .. })));
    }

    #[test]
    fn deviation_examples() {
        let rot = OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true");
        let d = derivation_lemma_deviation(&poly("x^2 + y^2"), &rot, &init(&[("x", 0.3), ("y", -1.2)]), 1e-3, 1.0).unwrap();
        assert!(d <= 1e-6, "{d}");
        let line = OdeSystem::from_text(&[("x", "1")], "true");
        assert!(derivation_lemma_deviation(&poly("x"), &line, &init(&[("x", 0.0)]), 1e-3, 1.0).unwrap() <= 1e-9);
        let damped = OdeSystem::from_text(&[("x", "y"), ("y", "-w^2*x - 2*d*w*y")], "true");
        let start = init(&[("x", 1.0), ("y", 0.0), ("w", 1.0), ("d", 0.5)]);
        let coarse = derivation_lemma_deviation(&poly("w^2*x^2 + y^2"), &damped, &start, 1e-3, 1.0).unwrap();
        let fine = derivation_lemma_deviation(&poly("w^2*x^2 + y^2"), &damped, &start, 5e-4, 1.0).unwrap();
        assert!(coarse <= 1e-4);
        assert!(fine * 2.0 <= coarse, "{fine} vs {coarse}");
    }

    fn problem(eqs: &[(&str, &str)], pre: &str, post: &str) -> Problem {
        Problem::new(OdeSystem::from_text(eqs, "true"), fml(pre), fml(post))
    }

    #[test]
    fn falsifier_examples() {
        let cfg = FalsifyConfig { bounds: (rat(1), rat(5)), ..FalsifyConfig::default() };
        let c = falsify(&problem(&[("x", "-1")], "x >= 0", "x >= 0"), &cfg).unwrap().unwrap();
        assert_eq!(c.initial[&Var::new("x")], rat(1));
        assert!((c.exit_time - 1.0).abs() < 0.01, "{}", c.exit_time);

        let c = falsify(&problem(&[("x", "1"), ("y", "y")], "-(x-y)^2 >= 0", "-(x-y)^2 >= 0"), &cfg).unwrap().unwrap();
        assert_eq!(c.initial[&Var::new("x")], rat(1));
        assert!(c.exit_time < 0.1);

        let rot = problem(&[("x", "y"), ("y", "-x")], "x^2 + y^2 >= 1", "x^2 + y^2 >= 2");
        assert!(falsify(&rot, &FalsifyConfig::default()).unwrap().is_some());

        let cfg = FalsifyConfig { samples: 200, time: 2.0, ..FalsifyConfig::default() };
        let sound = problem(&[("x", "y"), ("y", "-x")], "x^2 + y^2 >= 1", "x^2 + y^2 >= 1");
        assert!(falsify(&sound, &cfg).unwrap().is_none());
    }

    #[test]
    fn falsifier_respects_domain() {
        let sys = OdeSystem::from_text(&[("x", "-1")], "x >= 1/2");
        let p = Problem::new(sys, fml("x >= 1"), fml("x >= 0"));
        assert!(falsify(&p, &FalsifyConfig { samples: 100, ..FalsifyConfig::default() }).unwrap().is_none());
    }
}
