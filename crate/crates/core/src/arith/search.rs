//! Counterexample search: integer grid shells, then random rationals.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formulas::{CompiledFormula, Formula};
use crate::terms::{Point, Rational, Var};

/// Integer points of `[-r, r]^n`, ordered by max-norm shell, then
/// lexicographically with values ordered 0, 1, -1, 2, -2, ...
pub struct GridShells {
    n: usize,
    radius: i64,
    shell: i64,
    idx: Vec<usize>,
    done: bool,
}

impl GridShells {
    pub fn new(n: usize, radius: i64) -> GridShells {
        GridShells { n, radius, shell: 0, idx: vec![0; n], done: false }
    }

    fn value(i: usize) -> i64 {
        let k = i.div_ceil(2) as i64;
        if i % 2 == 1 {
            k
        } else {
            -k
        }
    }

    fn advance(&mut self) {
        let width = (2 * self.shell + 1) as usize;
        for d in (0..self.n).rev() {
            self.idx[d] += 1;
            if self.idx[d] < width {
                return;
            }
            self.idx[d] = 0;
        }
        self.shell += 1;
        if self.shell > self.radius {
            self.done = true;
        }
        self.idx.iter_mut().for_each(|i| *i = 0);
    }
}

impl Iterator for GridShells {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            if self.done {
                return None;
            }
            let point: Vec<i64> = self.idx.iter().map(|&i| Self::value(i)).collect();
            let on_shell = point.iter().any(|v| v.abs() == self.shell) || self.n == 0;
            if self.n == 0 {
                self.done = true;
                return Some(point);
            }
            self.advance();
            if on_shell {
                return Some(point);
            }
        }
    }
}

pub struct WitnessSearch<'a> {
    pub vars: &'a [Var],
    pub assumptions: &'a Formula,
    pub goal: &'a Formula,
}

impl WitnessSearch<'_> {
    fn exact_refutes(&self, point: &Point) -> bool {
        matches!(self.assumptions.eval(point), Ok(true)) && matches!(self.goal.eval(point), Ok(false))
    }

    fn to_point(&self, values: &[Rational]) -> Point {
        self.vars.iter().cloned().zip(values.iter().cloned()).collect()
    }

    /// First exact counterexample among the grid points and `random`
    /// random rationals with numerators and denominators up to `magnitude`.
    pub fn run(&self, radius: i64, grid_cap: usize, random: usize, magnitude: i64, seed: u64) -> Option<Point> {
        let ca = CompiledFormula::new(self.assumptions, self.vars);
        let cg = CompiledFormula::new(self.goal, self.vars);
        let screen = |xs: &[f64]| ca.eval3(xs) != Some(false) && cg.eval3(xs) != Some(true);
        for p in GridShells::new(self.vars.len(), radius).take(grid_cap) {
            let xs: Vec<f64> = p.iter().map(|v| *v as f64).collect();
            if screen(&xs) {
                let vals: Vec<Rational> = p.iter().map(|v| Rational::from_integer(BigInt::from(*v))).collect();
                let pt = self.to_point(&vals);
                if self.exact_refutes(&pt) {
                    return Some(pt);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random {
            let vals: Vec<Rational> = (0..self.vars.len())
                .map(|_| {
                    let n: i64 = rng.gen_range(-magnitude..=magnitude);
                    let d: i64 = rng.gen_range(1..=magnitude);
                    Rational::new(n.into(), d.into())
                })
                .collect();
            let xs: Vec<f64> = vals.iter().map(crate::terms::rational_to_f64).collect();
            if screen(&xs) {
                let pt = self.to_point(&vals);
                if self.exact_refutes(&pt) {
                    return Some(pt);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_cover_the_box_once() {
        let pts: Vec<_> = GridShells::new(2, 2).collect();
        assert_eq!(pts.len(), 25);
        assert_eq!(pts[0], vec![0, 0]);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 25);
        let norms: Vec<i64> = pts.iter().map(|p| p.iter().map(|v| v.abs()).max().unwrap()).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn zero_dimensional_grid() {
        assert_eq!(GridShells::new(0, 5).collect::<Vec<_>>(), vec![Vec::<i64>::new()]);
    }
}
