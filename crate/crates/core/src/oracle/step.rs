use std::collections::HashMap;

use rug::{Integer, Rational};

use super::OracleError;
use crate::walk::WalkSpec;

/// Exact `P_n` in lattice coordinates, stored as integer weights over a
/// common denominator.
#[derive(Clone, Debug)]
pub struct StepDistribution {
    pub n: u32,
    denom: Integer,
    weights: HashMap<(i64, i64), Integer>,
}

impl StepDistribution {
    pub fn prob(&self, x: (i64, i64)) -> Rational {
        match self.weights.get(&x) {
            Some(w) => Rational::from((w.clone(), self.denom.clone())),
            None => Rational::new(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.weights.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Sum of all probabilities, exactly.
    pub fn total(&self) -> Rational {
        let s: Integer = self.weights.values().sum();
        Rational::from((s, self.denom.clone()))
    }
}

/// Largest support `step_distribution` will build.
pub const SUPPORT_BUDGET: usize = 1_000_000;

/// `P_n` by repeated exact convolution with the step distribution.
pub fn step_distribution(walk: &WalkSpec, n: u32) -> Result<StepDistribution, OracleError> {
    let reach = walk.steps.iter().map(|s| s.coords.0.abs().max(s.coords.1.abs())).max().unwrap_or(0);
    let side = 2 * reach as u128 * n as u128 + 1;
    if side * side > SUPPORT_BUDGET as u128 {
        return Err(OracleError::Budget(format!("support of P_{n} may reach {} points", side * side)));
    }
    let d = walk.steps.iter().fold(Integer::from(1), |acc, s| acc.lcm(s.p.denom()));
    let steps: Vec<((i64, i64), Integer)> =
        walk.steps.iter().map(|s| (s.coords, Integer::from(s.p.numer() * (&d / Integer::from(s.p.denom()))))).collect();
    let mut weights: HashMap<(i64, i64), Integer> = HashMap::from([((0, 0), Integer::from(1))]);
    for _ in 0..n {
        let mut next: HashMap<(i64, i64), Integer> = HashMap::with_capacity(weights.len() * 2);
        for (x, w) in &weights {
            for (v, p) in &steps {
                *next.entry((x.0 + v.0, x.1 + v.1)).or_default() += Integer::from(w * p);
            }
        }
        weights = next;
    }
    weights.retain(|_, w| *w != 0);
    Ok(StepDistribution { n, denom: rug::ops::Pow::pow(d, n), weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let simple = WalkSpec::bundled("z2-simple").unwrap();
        let p0 = step_distribution(&simple, 0).unwrap();
        assert_eq!(p0.prob((0, 0)), 1);
        assert_eq!(p0.support_len(), 1);
        assert_eq!(step_distribution(&simple, 2).unwrap().prob((0, 0)), Rational::from((1, 4)));
        let tri = WalkSpec::bundled("tri-directed").unwrap();
        assert_eq!(step_distribution(&tri, 3).unwrap().prob((0, 0)), Rational::from((2, 9)));
    }

    #[test]
    fn enumeration_agrees_for_three_steps() {
        let tri = WalkSpec::bundled("tri-directed").unwrap();
        let p3 = step_distribution(&tri, 3).unwrap();
        let mut count: HashMap<(i64, i64), u32> = HashMap::new();
        for a in &tri.steps {
            for b in &tri.steps {
                for c in &tri.steps {
                    let x = (a.coords.0 + b.coords.0 + c.coords.0, a.coords.1 + b.coords.1 + c.coords.1);
                    *count.entry(x).or_default() += 1;
                }
            }
        }
        for (x, k) in count {
            assert_eq!(p3.prob(x), Rational::from((k, 27)));
        }
    }

    #[test]
    fn mass_is_exactly_one() {
        for name in ["z2-simple", "z2-king", "tri-directed"] {
            let w = WalkSpec::bundled(name).unwrap();
            for n in [1, 7, 30, 60] {
                assert_eq!(step_distribution(&w, n).unwrap().total(), 1, "{name} n={n}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let w = WalkSpec::bundled("z2-simple").unwrap();
        assert!(matches!(step_distribution(&w, 600), Err(OracleError::Budget(_))));
    }
}
