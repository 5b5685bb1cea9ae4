//! A small backtracking solver over integer-valued variables.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Node budget shared by every search of one computation.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub(crate) fn tick(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return Err(Error::BudgetExceeded(self.limit));
        }
        Ok(())
    }
}

type Domain<'a> = Box<dyn Fn(&[usize]) -> Vec<usize> + 'a>;
type Check<'a> = Box<dyn Fn(&[usize]) -> bool + 'a>;

/// Variables are assigned in creation order. A domain may read any earlier
/// variable; a check runs once its last variable is assigned.
#[derive(Default)]
pub(crate) struct Csp<'a> {
    domains: Vec<Domain<'a>>,
    checks: Vec<Vec<Check<'a>>>,
}

impl<'a> Csp<'a> {
    pub fn new() -> Self {
        Csp {
            domains: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn var(&mut self, domain: impl Fn(&[usize]) -> Vec<usize> + 'a) -> usize {
        self.domains.push(Box::new(domain));
        self.checks.push(Vec::new());
        self.domains.len() - 1
    }

    /// `vars` lists every variable `check` reads. Checks without variables
    /// are dropped; they cannot depend on the assignment.
    pub fn check(&mut self, vars: &[usize], check: impl Fn(&[usize]) -> bool + 'a) {
        if let Some(&last) = vars.iter().max() {
            self.checks[last].push(Box::new(check));
        }
    }

    pub fn solve(&self, budget: &Budget) -> Result<Vec<Vec<usize>>> {
        let mut values = vec![0; self.domains.len()];
        let mut out = Vec::new();
        self.run(0, &mut values, &mut out, budget)?;
        Ok(out)
    }

    fn run(&self, v: usize, values: &mut [usize], out: &mut Vec<Vec<usize>>, budget: &Budget) -> Result<()> {
        if v == self.domains.len() {
            out.push(values.to_vec());
            return Ok(());
        }
        for value in (self.domains[v])(values) {
            budget.tick()?;
            values[v] = value;
            if self.checks[v].iter().all(|c| c(values)) {
                self.run(v + 1, values, out, budget)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_with_constraint() {
        let mut csp = Csp::new();
        let a = csp.var(|_| (0..3).collect());
        let b = csp.var(|_| (0..3).collect());
        csp.check(&[a, b], move |v| v[a] < v[b]);
        let sols = csp.solve(&Budget::new(100)).unwrap();
        assert_eq!(sols, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(matches!(csp.solve(&Budget::new(3)), Err(Error::BudgetExceeded(3))));
    }

    #[test]
    fn dependent_domain() {
        let mut csp = Csp::new();
        let a = csp.var(|_| vec![1, 2]);
        csp.var(move |v| (0..v[a]).collect());
        assert_eq!(csp.solve(&Budget::new(100)).unwrap().len(), 3);
    }
}
