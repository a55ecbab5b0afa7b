//! Exact two-phase simplex over the rationals.
//!
//! Solves `minimize c·x subject to A x = b, x >= 0`. Pivoting follows
//! Bland's rule (lowest-index entering column, lowest-index leaving basic
//! variable among ratio ties), so the method terminates and is deterministic.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    /// Equality constraint rows, each of length `c.len()`.
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal { value: Rational, witness: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LpProblem {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{} constraint rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        if let Some(row) = a.iter().find(|r| r.len() != c.len()) {
            return Err(Error::ShapeMismatch(alloc::format!(
                "constraint row of length {} for {} variables",
                row.len(),
                c.len()
            )));
        }
        Ok(LpProblem { a, b, c })
    }

    /// Checks a candidate point against every constraint exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.c.len()
            && x.iter().all(|v| !v.is_negative())
            && self.a.iter().zip(&self.b).all(|(row, rhs)| dot(row, x) == *rhs)
    }

    pub fn objective(&self, x: &[Rational]) -> Rational {
        dot(&self.c, x)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

struct Tableau {
    /// m constraint rows followed by one objective row; last column is the rhs.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

enum Pivoted {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn rhs(&self, i: usize) -> &Rational {
        &self.t[i][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule on the objective row, considering only `allowed` columns.
    fn run(&mut self, allowed: usize) -> Pivoted {
        let m = self.m();
        loop {
            let obj = &self.t[m];
            let Some(col) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return Pivoted::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..m {
                let a = &self.t[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Pivoted::Unbounded,
            }
        }
    }

    fn load_objective(&mut self, cost: &[Rational]) {
        let m = self.m();
        let mut obj = alloc::vec![Rational::zero(); self.width + 1];
        obj[..cost.len()].clone_from_slice(cost);
        for i in 0..m {
            let cb = &obj[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(&self.t[i]) {
                *o -= cb * v;
            }
        }
        self.t[m] = obj;
    }
}

pub fn lp_solve(prob: &LpProblem) -> LpResult {
    let n = prob.c.len();
    let m = prob.a.len();
    let width = n + m;

    // Phase I: artificial variable per row, rhs made non-negative.
    let mut t = Vec::with_capacity(m + 1);
    for (i, (row, rhs)) in prob.a.iter().zip(&prob.b).enumerate() {
        let flip = rhs.is_negative();
        let mut r = Vec::with_capacity(width + 1);
        r.extend(row.iter().map(|v| if flip { -v } else { v.clone() }));
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -rhs } else { rhs.clone() });
        t.push(r);
    }
    t.push(alloc::vec![Rational::zero(); width + 1]);
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        width,
    };
    let mut phase1 = alloc::vec![Rational::zero(); width];
    for v in &mut phase1[n..] {
        *v = Rational::one();
    }
    tab.load_objective(&phase1);
    // Phase I is bounded below by zero.
    let _ = tab.run(width);
    if !tab.t[m][width].is_zero() {
        return LpResult::Infeasible;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.m() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    // Artificial columns are now dead; zero them so Phase II ignores them.
    let rows = tab.m();
    for r in tab.t.iter_mut().take(rows) {
        for v in &mut r[n..width] {
            *v = Rational::zero();
        }
    }

    tab.load_objective(&prob.c);
    match tab.run(n) {
        Pivoted::Unbounded => LpResult::Unbounded,
        Pivoted::Optimal => {
            let mut witness = alloc::vec![Rational::zero(); n];
            for (i, &bv) in tab.basis.iter().enumerate() {
                witness[bv] = tab.rhs(i).clone();
            }
            let value = dot(&prob.c, &witness);
            LpResult::Optimal { value, witness }
        }
    }
}
