//! Exact linear programming by the two-phase simplex method with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rel: Relation, rhs: BigRational) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        x: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // Each row holds the coefficient columns followed by the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximises `cost . x` over columns admitted by `allowed`.
    /// Returns `false` when the objective is unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        rc -= &cost[b] * &self.rows[i][j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn objective(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| &cost[b] * self.rhs(i))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Maximises `c . x` subject to `constraints` and `x >= 0`.
pub fn maximize(c: &[BigRational], constraints: &[Constraint]) -> LpOutcome {
    let n = c.len();
    for k in constraints {
        assert_eq!(k.coeffs.len(), n, "constraint width differs from objective");
    }
    // Normalise so every right-hand side is nonnegative.
    let norm: Vec<Constraint> = constraints
        .iter()
        .map(|k| {
            if k.rhs.is_negative() {
                let rel = match k.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                Constraint::new(k.coeffs.iter().map(|x| -x).collect(), rel, -k.rhs.clone())
            } else {
                k.clone()
            }
        })
        .collect();
    let m = norm.len();
    let n_slack = norm.iter().filter(|k| k.rel != Relation::Eq).count();
    let n_art = norm.iter().filter(|k| k.rel != Relation::Le).count();
    let ncols = n + n_slack + n_art;
    let art_start = n + n_slack;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, art_start);
    for k in &norm {
        let mut row = vec![BigRational::zero(); ncols + 1];
        row[..n].clone_from_slice(&k.coeffs);
        row[ncols] = k.rhs.clone();
        match k.rel {
            Relation::Le => {
                row[s] = BigRational::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -BigRational::one();
                s += 1;
                row[a] = BigRational::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = BigRational::one();
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, ncols };

    if n_art > 0 {
        let phase1: Vec<BigRational> = (0..ncols)
            .map(|j| if j >= art_start { -BigRational::one() } else { BigRational::zero() })
            .collect();
        t.optimize(&phase1, &|_| true);
        if !t.objective(&phase1).is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_start {
                match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let mut cost = vec![BigRational::zero(); ncols];
    cost[..n].clone_from_slice(c);
    if !t.optimize(&cost, &|j| j < art_start) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i).clone();
        }
    }
    LpOutcome::Optimal {
        value: t.objective(&cost),
        x,
    }
}

/// A point of `{x >= 0 : constraints}`, if one exists.
pub fn feasible_point(n: usize, constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    match maximize(&vec![BigRational::zero(); n], constraints) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}
