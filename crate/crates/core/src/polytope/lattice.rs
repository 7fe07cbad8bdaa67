use super::{dot, LatticePolytope};
use crate::error::{Error, Result};
use crate::exec::{Budget, Exec};

/// Depth-first box scan with partial-sum pruning over `a_f . x <= b_f`.
struct Scan {
    a: Vec<Vec<i64>>,
    b: Vec<i128>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    // min_rest[f][k]: smallest possible contribution of coordinates k.. to a_f . x
    min_rest: Vec<Vec<i128>>,
}

impl Scan {
    fn new(a: Vec<Vec<i64>>, b: Vec<i128>, lo: Vec<i64>, hi: Vec<i64>) -> Self {
        let dim = lo.len();
        let min_rest = a
            .iter()
            .map(|row| {
                let mut acc = vec![0i128; dim + 1];
                for k in (0..dim).rev() {
                    let c = row[k] as i128;
                    acc[k] = acc[k + 1] + (c * lo[k] as i128).min(c * hi[k] as i128);
                }
                acc
            })
            .collect();
        Scan { a, b, lo, hi, min_rest }
    }

    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn pruned(&self, s: &[i128], depth: usize) -> bool {
        (0..self.a.len()).any(|f| s[f] + self.min_rest[f][depth] > self.b[f])
    }

    fn run(&self, depth: usize, x: &mut Vec<i64>, s: &mut Vec<i128>, count: &mut u128, out: Option<&mut Vec<Vec<i64>>>) {
        let last = self.dim() - 1;
        if depth == last {
            let (mut l, mut h) = (self.lo[last] as i128, self.hi[last] as i128);
            for f in 0..self.a.len() {
                let c = self.a[f][last] as i128;
                let rhs = self.b[f] - s[f];
                if c > 0 {
                    h = h.min(rhs.div_euclid(c));
                } else if c < 0 {
                    l = l.max(-(rhs.div_euclid(-c)));
                } else if rhs < 0 {
                    return;
                }
            }
            if h >= l {
                *count += (h - l + 1) as u128;
                if let Some(out) = out {
                    for v in l..=h {
                        x[last] = v as i64;
                        out.push(x.clone());
                    }
                }
            }
            return;
        }
        let mut out = out;
        for v in self.lo[depth]..=self.hi[depth] {
            x[depth] = v;
            for f in 0..self.a.len() {
                s[f] += self.a[f][depth] as i128 * v as i128;
            }
            if !self.pruned(s, depth + 1) {
                self.run(depth + 1, x, s, count, out.as_deref_mut());
            }
            for f in 0..self.a.len() {
                s[f] -= self.a[f][depth] as i128 * v as i128;
            }
        }
    }

    /// Splits the outer coordinates into independent prefix tasks.
    fn tasks(&self) -> (usize, Vec<Vec<i64>>) {
        let outer = self.dim() - 1;
        let mut p = 0;
        let mut total: u128 = 1;
        while p < outer && total < 4096 {
            total *= (self.hi[p] - self.lo[p] + 1) as u128;
            p += 1;
        }
        let mut prefixes = vec![Vec::new()];
        for k in 0..p {
            prefixes = prefixes
                .into_iter()
                .flat_map(|pre: Vec<i64>| {
                    (self.lo[k]..=self.hi[k]).map(move |v| {
                        let mut q = pre.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        (p, prefixes)
    }

    fn task(&self, p: usize, prefix: &[i64], collect: bool) -> (u128, Vec<Vec<i64>>) {
        let mut x = self.lo.clone();
        x[..p].copy_from_slice(prefix);
        let s: Vec<i128> = self.a.iter().map(|row| dot(&row[..p], prefix)).collect();
        let mut s = s;
        let mut count = 0;
        let mut out = Vec::new();
        if !self.pruned(&s, p) {
            self.run(p, &mut x, &mut s, &mut count, collect.then_some(&mut out));
        }
        (count, out)
    }

    fn execute(&self, exec: Exec, collect: bool) -> (u128, Vec<Vec<i64>>) {
        let (p, prefixes) = self.tasks();
        let parts = exec.map_slice(&prefixes, |pre| self.task(p, pre, collect));
        let count = parts.iter().map(|(c, _)| c).sum();
        let pts = parts.into_iter().flat_map(|(_, v)| v).collect();
        (count, pts)
    }
}

impl LatticePolytope {
    fn scan_for(&self, n: u64, strict: bool, budget: &Budget) -> Result<Scan> {
        let facets = self.facets()?;
        let d = self.ambient_dim();
        let n = n as i64;
        let lo: Vec<i64> = (0..d).map(|k| self.vertices().iter().map(|v| v[k]).min().unwrap() * n).collect();
        let hi: Vec<i64> = (0..d).map(|k| self.vertices().iter().map(|v| v[k]).max().unwrap() * n).collect();
        let candidates = lo
            .iter()
            .zip(&hi)
            .try_fold(1u128, |acc, (l, h)| acc.checked_mul((h - l + 1) as u128))
            .ok_or(Error::Overflow("bounding box size"))?;
        budget.check_points(candidates)?;
        let a = facets.iter().map(|f| f.halfspace.normal.clone()).collect();
        let b = facets
            .iter()
            .map(|f| f.halfspace.offset as i128 * n as i128 - i128::from(strict))
            .collect();
        Ok(Scan::new(a, b, lo, hi))
    }

    /// Number of lattice points of `nP` (of its interior when `strict`).
    ///
    /// The count is independent of how the box is partitioned among workers.
    pub fn count_lattice_points(&self, n: u64, strict: bool, budget: &Budget, exec: Exec) -> Result<u128> {
        Ok(self.scan_for(n, strict, budget)?.execute(exec, false).0)
    }

    /// Lattice points of `nP` (of its interior when `strict`) in lexicographic order.
    pub fn lattice_points_list(&self, n: u64, strict: bool, budget: &Budget, exec: Exec) -> Result<Vec<Vec<i64>>> {
        Ok(self.scan_for(n, strict, budget)?.execute(exec, true).1)
    }
}
