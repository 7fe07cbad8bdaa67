//! Exact lattice polytopes given by generating points.

mod cyclic;
mod lattice;
mod pulling;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{det, hermite_rows};
use crate::error::{invalid, Error, Result};
use crate::lp::{feasible_point, Constraint, Relation};

pub use cyclic::{combinatorially_equivalent, cyclic_polytope, gale_facets};
pub use pulling::pulling_triangulation;

/// Upper limit on vertex subsets examined by a facet scan.
pub const FACET_SCAN_LIMIT: u128 = 20_000_000;

/// `normal . x <= offset` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Halfspace {
    /// Divides by the content of `normal`; the offset is rounded down,
    /// which keeps every lattice point of the original halfspace.
    pub fn new(normal: Vec<i64>, offset: i64) -> Self {
        let g = normal.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        assert!(g != 0, "halfspace needs a nonzero normal");
        Halfspace {
            normal: normal.iter().map(|&x| x / g).collect(),
            offset: Integer::div_floor(&offset, &g),
        }
    }

    /// `normal . x >= offset`, stored as `-normal . x <= -offset`.
    pub fn at_least(normal: Vec<i64>, offset: i64) -> Self {
        Self::new(normal.iter().map(|x| -x).collect(), -offset)
    }

    pub fn eval(&self, x: &[i64]) -> i128 {
        dot(&self.normal, x)
    }

    /// `offset - normal . x`; nonnegative on the halfspace.
    pub fn slack(&self, x: &[i64]) -> i128 {
        self.offset as i128 - self.eval(x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.slack(x) >= 0
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}.x <= {}", self.normal, self.offset)
    }
}

pub(crate) fn dot(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&p, &q)| p as i128 * q as i128).sum()
}

/// A facet inequality together with the vertices it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub halfspace: Halfspace,
    /// Indices into [`LatticePolytope::vertices`], increasing.
    pub vertices: Vec<usize>,
}

/// Dimension and integral equations `a . x = b` of the affine hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineHull {
    pub dim: usize,
    pub equations: Vec<(Vec<i64>, i64)>,
}

impl AffineHull {
    pub fn satisfies(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|(a, b)| dot(a, x) == *b as i128)
    }
}

/// Graph on the facets, joining two facets that meet in a ridge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetRidgeGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl FacetRidgeGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.degrees().iter().all(|&d| d == k)
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Convex hull of finitely many integer points.
///
/// Vertices, affine hull and facets are computed on first use and cached.
pub struct LatticePolytope {
    ambient: usize,
    points: Vec<Vec<i64>>,
    hull: OnceLock<AffineHull>,
    vertex_idx: OnceLock<Vec<usize>>,
    vertices: OnceLock<Vec<Vec<i64>>>,
    facets: OnceLock<Result<Vec<Facet>>>,
}

impl Clone for LatticePolytope {
    fn clone(&self) -> Self {
        LatticePolytope {
            ambient: self.ambient,
            points: self.points.clone(),
            hull: self.hull.clone(),
            vertex_idx: self.vertex_idx.clone(),
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
        }
    }
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticePolytope")
            .field("ambient", &self.ambient)
            .field("points", &self.points.len())
            .finish()
    }
}

impl LatticePolytope {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let ambient = points.first().ok_or_else(|| invalid("polytope needs at least one point"))?.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(invalid("points of differing dimension"));
        }
        Ok(LatticePolytope {
            ambient,
            points,
            hull: OnceLock::new(),
            vertex_idx: OnceLock::new(),
            vertices: OnceLock::new(),
            facets: OnceLock::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.affine_hull().dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn translate(&self, by: &[i64]) -> Result<Self> {
        Self::new(self.points.iter().map(|p| p.iter().zip(by).map(|(a, b)| a + b).collect()).collect())
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        Self::new(self.points.iter().map(|p| p.iter().map(|a| a * k).collect()).collect())
    }

    pub fn affine_hull(&self) -> &AffineHull {
        self.hull.get_or_init(|| affine_hull_of(&self.points))
    }

    /// Generator indices of the vertices, increasing; duplicates keep their first copy.
    pub fn vertex_indices(&self) -> &[usize] {
        self.vertex_idx.get_or_init(|| {
            if self.points.len() > 64 && self.is_full_dimensional() {
                refine_vertices(&self.points)
            } else {
                lp_vertices(&self.points)
            }
        })
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        self.vertices
            .get_or_init(|| self.vertex_indices().iter().map(|&i| self.points[i].clone()).collect())
    }

    /// Irredundant facet description, sorted by halfspace.
    pub fn facets(&self) -> Result<&[Facet]> {
        self.facets
            .get_or_init(|| {
                if self.dim() == 0 {
                    return Err(invalid("a point has no facets"));
                }
                if !self.is_full_dimensional() {
                    return Err(Error::NotFullDimensional {
                        dim: self.dim(),
                        ambient: self.ambient,
                    });
                }
                facet_scan(self.vertices(), self.ambient)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    pub fn halfspaces(&self) -> Result<Vec<Halfspace>> {
        Ok(self.facets()?.iter().map(|f| f.halfspace.clone()).collect())
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        Ok(self.facets()?.iter().all(|f| f.halfspace.contains(x)))
    }

    pub fn is_simplicial(&self) -> Result<bool> {
        let d = self.dim();
        Ok(self.facets()?.iter().all(|f| f.vertices.len() == d))
    }

    pub fn facet_ridge_graph(&self) -> Result<FacetRidgeGraph> {
        let facets = self.facets()?;
        let d = self.dim();
        let verts = self.vertices();
        let mut edges = Vec::new();
        for (a, b) in (0..facets.len()).tuple_combinations() {
            let common: Vec<usize> = facets[a]
                .vertices
                .iter()
                .filter(|v| facets[b].vertices.binary_search(v).is_ok())
                .copied()
                .collect();
            if common.len() + 1 < d {
                continue;
            }
            let pts: Vec<Vec<i64>> = common.iter().map(|&i| verts[i].clone()).collect();
            if affine_hull_of(&pts).dim + 2 == d {
                edges.push((a, b));
            }
        }
        Ok(FacetRidgeGraph {
            nodes: facets.len(),
            edges,
        })
    }

    /// Reflexivity test relative to the unique interior lattice point.
    ///
    /// Returns `Err` with a reason when the polytope has no unique
    /// interior lattice point, and `Ok(false)` when some facet sits at
    /// lattice distance other than 1 from it.
    pub fn reflexivity(&self) -> Result<std::result::Result<bool, String>> {
        let interior = self.lattice_points_list(1, true, &crate::Budget::default(), crate::Exec::default())?;
        if interior.len() != 1 {
            return Ok(Err(format!("{} interior lattice points", interior.len())));
        }
        let p = &interior[0];
        Ok(Ok(self.facets()?.iter().all(|f| f.halfspace.slack(p) == 1)))
    }

    pub fn is_reflexive(&self) -> Result<bool> {
        Ok(self.reflexivity()?.unwrap_or(false))
    }

    /// Convex hull of the interior lattice points, or `None` if there are none.
    pub fn interior_polytope(&self, budget: &crate::Budget, exec: crate::Exec) -> Result<Option<LatticePolytope>> {
        let pts = self.lattice_points_list(1, true, budget, exec)?;
        if pts.is_empty() {
            return Ok(None);
        }
        Ok(Some(LatticePolytope::new(pts)?))
    }
}

/// Lexicographically largest point among those maximising `c . x`; always a vertex.
fn argmax(points: &[Vec<i64>], c: &[i64]) -> usize {
    let mut best = 0;
    for i in 1..points.len() {
        let (a, b) = (dot(c, &points[i]), dot(c, &points[best]));
        if a > b || (a == b && points[i] > points[best]) {
            best = i;
        }
    }
    best
}

fn differences(points: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    // ambient x (n - 1) matrix of p_k - p_0
    let n = points[0].len();
    (0..n)
        .map(|r| points[1..].iter().map(|p| BigInt::from(p[r] - points[0][r])).collect())
        .collect()
}

pub(crate) fn affine_hull_of(points: &[Vec<i64>]) -> AffineHull {
    let n = points[0].len();
    let diffs = differences(points);
    let e = hermite_rows(&diffs, points.len() - 1);
    let equations = e.u[e.rank..]
        .iter()
        .map(|row| {
            let a: Vec<i64> = row.iter().map(|x| x.to_i64().expect("hull equation exceeds i64")).collect();
            let b = dot(&a, &points[0]) as i64;
            (a, b)
        })
        .collect();
    debug_assert_eq!(e.u.len(), n);
    AffineHull { dim: e.rank, equations }
}

fn lp_vertices(points: &[Vec<i64>]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        if points[..i].contains(&points[i]) {
            continue;
        }
        let others: Vec<&Vec<i64>> = points.iter().filter(|p| **p != points[i]).collect();
        if others.is_empty() {
            out.push(i);
            continue;
        }
        let m = others.len();
        let mut cs: Vec<Constraint> = (0..points[i].len())
            .map(|k| {
                Constraint::new(
                    others.iter().map(|p| BigRational::from_integer(p[k].into())).collect(),
                    Relation::Eq,
                    BigRational::from_integer(points[i][k].into()),
                )
            })
            .collect();
        cs.push(Constraint::new(
            vec![BigRational::from_integer(1.into()); m],
            Relation::Eq,
            BigRational::from_integer(1.into()),
        ));
        if feasible_point(m, &cs).is_none() {
            out.push(i);
        }
    }
    out
}

/// Grows a set of known vertices until its hull swallows every point.
fn refine_vertices(points: &[Vec<i64>]) -> Vec<usize> {
    let n = points[0].len();
    let mut unit = vec![0; n];
    unit[0] = 1;
    let mut known: BTreeSet<usize> = BTreeSet::from([argmax(points, &unit)]);
    loop {
        let pts: Vec<Vec<i64>> = known.iter().map(|&i| points[i].clone()).collect();
        let hull = affine_hull_of(&pts);
        if hull.dim == n {
            break;
        }
        let mut grown = false;
        for (a, b) in &hull.equations {
            let hi = argmax(points, a);
            if dot(a, &points[hi]) > *b as i128 {
                grown |= known.insert(hi);
                break;
            }
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            let lo = argmax(points, &neg);
            if dot(&neg, &points[lo]) > -(*b as i128) {
                grown |= known.insert(lo);
                break;
            }
        }
        assert!(grown, "point set is full-dimensional");
    }
    loop {
        let pts: Vec<Vec<i64>> = known.iter().map(|&i| points[i].clone()).collect();
        let facets = facet_scan(&pts, n).expect("refinement hull stays small");
        let mut added = false;
        for f in &facets {
            let best = argmax(points, &f.halfspace.normal);
            if !f.halfspace.contains(&points[best]) {
                added |= known.insert(best);
            }
        }
        if !added {
            break;
        }
    }
    known.into_iter().collect()
}

/// Primitive normal of the hyperplane through `dim` points, if they span one.
fn hyperplane_normal(pts: &[&Vec<i64>]) -> Option<Vec<i64>> {
    let n = pts[0].len();
    let rows: Vec<Vec<i64>> = pts[1..].iter().map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect()).collect();
    let minors: Vec<BigInt> = (0..n)
        .map(|k| {
            let sub: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, &x)| x).collect())
                .collect();
            let m = det(&sub);
            if k % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    let g = minors.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    Some(minors.iter().map(|x| (x / &g).to_i64().expect("facet normal exceeds i64")).collect())
}

/// Facets of a full-dimensional point configuration by scanning `dim`-subsets.
pub(crate) fn facet_scan(vertices: &[Vec<i64>], dim: usize) -> Result<Vec<Facet>> {
    let subsets = crate::arith::binomial(vertices.len() as i64, dim as i64);
    let limit = BigInt::from(FACET_SCAN_LIMIT);
    if subsets > limit {
        return Err(Error::Budget {
            resource: "facet scan subsets",
            required: subsets.to_u128().unwrap_or(u128::MAX),
            limit: FACET_SCAN_LIMIT,
        });
    }
    let mut found: BTreeSet<Halfspace> = BTreeSet::new();
    for combo in (0..vertices.len()).combinations(dim) {
        let pts: Vec<&Vec<i64>> = combo.iter().map(|&i| &vertices[i]).collect();
        let Some(normal) = hyperplane_normal(&pts) else {
            continue;
        };
        let b = dot(&normal, pts[0]);
        let (mut above, mut below) = (false, false);
        for v in vertices {
            let s = dot(&normal, v);
            above |= s > b;
            below |= s < b;
        }
        match (above, below) {
            (false, true) => {
                found.insert(Halfspace::new(normal, b as i64));
            }
            (true, false) => {
                found.insert(Halfspace::new(normal.iter().map(|x| -x).collect(), -b as i64));
            }
            _ => {}
        }
    }
    Ok(found
        .into_iter()
        .map(|h| {
            let vs = (0..vertices.len()).filter(|&i| h.slack(&vertices[i]) == 0).collect();
            Facet { halfspace: h, vertices: vs }
        })
        .collect())
}
