//! Ehrhart counting, h*-vectors and their properties.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binomial, smith};
use crate::error::{invalid, Error, Result};
use crate::family::facet_families;
use crate::polytope::LatticePolytope;
use crate::triangulate::{edgewise_subdivision, f_vector_of, h_vector_of};
use crate::{Budget, Exec};

/// Integer coefficient vector `c_0 + c_1 t + ...` of a declared length.
///
/// Trailing zeros are kept: an h*-vector has exactly `dim + 1` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial(pub Vec<BigInt>);

impl IntPolynomial {
    pub fn from_i64(c: &[i64]) -> Self {
        IntPolynomial(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree after trimming trailing zeros; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPolynomial(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial(out)
    }

    /// Pads with zeros (or drops trailing zeros) to exactly `n` coefficients.
    pub fn with_len(mut self, n: usize) -> Result<Self> {
        if self.0.len() > n && self.0[n..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Verification(format!("polynomial has nonzero coefficients beyond length {n}")));
        }
        self.0.resize(n, BigInt::zero());
        Ok(self)
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `h*_i = sum_{j<=i} (-1)^j C(dim+1, j) E(i-j)` from `E(0), ..., E(dim)`.
pub fn hstar_from_counts(counts: &[BigInt], dim: usize) -> Result<IntPolynomial> {
    if counts.len() != dim + 1 {
        return Err(invalid(format!("need {} counts, got {}", dim + 1, counts.len())));
    }
    let h: Vec<BigInt> = (0..=dim)
        .map(|i| {
            (0..=i).fold(BigInt::zero(), |acc, j| {
                let t = binomial(dim as i64 + 1, j as i64) * &counts[i - j];
                if j % 2 == 0 {
                    acc + t
                } else {
                    acc - t
                }
            })
        })
        .collect();
    if let Some(i) = h.iter().position(Signed::is_negative) {
        return Err(Error::Verification(format!("h*_{i} = {} is negative; counts are not an Ehrhart sequence", h[i])));
    }
    Ok(IntPolynomial(h))
}

/// Lattice-point counts of `nP` for `n = 0..=dim`, with the interpolated
/// Ehrhart polynomial and the h*-vector they determine.
#[derive(Clone, Debug)]
pub struct EhrhartProfile {
    pub counts: Vec<BigInt>,
    /// Coefficients of `E_P(n)` in the monomial basis.
    pub polynomial: Vec<BigRational>,
    pub hstar: IntPolynomial,
}

pub fn ehrhart_profile(p: &LatticePolytope, budget: &Budget, exec: Exec) -> Result<EhrhartProfile> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: p.dim(),
            ambient: p.ambient_dim(),
        });
    }
    let dim = p.dim();
    let counts = (0..=dim as u64)
        .map(|n| p.count_lattice_points(n, false, budget, exec).map(BigInt::from))
        .collect::<Result<Vec<_>>>()?;
    let hstar = hstar_from_counts(&counts, dim)?;
    Ok(EhrhartProfile {
        polynomial: interpolate(&counts),
        counts,
        hstar,
    })
}

/// Newton forward differences: `E(n) = sum_k Δ^k E(0) C(n, k)`.
fn interpolate(values: &[BigInt]) -> Vec<BigRational> {
    let mut diffs = values.to_vec();
    let mut out = vec![BigRational::zero(); values.len()];
    // falling[k] holds the monomial coefficients of n (n-1) ... (n-k+1) / k!.
    let mut falling = vec![BigRational::one()];
    for k in 0..values.len() {
        for (c, f) in out.iter_mut().zip(&falling) {
            *c += f * BigRational::from_integer(diffs[0].clone());
        }
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        let kk = BigRational::from_integer(BigInt::from(k as i64));
        let den = BigRational::from_integer(BigInt::from(k as i64 + 1));
        let mut next = vec![BigRational::zero(); falling.len() + 1];
        for (i, f) in falling.iter().enumerate() {
            next[i + 1] += f / &den;
            next[i] -= f * &kk / &den;
        }
        falling = next;
    }
    out
}

/// h* of a full-dimensional lattice simplex by counting the points of the
/// half-open fundamental parallelepiped of its homogenized vertices by
/// height.
///
/// The parallelepiped points correspond to the group `Z^{n+1} / L`, whose
/// elements are enumerated through the Smith form of the vertex matrix.
pub fn hstar_simplex_fundamental(vertices: &[Vec<i64>], budget: &Budget, exec: Exec) -> Result<IntPolynomial> {
    let n = vertices.first().map_or(0, Vec::len);
    if vertices.len() != n + 1 {
        return Err(invalid("fundamental parallelepiped needs dim + 1 vertices in full dimension"));
    }
    let rows: Vec<Vec<i64>> = vertices.iter().map(|v| v.iter().copied().chain(std::iter::once(1)).collect()).collect();
    let s = smith(&rows, n + 1);
    if s.diag.iter().any(Zero::is_zero) {
        return Err(Error::NotFullDimensional { dim: n, ambient: n });
    }
    let order: BigInt = s.diag.iter().product();
    let order_u = order.to_u128().ok_or(Error::Overflow("parallelepiped size"))?;
    budget.check_points(order_u)?;
    // With U A V = D, a point x has barycentric coordinates (x V) D^{-1} U;
    // x V runs over the boxes 0 <= z_i < s_i.
    let big_s = s.diag.last().cloned().unwrap_or_else(BigInt::one);
    let modulus = big_s.to_i128().ok_or(Error::Overflow("invariant factor"))?;
    let factors: Vec<(i128, Vec<i128>)> = s
        .diag
        .iter()
        .zip(&s.u)
        .filter(|(d, _)| !d.is_one())
        .map(|(d, urow)| {
            let scale = &big_s / d;
            let g = urow.iter().map(|x| (x * &scale).mod_floor(&big_s).to_i128().expect("reduced below modulus")).collect();
            (d.to_i128().expect("divides modulus"), g)
        })
        .collect();
    const CHUNK: u128 = 1 << 16;
    let chunks = order_u.div_ceil(CHUNK) as usize;
    let partial = exec.map_range(chunks, |c| {
        let mut hist = vec![0u64; n + 1];
        let lo = c as u128 * CHUNK;
        let hi = (lo + CHUNK).min(order_u);
        for idx in lo..hi {
            let mut rest = idx;
            let mut lam = vec![0i128; n + 1];
            for (d, g) in &factors {
                let z = (rest % *d as u128) as i128;
                rest /= *d as u128;
                if z != 0 {
                    for (l, gk) in lam.iter_mut().zip(g) {
                        *l += z * gk;
                    }
                }
            }
            let total: i128 = lam.iter().map(|l| l.rem_euclid(modulus)).sum();
            debug_assert_eq!(total % modulus, 0);
            hist[(total / modulus) as usize] += 1;
        }
        hist
    });
    let mut h = vec![BigInt::zero(); n + 1];
    for part in partial {
        for (acc, x) in h.iter_mut().zip(part) {
            *acc += x;
        }
    }
    Ok(IntPolynomial(h))
}

/// `h*_i(2P) = sum_j C(dim+1, 2i-j) h*_j(P)`.
pub fn hstar_double(h: &IntPolynomial, dim: usize) -> IntPolynomial {
    IntPolynomial(
        (0..=dim as i64)
            .map(|i| {
                h.0.iter()
                    .enumerate()
                    .fold(BigInt::zero(), |acc, (j, hj)| acc + binomial(dim as i64 + 1, 2 * i - j as i64) * hj)
            })
            .collect(),
    )
}

/// `r_j = C(d+1, 2i+2-j) - C(d+1, 2i-j)` for any integer `j`.
pub fn dilation_coefficient(d: usize, i: usize, j: i64) -> BigInt {
    let (n, a) = (d as i64 + 1, 2 * i as i64);
    binomial(n, a + 2 - j) - binomial(n, a - j)
}

/// `(r_0, ..., r_d)`.
pub fn dilation_coefficients(d: usize, i: usize) -> Vec<BigInt> {
    (0..=d as i64).map(|j| dilation_coefficient(d, i, j)).collect()
}

fn esd_f_polynomial(m: usize, r: u32, budget: &Budget, exec: Exec) -> Result<Vec<BigInt>> {
    let mut gamma = vec![vec![0i64; m.saturating_sub(1)]];
    for k in 0..m.saturating_sub(1) {
        let mut e = vec![0; m - 1];
        e[k] = 1;
        gamma.push(e);
    }
    if m == 0 {
        return Ok(vec![BigInt::one()]);
    }
    let t = edgewise_subdivision(&gamma, r)?;
    Ok(f_vector_of(&t, budget, exec)?.0.into_iter().map(BigInt::from).collect())
}

/// Faces of `esd_r` of an `(m-1)`-simplex in its relative interior, by
/// number of vertices: Möbius inversion over the faces of the simplex.
fn esd_interior_f(m: usize, r: u32, budget: &Budget, exec: Exec) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::zero(); m + 1];
    for j in 0..=m {
        let f = esd_f_polynomial(j, r, budget, exec)?;
        let c = binomial(m as i64, j as i64);
        for (k, x) in f.iter().enumerate() {
            if (m - j).is_multiple_of(2) {
                out[k] += &c * x;
            } else {
                out[k] -= &c * x;
            }
        }
    }
    Ok(out)
}

fn odd_structural(d: usize, budget: &Budget, exec: Exec) -> Result<IntPolynomial> {
    let r = d as u32 + 2;
    let factor = |m: usize| -> Result<IntPolynomial> {
        let mut gamma = vec![vec![0i64; m]];
        for k in 0..m {
            let mut e = vec![0; m];
            e[k] = 1;
            gamma.push(e);
        }
        let t = edgewise_subdivision(&gamma, r)?;
        Ok(IntPolynomial(h_vector_of(&t, budget, exec)?.0.into_iter().map(BigInt::from).collect()))
    };
    factor(d.div_ceil(2))?.mul(&factor(d / 2)?).with_len(d + 2)
}

/// h* of the interior polytope `Q` (even `d`) from the f-vector of the
/// boundary triangulation, assembled face by face.
///
/// Each face of `Q` with `a` odd and `b` even labels carries the join of
/// `esd_r` on an `a`-vertex and a `b`-vertex simplex; its interior faces
/// are products of interior faces of the factors.
pub fn hstar_interior_structural(d: usize, budget: &Budget, exec: Exec) -> Result<IntPolynomial> {
    let fams = facet_families(d)?;
    let r = (d as u32 + 2) / 2;
    let full = (1usize << (d + 2)) - 1;
    let facet_masks: Vec<usize> = fams
        .iter()
        .map(|f| {
            let (a, b) = f.excluded();
            full & !(1 << (a - 1)) & !(1 << (b - 1))
        })
        .collect();
    let mut faces = BTreeSet::new();
    for &m in &facet_masks {
        let mut sub = m;
        loop {
            faces.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & m;
        }
    }
    let half = d / 2 + 1;
    let interior = (0..=half).map(|m| esd_interior_f(m, r, budget, exec)).collect::<Result<Vec<_>>>()?;
    let mut f = vec![BigInt::zero(); d + 1];
    for mask in faces {
        let odd = (0..d + 2).step_by(2).filter(|&i| mask >> i & 1 == 1).count();
        let even = (1..d + 2).step_by(2).filter(|&i| mask >> i & 1 == 1).count();
        for (i, x) in interior[odd].iter().enumerate() {
            for (j, y) in interior[even].iter().enumerate() {
                if !x.is_zero() && !y.is_zero() {
                    f[i + j] += x * y;
                }
            }
        }
    }
    let f: Vec<i64> = f.iter().map(|x| x.to_i64().ok_or(Error::Overflow("face count"))).collect::<Result<_>>()?;
    Ok(IntPolynomial::from_i64(&crate::complex::h_from_f(&f)))
}

/// h* of the reduced Laplacian polytope of the boundary of the
/// `(d + 1)`-simplex without materializing its triangulation.
///
/// Odd `d`: product of the h-polynomials of the two edgewise-subdivided
/// factors of the join. Even `d`: the interior polytope's h*, doubled.
pub fn hstar_structural(d: usize, budget: &Budget, exec: Exec) -> Result<IntPolynomial> {
    if d == 0 {
        return Ok(IntPolynomial::from_i64(&[1]));
    }
    if d % 2 == 1 {
        odd_structural(d, budget, exec)
    } else {
        Ok(hstar_double(&hstar_interior_structural(d, budget, exec)?, d))
    }
}

/// Ways of computing the h*-vector of the reduced Laplacian polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HstarMethod {
    /// Product / face-by-face assembly; scales to large `d`.
    Structural,
    /// Face census of the materialized triangulation.
    Census,
    /// Fundamental parallelepiped (odd `d`, where the polytope is a simplex).
    Fundamental,
    /// Lattice-point counts of the first dilations.
    Ehrhart,
}

impl std::str::FromStr for HstarMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structural" => Ok(HstarMethod::Structural),
            "census" => Ok(HstarMethod::Census),
            "fundamental" => Ok(HstarMethod::Fundamental),
            "ehrhart" => Ok(HstarMethod::Ehrhart),
            other => Err(invalid(format!("unknown h* method {other:?}"))),
        }
    }
}

impl std::fmt::Display for HstarMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HstarMethod::Structural => "structural",
            HstarMethod::Census => "census",
            HstarMethod::Fundamental => "fundamental",
            HstarMethod::Ehrhart => "ehrhart",
        })
    }
}

/// h* of the reduced Laplacian polytope of the boundary of the `(d + 1)`-simplex.
pub fn laplacian_hstar(d: usize, method: HstarMethod, budget: &Budget, exec: Exec) -> Result<IntPolynomial> {
    let reduced = || crate::laplacian::reduce_full_dim(d).map(|r| r.polytope);
    match method {
        HstarMethod::Structural => hstar_structural(d, budget, exec),
        HstarMethod::Census => {
            let t = crate::triangulate::laplacian_triangulation(d, budget, exec)?;
            Ok(IntPolynomial(h_vector_of(&t, budget, exec)?.0.into_iter().map(BigInt::from).collect()))
        }
        HstarMethod::Fundamental => {
            if d.is_multiple_of(2) {
                return Err(invalid("the fundamental parallelepiped method needs a simplex (odd d)"));
            }
            hstar_simplex_fundamental(reduced()?.points(), budget, exec)
        }
        HstarMethod::Ehrhart => Ok(ehrhart_profile(&reduced()?, budget, exec)?.hstar),
    }
}

/// First index of a maximal coefficient.
pub fn peak(h: &IntPolynomial) -> usize {
    let max = h.0.iter().max().cloned().unwrap_or_default();
    h.0.iter().position(|c| *c == max).unwrap_or(0)
}

/// Weakly increasing up to [`peak`] and weakly decreasing after it.
pub fn is_unimodal(h: &IntPolynomial) -> bool {
    let p = peak(h);
    h.0[..=p.min(h.0.len().saturating_sub(1))].windows(2).all(|w| w[0] <= w[1]) && h.0[p..].windows(2).all(|w| w[0] >= w[1])
}

/// `h_i = h_{dim-i}` for `0 <= i <= dim`, missing entries read as zero.
pub fn is_palindromic(h: &IntPolynomial, dim: usize) -> bool {
    let at = |i: usize| h.0.get(i).cloned().unwrap_or_default();
    h.0.len() <= dim + 1 && (0..=dim).all(|i| at(i) == at(dim - i))
}

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Positive multiple of `p` with coprime integer coefficients.
fn normalize(p: Poly) -> Poly {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return Vec::new();
    }
    ints.into_iter().map(|c| BigRational::from_integer(c / &g)).collect()
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let q = r.last().expect("nonempty") / lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let s: Vec<i32> = signs.filter(|&x| x != 0).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

/// All roots real, counted with multiplicity.
///
/// A Sturm sequence counts the distinct real roots; its last member is
/// `gcd(p, p')`, so the polynomial is real-rooted iff that count equals
/// `deg p - deg gcd(p, p')`.
pub fn is_real_rooted(h: &IntPolynomial) -> Result<bool> {
    let p: Poly = trim(h.0.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    if p.is_empty() {
        return Err(invalid("the zero polynomial has no root count"));
    }
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(true);
    }
    let dp: Poly = p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as i64))).collect();
    let mut seq = vec![normalize(p), normalize(dp)];
    loop {
        let r = rem(&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(normalize(r.into_iter().map(|c| -c).collect()));
    }
    let sgn = |c: &BigRational| if c.is_positive() { 1 } else { -1 };
    let at_pos = sign_changes(seq.iter().map(|q| sgn(q.last().expect("nonzero"))));
    let at_neg = sign_changes(seq.iter().map(|q| {
        let s = sgn(q.last().expect("nonzero"));
        if (q.len() - 1) % 2 == 0 {
            s
        } else {
            -s
        }
    }));
    let distinct = at_neg - at_pos;
    let gcd_deg = seq.last().map_or(0, |g| g.len() - 1);
    Ok(distinct == deg - gcd_deg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn counts_to_hstar() {
        assert_eq!(hstar_from_counts(&big(&[1, 4, 9]), 2).unwrap(), p(&[1, 1, 0]));
        assert_eq!(hstar_from_counts(&big(&[1, 13, 41]), 2).unwrap(), p(&[1, 10, 5]));
        assert_eq!(hstar_from_counts(&big(&[1, 4, 10, 20]), 3).unwrap(), p(&[1, 0, 0, 0]));
        assert!(hstar_from_counts(&big(&[1, 2, 9]), 2).is_err());
        assert!(hstar_from_counts(&big(&[1, 4]), 2).is_err());
    }

    #[test]
    fn interpolation_of_square() {
        let e = interpolate(&big(&[1, 4, 9]));
        let one = BigRational::one();
        assert_eq!(e, vec![one.clone(), BigRational::from_integer(2.into()), one]);
    }

    #[test]
    fn parallelepiped_small() {
        let b = Budget::default();
        assert_eq!(hstar_simplex_fundamental(&[vec![0], vec![2]], &b, Exec::Sequential).unwrap(), p(&[1, 1]));
        assert_eq!(
            hstar_simplex_fundamental(&[vec![0, 0], vec![1, 0], vec![0, 1]], &b, Exec::Sequential).unwrap(),
            p(&[1, 0, 0])
        );
        assert_eq!(
            hstar_simplex_fundamental(&[vec![0, 0], vec![3, 0], vec![0, 3]], &b, Exec::Parallel).unwrap(),
            p(&[1, 7, 1])
        );
        assert_eq!(
            hstar_simplex_fundamental(&[vec![-1, -1], vec![1, 0], vec![0, 1]], &b, Exec::Sequential).unwrap(),
            p(&[1, 1, 1])
        );
    }

    #[test]
    fn doubling() {
        assert_eq!(hstar_double(&p(&[1, 0]), 1), p(&[1, 1]));
        assert_eq!(hstar_double(&p(&[1, 2, 1]), 2), p(&[1, 10, 5]));
    }

    #[test]
    fn dilation_coefficients_direct() {
        assert_eq!(dilation_coefficients(2, 0), big(&[2, 3, 1]));
    }

    #[test]
    fn property_checks() {
        let h = p(&[1, 2, 1]);
        assert!(is_unimodal(&h) && is_palindromic(&h, 2) && is_real_rooted(&h).unwrap());
        let h = p(&[1, 10, 5]);
        assert!(is_unimodal(&h) && !is_palindromic(&h, 2));
        assert_eq!(peak(&h), 1);
        let h = p(&[1, 149, 4049, 8558, 3750, 300, 0]);
        assert!(is_real_rooted(&h).unwrap());
        assert_eq!(peak(&h), 3);
        assert!(!is_real_rooted(&p(&[1, 0, 1])).unwrap());
        assert!(!is_real_rooted(&p(&[1, 1, 1])).unwrap());
        assert!(is_real_rooted(&p(&[1, 3, 3, 1])).unwrap());
        assert!(!is_unimodal(&p(&[1, 0, 1])));
        assert!(is_real_rooted(&p(&[0])).is_err());
    }

    #[test]
    fn structural_small() {
        let b = Budget::default();
        assert_eq!(hstar_structural(1, &b, Exec::Sequential).unwrap(), p(&[1, 2, 0]));
        assert_eq!(hstar_structural(2, &b, Exec::Sequential).unwrap(), p(&[1, 10, 5]));
        assert_eq!(hstar_interior_structural(2, &b, Exec::Sequential).unwrap(), p(&[1, 2, 1]));
        assert_eq!(hstar_structural(3, &b, Exec::Sequential).unwrap(), p(&[1, 22, 78, 24, 0]));
    }
}
