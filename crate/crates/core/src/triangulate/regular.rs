use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::verify::{fold, orientation_signs, ridges};
use super::Triangulation;
use crate::error::{Error, Result};
use crate::lp::{maximize, Constraint, LpOutcome, Relation};
use crate::Exec;

/// Largest triangulation for which the lifting LP is attempted.
pub const LP_CELL_LIMIT: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityMethod {
    /// The attached lifting folds strictly upward across every interior ridge.
    Witness,
    /// Heights found by maximizing the smallest fold over all ridges.
    LinearProgram,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regularity {
    Regular { heights: Vec<BigInt>, method: RegularityMethod },
    NotRegular,
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular { .. })
    }
}

/// Whether `t` is the projection of the lower envelope of some lifting.
///
/// A lifting is checked locally: it is strictly convex on a valid
/// triangulation iff it bends upward across every interior ridge. The
/// attached lifting is tried first, then the LP.
pub fn is_regular(t: &Triangulation, exec: Exec) -> Result<Regularity> {
    if let Some(h) = t.lifting() {
        if witness_holds(t, h, exec)? {
            return Ok(Regularity::Regular {
                heights: h.iter().map(|&x| BigInt::from(x)).collect(),
                method: RegularityMethod::Witness,
            });
        }
    }
    is_regular_lp(t, exec)
}

fn witness_holds(t: &Triangulation, h: &[i128], exec: Exec) -> Result<bool> {
    let r = ridges(t, exec)?.map_err(Error::Verification)?;
    let signs = orientation_signs(t, exec);
    Ok(exec.find_first(r.walls.len(), |i| {
        let w = &r.walls[i];
        (!fold(t, w, h, signs[w.cell as usize]).is_positive()).then_some(())
    })
    .is_none())
}

/// Maximizes `t` subject to `fold_w(h) >= t` on every wall, `h >= 0`, `t <= 1`.
/// The triangulation is regular iff the optimum is positive.
pub fn is_regular_lp(t: &Triangulation, exec: Exec) -> Result<Regularity> {
    if t.num_cells() > LP_CELL_LIMIT {
        return Err(Error::Budget {
            resource: "regularity LP cells",
            required: t.num_cells() as u128,
            limit: LP_CELL_LIMIT as u128,
        });
    }
    let r = ridges(t, exec)?.map_err(Error::Verification)?;
    let signs = orientation_signs(t, exec);
    let n = t.vertices().len();
    let rows = exec.map_slice(&r.walls, |w| {
        // The fold is linear in the heights; read off each coefficient.
        let mut involved: Vec<u32> = t.cell(w.cell as usize).to_vec();
        involved.push(t.cell(w.other as usize)[w.b as usize]);
        let mut unit = vec![0i128; n];
        let mut coeffs = vec![BigInt::zero(); n];
        for &v in &involved {
            unit[v as usize] = 1;
            coeffs[v as usize] = fold(t, w, &unit, signs[w.cell as usize]);
            unit[v as usize] = 0;
        }
        coeffs
    });
    let mut cs: Vec<Constraint> = rows
        .into_iter()
        .map(|c| {
            let mut c: Vec<BigRational> = c.into_iter().map(BigRational::from_integer).collect();
            c.push(-BigRational::one());
            Constraint::new(c, Relation::Ge, BigRational::zero())
        })
        .collect();
    let mut cap = vec![BigRational::zero(); n + 1];
    cap[n] = BigRational::one();
    cs.push(Constraint::new(cap.clone(), Relation::Le, BigRational::one()));
    match maximize(&cap, &cs) {
        LpOutcome::Optimal { value, x } if value.is_positive() => {
            let lcm = x[..n].iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let heights = x[..n].iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
            Ok(Regularity::Regular {
                heights,
                method: RegularityMethod::LinearProgram,
            })
        }
        LpOutcome::Unbounded => Err(Error::Verification("regularity LP unbounded".into())),
        _ => Ok(Regularity::NotRegular),
    }
}

/// The classical non-regular triangulation of a triangle with a
/// homothetic inner triangle and twisted connecting diagonals.
pub fn nonregular_fixture() -> Triangulation {
    let pts = vec![vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1], vec![2, 1], vec![1, 2]];
    let (a, b, c, a2, b2, c2) = (0, 1, 2, 3, 4, 5);
    Triangulation::new(
        pts,
        vec![
            vec![a, b, b2],
            vec![a, b2, a2],
            vec![b, c, c2],
            vec![b, c2, b2],
            vec![c, a, a2],
            vec![c, a2, c2],
            vec![a2, b2, c2],
        ],
    )
    .expect("fixture cells are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulate::verify_triangulation;

    #[test]
    fn fixture_is_valid_but_not_regular() {
        let t = nonregular_fixture();
        let rep = verify_triangulation(&t, Exec::Sequential).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(is_regular(&t, Exec::Sequential).unwrap(), Regularity::NotRegular);
    }

    #[test]
    fn untwisted_neighbour_is_regular() {
        let pts = vec![vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1], vec![2, 1], vec![1, 2]];
        let t = Triangulation::new(
            pts,
            vec![vec![0, 1, 4], vec![0, 4, 3], vec![1, 2, 4], vec![2, 4, 5], vec![2, 0, 5], vec![0, 5, 3], vec![3, 4, 5]],
        )
        .unwrap();
        let rep = verify_triangulation(&t, Exec::Sequential).unwrap();
        assert!(rep.passed(), "{rep:?}");
        match is_regular(&t, Exec::Sequential).unwrap() {
            Regularity::Regular { heights, method } => {
                assert_eq!(method, RegularityMethod::LinearProgram);
                let h: Vec<i128> = heights.iter().map(|x| i128::try_from(x).unwrap()).collect();
                let again = t.clone().with_lifting(h);
                assert_eq!(
                    is_regular(&again, Exec::Sequential).unwrap(),
                    Regularity::Regular {
                        heights: heights.clone(),
                        method: RegularityMethod::Witness
                    }
                );
            }
            Regularity::NotRegular => panic!("expected regular"),
        }
    }

    #[test]
    fn bad_witness_falls_back_to_lp() {
        let t = Triangulation::new(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 1, 2], vec![1, 2, 3]])
            .unwrap()
            .with_lifting(vec![0, 0, 0, 0]);
        let r = is_regular(&t, Exec::Sequential).unwrap();
        assert!(matches!(r, Regularity::Regular { method: RegularityMethod::LinearProgram, .. }));
    }
}
