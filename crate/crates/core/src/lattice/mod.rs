//! Triangulation state sums for semisimple algebras, in exact rationals.
//!
//! A closed surface evaluates to a rational; a surface with boundary to a
//! tensor over its boundary edges. For `C[G]` the closed value on genus `g`
//! is `Σ_ρ dim(ρ)^{2−2g}`, independent of the triangulation.

mod tensor;
mod triangulation;

pub use tensor::{
    apply, class_sum, cylinder_projector, partition_function, projector_from, LatticeTensorData,
    LatticeValue,
};
pub use triangulation::{Counts, Move, Triangulation, TriangulationSpec};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::group::FiniteGroup;

/// Closed genus-`g` value for `C[G]` on the standard triangulation.
pub fn closed_surface_value(grp: &FiniteGroup, genus: usize) -> Result<BigRational> {
    let d = LatticeTensorData::group_algebra(grp);
    let z = partition_function(&Triangulation::standard_surface(genus), &d)?;
    Ok(z.scalar().expect("closed surface").clone())
}

/// Report of a seeded Pachner shuffle.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ShuffleReport {
    pub genus: usize,
    pub moves: usize,
    pub triangles_before: usize,
    pub triangles_after: usize,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub before: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub after: BigRational,
}

impl ShuffleReport {
    pub fn invariant(&self) -> bool {
        self.before == self.after
    }
}

/// Evaluates the standard genus-`g` surface before and after `moves`
/// random Pachner moves drawn from `seed`.
pub fn pachner_shuffle(grp: &FiniteGroup, genus: usize, moves: usize, seed: u64) -> Result<ShuffleReport> {
    let d = LatticeTensorData::group_algebra(grp);
    let start = Triangulation::standard_surface(genus);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (end, _) = start.shuffle(moves, &mut rng)?;
    let before = partition_function(&start, &d)?.scalar().expect("closed").clone();
    let after = partition_function(&end, &d)?.scalar().expect("closed").clone();
    Ok(ShuffleReport {
        genus,
        moves,
        triangles_before: start.num_triangles(),
        triangles_after: end.num_triangles(),
        before,
        after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dw::dw_invariant;
    use crate::frobenius::FrobeniusAlgebra;
    use crate::group::Preset;
    use crate::rational::{frac, int, pow, rank};
    use num_traits::{One, Zero};

    fn grp(s: &str) -> FiniteGroup {
        Preset::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn group_algebra_tensor_entries() {
        let t = LatticeTensorData::group_algebra(&grp("trivial"));
        assert_eq!(t.m(0, 0, 0), int(1));
        assert_eq!(t.metric()[0][0], int(1));
        let z2 = LatticeTensorData::group_algebra(&grp("Z2"));
        assert_eq!(z2.m(1, 1, 0), int(2));
        assert_eq!(z2.m(1, 0, 0), int(0));
        let s3 = grp("S3");
        let d = LatticeTensorData::group_algebra(&s3);
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    let want = if s3.mul(i, j) == k { int(1) } else { int(0) };
                    assert_eq!(d.raised(i, j, k), want);
                }
            }
        }
    }

    #[test]
    fn generic_constructor_matches_group_formula() {
        for name in ["Z3", "S3", "Q8"] {
            let g = grp(name);
            let n = g.order();
            let mut mu = vec![int(0); n * n * n];
            for a in 0..n {
                for b in 0..n {
                    mu[(a * n + b) * n + g.mul(a, b)] = int(1);
                }
            }
            let generic = LatticeTensorData::from_structure_constants(n, &mu).unwrap();
            let direct = LatticeTensorData::group_algebra(&g);
            assert_eq!(generic.metric(), direct.metric());
            assert_eq!(generic.inverse_metric(), direct.inverse_metric());
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        assert_eq!(generic.m(i, j, k), direct.m(i, j, k));
                    }
                }
            }
        }
        // Dual numbers have a degenerate trace form.
        let mu = vec![int(1), int(0), int(0), int(1), int(0), int(1), int(0), int(0)];
        assert!(LatticeTensorData::from_structure_constants(2, &mu).is_err());
    }

    #[test]
    fn closed_values() {
        assert_eq!(closed_surface_value(&grp("Z2"), 0).unwrap(), int(2));
        assert_eq!(closed_surface_value(&grp("S3"), 0).unwrap(), int(6));
        assert_eq!(closed_surface_value(&grp("S3"), 1).unwrap(), int(3));
        assert_eq!(closed_surface_value(&grp("S3"), 2).unwrap(), frac(9, 4));
        assert_eq!(closed_surface_value(&grp("Q8"), 1).unwrap(), int(5));
    }

    #[test]
    fn normalization_bridge() {
        for name in ["Z2", "Z3", "S3", "D4"] {
            let g = grp(name);
            for genus in 0..3 {
                let lattice = closed_surface_value(&g, genus).unwrap();
                let scale = pow(&int(g.order() as i64), 2 * genus as i64 - 2);
                assert_eq!(dw_invariant(&g, genus), scale * lattice, "{name} {genus}");
            }
        }
    }

    #[test]
    fn pachner_invariance_small() {
        for name in ["Z2", "S3"] {
            let g = grp(name);
            for genus in 0..3 {
                let r = pachner_shuffle(&g, genus, 20, 7 + genus as u64).unwrap();
                assert!(r.invariant(), "{name} genus {genus}");
            }
        }
    }

    #[test]
    fn single_moves() {
        let g = grp("S3");
        let d = LatticeTensorData::group_algebra(&g);
        let t = Triangulation::standard_surface(1);
        let base = partition_function(&t, &d).unwrap();
        for tri in 0..t.num_triangles() {
            let z = partition_function(&t.pachner_13(tri).unwrap(), &d).unwrap();
            assert_eq!(z.scalar(), base.scalar());
        }
        for s in t.flippable_slots() {
            let z = partition_function(&t.pachner_22(s).unwrap(), &d).unwrap();
            assert_eq!(z.scalar(), base.scalar());
        }
    }

    #[test]
    fn cylinder_is_center_projector() {
        let g = grp("S3");
        let pi = cylinder_projector(&g).unwrap();
        let n = g.order();
        let pi2: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &pi[i][k] * &pi[k][j]))
                    .collect()
            })
            .collect();
        assert_eq!(pi2, pi);
        assert_eq!(rank(&pi), 3);
        for a in 0..g.num_classes() {
            let v = class_sum(&g, a);
            assert_eq!(apply(&pi, &v), v);
        }
        let z4 = grp("Z4");
        let pi4 = cylinder_projector(&z4).unwrap();
        for (i, row) in pi4.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
            }
        }
    }

    #[test]
    fn cylinder_matches_frobenius_double_twist() {
        for name in ["S3", "Q8", "D4"] {
            let g = grp(name);
            let pi = cylinder_projector(&g).unwrap();
            let a = FrobeniusAlgebra::group_algebra(&g, g.order() as f64).unwrap();
            let m = a.double_twist_map();
            for i in 0..g.order() {
                for j in 0..g.order() {
                    let x = crate::rational::to_f64(&pi[i][j]);
                    assert!((m[(i, j)].re - x).abs() < 1e-12 && m[(i, j)].im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn shuffled_cylinder_is_still_the_projector() {
        let g = grp("S3");
        let d = LatticeTensorData::group_algebra(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (t, _) = Triangulation::cylinder().shuffle(15, &mut rng).unwrap();
        assert_eq!(projector_from(&t, &d).unwrap(), cylinder_projector(&g).unwrap());
    }
}
