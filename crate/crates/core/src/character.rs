//! Character tables by simultaneous diagonalization of class-sum matrices.
//!
//! In the orthonormal basis `f_a = e_a / sqrt(|a|)` of the centre of the
//! group algebra, left multiplication by a class sum `e_a` is a normal
//! matrix whose adjoint is multiplication by the inverse class. A random
//! complex combination `X` therefore yields a Hermitian `X + X†` whose
//! eigenvectors are the central idempotents, one per irreducible character.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, TqftError};
use crate::group::{ConjugacyClass, FiniteGroup, Subgroup};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const TOL_EQ: f64 = 1e-9;
pub const TOL_SNAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub struct CharacterOptions {
    pub seed: u64,
    pub tol_eq: f64,
    pub tol_snap: f64,
    pub max_attempts: usize,
}

impl Default for CharacterOptions {
    fn default() -> Self {
        CharacterOptions {
            seed: DEFAULT_SEED,
            tol_eq: TOL_EQ,
            tol_snap: TOL_SNAP,
            max_attempts: 8,
        }
    }
}

/// Irreducible characters of a finite group, rows = irreps, columns = classes.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    group_name: String,
    group_order: usize,
    classes: Vec<ConjugacyClass>,
    #[serde(skip)]
    class_of: Vec<usize>,
    chi: Vec<Vec<Complex64>>,
    dims: Vec<u64>,
    /// Unset for finite groups.
    casimirs: Option<Vec<f64>>,
}

impl CharacterTable {
    pub fn group_name(&self) -> &str {
        &self.group_name
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn num_irreps(&self) -> usize {
        self.chi.len()
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn casimirs(&self) -> Option<&[f64]> {
        self.casimirs.as_deref()
    }

    /// `χ_ρ` on class `a`.
    pub fn chi(&self, rho: usize, class: usize) -> Complex64 {
        self.chi[rho][class]
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.chi
    }

    /// `χ_ρ(g)` for a group element.
    pub fn value(&self, rho: usize, element: usize) -> Complex64 {
        self.chi[rho][self.class_of[element]]
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    /// Copy with one table entry overwritten; for fault-injection checks.
    pub fn with_entry(mut self, rho: usize, class: usize, value: Complex64) -> Self {
        self.chi[rho][class] = value;
        self
    }

    pub fn verify_orthogonality(&self, tol: f64) -> OrthogonalityReport {
        let r = self.chi.len();
        let order = self.group_order as f64;
        let mut row_defect: f64 = 0.0;
        for p in 0..r {
            for q in 0..r {
                let s: Complex64 = self
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(a, c)| self.chi[p][a] * self.chi[q][a].conj() * c.size as f64)
                    .sum::<Complex64>()
                    / order;
                let target = if p == q { 1.0 } else { 0.0 };
                row_defect = row_defect.max((s - target).norm());
            }
        }
        let mut col_defect: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let s: Complex64 = (0..r)
                    .map(|p| self.chi[p][a] * self.chi[p][b].conj())
                    .sum();
                let target = if a == b {
                    order / self.classes[a].size as f64
                } else {
                    0.0
                };
                // Normalise by the centralizer order so both checks are O(1).
                let scale = order / self.classes[a].size as f64;
                col_defect = col_defect.max((s - target).norm() / scale);
            }
        }
        OrthogonalityReport {
            row_defect,
            column_defect: col_defect,
            tol,
            passed: row_defect <= tol && col_defect <= tol,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub row_defect: f64,
    pub column_defect: f64,
    pub tol: f64,
    pub passed: bool,
}

impl OrthogonalityReport {
    pub fn max_defect(&self) -> f64 {
        self.row_defect.max(self.column_defect)
    }
}

pub fn character_table(g: &FiniteGroup, seed: u64) -> Result<CharacterTable> {
    character_table_with(
        g,
        &CharacterOptions {
            seed,
            ..Default::default()
        },
    )
}

pub fn character_table_with(g: &FiniteGroup, opts: &CharacterOptions) -> Result<CharacterTable> {
    let classes = g.conjugacy_classes().to_vec();
    let r = classes.len();
    let order = g.order() as f64;
    let consts = g.class_structure_constants();
    let sizes: Vec<f64> = classes.iter().map(|c| c.size as f64).collect();

    // M_a[c][b] = N_{ab}^c sqrt(|c| / |b|)
    let class_mats: Vec<DMatrix<Complex64>> = (0..r)
        .map(|a| {
            DMatrix::from_fn(r, r, |c, b| {
                Complex64::new(consts.get(a, b, c) as f64 * (sizes[c] / sizes[b]).sqrt(), 0.0)
            })
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut last_gap = 0.0;
    for _attempt in 0..opts.max_attempts {
        let mut x = DMatrix::<Complex64>::zeros(r, r);
        for m in &class_mats {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            x += m * c;
        }
        let h = &x + x.adjoint();
        let eig = h.clone().symmetric_eigen();
        let mut evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        evals.sort_by(f64::total_cmp);
        let spread = evals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let gap = evals
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        last_gap = if r > 1 { gap / spread } else { f64::INFINITY };
        if r > 1 && last_gap < 1e-6 {
            continue;
        }
        match rows_from_eigenvectors(&eig.eigenvectors, &class_mats, &sizes, order, opts) {
            Ok((chi, dims)) => {
                let table = finish_table(g, classes, chi, dims);
                let report = table.verify_orthogonality(opts.tol_eq);
                if !report.passed {
                    return Err(TqftError::invariant(
                        "character_orthogonality",
                        format!("defect {:.3e}", report.max_defect()),
                    ));
                }
                return Ok(table);
            }
            Err(_) => continue,
        }
    }
    Err(TqftError::Diagonalization {
        attempts: opts.max_attempts,
        gap: last_gap,
    })
}

type Rows = (Vec<Vec<Complex64>>, Vec<u64>);

fn rows_from_eigenvectors(
    vecs: &DMatrix<Complex64>,
    class_mats: &[DMatrix<Complex64>],
    sizes: &[f64],
    order: f64,
    opts: &CharacterOptions,
) -> Result<Rows> {
    let r = sizes.len();
    let mut chi = Vec::with_capacity(r);
    let mut dims = Vec::with_capacity(r);
    for k in 0..r {
        let v = vecs.column(k).into_owned();
        let norm2 = v.norm_squared();
        // Central character ω(a) as the Rayleigh quotient of each class matrix.
        let mut omega = Vec::with_capacity(r);
        for m in class_mats {
            let mv = m * &v;
            let w = v.dotc(&mv) / norm2;
            if (&mv - &v * w).norm() > 1e-7 * (1.0 + w.norm()) * norm2.sqrt() {
                return Err(TqftError::invariant(
                    "common_eigenvector",
                    "eigenvector does not diagonalize every class matrix",
                ));
            }
            omega.push(w);
        }
        let denom: f64 = omega
            .iter()
            .zip(sizes)
            .map(|(w, s)| w.norm_sqr() / s)
            .sum();
        let dim_f = (order / denom).sqrt();
        let dim = dim_f.round();
        if (dim_f - dim).abs() > opts.tol_snap || dim < 1.0 {
            return Err(TqftError::invariant(
                "integer_dimension",
                format!("recovered dimension {dim_f} is not an integer"),
            ));
        }
        let row: Vec<Complex64> = omega
            .iter()
            .zip(sizes)
            .map(|(w, s)| clean(w * dim / s))
            .collect();
        chi.push(row);
        dims.push(dim as u64);
    }
    let sum_sq: u64 = dims.iter().map(|d| d * d).sum();
    if sum_sq != order as u64 {
        return Err(TqftError::invariant(
            "sum_of_squares",
            format!("sum of squared dimensions {sum_sq} != {order}"),
        ));
    }
    Ok((chi, dims))
}

fn clean(z: Complex64) -> Complex64 {
    let f = |x: f64| if x.abs() < 1e-13 { 0.0 } else { x };
    Complex64::new(f(z.re), f(z.im))
}

fn finish_table(
    g: &FiniteGroup,
    classes: Vec<ConjugacyClass>,
    chi: Vec<Vec<Complex64>>,
    dims: Vec<u64>,
) -> CharacterTable {
    // Canonical order: dimension ascending, then rounded character vector
    // descending, which puts the trivial character first.
    let key = |row: &Vec<Complex64>| -> Vec<(i64, i64)> {
        row.iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect()
    };
    let mut idx: Vec<usize> = (0..chi.len()).collect();
    idx.sort_by(|&a, &b| {
        dims[a]
            .cmp(&dims[b])
            .then_with(|| key(&chi[b]).cmp(&key(&chi[a])))
    });
    CharacterTable {
        group_name: g.name().to_string(),
        group_order: g.order(),
        classes,
        class_of: g.class_index_map().to_vec(),
        chi: idx.iter().map(|&i| chi[i].clone()).collect(),
        dims: idx.iter().map(|&i| dims[i]).collect(),
        casimirs: None,
    }
}

/// Character table of the centralizer of one class representative.
#[derive(Clone, Debug)]
pub struct CentralizerTable {
    pub class: usize,
    pub representative: usize,
    pub subgroup: Subgroup,
    pub table: CharacterTable,
}

impl CentralizerTable {
    /// `χ_π(x)` for a parent-group element `x` of the centralizer.
    pub fn value(&self, irrep: usize, parent_element: usize) -> Option<Complex64> {
        self.subgroup
            .local_index(parent_element)
            .map(|i| self.table.value(irrep, i))
    }
}

/// One table per conjugacy class, computed on the embedded centralizer.
pub fn centralizer_tables(g: &FiniteGroup, seed: u64) -> Result<Vec<CentralizerTable>> {
    let work: Vec<(usize, usize)> = g
        .conjugacy_classes()
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.representative))
        .collect();
    let compute = || {
        work.par_iter()
            .map(|&(class, rep)| {
                let subgroup = g.centralizer(rep)?;
                let table = character_table(subgroup.embedded(), seed)?;
                Ok(CentralizerTable {
                    class,
                    representative: rep,
                    subgroup,
                    table,
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    crate::parallel::install(compute)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, Preset};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn z2_table() {
        let g = Preset::Cyclic(2).build().unwrap();
        let t = character_table(&g, DEFAULT_SEED).unwrap();
        assert_eq!(t.rows(), &[vec![c(1.0), c(1.0)], vec![c(1.0), c(-1.0)]]);
        assert_eq!(t.verify_orthogonality(1e-12).max_defect(), 0.0);
    }

    #[test]
    fn s3_dims() {
        let g = Preset::Symmetric(3).build().unwrap();
        let t = character_table(&g, DEFAULT_SEED).unwrap();
        assert_eq!(t.dims(), &[1, 1, 2]);
        assert!(t.verify_orthogonality(1e-9).passed);
        assert!(t.casimirs().is_none());
    }

    #[test]
    fn sign_flip_breaks_orthogonality() {
        let g = Preset::Symmetric(3).build().unwrap();
        let t = character_table(&g, DEFAULT_SEED).unwrap();
        let bad = t.clone().with_entry(1, 2, -t.chi(1, 2));
        let rep = bad.verify_orthogonality(1e-9);
        assert!(!rep.passed);
        assert!(rep.max_defect() >= 2.0 / 6.0, "{rep:?}");
    }

    #[test]
    fn peter_weyl_and_burnside_relation() {
        for p in catalog(24) {
            let g = p.build().unwrap();
            let t = character_table(&g, DEFAULT_SEED).unwrap();
            assert_eq!(t.num_irreps(), g.num_classes());
            assert_eq!(t.dims().iter().map(|d| d * d).sum::<u64>(), g.order() as u64);
            assert!(t.verify_orthogonality(1e-9).passed, "{p}");
            let n = g.class_structure_constants();
            let r = t.num_irreps();
            let sizes: Vec<f64> = g.conjugacy_classes().iter().map(|c| c.size as f64).collect();
            for rho in 0..r {
                let dim = t.dims()[rho] as f64;
                let omega: Vec<Complex64> =
                    (0..r).map(|a| t.chi(rho, a) * sizes[a] / dim).collect();
                for a in 0..r {
                    for b in 0..r {
                        let rhs: Complex64 =
                            (0..r).map(|cc| omega[cc] * n.get(a, b, cc) as f64).sum();
                        assert!((omega[a] * omega[b] - rhs).norm() < 1e-8, "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_character_first() {
        for p in catalog(24) {
            let g = p.build().unwrap();
            let t = character_table(&g, DEFAULT_SEED).unwrap();
            assert!(t.rows()[0].iter().all(|z| (z - c(1.0)).norm() < 1e-12), "{p}");
        }
    }

    /// Enumerate multisets of `d` m-th roots of unity and check the value is
    /// among their sums.
    fn is_root_sum(z: Complex64, d: usize, m: usize) -> bool {
        fn rec(z: Complex64, d: usize, m: usize, start: usize, acc: Complex64) -> bool {
            if d == 0 {
                return (z - acc).norm() < 1e-8;
            }
            (start..m).any(|k| {
                let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
                rec(z, d - 1, m, k, acc + w)
            })
        }
        rec(z, d, m, 0, Complex64::new(0.0, 0.0))
    }

    #[test]
    fn values_are_sums_of_roots_of_unity() {
        for p in catalog(24) {
            let g = p.build().unwrap();
            let t = character_table(&g, DEFAULT_SEED).unwrap();
            for rho in 0..t.num_irreps() {
                for (a, cls) in t.classes().iter().enumerate() {
                    let m = g.element_order(cls.representative);
                    assert!(
                        is_root_sum(t.chi(rho, a), t.dims()[rho] as usize, m),
                        "{p} rho={rho} class={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn seed_independence() {
        for p in [Preset::Symmetric(4), Preset::Quaternion8, Preset::Dihedral(6)] {
            let g = p.build().unwrap();
            let a = character_table(&g, 1).unwrap();
            let b = character_table(&g, 987_654_321).unwrap();
            assert_eq!(a.dims(), b.dims());
            for (ra, rb) in a.rows().iter().zip(b.rows()) {
                for (x, y) in ra.iter().zip(rb) {
                    assert!((x - y).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn centralizer_tables_s3() {
        let g = Preset::Symmetric(3).build().unwrap();
        let tabs = centralizer_tables(&g, DEFAULT_SEED).unwrap();
        let orders: Vec<usize> = tabs.iter().map(|t| t.subgroup.order()).collect();
        let counts: Vec<usize> = tabs.iter().map(|t| t.table.num_irreps()).collect();
        assert_eq!(orders, vec![6, 2, 3]);
        assert_eq!(counts, vec![3, 2, 3]);

        let triv = centralizer_tables(&Preset::Trivial.build().unwrap(), DEFAULT_SEED).unwrap();
        assert_eq!(triv.len(), 1);
        assert_eq!(triv[0].table.rows(), &[vec![c(1.0)]]);

        let z4 = Preset::Cyclic(4).build().unwrap();
        let full = character_table(&z4, DEFAULT_SEED).unwrap();
        for t in centralizer_tables(&z4, DEFAULT_SEED).unwrap() {
            assert_eq!(t.table.rows(), full.rows());
        }
    }
}
