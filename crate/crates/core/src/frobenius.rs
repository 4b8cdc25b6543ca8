//! Finite-dimensional Frobenius algebras over the complex numbers.
//!
//! An algebra is stored as structure constants `μ[i][j][k]` with
//! `e_i e_j = Σ_k μ[i][j][k] e_k`, the coordinates of the unit, and the trace
//! on basis vectors. The metric `g_ij = ε(e_i e_j)`, its inverse and the
//! comultiplication are derived on construction.
//!
//! Trace normalisations differ between constructors:
//! [`FrobeniusAlgebra::class_function_algebra`] uses `ε(e_a) = δ_{a,1}/|G|`
//! (principal-bundle normalisation), [`FrobeniusAlgebra::group_algebra`]
//! takes the trace at the identity as a parameter (pass `|G|` for the
//! regular-representation trace used by lattice state sums).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TqftError};
use crate::group::FiniteGroup;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Tolerance for the algebra axioms, scaled by the size of the structure
/// constants.
pub const AXIOM_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct FrobeniusAlgebra {
    dim: usize,
    labels: Vec<String>,
    mu: Vec<C>,
    unit: Vec<C>,
    trace: Vec<C>,
    commutative: bool,
    metric: DMatrix<C>,
    inv_metric: DMatrix<C>,
}

/// `ω = Σ_i e_i e^i`.
#[derive(Clone, Debug, Serialize)]
pub struct HandleElement {
    pub coordinates: Vec<C>,
    pub invertible: bool,
}

impl FrobeniusAlgebra {
    /// Validates structure constants, unit and trace.
    pub fn build(mu: Vec<C>, unit: Vec<C>, trace: Vec<C>, labels: Vec<String>) -> Result<Self> {
        let a = Self::assemble(mu, unit, trace, labels)?;
        a.check_axioms()?;
        Ok(a)
    }

    /// Builds without checking associativity or the unit law. The metric
    /// must still be invertible. Intended for fault-injection checks.
    pub fn build_unchecked(
        mu: Vec<C>,
        unit: Vec<C>,
        trace: Vec<C>,
        labels: Vec<String>,
    ) -> Result<Self> {
        Self::assemble(mu, unit, trace, labels)
    }

    fn assemble(mu: Vec<C>, unit: Vec<C>, trace: Vec<C>, labels: Vec<String>) -> Result<Self> {
        let n = unit.len();
        if n == 0 {
            return Err(TqftError::InvalidAlgebra("dimension must be positive".into()));
        }
        if mu.len() != n * n * n || trace.len() != n {
            return Err(TqftError::InvalidAlgebra(format!(
                "inconsistent sizes: mu {} (want {}), unit {n}, trace {}",
                mu.len(),
                n * n * n,
                trace.len()
            )));
        }
        let labels = if labels.len() == n {
            labels
        } else {
            (0..n).map(|i| format!("e{i}")).collect()
        };
        let metric = DMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| mu[(i * n + j) * n + k] * trace[k]).sum()
        });
        let sv = metric.clone().singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if smax == 0.0 || smin < 1e-9 * smax {
            return Err(TqftError::InvalidAlgebra(format!(
                "degenerate metric (singular values {smin:.3e} / {smax:.3e})"
            )));
        }
        let inv_metric = metric
            .clone()
            .try_inverse()
            .ok_or_else(|| TqftError::InvalidAlgebra("metric not invertible".into()))?;
        let commutative = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| (mu[(i * n + j) * n + k] - mu[(j * n + i) * n + k]).norm() <= 1e-9))
        });
        Ok(FrobeniusAlgebra {
            dim: n,
            labels,
            mu,
            unit,
            trace,
            commutative,
            metric,
            inv_metric,
        })
    }

    fn scale(&self) -> f64 {
        let m = self.mu.iter().map(|z| z.norm()).fold(1.0, f64::max);
        m * m * self.dim as f64
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.dim;
        let tol = AXIOM_TOL * self.scale();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs: C = (0..n).map(|p| self.mu(i, j, p) * self.mu(p, k, l)).sum();
                        let rhs: C = (0..n).map(|p| self.mu(j, k, p) * self.mu(i, p, l)).sum();
                        if (lhs - rhs).norm() > tol {
                            return Err(TqftError::InvalidAlgebra(format!(
                                "not associative at ({i},{j},{k};{l}): defect {:.3e}",
                                (lhs - rhs).norm()
                            )));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let e = basis(n, i);
            let left = self.mul(&self.unit, &e);
            let right = self.mul(&e, &self.unit);
            let d = max_diff(&left, &e).max(max_diff(&right, &e));
            if d > AXIOM_TOL * self.scale().sqrt() {
                return Err(TqftError::InvalidAlgebra(format!(
                    "unit law fails on e{i} (defect {d:.3e})"
                )));
            }
        }
        let snake = (&self.metric * &self.inv_metric - DMatrix::<C>::identity(n, n)).camax();
        if snake > AXIOM_TOL {
            return Err(TqftError::InvalidAlgebra(format!(
                "pairing/copairing snake identity defect {snake:.3e}"
            )));
        }
        Ok(())
    }

    /// Class functions on `G` with convolution product, basis = class sums.
    pub fn class_function_algebra(g: &FiniteGroup) -> Self {
        let n = g.class_structure_constants();
        let r = n.rank();
        let mut mu = vec![ZERO; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    mu[(a * r + b) * r + c] = C::new(n.get(a, b, c) as f64, 0.0);
                }
            }
        }
        let unit = basis(r, 0);
        let mut trace = vec![ZERO; r];
        trace[0] = C::new(1.0 / g.order() as f64, 0.0);
        let labels = g
            .conjugacy_classes()
            .iter()
            .map(|c| format!("[{}]", c.representative))
            .collect();
        Self::build(mu, unit, trace, labels).expect("class algebra of a group is Frobenius")
    }

    /// `C[G]` with `ε(e_g) = identity_trace · δ_{g,e}`.
    pub fn group_algebra(g: &FiniteGroup, identity_trace: f64) -> Result<Self> {
        let n = g.order();
        let mut mu = vec![ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                mu[(a * n + b) * n + g.mul(a, b)] = ONE;
            }
        }
        let mut trace = vec![ZERO; n];
        trace[0] = C::new(identity_trace, 0.0);
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        Self::build(mu, basis(n, 0), trace, labels)
    }

    /// `⊕ C e_i` with `e_i e_j = δ_ij e_i` and `ε(e_i) = traces[i]`.
    pub fn semisimple_algebra(traces: &[C]) -> Result<Self> {
        let n = traces.len();
        if n == 0 {
            return Err(TqftError::InvalidAlgebra("need at least one summand".into()));
        }
        if let Some(i) = traces.iter().position(|t| t.norm() == 0.0) {
            return Err(TqftError::InvalidAlgebra(format!("trace entry {i} is zero")));
        }
        let mut mu = vec![ZERO; n * n * n];
        for i in 0..n {
            mu[(i * n + i) * n + i] = ONE;
        }
        let unit = vec![ONE; n];
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        Self::build(mu, unit, traces.to_vec(), labels)
    }

    /// `C[x]/(x²)` with trace values on `1` and `x`.
    pub fn dual_numbers(trace_one: C, trace_x: C) -> Result<Self> {
        let mut mu = vec![ZERO; 8];
        mu[0] = ONE; // 1·1 = 1
        mu[(1) * 2 + 1] = ONE; // 1·x = x
        mu[(2) * 2 + 1] = ONE; // x·1 = x
        Self::build(
            mu,
            vec![ONE, ZERO],
            vec![trace_one, trace_x],
            vec!["1".into(), "x".into()],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    #[inline]
    pub fn mu(&self, i: usize, j: usize, k: usize) -> C {
        self.mu[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[C] {
        &self.mu
    }

    pub fn unit(&self) -> &[C] {
        &self.unit
    }

    pub fn trace_vector(&self) -> &[C] {
        &self.trace
    }

    pub fn metric(&self) -> &DMatrix<C> {
        &self.metric
    }

    pub fn inverse_metric(&self) -> &DMatrix<C> {
        &self.inv_metric
    }

    /// Coordinates of `e^j` (column `j` of the inverse metric), so that
    /// `ε(e_i e^j) = δ_ij`.
    pub fn dual_basis(&self) -> Vec<Vec<C>> {
        (0..self.dim)
            .map(|j| self.inv_metric.column(j).iter().copied().collect())
            .collect()
    }

    pub fn mul(&self, a: &[C], b: &[C]) -> Vec<C> {
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            if a[i] == ZERO {
                continue;
            }
            for j in 0..n {
                if b[j] == ZERO {
                    continue;
                }
                let ab = a[i] * b[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += ab * self.mu(i, j, k);
                }
            }
        }
        out
    }

    pub fn eps(&self, a: &[C]) -> C {
        a.iter().zip(&self.trace).map(|(x, t)| x * t).sum()
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mul_matrix(&self, a: &[C]) -> DMatrix<C> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| a[i] * self.mu(i, j, k)).sum())
    }

    /// `m_ijk = ε(e_i e_j e_k)`.
    pub fn three_point(&self, i: usize, j: usize, k: usize) -> C {
        (0..self.dim)
            .map(|p| self.mu(i, j, p) * self.metric[(p, k)])
            .sum()
    }

    /// `Δ[i][j][k]` with `Δ(e_i) = Σ Δ[i][j][k] e_j ⊗ e_k`, obtained by
    /// raising the last two indices of the three-point function.
    /// Assumes a symmetric trace form when the algebra is noncommutative.
    pub fn comultiplication(&self) -> Vec<C> {
        let n = self.dim;
        let g = &self.inv_metric;
        let mut m3 = vec![ZERO; n * n * n];
        for i in 0..n {
            for p in 0..n {
                for q in 0..n {
                    m3[(i * n + p) * n + q] = self.three_point(i, p, q);
                }
            }
        }
        let mut half = vec![ZERO; n * n * n]; // [i][j][q] = Σ_p m[i][p][q] g^{pj}
        for i in 0..n {
            for j in 0..n {
                for q in 0..n {
                    half[(i * n + j) * n + q] = (0..n).map(|p| m3[(i * n + p) * n + q] * g[(p, j)]).sum();
                }
            }
        }
        let mut delta = vec![ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // Stored transposed: Δ(e_i) = Σ e_i e_p ⊗ e^p.
                    delta[(i * n + k) * n + j] =
                        (0..n).map(|q| half[(i * n + j) * n + q] * g[(q, k)]).sum();
                }
            }
        }
        delta
    }

    pub fn handle_element(&self) -> HandleElement {
        let n = self.dim;
        let mut omega = vec![ZERO; n];
        for i in 0..n {
            for j in 0..n {
                let c = self.inv_metric[(i, j)];
                if c == ZERO {
                    continue;
                }
                for (k, o) in omega.iter_mut().enumerate() {
                    *o += c * self.mu(i, j, k);
                }
            }
        }
        let invertible = nonsingular(&self.left_mul_matrix(&omega));
        HandleElement {
            coordinates: omega,
            invertible,
        }
    }

    pub fn is_semisimple(&self) -> bool {
        self.handle_element().invertible
    }

    /// `ε(ω^g)` by `g` applications of `L_ω` to the unit.
    pub fn genus_invariant(&self, genus: usize) -> C {
        let omega = self.handle_element().coordinates;
        let l = self.left_mul_matrix(&omega);
        let mut v = DVector::from_column_slice(&self.unit);
        for _ in 0..genus {
            v = &l * v;
        }
        self.eps(v.as_slice())
    }

    /// Same algebra with trace `λ ε`.
    pub fn rescale_trace(&self, lambda: C) -> Result<Self> {
        let trace = self.trace.iter().map(|t| t * lambda).collect();
        Self::build(self.mu.clone(), self.unit.clone(), trace, self.labels.clone())
    }

    /// Matrix of `μ ∘ σ ∘ Δ`.
    pub fn double_twist_map(&self) -> DMatrix<C> {
        let n = self.dim;
        let delta = self.comultiplication();
        DMatrix::from_fn(n, n, |l, i| {
            let mut s = ZERO;
            for j in 0..n {
                for k in 0..n {
                    let d = delta[(i * n + j) * n + k];
                    if d != ZERO {
                        s += d * self.mu(k, j, l);
                    }
                }
            }
            s
        })
    }

    /// Largest violation of the counit laws `(ε⊗id)Δ = id = (id⊗ε)Δ`.
    pub fn counit_defect(&self) -> f64 {
        let n = self.dim;
        let delta = self.comultiplication();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for k in 0..n {
                let left: C = (0..n).map(|j| delta[(i * n + j) * n + k] * self.trace[j]).sum();
                let right: C = (0..n).map(|j| delta[(i * n + k) * n + j] * self.trace[j]).sum();
                let target = if i == k { ONE } else { ZERO };
                worst = worst.max((left - target).norm()).max((right - target).norm());
            }
        }
        worst
    }

    /// Largest violation of `(id⊗μ)(Δ⊗id) = Δμ = (μ⊗id)(id⊗Δ)`.
    pub fn frobenius_defect(&self) -> f64 {
        let n = self.dim;
        let delta = self.comultiplication();
        let d = |i: usize, j: usize, k: usize| delta[(i * n + j) * n + k];
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mid: C = (0..n).map(|p| self.mu(a, b, p) * d(p, c, e)).sum();
                        let left: C = (0..n).map(|q| d(a, c, q) * self.mu(q, b, e)).sum();
                        let right: C = (0..n).map(|q| d(b, q, e) * self.mu(a, q, c)).sum();
                        worst = worst.max((mid - left).norm()).max((mid - right).norm());
                    }
                }
            }
        }
        worst
    }
}

pub(crate) fn basis(n: usize, i: usize) -> Vec<C> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Smallest singular value at least `1e-9` times the largest.
pub fn nonsingular(m: &DMatrix<C>) -> bool {
    let sv = m.clone().singular_values();
    let smax = sv.max();
    smax > 0.0 && sv.min() >= 1e-9 * smax
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, Preset};

    fn c(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn one_dimensional() {
        let a = FrobeniusAlgebra::semisimple_algebra(&[c(4.0)]).unwrap();
        assert!((a.dual_basis()[0][0] - c(0.25)).norm() < 1e-15);
        let delta = a.comultiplication();
        assert!((delta[0] - c(0.25)).norm() < 1e-15);
        assert!((a.genus_invariant(0) - c(4.0)).norm() < 1e-15);
    }

    #[test]
    fn dual_numbers_are_frobenius_but_not_semisimple() {
        let a = FrobeniusAlgebra::dual_numbers(c(0.0), c(1.0)).unwrap();
        assert_eq!(a.metric(), &DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
        let h = a.handle_element();
        assert!((h.coordinates[0]).norm() < 1e-12);
        assert!((h.coordinates[1] - c(2.0)).norm() < 1e-12);
        let sq = a.mul(&h.coordinates, &h.coordinates);
        assert!(sq.iter().all(|z| z.norm() < 1e-12));
        assert!(!h.invertible);
        assert!(!a.is_semisimple());
    }

    #[test]
    fn zero_trace_is_degenerate() {
        let err = FrobeniusAlgebra::dual_numbers(c(0.0), c(0.0)).unwrap_err();
        assert!(err.to_string().contains("degenerate"));
        assert!(FrobeniusAlgebra::semisimple_algebra(&[c(1.0), c(0.0)]).is_err());
    }

    #[test]
    fn rejects_non_associative() {
        // e0 unit, e1 e1 = e0 + e1 but with e1 e0 perturbed.
        let mut mu = vec![ZERO; 8];
        mu[0] = ONE;
        mu[1 * 2 + 1] = ONE;
        mu[2 * 2 + 1] = ONE;
        mu[3 * 2] = ONE;
        mu[2 * 2] = c(0.5);
        let err = FrobeniusAlgebra::build(mu, vec![ONE, ZERO], vec![ONE, ONE], vec![]).unwrap_err();
        assert!(err.to_string().contains("not associative") || err.to_string().contains("unit"));
    }

    #[test]
    fn class_function_metric_z2() {
        let g = Preset::Cyclic(2).build().unwrap();
        let a = FrobeniusAlgebra::class_function_algebra(&g);
        // g_ab = δ_{a b^-1} |a| / |G|
        let expected = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.5)]);
        assert!((a.metric() - expected).camax() < 1e-15);
        let triv = FrobeniusAlgebra::class_function_algebra(&Preset::Trivial.build().unwrap());
        assert_eq!(triv.dim(), 1);
        assert!((triv.trace_vector()[0] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn s3_transposition_square() {
        let g = Preset::Symmetric(3).build().unwrap();
        let a = FrobeniusAlgebra::class_function_algebra(&g);
        let sq = a.mul(&basis(3, 1), &basis(3, 1));
        assert!((sq[0] - c(3.0)).norm() < 1e-12);
        assert!(a.is_semisimple());
    }

    #[test]
    fn semisimple_handle_and_genus() {
        let traces = [c(0.5), c(2.0), C::new(1.0, -3.0)];
        let a = FrobeniusAlgebra::semisimple_algebra(&traces).unwrap();
        let h = a.handle_element();
        for (w, t) in h.coordinates.iter().zip(&traces) {
            assert!((w - t.inv()).norm() < 1e-12);
        }
        assert!(h.invertible);
        for genus in 0..5 {
            let expected: C = traces.iter().map(|t| t.powi(1 - genus as i32)).sum();
            assert!((a.genus_invariant(genus) - expected).norm() < 1e-10);
        }
        let delta = a.comultiplication();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let want = if i == j && j == k { traces[i].inv() } else { ZERO };
                    assert!((delta[(i * n + j) * n + k] - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn z2_genus_two() {
        let a = FrobeniusAlgebra::class_function_algebra(&Preset::Cyclic(2).build().unwrap());
        assert!((a.genus_invariant(2) - c(8.0)).norm() < 1e-12);
    }

    #[test]
    fn derived_structure_is_consistent() {
        for p in catalog(12) {
            let g = p.build().unwrap();
            let a = FrobeniusAlgebra::class_function_algebra(&g);
            assert!(a.is_semisimple(), "{p}");
            let snake = (a.metric() * a.inverse_metric() - DMatrix::<C>::identity(a.dim(), a.dim())).camax();
            assert!(snake < 1e-12, "{p}: {snake}");
            assert!(a.counit_defect() < 1e-9, "{p}");
            assert!(a.frobenius_defect() < 1e-9, "{p}");
        }
        let ga = FrobeniusAlgebra::group_algebra(&Preset::Symmetric(3).build().unwrap(), 6.0).unwrap();
        assert!(!ga.is_commutative());
        assert!(ga.counit_defect() < 1e-9);
        assert!(ga.frobenius_defect() < 1e-9);
    }

    #[test]
    fn trace_rescaling_law() {
        let g = Preset::Symmetric(3).build().unwrap();
        let a = FrobeniusAlgebra::class_function_algebra(&g);
        let lambda = C::new(3.0, 1.0);
        let b = a.rescale_trace(lambda).unwrap();
        for genus in 0..4 {
            let want = a.genus_invariant(genus) * lambda.powi(1 - genus as i32);
            assert!((b.genus_invariant(genus) - want).norm() < 1e-9 * want.norm().max(1.0));
        }
    }
}
