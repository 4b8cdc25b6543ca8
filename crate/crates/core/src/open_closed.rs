//! Open/closed theories over a semisimple closed algebra `B = ⊕ C a_i`.
//!
//! A brane is a vector `k` of multiplicities, one per point of `Spec B`. Its
//! open algebra is `⊕ Mat_{k_i}` with trace `ε_A(ψ) = Σ √ε_i Tr ψ_i`, stored
//! in the matrix-unit basis block by block (`E_pq` at offset `p·k_i + q`).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Result, TqftError};
use crate::frobenius::FrobeniusAlgebra;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

#[derive(Clone, Debug, Serialize)]
pub struct ClosedStringAlgebra {
    traces: Vec<C>,
    sqrt_choices: Vec<C>,
}

impl ClosedStringAlgebra {
    /// Principal square roots, negated where `negate[i]` is set. A short
    /// `negate` leaves the remaining roots principal.
    pub fn new(traces: Vec<C>, negate: &[bool]) -> Result<Self> {
        let sqrt_choices = traces
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let r = t.sqrt();
                if negate.get(i).copied().unwrap_or(false) {
                    -r
                } else {
                    r
                }
            })
            .collect();
        Self::with_roots(traces, sqrt_choices)
    }

    pub fn with_roots(traces: Vec<C>, sqrt_choices: Vec<C>) -> Result<Self> {
        if traces.len() != sqrt_choices.len() {
            return Err(TqftError::Input(format!(
                "{} traces but {} square roots",
                traces.len(),
                sqrt_choices.len()
            )));
        }
        for (i, (t, r)) in traces.iter().zip(&sqrt_choices).enumerate() {
            if t.norm() == 0.0 {
                return Err(TqftError::Input(format!("trace {i} is zero")));
            }
            if (r * r - t).norm() > 1e-12 * t.norm().max(1.0) {
                return Err(TqftError::Input(format!("root {i} does not square to its trace")));
            }
        }
        Ok(ClosedStringAlgebra {
            traces,
            sqrt_choices,
        })
    }

    pub fn n(&self) -> usize {
        self.traces.len()
    }

    pub fn traces(&self) -> &[C] {
        &self.traces
    }

    pub fn sqrt_choices(&self) -> &[C] {
        &self.sqrt_choices
    }

    pub fn algebra(&self) -> Result<FrobeniusAlgebra> {
        FrobeniusAlgebra::semisimple_algebra(&self.traces)
    }

    /// `(φ, χ)_B = Σ φ_i χ_i ε_i`.
    pub fn pairing(&self, phi: &[C], chi: &[C]) -> C {
        phi.iter()
            .zip(chi)
            .zip(&self.traces)
            .map(|((a, b), t)| a * b * t)
            .sum()
    }

    /// Same algebra with the square root at `i` negated.
    pub fn flip_sign(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.sqrt_choices[i] = -out.sqrt_choices[i];
        out
    }
}

/// Integer classes of branes: the free abelian group of rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Group {
    pub rank: usize,
}

impl std::fmt::Display for K0Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.rank {
            1 => write!(f, "Z"),
            r => write!(f, "Z^{r}"),
        }
    }
}

pub fn classify_branes(b: &ClosedStringAlgebra) -> Result<K0Group> {
    if b.n() == 0 {
        return Err(TqftError::Precondition(
            "closed algebra must have at least one point".into(),
        ));
    }
    Ok(K0Group { rank: b.n() })
}

#[derive(Clone, Debug)]
pub struct OpenAlgebra {
    closed: ClosedStringAlgebra,
    k: Vec<usize>,
    offsets: Vec<usize>,
    algebra: FrobeniusAlgebra,
}

impl OpenAlgebra {
    pub fn build(b: &ClosedStringAlgebra, k: &[i64]) -> Result<Self> {
        if k.len() != b.n() {
            return Err(TqftError::Input(format!(
                "brane has {} entries for {} points",
                k.len(),
                b.n()
            )));
        }
        if let Some(i) = k.iter().position(|&x| x < 0) {
            return Err(TqftError::Input(format!("multiplicity {i} is negative")));
        }
        let k: Vec<usize> = k.iter().map(|&x| x as usize).collect();
        let mut offsets = Vec::with_capacity(k.len());
        let mut dim = 0;
        for &ki in &k {
            offsets.push(dim);
            dim += ki * ki;
        }
        if dim == 0 {
            return Err(TqftError::Input("brane is empty".into()));
        }
        let mut mu = vec![ZERO; dim * dim * dim];
        let mut unit = vec![ZERO; dim];
        let mut trace = vec![ZERO; dim];
        let mut labels = vec![String::new(); dim];
        for (i, &ki) in k.iter().enumerate() {
            let o = offsets[i];
            for p in 0..ki {
                unit[o + p * ki + p] = ONE;
                trace[o + p * ki + p] = b.sqrt_choices[i];
                for q in 0..ki {
                    labels[o + p * ki + q] = format!("E{i}_{p}{q}");
                    for s in 0..ki {
                        // E_pq E_qs = E_ps
                        let (x, y, z) = (o + p * ki + q, o + q * ki + s, o + p * ki + s);
                        mu[(x * dim + y) * dim + z] = ONE;
                    }
                }
            }
        }
        let algebra = FrobeniusAlgebra::build(mu, unit, trace, labels)?;
        Ok(OpenAlgebra {
            closed: b.clone(),
            k,
            offsets,
            algebra,
        })
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.algebra
    }

    pub fn closed(&self) -> &ClosedStringAlgebra {
        &self.closed
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn eps(&self, psi: &[C]) -> C {
        self.algebra.eps(psi)
    }

    fn block_trace(&self, psi: &[C], i: usize) -> C {
        let (o, ki) = (self.offsets[i], self.k[i]);
        (0..ki).map(|p| psi[o + p * ki + p]).sum()
    }

    /// Identity on block `i`, zero elsewhere.
    pub fn i_lower_star_basis(&self, i: usize) -> Result<Vec<C>> {
        if i >= self.k.len() {
            return Err(TqftError::OutOfRange {
                index: i,
                size: self.k.len(),
            });
        }
        let mut v = vec![ZERO; self.dim()];
        let (o, ki) = (self.offsets[i], self.k[i]);
        for p in 0..ki {
            v[o + p * ki + p] = ONE;
        }
        Ok(v)
    }

    /// `i_*(Σ φ_i a_i) = ⊕ φ_i id_i`.
    pub fn i_lower_star(&self, phi: &[C]) -> Vec<C> {
        let mut v = vec![ZERO; self.dim()];
        for (i, &ki) in self.k.iter().enumerate() {
            let o = self.offsets[i];
            for p in 0..ki {
                v[o + p * ki + p] = phi[i];
            }
        }
        v
    }

    /// `i^*(ψ) = Σ (Tr ψ_i / √ε_i) a_i`.
    pub fn i_upper_star(&self, psi: &[C]) -> Vec<C> {
        (0..self.k.len())
            .map(|i| self.block_trace(psi, i) / self.closed.sqrt_choices[i])
            .collect()
    }

    /// `|(i_* φ, ψ)_A − (φ, i^* ψ)_B|`.
    pub fn adjointness_defect(&self, phi: &[C], psi: &[C]) -> f64 {
        let lhs = self.eps(&self.algebra.mul(&self.i_lower_star(phi), psi));
        let rhs = self.closed.pairing(phi, &self.i_upper_star(psi));
        (lhs - rhs).norm()
    }

    /// Matrix of `i_* ∘ i^*` in the matrix-unit basis.
    pub fn round_trip_matrix(&self) -> DMatrix<C> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for col in 0..n {
            let e = crate::frobenius::basis(n, col);
            let v = self.i_lower_star(&self.i_upper_star(&e));
            for (row, x) in v.into_iter().enumerate() {
                m[(row, col)] = x;
            }
        }
        m
    }

    /// Worst violation of `i_*(ab) = i_*(a) i_*(b)`, unitality and
    /// centrality of the image against `samples` random elements.
    pub fn center_map_defect(&self, rng: &mut impl Rng, samples: usize) -> f64 {
        let n = self.k.len();
        let rand_c = |rng: &mut dyn rand::RngCore| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut worst: f64 = 0.0;
        let unit_image = self.i_lower_star(&vec![ONE; n]);
        worst = worst.max(max_diff(&unit_image, self.algebra.unit()));
        for _ in 0..samples {
            let a: Vec<C> = (0..n).map(|_| rand_c(rng)).collect();
            let b: Vec<C> = (0..n).map(|_| rand_c(rng)).collect();
            let ab: Vec<C> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let lhs = self.i_lower_star(&ab);
            let rhs = self.algebra.mul(&self.i_lower_star(&a), &self.i_lower_star(&b));
            worst = worst.max(max_diff(&lhs, &rhs));
            let x: Vec<C> = (0..self.dim()).map(|_| rand_c(rng)).collect();
            let ia = self.i_lower_star(&a);
            worst = worst.max(max_diff(&self.algebra.mul(&ia, &x), &self.algebra.mul(&x, &ia)));
        }
        worst
    }
}

fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct CardyReport {
    pub multiplicities: Vec<usize>,
    pub open_dim: usize,
    pub defect: f64,
}

/// Compares `μ_A σ Δ_A` with `i_* i^*`.
pub fn cardy_check(b: &ClosedStringAlgebra, k: &[i64]) -> Result<CardyReport> {
    let open = OpenAlgebra::build(b, k)?;
    let pi = open.algebra.double_twist_map();
    let defect = (pi - open.round_trip_matrix()).camax();
    Ok(CardyReport {
        multiplicities: open.k.clone(),
        open_dim: open.dim(),
        defect,
    })
}

/// Random closed algebra and brane: `n ≤ 3` points, `k_i ≤ 3` with at least
/// one nonzero entry, traces in `[0.1, 10]` and random root signs.
pub fn random_config(rng: &mut impl Rng) -> (ClosedStringAlgebra, Vec<i64>) {
    let n = rng.random_range(1..=3);
    let traces: Vec<C> = (0..n).map(|_| C::new(rng.random_range(0.1..10.0), 0.0)).collect();
    let signs: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut k: Vec<i64> = (0..n).map(|_| rng.random_range(0..=3)).collect();
    if k.iter().all(|&x| x == 0) {
        let i = rng.random_range(0..n);
        k[i] = rng.random_range(1..=3);
    }
    let b = ClosedStringAlgebra::new(traces, &signs).expect("nonzero traces");
    (b, k)
}
