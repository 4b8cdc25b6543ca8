//! Exact lattice data and sparse tensor contraction.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::triangulation::Triangulation;
use crate::error::{Result, TqftError};
use crate::group::FiniteGroup;
use crate::rational;

type Q = BigRational;

/// Three-point tensor, metric and inverse metric of a semisimple algebra.
#[derive(Clone, Debug)]
pub struct LatticeTensorData {
    dim: usize,
    /// Nonzero `m_ijk`.
    m: HashMap<(usize, usize, usize), Q>,
    g: Vec<Vec<Q>>,
    g_inv: Vec<Vec<Q>>,
}

impl LatticeTensorData {
    /// `C[G]` in the group basis: `m_ijk = |G| δ(ijk = e)`,
    /// `g_ij = |G| δ(ij = e)`, `g^ij = δ(ij = e)/|G|`.
    pub fn group_algebra(grp: &FiniteGroup) -> Self {
        let n = grp.order();
        let order = rational::int(n as i64);
        let mut m = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                let k = grp.inv(grp.mul(i, j));
                m.insert((i, j, k), order.clone());
            }
        }
        let delta = |scale: &Q| -> Vec<Vec<Q>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if grp.mul(i, j) == 0 { scale.clone() } else { Q::zero() })
                        .collect()
                })
                .collect()
        };
        LatticeTensorData {
            dim: n,
            m,
            g: delta(&order),
            g_inv: delta(&order.recip()),
        }
    }

    /// From structure constants `μ[(i·n + j)·n + k]`: `g_ij = Tr(L_i L_j)`,
    /// `m_ijk = Σ_l μ_ij^l g_lk`, with `g` inverted exactly.
    pub fn from_structure_constants(dim: usize, mu: &[Q]) -> Result<Self> {
        if mu.len() != dim * dim * dim {
            return Err(TqftError::Input(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                mu.len()
            )));
        }
        let at = |i: usize, j: usize, k: usize| &mu[(i * dim + j) * dim + k];
        let mut g = vec![vec![Q::zero(); dim]; dim];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, gij) in row.iter_mut().enumerate() {
                for k in 0..dim {
                    for l in 0..dim {
                        let a = at(i, k, l);
                        if !a.is_zero() {
                            *gij += a * at(j, l, k);
                        }
                    }
                }
            }
        }
        let g_inv = rational::invert(&g)
            .map_err(|_| TqftError::InvalidAlgebra("trace form is degenerate".into()))?;
        let mut m = HashMap::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let mut s = Q::zero();
                    for (l, gl) in g.iter().enumerate() {
                        let a = at(i, j, l);
                        if !a.is_zero() && !gl[k].is_zero() {
                            s += a * &gl[k];
                        }
                    }
                    if !s.is_zero() {
                        m.insert((i, j, k), s);
                    }
                }
            }
        }
        Ok(LatticeTensorData { dim, m, g, g_inv })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self, i: usize, j: usize, k: usize) -> Q {
        self.m.get(&(i, j, k)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn metric(&self) -> &[Vec<Q>] {
        &self.g
    }

    pub fn inverse_metric(&self) -> &[Vec<Q>] {
        &self.g_inv
    }

    /// `m_ij^k = Σ_l m_ijl g^lk`.
    pub fn raised(&self, i: usize, j: usize, k: usize) -> Q {
        (0..self.dim)
            .map(|l| self.m(i, j, l) * &self.g_inv[l][k])
            .fold(Q::zero(), |a, b| a + b)
    }
}

/// Sparse tensor whose legs are labelled by slot numbers; every leg ranges
/// over `0..dim` and an index tuple is packed little-endian in base `dim`.
#[derive(Clone, Debug)]
struct Sparse {
    legs: Vec<usize>,
    entries: HashMap<u128, Q>,
}

struct Packer {
    dim: u128,
}

impl Packer {
    fn digit(&self, key: u128, pos: usize) -> usize {
        ((key / self.dim.pow(pos as u32)) % self.dim) as usize
    }

    fn pack(&self, digits: impl DoubleEndedIterator<Item = usize>) -> u128 {
        digits.rev().fold(0u128, |acc, d| acc * self.dim + d as u128)
    }
}

/// Result of contracting a triangulation.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeValue {
    /// Boundary slots in circle order; empty for closed surfaces.
    pub legs: Vec<usize>,
    pub dim: usize,
    /// Dense values, first leg most significant.
    #[serde(serialize_with = "serialize_vec")]
    pub values: Vec<Q>,
}

fn serialize_vec<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&rational::to_string(q))?;
    }
    seq.end()
}

impl LatticeValue {
    /// The closed-surface value.
    pub fn scalar(&self) -> Option<&Q> {
        self.legs.is_empty().then(|| &self.values[0])
    }

    pub fn nonzero_entries(&self) -> usize {
        self.values.iter().filter(|q| !q.is_zero()).count()
    }

    pub fn at(&self, coloring: &[usize]) -> Result<&Q> {
        if coloring.len() != self.legs.len() {
            return Err(TqftError::Input(format!(
                "coloring has {} entries for {} boundary edges",
                coloring.len(),
                self.legs.len()
            )));
        }
        let mut idx = 0;
        for &c in coloring {
            if c >= self.dim {
                return Err(TqftError::OutOfRange {
                    index: c,
                    size: self.dim,
                });
            }
            idx = idx * self.dim + c;
        }
        Ok(&self.values[idx])
    }
}

/// Contracts triangle tensors along paired slots through `g^{ij}`.
pub fn partition_function(t: &Triangulation, d: &LatticeTensorData) -> Result<LatticeValue> {
    let dim = d.dim;
    let max_legs = (128.0 / (dim.max(2) as f64).log2()).floor() as usize;
    let p = Packer { dim: dim as u128 };

    let mut tensors: Vec<Option<Sparse>> = (0..t.num_triangles())
        .map(|tri| {
            let entries = d
                .m
                .iter()
                .map(|(&(i, j, k), v)| (p.pack([i, j, k].into_iter()), v.clone()))
                .collect();
            Some(Sparse {
                legs: vec![3 * tri, 3 * tri + 1, 3 * tri + 2],
                entries,
            })
        })
        .collect();

    // Absorb each metric into the triangle owning the smaller slot: the leg
    // `a` becomes leg `b`, now shared with `b`'s triangle.
    for (a, b) in t.pairs() {
        let owner = a / 3;
        let tensor = tensors[owner].as_mut().expect("present");
        let pos = tensor.legs.iter().position(|&l| l == a).expect("leg present");
        let mut out: HashMap<u128, Q> = HashMap::new();
        for (key, v) in &tensor.entries {
            let x = p.digit(*key, pos);
            let base = key - (x as u128) * (dim as u128).pow(pos as u32);
            for (y, gxy) in d.g_inv[x].iter().enumerate() {
                if gxy.is_zero() {
                    continue;
                }
                let k = base + (y as u128) * (dim as u128).pow(pos as u32);
                *out.entry(k).or_insert_with(Q::zero) += v * gxy;
            }
        }
        out.retain(|_, v| !v.is_zero());
        tensor.legs[pos] = b;
        tensor.entries = out;
        if b / 3 == owner {
            trace_repeated(tensor, &p);
        }
    }

    loop {
        let live: Vec<usize> = (0..tensors.len()).filter(|&i| tensors[i].is_some()).collect();
        if live.len() == 1 {
            break;
        }
        // Greedy: the pair whose product has the fewest legs, ties broken by
        // entry counts and then by position.
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (ai, &x) in live.iter().enumerate() {
            for &y in &live[ai + 1..] {
                let (tx, ty) = (tensors[x].as_ref().unwrap(), tensors[y].as_ref().unwrap());
                let shared = tx.legs.iter().filter(|l| ty.legs.contains(l)).count();
                if shared == 0 {
                    continue;
                }
                let rank = tx.legs.len() + ty.legs.len() - 2 * shared;
                let size = tx.entries.len() * ty.entries.len();
                let cand = (rank, size, x, y);
                if best.is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                    best = Some(cand);
                }
            }
        }
        let (x, y) = match best {
            Some((_, _, x, y)) => (x, y),
            // Disconnected pieces: outer product of the first two.
            None => (live[0], live[1]),
        };
        let b = tensors[y].take().unwrap();
        let a = tensors[x].take().unwrap();
        let merged = contract(&a, &b, &p);
        if merged.legs.len() > max_legs {
            return Err(TqftError::Guard(format!(
                "intermediate tensor with {} legs exceeds index packing",
                merged.legs.len()
            )));
        }
        tensors[x] = Some(merged);
    }

    let last = tensors.into_iter().flatten().next().expect("one tensor left");
    let legs = t.boundary_slots();
    let positions: Vec<usize> = legs
        .iter()
        .map(|l| last.legs.iter().position(|x| x == l).expect("boundary leg survives"))
        .collect();
    let size = dim.pow(legs.len() as u32);
    let mut values = vec![Q::zero(); size];
    for (key, v) in &last.entries {
        let idx = positions.iter().fold(0, |acc, &pos| acc * dim + p.digit(*key, pos));
        values[idx] = v.clone();
    }
    if legs.is_empty() && last.entries.is_empty() {
        values = vec![Q::zero()];
    }
    Ok(LatticeValue { legs, dim, values })
}

/// Sums over the diagonal of a leg that occurs twice, removing both.
fn trace_repeated(t: &mut Sparse, p: &Packer) {
    loop {
        let Some((i, j)) = (0..t.legs.len()).find_map(|i| {
            (i + 1..t.legs.len()).find(|&j| t.legs[j] == t.legs[i]).map(|j| (i, j))
        }) else {
            return;
        };
        let keep: Vec<usize> = (0..t.legs.len()).filter(|&k| k != i && k != j).collect();
        let mut out: HashMap<u128, Q> = HashMap::new();
        for (key, v) in &t.entries {
            if p.digit(*key, i) == p.digit(*key, j) {
                let k = p.pack(keep.iter().map(|&pos| p.digit(*key, pos)));
                *out.entry(k).or_insert_with(Q::zero) += v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        t.legs = keep.iter().map(|&k| t.legs[k]).collect();
        t.entries = out;
    }
}

/// Contracts all legs common to `a` and `b`.
fn contract(a: &Sparse, b: &Sparse, p: &Packer) -> Sparse {
    let shared: Vec<usize> = a.legs.iter().copied().filter(|l| b.legs.contains(l)).collect();
    let pos_in = |t: &Sparse, l: usize| t.legs.iter().position(|&x| x == l).unwrap();
    let a_shared: Vec<usize> = shared.iter().map(|&l| pos_in(a, l)).collect();
    let b_shared: Vec<usize> = shared.iter().map(|&l| pos_in(b, l)).collect();
    let a_free: Vec<usize> = (0..a.legs.len()).filter(|k| !a_shared.contains(k)).collect();
    let b_free: Vec<usize> = (0..b.legs.len()).filter(|k| !b_shared.contains(k)).collect();

    let mut index: HashMap<u128, Vec<(Vec<usize>, &Q)>> = HashMap::new();
    for (key, v) in &a.entries {
        let s = p.pack(a_shared.iter().map(|&k| p.digit(*key, k)));
        let free = a_free.iter().map(|&k| p.digit(*key, k)).collect();
        index.entry(s).or_default().push((free, v));
    }
    let mut out: HashMap<u128, Q> = HashMap::new();
    for (key, v) in &b.entries {
        let s = p.pack(b_shared.iter().map(|&k| p.digit(*key, k)));
        let Some(matches) = index.get(&s) else {
            continue;
        };
        let bfree: Vec<usize> = b_free.iter().map(|&k| p.digit(*key, k)).collect();
        for (afree, av) in matches {
            let k = p.pack(afree.iter().chain(&bfree).copied());
            *out.entry(k).or_insert_with(Q::zero) += *av * v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    let mut legs: Vec<usize> = a_free.iter().map(|&k| a.legs[k]).collect();
    legs.extend(b_free.iter().map(|&k| b.legs[k]));
    let mut merged = Sparse { legs, entries: out };
    trace_repeated(&mut merged, p);
    merged
}

/// `π[c][a] = Σ_b Z_ab g^{bc}`: the cylinder contracted with its outgoing
/// boundary raised by the metric.
pub fn cylinder_projector(grp: &FiniteGroup) -> Result<Vec<Vec<Q>>> {
    let d = LatticeTensorData::group_algebra(grp);
    projector_from(&Triangulation::cylinder(), &d)
}

/// Same as [`cylinder_projector`] for any two-circle triangulation whose
/// first circle is incoming.
pub fn projector_from(t: &Triangulation, d: &LatticeTensorData) -> Result<Vec<Vec<Q>>> {
    if t.boundary().len() != 2 || t.boundary().iter().any(|c| c.len() != 1) {
        return Err(TqftError::Precondition(
            "projector needs two boundary circles of one edge each".into(),
        ));
    }
    let z = partition_function(t, d)?;
    let n = d.dim;
    let mut pi = vec![vec![Q::zero(); n]; n];
    for (c, row) in pi.iter_mut().enumerate() {
        for (a, entry) in row.iter_mut().enumerate() {
            for b in 0..n {
                let gbc = &d.g_inv[b][c];
                if !gbc.is_zero() {
                    *entry += z.at(&[a, b])? * gbc;
                }
            }
        }
    }
    Ok(pi)
}

/// Class sum of class `a` as a vector in the group basis.
pub fn class_sum(grp: &FiniteGroup, a: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); grp.order()];
    for &x in &grp.conjugacy_classes()[a].members {
        v[x] = Q::one();
    }
    v
}

pub fn apply(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |s, (a, b)| s + a * b))
        .collect()
}
