//! Modular data `(S, T, C)` for the Drinfeld double `D(G)` and for SU(2) at
//! level `k`, with Verlinde fusion and genus-`g` state-space dimensions.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::character::centralizer_tables;
use crate::dw::{count_homs_surface_group, CountMethod};
use crate::error::{Result, TqftError};
use crate::group::FiniteGroup;

type C = Complex64;

/// Tolerance for the modular relations.
pub const TOL_RELATIONS: f64 = 1e-8;
/// Snap tolerance for fusion coefficients and dimensions.
pub const TOL_SNAP: f64 = 1e-6;
/// Largest order searched when checking that twists are roots of unity.
pub const ROOT_OF_UNITY_BOUND: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Label {
    /// Conjugacy class (with its representative) and an irrep of the
    /// representative's centralizer.
    Double {
        class: usize,
        representative: usize,
        irrep: usize,
    },
    Level(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Double { class, irrep, .. } => write!(f, "({class},{irrep})"),
            Label::Level(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModularData {
    name: String,
    labels: Vec<Label>,
    s: DMatrix<C>,
    t: Vec<C>,
    dual: Vec<usize>,
    qdims: Vec<C>,
    p_plus: C,
    p_minus: C,
    global_dim: C,
    zeta: C,
    /// `+1` or `-1` for SU(2)_k, the sign chosen for the twists.
    twist_sign: Option<i8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    pub s_symmetry: f64,
    pub s_unitarity: f64,
    pub s_squared_is_c: f64,
    pub c_squared_is_one: f64,
    pub c_commutes_with_t: f64,
    pub st_cubed: f64,
    pub max_defect: f64,
}

impl RelationsReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_defect < tol
    }
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl ModularData {
    /// Derives quantum dimensions, Gauss sums, `D` and `ζ` from `S`, `T`
    /// and the duality permutation.
    pub fn from_parts(
        name: impl Into<String>,
        labels: Vec<Label>,
        s: DMatrix<C>,
        t: Vec<C>,
        dual: Vec<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if s.nrows() != n || s.ncols() != n || t.len() != n || dual.len() != n {
            return Err(TqftError::Input("modular data shapes disagree".into()));
        }
        if dual.iter().any(|&d| d >= n) {
            return Err(TqftError::Input("dual index out of range".into()));
        }
        let s00 = s[(0, 0)];
        if s00.norm() < 1e-14 {
            return Err(TqftError::invariant("unit_label", "S_00 vanishes"));
        }
        let qdims: Vec<C> = (0..n).map(|i| s[(0, i)] / s00).collect();
        let p_plus: C = (0..n).map(|i| t[i] * qdims[i] * qdims[i]).sum();
        let p_minus: C = (0..n).map(|i| t[i].inv() * qdims[i] * qdims[i]).sum();
        let global_dim = (p_plus * p_minus).sqrt();
        // ζ³ = p⁺/D; this cube root is also a sixth root of p⁺/p⁻.
        let zeta = C::from_polar(1.0, (p_plus / global_dim).arg() / 3.0);
        Ok(ModularData {
            name: name.into(),
            labels,
            s,
            t,
            dual,
            qdims,
            p_plus,
            p_minus,
            global_dim,
            zeta,
            twist_sign: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn s(&self) -> &DMatrix<C> {
        &self.s
    }

    pub fn twists(&self) -> &[C] {
        &self.t
    }

    pub fn t(&self) -> DMatrix<C> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.t))
    }

    pub fn dual(&self) -> &[usize] {
        &self.dual
    }

    pub fn c(&self) -> DMatrix<C> {
        let n = self.rank();
        DMatrix::from_fn(n, n, |i, j| if self.dual[i] == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) })
    }

    pub fn qdims(&self) -> &[C] {
        &self.qdims
    }

    pub fn p_plus(&self) -> C {
        self.p_plus
    }

    pub fn p_minus(&self) -> C {
        self.p_minus
    }

    pub fn global_dimension(&self) -> C {
        self.global_dim
    }

    pub fn zeta(&self) -> C {
        self.zeta
    }

    pub fn twist_sign(&self) -> Option<i8> {
        self.twist_sign
    }

    /// Same data with the twists replaced; derived scalars are recomputed.
    pub fn with_twists(&self, t: Vec<C>) -> Result<Self> {
        let mut md = Self::from_parts(self.name.clone(), self.labels.clone(), self.s.clone(), t, self.dual.clone())?;
        md.twist_sign = self.twist_sign;
        Ok(md)
    }

    /// Same data with `S` replaced; derived scalars are recomputed.
    pub fn with_s_matrix(&self, s: DMatrix<C>) -> Result<Self> {
        let mut md = Self::from_parts(self.name.clone(), self.labels.clone(), s, self.t.clone(), self.dual.clone())?;
        md.twist_sign = self.twist_sign;
        Ok(md)
    }

    /// Defects of `S = Sᵀ`, `SS† = 1`, `S² = C`, `C² = 1`, `CT = TC` and
    /// `(ST)³ = ζ³ S²`.
    pub fn relations(&self) -> RelationsReport {
        let n = self.rank();
        let s = &self.s;
        let t = self.t();
        let c = self.c();
        let id = DMatrix::<C>::identity(n, n);
        let s2 = s * s;
        let st = s * &t;
        let st3 = &st * &st * &st;
        let zeta3 = self.zeta * self.zeta * self.zeta;
        let report = [
            max_abs(&(s - s.transpose())),
            max_abs(&(s * s.adjoint() - &id)),
            max_abs(&(&s2 - &c)),
            max_abs(&(&c * &c - &id)),
            max_abs(&(&c * &t - &t * &c)),
            max_abs(&(st3 - s2 * zeta3)),
        ];
        RelationsReport {
            s_symmetry: report[0],
            s_unitarity: report[1],
            s_squared_is_c: report[2],
            c_squared_is_one: report[3],
            c_commutes_with_t: report[4],
            st_cubed: report[5],
            max_defect: report.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Smallest `N ≤ bound` with `θ^N = 1` for each twist.
    pub fn twist_orders(&self, bound: u64) -> Vec<Option<u64>> {
        self.t
            .iter()
            .map(|theta| {
                if (theta.norm() - 1.0).abs() > TOL_RELATIONS {
                    return None;
                }
                let x = theta.arg() / (2.0 * PI);
                (1..=bound).find(|&n| {
                    let y = x * n as f64;
                    (y - y.round()).abs() < TOL_RELATIONS
                })
            })
            .collect()
    }
}

/// Modular data of `D(G)`.
pub fn drinfeld_double_data(g: &FiniteGroup) -> Result<ModularData> {
    drinfeld_double_data_seeded(g, crate::character::DEFAULT_SEED)
}

pub fn drinfeld_double_data_seeded(g: &FiniteGroup, seed: u64) -> Result<ModularData> {
    let tables = centralizer_tables(g, seed)?;
    let n = g.order();
    let mut labels = Vec::new();
    let mut offset = Vec::new();
    for ct in &tables {
        offset.push(labels.len());
        for irrep in 0..ct.table.num_irreps() {
            labels.push(Label::Double {
                class: ct.class,
                representative: ct.representative,
                irrep,
            });
        }
    }
    let rank = labels.len();

    // S block for the class pair (a, b): sum over h with h g_b h⁻¹ ∈ Z(g_a)
    // of χ_π(h g_b⁻¹ h⁻¹) χ_π'(h⁻¹ g_a⁻¹ h), over |Z(g_a)||Z(g_b)|.
    let pairs: Vec<(usize, usize)> = (0..tables.len())
        .flat_map(|a| (0..tables.len()).map(move |b| (a, b)))
        .collect();
    let blocks: Vec<((usize, usize), Vec<Vec<C>>)> = crate::parallel::install(|| {
        pairs
            .par_iter()
            .map(|&(a, b)| {
                let (ta, tb) = (&tables[a], &tables[b]);
                let (ga, gb) = (ta.representative, tb.representative);
                let (ra, rb) = (ta.table.num_irreps(), tb.table.num_irreps());
                let mut block = vec![vec![C::new(0.0, 0.0); rb]; ra];
                for h in 0..n {
                    if !ta.subgroup.contains(g.conjugate(gb, h)) {
                        continue;
                    }
                    let x = g.conjugate(g.inv(gb), h);
                    let y = g.conjugate(g.inv(ga), g.inv(h));
                    for (pi, row) in block.iter_mut().enumerate() {
                        let chi_x = ta.value(pi, x).expect("x lies in Z(g_a)");
                        for (pj, entry) in row.iter_mut().enumerate() {
                            *entry += chi_x * tb.value(pj, y).expect("y lies in Z(g_b)");
                        }
                    }
                }
                let norm = (ta.subgroup.order() * tb.subgroup.order()) as f64;
                for row in &mut block {
                    for e in row.iter_mut() {
                        *e /= norm;
                    }
                }
                ((a, b), block)
            })
            .collect()
    });
    let mut s = DMatrix::<C>::zeros(rank, rank);
    for ((a, b), block) in blocks {
        for (pi, row) in block.iter().enumerate() {
            for (pj, &v) in row.iter().enumerate() {
                s[(offset[a] + pi, offset[b] + pj)] = v;
            }
        }
    }

    let mut t = Vec::with_capacity(rank);
    for ct in &tables {
        for pi in 0..ct.table.num_irreps() {
            let dim = ct.table.dims()[pi] as f64;
            t.push(ct.value(pi, ct.representative).expect("g ∈ Z(g)") / dim);
        }
    }

    // Dual of (g, π) is (g⁻¹, π*) transported to the representative of the
    // class of g⁻¹.
    let mut dual = vec![usize::MAX; rank];
    for (a, ta) in tables.iter().enumerate() {
        let ga = ta.representative;
        let b = g.class_of(g.inv(ga));
        let tb = &tables[b];
        let gb = tb.representative;
        let k = (0..n)
            .find(|&k| g.conjugate(g.inv(ga), k) == gb)
            .expect("g⁻¹ is conjugate to its class representative");
        for pi in 0..ta.table.num_irreps() {
            let target = (0..tb.table.num_irreps()).find(|&pj| {
                tb.subgroup.elements().iter().all(|&x| {
                    let pulled = g.conjugate(x, g.inv(k));
                    let want = ta.value(pi, pulled).expect("conjugate lies in Z(g_a)").conj();
                    (tb.value(pj, x).unwrap() - want).norm() < TOL_SNAP
                })
            });
            let pj = target.ok_or_else(|| {
                TqftError::invariant("dual_label", format!("no conjugate irrep for label ({a},{pi})"))
            })?;
            dual[offset[a] + pi] = offset[b] + pj;
        }
    }

    let md = ModularData::from_parts(format!("D({})", g.name()), labels, s, t, dual)?;
    validate_double(&md, g)?;
    Ok(md)
}

fn validate_double(md: &ModularData, g: &FiniteGroup) -> Result<()> {
    let n = g.order() as f64;
    for (i, q) in md.qdims.iter().enumerate() {
        let r = q.re.round();
        if q.im.abs() > TOL_SNAP || (q.re - r).abs() > TOL_SNAP || r < 1.0 {
            return Err(TqftError::invariant(
                "integer_qdims",
                format!("qdim of label {} is {q}", md.labels[i]),
            ));
        }
    }
    if (md.global_dim - C::new(n, 0.0)).norm() > TOL_RELATIONS * n {
        return Err(TqftError::invariant(
            "global_dimension",
            format!("D = {} but |G| = {n}", md.global_dim),
        ));
    }
    if (md.zeta - C::new(1.0, 0.0)).norm() > TOL_RELATIONS {
        return Err(TqftError::invariant("zeta_one", format!("zeta = {}", md.zeta)));
    }
    Ok(())
}

/// Modular data of SU(2) at level `k`, labels `0..=k`.
pub fn su2_level_k_data(k: usize) -> Result<ModularData> {
    if k == 0 {
        return Err(TqftError::Input("level must be at least 1".into()));
    }
    let n = k + 1;
    let kk = (k + 2) as f64;
    let s = DMatrix::from_fn(n, n, |i, j| {
        C::new((2.0 / kk).sqrt() * (PI * ((i + 1) * (j + 1)) as f64 / kk).sin(), 0.0)
    });
    let labels = (0..n).map(Label::Level).collect::<Vec<_>>();
    let mut last = f64::NAN;
    for sign in [1i8, -1] {
        let t = (0..n)
            .map(|i| {
                let h = (i * (i + 2)) as f64 / (4.0 * kk);
                C::from_polar(1.0, f64::from(sign) * 2.0 * PI * h)
            })
            .collect();
        let mut md = ModularData::from_parts(format!("SU(2)_{k}"), labels.clone(), s.clone(), t, (0..n).collect())?;
        md.twist_sign = Some(sign);
        last = md.relations().st_cubed;
        if last < TOL_RELATIONS {
            return Ok(md);
        }
    }
    Err(TqftError::invariant(
        "twist_sign",
        format!("neither twist sign satisfies (ST)^3 = zeta^3 S^2 (defect {last:.3e})"),
    ))
}

/// Integer fusion coefficients `N[i][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fusion {
    pub rank: usize,
    pub n: Vec<u64>,
}

impl Fusion {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.n[(i * self.rank + j) * self.rank + k]
    }

    /// Unit row, commutativity, duality and associativity; the first
    /// violated property is returned.
    pub fn check(&self, dual: &[usize]) -> std::result::Result<(), &'static str> {
        let r = self.rank;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if self.get(0, j, k) != u64::from(j == k) {
                        return Err("fusion_unit");
                    }
                    if self.get(i, j, k) != self.get(j, i, k) {
                        return Err("fusion_commutativity");
                    }
                    if self.get(i, j, k) != self.get(dual[i], dual[j], dual[k]) {
                        return Err("fusion_duality");
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let lhs: u64 = (0..r).map(|m| self.get(i, j, m) * self.get(m, k, l)).sum();
                        let rhs: u64 = (0..r).map(|m| self.get(j, k, m) * self.get(i, m, l)).sum();
                        if lhs != rhs {
                            return Err("fusion_associativity");
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `N_ij^k = Σ_r S_ir S_jr S_{k*r} / S_0r`, snapped to integers.
pub fn verlinde_fusion(md: &ModularData) -> Result<Fusion> {
    let r = md.rank();
    let s = &md.s;
    if let Some(c) = (0..r).find(|&c| s[(0, c)].norm() < 1e-12) {
        return Err(TqftError::invariant("fusion_integrality", format!("S_0{c} vanishes")));
    }
    let mut n = Vec::with_capacity(r * r * r);
    let mut worst: (f64, usize, usize, usize) = (0.0, 0, 0, 0);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let ks = md.dual[k];
                let v: C = (0..r).map(|c| s[(i, c)] * s[(j, c)] * s[(ks, c)] / s[(0, c)]).sum();
                let snapped = v.re.round();
                let err = (v - C::new(snapped, 0.0)).norm();
                if err > worst.0 || snapped < 0.0 {
                    worst = (err.max(if snapped < 0.0 { f64::INFINITY } else { 0.0 }), i, j, k);
                }
                n.push(snapped.max(0.0) as u64);
            }
        }
    }
    if worst.0 > TOL_SNAP {
        let (e, i, j, k) = worst;
        return Err(TqftError::invariant(
            "fusion_integrality",
            format!("N[{i}][{j}][{k}] is {e:.3e} from a nonnegative integer"),
        ));
    }
    Ok(Fusion { rank: r, n })
}

/// `D^{2g−2} Σ_i qdim_i^{2−2g}`.
pub fn verlinde_dim(md: &ModularData, genus: usize) -> C {
    let e = 2 - 2 * genus as i32;
    let sum: C = md.qdims.iter().map(|q| q.powi(e)).sum();
    md.global_dim.powi(-e) * sum
}

/// [`verlinde_dim`] rounded when within the snap tolerance of an integer.
pub fn verlinde_dim_snapped(md: &ModularData, genus: usize) -> Option<u64> {
    let v = verlinde_dim(md, genus);
    let r = v.re.round();
    ((v - C::new(r, 0.0)).norm() <= TOL_SNAP * r.abs().max(1.0) && r >= 0.0).then_some(r as u64)
}

/// Number of conjugation orbits on `Hom(π₁Σ_g, G)`, as
/// `(1/|G|) Σ_{c∈G} |Hom(π₁Σ_g, Z(c))|`.
pub fn burnside_orbit_oracle(g: &FiniteGroup, genus: usize) -> Result<BigUint> {
    let mut total = BigUint::default();
    for cl in g.conjugacy_classes() {
        let z = g.centralizer(cl.representative)?;
        let count = count_homs_surface_group(z.embedded(), genus, CountMethod::Convolution)?;
        total += count * BigUint::from(cl.size);
    }
    let order = BigUint::from(g.order());
    if &total % &order != BigUint::default() {
        return Err(TqftError::invariant(
            "burnside_divisibility",
            format!("fixed-point total is not divisible by |G| = {}", g.order()),
        ));
    }
    Ok(total / order)
}

/// Truncated Clebsch–Gordan rule at level `k`.
pub fn su2_fusion_oracle(k: usize, i: usize, j: usize, l: usize) -> u64 {
    let ok = i.abs_diff(j) <= l && l <= (i + j).min(2 * k - i - j) && (i + j + l) % 2 == 0;
    u64::from(ok)
}
