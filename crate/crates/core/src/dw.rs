//! The 2d finite-gauge-group model: flat `G`-connections on closed and
//! bounded surfaces, counted exactly.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::character::CharacterTable;
use crate::error::{Result, TqftError};
use crate::group::FiniteGroup;
use crate::parallel;

/// Largest tuple space the brute-force counter will enumerate.
pub const BRUTE_LIMIT: f64 = 1e8;

/// Largest number of elementary steps for the direct boundary count.
pub const DIRECT_WORK_LIMIT: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Brute,
    Convolution,
}

impl std::str::FromStr for CountMethod {
    type Err = TqftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(CountMethod::Brute),
            "convolution" => Ok(CountMethod::Convolution),
            other => Err(TqftError::Input(format!("unknown method `{other}`"))),
        }
    }
}

/// Genus plus ordered boundary labels (conjugacy class indices).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SurfaceSignature {
    pub genus: usize,
    pub boundary: Vec<usize>,
}

impl SurfaceSignature {
    pub fn closed(genus: usize) -> Self {
        SurfaceSignature {
            genus,
            boundary: Vec::new(),
        }
    }
}

fn commutator_table(g: &FiniteGroup) -> Vec<u32> {
    let n = g.order();
    let mut t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            t.push(g.commutator(a, b) as u32);
        }
    }
    t
}

/// `|{(a₁,b₁,…,a_g,b_g) : ∏[a_i,b_i] = e}|`.
pub fn count_homs_surface_group(g: &FiniteGroup, genus: usize, method: CountMethod) -> Result<BigUint> {
    match method {
        CountMethod::Brute => brute_count(g, genus).map(BigUint::from),
        CountMethod::Convolution => Ok(convolution_count(g, genus)),
    }
}

fn brute_count(g: &FiniteGroup, genus: usize) -> Result<u64> {
    let n = g.order();
    if genus == 0 {
        return Ok(1);
    }
    let space = (n as f64).powi(2 * genus as i32);
    if space > BRUTE_LIMIT {
        return Err(TqftError::Guard(format!(
            "{n}^{} tuples exceed {BRUTE_LIMIT:e}; use the convolution method",
            2 * genus
        )));
    }
    let comm = commutator_table(g);
    fn rec(g: &FiniteGroup, comm: &[u32], left: usize, acc: usize) -> u64 {
        if left == 0 {
            return u64::from(acc == 0);
        }
        let n = g.order();
        let mut total = 0;
        for ab in 0..n * n {
            total += rec(g, comm, left - 1, g.mul(acc, comm[ab] as usize));
        }
        total
    }
    let row = |a: usize| -> u64 {
        (0..n)
            .map(|b| rec(g, &comm, genus - 1, comm[a * n + b] as usize))
            .sum()
    };
    // Small searches are not worth waking the pool for.
    if space < 1e4 {
        return Ok((0..n).map(row).sum());
    }
    Ok(parallel::install(|| (0..n).into_par_iter().map(row).sum()))
}

/// Number of pairs `(a, b)` with commutator in each class, divided by the
/// class size: the coefficients of the commutator distribution on class sums.
fn commutator_class_element(g: &FiniteGroup) -> Vec<BigInt> {
    let comm = commutator_table(g);
    let classes = g.conjugacy_classes();
    let mut counts = vec![0u64; classes.len()];
    for &x in &comm {
        counts[g.class_of(x as usize)] += 1;
    }
    counts
        .iter()
        .zip(classes)
        .map(|(&c, cl)| BigInt::from(c / cl.size as u64))
        .collect()
}

fn convolution_count(g: &FiniteGroup, genus: usize) -> BigUint {
    let cc = g.class_structure_constants();
    let c = commutator_class_element(g);
    let mut acc = vec![BigInt::zero(); cc.rank()];
    acc[0] = BigInt::one();
    for _ in 0..genus {
        acc = cc.multiply(&acc, &c);
    }
    acc[0].to_biguint().expect("counts are nonnegative")
}

/// `|Hom(π₁Σ_g, G)| / |G|`; the sphere gives `1/|G|`.
pub fn dw_invariant(g: &FiniteGroup, genus: usize) -> BigRational {
    let count = convolution_count(g, genus);
    BigRational::new(BigInt::from(count), BigInt::from(g.order()))
}

/// `|G|^{2g−2} Σ_ρ dim(ρ)^{2−2g}`.
pub fn mednykh_formula(g: &FiniteGroup, genus: usize, table: &CharacterTable) -> f64 {
    let e = 2.0 - 2.0 * genus as f64;
    let s: f64 = table.dims().iter().map(|&d| (d as f64).powf(e)).sum();
    (g.order() as f64).powf(-e) * s
}

/// Exact counterpart of [`mednykh_formula`] over rationals.
pub fn mednykh_exact(g: &FiniteGroup, genus: usize, table: &CharacterTable) -> BigRational {
    let e = 2 - 2 * genus as i64;
    let s = table
        .dims()
        .iter()
        .fold(BigRational::zero(), |s, &d| s + crate::rational::pow(&crate::rational::int(d as i64), e));
    crate::rational::pow(&crate::rational::int(g.order() as i64), -e) * s
}

#[derive(Clone, Debug, Serialize)]
pub struct NPointValue {
    #[serde(serialize_with = "crate::rational::serialize")]
    pub direct: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub frobenius: BigRational,
}

impl NPointValue {
    pub fn agree(&self) -> bool {
        self.direct == self.frobenius
    }
}

fn check_labels(g: &FiniteGroup, sig: &SurfaceSignature) -> Result<()> {
    let r = g.num_classes();
    match sig.boundary.iter().find(|&&a| a >= r) {
        Some(&a) => Err(TqftError::OutOfRange { index: a, size: r }),
        None => Ok(()),
    }
}

/// `(1/|G|)·|{g_i ∈ α_i, (a_j, b_j) : ∏ g_i ∏ [a_j, b_j] = e}|`, by
/// propagating the distribution of partial products over group elements.
pub fn npoint_direct(g: &FiniteGroup, sig: &SurfaceSignature) -> Result<BigRational> {
    check_labels(g, sig)?;
    let n = g.order();
    let classes = g.conjugacy_classes();
    let work = n as f64
        * (sig.boundary.iter().map(|&a| classes[a].size as f64).sum::<f64>()
            + (sig.genus * n * n) as f64);
    if work > DIRECT_WORK_LIMIT {
        return Err(TqftError::Guard(format!(
            "direct count needs {work:.3e} steps, above {DIRECT_WORK_LIMIT:e}"
        )));
    }
    let mut dist = vec![BigUint::zero(); n];
    dist[0] = BigUint::one();
    for &a in &sig.boundary {
        let mut next = vec![BigUint::zero(); n];
        for (x, cnt) in dist.iter().enumerate() {
            if cnt.is_zero() {
                continue;
            }
            for &y in &classes[a].members {
                next[g.mul(x, y)] += cnt;
            }
        }
        dist = next;
    }
    let comm = commutator_table(g);
    for _ in 0..sig.genus {
        let mut next = vec![BigUint::zero(); n];
        for (x, cnt) in dist.iter().enumerate() {
            if cnt.is_zero() {
                continue;
            }
            for &c in &comm {
                next[g.mul(x, c as usize)] += cnt;
            }
        }
        dist = next;
    }
    Ok(BigRational::new(
        BigInt::from(dist[0].clone()),
        BigInt::from(n),
    ))
}

/// `ε(ω^g e_{α₁} ⋯ e_{α_k})` on the class-function algebra, with
/// `ω = Σ_a (|G|/|a|) e_a e_{a*}` and `ε(e_a) = δ_{a,e}/|G|`.
pub fn npoint_frobenius(g: &FiniteGroup, sig: &SurfaceSignature) -> Result<BigRational> {
    check_labels(g, sig)?;
    let cc = g.class_structure_constants();
    let r = cc.rank();
    let order = BigRational::from_integer(BigInt::from(g.order()));
    let mul = |u: &[BigRational], v: &[BigRational]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); r];
        for a in 0..r {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..r {
                if v[b].is_zero() {
                    continue;
                }
                let uv = &u[a] * &v[b];
                for (c, slot) in out.iter_mut().enumerate() {
                    let k = cc.get(a, b, c);
                    if k != 0 {
                        *slot += &uv * BigRational::from_integer(BigInt::from(k));
                    }
                }
            }
        }
        out
    };
    let basis = |a: usize| -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); r];
        v[a] = BigRational::one();
        v
    };
    let mut omega = vec![BigRational::zero(); r];
    for (a, cl) in g.conjugacy_classes().iter().enumerate() {
        let coeff = &order / BigRational::from_integer(BigInt::from(cl.size));
        let prod = mul(&basis(a), &basis(g.inverse_class(a)));
        for (o, p) in omega.iter_mut().zip(prod) {
            *o += &coeff * p;
        }
    }
    let mut acc = basis(0);
    for _ in 0..sig.genus {
        acc = mul(&acc, &omega);
    }
    for &a in &sig.boundary {
        acc = mul(&acc, &basis(a));
    }
    Ok(&acc[0] / order)
}

pub fn npoint_function(g: &FiniteGroup, sig: &SurfaceSignature) -> Result<NPointValue> {
    Ok(NPointValue {
        direct: npoint_direct(g, sig)?,
        frobenius: npoint_frobenius(g, sig)?,
    })
}

/// Relative difference between the exact invariant and the character
/// formula.
pub fn mednykh_defect(g: &FiniteGroup, genus: usize, table: &CharacterTable) -> f64 {
    let exact = dw_invariant(g, genus);
    let x = exact.to_f64().unwrap_or_else(|| crate::rational::to_f64(&exact));
    (mednykh_formula(g, genus, table) - x).abs() / x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::character_table;
    use crate::group::{catalog, Preset};
    use crate::rational::{frac, int};

    fn grp(s: &str) -> FiniteGroup {
        Preset::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn torus_counts() {
        let z2 = grp("Z2");
        assert_eq!(count_homs_surface_group(&z2, 1, CountMethod::Brute).unwrap(), BigUint::from(4u32));
        assert_eq!(count_homs_surface_group(&z2, 1, CountMethod::Convolution).unwrap(), BigUint::from(4u32));
        let t = grp("trivial");
        for genus in 0..4 {
            assert_eq!(count_homs_surface_group(&t, genus, CountMethod::Brute).unwrap(), BigUint::one());
        }
        let s3 = grp("S3");
        assert_eq!(count_homs_surface_group(&s3, 1, CountMethod::Brute).unwrap(), BigUint::from(18u32));
        assert_eq!(count_homs_surface_group(&s3, 2, CountMethod::Brute).unwrap(), BigUint::from(486u32));
    }

    #[test]
    fn brute_matches_convolution() {
        for p in catalog(24) {
            let g = p.build().unwrap();
            let max_genus = if g.order() <= 12 { 3 } else { 2 };
            for genus in 0..=max_genus {
                assert_eq!(
                    count_homs_surface_group(&g, genus, CountMethod::Brute).unwrap(),
                    count_homs_surface_group(&g, genus, CountMethod::Convolution).unwrap(),
                    "{p} genus {genus}"
                );
            }
        }
    }

    #[test]
    fn brute_guard() {
        let s5 = grp("S5");
        assert!(matches!(
            count_homs_surface_group(&s5, 3, CountMethod::Brute),
            Err(TqftError::Guard(_))
        ));
        assert!(count_homs_surface_group(&s5, 3, CountMethod::Convolution).is_ok());
    }

    #[test]
    fn invariants() {
        assert_eq!(dw_invariant(&grp("Z2"), 0), frac(1, 2));
        assert_eq!(dw_invariant(&grp("S3"), 1), int(3));
        assert_eq!(dw_invariant(&grp("S3"), 2), int(81));
        for p in catalog(12) {
            let g = p.build().unwrap();
            for genus in 1..4 {
                let v = dw_invariant(&g, genus);
                assert!(v >= int(1));
                assert!((BigInt::from(g.order()) % v.denom()).is_zero());
            }
        }
    }

    #[test]
    fn mednykh() {
        let s3 = grp("S3");
        let t = character_table(&s3, 1).unwrap();
        assert!((mednykh_formula(&s3, 2, &t) - 81.0).abs() < 1e-9);
        assert_eq!(mednykh_exact(&s3, 2, &t), int(81));
        let z5 = grp("Z5");
        let t5 = character_table(&z5, 1).unwrap();
        assert!((mednykh_formula(&z5, 3, &t5) - 3125.0).abs() < 1e-6);
        let triv = grp("trivial");
        let tt = character_table(&triv, 1).unwrap();
        assert_eq!(mednykh_formula(&triv, 2, &tt), 1.0);
        for p in catalog(24) {
            let g = p.build().unwrap();
            let table = character_table(&g, 7).unwrap();
            for genus in 0..4 {
                assert!(mednykh_defect(&g, genus, &table) < 1e-6, "{p} {genus}");
                assert_eq!(mednykh_exact(&g, genus, &table), dw_invariant(&g, genus));
            }
        }
    }

    #[test]
    fn npoint_examples() {
        let z2 = grp("Z2");
        for a in 0..2 {
            for b in 0..2 {
                let sig = SurfaceSignature {
                    genus: 0,
                    boundary: vec![a, b],
                };
                let want = if z2.inverse_class(a) == b { frac(1, 2) } else { int(0) };
                let v = npoint_function(&z2, &sig).unwrap();
                assert_eq!(v.direct, want);
                assert!(v.agree());
            }
        }
        let s3 = grp("S3");
        let tr = s3.class_of(1);
        assert_eq!(s3.conjugacy_classes()[tr].size, 3);
        let sig = SurfaceSignature {
            genus: 0,
            boundary: vec![tr, tr, tr],
        };
        let v = npoint_function(&s3, &sig).unwrap();
        assert!(v.agree());
        assert_eq!(v.direct, int(0));
        let single = SurfaceSignature {
            genus: 0,
            boundary: vec![0],
        };
        assert_eq!(npoint_function(&s3, &single).unwrap().frobenius, frac(1, 6));
    }

    #[test]
    fn npoint_paths_agree() {
        for p in catalog(12) {
            let g = p.build().unwrap();
            let r = g.num_classes();
            for genus in 0..3 {
                for a in 0..r {
                    for b in 0..r {
                        let sig = SurfaceSignature {
                            genus,
                            boundary: vec![a, b, (a + b) % r],
                        };
                        assert!(npoint_function(&g, &sig).unwrap().agree(), "{p} {sig:?}");
                    }
                }
                let closed = npoint_function(&g, &SurfaceSignature::closed(genus)).unwrap();
                assert_eq!(closed.direct, dw_invariant(&g, genus));
                assert!(closed.agree());
            }
        }
        assert!(npoint_direct(&grp("S3"), &SurfaceSignature { genus: 0, boundary: vec![5] }).is_err());
    }
}
