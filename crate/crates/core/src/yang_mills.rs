//! Area-dependent 2d Yang–Mills in the character basis.
//!
//! Every elementary surface acts diagonally on irreps: an annulus of area
//! `t` by `e^{−t C₂(R)}`, a pair of pants additionally by `1/dim R`, a disk
//! by `dim R`. A closed genus-`g` surface therefore evaluates to
//! `Σ_R e^{−t C₂(R)} dim(R)^{2−2g}`.

use serde::Serialize;

use crate::character::CharacterTable;
use crate::error::{Result, TqftError};

/// Default Casimir scale: `c (n² − 1) = j(j+1)` for `n = 2j + 1`.
pub const DEFAULT_CASIMIR_SCALE: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub label: String,
    pub dim: u64,
    pub casimir: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumKind {
    FiniteGroup,
    Su2Truncated { n_max: usize, casimir_scale: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub kind: SpectrumKind,
}

impl Spectrum {
    pub fn is_truncated(&self) -> bool {
        matches!(self.kind, SpectrumKind::Su2Truncated { .. })
    }

    fn weights(&self, t: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.entries
            .iter()
            .map(move |e| (e.dim as f64, (-t * e.casimir).exp()))
    }
}

/// Irreps `n = 1..=n_max` of SU(2) with `C₂ = c (n² − 1)`.
pub fn su2_spectrum(n_max: usize) -> Result<Spectrum> {
    su2_spectrum_scaled(n_max, DEFAULT_CASIMIR_SCALE)
}

pub fn su2_spectrum_scaled(n_max: usize, casimir_scale: f64) -> Result<Spectrum> {
    if n_max == 0 {
        return Err(TqftError::Input("n_max must be at least 1".into()));
    }
    if !(casimir_scale > 0.0 && casimir_scale.is_finite()) {
        return Err(TqftError::Input("Casimir scale must be positive".into()));
    }
    let entries = (1..=n_max)
        .map(|n| SpectrumEntry {
            label: n.to_string(),
            dim: n as u64,
            casimir: casimir_scale * ((n * n) as f64 - 1.0),
        })
        .collect();
    Ok(Spectrum {
        entries,
        kind: SpectrumKind::Su2Truncated {
            n_max,
            casimir_scale,
        },
    })
}

/// One entry per irrep, all Casimirs zero.
pub fn finite_group_spectrum(table: &CharacterTable) -> Spectrum {
    let entries = table
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &dim)| SpectrumEntry {
            label: format!("rho{i}"),
            dim,
            casimir: 0.0,
        })
        .collect();
    Spectrum {
        entries,
        kind: SpectrumKind::FiniteGroup,
    }
}

/// Truncated value with a bound on the omitted terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YmValue {
    pub value: f64,
    pub tail_bound: f64,
    pub n_max: usize,
}

/// Sum with a fixed pairwise split so the result does not depend on
/// scheduling.
fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 256;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    if xs.len() > 1 << 14 {
        let (x, y) = rayon::join(|| pairwise_sum(a), || pairwise_sum(b));
        x + y
    } else {
        pairwise_sum(a) + pairwise_sum(b)
    }
}

fn check_convergent(s: &Spectrum, genus: usize, t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(TqftError::Input(format!("area must be finite and nonnegative, got {t}")));
    }
    if s.is_truncated() && t == 0.0 && genus < 2 {
        return Err(TqftError::Input(format!(
            "divergent: genus {genus} at zero area on the SU(2) spectrum"
        )));
    }
    Ok(())
}

/// Bound on `Σ_{n>N} e^{−a(n²−1)} n^{−p}` with `a = t·c`, `p = 2g − 2`.
///
/// Uses the integral comparison `Σ_{n>N} f(n) ≤ ∫_N^∞ f`, valid once `f`
/// is decreasing, with the smaller of a power-law and a Gaussian estimate.
pub fn su2_tail_bound(n: usize, genus: usize, t: f64, casimir_scale: f64) -> f64 {
    let a = t * casimir_scale;
    let p = 2.0 * genus as f64 - 2.0;
    let nf = n as f64;
    let w = (-a * (nf * nf - 1.0)).exp();
    let mut bound = f64::INFINITY;
    if p > 1.0 {
        bound = bound.min(w * nf.powf(1.0 - p) / (p - 1.0));
    }
    if a > 0.0 {
        let gauss = |x: f64| (-a * (x * x - 1.0)).exp() / (2.0 * a * x);
        if p >= 0.0 {
            bound = bound.min(nf.powf(-p) * gauss(nf));
        } else if nf * nf * a >= 1.0 {
            // p = −2: ∫ x² e^{−a(x²−1)} ≤ e^{−a(N²−1)} (N/(2a) + 1/(4a²N)),
            // and x² e^{−a x²} decreases for x² ≥ 1/a.
            bound = bound.min(w * (nf / (2.0 * a) + 1.0 / (4.0 * a * a * nf)));
        }
    }
    bound
}

/// `Σ_R e^{−t C₂(R)} dim(R)^{2−2g}` plus the tail bound for truncated
/// spectra.
pub fn partition_function(s: &Spectrum, genus: usize, t: f64) -> Result<YmValue> {
    check_convergent(s, genus, t)?;
    let e = 2 - 2 * genus as i32;
    let terms: Vec<f64> = s.weights(t).map(|(d, w)| w * d.powi(e)).collect();
    let value = pairwise_sum(&terms);
    let tail_bound = match s.kind {
        SpectrumKind::FiniteGroup => 0.0,
        SpectrumKind::Su2Truncated {
            n_max,
            casimir_scale,
        } => su2_tail_bound(n_max, genus, t, casimir_scale),
    };
    Ok(YmValue {
        value,
        tail_bound,
        n_max: s.entries.len(),
    })
}

/// Smallest truncation (up to `cap`) whose tail bound is below `target`.
pub fn auto_n_max(genus: usize, t: f64, casimir_scale: f64, target: f64, cap: usize) -> Result<usize> {
    let ok = |n: usize| su2_tail_bound(n, genus, t, casimir_scale) < target;
    let mut hi = 1;
    while !ok(hi) {
        if hi >= cap {
            return Err(TqftError::Guard(format!(
                "tail bound {target:e} needs more than {cap} terms"
            )));
        }
        hi = (hi * 2).min(cap);
    }
    // Invariant: `lo` fails (or is zero), `hi` passes.
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// SU(2) value at the truncation chosen by [`auto_n_max`].
pub fn su2_partition_function(genus: usize, t: f64, casimir_scale: f64, target: f64) -> Result<YmValue> {
    let s0 = su2_spectrum_scaled(1, casimir_scale)?;
    check_convergent(&s0, genus, t)?;
    let n = auto_n_max(genus, t, casimir_scale, target, 1 << 28)?;
    partition_function(&su2_spectrum_scaled(n, casimir_scale)?, genus, t)
}

/// Diagonal elementary operators in the character basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElementaryOperators {
    pub cylinder: Vec<f64>,
    pub pants: Vec<f64>,
    pub cap: Vec<f64>,
}

pub fn elementary_operators(s: &Spectrum, t: f64) -> ElementaryOperators {
    let (mut cylinder, mut pants, mut cap) = (Vec::new(), Vec::new(), Vec::new());
    for (d, w) in s.weights(t) {
        cylinder.push(w);
        pants.push(w / d);
        cap.push(d * w);
    }
    ElementaryOperators {
        cylinder,
        pants,
        cap,
    }
}

/// Building blocks of a surface, each with an area.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Piece {
    /// Annulus.
    Cylinder(f64),
    /// Two circles in, one out.
    Pants(f64),
    /// One circle in, two out.
    Copants(f64),
    /// Disk with an outgoing circle.
    Cap(f64),
    /// Disk with an incoming circle.
    Cup(f64),
}

impl Piece {
    fn area(self) -> f64 {
        match self {
            Piece::Cylinder(a) | Piece::Pants(a) | Piece::Copants(a) | Piece::Cap(a) | Piece::Cup(a) => a,
        }
    }

    fn euler(self) -> i64 {
        match self {
            Piece::Cylinder(_) => 0,
            Piece::Pants(_) | Piece::Copants(_) => -1,
            Piece::Cap(_) | Piece::Cup(_) => 1,
        }
    }

    fn circles(self) -> (usize, usize) {
        match self {
            Piece::Cylinder(_) => (1, 1),
            Piece::Pants(_) => (2, 1),
            Piece::Copants(_) => (1, 2),
            Piece::Cap(_) => (0, 1),
            Piece::Cup(_) => (1, 0),
        }
    }
}

/// Closed connected surface glued from `pieces`. Because every operator is
/// diagonal in the character basis, gluing multiplies weights irrep by irrep
/// and closing up sums over irreps. Returns the value and the genus implied
/// by the Euler characteristic.
pub fn glue_closed(s: &Spectrum, pieces: &[Piece]) -> Result<(f64, usize)> {
    let (ins, outs) = pieces.iter().fold((0, 0), |(i, o), p| {
        let (a, b) = p.circles();
        (i + a, o + b)
    });
    if ins != outs {
        return Err(TqftError::Input(format!(
            "{outs} outgoing circles cannot close {ins} incoming ones"
        )));
    }
    let chi: i64 = pieces.iter().map(|p| p.euler()).sum();
    if chi > 2 || chi % 2 != 0 {
        return Err(TqftError::Input(format!("Euler characteristic {chi} is not that of a closed surface")));
    }
    if pieces.iter().any(|p| p.area() < 0.0) {
        return Err(TqftError::Input("negative area".into()));
    }
    let genus = ((2 - chi) / 2) as usize;
    let terms: Vec<f64> = s
        .entries
        .iter()
        .map(|e| {
            pieces
                .iter()
                .map(|p| {
                    let (d, w) = (e.dim as f64, (-p.area() * e.casimir).exp());
                    match p {
                        Piece::Cylinder(_) => w,
                        Piece::Pants(_) | Piece::Copants(_) => w / d,
                        Piece::Cap(_) | Piece::Cup(_) => d * w,
                    }
                })
                .product()
        })
        .collect();
    Ok((pairwise_sum(&terms), genus))
}

/// `2g − 2` pants glued along `3g − 3` circles, area split as given.
pub fn pants_decomposition(genus: usize, areas: &[f64]) -> Result<Vec<Piece>> {
    if genus < 2 || areas.len() != 2 * genus - 2 {
        return Err(TqftError::Input(format!(
            "genus {genus} needs 2g-2 pants areas, got {}",
            areas.len()
        )));
    }
    Ok(areas
        .iter()
        .enumerate()
        .map(|(i, &a)| if i % 2 == 0 { Piece::Copants(a) } else { Piece::Pants(a) })
        .collect())
}

/// Cap, `g` handles (copants then pants) joined by cylinders, cup. Takes
/// `2g + 2` areas for the non-cylinder pieces and `g + 1` for cylinders.
pub fn handle_chain(genus: usize, piece_areas: &[f64], cylinder_areas: &[f64]) -> Result<Vec<Piece>> {
    if piece_areas.len() != 2 * genus + 2 || cylinder_areas.len() != genus + 1 {
        return Err(TqftError::Input("area lists do not match the genus".into()));
    }
    let mut out = vec![Piece::Cap(piece_areas[0]), Piece::Cylinder(cylinder_areas[0])];
    for h in 0..genus {
        out.push(Piece::Copants(piece_areas[1 + 2 * h]));
        out.push(Piece::Pants(piece_areas[2 + 2 * h]));
        out.push(Piece::Cylinder(cylinder_areas[h + 1]));
    }
    out.push(Piece::Cup(piece_areas[2 * genus + 1]));
    Ok(out)
}

pub fn zeta_even(genus: usize) -> Option<f64> {
    use std::f64::consts::PI;
    match 2 * genus as i64 - 2 {
        2 => Some(PI.powi(2) / 6.0),
        4 => Some(PI.powi(4) / 90.0),
        6 => Some(PI.powi(6) / 945.0),
        8 => Some(PI.powi(8) / 9450.0),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::character_table;
    use crate::group::Preset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn su2_entries() {
        let s = su2_spectrum(3).unwrap();
        assert_eq!(s.entries[0].casimir, 0.0);
        assert_eq!(s.entries[1].casimir, 0.75);
        assert_eq!(s.entries[2].casimir, 2.0);
        assert!(su2_spectrum(0).is_err());
    }

    #[test]
    fn finite_spectra() {
        let g = Preset::parse("S3").unwrap().build().unwrap();
        let s = finite_group_spectrum(&character_table(&g, 1).unwrap());
        let dims: Vec<u64> = s.entries.iter().map(|e| e.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        for t in [0.0, 0.3, 17.0] {
            let z = partition_function(&s, 2, t).unwrap();
            assert_eq!(z.value, 2.25);
            assert_eq!(z.tail_bound, 0.0);
        }
    }

    #[test]
    fn divergence_is_rejected() {
        let s = su2_spectrum(10).unwrap();
        assert!(partition_function(&s, 1, 0.0).is_err());
        assert!(partition_function(&s, 0, 0.0).is_err());
        assert!(partition_function(&s, 2, 0.0).is_ok());
        assert!(partition_function(&s, 2, -1.0).is_err());
    }

    #[test]
    fn tail_bound_is_an_upper_bound() {
        for (genus, t) in [(2, 0.01), (3, 0.001), (2, 0.0), (1, 0.5), (0, 0.5)] {
            let n = 40;
            let s_long = su2_spectrum(20_000).unwrap();
            let s_short = su2_spectrum(n).unwrap();
            let exact_tail = partition_function(&s_long, genus, t).unwrap().value
                - partition_function(&s_short, genus, t).unwrap().value;
            let b = su2_tail_bound(n, genus, t, DEFAULT_CASIMIR_SCALE);
            assert!(exact_tail <= b * (1.0 + 1e-9) + 1e-15, "g={genus} t={t}: {exact_tail} > {b}");
        }
    }

    #[test]
    fn auto_truncation_meets_target() {
        let n = auto_n_max(2, 1e-3, DEFAULT_CASIMIR_SCALE, 1e-8, 1 << 28).unwrap();
        assert!(su2_tail_bound(n, 2, 1e-3, DEFAULT_CASIMIR_SCALE) < 1e-8);
        assert!(su2_tail_bound(n - 1, 2, 1e-3, DEFAULT_CASIMIR_SCALE) >= 1e-8);
    }

    #[test]
    fn small_area_limit_genus_three() {
        let z = su2_partition_function(3, 1e-6, DEFAULT_CASIMIR_SCALE, 1e-8).unwrap();
        assert!((z.value - zeta_even(3).unwrap()).abs() < 1e-4);
        assert!(z.tail_bound < 1e-8);
    }

    #[test]
    fn semigroup_and_cap_pants() {
        let s = su2_spectrum(50).unwrap();
        let a = elementary_operators(&s, 0.3);
        let b = elementary_operators(&s, 0.5);
        let ab = elementary_operators(&s, 0.8);
        for i in 0..50 {
            assert!((a.cylinder[i] * b.cylinder[i] - ab.cylinder[i]).abs() < 1e-15);
            // Capping one leg of a pants of area 0.5 with a disk of area 0.3.
            let capped = a.cap[i] * b.pants[i];
            assert!((capped - ab.cylinder[i]).abs() < 1e-15);
        }
        let zero = elementary_operators(&s, 0.0);
        assert!(zero.cylinder.iter().all(|&w| w == 1.0));
    }

    #[test]
    fn gluing_consistency() {
        let s = su2_spectrum(400).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for genus in 2..5 {
            let t = 0.37;
            let split = |k: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
                let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
                let total: f64 = w.iter().sum();
                w.iter().map(|x| x * t / total).collect()
            };
            let pants = split(2 * genus - 2, &mut rng);
            let (v1, g1) = glue_closed(&s, &pants_decomposition(genus, &pants).unwrap()).unwrap();
            let all = split(3 * genus + 3, &mut rng);
            let chain = handle_chain(genus, &all[..2 * genus + 2], &all[2 * genus + 2..]).unwrap();
            let (v2, g2) = glue_closed(&s, &chain).unwrap();
            let direct = partition_function(&s, genus, t).unwrap().value;
            assert_eq!((g1, g2), (genus, genus));
            assert!((v1 - direct).abs() <= 1e-12 * direct.abs());
            assert!((v2 - direct).abs() <= 1e-12 * direct.abs());
        }
    }

    #[test]
    fn decreasing_in_area() {
        let s = su2_spectrum(200).unwrap();
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let z = partition_function(&s, 2, 0.05 * k as f64).unwrap().value;
            assert!(z < last);
            last = z;
        }
    }
}
