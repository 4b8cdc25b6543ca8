//! Cross-module oracle suite.
//!
//! Each criterion pits two independent computations against each other and
//! records the measured defects. Output is deterministic for a given seed:
//! wall-clock timings are kept out of the serialized report.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::character::character_table;
use crate::cobordism::{relation_suite, CobordismWord};
use crate::dw::{count_homs_surface_group, dw_invariant, mednykh_formula, CountMethod};
use crate::error::{Result, TqftError};
use crate::frobenius::FrobeniusAlgebra;
use crate::group::{catalog, FiniteGroup, Preset};
use crate::lattice::{apply, class_sum, closed_surface_value, cylinder_projector, pachner_shuffle};
use crate::modular::{
    drinfeld_double_data_seeded, su2_fusion_oracle, su2_level_k_data, verlinde_dim_snapped,
    verlinde_fusion, burnside_orbit_oracle, TOL_RELATIONS,
};
use crate::open_closed::{cardy_check, random_config};
use crate::rational::{rank, to_string};
use crate::yang_mills::{
    glue_closed, handle_chain, pants_decomposition, partition_function, su2_partition_function,
    su2_spectrum, zeta_even, DEFAULT_CASIMIR_SCALE,
};
use crate::Complex64 as C;

pub const SCHEMA: &str = "tqft/1";

/// Faults that can be injected to exercise failure reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Perturbs one off-diagonal entry of the D(S3) S-matrix.
    PerturbS,
}

impl std::str::FromStr for Fault {
    type Err = TqftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perturb-s" | "perturb_s" | "s" => Ok(Fault::PerturbS),
            other => Err(TqftError::Input(format!("unknown fault `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: u64,
    /// Keeps criteria whose name or any tag matches one of these.
    pub only: Vec<String>,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Names of violated invariants or failed checks.
    pub failures: Vec<String>,
    pub measured: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub seed: u64,
    pub fault: Option<Fault>,
    pub results: Vec<CriterionResult>,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> Vec<String> {
        self.results
            .iter()
            .flat_map(|r| r.failures.iter().map(move |f| format!("{}:{f}", r.name)))
            .collect()
    }
}

/// Accumulates named checks for one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    measured: serde_json::Map<String, Value>,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool) {
        if !ok && !self.failures.iter().any(|f| f == name) {
            self.failures.push(name.to_string());
        }
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.measured
            .insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    /// Records an error: invariant violations under their own name,
    /// anything else under `fallback`.
    fn error(&mut self, fallback: &str, e: &TqftError) {
        let name = match e {
            TqftError::Invariant { name, .. } => name.to_string(),
            _ => fallback.to_string(),
        };
        self.put(&format!("error_{name}"), e.to_string());
        self.check(&name, false);
    }
}

type Runner = fn(&Options, &mut Checks);

struct Criterion {
    id: u32,
    name: &'static str,
    tags: &'static [&'static str],
    run: Runner,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "torus_count", tags: &["dw"], run: torus_count },
    Criterion { id: 2, name: "mednykh_bridge", tags: &["dw", "chartable"], run: mednykh_bridge },
    Criterion { id: 3, name: "peter_weyl", tags: &["chartable", "group"], run: peter_weyl },
    Criterion { id: 4, name: "pachner_invariance", tags: &["lattice"], run: pachner_invariance },
    Criterion { id: 5, name: "lattice_dw_bridge", tags: &["lattice", "dw"], run: lattice_dw_bridge },
    Criterion { id: 6, name: "cylinder_projector", tags: &["lattice"], run: cylinder_projector_check },
    Criterion { id: 7, name: "cobordism_relations", tags: &["cob", "frob"], run: cobordism_relations },
    Criterion { id: 8, name: "cardy", tags: &["openclosed"], run: cardy },
    Criterion { id: 9, name: "double_s3", tags: &["double"], run: double_s3 },
    Criterion { id: 10, name: "verlinde_burnside", tags: &["double", "dw"], run: verlinde_burnside },
    Criterion { id: 11, name: "su2k_fusion", tags: &["su2k"], run: su2k_fusion },
    Criterion { id: 12, name: "ym_zeta_limit", tags: &["ym"], run: ym_zeta_limit },
    Criterion { id: 13, name: "determinism", tags: &["selftest"], run: determinism },
];

pub fn criterion_names() -> Vec<&'static str> {
    CRITERIA.iter().map(|c| c.name).collect()
}

pub fn run(opts: &Options) -> Report {
    let selected = CRITERIA.iter().filter(|c| {
        opts.only.is_empty()
            || opts
                .only
                .iter()
                .any(|o| o == c.name || c.tags.contains(&o.as_str()) || o == &c.id.to_string())
    });
    let results: Vec<CriterionResult> = selected
        .map(|c| {
            let start = Instant::now();
            let mut checks = Checks::default();
            (c.run)(opts, &mut checks);
            CriterionResult {
                id: c.id,
                name: c.name,
                passed: checks.failures.is_empty(),
                failures: checks.failures,
                measured: Value::Object(checks.measured),
                elapsed: start.elapsed(),
            }
        })
        .collect();
    Report {
        schema: SCHEMA,
        seed: opts.seed,
        fault: opts.fault,
        passed: results.iter().all(|r| r.passed),
        results,
    }
}

fn preset(s: &str) -> FiniteGroup {
    Preset::parse(s).and_then(|p| p.build()).expect("built-in preset")
}

fn torus_count(_: &Options, out: &mut Checks) {
    match count_homs_surface_group(&preset("Z2"), 1, CountMethod::Brute) {
        Ok(n) => {
            out.put("count", n.to_string());
            out.check("count_is_4", n == 4u32.into());
        }
        Err(e) => out.error("count", &e),
    }
}

fn mednykh_bridge(_: &Options, out: &mut Checks) {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for p in catalog(24) {
        let g = match p.build() {
            Ok(g) => g,
            Err(e) => return out.error("build", &e),
        };
        let table = match character_table(&g, crate::character::DEFAULT_SEED) {
            Ok(t) => t,
            Err(e) => return out.error("character_table", &e),
        };
        let genera: &[usize] = if g.order() <= 12 { &[1, 2, 3] } else { &[1, 2] };
        for &genus in genera {
            let count = match count_homs_surface_group(&g, genus, CountMethod::Brute) {
                Ok(c) => c,
                Err(e) => return out.error("count", &e),
            };
            let direct = crate::rational::to_f64(&BigRational::new(
                BigInt::from(count),
                BigInt::from(g.order()),
            ));
            let formula = mednykh_formula(&g, genus, &table);
            worst = worst.max((direct - formula).abs() / formula.abs());
            cases += 1;
        }
    }
    let s3 = dw_invariant(&preset("S3"), 2);
    out.put("cases", cases);
    out.put("max_relative_defect", worst);
    out.put("s3_genus2", to_string(&s3));
    out.check("relative_defect", worst <= 1e-6);
    out.check("s3_genus2_is_81", s3 == BigRational::from_integer(81.into()));
}

fn peter_weyl(_: &Options, out: &mut Checks) {
    let mut worst = 0.0f64;
    for p in catalog(24) {
        let g = p.build().expect("catalog preset");
        match character_table(&g, crate::character::DEFAULT_SEED) {
            Ok(t) => {
                let sum: u64 = t.dims().iter().map(|d| d * d).sum();
                out.check("sum_of_squares", sum == g.order() as u64);
                worst = worst.max(t.verify_orthogonality(1e-9).max_defect());
            }
            Err(e) => out.error("character_table", &e),
        }
    }
    out.put("max_orthogonality_defect", worst);
    out.check("orthogonality", worst < 1e-9);
}

fn pachner_invariance(opts: &Options, out: &mut Checks) {
    let mut reports = Vec::new();
    for (i, name) in ["Z2", "Z3", "S3"].iter().enumerate() {
        for genus in 0..3 {
            let seed = opts.seed.wrapping_add((3 * i + genus) as u64);
            match pachner_shuffle(&preset(name), genus, 50, seed) {
                Ok(r) => {
                    out.check("exact_equality", r.invariant());
                    reports.push(json!({
                        "group": name,
                        "genus": genus,
                        "triangles_after": r.triangles_after,
                        "value": to_string(&r.after),
                    }));
                }
                Err(e) => out.error("shuffle", &e),
            }
        }
    }
    out.put("runs", reports);
}

fn lattice_dw_bridge(_: &Options, out: &mut Checks) {
    for name in ["Z2", "Z3", "S3"] {
        let g = preset(name);
        let n = BigRational::from_integer(g.order().into());
        for genus in 0..3 {
            let lattice = match closed_surface_value(&g, genus) {
                Ok(v) => v,
                Err(e) => return out.error("lattice", &e),
            };
            let scale = crate::rational::pow(&n, 2 * genus as i64 - 2);
            out.check("exact_equality", dw_invariant(&g, genus) == scale * lattice);
        }
    }
}

fn cylinder_projector_check(_: &Options, out: &mut Checks) {
    let g = preset("S3");
    let pi = match cylinder_projector(&g) {
        Ok(p) => p,
        Err(e) => return out.error("projector", &e),
    };
    let n = pi.len();
    let sq: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &pi[i][k] * &pi[k][j]))
                .collect()
        })
        .collect();
    let r = rank(&pi);
    out.put("rank", r);
    out.check("idempotent", sq == pi);
    out.check("rank_3", r == 3);
    for a in 0..g.conjugacy_classes().len() {
        let z = class_sum(&g, a);
        out.check("fixes_class_sums", apply(&pi, &z) == z);
    }
}

fn random_trace(rng: &mut ChaCha8Rng) -> C {
    C::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU))
}

fn cobordism_relations(opts: &Options, out: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x7);
    let mut worst_rel = 0.0f64;
    let mut worst_closed = 0.0f64;
    for _ in 0..10 {
        let dim = rng.random_range(1..=5);
        let traces: Vec<C> = (0..dim).map(|_| random_trace(&mut rng)).collect();
        let a = match FrobeniusAlgebra::semisimple_algebra(&traces) {
            Ok(a) => a,
            Err(e) => return out.error("algebra", &e),
        };
        match relation_suite(&a) {
            Ok(r) => worst_rel = worst_rel.max(r.max_defect),
            Err(e) => return out.error("relations", &e),
        }
        for genus in 0..=4 {
            match CobordismWord::closed_surface(genus).evaluate(&a) {
                Ok(m) => worst_closed = worst_closed.max((m[(0, 0)] - a.genus_invariant(genus)).norm()),
                Err(e) => return out.error("closed_word", &e),
            }
        }
    }
    out.put("max_relation_defect", worst_rel);
    out.put("max_closed_defect", worst_closed);
    out.check("relations", worst_rel < 1e-9);
    out.check("closed_surface", worst_closed < 1e-9);
}

fn cardy(opts: &Options, out: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (b, k) = random_config(&mut rng);
        match cardy_check(&b, &k) {
            Ok(r) => worst = worst.max(r.defect),
            Err(e) => return out.error("cardy", &e),
        }
    }
    out.put("max_defect", worst);
    out.check("cardy_defect", worst < 1e-9);
}

fn double_s3(opts: &Options, out: &mut Checks) {
    let mut md = match drinfeld_double_data_seeded(&preset("S3"), crate::character::DEFAULT_SEED) {
        Ok(m) => m,
        Err(e) => return out.error("double", &e),
    };
    if opts.fault == Some(Fault::PerturbS) {
        let mut s: DMatrix<C> = md.s().clone();
        s[(1, 2)] += C::new(1e-3, 0.0);
        md = match md.with_s_matrix(s) {
            Ok(m) => m,
            Err(e) => return out.error("double", &e),
        };
    }
    let mut dims: Vec<i64> = md.qdims().iter().map(|q| q.re.round() as i64).collect();
    let sum_sq: f64 = md.qdims().iter().map(|q| q.norm_sqr()).sum();
    dims.sort_unstable();
    out.put("rank", md.rank());
    out.put("qdims_sorted", &dims);
    out.put("sum_qdim_squared", sum_sq);
    out.check("rank_8", md.rank() == 8);
    out.check("qdims", dims == vec![1, 1, 2, 2, 2, 2, 3, 3]);
    out.check("sum_36", (sum_sq - 36.0).abs() < TOL_RELATIONS);
    match verlinde_fusion(&md) {
        Ok(f) => {
            if let Err(name) = f.check(md.dual()) {
                out.check(name, false);
            }
        }
        Err(e) => out.error("fusion", &e),
    }
    let rel = md.relations();
    out.put("relations", &rel);
    out.check("modular_relations", rel.passed(TOL_RELATIONS));
}

fn verlinde_burnside(opts: &Options, out: &mut Checks) {
    let mut rows = Vec::new();
    for name in ["Z2", "Z3", "Z4", "S3", "D4", "Q8"] {
        let g = preset(name);
        let md = match drinfeld_double_data_seeded(&g, opts.seed) {
            Ok(m) => m,
            Err(e) => return out.error("double", &e),
        };
        for genus in 1..=2 {
            let v = verlinde_dim_snapped(&md, genus);
            let b = match burnside_orbit_oracle(&g, genus) {
                Ok(b) => b,
                Err(e) => return out.error("burnside", &e),
            };
            out.check("verlinde_integral", v.is_some());
            out.check("equal", v.map(|v| b == v.into()).unwrap_or(false));
            rows.push(json!({"group": name, "genus": genus, "verlinde": v, "burnside": b.to_string()}));
        }
    }
    let s3 = rows
        .iter()
        .find(|r| r["group"] == "S3" && r["genus"] == 2)
        .map(|r| r["verlinde"].clone());
    out.check("s3_genus2_is_116", s3 == Some(json!(116)));
    out.put("cases", rows);
}

fn su2k_fusion(_: &Options, out: &mut Checks) {
    let mut worst = 0.0f64;
    for k in 1..=6 {
        let md = match su2_level_k_data(k) {
            Ok(m) => m,
            Err(e) => return out.error("su2k", &e),
        };
        worst = worst.max(md.relations().st_cubed);
        match verlinde_fusion(&md) {
            Ok(f) => {
                for i in 0..=k {
                    for j in 0..=k {
                        for l in 0..=k {
                            out.check("clebsch_gordan", f.get(i, j, l) == su2_fusion_oracle(k, i, j, l));
                        }
                    }
                }
            }
            Err(e) => out.error("fusion", &e),
        }
    }
    out.put("max_st_cubed_defect", worst);
    out.check("st_cubed", worst < TOL_RELATIONS);
}

fn ym_zeta_limit(opts: &Options, out: &mut Checks) {
    let t = 1e-6;
    for genus in [2usize, 3] {
        let z = match su2_partition_function(genus, t, DEFAULT_CASIMIR_SCALE, 1e-8) {
            Ok(z) => z,
            Err(e) => return out.error("partition_function", &e),
        };
        let target = zeta_even(genus).expect("tabulated");
        let dev = (z.value - target).abs();
        out.put(&format!("genus{genus}"), json!({
            "value": z.value,
            "tail_bound": z.tail_bound,
            "n_max": z.n_max,
            "zeta": target,
            "deviation": dev,
        }));
        out.check("tail_bound", z.tail_bound < 1e-8);
        out.check(&format!("zeta_limit_genus{genus}"), dev < 1e-4);
    }
    // Gluing: pants-only versus cap/handle/cylinder chains, random areas.
    let s = match su2_spectrum(500) {
        Ok(s) => s,
        Err(e) => return out.error("spectrum", &e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xC);
    let mut worst = 0.0f64;
    for genus in 2..=4 {
        let area = 0.25;
        let mut split = |k: usize| -> Vec<f64> {
            let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = w.iter().sum();
            w.iter().map(|x| x * area / total).collect()
        };
        let pants = split(2 * genus - 2);
        let all = split(3 * genus + 3);
        let direct = match partition_function(&s, genus, area) {
            Ok(z) => z.value,
            Err(e) => return out.error("partition_function", &e),
        };
        let words = [
            pants_decomposition(genus, &pants),
            handle_chain(genus, &all[..2 * genus + 2], &all[2 * genus + 2..]),
        ];
        for w in words {
            match w.and_then(|w| glue_closed(&s, &w)) {
                Ok((v, g)) => {
                    out.check("glued_genus", g == genus);
                    worst = worst.max((v - direct).abs() / direct.abs());
                }
                Err(e) => return out.error("gluing", &e),
            }
        }
    }
    out.put("max_gluing_defect", worst);
    out.check("gluing", worst < 1e-12);
}

/// Serializes a seeded computation twice and compares bytes.
fn determinism(opts: &Options, out: &mut Checks) {
    let once = || -> Result<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut cardy = Vec::new();
        for _ in 0..5 {
            let (b, k) = random_config(&mut rng);
            cardy.push(cardy_check(&b, &k)?);
        }
        let shuffle = pachner_shuffle(&preset("S3"), 1, 20, opts.seed)?;
        let md = drinfeld_double_data_seeded(&preset("D4"), opts.seed)?;
        let s: Vec<Vec<[f64; 2]>> = (0..md.rank())
            .map(|i| (0..md.rank()).map(|j| [md.s()[(i, j)].re, md.s()[(i, j)].im]).collect())
            .collect();
        Ok(serde_json::to_string(&json!({"cardy": cardy, "shuffle": shuffle, "s": s})).expect("json"))
    };
    match (once(), once()) {
        (Ok(a), Ok(b)) => {
            out.put("bytes", a.len());
            out.check("byte_identical", a == b);
        }
        (Err(e), _) | (_, Err(e)) => out.error("determinism", &e),
    }
}
