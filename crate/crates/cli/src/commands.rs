use std::io::Read;

use serde_json::{json, Value};
use tqft::cobordism::{relation_suite, CobordismWord};
use tqft::dw::{self, CountMethod, SurfaceSignature};
use tqft::input::{load_algebra, load_group, load_surface, parse_list, parse_signs};
use tqft::lattice::{self, LatticeTensorData, Triangulation};
use tqft::modular::{self, ModularData, TOL_RELATIONS};
use tqft::open_closed::{cardy_check, classify_branes, ClosedStringAlgebra, OpenAlgebra};
use tqft::yang_mills as ym;
use tqft::{character_table, BigRational, Complex64, Result, TqftError};

use crate::output::{complex, complex_list, complex_matrix, document, exact};
use crate::{Cli, CobAction, Command, DwMethod, EmitArgs, GroupView, OpenClosedAction};

pub struct Outcome {
    pub doc: Value,
    /// Invariants that failed while the command still produced output.
    pub failed_invariants: Vec<String>,
}

fn ok(command: &str, body: Value) -> Result<Outcome> {
    Ok(Outcome {
        doc: document(command, body),
        failed_invariants: Vec::new(),
    })
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Group(a) => group(&a.group.group, a.view),
        Command::Chartable(a) => chartable(&a.group, seed),
        Command::Frob(a) => frob(&a.algebra, a.genus),
        Command::Cob { action } => cob(action),
        Command::Openclosed { action } => openclosed(action),
        Command::Dw(a) => dw_cmd(&a.group, a.genus, a.boundary.as_deref(), a.method),
        Command::Lattice(a) => lattice_cmd(&a.surface, &a.group, a.shuffle, a.projector, seed),
        Command::Double(a) => {
            let g = load_group(&a.group)?;
            let md = modular::drinfeld_double_data_seeded(&g, seed)?;
            let mut extra = serde_json::Map::new();
            if let Some(genus) = a.emit.genus {
                extra.insert("burnside".into(), json!(modular::burnside_orbit_oracle(&g, genus)?.to_string()));
            }
            modular_cmd("double", &md, &a.emit, extra)
        }
        Command::Su2k(a) => {
            let md = modular::su2_level_k_data(a.level)?;
            let mut extra = serde_json::Map::new();
            extra.insert("twist_sign".into(), json!(md.twist_sign()));
            modular_cmd("su2k", &md, &a.emit, extra)
        }
        Command::Ym(a) => ym_cmd(a),
        Command::Selftest(a) => selftest(seed, &a.only, a.inject.as_deref()),
    }
}

fn group(spec: &str, view: GroupView) -> Result<Outcome> {
    let g = load_group(spec)?;
    let classes: Vec<Value> = g
        .conjugacy_classes()
        .iter()
        .map(|c| {
            json!({
                "representative": c.representative,
                "size": c.size,
                "element_order": g.element_order(c.representative),
                "members": c.members,
            })
        })
        .collect();
    let body = match view {
        GroupView::Info => json!({
            "name": g.name(),
            "order": g.order(),
            "abelian": g.is_abelian(),
            "num_classes": g.num_classes(),
            "class_sizes": g.conjugacy_classes().iter().map(|c| c.size).collect::<Vec<_>>(),
        }),
        GroupView::Classes => json!({
            "name": g.name(),
            "order": g.order(),
            "class_sizes": g.conjugacy_classes().iter().map(|c| c.size).collect::<Vec<_>>(),
            "classes": classes,
        }),
        GroupView::Cayley => json!({"name": g.name(), "order": g.order(), "cayley": g.cayley_rows()}),
    };
    ok("group", body)
}

fn chartable(spec: &str, seed: u64) -> Result<Outcome> {
    let g = load_group(spec)?;
    let t = character_table(&g, seed)?;
    let orth = t.verify_orthogonality(tqft::character::TOL_EQ);
    let body = json!({
        "group": g.name(),
        "order": g.order(),
        "dims": t.dims(),
        "classes": t.classes().iter().map(|c| json!({"representative": c.representative, "size": c.size})).collect::<Vec<_>>(),
        "chi": t.rows().iter().map(|r| complex_list(r)).collect::<Vec<_>>(),
        "orthogonality": orth,
    });
    let mut out = ok("chartable", body)?;
    if !orth.passed {
        out.failed_invariants.push("character_orthogonality".into());
    }
    Ok(out)
}

fn frob(spec: &str, max_genus: usize) -> Result<Outcome> {
    let a = load_algebra(spec)?;
    let h = a.handle_element();
    let genus: Vec<Value> = (0..=max_genus)
        .map(|g| json!({"genus": g, "value": complex(a.genus_invariant(g))}))
        .collect();
    ok("frob", json!({
        "dim": a.dim(),
        "commutative": a.is_commutative(),
        "semisimple": a.is_semisimple(),
        "unit": complex_list(a.unit()),
        "trace": complex_list(a.trace_vector()),
        "handle_element": complex_list(&h.coordinates),
        "handle_invertible": h.invertible,
        "genus_invariants": genus,
        "counit_defect": a.counit_defect(),
        "frobenius_defect": a.frobenius_defect(),
    }))
}

fn read_word(word: Option<&str>, text: Option<&str>) -> Result<CobordismWord> {
    let src = match (word, text) {
        (_, Some(t)) => t.replace(';', "\n"),
        (Some("-"), None) => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| TqftError::Input(format!("stdin: {e}")))?;
            s
        }
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| TqftError::Input(format!("cannot read {path}: {e}")))?,
        (None, None) => return Err(TqftError::Input("give --word FILE or --text WORD".into())),
    };
    CobordismWord::parse(&src)
}

fn cob(action: &CobAction) -> Result<Outcome> {
    match action {
        CobAction::Eval { word, text, algebra } => {
            let a = load_algebra(algebra)?;
            let w = read_word(word.as_deref(), text.as_deref())?;
            let (inputs, outputs) = w.typecheck()?;
            let m = w.evaluate(&a)?;
            ok("cob", json!({
                "word": w.to_string(),
                "inputs": inputs,
                "outputs": outputs,
                "shape": [m.nrows(), m.ncols()],
                "matrix": complex_matrix(&m),
            }))
        }
        CobAction::Relations { algebra } => {
            let a = load_algebra(algebra)?;
            let r = relation_suite(&a)?;
            ok("cob", json!({"relations": r.relations, "max_defect": r.max_defect}))
        }
        CobAction::Closed { genus, algebra } => {
            let a = load_algebra(algebra)?;
            let m = CobordismWord::closed_surface(*genus).evaluate(&a)?;
            let direct = a.genus_invariant(*genus);
            ok("cob", json!({
                "genus": genus,
                "word_value": complex(m[(0, 0)]),
                "handle_value": complex(direct),
                "defect": (m[(0, 0)] - direct).norm(),
            }))
        }
    }
}

fn closed_algebra(traces: &str, signs: Option<&str>) -> Result<ClosedStringAlgebra> {
    let traces: Vec<f64> = parse_list(traces, "trace")?;
    let signs = match signs {
        Some(s) => parse_signs(s)?,
        None => vec![false; traces.len()],
    };
    if signs.len() != traces.len() {
        return Err(TqftError::Input(format!(
            "{} signs for {} traces",
            signs.len(),
            traces.len()
        )));
    }
    ClosedStringAlgebra::new(traces.into_iter().map(|t| Complex64::new(t, 0.0)).collect(), &signs)
}

fn openclosed(action: &OpenClosedAction) -> Result<Outcome> {
    match action {
        OpenClosedAction::Cardy { closed, k } => {
            let b = closed_algebra(&closed.traces, closed.signs.as_deref())?;
            let k: Vec<i64> = parse_list(k, "multiplicity")?;
            let report = cardy_check(&b, &k)?;
            let open = OpenAlgebra::build(&b, &k)?;
            let body = json!({
                "sqrt_traces": complex_list(b.sqrt_choices()),
                "multiplicities": report.multiplicities,
                "open_dim": report.open_dim,
                "cardy_defect": report.defect,
                "round_trip": complex_matrix(&open.round_trip_matrix()),
            });
            let mut out = ok("openclosed", body)?;
            if report.defect >= 1e-9 {
                out.failed_invariants.push("cardy_condition".into());
            }
            Ok(out)
        }
        OpenClosedAction::K0 { closed } => {
            let b = closed_algebra(&closed.traces, closed.signs.as_deref())?;
            let k0 = classify_branes(&b)?;
            ok("openclosed", json!({"k0": k0.to_string(), "rank": k0.rank}))
        }
    }
}

fn dw_cmd(spec: &str, genus: usize, boundary: Option<&str>, method: DwMethod) -> Result<Outcome> {
    let g = load_group(spec)?;
    if let Some(b) = boundary {
        let sig = SurfaceSignature {
            genus,
            boundary: parse_list(b, "boundary class")?,
        };
        let v = dw::npoint_function(&g, &sig)?;
        if !v.agree() {
            return Err(TqftError::invariant(
                "npoint_agreement",
                format!(
                    "direct count {} differs from the Frobenius value {}",
                    tqft::rational::to_string(&v.direct),
                    tqft::rational::to_string(&v.frobenius)
                ),
            ));
        }
        return ok("dw", json!({
            "group": g.name(),
            "order": g.order(),
            "genus": genus,
            "boundary": sig.boundary,
            "value": exact(&v.direct),
            "frobenius": exact(&v.frobenius),
        }));
    }
    let body = match method {
        DwMethod::Character => {
            let t = character_table(&g, tqft::character::DEFAULT_SEED)?;
            json!({
                "group": g.name(),
                "order": g.order(),
                "genus": genus,
                "method": "character",
                "value": exact(&dw::mednykh_exact(&g, genus, &t)),
            })
        }
        DwMethod::Brute | DwMethod::Convolution => {
            let m = if matches!(method, DwMethod::Brute) { CountMethod::Brute } else { CountMethod::Convolution };
            let count = dw::count_homs_surface_group(&g, genus, m)?;
            let value = BigRational::new(count.clone().into(), g.order().into());
            json!({
                "group": g.name(),
                "order": g.order(),
                "genus": genus,
                "method": m,
                "count": count.to_string(),
                "value": exact(&value),
            })
        }
    };
    ok("dw", body)
}

fn lattice_cmd(surface: &str, spec: &str, shuffle: usize, projector: bool, seed: u64) -> Result<Outcome> {
    let g = load_group(spec)?;
    let t = load_surface(surface)?;
    let d = LatticeTensorData::group_algebra(&g);
    let z = lattice::partition_function(&t, &d)?;
    let counts = t.counts();
    let mut body = serde_json::Map::new();
    body.insert("group".into(), json!(g.name()));
    body.insert("triangles".into(), json!(t.num_triangles()));
    body.insert("counts".into(), json!(counts));
    body.insert("euler".into(), json!(counts.euler()));
    let mut failed = Vec::new();
    match z.scalar() {
        Some(v) => {
            body.insert("value".into(), exact(v));
        }
        None => {
            let nonzero = z.nonzero_entries();
            body.insert("legs".into(), json!(z.legs));
            body.insert("nonzero_entries".into(), json!(nonzero));
        }
    }
    if shuffle > 0 {
        let (after, _) = t.shuffle_seeded(shuffle, seed)?;
        let z2 = lattice::partition_function(&after, &d)?;
        let same = z2.values == z.values && z2.legs.len() == z.legs.len();
        body.insert("shuffle".into(), json!({
            "moves": shuffle,
            "triangles_after": after.num_triangles(),
            "invariant": same,
        }));
        if let Some(v) = z2.scalar() {
            body.insert("value_after".into(), exact(v));
        }
        if !same {
            failed.push("pachner_invariance".into());
        }
    }
    if projector {
        let pi = lattice::projector_from(&Triangulation::cylinder(), &d)?;
        body.insert("projector_rank".into(), json!(tqft::rational::rank(&pi)));
        body.insert(
            "projector".into(),
            json!(pi.iter().map(|r| r.iter().map(tqft::rational::to_string).collect::<Vec<_>>()).collect::<Vec<_>>()),
        );
    }
    let mut out = ok("lattice", Value::Object(body))?;
    out.failed_invariants = failed;
    Ok(out)
}

fn modular_cmd(
    command: &str,
    md: &ModularData,
    emit: &EmitArgs,
    extra: serde_json::Map<String, Value>,
) -> Result<Outcome> {
    let wanted: Vec<String> = parse_list(&emit.emit, "emit item")?;
    let rel = md.relations();
    let mut body = serde_json::Map::new();
    body.insert("name".into(), json!(md.name()));
    body.insert("rank".into(), json!(md.rank()));
    body.insert("labels".into(), json!(md.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>()));
    body.insert("global_dimension".into(), complex(md.global_dimension()));
    body.insert("p_plus".into(), complex(md.p_plus()));
    body.insert("p_minus".into(), complex(md.p_minus()));
    body.insert("zeta".into(), complex(md.zeta()));
    body.insert("relations".into(), json!(rel));
    body.extend(extra);
    let mut failed = Vec::new();
    if !rel.passed(TOL_RELATIONS) {
        failed.push("modular_relations".to_string());
    }
    for item in &wanted {
        match item.as_str() {
            "s" => {
                body.insert("s".into(), complex_matrix(md.s()));
            }
            "t" => {
                body.insert("t".into(), complex_list(md.twists()));
            }
            "c" => {
                body.insert("c".into(), json!(md.dual()));
            }
            "dims" => {
                body.insert("qdims".into(), complex_list(md.qdims()));
            }
            "fusion" => {
                let f = modular::verlinde_fusion(md)?;
                if let Err(name) = f.check(md.dual()) {
                    failed.push(name.to_string());
                }
                let r = f.rank;
                let n: Vec<Vec<Vec<u64>>> = (0..r)
                    .map(|i| (0..r).map(|j| (0..r).map(|k| f.get(i, j, k)).collect()).collect())
                    .collect();
                body.insert("fusion".into(), json!(n));
            }
            other => {
                return Err(TqftError::Input(format!(
                    "unknown emit item `{other}` (expected s,t,c,fusion,dims)"
                )))
            }
        }
    }
    if let Some(g) = emit.genus {
        let v = modular::verlinde_dim(md, g);
        body.insert("verlinde".into(), json!({
            "genus": g,
            "value": complex(v),
            "integer": modular::verlinde_dim_snapped(md, g),
        }));
    }
    let mut out = ok(command, Value::Object(body))?;
    out.failed_invariants = failed;
    Ok(out)
}

fn ym_cmd(a: &crate::YmArgs) -> Result<Outcome> {
    let (z, kind) = if a.spectrum.eq_ignore_ascii_case("su2") {
        let z = match a.nmax {
            Some(n) => ym::partition_function(&ym::su2_spectrum_scaled(n, a.casimir_scale)?, a.genus, a.area)?,
            None => ym::su2_partition_function(a.genus, a.area, a.casimir_scale, a.tail)?,
        };
        (z, "su2")
    } else {
        let g = load_group(&a.spectrum)?;
        let t = character_table(&g, tqft::character::DEFAULT_SEED)?;
        (ym::partition_function(&ym::finite_group_spectrum(&t), a.genus, a.area)?, "finite_group")
    };
    let mut body = json!({
        "spectrum": kind,
        "genus": a.genus,
        "area": a.area,
        "n_max": z.n_max,
        "value": z.value,
        "tail_bound": z.tail_bound,
    });
    if kind == "su2" {
        if let Some(zeta) = ym::zeta_even(a.genus) {
            body["zeta_limit"] = json!(zeta);
        }
    }
    ok("ym", body)
}

fn selftest(seed: u64, only: &[String], inject: Option<&str>) -> Result<Outcome> {
    use tqft::selftest::{criterion_names, run, Options};
    for o in only {
        let known = criterion_names().contains(&o.as_str())
            || o.parse::<u32>().is_ok_and(|n| (1..=criterion_names().len() as u32).contains(&n))
            || ["dw", "chartable", "group", "lattice", "cob", "frob", "openclosed", "double", "su2k", "ym", "selftest"]
                .contains(&o.as_str());
        if !known {
            return Err(TqftError::Input(format!("unknown criterion or tag `{o}`")));
        }
    }
    let fault = inject.map(str::parse).transpose()?;
    let report = run(&Options {
        seed,
        only: only.to_vec(),
        fault,
    });
    for r in &report.results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {:>2} {:<22} {:>8.1} ms", r.id, r.name, r.elapsed.as_secs_f64() * 1e3);
    }
    let failed = report.failures();
    Ok(Outcome {
        doc: serde_json::to_value(&report).expect("serializable"),
        failed_invariants: failed,
    })
}
