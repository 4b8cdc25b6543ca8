//! JSON input formats for groups, algebras and triangulations.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Result, TqftError};
use crate::frobenius::FrobeniusAlgebra;
use crate::group::{FiniteGroup, Preset};
use crate::lattice::{Triangulation, TriangulationSpec};
use crate::Complex64 as C;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Table {
        name: Option<String>,
        order: Option<usize>,
        cayley: Vec<Vec<usize>>,
    },
    Preset {
        preset: String,
        #[serde(default)]
        params: Vec<usize>,
    },
    Short(String),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Table { name, order, cayley } => {
                if let Some(n) = order {
                    if *n != cayley.len() {
                        return Err(TqftError::InvalidTable(format!(
                            "declared order {n} but table has {} rows",
                            cayley.len()
                        )));
                    }
                }
                FiniteGroup::from_cayley(name.clone().unwrap_or_else(|| "G".into()), cayley)
            }
            GroupSpec::Preset { preset, params } => Preset::from_parts(preset, params)?.build(),
            GroupSpec::Short(s) => Preset::parse(s)?.build(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| TqftError::Input(format!("cannot read {}: {e}", path.display())))
}

fn json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| TqftError::Input(format!("malformed {what}: {e}")))
}

/// Resolves a CLI group argument: a preset name such as `S3`, inline JSON,
/// or a path to a JSON file.
pub fn load_group(arg: &str) -> Result<FiniteGroup> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        return json::<GroupSpec>(arg, "group spec")?.build();
    }
    let path = Path::new(arg);
    if path.exists() {
        return json::<GroupSpec>(&read(path)?, "group file")?.build();
    }
    Preset::parse(arg)?.build()
}

/// Accepts `[re, im]` or a bare real number.
fn complex(v: &Value) -> Result<C> {
    match v {
        Value::Number(x) => x
            .as_f64()
            .map(|re| C::new(re, 0.0))
            .ok_or_else(|| TqftError::Input(format!("bad number {x}"))),
        Value::Array(p) if p.len() == 2 => Ok(C::new(real(&p[0])?, real(&p[1])?)),
        other => Err(TqftError::Input(format!("expected a number or [re, im], got {other}"))),
    }
}

fn real(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| TqftError::Input(format!("expected a number, got {v}")))
}

fn complex_list(v: &Value, what: &str) -> Result<Vec<C>> {
    v.as_array()
        .ok_or_else(|| TqftError::Input(format!("`{what}` must be a list")))?
        .iter()
        .map(complex)
        .collect()
}

/// Flattens `mu`, given flat or nested `[i][j][k]`, real or as `[re, im]`
/// pairs. Real versus complex is decided by the leaf count: `n³` or `2n³`.
fn structure_constants(v: &Value, n: usize) -> Result<Vec<C>> {
    fn leaves(v: &Value, out: &mut Vec<f64>) -> Result<()> {
        match v {
            Value::Array(xs) => xs.iter().try_for_each(|x| leaves(x, out)),
            other => {
                out.push(real(other)?);
                Ok(())
            }
        }
    }
    if !v.is_array() {
        return Err(TqftError::Input("`mu` must be a list".into()));
    }
    let mut flat = Vec::new();
    leaves(v, &mut flat)?;
    let n3 = n * n * n;
    if flat.len() == n3 {
        Ok(flat.into_iter().map(|re| C::new(re, 0.0)).collect())
    } else if flat.len() == 2 * n3 {
        Ok(flat.chunks(2).map(|p| C::new(p[0], p[1])).collect())
    } else {
        Err(TqftError::Input(format!(
            "`mu` has {} numbers; dimension {n} needs {n3} real or {} complex parts",
            flat.len(),
            2 * n3
        )))
    }
}

pub fn algebra_from_value(v: &Value) -> Result<FrobeniusAlgebra> {
    let obj = v
        .as_object()
        .ok_or_else(|| TqftError::Input("algebra spec must be a JSON object".into()))?;
    if let Some(g) = obj.get("class_functions_of") {
        let spec: GroupSpec = serde_json::from_value(g.clone())
            .map_err(|e| TqftError::Input(format!("malformed group spec: {e}")))?;
        return Ok(FrobeniusAlgebra::class_function_algebra(&spec.build()?));
    }
    if let Some(l) = obj.get("semisimple") {
        return FrobeniusAlgebra::semisimple_algebra(&complex_list(l, "semisimple")?);
    }
    match (obj.get("mu"), obj.get("unit"), obj.get("trace")) {
        (Some(mu), Some(unit), Some(trace)) => {
            let unit = complex_list(unit, "unit")?;
            let labels = (0..unit.len()).map(|i| format!("e{i}")).collect();
            FrobeniusAlgebra::build(structure_constants(mu, unit.len())?, unit, complex_list(trace, "trace")?, labels)
        }
        _ => Err(TqftError::Input(
            "algebra spec needs `mu`/`unit`/`trace`, `class_functions_of` or `semisimple`".into(),
        )),
    }
}

/// Inline JSON or a path to a JSON file.
pub fn load_algebra(arg: &str) -> Result<FrobeniusAlgebra> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    algebra_from_value(&json::<Value>(&text, "algebra spec")?)
}

/// `genus:G`, `sphere`, `cylinder`, inline JSON or a JSON file path.
pub fn load_surface(arg: &str) -> Result<Triangulation> {
    let arg = arg.trim();
    if let Some(g) = arg.strip_prefix("genus:") {
        let g: usize = g
            .parse()
            .map_err(|_| TqftError::Input(format!("bad genus `{g}`")))?;
        return Ok(Triangulation::standard_surface(g));
    }
    match arg {
        "sphere" => return Ok(Triangulation::sphere()),
        "cylinder" => return Ok(Triangulation::cylinder()),
        _ => {}
    }
    let text = if arg.starts_with('{') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    Triangulation::from_spec(&json::<TriangulationSpec>(&text, "triangulation")?)
}

/// Comma-separated list, e.g. `1,4,9`.
pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| TqftError::Input(format!("bad {what} entry `{}`", p.trim())))
        })
        .collect()
}

/// `+`/`-` list; the Unicode minus is accepted too.
pub fn parse_signs(s: &str) -> Result<Vec<bool>> {
    s.split(',')
        .map(|p| match p.trim() {
            "+" | "" => Ok(false),
            "-" | "−" => Ok(true),
            other => Err(TqftError::Input(format!("bad sign `{other}`"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_forms() {
        assert_eq!(load_group("S3").unwrap().order(), 6);
        assert_eq!(
            load_group(r#"{"preset": "symmetric", "params": [3]}"#).unwrap().order(),
            6
        );
        let z2 = load_group(r#"{"name": "Z2", "order": 2, "cayley": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(z2.order(), 2);
        assert!(load_group(r#"{"order": 3, "cayley": [[0,1],[1,0]]}"#).is_err());
        assert!(load_group(r#"{"cayley": [[0,1],[1,1]]}"#).is_err());
        assert!(load_group("W7").is_err());
    }

    #[test]
    fn algebra_forms() {
        let a = load_algebra(r#"{"semisimple": [1, [2, 0], 0.5]}"#).unwrap();
        assert_eq!(a.dim(), 3);
        let b = load_algebra(r#"{"class_functions_of": {"preset": "symmetric", "params": [3]}}"#).unwrap();
        assert_eq!(b.dim(), 3);
        let c = load_algebra(r#"{"class_functions_of": "Z3"}"#).unwrap();
        assert_eq!(c.dim(), 3);
        // Dual numbers, nested and flat.
        let nested = r#"{"mu": [[[1,0],[0,1]],[[0,1],[0,0]]], "unit": [1,0], "trace": [0,1]}"#;
        let flat = r#"{"mu": [1,0,0,1,0,1,0,0], "unit": [1,0], "trace": [0,1]}"#;
        let d1 = load_algebra(nested).unwrap();
        let d2 = load_algebra(flat).unwrap();
        assert_eq!(d1.structure_constants(), d2.structure_constants());
        assert!(!d1.is_semisimple());
        let complex_mu = r#"{"mu": [[[[1,0]]]], "unit": [[1,0]], "trace": [[2,0]]}"#;
        assert_eq!(load_algebra(complex_mu).unwrap().dim(), 1);
        assert!(load_algebra(r#"{"mu": [1]}"#).is_err());
    }

    #[test]
    fn surfaces() {
        assert_eq!(load_surface("genus:2").unwrap().euler_characteristic(), -2);
        assert_eq!(load_surface("sphere").unwrap().euler_characteristic(), 2);
        let spec = serde_json::to_string(&Triangulation::cylinder().to_spec()).unwrap();
        let t = load_surface(&spec).unwrap();
        assert_eq!(t.boundary().len(), 2);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<i64>("2,1,3", "k").unwrap(), vec![2, 1, 3]);
        assert_eq!(parse_signs("+,−,+").unwrap(), vec![false, true, false]);
        assert!(parse_signs("+,x").is_err());
    }
}
