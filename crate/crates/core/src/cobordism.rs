//! 2d cobordisms as words of time slices over the generators
//! `id, μ (pants), Δ (copants), η (cap), ε (cup), σ (twist)`.
//!
//! A word is evaluated under a Frobenius algebra slice by slice. Multi-circle
//! states use the basis ordering where the first circle is the most
//! significant digit.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TqftError};
use crate::frobenius::FrobeniusAlgebra;

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Atom {
    Id,
    Pants,
    Copants,
    Cap,
    Cup,
    Twist,
}

impl Atom {
    /// `(inputs, outputs)` in circles.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Atom::Id => (1, 1),
            Atom::Pants => (2, 1),
            Atom::Copants => (1, 2),
            Atom::Cap => (0, 1),
            Atom::Cup => (1, 0),
            Atom::Twist => (2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Atom::Id => "id",
            Atom::Pants => "pants",
            Atom::Copants => "copants",
            Atom::Cap => "cap",
            Atom::Cup => "cup",
            Atom::Twist => "twist",
        }
    }
}

impl FromStr for Atom {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "id" | "identity" => Atom::Id,
            "pants" | "mu" | "μ" => Atom::Pants,
            "copants" | "delta" | "Δ" => Atom::Copants,
            "cap" | "eta" | "η" | "unit" => Atom::Cap,
            "cup" | "eps" | "epsilon" | "ε" | "counit" => Atom::Cup,
            "twist" | "sigma" | "σ" | "swap" => Atom::Twist,
            other => return Err(format!("unknown atom `{other}`")),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CobordismWord {
    slices: Vec<Vec<Atom>>,
}

/// Caps on evaluation size.
#[derive(Clone, Copy, Debug)]
pub struct EvalLimits {
    pub max_width: usize,
    pub max_entries: usize,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            max_width: 8,
            max_entries: 10_000_000,
        }
    }
}

impl CobordismWord {
    pub fn new(slices: Vec<Vec<Atom>>) -> Self {
        CobordismWord { slices }
    }

    pub fn slices(&self) -> &[Vec<Atom>] {
        &self.slices
    }

    /// Identity on `width` circles.
    pub fn identity(width: usize) -> Self {
        CobordismWord::new(vec![vec![Atom::Id; width]])
    }

    /// Closed genus-`g` surface: cap, `g` handles (copants then pants), cup.
    pub fn closed_surface(genus: usize) -> Self {
        let mut slices = vec![vec![Atom::Cap]];
        for _ in 0..genus {
            slices.push(vec![Atom::Copants]);
            slices.push(vec![Atom::Pants]);
        }
        slices.push(vec![Atom::Cup]);
        CobordismWord::new(slices)
    }

    /// `then ∘ self`: run `self` first.
    pub fn then(&self, then: &CobordismWord) -> Self {
        let mut slices = self.slices.clone();
        slices.extend(then.slices.iter().cloned());
        CobordismWord::new(slices)
    }

    /// Side-by-side juxtaposition; the shorter word is padded with
    /// identities.
    pub fn beside(&self, right: &CobordismWord) -> Result<Self> {
        let (_, lo) = self.typecheck()?;
        let (_, ro) = right.typecheck()?;
        let depth = self.slices.len().max(right.slices.len());
        let pad = |w: &CobordismWord, i: usize, out: usize| -> Vec<Atom> {
            w.slices.get(i).cloned().unwrap_or_else(|| vec![Atom::Id; out])
        };
        let slices = (0..depth)
            .map(|i| {
                let mut s = pad(self, i, lo);
                s.extend(pad(right, i, ro));
                s
            })
            .collect();
        Ok(CobordismWord::new(slices))
    }

    /// Verifies slice arities and returns `(in_circles, out_circles)`.
    pub fn typecheck(&self) -> Result<(usize, usize)> {
        let width = |s: &[Atom]| -> (usize, usize) {
            s.iter().fold((0, 0), |(i, o), a| {
                let (ai, ao) = a.arity();
                (i + ai, o + ao)
            })
        };
        let Some(first) = self.slices.first() else {
            return Ok((0, 0));
        };
        let inputs = width(first).0;
        let mut prev_out = width(first).1;
        for (t, s) in self.slices.iter().enumerate().skip(1) {
            let (i, o) = width(s);
            if i != prev_out {
                return Err(TqftError::ArityMismatch {
                    slice: t,
                    emitted: prev_out,
                    consumed: i,
                });
            }
            prev_out = o;
        }
        Ok((inputs, prev_out))
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.typecheck()? == (0, 0))
    }

    /// Matrix of shape `dim^out × dim^in`.
    pub fn evaluate(&self, a: &FrobeniusAlgebra) -> Result<DMatrix<C>> {
        self.evaluate_with(a, &EvalLimits::default())
    }

    pub fn evaluate_with(&self, a: &FrobeniusAlgebra, limits: &EvalLimits) -> Result<DMatrix<C>> {
        let (inputs, _) = self.typecheck()?;
        let d = a.dim();
        let mats = AtomMatrices::new(a);
        let guard = |w: usize| -> Result<usize> {
            if w > limits.max_width {
                return Err(TqftError::Guard(format!(
                    "width {w} exceeds cap {}",
                    limits.max_width
                )));
            }
            let entries = d.checked_pow(w as u32).filter(|&e| e <= limits.max_entries);
            entries.ok_or_else(|| {
                TqftError::Guard(format!(
                    "state space {d}^{w} exceeds {} entries",
                    limits.max_entries
                ))
            })
        };
        let cols = guard(inputs)?;
        // Columns of the running map, each a state on the current circles.
        let mut states: Vec<Vec<C>> = (0..cols)
            .map(|j| {
                let mut v = vec![C::new(0.0, 0.0); cols];
                v[j] = C::new(1.0, 0.0);
                v
            })
            .collect();
        let mut width = inputs;
        for slice in &self.slices {
            // Before atom k: `done` output circles, then the remaining inputs.
            let mut done = 0;
            let mut remaining = width;
            for &atom in slice {
                let (ai, ao) = atom.arity();
                remaining -= ai;
                guard(done + ao + remaining)?;
                let m = mats.get(atom);
                let left = d.pow(done as u32);
                let right = d.pow(remaining as u32);
                for v in states.iter_mut() {
                    *v = apply_block(v, m, left, d.pow(ai as u32), d.pow(ao as u32), right);
                }
                done += ao;
            }
            width = done;
        }
        let rows = d.pow(width as u32);
        Ok(DMatrix::from_fn(rows, cols, |i, j| states[j][i]))
    }

    /// Parses one slice per line, atoms separated by whitespace. Blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut slices = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let atoms = line
                .split_whitespace()
                .filter(|t| *t != "⊗" && *t != "x")
                .map(|t| t.parse::<Atom>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|msg| TqftError::Parse { line: ln + 1, msg })?;
            slices.push(atoms);
        }
        Ok(CobordismWord::new(slices))
    }
}

impl fmt::Display for CobordismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.slices {
            let names: Vec<&str> = s.iter().map(|a| a.name()).collect();
            writeln!(f, "{}", names.join(" "))?;
        }
        Ok(())
    }
}

/// `v` viewed as `[left][inner_in][right]`, mapped to `[left][inner_out][right]`.
fn apply_block(
    v: &[C],
    m: &DMatrix<C>,
    left: usize,
    inner_in: usize,
    inner_out: usize,
    right: usize,
) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); left * inner_out * right];
    for l in 0..left {
        for i in 0..inner_in {
            for r in 0..right {
                let x = v[(l * inner_in + i) * right + r];
                if x == C::new(0.0, 0.0) {
                    continue;
                }
                for o in 0..inner_out {
                    let c = m[(o, i)];
                    if c != C::new(0.0, 0.0) {
                        out[(l * inner_out + o) * right + r] += c * x;
                    }
                }
            }
        }
    }
    out
}

struct AtomMatrices {
    id: DMatrix<C>,
    pants: DMatrix<C>,
    copants: DMatrix<C>,
    cap: DMatrix<C>,
    cup: DMatrix<C>,
    twist: DMatrix<C>,
}

impl AtomMatrices {
    fn new(a: &FrobeniusAlgebra) -> Self {
        let n = a.dim();
        let delta = a.comultiplication();
        AtomMatrices {
            id: DMatrix::identity(n, n),
            pants: DMatrix::from_fn(n, n * n, |k, ij| a.mu(ij / n, ij % n, k)),
            copants: DMatrix::from_fn(n * n, n, |jk, i| delta[i * n * n + jk]),
            cap: DMatrix::from_column_slice(n, 1, a.unit()),
            cup: DMatrix::from_row_slice(1, n, a.trace_vector()),
            twist: DMatrix::from_fn(n * n, n * n, |out, inp| {
                let (i, j) = (inp / n, inp % n);
                if out == j * n + i {
                    C::new(1.0, 0.0)
                } else {
                    C::new(0.0, 0.0)
                }
            }),
        }
    }

    fn get(&self, atom: Atom) -> &DMatrix<C> {
        match atom {
            Atom::Id => &self.id,
            Atom::Pants => &self.pants,
            Atom::Copants => &self.copants,
            Atom::Cap => &self.cap,
            Atom::Cup => &self.cup,
            Atom::Twist => &self.twist,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationDefect {
    pub relation: &'static str,
    pub defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub relations: Vec<RelationDefect>,
    pub max_defect: f64,
}

fn w(text: &str) -> CobordismWord {
    CobordismWord::parse(text).expect("static word")
}

/// Both sides of every generator relation, as word pairs.
pub fn relations() -> Vec<(&'static str, CobordismWord, CobordismWord)> {
    vec![
        ("associativity", w("pants id\npants"), w("id pants\npants")),
        ("left_unit", w("cap id\npants"), w("id")),
        ("right_unit", w("id cap\npants"), w("id")),
        ("coassociativity", w("copants\ncopants id"), w("copants\nid copants")),
        ("left_counit", w("copants\ncup id"), w("id")),
        ("right_counit", w("copants\nid cup"), w("id")),
        ("frobenius_left", w("id copants\npants id"), w("pants\ncopants")),
        ("frobenius_right", w("copants id\nid pants"), w("pants\ncopants")),
        ("commutativity", w("twist\npants"), w("pants")),
        ("cocommutativity", w("copants\ntwist"), w("copants")),
        ("twist_involution", w("twist\ntwist"), w("id id")),
        (
            "braid",
            w("twist id\nid twist\ntwist id"),
            w("id twist\ntwist id\nid twist"),
        ),
        ("twist_natural_pants", w("pants id\ntwist"), w("id twist\ntwist id\nid pants")),
        ("twist_natural_cap", w("cap id\ntwist"), w("id cap")),
    ]
}

/// Evaluates both sides of each relation and reports the max-entry defect.
pub fn relation_suite(a: &FrobeniusAlgebra) -> Result<RelationReport> {
    let mut out = Vec::new();
    let mut max_defect: f64 = 0.0;
    for (name, lhs, rhs) in relations() {
        let l = lhs.evaluate(a)?;
        let r = rhs.evaluate(a)?;
        let defect = (l - r).camax();
        max_defect = max_defect.max(defect);
        out.push(RelationDefect {
            relation: name,
            defect,
        });
    }
    Ok(RelationReport {
        relations: out,
        max_defect,
    })
}
