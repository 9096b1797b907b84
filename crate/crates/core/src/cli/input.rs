//! JSON input files. Scalars may be JSON integers or strings such as
//! `"-1/2"`. Every loaded object goes through its audits.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Bimodule, FinAlgebra};
use crate::cyclic_bimod::{tautological_tau, CyclicBimodule};
use crate::exactlin::{Field, Matrix, Scalar, SparseVec};
use crate::trace_res::ResolutionData;
use crate::Error;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<Value>,
    /// `[i, j, k, c]`: `e_i e_j` has coefficient `c` on `e_k`.
    pub mult: Vec<(usize, usize, usize, Value)>,
}

/// Either `{"kind": "diagonal" | "free" | "zero"}` or explicit action
/// matrices, `left[i]` being the dense rows of `e_i · -`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<Vec<Vec<Value>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<Vec<Vec<Value>>>>,
}

/// Either `{"kind": "tautological"}` or the dense rows of
/// `τ : A ⊗ M -> M ⊗ A` (`A ⊗ M` indexed `a · dim M + m`, `M ⊗ A` indexed `m · dim A + a`).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Value>>>,
}

/// `[i, j, k, c]`: `c(e_i, e_j)` has coefficient `c` on `m_k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleFile {
    pub entries: Vec<(usize, usize, usize, Value)>,
}

/// A parsed input together with the canonical text it is digested as.
pub struct Loaded<T> {
    pub value: T,
    pub canonical: String,
}

fn scalar(field: Field, v: &Value, at: &str) -> Result<Scalar, Error> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::Parse(format!("{at}: expected a number or a string, found {v}"))),
    };
    field.parse_scalar(&text).map_err(|e| Error::Parse(format!("{at}: {e}")))
}

fn dense(field: Field, rows: &[Vec<Value>], nrows: usize, ncols: usize, at: &str) -> Result<Matrix, Error> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse(format!("{at}: expected a {nrows}x{ncols} matrix")));
    }
    let mut out = Vec::with_capacity(nrows);
    for (i, r) in rows.iter().enumerate() {
        out.push(r.iter().enumerate().map(|(j, v)| scalar(field, v, &format!("{at}[{i}][{j}]"))).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(Matrix::from_dense(field, &out))
}

/// Reads JSON with `file:line:column` in the error.
fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, Value), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    let parsed: T = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    Ok((parsed, value))
}

fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

pub fn algebra_from_file(file: &AlgebraFile) -> Result<FinAlgebra, Error> {
    let field = Field::parse(&file.field)?;
    if file.basis.len() != file.dim || file.unit.len() != file.dim {
        return Err(Error::Parse(format!("basis and unit must have length dim = {}", file.dim)));
    }
    let mut unit: SparseVec = Vec::new();
    for (i, v) in file.unit.iter().enumerate() {
        let c = scalar(field, v, &format!("unit[{i}]"))?;
        if !c.is_zero() {
            unit.push((i, c));
        }
    }
    let mut entries = Vec::with_capacity(file.mult.len());
    for (n, (i, j, k, v)) in file.mult.iter().enumerate() {
        if *i >= file.dim || *j >= file.dim || *k >= file.dim {
            return Err(Error::Parse(format!("mult[{n}]: index out of range for dim {}", file.dim)));
        }
        entries.push((*i, *j, *k, scalar(field, v, &format!("mult[{n}]"))?));
    }
    FinAlgebra::from_entries(field, file.basis.clone(), unit, entries)
}

/// `builtin:<name>` or a path to an [`AlgebraFile`]; `field` overrides the file's field.
pub fn load_algebra(spec: &str, field: Option<Field>) -> Result<Loaded<FinAlgebra>, Error> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let f = field.unwrap_or(Field::Rationals);
        let a = FinAlgebra::builtin(name, f)?;
        return Ok(Loaded {
            value: a,
            canonical: format!("builtin:{name}@{}", field_name(f)),
        });
    }
    let (file, raw): (AlgebraFile, Value) = read_json(Path::new(spec))?;
    let mut a = algebra_from_file(&file).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    if let Some(f) = field {
        if f != a.field() {
            a = a.with_field(f)?;
        }
    }
    Ok(Loaded {
        canonical: format!("{}@{}", canonical(&raw), field_name(a.field())),
        value: a,
    })
}

pub fn bimodule_from_file(a: &FinAlgebra, file: &BimoduleFile) -> Result<Bimodule, Error> {
    if let Some(kind) = &file.kind {
        if file.dim.is_some() || file.left.is_some() || file.right.is_some() {
            return Err(Error::Parse("a named bimodule takes no matrices".into()));
        }
        return match kind.as_str() {
            "diagonal" => Ok(Bimodule::diagonal(a)),
            "free" => Ok(Bimodule::free(a)),
            "zero" => Ok(Bimodule::zero(a)),
            _ => Err(Error::Parse(format!("unknown bimodule kind `{kind}`"))),
        };
    }
    let (Some(dim), Some(left), Some(right)) = (file.dim, &file.left, &file.right) else {
        return Err(Error::Parse("an explicit bimodule needs dim, left and right".into()));
    };
    let d = a.dim();
    if left.len() != d || right.len() != d {
        return Err(Error::Parse(format!("left and right need one matrix per basis element ({d})")));
    }
    let f = a.field();
    let l = left.iter().enumerate().map(|(i, m)| dense(f, m, dim, dim, &format!("left[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    let r = right.iter().enumerate().map(|(i, m)| dense(f, m, dim, dim, &format!("right[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    Bimodule::new(a, dim, l, r)
}

/// `diagonal`, `free`, `zero`, or a path to a [`BimoduleFile`].
pub fn load_bimodule(spec: Option<&str>, a: &FinAlgebra) -> Result<Loaded<Bimodule>, Error> {
    let spec = spec.unwrap_or("diagonal");
    if matches!(spec, "diagonal" | "free" | "zero") {
        let file = BimoduleFile {
            kind: Some(spec.to_string()),
            ..Default::default()
        };
        return Ok(Loaded {
            value: bimodule_from_file(a, &file)?,
            canonical: spec.to_string(),
        });
    }
    let (file, raw): (BimoduleFile, Value) = read_json(Path::new(spec))?;
    Ok(Loaded {
        value: bimodule_from_file(a, &file).map_err(|e| Error::Parse(format!("{spec}: {e}")))?,
        canonical: canonical(&raw),
    })
}

pub fn tau_from_file(a: &FinAlgebra, m: &Bimodule, file: &TauFile) -> Result<CyclicBimodule, Error> {
    match (&file.kind, &file.matrix) {
        (Some(k), None) if k == "tautological" => {
            let t = tautological_tau(a);
            if m.dim() != a.dim() || *m != t.module {
                return Err(Error::Parse("the tautological structure needs the diagonal bimodule".into()));
            }
            Ok(t)
        }
        (None, Some(rows)) => {
            let n = a.dim() * m.dim();
            let tau = dense(a.field(), rows, n, n, "matrix")?;
            CyclicBimodule::new(a.clone(), m.clone(), tau)
        }
        _ => Err(Error::Parse("tau needs either kind = \"tautological\" or a matrix".into())),
    }
}

/// `tautological` or a path to a [`TauFile`].
pub fn load_tau(spec: Option<&str>, a: &FinAlgebra, m: &Bimodule) -> Result<Loaded<CyclicBimodule>, Error> {
    let spec = spec.unwrap_or("tautological");
    if spec == "tautological" {
        let file = TauFile {
            kind: Some(spec.into()),
            matrix: None,
        };
        return Ok(Loaded {
            value: tau_from_file(a, m, &file)?,
            canonical: spec.into(),
        });
    }
    let (file, raw): (TauFile, Value) = read_json(Path::new(spec))?;
    Ok(Loaded {
        value: tau_from_file(a, m, &file).map_err(|e| Error::Parse(format!("{spec}: {e}")))?,
        canonical: canonical(&raw),
    })
}

/// The cochain in the layout of `cochain_from_matrix`.
pub fn cocycle_from_file(a: &FinAlgebra, m: &Bimodule, file: &CocycleFile) -> Result<SparseVec, Error> {
    let (d, dm) = (a.dim(), m.dim());
    let mut acc = crate::exactlin::Accumulator::new(d * d * dm);
    for (n, (i, j, k, v)) in file.entries.iter().enumerate() {
        if *i >= d || *j >= d || *k >= dm {
            return Err(Error::Parse(format!("entries[{n}]: index out of range")));
        }
        acc.add((i * d + j) * dm + k, &scalar(a.field(), v, &format!("entries[{n}]"))?);
    }
    Ok(acc.drain())
}

/// `zero` or a path to a [`CocycleFile`].
pub fn load_cocycle(spec: Option<&str>, a: &FinAlgebra, m: &Bimodule) -> Result<Loaded<SparseVec>, Error> {
    let spec = spec.unwrap_or("zero");
    if spec == "zero" {
        return Ok(Loaded {
            value: Vec::new(),
            canonical: spec.into(),
        });
    }
    let (file, raw): (CocycleFile, Value) = read_json(Path::new(spec))?;
    Ok(Loaded {
        value: cocycle_from_file(a, m, &file).map_err(|e| Error::Parse(format!("{spec}: {e}")))?,
        canonical: canonical(&raw),
    })
}

pub fn load_resolution(spec: &str) -> Result<Loaded<ResolutionData>, Error> {
    let (data, raw): (ResolutionData, Value) = read_json(Path::new(spec))?;
    Ok(Loaded {
        value: data,
        canonical: canonical(&raw),
    })
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Rationals => "Q".into(),
        Field::Prime(p) => format!("Fp:{p}"),
    }
}

/// Writes `a` in the [`AlgebraFile`] format.
pub fn algebra_to_file(a: &FinAlgebra) -> AlgebraFile {
    let d = a.dim();
    let mut unit = vec![Value::from(0); d];
    for (i, c) in a.unit() {
        unit[*i] = Value::String(c.to_string());
    }
    let mult = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .flat_map(|(i, j)| a.basis_product(i, j).iter().map(move |(k, c)| (i, j, *k, Value::String(c.to_string()))))
        .collect();
    AlgebraFile {
        field: field_name(a.field()),
        dim: d,
        basis: a.labels().to_vec(),
        unit,
        mult,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_file_round_trip() {
        for name in FinAlgebra::BUILTINS {
            let a = FinAlgebra::builtin(name, Field::Prime(3)).unwrap();
            let file = algebra_to_file(&a);
            let text = serde_json::to_string(&file).unwrap();
            let back: AlgebraFile = serde_json::from_str(&text).unwrap();
            assert_eq!(algebra_from_file(&back).unwrap(), a);
        }
    }

    #[test]
    fn bad_inputs_are_located() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.json");
        std::fs::write(&p, "{\n  \"field\": \"Q\",\n  \"dim\": 1,\n  \"basis\": [\"1\"]\n  \"unit\": [1]\n}").unwrap();
        let err = load_algebra(p.to_str().unwrap(), None).err().unwrap().to_string();
        assert!(err.contains("a.json:5:"), "{err}");
        std::fs::write(&p, r#"{"field": "Q", "dim": 1, "basis": ["1"], "unit": [1], "mult": [[0, 0, 1, 1]]}"#).unwrap();
        let err = load_algebra(p.to_str().unwrap(), None).err().unwrap().to_string();
        assert!(err.contains("mult[0]"), "{err}");
        std::fs::write(&p, r#"{"field": "Q", "dim": 2, "basis": ["1", "x"], "unit": [1, 0], "mult": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 1, 1]]}"#).unwrap();
        // x² = x is fine; dropping 1·x breaks the unit law
        load_algebra(p.to_str().unwrap(), None).unwrap();
        std::fs::write(&p, r#"{"field": "Q", "dim": 2, "basis": ["1", "x"], "unit": [1, 0], "mult": [[0, 0, 0, 1], [1, 0, 1, 1]]}"#).unwrap();
        let err = load_algebra(p.to_str().unwrap(), None).err().unwrap().to_string();
        assert!(err.contains("unit law"), "{err}");
    }

    #[test]
    fn explicit_bimodule_and_cocycle() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let file: BimoduleFile = serde_json::from_str(
            r#"{"dim": 2, "left": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]], "right": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]}"#,
        )
        .unwrap();
        let m = bimodule_from_file(&a, &file).unwrap();
        assert_eq!(m, Bimodule::diagonal(&a));
        let c: CocycleFile = serde_json::from_str(r#"{"entries": [[1, 1, 0, "1/2"]]}"#).unwrap();
        let v = cocycle_from_file(&a, &m, &c).unwrap();
        assert_eq!(v, vec![(6, Field::Rationals.parse_scalar("1/2").unwrap())]);
        let bad: BimoduleFile = serde_json::from_str(r#"{"dim": 1, "left": [[[1]], [[1]]], "right": [[[1]], [[0]]]}"#).unwrap();
        assert!(bimodule_from_file(&a, &bad).is_err());
    }
}
