//! Algebra definition files and `--builtin` shortcuts.
//!
//! Rationals are JSON strings `"p/q"` (plain integers are accepted too).
//! Lie brackets are stored one-sided (`"i,j"` with `i < j`), associative
//! products symmetric one-sided (`"a,b"` with `a <= b`).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use quadraform_core::constructions::{heisenberg, heisenberg_extended, sl2};
use quadraform_core::exact::rational::{parse, to_text};
use quadraform_core::{AssocAlgebra, BilinearForm, LieAlgebra, Rational, RationalMatrix};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// A rational written as a string, or as a JSON integer on input.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RatText {
    Text(String),
    Int(i64),
}

impl RatText {
    fn value(&self) -> Result<Rational, CliError> {
        match self {
            RatText::Text(s) => Ok(parse(s)?),
            RatText::Int(i) => Ok(Rational::from_integer((*i).into())),
        }
    }
}

type Sparse = BTreeMap<String, BTreeMap<String, RatText>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieSpec {
    dim: usize,
    #[serde(default)]
    basis_names: Option<Vec<String>>,
    #[serde(default)]
    brackets: Sparse,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssocSpec {
    dim: usize,
    #[serde(default)]
    basis_names: Option<Vec<String>>,
    #[serde(default)]
    products: Sparse,
    unit: Vec<RatText>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    lie: Option<LieSpec>,
    assoc: Option<AssocSpec>,
    form: Option<Vec<Vec<RatText>>>,
    current_form: Option<Vec<Vec<RatText>>>,
    builtin: Option<BTreeMap<String, Value>>,
}

/// Everything the verbs can consume, merged from files and builtins.
#[derive(Clone, Debug, Default)]
pub struct Inputs {
    pub lie: Option<LieAlgebra>,
    pub assoc: Option<AssocAlgebra>,
    /// Metric on `g` given explicitly.
    pub form: Option<BilinearForm>,
    /// Metric that came with a builtin (Killing form, extended Heisenberg metric).
    pub builtin_form: Option<BilinearForm>,
    pub current_form: Option<BilinearForm>,
}

impl Inputs {
    pub fn metric(&self) -> Option<&BilinearForm> {
        self.form.as_ref().or(self.builtin_form.as_ref())
    }

    pub fn require_lie(&self) -> Result<&LieAlgebra, CliError> {
        self.lie.as_ref().ok_or_else(|| CliError::Usage("a Lie algebra input is required".into()))
    }

    pub fn require_assoc(&self) -> Result<&AssocAlgebra, CliError> {
        self.assoc
            .as_ref()
            .ok_or_else(|| CliError::Usage("an associative algebra input is required".into()))
    }

    fn set<T>(slot: &mut Option<T>, value: T, what: &str) -> Result<(), CliError> {
        if slot.is_some() {
            return Err(CliError::Usage(format!("{what} given more than once")));
        }
        *slot = Some(value);
        Ok(())
    }

    fn merge(&mut self, other: Inputs) -> Result<(), CliError> {
        if let Some(v) = other.lie {
            Self::set(&mut self.lie, v, "Lie algebra")?;
        }
        if let Some(v) = other.assoc {
            Self::set(&mut self.assoc, v, "associative algebra")?;
        }
        if let Some(v) = other.form {
            Self::set(&mut self.form, v, "form")?;
        }
        if let Some(v) = other.builtin_form {
            Self::set(&mut self.builtin_form, v, "builtin form")?;
        }
        if let Some(v) = other.current_form {
            Self::set(&mut self.current_form, v, "current_form")?;
        }
        Ok(())
    }

    pub fn load(files: &[impl AsRef<Path>], builtins: &[String]) -> Result<Inputs, CliError> {
        let mut inputs = Inputs::default();
        for path in files {
            let path = path.as_ref();
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            inputs.merge(parse_file(&text)?)?;
        }
        for spec in builtins {
            inputs.merge(builtin_from_flag(spec)?)?;
        }
        Ok(inputs)
    }
}

fn parse_index(s: &str, dim: usize) -> Result<usize, CliError> {
    let i: usize = s
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("bad index {s:?}")))?;
    if i >= dim {
        return Err(CliError::Parse(format!("index {i} out of range for dimension {dim}")));
    }
    Ok(i)
}

fn parse_pair(key: &str, dim: usize) -> Result<(usize, usize), CliError> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| CliError::Parse(format!("bad pair key {key:?}, expected \"i,j\"")))?;
    Ok((parse_index(a, dim)?, parse_index(b, dim)?))
}

fn names_or_default(names: Option<Vec<String>>, dim: usize) -> Result<Vec<String>, CliError> {
    match names {
        Some(n) if n.len() == dim => Ok(n),
        Some(n) => Err(CliError::Parse(format!("{} basis names for dimension {dim}", n.len()))),
        None => Ok((0..dim).map(|i| format!("e{}", i + 1)).collect()),
    }
}

fn lie_from_spec(spec: LieSpec) -> Result<LieAlgebra, CliError> {
    let n = spec.dim;
    let names = names_or_default(spec.basis_names, n)?;
    let mut entries = Vec::new();
    for (key, row) in &spec.brackets {
        let (i, j) = parse_pair(key, n)?;
        if i >= j {
            return Err(CliError::Parse(format!("bracket key {key:?} must have i < j")));
        }
        for (k, v) in row {
            entries.push((i, j, parse_index(k, n)?, v.value()?));
        }
    }
    Ok(LieAlgebra::from_brackets(names, &entries)?)
}

fn assoc_from_spec(spec: AssocSpec) -> Result<AssocAlgebra, CliError> {
    let m = spec.dim;
    let names = names_or_default(spec.basis_names, m)?;
    let mut mu = vec![Rational::from_integer(0.into()); m * m * m];
    for (key, row) in &spec.products {
        let (a, b) = parse_pair(key, m)?;
        if a > b {
            return Err(CliError::Parse(format!("product key {key:?} must have a <= b")));
        }
        for (c, v) in row {
            let c = parse_index(c, m)?;
            let v = v.value()?;
            mu[(a * m + b) * m + c] = v.clone();
            mu[(b * m + a) * m + c] = v;
        }
    }
    if spec.unit.len() != m {
        return Err(CliError::Parse(format!("unit has {} entries for dimension {m}", spec.unit.len())));
    }
    let unit = spec.unit.iter().map(RatText::value).collect::<Result<_, _>>()?;
    Ok(AssocAlgebra::new(names, mu, unit)?)
}

fn matrix_from_rows(rows: &[Vec<RatText>]) -> Result<RationalMatrix, CliError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Parse("ragged matrix".into()));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(RatText::value).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Ok(RationalMatrix::zeros(0, 0));
    }
    Ok(RationalMatrix::from_rows(rows))
}

fn form_from_rows(rows: &[Vec<RatText>]) -> Result<BilinearForm, CliError> {
    let m = matrix_from_rows(rows)?;
    if !m.is_square() {
        return Err(CliError::Parse("form matrix is not square".into()));
    }
    Ok(BilinearForm::new(m)?)
}

fn parse_file(text: &str) -> Result<Inputs, CliError> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut inputs = Inputs::default();
    if let Some(b) = file.builtin {
        for (name, param) in b {
            inputs.merge(builtin(&name, &param)?)?;
        }
    }
    let mut own = Inputs {
        lie: file.lie.map(lie_from_spec).transpose()?,
        assoc: file.assoc.map(assoc_from_spec).transpose()?,
        form: file.form.as_deref().map(form_from_rows).transpose()?,
        builtin_form: None,
        current_form: file.current_form.as_deref().map(form_from_rows).transpose()?,
    };
    // An explicit form in the same file replaces the builtin default.
    if own.form.is_some() {
        inputs.builtin_form = None;
    }
    own.builtin_form = None;
    inputs.merge(own)?;
    Ok(inputs)
}

fn positive(param: &Value, name: &str) -> Result<usize, CliError> {
    match param.as_u64() {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(CliError::Parse(format!("builtin {name} needs a positive integer parameter"))),
    }
}

fn builtin(name: &str, param: &Value) -> Result<Inputs, CliError> {
    let mut out = Inputs::default();
    match name {
        "sl2" => {
            let g = sl2();
            out.builtin_form = Some(g.killing_form());
            out.lie = Some(g);
        }
        "heisenberg" => out.lie = Some(heisenberg(positive(param, name)?)?),
        "heisenberg_extended" => {
            let data = heisenberg_extended(positive(param, name)?, None)?;
            out.lie = Some(data.algebra);
            out.builtin_form = Some(data.metric);
        }
        "abelian" => {
            let n = param
                .as_u64()
                .ok_or_else(|| CliError::Parse("builtin abelian needs an integer parameter".into()))?;
            out.lie = Some(LieAlgebra::abelian(n as usize));
        }
        "truncated_poly" => out.assoc = Some(AssocAlgebra::truncated_polynomial(positive(param, name)?)?),
        other => return Err(CliError::Usage(format!("unknown builtin {other:?}"))),
    }
    Ok(out)
}

/// `name` or `name:param`, e.g. `sl2`, `heisenberg:2`, `truncated_poly:3`.
pub fn builtin_from_flag(spec: &str) -> Result<Inputs, CliError> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => {
            let p: u64 = p
                .parse()
                .map_err(|_| CliError::Parse(format!("bad builtin parameter in {spec:?}")))?;
            (n, Value::from(p))
        }
        None => (spec, Value::Bool(true)),
    };
    builtin(name, &param)
}

/// A matrix given inline as JSON or as `@path` to a JSON file.
pub fn matrix_arg(arg: &str) -> Result<RationalMatrix, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    let rows: Vec<Vec<RatText>> = serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    matrix_from_rows(&rows)
}

/// A vector given inline as a JSON array, or a basis name of `g`.
pub fn vector_arg(arg: &str, g: &LieAlgebra) -> Result<Vec<Rational>, CliError> {
    if let Some(i) = g.basis_names().iter().position(|n| n == arg) {
        let mut v = vec![Rational::from_integer(0.into()); g.dim()];
        v[i] = Rational::from_integer(1.into());
        return Ok(v);
    }
    let entries: Vec<RatText> = serde_json::from_str(arg)
        .map_err(|_| CliError::Parse(format!("{arg:?} is neither a basis name nor a JSON vector")))?;
    entries.iter().map(RatText::value).collect()
}

#[derive(Serialize)]
struct LieOut {
    dim: usize,
    basis_names: Vec<String>,
    brackets: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Serialize)]
struct AssocOut {
    dim: usize,
    basis_names: Vec<String>,
    products: BTreeMap<String, BTreeMap<String, String>>,
    unit: Vec<String>,
}

/// The file-format encoding of `g`, so outputs can be fed back in.
pub fn lie_json(g: &LieAlgebra) -> Value {
    let n = g.dim();
    let mut brackets = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let support = g.bracket_support(i, j);
            if !support.is_empty() {
                let row = support.iter().map(|(k, v)| (k.to_string(), to_text(v))).collect();
                brackets.insert(format!("{i},{j}"), row);
            }
        }
    }
    serde_json::to_value(LieOut {
        dim: n,
        basis_names: g.basis_names().to_vec(),
        brackets,
    })
    .expect("serializable")
}

pub fn assoc_json(s: &AssocAlgebra) -> Value {
    let m = s.dim();
    let mut products = BTreeMap::new();
    for a in 0..m {
        for b in a..m {
            let row: BTreeMap<String, String> = (0..m)
                .filter(|&c| *s.structure(a, b, c) != Rational::from_integer(0.into()))
                .map(|c| (c.to_string(), to_text(s.structure(a, b, c))))
                .collect();
            if !row.is_empty() {
                products.insert(format!("{a},{b}"), row);
            }
        }
    }
    serde_json::to_value(AssocOut {
        dim: m,
        basis_names: s.basis_names().to_vec(),
        products,
        unit: s.unit().iter().map(to_text).collect(),
    })
    .expect("serializable")
}
