//! Definition-file loading and validation.
//!
//! Files are TOML with a mandatory `format-version` header. Matrices and
//! rank-3 arrays are written entry-by-entry as arrays of tables with explicit
//! 1-based indices, so there is no orientation ambiguity; unspecified entries
//! are zero. For matrices that must be symmetric (metric `g`, `eta`, `form`)
//! a missing mirror entry is filled in and a conflicting one is an error.
//! Constants are rational literals only. The full grammar lives in
//! `docs/format.md`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use qfrob_core::brackets::{BracketCoefficients, FlatCoordinateData};
use qfrob_core::deformations::{PotentialFamily, ScalarPotential};
use qfrob_core::geometry::Metric;
use qfrob_core::polyring::matrix::PolyMatrix;
use qfrob_core::polyring::tensor::Tensor;
use qfrob_core::{Polynomial, Rational, RationalFunction, VarSet};

use crate::parser::{parse_expression, ParseError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("in {location}: {source}")]
    Expr {
        location: String,
        #[source]
        source: ParseError,
    },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("asymmetric metric: entries ({i},{j}) and ({j},{i}) of `{table}` disagree")]
    AsymmetricMetric { table: String, i: usize, j: usize },
    #[error("validation error: {0}")]
    Validation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    /// Mirror-fill missing entries; conflicting mirror pairs are an error.
    Strict,
    /// Mirror-fill missing entries; explicit asymmetric pairs stay as given.
    FillMissing,
    /// Entries verbatim.
    Raw,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry1 {
    i: usize,
    expr: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry2 {
    i: usize,
    j: usize,
    expr: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry3 {
    i: usize,
    j: usize,
    k: usize,
    expr: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    k: Option<String>,
    k1: Option<String>,
    k2: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawDefinition {
    format_version: u32,
    kind: String,
    dim: usize,
    name: Option<String>,
    /// pencil member kind: "metrics" or "brackets"
    members: Option<String>,
    phi: Option<String>,
    constants: Option<RawConstants>,
    #[serde(default)]
    g: Vec<RawEntry2>,
    #[serde(default)]
    b: Vec<RawEntry3>,
    #[serde(default)]
    eta: Vec<RawEntry2>,
    #[serde(default)]
    h: Vec<RawEntry1>,
    #[serde(default)]
    c: Vec<RawEntry2>,
    #[serde(default)]
    f: Vec<RawEntry3>,
    #[serde(default)]
    form: Vec<RawEntry2>,
    #[serde(default)]
    g1: Vec<RawEntry2>,
    #[serde(default)]
    b1: Vec<RawEntry3>,
    #[serde(default)]
    g2: Vec<RawEntry2>,
    #[serde(default)]
    b2: Vec<RawEntry3>,
}

/// A fully validated definition, ready for the command runner.
#[derive(Debug)]
pub enum Definition {
    Metric {
        name: Option<String>,
        dim: usize,
        metric: Metric,
        k: Rational,
    },
    Bracket {
        name: Option<String>,
        dim: usize,
        bracket: BracketCoefficients,
        eta: Option<FlatCoordinateData>,
    },
    MetricPencil {
        name: Option<String>,
        dim: usize,
        pencil: qfrob_core::geometry::MetricPencil,
    },
    BracketPencil {
        name: Option<String>,
        dim: usize,
        first: BracketCoefficients,
        second: BracketCoefficients,
    },
    PotentialFamily {
        name: Option<String>,
        dim: usize,
        family: PotentialFamily,
    },
    ScalarPotential {
        name: Option<String>,
        dim: usize,
        potential: ScalarPotential,
    },
    Algebra {
        name: Option<String>,
        dim: usize,
        algebra: qfrob_core::algebras::FiniteAlgebra,
        form: Option<qfrob_core::algebras::BilinearForm>,
    },
    Form {
        name: Option<String>,
        dim: usize,
        entries: PolyMatrix,
    },
}

impl Definition {
    pub fn name(&self) -> Option<&str> {
        match self {
            Definition::Metric { name, .. }
            | Definition::Bracket { name, .. }
            | Definition::MetricPencil { name, .. }
            | Definition::BracketPencil { name, .. }
            | Definition::PotentialFamily { name, .. }
            | Definition::ScalarPotential { name, .. }
            | Definition::Algebra { name, .. }
            | Definition::Form { name, .. } => name.as_deref(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Definition::Metric { .. } => "metric",
            Definition::Bracket { .. } => "bracket",
            Definition::MetricPencil { .. } => "pencil (metrics)",
            Definition::BracketPencil { .. } => "pencil (brackets)",
            Definition::PotentialFamily { .. } => "potential_family",
            Definition::ScalarPotential { .. } => "scalar_potential",
            Definition::Algebra { .. } => "algebra",
            Definition::Form { .. } => "form",
        }
    }
}

pub fn load_definition(path: &Path) -> Result<Definition, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_definition_str(&text)
}

pub fn load_definition_str(text: &str) -> Result<Definition, LoadError> {
    let raw: RawDefinition = toml::from_str(text).map_err(|e| LoadError::Schema(e.to_string()))?;
    if raw.format_version != FORMAT_VERSION {
        return Err(LoadError::Schema(format!(
            "unsupported format-version {} (this build reads version {FORMAT_VERSION})",
            raw.format_version
        )));
    }
    if raw.dim < 1 || raw.dim > 6 {
        return Err(LoadError::Dimension(format!(
            "dim must be in 1..=6, got {}",
            raw.dim
        )));
    }
    let ctx = Loader {
        dim: raw.dim,
        vars: VarSet::coords(raw.dim),
    };
    ctx.build(raw)
}

struct Loader {
    dim: usize,
    vars: VarSet,
}

impl Loader {
    fn parse(&self, location: &str, expr: &str) -> Result<Polynomial, LoadError> {
        parse_expression(expr, &self.vars).map_err(|source| LoadError::Expr {
            location: location.to_string(),
            source,
        })
    }

    fn parse_constant(&self, location: &str, expr: &str) -> Result<Rational, LoadError> {
        let p = self.parse(location, expr)?;
        if !p.is_constant() {
            return Err(LoadError::Validation(format!(
                "{location} must be a rational constant, got `{expr}`"
            )));
        }
        Ok(p.constant_coeff())
    }

    fn check_index(&self, table: &str, idx: usize) -> Result<usize, LoadError> {
        if idx < 1 || idx > self.dim {
            return Err(LoadError::Dimension(format!(
                "index {idx} in `{table}` out of range 1..={}",
                self.dim
            )));
        }
        Ok(idx - 1)
    }

    /// Square matrix from explicit-index entries; duplicates rejected,
    /// unspecified entries zero. `Strict` mirror-fills and rejects
    /// conflicting mirror pairs; `FillMissing` mirror-fills but keeps an
    /// explicitly asymmetric pair verbatim (so symmetry stays expressible as
    /// a *check* for brackets and standalone forms).
    fn matrix(
        &self,
        table: &str,
        entries: &[RawEntry2],
        symmetry: Symmetry,
    ) -> Result<PolyMatrix, LoadError> {
        let n = self.dim;
        let mut seen: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
        for e in entries {
            let i = self.check_index(table, e.i)?;
            let j = self.check_index(table, e.j)?;
            let p = self.parse(&format!("{table}[{},{}]", e.i, e.j), &e.expr)?;
            if seen.insert((i, j), p).is_some() {
                return Err(LoadError::Schema(format!(
                    "duplicate entry ({},{}) in `{table}`",
                    e.i, e.j
                )));
            }
        }
        if symmetry != Symmetry::Raw {
            for i in 0..n {
                for j in (i + 1)..n {
                    match (seen.get(&(i, j)).cloned(), seen.get(&(j, i)).cloned()) {
                        (Some(a), Some(b)) => {
                            if symmetry == Symmetry::Strict && a != b {
                                return Err(LoadError::AsymmetricMetric {
                                    table: table.to_string(),
                                    i: i + 1,
                                    j: j + 1,
                                });
                            }
                        }
                        (Some(a), None) => {
                            seen.insert((j, i), a);
                        }
                        (None, Some(b)) => {
                            seen.insert((i, j), b);
                        }
                        (None, None) => {}
                    }
                }
            }
        }
        let zero = Polynomial::zero(&self.vars);
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(seen.get(&(i, j)).cloned().unwrap_or_else(|| zero.clone()));
            }
        }
        Ok(PolyMatrix::from_entries(n, out))
    }

    fn rank3(&self, table: &str, entries: &[RawEntry3]) -> Result<Tensor<Polynomial>, LoadError> {
        let n = self.dim;
        let mut seen: BTreeMap<(usize, usize, usize), Polynomial> = BTreeMap::new();
        for e in entries {
            let i = self.check_index(table, e.i)?;
            let j = self.check_index(table, e.j)?;
            let k = self.check_index(table, e.k)?;
            let p = self.parse(&format!("{table}[{},{},{}]", e.i, e.j, e.k), &e.expr)?;
            if seen.insert((i, j, k), p).is_some() {
                return Err(LoadError::Schema(format!(
                    "duplicate entry ({},{},{}) in `{table}`",
                    e.i, e.j, e.k
                )));
            }
        }
        let zero = Polynomial::zero(&self.vars);
        Ok(Tensor::from_fn(&[n, n, n], |idx| {
            seen.get(&(idx[0], idx[1], idx[2]))
                .cloned()
                .unwrap_or_else(|| zero.clone())
        }))
    }

    fn eta(&self, entries: &[RawEntry2]) -> Result<FlatCoordinateData, LoadError> {
        if entries.is_empty() {
            return Err(LoadError::Schema(
                "missing required `eta` entries".to_string(),
            ));
        }
        let m = self.matrix("eta", entries, Symmetry::Strict)?;
        let mut vals = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = m.get(i, j);
                if !p.is_constant() {
                    return Err(LoadError::Validation(format!(
                        "eta[{},{}] must be a rational constant",
                        i + 1,
                        j + 1
                    )));
                }
                vals.push(p.constant_coeff());
            }
        }
        FlatCoordinateData::new(self.dim, vals)
            .map_err(|e| LoadError::Validation(format!("eta: {e}")))
    }

    fn constant_matrix(
        &self,
        table: &str,
        entries: &[RawEntry2],
    ) -> Result<Vec<Rational>, LoadError> {
        let m = self.matrix(table, entries, Symmetry::Raw)?;
        let mut vals = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = m.get(i, j);
                if !p.is_constant() {
                    return Err(LoadError::Validation(format!(
                        "{table}[{},{}] must be a rational constant",
                        i + 1,
                        j + 1
                    )));
                }
                vals.push(p.constant_coeff());
            }
        }
        Ok(vals)
    }

    fn components(&self, table: &str, entries: &[RawEntry1]) -> Result<Vec<Polynomial>, LoadError> {
        let mut seen: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for e in entries {
            let i = self.check_index(table, e.i)?;
            let p = self.parse(&format!("{table}[{}]", e.i), &e.expr)?;
            if seen.insert(i, p).is_some() {
                return Err(LoadError::Schema(format!(
                    "duplicate entry ({}) in `{table}`",
                    e.i
                )));
            }
        }
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            match seen.remove(&i) {
                Some(p) => out.push(p),
                None => {
                    return Err(LoadError::Schema(format!(
                        "missing entry ({}) in `{table}`",
                        i + 1
                    )))
                }
            }
        }
        Ok(out)
    }

    fn bracket(
        &self,
        g_table: &str,
        g: &[RawEntry2],
        b_table: &str,
        b: &[RawEntry3],
        k: Rational,
    ) -> Result<BracketCoefficients, LoadError> {
        let g = self.matrix(g_table, g, Symmetry::FillMissing)?;
        let b = self.rank3(b_table, b)?;
        let b = b.map(|p| RationalFunction::from_poly(p.clone()));
        Ok(BracketCoefficients::new(g, b, k))
    }

    fn build(&self, raw: RawDefinition) -> Result<Definition, LoadError> {
        let consts = raw.constants.unwrap_or_default();
        let k = match &consts.k {
            Some(s) => self.parse_constant("constants.k", s)?,
            None => Rational::from_integer(0.into()),
        };
        let k1 = match &consts.k1 {
            Some(s) => self.parse_constant("constants.k1", s)?,
            None => Rational::from_integer(0.into()),
        };
        let k2 = match &consts.k2 {
            Some(s) => self.parse_constant("constants.k2", s)?,
            None => Rational::from_integer(0.into()),
        };

        let reject_tables = |used: &[(&str, bool)]| -> Result<(), LoadError> {
            for (name, present) in used {
                if *present {
                    return Err(LoadError::Schema(format!(
                        "table `{name}` is not meaningful for kind `{}`",
                        raw.kind
                    )));
                }
            }
            Ok(())
        };

        match raw.kind.as_str() {
            "metric" => {
                reject_tables(&[
                    ("b", !raw.b.is_empty()),
                    ("h", !raw.h.is_empty()),
                    ("f", !raw.f.is_empty()),
                    ("g1", !raw.g1.is_empty()),
                    ("g2", !raw.g2.is_empty()),
                ])?;
                if raw.g.is_empty() {
                    return Err(LoadError::Schema("kind `metric` needs `g` entries".into()));
                }
                let g = self.matrix("g", &raw.g, Symmetry::Strict)?;
                let metric =
                    Metric::new(g).map_err(|e| LoadError::Validation(format!("g: {e}")))?;
                Ok(Definition::Metric { name: raw.name, dim: self.dim, metric, k })
            }
            "bracket" => {
                if raw.g.is_empty() {
                    return Err(LoadError::Schema("kind `bracket` needs `g` entries".into()));
                }
                let bracket = self.bracket("g", &raw.g, "b", &raw.b, k)?;
                let eta = if raw.eta.is_empty() { None } else { Some(self.eta(&raw.eta)?) };
                Ok(Definition::Bracket { name: raw.name, dim: self.dim, bracket, eta })
            }
            "pencil" => {
                let members = raw.members.as_deref().ok_or_else(|| {
                    LoadError::Schema(
                        "kind `pencil` needs `members = \"metrics\"` or `\"brackets\"`".into(),
                    )
                })?;
                match members {
                    "metrics" => {
                        let g1 = self.matrix("g1", &raw.g1, Symmetry::Strict)?;
                        let g2 = self.matrix("g2", &raw.g2, Symmetry::Strict)?;
                        let g1 = Metric::new(g1)
                            .map_err(|e| LoadError::Validation(format!("g1: {e}")))?;
                        let g2 = Metric::new(g2)
                            .map_err(|e| LoadError::Validation(format!("g2: {e}")))?;
                        Ok(Definition::MetricPencil {
                            name: raw.name,
                            dim: self.dim,
                            pencil: qfrob_core::geometry::MetricPencil { g1, g2, k1, k2 },
                        })
                    }
                    "brackets" => {
                        let first = self.bracket("g1", &raw.g1, "b1", &raw.b1, k1)?;
                        let second = self.bracket("g2", &raw.g2, "b2", &raw.b2, k2)?;
                        Ok(Definition::BracketPencil {
                            name: raw.name,
                            dim: self.dim,
                            first,
                            second,
                        })
                    }
                    other => Err(LoadError::Schema(format!(
                        "unknown pencil members kind `{other}` (want `metrics` or `brackets`)"
                    ))),
                }
            }
            "potential_family" => {
                let flat = self.eta(&raw.eta)?;
                let components = self.components("h", &raw.h)?;
                let family = PotentialFamily::new(components, flat, k1)
                    .map_err(|e| LoadError::Validation(e.to_string()))?;
                Ok(Definition::PotentialFamily { name: raw.name, dim: self.dim, family })
            }
            "scalar_potential" => {
                let flat = self.eta(&raw.eta)?;
                let phi_text = raw
                    .phi
                    .as_deref()
                    .ok_or_else(|| LoadError::Schema("kind `scalar_potential` needs `phi`".into()))?;
                let phi = self.parse("phi", phi_text)?;
                let skew = if raw.c.is_empty() {
                    vec![Rational::from_integer(0.into()); self.dim * self.dim]
                } else {
                    self.constant_matrix("c", &raw.c)?
                };
                let potential = ScalarPotential::new(phi, skew, flat, k1)
                    .map_err(|e| LoadError::Validation(e.to_string()))?;
                Ok(Definition::ScalarPotential { name: raw.name, dim: self.dim, potential })
            }
            "algebra" => {
                let mult = self.rank3("f", &raw.f)?;
                let algebra = qfrob_core::algebras::FiniteAlgebra::new(self.dim, mult);
                let form = if raw.form.is_empty() {
                    None
                } else {
                    let m = self.matrix("form", &raw.form, Symmetry::Strict)?;
                    Some(
                        qfrob_core::algebras::BilinearForm::new(m)
                            .map_err(|e| LoadError::Validation(format!("form: {e}")))?,
                    )
                };
                Ok(Definition::Algebra { name: raw.name, dim: self.dim, algebra, form })
            }
            "form" => {
                if raw.form.is_empty() {
                    return Err(LoadError::Schema("kind `form` needs `form` entries".into()));
                }
                let entries = self.matrix("form", &raw.form, Symmetry::FillMissing)?;
                Ok(Definition::Form { name: raw.name, dim: self.dim, entries })
            }
            other => Err(LoadError::Schema(format!(
                "unknown kind `{other}` (want metric | bracket | pencil | potential_family | scalar_potential | algebra | form)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_metric_file() {
        let text = r#"
format-version = 1
kind = "metric"
dim = 2

[[g]]
i = 1
j = 1
expr = "1"

[[g]]
i = 2
j = 2
expr = "1"
"#;
        let def = load_definition_str(text).unwrap();
        match def {
            Definition::Metric { dim, .. } => assert_eq!(dim, 2),
            other => panic!("wrong kind: {}", other.kind_name()),
        }
    }

    #[test]
    fn potential_family_file() {
        let text = r#"
format-version = 1
kind = "potential_family"
dim = 2
name = "left-symmetry-violation"

[constants]
k1 = "0"

[[eta]]
i = 1
j = 1
expr = "1"

[[eta]]
i = 2
j = 2
expr = "1"

[[h]]
i = 1
expr = "u2^2"

[[h]]
i = 2
expr = "0"
"#;
        let def = load_definition_str(text).unwrap();
        match def {
            Definition::PotentialFamily { family, .. } => {
                assert_eq!(family.dim(), 2);
                assert!(!family.component(0).is_zero());
            }
            other => panic!("wrong kind: {}", other.kind_name()),
        }
    }

    #[test]
    fn asymmetric_metric_is_rejected() {
        let text = r#"
format-version = 1
kind = "metric"
dim = 2

[[g]]
i = 1
j = 2
expr = "u1"

[[g]]
i = 2
j = 1
expr = "u2"

[[g]]
i = 1
j = 1
expr = "1"

[[g]]
i = 2
j = 2
expr = "1"
"#;
        match load_definition_str(text).unwrap_err() {
            LoadError::AsymmetricMetric { table, .. } => assert_eq!(table, "g"),
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn unknown_version_is_rejected() {
        let text =
            "format-version = 2\nkind = \"metric\"\ndim = 1\n[[g]]\ni = 1\nj = 1\nexpr = \"1\"\n";
        assert!(matches!(
            load_definition_str(text).unwrap_err(),
            LoadError::Schema(_)
        ));
    }

    #[test]
    fn expression_errors_carry_location() {
        let text = r#"
format-version = 1
kind = "metric"
dim = 2

[[g]]
i = 1
j = 1
expr = "u1 u1"
"#;
        match load_definition_str(text).unwrap_err() {
            LoadError::Expr { location, source } => {
                assert_eq!(location, "g[1,1]");
                assert_eq!(source.col, 4);
            }
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn float_constants_are_rejected() {
        let text = r#"
format-version = 1
kind = "metric"
dim = 1

[[g]]
i = 1
j = 1
expr = "1.5"
"#;
        assert!(matches!(
            load_definition_str(text).unwrap_err(),
            LoadError::Expr { .. }
        ));
    }

    #[test]
    fn duplicate_entries_are_rejected() {
        let text = r#"
format-version = 1
kind = "metric"
dim = 2

[[g]]
i = 1
j = 1
expr = "1"

[[g]]
i = 1
j = 1
expr = "2"
"#;
        assert!(matches!(
            load_definition_str(text).unwrap_err(),
            LoadError::Schema(_)
        ));
    }

    #[test]
    fn missing_potential_component_is_rejected() {
        let text = r#"
format-version = 1
kind = "potential_family"
dim = 2

[[eta]]
i = 1
j = 1
expr = "1"

[[eta]]
i = 2
j = 2
expr = "1"

[[h]]
i = 1
expr = "u1"
"#;
        assert!(matches!(
            load_definition_str(text).unwrap_err(),
            LoadError::Schema(_)
        ));
    }

    #[test]
    fn singular_eta_is_rejected() {
        let text = r#"
format-version = 1
kind = "potential_family"
dim = 2

[[eta]]
i = 1
j = 1
expr = "1"

[[eta]]
i = 1
j = 2
expr = "1"

[[eta]]
i = 2
j = 2
expr = "1"

[[h]]
i = 1
expr = "u1"

[[h]]
i = 2
expr = "u2"
"#;
        assert!(matches!(
            load_definition_str(text).unwrap_err(),
            LoadError::Validation(_)
        ));
    }

    #[test]
    fn unknown_pencil_members_are_rejected() {
        let text = r#"
format-version = 1
kind = "pencil"
members = "tensors"
dim = 1

[[g1]]
i = 1
j = 1
expr = "1"

[[g2]]
i = 1
j = 1
expr = "1"
"#;
        assert!(matches!(
            load_definition_str(text).unwrap_err(),
            LoadError::Schema(_)
        ));
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let text = r#"
format-version = 1
kind = "metric"
dim = 2

[[g]]
i = 3
j = 1
expr = "1"
"#;
        assert!(matches!(
            load_definition_str(text).unwrap_err(),
            LoadError::Dimension(_)
        ));
    }
}
