//! `.sl` space files: TOML with polynomial strings, validated into library
//! objects, and a canonical serializer.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::actions::{FiniteGroup, GroupAction, HilbertMap, TorusAction};
use crate::error::Error;
use crate::fields::Derivation;
use crate::forms::DifferentialForm;
use crate::hamiltonian::SymplecticForm;
use crate::poly::{format_rational, parse_rational, Polynomial};
use crate::space::{Inequality, Piece, SpaceDef, StratumParam};
use crate::Rational;

/// A positioned problem in a space file (1-based line and column).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            return write!(f, "{}", self.message);
        }
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<Diagnostic>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.0.iter().map(Diagnostic::to_string).collect();
        f.write_str(&lines.join("\n"))
    }
}

impl std::error::Error for ParseErrors {}

/// Which variables a form is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormDomain {
    Space,
    Hilbert,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedForm {
    pub on: FormDomain,
    pub form: DifferentialForm,
}

/// A validated space file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceFile {
    pub name: Option<String>,
    pub space: SpaceDef,
    pub group: Option<GroupAction>,
    pub symplectic: Option<SymplecticForm>,
    pub fields: BTreeMap<String, Derivation>,
    pub forms: BTreeMap<String, NamedForm>,
    pub hilbert: Option<HilbertMap>,
}

type S = Spanned<String>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    space: Option<Spanned<RawSpace>>,
    #[serde(default)]
    strata: BTreeMap<String, RawStratum>,
    group: Option<Spanned<RawGroup>>,
    symplectic: Option<Spanned<RawSymplectic>>,
    #[serde(default)]
    field: BTreeMap<String, Spanned<RawField>>,
    #[serde(default)]
    form: BTreeMap<String, Spanned<RawForm>>,
    hilbert: Option<RawHilbert>,
    samples: Option<RawSamples>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    name: Option<String>,
    dim: Option<Spanned<i64>>,
    vars: Option<Spanned<Vec<S>>>,
    #[serde(default)]
    equations: Vec<S>,
    #[serde(default)]
    inequalities: Vec<S>,
    #[serde(default)]
    pieces: Vec<RawPiece>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    #[serde(default)]
    equations: Vec<S>,
    #[serde(default)]
    inequalities: Vec<S>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStratum {
    params: Vec<S>,
    map: Spanned<Vec<S>>,
    #[serde(default)]
    constraints: Vec<S>,
    stabilizer: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    kind: S,
    generators: Option<Vec<Vec<Vec<S>>>>,
    rank: Option<usize>,
    planes: Option<Vec<Vec<S>>>,
    weights: Option<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymplectic {
    standard: Option<bool>,
    matrix: Option<Vec<Vec<S>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    components: Option<Vec<S>>,
    expr: Option<S>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    on: Option<S>,
    degree: Option<usize>,
    expr: S,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHilbert {
    names: Spanned<Vec<S>>,
    generators: Spanned<Vec<S>>,
    #[serde(default)]
    relations: Vec<S>,
    #[serde(default)]
    inequalities: Vec<S>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    points: Vec<Spanned<Vec<S>>>,
}

/// Byte offset → (line, column) lookup.
struct Source<'a> {
    text: &'a str,
    diags: Vec<Diagnostic>,
}

impl<'a> Source<'a> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn at(&mut self, span: Range<usize>, message: impl Into<String>) {
        let (line, column) = self.position(span.start);
        self.diags.push(Diagnostic { line, column, message: message.into() });
    }

    /// Records a library error raised while parsing the string at `s`;
    /// expression columns are mapped into the file past the opening quote.
    fn lib(&mut self, s: &S, e: Error) {
        let (line, col) = self.position(s.span().start);
        let (column, message) = match e {
            Error::Parse { column, message } => (col + column, message),
            other => (col, other.to_string()),
        };
        self.diags.push(Diagnostic { line, column, message });
    }

    fn poly(&mut self, s: &S, vars: &[String]) -> Option<Polynomial> {
        Polynomial::parse(s.get_ref(), vars).map_err(|e| self.lib(s, e)).ok()
    }

    fn ineq(&mut self, s: &S, vars: &[String]) -> Option<Inequality> {
        Inequality::parse(s.get_ref(), vars).map_err(|e| self.lib(s, e)).ok()
    }

    fn rational(&mut self, s: &S) -> Option<Rational> {
        parse_rational(s.get_ref()).map_err(|e| self.lib(s, e)).ok()
    }

    fn polys(&mut self, list: &[S], vars: &[String]) -> Option<Vec<Polynomial>> {
        let out: Vec<Option<Polynomial>> = list.iter().map(|s| self.poly(s, vars)).collect();
        out.into_iter().collect()
    }

    fn ineqs(&mut self, list: &[S], vars: &[String]) -> Option<Vec<Inequality>> {
        let out: Vec<Option<Inequality>> = list.iter().map(|s| self.ineq(s, vars)).collect();
        out.into_iter().collect()
    }

    fn names(&mut self, list: &[S]) -> Option<Vec<String>> {
        let mut ok = true;
        let mut seen = Vec::new();
        for s in list {
            let v = s.get_ref();
            let valid = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                self.at(s.span(), format!("invalid variable name `{v}`"));
                ok = false;
            } else if seen.contains(v) {
                self.at(s.span(), format!("duplicate variable name `{v}`"));
                ok = false;
            }
            seen.push(v.clone());
        }
        ok.then_some(seen)
    }

    fn matrix(&mut self, rows: &[Vec<S>]) -> Option<Vec<Vec<Rational>>> {
        let out: Vec<Option<Vec<Rational>>> = rows
            .iter()
            .map(|r| r.iter().map(|s| self.rational(s)).collect::<Vec<_>>().into_iter().collect())
            .collect();
        out.into_iter().collect()
    }
}

impl SpaceFile {
    /// Parses and validates; all problems found are returned together.
    pub fn parse(text: &str) -> Result<Self, ParseErrors> {
        let raw: RawFile = match toml::from_str(text) {
            Ok(r) => r,
            Err(e) => {
                let src = Source { text, diags: vec![] };
                let (line, column) = e.span().map_or((1, 1), |s| src.position(s.start));
                let message = e.message().trim().to_string();
                return Err(ParseErrors(vec![Diagnostic { line, column, message }]));
            }
        };
        let mut src = Source { text, diags: Vec::new() };
        let out = build(&mut src, raw);
        match out {
            Some(f) if src.diags.is_empty() => Ok(f),
            _ => {
                if src.diags.is_empty() {
                    src.diags.push(Diagnostic { line: 1, column: 1, message: "invalid space file".into() });
                }
                Err(ParseErrors(src.diags))
            }
        }
    }

    pub fn read(path: &std::path::Path) -> Result<Self, ParseErrors> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ParseErrors(vec![Diagnostic { line: 0, column: 0, message: e.to_string() }])
        })?;
        Self::parse(&text)
    }

    pub fn var_names(&self) -> &[String] {
        self.space.var_names()
    }

    /// Looks up `[field.NAME]`, else parses `name` as a field expression.
    pub fn field(&self, name: &str) -> crate::error::Result<Derivation> {
        match self.fields.get(name) {
            Some(f) => Ok(f.clone()),
            None => Derivation::parse_expr(name, self.var_names()),
        }
    }

    /// Looks up `[form.NAME]`, else parses `name` as a form over the space
    /// variables (or the Hilbert target variables when `on` says so).
    pub fn form(&self, name: &str, on: FormDomain) -> crate::error::Result<NamedForm> {
        if let Some(f) = self.forms.get(name) {
            return Ok(f.clone());
        }
        let vars = match on {
            FormDomain::Space => self.var_names().to_vec(),
            FormDomain::Hilbert => self
                .hilbert
                .as_ref()
                .ok_or_else(|| Error::Invalid("no [hilbert] section".into()))?
                .target_names
                .clone(),
        };
        Ok(NamedForm { on, form: DifferentialForm::parse(name, &vars, None)? })
    }

    /// Canonical text: fixed section order, canonical polynomial printing.
    pub fn to_canonical(&self) -> String {
        let names = self.var_names();
        let mut out = String::new();
        out.push_str("[space]\n");
        if let Some(n) = &self.name {
            let _ = writeln!(out, "name = {}", quote(n));
        }
        let _ = writeln!(out, "dim = {}", self.space.nvars());
        let _ = writeln!(out, "vars = {}", list(names.iter().cloned()));
        let _ = writeln!(out, "equations = {}", list(self.space.equations().iter().map(|p| p.to_string_with(names))));
        let _ = writeln!(
            out,
            "inequalities = {}",
            list(self.space.inequalities().iter().map(|i| i.to_string_with(names)))
        );
        for p in self.space.pieces() {
            out.push_str("\n[[space.pieces]]\n");
            let _ = writeln!(out, "equations = {}", list(p.equations.iter().map(|e| e.to_string_with(names))));
            let _ = writeln!(out, "inequalities = {}", list(p.inequalities.iter().map(|i| i.to_string_with(names))));
        }
        for s in self.space.strata() {
            let _ = writeln!(out, "\n[strata.{}]", s.name);
            let _ = writeln!(out, "params = {}", list(s.params.iter().cloned()));
            let _ = writeln!(out, "map = {}", list(s.map.iter().map(|p| p.to_string_with(&s.params))));
            let _ = writeln!(
                out,
                "constraints = {}",
                list(s.constraints.iter().map(|c| c.to_string_with(&s.params)))
            );
            if let Some(st) = &s.stabilizer {
                let _ = writeln!(out, "stabilizer = {}", quote(st));
            }
        }
        match &self.group {
            Some(GroupAction::Finite(g)) => {
                out.push_str("\n[group]\nkind = \"finite\"\n");
                let gens: Vec<String> = g.generators().iter().map(|m| matrix_str(m)).collect();
                let _ = writeln!(out, "generators = [{}]", gens.join(", "));
            }
            Some(GroupAction::Torus(t)) => {
                out.push_str("\n[group]\nkind = \"torus\"\n");
                let _ = writeln!(out, "rank = {}", t.rank());
                let planes: Vec<String> =
                    t.planes().iter().map(|&(a, b)| list([names[a].clone(), names[b].clone()].into_iter())).collect();
                let _ = writeln!(out, "planes = [{}]", planes.join(", "));
                let weights: Vec<String> = t
                    .weights()
                    .iter()
                    .map(|w| format!("[{}]", w.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
                    .collect();
                let _ = writeln!(out, "weights = [{}]", weights.join(", "));
            }
            None => {}
        }
        if let Some(w) = &self.symplectic {
            out.push_str("\n[symplectic]\n");
            if w.is_standard() {
                out.push_str("standard = true\n");
            } else {
                let _ = writeln!(out, "matrix = {}", matrix_str(w.matrix()));
            }
        }
        for (name, f) in &self.fields {
            let _ = writeln!(out, "\n[field.{name}]");
            let _ = writeln!(out, "components = {}", list(f.components().iter().map(|c| c.to_string_with(names))));
        }
        for (name, f) in &self.forms {
            let _ = writeln!(out, "\n[form.{name}]");
            let vars = match f.on {
                FormDomain::Space => names.to_vec(),
                FormDomain::Hilbert => self.hilbert.as_ref().expect("validated").target_names.clone(),
            };
            let on = match f.on {
                FormDomain::Space => "space",
                FormDomain::Hilbert => "hilbert",
            };
            let _ = writeln!(out, "on = {}", quote(on));
            let _ = writeln!(out, "degree = {}", f.form.degree());
            let _ = writeln!(out, "expr = {}", quote(&f.form.to_string_with(&vars)));
        }
        if let Some(h) = &self.hilbert {
            out.push_str("\n[hilbert]\n");
            let t = &h.target_names;
            let _ = writeln!(out, "names = {}", list(t.iter().cloned()));
            let _ = writeln!(out, "generators = {}", list(h.generators.iter().map(|g| g.to_string_with(names))));
            let _ = writeln!(out, "relations = {}", list(h.relations.iter().map(|r| r.to_string_with(t))));
            let _ = writeln!(out, "inequalities = {}", list(h.inequalities.iter().map(|i| i.to_string_with(t))));
        }
        if !self.space.samples().is_empty() {
            out.push_str("\n[samples]\npoints = [\n");
            for p in self.space.samples() {
                let _ = writeln!(out, "    {},", list(p.iter().map(format_rational)));
            }
            out.push_str("]\n");
        }
        out
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn list(items: impl Iterator<Item = String>) -> String {
    format!("[{}]", items.map(|s| quote(&s)).collect::<Vec<_>>().join(", "))
}

fn matrix_str(m: &[Vec<Rational>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| list(r.iter().map(format_rational))).collect();
    format!("[{}]", rows.join(", "))
}

fn build(src: &mut Source, raw: RawFile) -> Option<SpaceFile> {
    let Some(space_sec) = raw.space else {
        src.at(0..0, "[space] section required");
        return None;
    };
    let span = space_sec.span();
    let rs = space_sec.into_inner();
    let Some(dim) = rs.dim else {
        src.at(span, "ambient dim required");
        return None;
    };
    if *dim.get_ref() < 1 {
        src.at(dim.span(), "dim must be positive");
        return None;
    }
    let n = *dim.get_ref() as usize;
    let names = match &rs.vars {
        Some(v) => {
            let names = src.names(v.get_ref())?;
            if names.len() != n {
                src.at(v.span(), format!("dim is {n} but {} variable names are given", names.len()));
                return None;
            }
            names
        }
        None => crate::poly::default_names(n),
    };

    let eqs = src.polys(&rs.equations, &names);
    let ineqs = src.ineqs(&rs.inequalities, &names);
    let mut space = match (eqs, ineqs) {
        (Some(e), Some(i)) => SpaceDef::new(names.clone(), e, i).map_err(|e| src.at(span.clone(), e.to_string())).ok(),
        _ => None,
    };
    for p in &rs.pieces {
        let e = src.polys(&p.equations, &names);
        let i = src.ineqs(&p.inequalities, &names);
        if let (Some(sp), Some(equations), Some(inequalities)) = (space.take(), e, i) {
            space = sp.with_piece(Piece { equations, inequalities }).map_err(|e| src.at(span.clone(), e.to_string())).ok();
        }
    }
    for (sname, st) in raw.strata {
        let Some(params) = src.names(&st.params) else { continue };
        let map = src.polys(st.map.get_ref(), &params);
        let constraints = src.ineqs(&st.constraints, &params);
        if let (Some(map), Some(constraints)) = (map, constraints) {
            let param = StratumParam { name: sname, params, map, constraints, stabilizer: st.stabilizer };
            if let Some(sp) = space.take() {
                space = match sp.clone().with_stratum(param) {
                    Ok(s) => Some(s),
                    Err(e) => {
                        src.at(st.map.span(), e.to_string());
                        Some(sp)
                    }
                };
            }
        }
    }

    let group = raw.group.and_then(|g| {
        let span = g.span();
        build_group(src, g.into_inner(), span, &names)
    });
    if let (Some(g), Some(sp)) = (&group, &space) {
        if let Err(e) = g.check_space_invariant(sp) {
            src.at(span.clone(), e.to_string());
        }
    }

    let symplectic = raw.symplectic.and_then(|w| {
        let span = w.span();
        let w = w.into_inner();
        let out = match (w.standard, w.matrix) {
            (Some(true), None) => SymplecticForm::standard(n),
            (_, Some(m)) => {
                let m = src.matrix(&m)?;
                SymplecticForm::new(m)
            }
            _ => Err(Error::Invalid("[symplectic] needs `standard = true` or `matrix`".into())),
        };
        out.map_err(|e| src.at(span, e.to_string())).ok()
    });
    if let (Some(w), Some(GroupAction::Finite(g))) = (&symplectic, &group) {
        for m in g.generators() {
            let mt = crate::linalg::transpose(m);
            if crate::linalg::mat_mul(&crate::linalg::mat_mul(&mt, w.matrix()), m) != *w.matrix() {
                src.at(span.clone(), "group does not preserve the symplectic form");
            }
        }
    }

    let mut fields = BTreeMap::new();
    for (fname, f) in raw.field {
        let fspan = f.span();
        let f = f.into_inner();
        let d = match (f.components, f.expr) {
            (Some(c), None) => {
                if c.len() != n {
                    src.at(fspan, format!("field `{fname}` has {} components, expected {n}", c.len()));
                    continue;
                }
                src.polys(&c, &names).and_then(|c| Derivation::new(c).ok())
            }
            (None, Some(e)) => Derivation::parse_expr(e.get_ref(), &names).map_err(|err| src.lib(&e, err)).ok(),
            _ => {
                src.at(fspan, format!("field `{fname}` needs exactly one of `components` or `expr`"));
                None
            }
        };
        if let Some(d) = d {
            fields.insert(fname, d);
        }
    }

    let hilbert = raw.hilbert.and_then(|h| {
        let targets = src.names(h.names.get_ref())?;
        let gens = src.polys(h.generators.get_ref(), &names)?;
        let rels = src.polys(&h.relations, &targets)?;
        let ineqs = src.ineqs(&h.inequalities, &targets)?;
        if gens.len() != targets.len() {
            src.at(h.names.span(), format!("{} target names for {} generators", targets.len(), gens.len()));
            return None;
        }
        HilbertMap::new(gens, targets, rels, ineqs).map_err(|e| src.at(h.generators.span(), e.to_string())).ok()
    });

    let mut forms = BTreeMap::new();
    for (fname, f) in raw.form {
        let fspan = f.span();
        let f = f.into_inner();
        let on = match f.on.as_ref().map(|s| s.get_ref().as_str()) {
            None | Some("space") => FormDomain::Space,
            Some("hilbert") => FormDomain::Hilbert,
            Some(other) => {
                src.at(f.on.as_ref().expect("some").span(), format!("unknown form domain `{other}`"));
                continue;
            }
        };
        let vars = match on {
            FormDomain::Space => names.clone(),
            FormDomain::Hilbert => match &hilbert {
                Some(h) => h.target_names.clone(),
                None => {
                    src.at(fspan, format!("form `{fname}` refers to [hilbert], which is missing"));
                    continue;
                }
            },
        };
        match DifferentialForm::parse(f.expr.get_ref(), &vars, f.degree) {
            Ok(form) => {
                forms.insert(fname, NamedForm { on, form });
            }
            Err(e) => src.lib(&f.expr, e),
        }
    }

    if let Some(samples) = raw.samples {
        let mut pts = Vec::new();
        for p in &samples.points {
            if p.get_ref().len() != n {
                src.at(p.span(), format!("sample has {} coordinates, expected {n}", p.get_ref().len()));
                continue;
            }
            let coords: Option<Vec<Rational>> =
                p.get_ref().iter().map(|s| src.rational(s)).collect::<Vec<_>>().into_iter().collect();
            if let (Some(c), Some(sp)) = (coords, &space) {
                match sp.contains(&c) {
                    Ok(true) => pts.push(c),
                    Ok(false) => src.at(p.span(), "sample is not on the space"),
                    Err(e) => src.at(p.span(), e.to_string()),
                }
            }
        }
        space = space.and_then(|s| s.with_samples(pts).ok());
    }

    Some(SpaceFile { name: rs.name, space: space?, group, symplectic, fields, forms, hilbert })
}

fn build_group(src: &mut Source, g: RawGroup, span: Range<usize>, names: &[String]) -> Option<GroupAction> {
    let n = names.len();
    match g.kind.get_ref().as_str() {
        "antipodal" => Some(GroupAction::Finite(FiniteGroup::antipodal(n))),
        "sign-flips" => Some(GroupAction::Finite(FiniteGroup::sign_flips(n))),
        "trivial" => Some(GroupAction::Finite(FiniteGroup::trivial(n))),
        "finite" => {
            let Some(gens) = g.generators else {
                src.at(span, "finite group needs `generators`");
                return None;
            };
            let mats: Option<Vec<_>> = gens.iter().map(|m| src.matrix(m)).collect::<Vec<_>>().into_iter().collect();
            FiniteGroup::generate(n, mats?).map(GroupAction::Finite).map_err(|e| src.at(span, e.to_string())).ok()
        }
        "torus" => {
            let (Some(rank), Some(planes), Some(weights)) = (g.rank, g.planes, g.weights) else {
                src.at(span, "torus needs `rank`, `planes` and `weights`");
                return None;
            };
            let mut idx = Vec::new();
            for p in &planes {
                let found: Vec<Option<usize>> = p
                    .iter()
                    .map(|v| {
                        let i = names.iter().position(|x| x == v.get_ref());
                        if i.is_none() {
                            src.at(v.span(), format!("unknown variable {}", v.get_ref()));
                        }
                        i
                    })
                    .collect();
                match found.as_slice() {
                    [Some(a), Some(b)] => idx.push((*a, *b)),
                    [_, _] => return None,
                    _ => {
                        src.at(span, "each torus plane names two variables");
                        return None;
                    }
                }
            }
            TorusAction::new(n, rank, idx, weights).map(GroupAction::Torus).map_err(|e| src.at(span, e.to_string())).ok()
        }
        other => {
            src.at(g.kind.span(), format!("unknown group kind `{other}`"));
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONE: &str = r#"
[space]
name = "plane with antipodal action"
dim = 2
vars = ["x", "y"]

[strata.principal]
params = ["a", "b"]
map = ["a", "b"]
constraints = ["a^2 + b^2 > 0"]

[group]
kind = "antipodal"

[symplectic]
standard = true

[hilbert]
names = ["s", "t", "u"]
generators = ["x^2 - y^2", "2*x*y", "x^2 + y^2"]
relations = ["s^2 + t^2 - u^2"]
inequalities = ["u >= 0"]

[form.sigma]
on = "hilbert"
expr = "1/(4*u) ds^dt"

[form.area]
expr = "dx^dy"

[field.rot]
expr = "-y*d_x + x*d_y"

[samples]
points = [["1", "0"], ["1/2", "-3"]]
"#;

    #[test]
    fn cone_file_round_trips() {
        let f = SpaceFile::parse(CONE).unwrap();
        assert_eq!(f.forms["sigma"].on, FormDomain::Hilbert);
        assert_eq!(f.fields["rot"], Derivation::rotation(2, 0, 1));
        let canon = f.to_canonical();
        let g = SpaceFile::parse(&canon).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_canonical(), canon);
    }

    #[test]
    fn unknown_variable_is_positioned() {
        let text = "[space]\ndim = 2\nvars = [\"x\", \"y\"]\nequations = [\"x^2 + z\"]\n";
        let e = SpaceFile::parse(text).unwrap_err();
        assert_eq!(e.0, vec![Diagnostic { line: 4, column: 21, message: "unknown variable z".into() }]);
    }

    #[test]
    fn empty_space_section() {
        let e = SpaceFile::parse("[space]\n").unwrap_err();
        assert_eq!(e.0[0].message, "ambient dim required");
        assert_eq!(e.0[0].line, 1);
    }

    #[test]
    fn collects_several_errors() {
        let text = "[space]\ndim = 2\nvars = [\"x\", \"y\"]\nequations = [\"x^\", \"q\"]\n[samples]\npoints = [[\"1/0\", \"0\"]]\n";
        let e = SpaceFile::parse(text).unwrap_err();
        assert_eq!(e.0.len(), 3, "{e}");
    }

    #[test]
    fn dangling_references() {
        let text = "[space]\ndim = 2\n[form.a]\non = \"hilbert\"\nexpr = \"ds\"\n";
        let e = SpaceFile::parse(text).unwrap_err();
        assert!(e.0[0].message.contains("missing"));
        let text = "[space]\ndim = 2\n[group]\nkind = \"torus\"\nrank = 1\nplanes = [[\"x1\", \"w\"]]\nweights = [[1]]\n";
        let e = SpaceFile::parse(text).unwrap_err();
        assert_eq!(e.0[0].message, "unknown variable w");
        assert!(SpaceFile::parse("[space]\ndim = 2\nbogus = 1\n").is_err());
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let e = SpaceFile::parse("[space]\ndim = = 2\n").unwrap_err();
        assert_eq!(e.0[0].line, 2);
    }

    #[test]
    fn non_invariant_space_is_rejected() {
        let text = "[space]\ndim = 2\nvars = [\"x\", \"y\"]\nequations = [\"x - 1\"]\n[group]\nkind = \"antipodal\"\n";
        assert!(SpaceFile::parse(text).is_err());
    }
}
