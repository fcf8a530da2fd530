//! Line-oriented text formats for polynomials, circuits, equation systems,
//! Max-3Lin instances, witness maps and reports.
//!
//! Every format starts with a `ring` line and a `vars` line. Lines starting
//! with `#` are comments, except for the few annotated headers each format
//! reads back (`# copies`, `# provenance`, `# flag`, `# recipe`, `# def`,
//! `# term`, `# seed`, `# witness`). Writers are canonical: parsing and
//! re-writing a written file reproduces it byte for byte.

use std::fmt::Write as _;
use std::str::FromStr;

use shiftforge_core::circuit::{Circuit, Gate};
use shiftforge_core::hn::{ReductionWitnessMap, SystemInput};
use shiftforge_core::max3lin::{GeneratedMax3Lin, Max3LinSystem, Row};
use shiftforge_core::poly::default_names;
use shiftforge_core::quadratize::{
    Definition, EquationSystem, ExtensionRecipe, Provenance, Tier, Variable,
};
use shiftforge_core::{Error as CoreError, RingElement, RingSpec, SparsePoly};

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

fn err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(FormatError { line, message: message.into() })
}

trait AtLine<T> {
    fn at(self, line: usize) -> Result<T>;
}

impl<T> AtLine<T> for std::result::Result<T, CoreError> {
    fn at(self, line: usize) -> Result<T> {
        self.map_err(|e| FormatError { line, message: e.to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Directive,
    Comment,
}

#[derive(Debug, Clone)]
struct Line<'a> {
    no: usize,
    kind: Kind,
    words: Vec<&'a str>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            out.push(Line { no, kind: Kind::Comment, words: rest.split_whitespace().collect() });
            continue;
        }
        let content = trimmed.split('#').next().unwrap_or("");
        out.push(Line { no, kind: Kind::Directive, words: content.split_whitespace().collect() });
    }
    out
}

fn parse_num<T: FromStr>(line: usize, what: &str, s: &str) -> Result<T> {
    s.parse().or_else(|_| err(line, format!("invalid {what} '{s}'")))
}

fn parse_ring(line: &Line<'_>) -> Result<RingSpec> {
    if line.words.first() != Some(&"ring") || line.words.len() < 2 {
        return err(line.no, "expected 'ring <spec>'");
    }
    let spec = line.words[1..].join(" ");
    RingSpec::from_str(&spec).at(line.no)
}

/// `vars <k> [names...]`, names optionally carrying a tier prefix.
fn parse_vars(line: &Line<'_>) -> Result<Vec<Variable>> {
    if line.words.first() != Some(&"vars") || line.words.len() < 2 {
        return err(line.no, "expected 'vars <count> [names]'");
    }
    let k: usize = parse_num(line.no, "variable count", line.words[1])?;
    let names = &line.words[2..];
    if names.is_empty() {
        return Ok(default_names(k).into_iter().map(|n| Variable::new(Tier::X, n)).collect());
    }
    if names.len() != k {
        return err(line.no, format!("{k} variables declared but {} names given", names.len()));
    }
    let mut vars = Vec::with_capacity(k);
    for name in names {
        let var = match name.split_once(':') {
            Some((tag, rest)) if tag.len() == 1 => {
                let tier = Tier::from_tag(tag.chars().next().unwrap_or(' '))
                    .ok_or_else(|| FormatError { line: line.no, message: format!("unknown tier '{tag}'") })?;
                Variable::new(tier, rest)
            }
            _ => Variable::new(Tier::X, *name),
        };
        if var.name.is_empty() {
            return err(line.no, "empty variable name");
        }
        vars.push(var);
    }
    Ok(vars)
}

fn write_vars(out: &mut String, vars: &[Variable]) {
    let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    let all_x = vars.iter().all(|v| v.tier == Tier::X);
    let _ = write!(out, "vars {}", vars.len());
    if all_x && names == default_names(vars.len()) {
        out.push('\n');
        return;
    }
    for v in vars {
        if all_x {
            let _ = write!(out, " {}", v.name);
        } else {
            let _ = write!(out, " {}:{}", v.tier.tag(), v.name);
        }
    }
    out.push('\n');
}

fn plain_vars(names: &[String]) -> Vec<Variable> {
    names.iter().map(|n| Variable::new(Tier::X, n.clone())).collect()
}

/// `term <coef> <e1> ... <ek>` (the leading keyword already checked).
fn parse_term(no: usize, words: &[&str], ring: RingSpec, k: usize) -> Result<(Vec<u32>, RingElement)> {
    if words.len() != k + 2 {
        return err(no, format!("term needs a coefficient and {k} exponents"));
    }
    let coef = RingElement::parse(ring, words[1]).at(no)?;
    let exps = words[2..]
        .iter()
        .map(|w| parse_num::<u32>(no, "exponent", w))
        .collect::<Result<Vec<_>>>()?;
    Ok((exps, coef))
}

/// Collects terms, rejecting repeated exponent vectors.
struct TermSink {
    ring: RingSpec,
    nvars: usize,
    seen: std::collections::BTreeSet<Vec<u32>>,
    terms: Vec<(Vec<u32>, RingElement)>,
}

impl TermSink {
    fn new(ring: RingSpec, nvars: usize) -> Self {
        TermSink { ring, nvars, seen: Default::default(), terms: Vec::new() }
    }

    fn push(&mut self, no: usize, words: &[&str]) -> Result<()> {
        let (e, c) = parse_term(no, words, self.ring, self.nvars)?;
        if !self.seen.insert(e.clone()) {
            return err(no, "duplicate exponent vector");
        }
        self.terms.push((e, c));
        Ok(())
    }

    fn finish(self, no: usize) -> Result<SparsePoly> {
        SparsePoly::from_terms(self.ring, self.nvars, self.terms).at(no)
    }
}

fn write_terms(out: &mut String, p: &SparsePoly, prefix: &str) {
    for (m, c) in p.terms() {
        let _ = write!(out, "{prefix}term {c}");
        for e in m.exponents() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
}

fn expect_header<'a>(ls: &'a [Line<'a>]) -> Result<(RingSpec, Vec<Variable>, &'a [Line<'a>])> {
    let mut directives = ls.iter().enumerate().filter(|(_, l)| l.kind == Kind::Directive);
    let (_, ring_line) = directives.next().ok_or(FormatError { line: 0, message: "missing 'ring' line".into() })?;
    let ring = parse_ring(ring_line)?;
    let (vi, vars_line) = directives
        .next()
        .ok_or(FormatError { line: ring_line.no, message: "missing 'vars' line".into() })?;
    let vars = parse_vars(vars_line)?;
    Ok((ring, vars, &ls[vi + 1..]))
}

fn end_line(ls: &[Line<'_>]) -> usize {
    ls.last().map_or(0, |l| l.no)
}

/// Dimensions of an amplified instance, kept in a `# copies` header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopiesHeader {
    pub d: usize,
    pub base_nvars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFile {
    pub poly: SparsePoly,
    pub copies: Option<CopiesHeader>,
}

fn parse_copies(line: &Line<'_>) -> Result<Option<CopiesHeader>> {
    if line.words.first() != Some(&"copies") {
        return Ok(None);
    }
    let mut d = None;
    let mut n = None;
    for w in &line.words[1..] {
        match w.split_once('=') {
            Some(("d", v)) => d = Some(parse_num(line.no, "copy count", v)?),
            Some(("base_nvars", v)) => n = Some(parse_num(line.no, "base variable count", v)?),
            _ => return err(line.no, format!("unexpected '{w}' in copies header")),
        }
    }
    match (d, n) {
        (Some(d), Some(base_nvars)) => Ok(Some(CopiesHeader { d, base_nvars })),
        _ => err(line.no, "copies header needs d= and base_nvars="),
    }
}

pub fn parse_poly_file(text: &str) -> Result<PolyFile> {
    let ls = lines(text);
    let mut copies = None;
    for l in ls.iter().filter(|l| l.kind == Kind::Comment) {
        if let Some(c) = parse_copies(l)? {
            copies = Some(c);
        }
    }
    let (ring, vars, rest) = expect_header(&ls)?;
    let mut sink = TermSink::new(ring, vars.len());
    for l in rest.iter().filter(|l| l.kind == Kind::Directive) {
        match l.words.first() {
            Some(&"term") => sink.push(l.no, &l.words)?,
            _ => return err(l.no, format!("unexpected '{}'", l.words.join(" "))),
        }
    }
    let names = vars.into_iter().map(|v| v.name).collect();
    let poly = sink.finish(end_line(&ls))?.with_names(names).at(end_line(&ls))?;
    if let Some(c) = copies {
        if c.d * c.base_nvars != poly.nvars() {
            return err(0, "copies header does not match the variable count");
        }
    }
    Ok(PolyFile { poly, copies })
}

pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    parse_poly_file(text).map(|f| f.poly)
}

pub fn write_poly_file(f: &PolyFile) -> String {
    let mut out = String::new();
    if let Some(c) = f.copies {
        let _ = writeln!(out, "# copies d={} base_nvars={}", c.d, c.base_nvars);
    }
    let _ = writeln!(out, "ring {}", f.poly.ring());
    write_vars(&mut out, &plain_vars(f.poly.names()));
    write_terms(&mut out, &f.poly, "");
    out
}

pub fn write_poly(p: &SparsePoly) -> String {
    write_poly_file(&PolyFile { poly: p.clone(), copies: None })
}

/// Circuit body lines: `node <id> ...` then `output <id>`.
fn parse_circuit_body(ring: RingSpec, nvars: usize, body: &[Line<'_>]) -> Result<Circuit> {
    let mut ids: Vec<u64> = Vec::new();
    let mut nodes = Vec::new();
    let mut output = None;
    let pos_of = |ids: &[u64], no: usize, w: &str| -> Result<usize> {
        let id: u64 = parse_num(no, "node id", w)?;
        ids.binary_search(&id).or_else(|_| err(no, format!("unknown node {id}")))
    };
    for l in body.iter().filter(|l| l.kind == Kind::Directive) {
        let w = &l.words;
        match w.first() {
            Some(&"node") if output.is_none() => {
                if w.len() < 3 {
                    return err(l.no, "node needs an id and a kind");
                }
                let id: u64 = parse_num(l.no, "node id", w[1])?;
                if ids.last().is_some_and(|&last| id <= last) {
                    return err(l.no, "node ids must be strictly increasing");
                }
                let gate = match (w[2], w.len()) {
                    ("input", 4) => Gate::Input(parse_num(l.no, "variable index", w[3])?),
                    ("const", 4) => Gate::Const(RingElement::parse(ring, w[3]).at(l.no)?),
                    ("mul", 5) => Gate::Mul(pos_of(&ids, l.no, w[3])?, pos_of(&ids, l.no, w[4])?),
                    ("add", n) if n >= 4 => {
                        Gate::Add(w[3..].iter().map(|x| pos_of(&ids, l.no, x)).collect::<Result<_>>()?)
                    }
                    _ => return err(l.no, format!("malformed node '{}'", w.join(" "))),
                };
                ids.push(id);
                nodes.push(gate);
            }
            Some(&"output") if output.is_none() && w.len() == 2 => {
                output = Some(pos_of(&ids, l.no, w[1])?);
            }
            _ => return err(l.no, format!("unexpected '{}'", w.join(" "))),
        }
    }
    let end = end_line(body);
    let output = output.ok_or(FormatError { line: end, message: "missing 'output' line".into() })?;
    Circuit::new(ring, nvars, nodes, output).at(end)
}

fn write_circuit_body(out: &mut String, c: &Circuit) {
    for (i, g) in c.nodes().iter().enumerate() {
        let _ = match g {
            Gate::Input(v) => writeln!(out, "node {i} input {v}"),
            Gate::Const(k) => writeln!(out, "node {i} const {k}"),
            Gate::Mul(a, b) => writeln!(out, "node {i} mul {a} {b}"),
            Gate::Add(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                writeln!(out, "node {i} add {}", parts.join(" "))
            }
        };
    }
    let _ = writeln!(out, "output {}", c.output());
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let ls = lines(text);
    let (ring, vars, rest) = expect_header(&ls)?;
    let names = vars.into_iter().map(|v| v.name).collect::<Vec<_>>();
    let n = names.len();
    parse_circuit_body(ring, n, rest)?.with_names(names).at(end_line(&ls))
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ring {}", c.ring());
    write_vars(&mut out, &plain_vars(c.names()));
    write_circuit_body(&mut out, c);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemBody {
    Sparse(EquationSystem),
    Circuits { circuits: Vec<Circuit>, names: Vec<String> },
}

/// An equation-system file with its optional annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub body: SystemBody,
    pub recipe: Option<ExtensionRecipe>,
    pub trivially_solvable: bool,
}

impl SystemFile {
    pub fn sparse(system: EquationSystem) -> Self {
        SystemFile { body: SystemBody::Sparse(system), recipe: None, trivially_solvable: false }
    }

    pub fn input(&self) -> SystemInput<'_> {
        match &self.body {
            SystemBody::Sparse(s) => SystemInput::Sparse(s),
            SystemBody::Circuits { circuits, names } => SystemInput::Circuits { circuits, names },
        }
    }

    pub fn ring(&self) -> RingSpec {
        match &self.body {
            SystemBody::Sparse(s) => s.ring(),
            SystemBody::Circuits { circuits, .. } => circuits.first().map_or(RingSpec::Integers, |c| c.ring()),
        }
    }

    pub fn provenance(&self) -> Option<Provenance> {
        match &self.body {
            SystemBody::Sparse(s) => s.provenance(),
            SystemBody::Circuits { .. } => None,
        }
    }
}

pub const TRIVIAL_FLAG: &str = "TRIVIALLY_SOLVABLE";

pub fn parse_system(text: &str) -> Result<SystemFile> {
    let ls = lines(text);
    let mut provenance = None;
    let mut trivially_solvable = false;
    let mut recipe_at: Option<usize> = None;
    for (i, l) in ls.iter().enumerate() {
        if l.kind != Kind::Comment {
            continue;
        }
        match l.words.as_slice() {
            ["provenance", p] => {
                provenance = Some(Provenance::parse(p).ok_or(FormatError {
                    line: l.no,
                    message: format!("unknown provenance '{p}'"),
                })?);
            }
            ["flag", f] if *f == TRIVIAL_FLAG => trivially_solvable = true,
            ["recipe"] => recipe_at = Some(i),
            _ => {}
        }
    }
    let (ring, vars, rest) = expect_header(&ls)?;
    let body_end = recipe_at.map_or(ls.len(), |i| i);
    let offset = ls.len() - rest.len();
    let rest = &ls[offset.min(body_end)..body_end];

    // split into `eq` blocks
    let mut blocks: Vec<(usize, Vec<Line<'_>>)> = Vec::new();
    for l in rest.iter().filter(|l| l.kind == Kind::Directive) {
        if l.words.as_slice() == ["eq"] {
            blocks.push((l.no, Vec::new()));
        } else if let Some((_, b)) = blocks.last_mut() {
            b.push(l.clone());
        } else {
            return err(l.no, "content before the first 'eq'");
        }
    }
    let is_circuit = |b: &[Line<'_>]| b.first().is_some_and(|l| l.words.first() == Some(&"node"));
    let circuit_blocks = blocks.iter().filter(|(_, b)| is_circuit(b)).count();

    let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    let body = if circuit_blocks > 0 {
        if circuit_blocks != blocks.len() {
            return err(end_line(&ls), "a system may not mix circuit and term equations");
        }
        if vars.iter().any(|v| v.tier != Tier::X) {
            return err(end_line(&ls), "circuit systems take original variables only");
        }
        let circuits = blocks
            .iter()
            .map(|(no, b)| parse_circuit_body(ring, names.len(), b)?.with_names(names.clone()).at(*no))
            .collect::<Result<Vec<_>>>()?;
        SystemBody::Circuits { circuits, names }
    } else {
        let mut eqs = Vec::with_capacity(blocks.len());
        for (no, b) in &blocks {
            let mut sink = TermSink::new(ring, vars.len());
            for l in b {
                match l.words.first() {
                    Some(&"term") => sink.push(l.no, &l.words)?,
                    _ => return err(l.no, format!("unexpected '{}'", l.words.join(" "))),
                }
            }
            eqs.push(sink.finish(*no)?);
        }
        let sys = EquationSystem::new(ring, vars.clone(), eqs).at(end_line(&ls))?.with_provenance(provenance);
        SystemBody::Sparse(sys)
    };

    let recipe = match recipe_at {
        None => None,
        Some(i) => Some(parse_recipe(&ls[i + 1..], ring, &vars)?),
    };
    Ok(SystemFile { body, recipe, trivially_solvable })
}

fn parse_recipe(ls: &[Line<'_>], ring: RingSpec, vars: &[Variable]) -> Result<ExtensionRecipe> {
    let n = vars.len();
    let x_count = vars.iter().take_while(|v| v.tier == Tier::X).count();
    let mut steps = Vec::new();
    let mut current: Option<(usize, usize, usize, TermSink)> = None;
    let close = |cur: Option<(usize, usize, usize, TermSink)>, steps: &mut Vec<Definition>| -> Result<()> {
        if let Some((no, target, want, sink)) = cur {
            if sink.terms.len() != want {
                return err(no, format!("definition announces {want} terms but has {}", sink.terms.len()));
            }
            steps.push(Definition { target, expr: sink.finish(no)? });
        }
        Ok(())
    };
    for l in ls {
        if l.kind == Kind::Directive {
            return err(l.no, "recipe block must consist of comment lines");
        }
        match l.words.first() {
            Some(&"def") if l.words.len() == 3 => {
                close(current.take(), &mut steps)?;
                let target = parse_num(l.no, "target", l.words[1])?;
                let want = parse_num(l.no, "term count", l.words[2])?;
                current = Some((l.no, target, want, TermSink::new(ring, n)));
            }
            Some(&"term") => match current.as_mut() {
                Some((_, _, _, sink)) => sink.push(l.no, &l.words)?,
                None => return err(l.no, "term outside a definition"),
            },
            _ => {}
        }
    }
    close(current, &mut steps)?;
    ExtensionRecipe::new(x_count, n, steps).at(end_line(ls))
}

pub fn write_system(f: &SystemFile) -> String {
    let mut out = String::new();
    if let Some(p) = f.provenance() {
        let _ = writeln!(out, "# provenance {}", p.as_str());
    }
    if f.trivially_solvable {
        let _ = writeln!(out, "# flag {TRIVIAL_FLAG}");
    }
    let _ = writeln!(out, "ring {}", f.ring());
    match &f.body {
        SystemBody::Sparse(s) => {
            write_vars(&mut out, s.vars());
            for eq in s.equations() {
                out.push_str("eq\n");
                write_terms(&mut out, eq, "");
            }
        }
        SystemBody::Circuits { circuits, names } => {
            write_vars(&mut out, &plain_vars(names));
            for c in circuits {
                out.push_str("eq\n");
                write_circuit_body(&mut out, c);
            }
        }
    }
    if let Some(r) = &f.recipe {
        out.push_str("# recipe\n");
        for step in r.steps() {
            let _ = writeln!(out, "# def {} {}", step.target, step.expr.sparsity());
            write_terms(&mut out, &step.expr, "# ");
        }
    }
    out
}

/// Bookkeeping echoed at the top of generated Max-3Lin files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenHeader {
    pub seed: u64,
    pub planted: Option<Vec<RingElement>>,
    pub noise: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Max3LinFile {
    pub system: Max3LinSystem,
    pub header: Option<GenHeader>,
}

impl From<GeneratedMax3Lin> for Max3LinFile {
    fn from(g: GeneratedMax3Lin) -> Self {
        Max3LinFile { system: g.system, header: Some(GenHeader { seed: g.seed, planted: g.planted, noise: g.noise }) }
    }
}

fn parse_gen_header(line: &Line<'_>, ring: RingSpec) -> Result<Option<GenHeader>> {
    let w = &line.words;
    if w.first() != Some(&"seed") {
        return Ok(None);
    }
    let bad = || FormatError { line: line.no, message: "expected '# seed <s> planted <x...> noise <k>'".into() };
    if w.len() < 6 || w[2] != "planted" || w[w.len() - 2] != "noise" {
        return Err(bad());
    }
    let seed = parse_num(line.no, "seed", w[1])?;
    let noise = parse_num(line.no, "noise count", w[w.len() - 1])?;
    let values = &w[3..w.len() - 2];
    let planted = if values == ["NONE"] {
        None
    } else {
        Some(values.iter().map(|v| RingElement::parse(ring, v).at(line.no)).collect::<Result<Vec<_>>>()?)
    };
    Ok(Some(GenHeader { seed, planted, noise }))
}

pub fn parse_max3lin(text: &str) -> Result<Max3LinFile> {
    let ls = lines(text);
    let mut directives = ls.iter().filter(|l| l.kind == Kind::Directive);
    let ring_line = directives.next().ok_or(FormatError { line: 0, message: "missing 'ring' line".into() })?;
    let ring = parse_ring(ring_line)?;
    let vars_line = directives.next().ok_or(FormatError { line: ring_line.no, message: "missing 'vars' line".into() })?;
    if vars_line.words.first() != Some(&"vars") || vars_line.words.len() != 2 {
        return err(vars_line.no, "expected 'vars <n>'");
    }
    let n: usize = parse_num(vars_line.no, "variable count", vars_line.words[1])?;
    let mut rows = Vec::new();
    for l in directives {
        let w = &l.words;
        if w.first() != Some(&"eq") || w.len() != 8 {
            return err(l.no, "expected 'eq <j1> <c1> <j2> <c2> <j3> <c3> <b>'");
        }
        let mut vars = [0usize; 3];
        let mut coeffs = [ring.zero(), ring.zero(), ring.zero()];
        for k in 0..3 {
            let j: usize = parse_num(l.no, "variable index", w[1 + 2 * k])?;
            if j == 0 {
                return err(l.no, "variable indices are 1-based");
            }
            vars[k] = j - 1;
            coeffs[k] = RingElement::parse(ring, w[2 + 2 * k]).at(l.no)?;
        }
        let b = RingElement::parse(ring, w[7]).at(l.no)?;
        rows.push(Row { vars, coeffs, b });
    }
    let system = Max3LinSystem::new(ring, n, rows).at(end_line(&ls))?;
    let mut header = None;
    for l in ls.iter().filter(|l| l.kind == Kind::Comment) {
        if let Some(h) = parse_gen_header(l, ring)? {
            header = Some(h);
        }
    }
    Ok(Max3LinFile { system, header })
}

pub fn write_max3lin(f: &Max3LinFile) -> String {
    let mut out = String::new();
    if let Some(h) = &f.header {
        let planted = match &h.planted {
            Some(x) => x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
            None => "NONE".into(),
        };
        let _ = writeln!(out, "# seed {} planted {planted} noise {}", h.seed, h.noise);
    }
    let l = &f.system;
    let _ = writeln!(out, "ring {}", l.ring());
    let _ = writeln!(out, "vars {}", l.n());
    for r in l.rows() {
        out.push_str("eq");
        for k in 0..3 {
            let _ = write!(out, " {} {}", r.vars[k] + 1, r.coeffs[k]);
        }
        let _ = writeln!(out, " {}", r.b);
    }
    out
}

pub fn parse_witness(text: &str) -> Result<ReductionWitnessMap> {
    let ls = lines(text);
    if !ls.iter().any(|l| l.kind == Kind::Comment && l.words.as_slice() == ["witness"]) {
        return err(1, "missing '# witness' header");
    }
    let mut gamma = None;
    let mut x0 = None;
    let mut xprime = None;
    let mut wvars = None;
    let mut g1 = None;
    for l in ls.iter().filter(|l| l.kind == Kind::Directive) {
        let idx = |ws: &[&str]| ws.iter().map(|w| parse_num::<usize>(l.no, "index", w)).collect::<Result<Vec<_>>>();
        match l.words.as_slice() {
            ["gamma", g] => gamma = Some(RingElement::parse(RingSpec::Integers, g).at(l.no)?),
            ["x0", i] => x0 = Some(parse_num(l.no, "index", i)?),
            ["xprime", rest @ ..] => xprime = Some(idx(rest)?),
            ["wvars", rest @ ..] => wvars = Some(idx(rest)?),
            ["g1", i] => g1 = Some(parse_num(l.no, "equation index", i)?),
            _ => return err(l.no, format!("unexpected '{}'", l.words.join(" "))),
        }
    }
    let end = end_line(&ls);
    let missing = |what: &str| FormatError { line: end, message: format!("witness lacks '{what}'") };
    Ok(ReductionWitnessMap {
        gamma: gamma.ok_or_else(|| missing("gamma"))?,
        x0: x0.ok_or_else(|| missing("x0"))?,
        xprime: xprime.ok_or_else(|| missing("xprime"))?,
        wvars: wvars.ok_or_else(|| missing("wvars"))?,
        g1: g1.ok_or_else(|| missing("g1"))?,
    })
}

pub fn write_witness(w: &ReductionWitnessMap) -> String {
    let join = |v: &[usize]| v.iter().map(|i| format!(" {i}")).collect::<String>();
    format!(
        "# witness\ngamma {}\nx0 {}\nxprime{}\nwvars{}\ng1 {}\n",
        w.gamma,
        w.x0,
        join(&w.xprime),
        join(&w.wvars),
        w.g1
    )
}

/// Comma-separated ring elements, as taken by `--by` and printed in reports.
pub fn format_vector(v: &[RingElement]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_vector(ring: RingSpec, s: &str) -> std::result::Result<Vec<RingElement>, CoreError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|w| RingElement::parse(ring, w.trim())).collect()
}

/// Ordered `key value` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Report> {
        let mut r = Report::new();
        for l in lines(text).into_iter().filter(|l| l.kind == Kind::Directive) {
            match l.words.split_first() {
                Some((k, v)) => {
                    r.push(k, v.join(" "));
                }
                None => return err(l.no, "empty report line"),
            }
        }
        Ok(r)
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} {v}")?;
        }
        Ok(())
    }
}
