//! Command line front end.  A small line-oriented problem format describes
//! the ring, the generating sequence, and an optional coefficient module;
//! one subcommand per verification task turns the library reports into
//! sorted key-value records, each qualified by the window, level count, and
//! lag it was computed under.
//!
//! Exit codes: 0 the check is certified or passes, 1 a counterexample was
//! verified inside the window (the records carry a re-checkable
//! certificate), 2 the window was too small to decide, 3 malformed input.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalg::{
    adjunction_check, contratensor, cotensor, universal_property_checks, FinDimBicomodule,
    FinDimCoalgebra, FinDimComodule, FinDimContramodule,
};
use crate::duality::{
    dedualizing_check, derived_completion_findim, derived_completion_graded, flat_base_change_check,
    h1_pair_witnesses, local_cohomology_findim, local_cohomology_table, mgm_duality_verify_contra,
    mgm_duality_verify_torsion, radical_invariance_suite, weak_proregularity_check, WprReport,
};
use crate::linalg::{DenseMatrix, Field, Scalar};
use crate::module::{FinDimModule, GradedFPModule};
use crate::ring::{GeneratingSequence, HomogeneousElement, Monomial, MonomialQuotientRing};
use crate::tower::{ProZeroVerdict, Verdict};

// ---------------------------------------------------------------------------
// result records

/// One machine-readable result cell.  Lines are space separated key=value
/// pairs; absent coordinates are omitted, and the trailing window/levels/lag
/// keys state what the value was computed under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRecord {
    pub task: String,
    pub i: Option<i64>,
    pub d: Option<i64>,
    pub level: Option<i64>,
    pub value: String,
    pub payload: Vec<(String, String)>,
    pub window: Option<(i64, i64)>,
    pub levels: Option<u32>,
    pub lag: Option<usize>,
}

impl ResultRecord {
    fn new(task: &str, value: impl Into<String>) -> Self {
        ResultRecord {
            task: task.to_string(),
            i: None,
            d: None,
            level: None,
            value: value.into(),
            payload: Vec::new(),
            window: None,
            levels: None,
            lag: None,
        }
    }

    fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.payload.push((key.to_string(), value.into()));
        self
    }

    pub fn to_line(&self) -> String {
        let mut s = format!("task={}", self.task);
        if let Some(i) = self.i {
            let _ = write!(s, " i={}", i);
        }
        if let Some(d) = self.d {
            let _ = write!(s, " d={}", d);
        }
        if let Some(l) = self.level {
            let _ = write!(s, " level={}", l);
        }
        let _ = write!(s, " value={}", self.value);
        for (k, v) in &self.payload {
            let _ = write!(s, " {}={}", k, v);
        }
        if let Some((lo, hi)) = self.window {
            let _ = write!(s, " window={}:{}", lo, hi);
        }
        if let Some(n) = self.levels {
            let _ = write!(s, " levels={}", n);
        }
        if let Some(l) = self.lag {
            let _ = write!(s, " lag={}", l);
        }
        s
    }

    pub fn parse_line(line: &str) -> Result<ResultRecord, String> {
        let mut rec = ResultRecord::new("", "");
        let mut saw_task = false;
        let mut saw_value = false;
        for tok in line.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| format!("malformed record token '{}'", tok))?;
            let num = |v: &str| v.parse::<i64>().map_err(|_| format!("bad number '{}'", v));
            match k {
                "task" => {
                    rec.task = v.to_string();
                    saw_task = true;
                }
                "i" => rec.i = Some(num(v)?),
                "d" => rec.d = Some(num(v)?),
                "level" => rec.level = Some(num(v)?),
                "value" => {
                    rec.value = v.to_string();
                    saw_value = true;
                }
                "window" => {
                    rec.window = Some(parse_window_value(v)?);
                }
                "levels" => {
                    rec.levels = Some(v.parse().map_err(|_| format!("bad levels '{}'", v))?)
                }
                "lag" => rec.lag = Some(v.parse().map_err(|_| format!("bad lag '{}'", v))?),
                _ => rec.payload.push((k.to_string(), v.to_string())),
            }
        }
        if !saw_task || !saw_value {
            return Err("record needs task= and value=".into());
        }
        Ok(rec)
    }
}

fn sort_records(records: &mut [ResultRecord]) {
    records.sort_by(|a, b| {
        (&a.task, a.i, a.d, a.level).cmp(&(&b.task, b.i, b.d, b.level))
    });
}

fn scalar_list(v: &[Scalar]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

fn usize_list(v: &[usize]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn u32_list(v: &[u32]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn dim_or(v: Option<usize>, fallback: &str) -> String {
    match v {
        Some(n) => n.to_string(),
        None => fallback.to_string(),
    }
}

// ---------------------------------------------------------------------------
// problem files

/// An input diagnostic pinned to a line and column of the problem file.
#[derive(Debug, Clone)]
pub struct SpecError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

fn spec_err(line: usize, col: usize, msg: impl Into<String>) -> SpecError {
    SpecError { line, col, msg: msg.into() }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    value: String,
    value_col: usize,
}

#[derive(Debug, Clone)]
struct Section {
    line: usize,
    entries: Vec<(String, Entry)>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries
            .iter()
            .position(|(k, _)| k == key)
            .map(|i| self.entries.remove(i).1)
    }

    fn reject_leftover(&self, name: &str) -> Result<(), SpecError> {
        if let Some((k, e)) = self.entries.first() {
            return Err(spec_err(e.line, 1, format!("unknown key '{}' in [{}]", k, name)));
        }
        Ok(())
    }
}

const SECTIONS: [&str; 5] = ["ring", "sequence", "module", "params", "target"];

fn scan_sections(text: &str) -> Result<BTreeMap<String, Section>, SpecError> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('[') {
            let name = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| spec_err(line_no, 1, "malformed section header"))?
                .trim()
                .to_string();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(spec_err(line_no, 1, format!("unknown section [{}]", name)));
            }
            if out.contains_key(&name) {
                return Err(spec_err(line_no, 1, format!("duplicate section [{}]", name)));
            }
            out.insert(name.clone(), Section { line: line_no, entries: Vec::new() });
            current = Some(name);
            continue;
        }
        let Some(sec) = &current else {
            return Err(spec_err(line_no, 1, "expected a [section] header before keys"));
        };
        let Some((lhs, rhs)) = raw.split_once('=') else {
            return Err(spec_err(line_no, 1, "expected key = value"));
        };
        let key = lhs.split_whitespace().collect::<Vec<_>>().join(" ");
        if key.is_empty() {
            return Err(spec_err(line_no, 1, "missing key before '='"));
        }
        let before = lhs.chars().count() + 1;
        let lead = rhs.chars().take_while(|c| c.is_whitespace()).count();
        let entry = Entry {
            line: line_no,
            value: rhs.trim().to_string(),
            value_col: before + lead + 1,
        };
        let section = out.get_mut(sec).unwrap();
        if section.entries.iter().any(|(k, _)| *k == key) {
            return Err(spec_err(line_no, 1, format!("duplicate key '{}'", key)));
        }
        section.entries.push((key, entry));
    }
    Ok(out)
}

/// Comma-separated pieces of a value, with the char offset of each piece.
fn split_csv(value: &str) -> Vec<(usize, String)> {
    let chars: Vec<char> = value.chars().collect();
    let mut pieces = Vec::new();
    let mut start = 0usize;
    for i in 0..=chars.len() {
        if i == chars.len() || chars[i] == ',' {
            let mut s = start;
            while s < i && chars[s].is_whitespace() {
                s += 1;
            }
            let mut e = i;
            while e > s && chars[e - 1].is_whitespace() {
                e -= 1;
            }
            pieces.push((s, chars[s..e].iter().collect()));
            start = i + 1;
        }
    }
    pieces
}

// ---------------------------------------------------------------------------
// polynomial parsing

struct PolyParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    vars: &'a BTreeMap<String, usize>,
    nvars: usize,
}

impl<'a> PolyParser<'a> {
    fn error_at(&self, pos: usize, msg: impl Into<String>) -> SpecError {
        spec_err(self.line, self.col0 + pos, msg)
    }

    fn error(&self, msg: impl Into<String>) -> SpecError {
        self.error_at(self.pos, msg)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<i64, SpecError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<i64>()
            .map_err(|_| self.error_at(start, format!("integer '{}' out of range", text)))
    }

    fn var_power(&mut self) -> Result<(usize, u32), SpecError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        let Some(&i) = self.vars.get(&name) else {
            return Err(self.error_at(start, format!("unknown variable '{}'", name)));
        };
        self.skip_ws();
        let mut exp = 1u32;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some('-') {
                return Err(self.error("exponents must be nonnegative integers"));
            }
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return Err(self.error("expected an integer exponent after '^'"));
            }
            let e = self.integer()?;
            exp = u32::try_from(e).map_err(|_| self.error("exponent out of range"))?;
        }
        Ok((i, exp))
    }

    fn term(&mut self) -> Result<(i64, Monomial), SpecError> {
        let mut coeff = 1i64;
        let mut mono = vec![0u32; self.nvars];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    coeff = coeff
                        .checked_mul(n)
                        .ok_or_else(|| self.error("coefficient out of range"))?;
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let (i, e) = self.var_power()?;
                    mono[i] = mono[i]
                        .checked_add(e)
                        .ok_or_else(|| self.error("exponent out of range"))?;
                }
                _ => return Err(self.error("expected a coefficient or variable")),
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, mono))
    }

    fn expr(&mut self) -> Result<BTreeMap<Monomial, i64>, SpecError> {
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        self.skip_ws();
        let mut sign = 1i64;
        match self.peek() {
            Some('-') => {
                sign = -1;
                self.pos += 1;
            }
            Some('+') => {
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let (c, m) = self.term()?;
            *acc.entry(m).or_insert(0) += sign * c;
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                None => break,
                Some(ch) => return Err(self.error(format!("unexpected character '{}'", ch))),
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(acc)
    }
}

/// Parses an integer-coefficient polynomial in the named variables; errors
/// carry the file position of the offending character.
fn parse_polynomial(
    text: &str,
    line: usize,
    col0: usize,
    vars: &BTreeMap<String, usize>,
) -> Result<BTreeMap<Monomial, i64>, SpecError> {
    let nvars = vars.len();
    let mut p = PolyParser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        col0,
        vars,
        nvars,
    };
    p.expr()
}

fn element_from_poly(
    ring: &Arc<MonomialQuotientRing>,
    poly: &BTreeMap<Monomial, i64>,
    line: usize,
    col: usize,
) -> Result<HomogeneousElement, SpecError> {
    if poly.is_empty() {
        return Err(spec_err(line, col, "polynomial is zero"));
    }
    let mut degree = None;
    for m in poly.keys() {
        let d = ring.monomial_degree(m);
        match degree {
            None => degree = Some(d),
            Some(prev) if prev != d => {
                return Err(spec_err(
                    line,
                    col,
                    format!("polynomial is not homogeneous (degrees {} and {})", prev, d),
                ));
            }
            _ => {}
        }
    }
    let mut e = HomogeneousElement::zero(ring, degree.unwrap());
    for (m, c) in poly {
        let t = HomogeneousElement::term(ring, ring.field.from_i64(*c), m);
        e = e.add(&t).expect("terms share one degree");
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// typed sections

#[derive(Debug)]
pub enum ModuleSpec {
    GradedFree(GradedFPModule),
    FinDim(FinDimModule),
}

#[derive(Debug, Default)]
pub struct Params {
    pub window: Option<(i64, i64)>,
    pub levels: Option<u32>,
    pub lag: Option<usize>,
    pub level: Option<u32>,
    pub seed: Option<u64>,
    pub powers: Option<Vec<Vec<u32>>>,
    pub images: Option<Vec<String>>,
}

#[derive(Debug)]
pub struct ProblemSpec {
    pub ring: Arc<MonomialQuotientRing>,
    pub sequence: GeneratingSequence,
    pub module: Option<ModuleSpec>,
    pub target: Option<Arc<MonomialQuotientRing>>,
    pub params: Params,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_field_value(s: &str) -> Result<Field, String> {
    if s == "q" {
        return Ok(Field::Q);
    }
    if let Some(p) = s.strip_prefix("p:") {
        let p: u64 = p.parse().map_err(|_| format!("bad prime '{}'", p))?;
        if !is_prime(p) {
            return Err(format!("{} is not prime", p));
        }
        return Ok(Field::Fp(p));
    }
    Err(format!("field must be 'q' or 'p:PRIME', got '{}'", s))
}

fn parse_window_value(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("window must be LO:HI, got '{}'", s))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad window bound '{}'", lo))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad window bound '{}'", hi))?;
    if lo > hi {
        return Err(format!("empty window {}:{}", lo, hi));
    }
    Ok((lo, hi))
}

fn entry_value<T>(e: &Entry, r: Result<T, String>) -> Result<T, SpecError> {
    r.map_err(|msg| spec_err(e.line, e.value_col, msg))
}

fn var_map(ring: &MonomialQuotientRing) -> BTreeMap<String, usize> {
    ring.var_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect()
}

fn parse_ring_section(
    sec: &mut Section,
    name: &str,
    override_field: Option<Field>,
) -> Result<Arc<MonomialQuotientRing>, SpecError> {
    let field = match (override_field, sec.take("field")) {
        (Some(f), _) => f,
        (None, Some(e)) => entry_value(&e, parse_field_value(&e.value))?,
        (None, None) => Field::Q,
    };
    let vars_entry = sec
        .take("variables")
        .ok_or_else(|| spec_err(sec.line, 1, format!("[{}] requires a 'variables' key", name)))?;
    let mut var_names: Vec<String> = Vec::new();
    for v in vars_entry.value.split_whitespace() {
        let mut chars = v.chars();
        let head_ok = matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_');
        if !head_ok || !chars.all(|c| c.is_alphanumeric() || c == '_') {
            return Err(spec_err(
                vars_entry.line,
                vars_entry.value_col,
                format!("invalid variable name '{}'", v),
            ));
        }
        if var_names.iter().any(|n| n == v) {
            return Err(spec_err(
                vars_entry.line,
                vars_entry.value_col,
                format!("duplicate variable '{}'", v),
            ));
        }
        var_names.push(v.to_string());
    }
    if var_names.is_empty() {
        return Err(spec_err(vars_entry.line, vars_entry.value_col, "no variables listed"));
    }
    let weights: Vec<u32> = match sec.take("weights") {
        None => vec![1; var_names.len()],
        Some(e) => {
            let mut ws = Vec::new();
            for w in e.value.split_whitespace() {
                let w: u32 = w
                    .parse()
                    .ok()
                    .filter(|&w| w > 0)
                    .ok_or_else(|| {
                        spec_err(e.line, e.value_col, format!("weights must be positive integers, got '{}'", w))
                    })?;
                ws.push(w);
            }
            if ws.len() != var_names.len() {
                return Err(spec_err(e.line, e.value_col, "one weight per variable"));
            }
            ws
        }
    };
    let vmap: BTreeMap<String, usize> = var_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let mut relations: Vec<Monomial> = Vec::new();
    if let Some(e) = sec.take("ideal") {
        for (off, piece) in split_csv(&e.value) {
            let col = e.value_col + off;
            if piece.is_empty() {
                return Err(spec_err(e.line, col, "empty ideal entry"));
            }
            let poly = parse_polynomial(&piece, e.line, col, &vmap)?;
            if poly.len() != 1 || *poly.values().next().unwrap() != 1 {
                return Err(spec_err(e.line, col, "ideal generators must be monomials"));
            }
            relations.push(poly.keys().next().unwrap().clone());
        }
    }
    let line = sec.line;
    sec.reject_leftover(name)?;
    MonomialQuotientRing::new(field, var_names, weights, relations)
        .map_err(|e| spec_err(line, 1, e.to_string()))
}

fn parse_sequence_section(
    sec: &mut Section,
    ring: &Arc<MonomialQuotientRing>,
) -> Result<GeneratingSequence, SpecError> {
    let e = sec
        .take("elements")
        .ok_or_else(|| spec_err(sec.line, 1, "[sequence] requires an 'elements' key"))?;
    let vmap = var_map(ring);
    let mut elems = Vec::new();
    for (off, piece) in split_csv(&e.value) {
        let col = e.value_col + off;
        if piece.is_empty() {
            return Err(spec_err(e.line, col, "empty sequence entry"));
        }
        let poly = parse_polynomial(&piece, e.line, col, &vmap)?;
        elems.push(element_from_poly(ring, &poly, e.line, col)?);
    }
    let line = e.line;
    sec.reject_leftover("sequence")?;
    GeneratingSequence::new(elems).map_err(|err| spec_err(line, 1, err.to_string()))
}

fn parse_module_section(
    sec: &mut Section,
    ring: &Arc<MonomialQuotientRing>,
) -> Result<ModuleSpec, SpecError> {
    let kind = sec
        .take("kind")
        .ok_or_else(|| spec_err(sec.line, 1, "[module] requires a 'kind' key"))?;
    match kind.value.as_str() {
        "graded-free" => {
            let e = sec.take("generators").ok_or_else(|| {
                spec_err(sec.line, 1, "graded-free modules require a 'generators' key")
            })?;
            let mut degs = Vec::new();
            for g in e.value.split_whitespace() {
                let d: i64 = g.parse().map_err(|_| {
                    spec_err(e.line, e.value_col, format!("generator degrees must be integers, got '{}'", g))
                })?;
                degs.push(d);
            }
            if degs.is_empty() {
                return Err(spec_err(e.line, e.value_col, "no generator degrees listed"));
            }
            sec.reject_leftover("module")?;
            Ok(ModuleSpec::GradedFree(GradedFPModule::free(ring, degs)))
        }
        "findim" => {
            let de = sec
                .take("dim")
                .ok_or_else(|| spec_err(sec.line, 1, "findim modules require a 'dim' key"))?;
            let dim: usize = de
                .value
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| spec_err(de.line, de.value_col, "dim must be a positive integer"))?;
            let mut actions = Vec::new();
            for vname in ring.var_names.clone() {
                let key = format!("action {}", vname);
                let e = sec.take(&key).ok_or_else(|| {
                    spec_err(sec.line, 1, format!("findim modules require an '{}' key", key))
                })?;
                let mut rows: Vec<Vec<i64>> = Vec::new();
                for row in e.value.split(';') {
                    let mut entries = Vec::new();
                    for n in row.split_whitespace() {
                        let v: i64 = n.parse().map_err(|_| {
                            spec_err(e.line, e.value_col, format!("matrix entries must be integers, got '{}'", n))
                        })?;
                        entries.push(v);
                    }
                    if entries.len() != dim {
                        return Err(spec_err(
                            e.line,
                            e.value_col,
                            format!("each matrix row needs {} entries", dim),
                        ));
                    }
                    rows.push(entries);
                }
                if rows.len() != dim {
                    return Err(spec_err(
                        e.line,
                        e.value_col,
                        format!("the matrix needs {} rows separated by ';'", dim),
                    ));
                }
                actions.push(DenseMatrix::from_i64_rows(ring.field, &rows));
            }
            let line = sec.line;
            sec.reject_leftover("module")?;
            let m = FinDimModule::new(ring, actions).map_err(|e| spec_err(line, 1, e.to_string()))?;
            Ok(ModuleSpec::FinDim(m))
        }
        other => Err(spec_err(
            kind.line,
            kind.value_col,
            format!("module kind must be 'graded-free' or 'findim', got '{}'", other),
        )),
    }
}

fn parse_params_section(sec: &mut Section) -> Result<Params, SpecError> {
    let mut p = Params::default();
    if let Some(e) = sec.take("window") {
        p.window = Some(entry_value(&e, parse_window_value(&e.value))?);
    }
    if let Some(e) = sec.take("levels") {
        p.levels = Some(entry_value(
            &e,
            e.value.parse::<u32>().map_err(|_| format!("bad levels '{}'", e.value)),
        )?);
    }
    if let Some(e) = sec.take("lag") {
        p.lag = Some(entry_value(
            &e,
            e.value.parse::<usize>().map_err(|_| format!("bad lag '{}'", e.value)),
        )?);
    }
    if let Some(e) = sec.take("level") {
        p.level = Some(entry_value(
            &e,
            e.value.parse::<u32>().map_err(|_| format!("bad level '{}'", e.value)),
        )?);
    }
    if let Some(e) = sec.take("seed") {
        p.seed = Some(entry_value(
            &e,
            e.value.parse::<u64>().map_err(|_| format!("bad seed '{}'", e.value)),
        )?);
    }
    if let Some(e) = sec.take("powers") {
        let mut all = Vec::new();
        for group in e.value.split('|') {
            let mut exps = Vec::new();
            for n in group.split_whitespace() {
                let v: u32 = n
                    .parse()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| {
                        spec_err(e.line, e.value_col, format!("powers must be positive integers, got '{}'", n))
                    })?;
                exps.push(v);
            }
            if exps.is_empty() {
                return Err(spec_err(e.line, e.value_col, "empty power vector"));
            }
            all.push(exps);
        }
        p.powers = Some(all);
    }
    if let Some(e) = sec.take("images") {
        let names: Vec<String> = e.value.split_whitespace().map(|s| s.to_string()).collect();
        if names.is_empty() {
            return Err(spec_err(e.line, e.value_col, "no image variables listed"));
        }
        p.images = Some(names);
    }
    sec.reject_leftover("params")?;
    Ok(p)
}

/// Parses the whole problem file.  A `--field` flag on the command line
/// overrides the field stated in the file.
pub fn parse_problem(text: &str, override_field: Option<Field>) -> Result<ProblemSpec, SpecError> {
    let mut sections = scan_sections(text)?;
    let mut ring_sec = sections
        .remove("ring")
        .ok_or_else(|| spec_err(1, 1, "missing [ring] section"))?;
    let ring = parse_ring_section(&mut ring_sec, "ring", override_field)?;
    let mut seq_sec = sections
        .remove("sequence")
        .ok_or_else(|| spec_err(1, 1, "missing [sequence] section"))?;
    let sequence = parse_sequence_section(&mut seq_sec, &ring)?;
    let module = match sections.remove("module") {
        Some(mut sec) => Some(parse_module_section(&mut sec, &ring)?),
        None => None,
    };
    let target = match sections.remove("target") {
        Some(mut sec) => Some(parse_ring_section(&mut sec, "target", override_field)?),
        None => None,
    };
    let params = match sections.remove("params") {
        Some(mut sec) => parse_params_section(&mut sec)?,
        None => Params::default(),
    };
    Ok(ProblemSpec { ring, sequence, module, target, params })
}

// ---------------------------------------------------------------------------
// command line

#[derive(Parser, Debug)]
#[command(
    name = "mgm",
    version,
    about = "Exact finite-window checks for torsion/completion duality data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Problem description file
    #[arg(value_name = "SPEC")]
    input: Option<PathBuf>,
    /// Graded degree window LO:HI
    #[arg(long, value_parser = parse_window_value, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    /// Number of tower levels (for mgm-verify: the telescope level)
    #[arg(long)]
    levels: Option<u32>,
    /// Certification lag inside the window
    #[arg(long)]
    lag: Option<usize>,
    /// Base field, 'q' or 'p:PRIME'; overrides the problem file
    #[arg(long, value_parser = parse_field_value)]
    field: Option<Field>,
    /// Seed for randomized suites
    #[arg(long)]
    seed: Option<u64>,
    /// Write machine records to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    machine_out: Option<PathBuf>,
    /// Suppress the human-readable summary
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Certify or refute weak proregularity of the sequence in the window
    WprCheck(Common),
    /// Degreewise local cohomology of the module over the Koszul cotower
    LocalCohomology(Common),
    /// Derived completion towers of the module, against adic truncations
    Completion(Common),
    /// Verify the duality quasi-isomorphisms on a findim module
    MgmVerify(Common),
    /// Check the dedualizing conditions for the sequence
    DedualizingCheck(Common),
    /// Compare weak proregularity verdicts across entrywise powers
    RadicalInvariance(Common),
    /// Compare weak proregularity verdicts along a flat extension
    FlatBaseChange(Common),
    /// Build the non-weakly-proregular ring and exhibit the refutation
    Counterexample {
        #[command(flatten)]
        common: Common,
        /// Number of polynomial variables besides s
        #[arg(long, default_value_t = 8)]
        vars: usize,
    },
    /// Randomized coalgebra suite: adjunction, identities, oracles
    CoalgVerify {
        #[command(flatten)]
        common: Common,
        /// Number of random instances
        #[arg(long, default_value_t = 100)]
        instances: u32,
        /// Largest coalgebra dimension to draw
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
}

struct Outcome {
    exit: i32,
    summary: Vec<String>,
    records: Vec<ResultRecord>,
}

const DEFAULT_WINDOW: (i64, i64) = (-8, 8);
const DEFAULT_LEVELS: u32 = 6;
const DEFAULT_LAG: usize = 3;

struct Loaded {
    spec: ProblemSpec,
    window: (i64, i64),
    levels: u32,
    lag: usize,
}

fn load(common: &Common) -> Result<Loaded, String> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| "this task requires a problem file argument".to_string())?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let spec = parse_problem(&text, common.field).map_err(|e| e.to_string())?;
    let window = common.window.or(spec.params.window).unwrap_or(DEFAULT_WINDOW);
    let levels = common.levels.or(spec.params.levels).unwrap_or(DEFAULT_LEVELS);
    let lag = common.lag.or(spec.params.lag).unwrap_or(DEFAULT_LAG);
    Ok(Loaded { spec, window, levels, lag })
}

fn qualify(records: &mut [ResultRecord], window: Option<(i64, i64)>, levels: u32, lag: usize) {
    for r in records.iter_mut() {
        r.window = window;
        r.levels = Some(levels);
        r.lag = Some(lag);
    }
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Certified => 0,
        Verdict::Refuted => 1,
        Verdict::Inconclusive => 2,
    }
}

fn window_str(w: (i64, i64)) -> String {
    format!("{}:{}", w.0, w.1)
}

fn wpr_records(task: &str, rep: &WprReport) -> Vec<ResultRecord> {
    let mut out = Vec::new();
    for ((i, d), cell) in &rep.cells {
        let mut r = ResultRecord::new(task, cell.verdict.label());
        r.i = Some(*i as i64);
        r.d = Some(*d);
        r = r.with("dims", usize_list(&cell.level_dims));
        match &cell.verdict {
            ProZeroVerdict::Certified { certificates } => {
                r = r.with("certificates", usize_list(certificates));
            }
            ProZeroVerdict::NotProZeroInWindow { level, witness, image } => {
                r = r
                    .with("witness-level", level.to_string())
                    .with("witness", scalar_list(witness))
                    .with("image", scalar_list(image));
            }
            ProZeroVerdict::Inconclusive { .. } => {}
        }
        out.push(r);
    }
    out.push(ResultRecord::new(task, rep.verdict.label()));
    out
}

fn run_wpr_check(common: &Common) -> Result<Outcome, String> {
    let l = load(common)?;
    let rep = weak_proregularity_check(&l.spec.sequence, l.window, l.levels, l.lag)
        .map_err(|e| e.to_string())?;
    let mut records = wpr_records("wpr-check", &rep);
    qualify(&mut records, Some(l.window), l.levels, l.lag);
    let summary = vec![format!(
        "wpr-check: {} (window {}, levels {}, lag {})",
        rep.verdict.label(),
        window_str(l.window),
        l.levels,
        l.lag
    )];
    Ok(Outcome { exit: verdict_exit(rep.verdict), summary, records })
}

fn run_local_cohomology(common: &Common) -> Result<Outcome, String> {
    let l = load(common)?;
    let module = l
        .spec
        .module
        .as_ref()
        .ok_or_else(|| "local-cohomology requires a [module] section".to_string())?;
    let mut records = Vec::new();
    let (exit, label) = match module {
        ModuleSpec::GradedFree(m) => {
            let t = local_cohomology_table(&l.spec.sequence, m, l.window, l.levels, l.lag)
                .map_err(|e| e.to_string())?;
            for ((i, d), cell) in &t.cells {
                let mut r =
                    ResultRecord::new("local-cohomology", dim_or(cell.stable_dim, "unstabilized"));
                r.i = Some(*i as i64);
                r.d = Some(*d);
                r = r.with("dims", usize_list(&cell.dims));
                if let Some(s) = cell.stab_level {
                    r = r.with("stab-level", s.to_string());
                }
                records.push(r);
            }
            if t.all_stabilized {
                (0, "stabilized")
            } else {
                (2, "inconclusive")
            }
        }
        ModuleSpec::FinDim(m) => {
            let rep = local_cohomology_findim(&l.spec.sequence, m, l.levels, l.lag)
                .map_err(|e| e.to_string())?;
            let mut all = true;
            for (i, cell) in &rep.cells {
                let mut r =
                    ResultRecord::new("local-cohomology", dim_or(cell.stable_dim, "unstabilized"));
                r.i = Some(*i as i64);
                r = r.with("dims", usize_list(&cell.dims));
                all &= cell.stable_dim.is_some();
                records.push(r);
            }
            records.push(
                ResultRecord::new(
                    "local-cohomology",
                    if rep.h0_matches_gamma { "gamma-match" } else { "gamma-mismatch" },
                )
                .with("check", "gamma"),
            );
            if all && rep.h0_matches_gamma {
                (0, "stabilized")
            } else {
                (2, "inconclusive")
            }
        }
    };
    qualify(&mut records, Some(l.window), l.levels, l.lag);
    let summary = vec![format!(
        "local-cohomology: {} (window {}, levels {}, lag {})",
        label,
        window_str(l.window),
        l.levels,
        l.lag
    )];
    Ok(Outcome { exit, summary, records })
}

fn run_completion(common: &Common) -> Result<Outcome, String> {
    let l = load(common)?;
    let module = l
        .spec
        .module
        .as_ref()
        .ok_or_else(|| "completion requires a [module] section".to_string())?;
    let mut records = Vec::new();
    let (exit, label) = match module {
        ModuleSpec::GradedFree(m) => {
            let rep = derived_completion_graded(&l.spec.sequence, m, l.window, l.levels)
                .map_err(|e| e.to_string())?;
            let mut all = true;
            for ((i, d), (dims, ml)) in &rep.cells {
                let mut r = ResultRecord::new("completion", dim_or(ml.limit_dim, "unknown"));
                r.i = Some(*i as i64);
                r.d = Some(*d);
                r = r.with("dims", usize_list(dims));
                all &= ml.limit_dim.is_some();
                records.push(r);
            }
            records.push(
                ResultRecord::new(
                    "completion",
                    if rep.h0_matches_quotients { "quotient-match" } else { "quotient-mismatch" },
                )
                .with("check", "adic"),
            );
            if all && rep.h0_matches_quotients {
                (0, "stabilized")
            } else {
                (2, "inconclusive")
            }
        }
        ModuleSpec::FinDim(m) => {
            let rep = derived_completion_findim(&l.spec.sequence, m, l.levels)
                .map_err(|e| e.to_string())?;
            let mut all = true;
            for (i, (dims, ml)) in &rep.towers {
                let mut r = ResultRecord::new("completion", dim_or(ml.limit_dim, "unknown"));
                r.i = Some(*i as i64);
                r = r.with("dims", usize_list(dims));
                all &= ml.limit_dim.is_some();
                records.push(r);
            }
            records.push(
                ResultRecord::new(
                    "completion",
                    if rep.h0_matches_quotients { "quotient-match" } else { "quotient-mismatch" },
                )
                .with("check", "adic"),
            );
            if all && rep.h0_matches_quotients {
                (0, "stabilized")
            } else {
                (2, "inconclusive")
            }
        }
    };
    qualify(&mut records, Some(l.window), l.levels, l.lag);
    let summary = vec![format!("completion: {} (levels {})", label, l.levels)];
    Ok(Outcome { exit, summary, records })
}

fn minimal_nilpotency_level(seq: &GeneratingSequence, m: &FinDimModule) -> Result<u32, String> {
    for n in 1..=64u32 {
        if seq.elements.iter().all(|s| m.action_of(&s.pow(n)).is_zero()) {
            return Ok(n);
        }
    }
    Err("the sequence does not act nilpotently on the module".into())
}

fn run_mgm_verify(common: &Common) -> Result<Outcome, String> {
    let l = load(common)?;
    let Some(ModuleSpec::FinDim(m)) = &l.spec.module else {
        return Err("mgm-verify requires a findim [module] section".to_string());
    };
    let n = match common.levels.or(l.spec.params.level) {
        Some(n) => n,
        None => minimal_nilpotency_level(&l.spec.sequence, m)?,
    };
    let t = mgm_duality_verify_torsion(&l.spec.sequence, m, n).map_err(|e| e.to_string())?;
    let c = mgm_duality_verify_contra(&l.spec.sequence, m, n).map_err(|e| e.to_string())?;
    let mut records = Vec::new();
    for (rep, direction) in [(&t, "torsion"), (&c, "contra")] {
        for (deg, dim) in &rep.homology_dims {
            let mut r = ResultRecord::new("mgm-verify", dim.to_string());
            r.i = Some(*deg);
            r = r.with("direction", direction);
            records.push(r);
        }
        let mut r = ResultRecord::new("mgm-verify", if rep.ok { "pass" } else { "fail" });
        r.level = Some(n as i64);
        r = r
            .with("direction", direction)
            .with("module-dim", rep.module_dim.to_string())
            .with("iso", if rep.comparison_iso { "yes" } else { "no" });
        records.push(r);
    }
    qualify(&mut records, None, n, l.lag);
    let ok = t.ok && c.ok;
    let summary = vec![format!(
        "mgm-verify: {} at level {} (module dim {})",
        if ok { "pass" } else { "fail" },
        n,
        m.dim
    )];
    Ok(Outcome { exit: if ok { 0 } else { 2 }, summary, records })
}

fn run_dedualizing(common: &Common) -> Result<Outcome, String> {
    let l = load(common)?;
    let wrep = weak_proregularity_check(&l.spec.sequence, l.window, l.levels, l.lag)
        .map_err(|e| e.to_string())?;
    if wrep.verdict != Verdict::Certified {
        let mut records = wpr_records("dedualizing-check", &wrep);
        qualify(&mut records, Some(l.window), l.levels, l.lag);
        let summary = vec![format!(
            "dedualizing-check: weak proregularity {}; conditions not evaluated",
            wrep.verdict.label()
        )];
        return Ok(Outcome { exit: verdict_exit(wrep.verdict), summary, records });
    }
    let rep = dedualizing_check(&l.spec.sequence, l.window, l.levels, l.lag)
        .map_err(|e| e.to_string())?;
    let mut records = Vec::new();
    records.push(
        ResultRecord::new("dedualizing-check", rep.width.to_string())
            .with("check", "width")
            .with("ok", if rep.width_ok { "yes" } else { "no" }),
    );
    records.push(
        ResultRecord::new(
            "dedualizing-check",
            if rep.identity_class_nonzero { "pass" } else { "fail" },
        )
        .with("check", "identity-class"),
    );
    records.push(
        ResultRecord::new(
            "dedualizing-check",
            if rep.higher_vanish_ok { "pass" } else { "fail" },
        )
        .with("check", "higher-vanishing"),
    );
    for (d, (h0, completion)) in &rep.homothety {
        let mut r = ResultRecord::new("dedualizing-check", dim_or(*h0, "unknown"));
        r.d = Some(*d);
        r = r
            .with("check", "homothety")
            .with("completion", dim_or(*completion, "unknown"));
        records.push(r);
    }
    for ((n, i, d), (got, want)) in &rep.compact_cells {
        let mut r = ResultRecord::new("dedualizing-check", dim_or(*got, "unknown"));
        r.i = Some(*i);
        r.d = Some(*d);
        r.level = Some(*n as i64);
        r = r.with("check", "compact").with("expected", want.to_string());
        records.push(r);
    }
    qualify(&mut records, Some(l.window), l.levels, l.lag);
    let summary = vec![format!(
        "dedualizing-check: {} (width {}, window {}, levels {}, lag {})",
        if rep.ok { "pass" } else { "inconclusive" },
        rep.width,
        window_str(l.window),
        l.levels,
        l.lag
    )];
    Ok(Outcome { exit: if rep.ok { 0 } else { 2 }, summary, records })
}

fn run_radical_invariance(common: &Common) -> Result<Outcome, String> {
    let l = load(common)?;
    let powers = l
        .spec
        .params
        .powers
        .clone()
        .unwrap_or_else(|| vec![vec![2; l.spec.sequence.len()]]);
    let rep = radical_invariance_suite(&l.spec.sequence, &powers, l.window, l.levels, l.lag)
        .map_err(|e| e.to_string())?;
    let mut records = Vec::new();
    for (idx, (exps, v)) in rep.verdicts.iter().enumerate() {
        let mut r = ResultRecord::new("radical-invariance", v.label());
        r.level = Some(idx as i64 + 1);
        r = r.with("powers", u32_list(exps));
        records.push(r);
    }
    records.push(ResultRecord::new(
        "radical-invariance",
        if rep.ok { "pass" } else { "fail" },
    ));
    qualify(&mut records, Some(l.window), l.levels, l.lag);
    let summary = vec![format!(
        "radical-invariance: {} across {} exponent vectors",
        if rep.ok { "pass" } else { "fail" },
        rep.verdicts.len()
    )];
    Ok(Outcome { exit: if rep.ok { 0 } else { 2 }, summary, records })
}

fn run_flat_base_change(common: &Common) -> Result<Outcome, String> {
    let l = load(common)?;
    let target = l
        .spec
        .target
        .as_ref()
        .ok_or_else(|| "flat-base-change requires a [target] section".to_string())?;
    let images = l
        .spec
        .params
        .images
        .as_ref()
        .ok_or_else(|| "flat-base-change requires an 'images' key in [params]".to_string())?;
    let mut indices = Vec::new();
    for name in images {
        let i = target
            .var_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| format!("image variable '{}' is not in the target ring", name))?;
        indices.push(i);
    }
    let rep = flat_base_change_check(&l.spec.sequence, target, &indices, l.window, l.levels, l.lag)
        .map_err(|e| e.to_string())?;
    let mut records = vec![
        {
            let mut r = ResultRecord::new("flat-base-change", rep.base.label());
            r.level = Some(1);
            r.with("side", "base")
        },
        {
            let mut r = ResultRecord::new("flat-base-change", rep.extended.label());
            r.level = Some(2);
            r.with("side", "extended")
        },
        ResultRecord::new("flat-base-change", if rep.ok { "pass" } else { "fail" }),
    ];
    qualify(&mut records, Some(l.window), l.levels, l.lag);
    let summary = vec![format!(
        "flat-base-change: {} (base {}, extended {})",
        if rep.ok { "pass" } else { "fail" },
        rep.base.label(),
        rep.extended.label()
    )];
    Ok(Outcome { exit: if rep.ok { 0 } else { 2 }, summary, records })
}

fn run_counterexample(common: &Common, vars: usize) -> Result<Outcome, String> {
    if common.input.is_some() {
        return Err("counterexample builds its own ring; no problem file expected".to_string());
    }
    if vars == 0 {
        return Err("counterexample needs at least one polynomial variable".to_string());
    }
    let field = common.field.unwrap_or(Field::Q);
    let ring = MonomialQuotientRing::counterexample_ring(field, vars);
    let s = ring.var_by_name("s").map_err(|e| e.to_string())?;
    let seq = GeneratingSequence::new(vec![s]).map_err(|e| e.to_string())?;
    let levels = common.levels.unwrap_or(DEFAULT_LEVELS);
    let lag = common.lag.unwrap_or(DEFAULT_LAG);
    let window = common.window.unwrap_or((0, levels as i64 + 3));
    let rep = weak_proregularity_check(&seq, window, levels, lag).map_err(|e| e.to_string())?;
    let mut records = wpr_records("counterexample", &rep);
    let witnesses = h1_pair_witnesses(&seq, window, levels);
    for w in &witnesses {
        let mut r = ResultRecord::new("counterexample", "nonzero-composite");
        r.i = Some(1);
        r.d = Some(w.degree);
        r.level = Some(w.from_level as i64);
        r = r
            .with("to-level", w.to_level.to_string())
            .with("witness", scalar_list(&w.witness))
            .with("image", scalar_list(&w.image));
        records.push(r);
    }
    qualify(&mut records, Some(window), levels, lag);
    let summary = vec![
        format!(
            "counterexample: {} with {} variables (window {}, levels {}, lag {})",
            rep.verdict.label(),
            vars,
            window_str(window),
            levels,
            lag
        ),
        format!(
            "counterexample: {} surviving level pairs certified",
            witnesses.len()
        ),
    ];
    Ok(Outcome { exit: verdict_exit(rep.verdict), summary, records })
}

fn random_invertible(f: Field, n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let m = DenseMatrix::from_i64_rows(f, &rows);
        if m.rank() == n {
            return m;
        }
    }
}

fn random_coalgebra(f: Field, max_dim: usize, rng: &mut ChaCha8Rng) -> Arc<FinDimCoalgebra> {
    let cap = max_dim.max(1);
    match rng.gen_range(0..4u32) {
        0 => FinDimCoalgebra::trivial(f),
        1 => FinDimCoalgebra::grouplike(f, rng.gen_range(1..=cap.min(4))),
        2 => FinDimCoalgebra::divided_power_dual(f, rng.gen_range(1..=cap.min(4))),
        _ if cap >= 3 => FinDimCoalgebra::upper_triangular_dual(f),
        _ => FinDimCoalgebra::trivial(f),
    }
}

/// Dimension of the balanced tensor product of N and P over the dual
/// algebra, the module-theoretic oracle for the contratensor product.
fn contratensor_oracle(n: &FinDimComodule, p: &FinDimContramodule) -> usize {
    let f = n.coalgebra.field;
    let dd = n.coalgebra.dim;
    let idp = DenseMatrix::identity(f, p.dim);
    let idn = DenseMatrix::identity(f, n.dim);
    let mut rels: Option<DenseMatrix> = None;
    for k in 0..dd {
        let pact = DenseMatrix::from_fn(f, p.dim, p.dim, |i, j| {
            p.contraaction.get(i, k * p.dim + j).clone()
        });
        let rel = n.dual_action(k).kron(&idp).sub(&idn.kron(&pact));
        rels = Some(match rels {
            None => rel,
            Some(acc) => acc.hstack(&rel),
        });
    }
    n.dim * p.dim - rels.unwrap().rank()
}

fn run_coalg_verify(common: &Common, instances: u32, max_dim: usize) -> Result<Outcome, String> {
    if common.input.is_some() {
        return Err("coalg-verify generates its own instances; no problem file expected".to_string());
    }
    let field = common.field.unwrap_or(Field::Fp(101));
    let seed = common.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    let mut all_ok = true;
    for t in 0..instances {
        let c = random_coalgebra(field, max_dim, &mut rng);
        let d = random_coalgebra(field, max_dim, &mut rng);
        let vm = if c.dim <= 2 { rng.gen_range(1..=2) } else { 1 };
        let vp = if d.dim <= 2 { rng.gen_range(1..=2) } else { 1 };
        let kb = FinDimBicomodule::cofree(&c, 1, &d);
        let m = FinDimComodule::cofree_left(&c, vm)
            .conjugate(&random_invertible(field, c.dim * vm, &mut rng));
        let p = FinDimContramodule::free(&d, vp)
            .conjugate(&random_invertible(field, d.dim * vp, &mut rng));
        let adj = adjunction_check(&kb, &m, &p).map_err(|e| e.to_string())?;

        let a = rng.gen_range(1..=2usize);
        let n_c = FinDimComodule::cofree_right(&c, a)
            .conjugate(&random_invertible(field, c.dim * a, &mut rng));
        let cot_ok = cotensor(&n_c, &m).map_err(|e| e.to_string())?.dim == a * m.dim;
        let n_d = FinDimComodule::cofree_right(&d, a)
            .conjugate(&random_invertible(field, d.dim * a, &mut rng));
        let free_p = FinDimContramodule::free(&d, vp);
        let ct_free_ok =
            contratensor(&n_d, &free_p).map_err(|e| e.to_string())?.dim == n_d.dim * vp;
        let ct = contratensor(&n_d, &p).map_err(|e| e.to_string())?;
        let ct_ok = ct.dim == contratensor_oracle(&n_d, &p);

        let lq = FinDimComodule::cofree_left(&c, 1)
            .conjugate(&random_invertible(field, c.dim, &mut rng));
        let qq = FinDimContramodule::free(&d, 1)
            .conjugate(&random_invertible(field, d.dim, &mut rng));
        let up = universal_property_checks(&lq, 1, &qq).map_err(|e| e.to_string())?;

        let ok = adj.ok && cot_ok && ct_free_ok && ct_ok && up.ok;
        all_ok &= ok;
        let mut r = ResultRecord::new("coalg-verify", if ok { "pass" } else { "fail" });
        r.level = Some(t as i64 + 1);
        r = r
            .with("adjunction-lhs", adj.lhs_dim.to_string())
            .with("adjunction-rhs", adj.rhs_dim.to_string())
            .with("cotensor", if cot_ok { "pass" } else { "fail" })
            .with("contratensor", if ct_free_ok && ct_ok { "pass" } else { "fail" })
            .with("universal", if up.ok { "pass" } else { "fail" });
        records.push(r);
    }
    let mut overall =
        ResultRecord::new("coalg-verify", if all_ok { "pass" } else { "fail" });
    overall = overall
        .with("instances", instances.to_string())
        .with("seed", seed.to_string());
    records.push(overall);
    let summary = vec![format!(
        "coalg-verify: {} ({} instances over {}, seed {})",
        if all_ok { "pass" } else { "fail" },
        instances,
        field,
        seed
    )];
    Ok(Outcome { exit: if all_ok { 0 } else { 2 }, summary, records })
}

fn dispatch(cli: &Cli) -> Result<(Outcome, Common), String> {
    let (outcome, common) = match &cli.cmd {
        Cmd::WprCheck(c) => (run_wpr_check(c)?, c.clone()),
        Cmd::LocalCohomology(c) => (run_local_cohomology(c)?, c.clone()),
        Cmd::Completion(c) => (run_completion(c)?, c.clone()),
        Cmd::MgmVerify(c) => (run_mgm_verify(c)?, c.clone()),
        Cmd::DedualizingCheck(c) => (run_dedualizing(c)?, c.clone()),
        Cmd::RadicalInvariance(c) => (run_radical_invariance(c)?, c.clone()),
        Cmd::FlatBaseChange(c) => (run_flat_base_change(c)?, c.clone()),
        Cmd::Counterexample { common, vars } => (run_counterexample(common, *vars)?, common.clone()),
        Cmd::CoalgVerify { common, instances, max_dim } => {
            (run_coalg_verify(common, *instances, *max_dim)?, common.clone())
        }
    };
    Ok((outcome, common))
}

/// Runs one subcommand against the given output sinks and returns the exit
/// code.  `main` is a thin wrapper over this; tests drive it directly.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut argv = vec!["mgm".to_string()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e);
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e);
                    3
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok((mut outcome, common)) => {
            sort_records(&mut outcome.records);
            let lines: Vec<String> = outcome.records.iter().map(|r| r.to_line()).collect();
            if !common.quiet {
                for s in &outcome.summary {
                    let _ = writeln!(out, "# {}", s);
                }
            }
            match &common.machine_out {
                Some(path) => {
                    let body = lines.join("\n") + "\n";
                    if let Err(e) = std::fs::write(path, body) {
                        let _ = writeln!(err, "input error: cannot write {}: {}", path.display(), e);
                        return 3;
                    }
                }
                None => {
                    for line in &lines {
                        let _ = writeln!(out, "{}", line);
                    }
                }
            }
            outcome.exit
        }
        Err(msg) => {
            let _ = writeln!(err, "input error: {}", msg);
            3
        }
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn vars2() -> BTreeMap<String, usize> {
        [("x".to_string(), 0), ("y".to_string(), 1)].into_iter().collect()
    }

    #[test]
    fn polynomial_parser_basics() {
        let v = vars2();
        let p = parse_polynomial("2*x^2*y - y^3 + x*x*y", 1, 1, &v).unwrap();
        assert_eq!(p.get(&vec![2, 1]), Some(&3));
        assert_eq!(p.get(&vec![0, 3]), Some(&-1));
        assert_eq!(p.len(), 2);
        // cancellation drops terms
        let q = parse_polynomial("x - x", 1, 1, &v).unwrap();
        assert!(q.is_empty());
    }

    #[test]
    fn polynomial_parser_rejects_negative_exponent() {
        let v = vars2();
        let e = parse_polynomial("x^-1", 3, 10, &v).unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.col, 12);
        assert!(e.msg.contains("nonnegative"));
    }

    #[test]
    fn polynomial_parser_rejects_unknown_variable() {
        let v = vars2();
        let e = parse_polynomial("x + z^2", 2, 5, &v).unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.col, 9);
        assert!(e.msg.contains("unknown variable 'z'"));
    }

    #[test]
    fn problem_file_round_trip() {
        let text = "\
[ring]
field = q
variables = x y s
ideal = x*y, s^2*x

[sequence]
elements = s, x + y

[params]
window = -3:4
levels = 5
lag = 2
";
        let spec = parse_problem(text, None).unwrap();
        assert_eq!(spec.ring.num_vars(), 3);
        assert_eq!(spec.ring.relations.len(), 2);
        assert_eq!(spec.sequence.len(), 2);
        assert_eq!(spec.params.window, Some((-3, 4)));
        assert_eq!(spec.params.levels, Some(5));
        assert_eq!(spec.params.lag, Some(2));
    }

    #[test]
    fn problem_file_rejects_unknown_key() {
        let text = "[ring]\nvariables = x\nfoo = 1\n\n[sequence]\nelements = x\n";
        let e = parse_problem(text, None).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("unknown key 'foo'"));
    }

    #[test]
    fn problem_file_rejects_inhomogeneous_sequence_entry() {
        let text = "[ring]\nvariables = x y\n\n[sequence]\nelements = x + y^2\n";
        let e = parse_problem(text, None).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.msg.contains("not homogeneous"));
    }

    #[test]
    fn findim_module_parses() {
        let text = "\
[ring]
variables = x

[sequence]
elements = x

[module]
kind = findim
dim = 2
action x = 0 0 ; 1 0
";
        let spec = parse_problem(text, None).unwrap();
        let Some(ModuleSpec::FinDim(m)) = spec.module else {
            panic!("expected a findim module");
        };
        assert_eq!(m.dim, 2);
        assert!(m.action_of(&spec.ring.var(0)).mul(&m.action_of(&spec.ring.var(0))).is_zero());
    }

    #[test]
    fn record_round_trip() {
        let mut r = ResultRecord::new("wpr-check", "certified");
        r.i = Some(1);
        r.d = Some(-3);
        r = r.with("dims", "0,1,2").with("certificates", "2,3");
        r.window = Some((-6, 6));
        r.levels = Some(5);
        r.lag = Some(3);
        let line = r.to_line();
        let back = ResultRecord::parse_line(&line).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_line(), line);
    }

    #[test]
    fn record_sorting_key() {
        let mut recs = vec![
            {
                let mut r = ResultRecord::new("b", "1");
                r.i = Some(2);
                r
            },
            ResultRecord::new("b", "0"),
            {
                let mut r = ResultRecord::new("a", "2");
                r.i = Some(1);
                r.d = Some(5);
                r
            },
        ];
        sort_records(&mut recs);
        assert_eq!(recs[0].task, "a");
        assert_eq!(recs[1].value, "0");
        assert_eq!(recs[2].i, Some(2));
    }

    #[test]
    fn counterexample_subcommand_exits_one() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args: Vec<String> = ["counterexample", "--vars", "4", "--levels", "3", "--lag", "2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let code = run(&args, &mut out, &mut err);
        assert_eq!(code, 1, "stderr: {}", String::from_utf8_lossy(&err));
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("value=not-pro-zero-in-window"));
        assert!(text.contains("witness="));
    }

    #[test]
    fn missing_file_is_input_error() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = vec!["wpr-check".to_string(), "/nonexistent/path".to_string()];
        let code = run(&args, &mut out, &mut err);
        assert_eq!(code, 3);
        assert!(String::from_utf8_lossy(&err).contains("input error"));
    }

    #[test]
    fn wpr_check_on_regular_sequence_file() {
        let dir = std::env::temp_dir();
        let path = dir.join("mgm-cli-test-wpr.spec");
        std::fs::write(
            &path,
            "[ring]\nvariables = x y\n\n[sequence]\nelements = x, y\n\n[params]\nwindow = -3:3\nlevels = 4\nlag = 3\n",
        )
        .unwrap();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = vec!["wpr-check".to_string(), path.to_string_lossy().to_string()];
        let code = run(&args, &mut out, &mut err);
        let _ = std::fs::remove_file(&path);
        assert_eq!(code, 0, "stderr: {}", String::from_utf8_lossy(&err));
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("task=wpr-check"));
        assert!(text.lines().last().unwrap().contains("value=certified"));
    }

    #[test]
    fn malformed_polynomial_flag_reports_position() {
        let dir = std::env::temp_dir();
        let path = dir.join("mgm-cli-test-badpoly.spec");
        std::fs::write(&path, "[ring]\nvariables = x\n\n[sequence]\nelements = x^-1\n").unwrap();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = vec!["wpr-check".to_string(), path.to_string_lossy().to_string()];
        let code = run(&args, &mut out, &mut err);
        let _ = std::fs::remove_file(&path);
        assert_eq!(code, 3);
        let msg = String::from_utf8(err).unwrap();
        assert!(msg.contains("line 5"), "{}", msg);
        assert!(msg.contains("column"), "{}", msg);
    }
}
