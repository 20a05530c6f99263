use std::fmt::Write as _;

use crate::complexkernel::{fmt_term, BddComplex};
use crate::error::{Error, Result};
use crate::faltings::PrimePairList;
use crate::localcoh::SpcSubset;
use crate::modkernel::{FgModule, Matrix};
use crate::ringkernel::{BaseField, Ideal, OrderKind, PolyRing, PrimeCertificate, PrimeIdeal};
use crate::spfilt::{FinPoset, SpFiltration};
use crate::tstruct::RingFiltration;

pub const HEADER: &str = "annwb v1";

#[derive(Clone, Debug)]
pub enum Value {
    Ring(PolyRing),
    Ideal(Ideal),
    Prime(PrimeIdeal),
    Module(FgModule),
    Complex(BddComplex),
    Subset(SpcSubset),
    Poset(FinPoset),
    SpFilt { poset: String, filt: SpFiltration },
    Filt(RingFiltration),
    Pairs { y: String, z: String, names: Vec<(String, String)>, list: PrimePairList },
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Ring(_) => "ring",
            Value::Ideal(_) => "ideal",
            Value::Prime(_) => "prime",
            Value::Module(_) => "module",
            Value::Complex(_) => "complex",
            Value::Subset(_) => "subset",
            Value::Poset(_) => "poset",
            Value::SpFilt { .. } => "spfilt",
            Value::Filt(_) => "filt",
            Value::Pairs { .. } => "pairs",
        }
    }

    pub fn ring(&self) -> Option<&PolyRing> {
        Some(match self {
            Value::Ring(r) => r,
            Value::Ideal(a) => a.ring(),
            Value::Prime(p) => p.ring(),
            Value::Module(m) => m.ring(),
            Value::Complex(x) => x.ring(),
            Value::Subset(s) => s.ring(),
            Value::Filt(f) => f.ring(),
            Value::Pairs { list, .. } => list.y().ring(),
            Value::Poset(_) | Value::SpFilt { .. } => return None,
        })
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Ring(a), Value::Ring(b)) => a == b,
            (Value::Ideal(a), Value::Ideal(b)) => a == b,
            (Value::Prime(a), Value::Prime(b)) => a == b,
            (Value::Module(a), Value::Module(b)) => a == b,
            (Value::Complex(a), Value::Complex(b)) => a == b,
            (Value::Subset(a), Value::Subset(b)) => a.defining() == b.defining(),
            (Value::Poset(a), Value::Poset(b)) => a == b,
            (Value::SpFilt { poset: p, filt: f }, Value::SpFilt { poset: q, filt: g }) => p == q && f == g,
            (Value::Filt(a), Value::Filt(b)) => a == b,
            (Value::Pairs { y, z, names, .. }, Value::Pairs { y: y2, z: z2, names: n2, .. }) => {
                y == y2 && z == z2 && names == n2
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: String,
    pub value: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setting {
    Window(i64, i64),
    HRange(i64, i64),
    TMax(u32),
    Budget(usize),
    Steps(usize),
}

#[derive(Clone, Debug)]
pub struct Command {
    pub tokens: Vec<String>,
    pub expect: Option<String>,
    /// Ring in effect where the command appears.
    pub(crate) ring: Option<PolyRing>,
}

impl PartialEq for Command {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens && self.expect == other.expect
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Decl(Decl),
    Set(Setting),
    Cmd(Command),
}

/// A parsed session. Equality ignores source positions.
#[derive(Clone, Debug)]
pub struct Session {
    pub items: Vec<Item>,
    pub lines: Vec<usize>,
}

impl PartialEq for Session {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Session {
    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.items.iter().filter_map(|i| match i {
            Item::Decl(d) => Some(d),
            _ => None,
        })
    }

    pub fn commands(&self) -> impl Iterator<Item = (usize, &Command)> {
        self.items.iter().zip(&self.lines).filter_map(|(i, &l)| match i {
            Item::Cmd(c) => Some((l, c)),
            _ => None,
        })
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.decls().find(|d| d.name == name).map(|d| &d.value)
    }

    /// Canonical text; parsing it yields an equal session.
    pub fn pretty(&self) -> String {
        let mut out = format!("{HEADER}\n");
        for item in &self.items {
            match item {
                Item::Decl(d) => {
                    let _ = writeln!(out, "{}", pretty_decl(d));
                }
                Item::Set(s) => {
                    let _ = writeln!(out, "{}", pretty_setting(s));
                }
                Item::Cmd(c) => {
                    out.push_str("cmd ");
                    out.push_str(&c.tokens.join(" "));
                    if let Some(e) = &c.expect {
                        out.push_str(" expect ");
                        out.push_str(e);
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn pretty_decl(d: &Decl) -> String {
    let n = &d.name;
    match &d.value {
        Value::Ring(r) => format!("ring {n} = {r}"),
        Value::Ideal(a) => format!("ideal {n} = {a}"),
        Value::Prime(p) => match p.certificate() {
            PrimeCertificate::Asserted => format!("prime {n} = {} asserted", p.ideal()),
            _ => format!("prime {n} = {}", p.ideal()),
        },
        Value::Module(m) => format!("module {n} = {}", fmt_term(m)),
        Value::Complex(x) => format!("complex {n} = {}", x.display()),
        Value::Subset(s) => format!("subset {n} = {s}"),
        Value::Poset(p) => format!("poset {n} = {p}"),
        Value::SpFilt { poset, filt } => format!("spfilt {n} on {poset} = {filt}"),
        Value::Filt(f) => format!("filt {n} = {}", f.display_body()),
        Value::Pairs { y, z, names, .. } => {
            let ps: Vec<String> = names.iter().map(|(p, q)| format!("({p}, {q})")).collect();
            if ps.is_empty() {
                format!("pairs {n} for {y} {z} = {{ }}")
            } else {
                format!("pairs {n} for {y} {z} = {{ {} }}", ps.join("; "))
            }
        }
    }
}

fn pretty_setting(s: &Setting) -> String {
    match s {
        Setting::Window(a, b) => format!("set window {a}..{b}"),
        Setting::HRange(a, b) => format!("set hrange {a}..{b}"),
        Setting::TMax(t) => format!("set tmax {t}"),
        Setting::Budget(b) => format!("set budget {b}"),
        Setting::Steps(b) => format!("set steps {b}"),
    }
}

fn sem(line: usize, msg: impl Into<String>) -> Error {
    Error::Semantic { line, msg: msg.into() }
}

fn syn(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Attaches a line (and column offset) to an error raised by a body parser.
fn at(line: usize, col: usize, e: Error) -> Error {
    match e {
        Error::Parse { col: c, msg, .. } => Error::Parse { line, col: col + c.saturating_sub(1), msg },
        Error::Semantic { msg, .. } => Error::Semantic { line, msg },
        other => Error::Semantic { line, msg: other.to_string() },
    }
}

/// Splits on `sep` outside brackets; `<-` does not open a bracket.
pub(crate) fn split_outside(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let cs: Vec<char> = s.chars().collect();
    for (k, &ch) in cs.iter().enumerate() {
        match ch {
            '<' if cs.get(k + 1) == Some(&'-') => cur.push(ch),
            '(' | '[' | '<' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' | '>' | '}' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c == sep && depth == 0 => out.push(std::mem::take(&mut cur).trim().to_string()),
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Whitespace-separated tokens, keeping bracketed groups together.
pub(crate) fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' | '<' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' | '>' | '}' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth <= 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn braces(s: &str) -> Option<&str> {
    s.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}'))
}

pub(crate) fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (a, b) = s.split_once("..")?;
    let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a <= b).then_some((a, b))
}

fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Invalid(format!("expected [d1, d2, ...], found `{s}`")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| Error::Invalid(format!("bad integer `{t}`"))))
        .collect()
}

fn valid_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '\'')
}

pub fn parse_ring(body: &str) -> Result<PolyRing> {
    let body = body.trim();
    let (field, rest) = if let Some(r) = body.strip_prefix("QQ") {
        (BaseField::Rationals, r)
    } else if let Some(r) = body.strip_prefix("GF(") {
        let (p, r) = r.split_once(')').ok_or_else(|| Error::Invalid("unterminated GF(".into()))?;
        let p: u32 = p.trim().parse().map_err(|_| Error::Invalid(format!("bad characteristic `{p}`")))?;
        (BaseField::prime(p)?, r)
    } else {
        return Err(Error::Invalid("a ring starts with QQ or GF(p)".into()));
    };
    let rest = rest.trim_start();
    let (vars, rest) = rest
        .strip_prefix('[')
        .and_then(|r| r.split_once(']'))
        .ok_or_else(|| Error::Invalid("expected [variables]".into()))?;
    let vars: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
    let (spec, quot) = match rest.split_once('/') {
        Some((a, b)) => (a, Some(b.trim())),
        None => (rest, None),
    };
    let mut kind = OrderKind::GrevLex;
    let mut grading = None;
    let toks = tokenize(spec);
    let mut k = 0;
    while k < toks.len() {
        match toks[k].as_str() {
            "lex" => kind = OrderKind::Lex,
            "grevlex" => kind = OrderKind::GrevLex,
            "graded" => {
                let list = match toks.get(k + 1) {
                    Some(t) if t.starts_with('[') => {
                        k += 1;
                        parse_int_list(t)?
                    }
                    _ => vec![1; vars.len()],
                };
                if list.iter().any(|&d| d <= 0) {
                    return Err(Error::Invalid("grading degrees must be positive".into()));
                }
                grading = Some(list.into_iter().map(|d| d as u32).collect());
            }
            t => return Err(Error::Invalid(format!("unexpected `{t}` in ring declaration"))),
        }
        k += 1;
    }
    let ring = PolyRing::new(field, vars, kind, grading)?;
    match quot {
        Some(q) => {
            let rels = Ideal::parse(&ring, q)?;
            ring.quotient(rels.gens())
        }
        None => Ok(ring),
    }
}

/// `R^r [graded [..]]`, `coker R^r <- [[..]] [graded [..]]` or `R/<..>`.
pub fn parse_module(ring: &PolyRing, body: &str, ideal_of: &dyn Fn(&str) -> Option<Ideal>) -> Result<FgModule> {
    let body = body.trim();
    let (main, degrees) = match body.rfind(" graded ") {
        Some(k) => (body[..k].trim(), Some(parse_int_list(&body[k + 8..])?)),
        None => (body, None),
    };
    if let Some(q) = main.strip_prefix("R/").or_else(|| main.strip_prefix("R /")) {
        let q = q.trim();
        let a = if q.starts_with('<') {
            Ideal::parse(ring, q)?
        } else {
            ideal_of(q).ok_or_else(|| Error::Semantic { line: 0, msg: format!("unknown ideal `{q}`") })?
        };
        let m = FgModule::cyclic(&a);
        return match degrees {
            Some(d) => FgModule::new(ring, 1, m.relations().clone(), Some(d)),
            None => Ok(m),
        };
    }
    if let Some(rest) = main.strip_prefix("coker") {
        let (free, mat) =
            rest.split_once("<-").ok_or_else(|| Error::Invalid("expected coker R^r <- [[...]]".into()))?;
        let r = parse_free_rank(free)?;
        let m = Matrix::parse(ring, mat.trim())?;
        let m = if m.rows() == 0 { Matrix::zero(r, 0) } else { m };
        if degrees.is_none() && ring.is_graded() {
            if let Ok(g) = FgModule::new(ring, r, m.clone(), Some(vec![0; r])) {
                return Ok(g);
            }
        }
        return FgModule::new(ring, r, m, degrees);
    }
    let r = parse_free_rank(main)?;
    FgModule::new(ring, r, Matrix::zero(r, 0), degrees.or_else(|| ring.is_graded().then(|| vec![0; r])))
}

fn parse_free_rank(s: &str) -> Result<usize> {
    s.trim()
        .strip_prefix("R^")
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| Error::Invalid(format!("expected R^r, found `{}`", s.trim())))
}

/// Generator degrees making every differential homogeneous of degree 0, read
/// off from the top term downwards; `None` if that is impossible.
fn infer_degrees(ring: &PolyRing, ranks: &[usize], diffs: &[Matrix]) -> Option<Vec<Vec<i64>>> {
    let n = ranks.len();
    let mut degs: Vec<Vec<i64>> = vec![Vec::new(); n];
    degs[n - 1] = vec![0; ranks[n - 1]];
    for k in (0..n - 1).rev() {
        let d = &diffs[k];
        let mut col_degs = Vec::with_capacity(ranks[k]);
        for j in 0..ranks[k] {
            let mut deg = None;
            for r in 0..ranks[k + 1] {
                let e = d.get(r, j);
                if e.is_zero() {
                    continue;
                }
                if !ring.is_homogeneous(e) {
                    return None;
                }
                let v = ring.degree_of(e)? as i64 + degs[k + 1][r];
                match deg {
                    None => deg = Some(v),
                    Some(w) if w != v => return None,
                    _ => {}
                }
            }
            col_degs.push(deg.unwrap_or(0));
        }
        degs[k] = col_degs;
    }
    Some(degs)
}

/// `{ -1: R^1; 0: R^1; d(-1) = [[x]] }`; terms may be presented.
pub fn parse_complex(ring: &PolyRing, body: &str, ideal_of: &dyn Fn(&str) -> Option<Ideal>) -> Result<BddComplex> {
    let inner = braces(body).ok_or_else(|| Error::Invalid("complex body must be enclosed in { }".into()))?;
    let mut terms: Vec<(i64, FgModule)> = Vec::new();
    let mut diffs: Vec<(i64, String)> = Vec::new();
    for part in split_outside(inner, ';') {
        if let Some(rest) = part.strip_prefix("d(") {
            let (i, m) = rest.split_once(')').ok_or_else(|| Error::Invalid(format!("bad differential `{part}`")))?;
            let i: i64 = i.trim().parse().map_err(|_| Error::Invalid(format!("bad degree in `{part}`")))?;
            let m = m.trim().strip_prefix('=').ok_or_else(|| Error::Invalid(format!("expected = in `{part}`")))?;
            if diffs.iter().any(|d| d.0 == i) {
                return Err(Error::Invalid(format!("d({i}) given twice")));
            }
            diffs.push((i, m.trim().to_string()));
        } else {
            let (i, t) =
                part.split_once(':').ok_or_else(|| Error::Invalid(format!("expected `i: term`, found `{part}`")))?;
            let i: i64 = i.trim().parse().map_err(|_| Error::Invalid(format!("bad degree `{}`", i.trim())))?;
            if terms.iter().any(|t| t.0 == i) {
                return Err(Error::Invalid(format!("degree {i} given twice")));
            }
            terms.push((i, parse_module(ring, t, ideal_of)?));
        }
    }
    if terms.is_empty() {
        if !diffs.is_empty() {
            return Err(Error::Invalid("differentials without terms".into()));
        }
        return Ok(BddComplex::zero(ring));
    }
    terms.sort_by_key(|t| t.0);
    let lo = terms[0].0;
    let hi = terms[terms.len() - 1].0;
    let mods: Vec<FgModule> = (lo..=hi)
        .map(|i| {
            terms
                .iter()
                .find(|t| t.0 == i)
                .map(|t| t.1.clone())
                .unwrap_or_else(|| FgModule::new(ring, 0, Matrix::zero(0, 0), None).expect("zero"))
        })
        .collect();
    let mut mats = Vec::new();
    for i in lo..hi {
        let (s, t) = (mods[(i - lo) as usize].rank(), mods[(i - lo + 1) as usize].rank());
        let m = match diffs.iter().find(|d| d.0 == i) {
            Some((_, txt)) => {
                let m = Matrix::parse(ring, txt)?;
                if m.rows() == 0 && s * t == 0 {
                    Matrix::zero(t, s)
                } else {
                    m
                }
            }
            None => Matrix::zero(t, s),
        };
        mats.push(m);
    }
    if let Some((i, _)) = diffs.iter().find(|d| d.0 < lo || d.0 >= hi) {
        return Err(Error::Invalid(format!("d({i}) has no target or source term")));
    }
    let all_free = mods.iter().all(|m| m.relations().cols() == 0);
    let none_graded = mods.iter().all(|m| !m.is_graded() || m.degrees().is_some_and(|d| d.iter().all(|&x| x == 0)));
    let explicit = body.contains("graded");
    if ring.is_graded() && all_free && none_graded && !explicit {
        let ranks: Vec<usize> = mods.iter().map(|m| m.rank()).collect();
        if let Some(degs) = infer_degrees(ring, &ranks, &mats) {
            return BddComplex::free(ring, lo, &ranks, mats, Some(degs));
        }
        return BddComplex::new(ring, lo, mods.iter().map(|m| m.ungraded()).collect(), mats);
    }
    if mods.iter().any(|m| m.is_graded()) && !mods.iter().all(|m| m.is_graded()) {
        return BddComplex::new(ring, lo, mods.iter().map(|m| m.ungraded()).collect(), mats);
    }
    BddComplex::new(ring, lo, mods, mats)
}

pub fn parse_subset(ring: &PolyRing, body: &str, ideal_of: &dyn Fn(&str) -> Option<Ideal>) -> Result<SpcSubset> {
    let b = body.trim();
    let rest = b.strip_prefix('V').ok_or_else(|| Error::Invalid(format!("expected V<...> or V(name), found `{b}`")))?;
    if rest.starts_with('<') {
        return Ok(SpcSubset::closed(Ideal::parse(ring, rest)?));
    }
    let name = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Invalid(format!("expected V<...> or V(name), found `{b}`")))?
        .trim();
    ideal_of(name)
        .map(SpcSubset::closed)
        .ok_or_else(|| Error::Semantic { line: 0, msg: format!("unknown ideal `{name}`") })
}

fn parse_spfilt(poset: &FinPoset, body: &str) -> Result<SpFiltration> {
    let inner = braces(body).ok_or_else(|| Error::Invalid("filtration body must be enclosed in { }".into()))?;
    let mut listed = Vec::new();
    let mut tails = None;
    for part in split_outside(inner, ';') {
        if let Some(t) = part.strip_prefix("tails") {
            let mut lo = None;
            let mut hi = None;
            for kv in t.split_whitespace() {
                match kv.split_once('=') {
                    Some(("lo", v)) => lo = v.parse::<i64>().ok(),
                    Some(("hi", v)) => hi = v.parse::<i64>().ok(),
                    _ => return Err(Error::Invalid(format!("bad tails entry `{kv}`"))),
                }
            }
            tails = Some((
                lo.ok_or_else(|| Error::Invalid("tails needs lo=".into()))?,
                hi.ok_or_else(|| Error::Invalid("tails needs hi=".into()))?,
            ));
        } else {
            let (i, s) =
                part.split_once(':').ok_or_else(|| Error::Invalid(format!("expected `i: {{..}}`, found `{part}`")))?;
            let i: i64 = i.trim().parse().map_err(|_| Error::Invalid(format!("bad level `{}`", i.trim())))?;
            listed.push((i, poset.parse_set(s)?));
        }
    }
    let (lo, hi) = match tails {
        Some(t) => t,
        None => {
            let lo = listed
                .iter()
                .map(|l| l.0)
                .min()
                .ok_or_else(|| Error::Invalid("a filtration needs at least one level".into()))?;
            (lo, listed.iter().map(|l| l.0).max().expect("nonempty"))
        }
    };
    SpFiltration::from_listed(poset, lo, hi, &listed)
}

fn parse_filt(ring: &PolyRing, body: &str, ideal_of: &dyn Fn(&str) -> Option<Ideal>) -> Result<RingFiltration> {
    let inner = braces(body).ok_or_else(|| Error::Invalid("filtration body must be enclosed in { }".into()))?;
    let mut listed = Vec::new();
    for part in split_outside(inner, ';') {
        let (i, s) =
            part.split_once(':').ok_or_else(|| Error::Invalid(format!("expected `i: V<..>`, found `{part}`")))?;
        let i: i64 = i.trim().parse().map_err(|_| Error::Invalid(format!("bad level `{}`", i.trim())))?;
        listed.push((i, parse_subset(ring, s, ideal_of)?));
    }
    RingFiltration::from_listed(ring, &listed)
}

struct Parser {
    session: Session,
    ring: Option<PolyRing>,
}

impl Parser {
    fn lookup(&self, name: &str) -> Option<&Value> {
        self.session.lookup(name)
    }

    fn ideal_of(&self) -> impl Fn(&str) -> Option<Ideal> + '_ {
        move |n: &str| match self.lookup(n) {
            Some(Value::Ideal(a)) => Some(a.clone()),
            Some(Value::Prime(p)) => Some(p.ideal().clone()),
            _ => None,
        }
    }

    fn ring(&self, line: usize) -> Result<PolyRing> {
        self.ring.clone().ok_or_else(|| sem(line, "no ring declared yet"))
    }

    fn decl(&mut self, line: usize, kw: &str, rest: &str, col0: usize) -> Result<()> {
        let (lhs, body) = rest.split_once('=').ok_or_else(|| syn(line, col0, "expected `name = ...`"))?;
        let body_col = col0 + lhs.len() + 1 + (body.len() - body.trim_start().len());
        let lhs_toks: Vec<&str> = lhs.split_whitespace().collect();
        let name = lhs_toks.first().copied().ok_or_else(|| syn(line, col0, "missing name"))?.to_string();
        if !valid_ident(&name) {
            return Err(syn(line, col0, format!("bad name `{name}`")));
        }
        if self.lookup(&name).is_some() {
            return Err(sem(line, format!("`{name}` is already declared")));
        }
        let body = body.trim();
        let extra = &lhs_toks[1..];
        let wrap = |e| at(line, body_col, e);
        let value = match kw {
            "ring" => {
                let r = parse_ring(body).map_err(wrap)?;
                self.ring = Some(r.clone());
                Value::Ring(r)
            }
            "ideal" => {
                let r = self.ring(line)?;
                Value::Ideal(Ideal::parse(&r, body).map_err(wrap)?)
            }
            "prime" => {
                let r = self.ring(line)?;
                let (txt, asserted) = match body.strip_suffix("asserted") {
                    Some(t) => (t.trim(), true),
                    None => (body, false),
                };
                let a = if txt.starts_with('<') {
                    Ideal::parse(&r, txt).map_err(wrap)?
                } else {
                    self.ideal_of()(txt).ok_or_else(|| sem(line, format!("unknown ideal `{txt}`")))?
                };
                let p = if asserted { PrimeIdeal::asserted(a) } else { PrimeIdeal::certify(a) };
                Value::Prime(p.map_err(wrap)?)
            }
            "module" => {
                let r = self.ring(line)?;
                Value::Module(parse_module(&r, body, &self.ideal_of()).map_err(wrap)?)
            }
            "complex" => {
                let r = self.ring(line)?;
                let x = if let Some(rest) = body.strip_prefix("from ").or_else(|| body.strip_prefix("resolve ")) {
                    let (m, k) =
                        rest.split_once(" at ").ok_or_else(|| syn(line, body_col, "expected `from M at k`"))?;
                    let m = match self.lookup(m.trim()) {
                        Some(Value::Module(m)) => m.clone(),
                        _ => return Err(sem(line, format!("unknown module `{}`", m.trim()))),
                    };
                    let k: i64 = k.trim().parse().map_err(|_| syn(line, body_col, "bad degree"))?;
                    if body.starts_with("from") {
                        BddComplex::from_module(&m, k)
                    } else {
                        BddComplex::resolved_module(&m, k).map_err(wrap)?
                    }
                } else {
                    parse_complex(&r, body, &self.ideal_of()).map_err(wrap)?
                };
                Value::Complex(x)
            }
            "subset" => {
                let r = self.ring(line)?;
                Value::Subset(parse_subset(&r, body, &self.ideal_of()).map_err(wrap)?)
            }
            "poset" => Value::Poset(FinPoset::parse(body).map_err(wrap)?),
            "spfilt" => {
                let pname = match extra {
                    ["on", p] => *p,
                    _ => return Err(syn(line, col0, "expected `spfilt name on P = {...}`")),
                };
                let poset = match self.lookup(pname) {
                    Some(Value::Poset(p)) => p.clone(),
                    _ => return Err(sem(line, format!("unknown poset `{pname}`"))),
                };
                Value::SpFilt { poset: pname.to_string(), filt: parse_spfilt(&poset, body).map_err(wrap)? }
            }
            "filt" => {
                let r = self.ring(line)?;
                Value::Filt(parse_filt(&r, body, &self.ideal_of()).map_err(wrap)?)
            }
            "pairs" => {
                let (y, z) = match extra {
                    ["for", y, z] => (*y, *z),
                    _ => return Err(syn(line, col0, "expected `pairs L for Y Z = {...}`")),
                };
                let subset = |n: &str| match self.lookup(n) {
                    Some(Value::Subset(s)) => Ok(s.clone()),
                    _ => Err(sem(line, format!("unknown subset `{n}`"))),
                };
                let (ys, zs) = (subset(y)?, subset(z)?);
                let inner = braces(body).ok_or_else(|| syn(line, body_col, "pair list must be enclosed in { }"))?;
                let mut names = Vec::new();
                let mut primes = Vec::new();
                for part in split_outside(inner, ';') {
                    let pq = part
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .and_then(|t| t.split_once(','))
                        .ok_or_else(|| syn(line, body_col, format!("expected (p, q), found `{part}`")))?;
                    let (p, q) = (pq.0.trim(), pq.1.trim());
                    let prime = |n: &str| match self.lookup(n) {
                        Some(Value::Prime(p)) => Ok(p.clone()),
                        _ => Err(sem(line, format!("unknown prime `{n}`"))),
                    };
                    primes.push((prime(p)?, prime(q)?));
                    names.push((p.to_string(), q.to_string()));
                }
                let list = PrimePairList::new(&ys, &zs, primes).map_err(wrap)?;
                Value::Pairs { y: y.to_string(), z: z.to_string(), names, list }
            }
            _ => unreachable!(),
        };
        if !matches!(kw, "spfilt" | "pairs") && !extra.is_empty() {
            return Err(syn(line, col0, format!("unexpected `{}`", extra.join(" "))));
        }
        self.session.items.push(Item::Decl(Decl { name, value }));
        self.session.lines.push(line);
        Ok(())
    }

    fn setting(&mut self, line: usize, rest: &str) -> Result<()> {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        let bad = || syn(line, 5, format!("bad setting `{rest}`"));
        let s = match toks.as_slice() {
            ["window", r] => {
                let (a, b) = parse_range(r).ok_or_else(bad)?;
                Setting::Window(a, b)
            }
            ["hrange", r] => {
                let (a, b) = parse_range(r).ok_or_else(bad)?;
                Setting::HRange(a, b)
            }
            ["tmax", n] => Setting::TMax(n.parse().map_err(|_| bad())?),
            ["budget", n] => Setting::Budget(n.parse().map_err(|_| bad())?),
            ["steps", n] => Setting::Steps(n.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        self.session.items.push(Item::Set(s));
        self.session.lines.push(line);
        Ok(())
    }

    fn command(&mut self, line: usize, rest: &str) -> Result<()> {
        let mut tokens = tokenize(rest);
        let expect = match tokens.iter().position(|t| t == "expect") {
            Some(k) => {
                let e = tokens[k + 1..].join(" ");
                tokens.truncate(k);
                if e.is_empty() {
                    return Err(syn(line, 5, "`expect` needs a value"));
                }
                Some(e)
            }
            None => None,
        };
        let cmd = Command { tokens, expect, ring: self.ring.clone() };
        super::run::bind(&self.session, &cmd).map_err(|e| at(line, 5, e))?;
        self.session.items.push(Item::Cmd(cmd));
        self.session.lines.push(line);
        Ok(())
    }
}

/// Parses a session file. Declarations are validated as they are read and
/// may only refer to earlier declarations.
pub fn parse_session(text: &str) -> Result<Session> {
    let mut p = Parser { session: Session { items: Vec::new(), lines: Vec::new() }, ring: None };
    let mut header = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if !header {
            match trimmed.strip_prefix("annwb ") {
                Some("v1") => {
                    header = true;
                    continue;
                }
                Some(v) => return Err(syn(line, indent + 7, format!("unsupported session version `{}`", v.trim()))),
                None => return Err(syn(line, indent + 1, format!("sessions start with `{HEADER}`"))),
            }
        }
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let col0 = indent + kw.len() + 2;
        match kw {
            "ring" | "ideal" | "prime" | "module" | "complex" | "subset" | "poset" | "spfilt" | "filt" | "pairs" => {
                p.decl(line, kw, rest, col0)?
            }
            "set" => p.setting(line, rest)?,
            "cmd" => p.command(line, rest)?,
            _ => return Err(syn(line, indent + 1, format!("unknown statement `{kw}`"))),
        }
    }
    if !header {
        return Err(syn(1, 1, format!("sessions start with `{HEADER}`")));
    }
    Ok(p.session)
}
