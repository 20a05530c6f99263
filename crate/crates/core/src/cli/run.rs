use std::path::PathBuf;

use super::syntax::{parse_range, Command, Item, Session, Setting, Value};
use crate::complexkernel::{
    complex_depth_at_prime, derived_annihilator_ideal, hyper_ext_inf, null_homotopy_mult, tensor_koszul,
    truncation_series, vanishes_at, BddComplex,
};
use crate::error::{Error, Result};
use crate::faltings::{
    annihilator_search, condition1_check, condition2_verify, reduction_step, Condition2Verdict, PrimePairList,
    SearchOutcome,
};
use crate::localcoh::{
    annihilation_test, graded_local_cohomology, lc_vanishing_bound, torsion_submodule, AnnihilationVerdict,
    GradedWindow, SpcSubset,
};
use crate::modkernel::{annihilator_and_support, ext, grade, local_depth, mcm_test, resolve, FgModule};
use crate::ringkernel::{set_cache_dir, with_step_budget, Ideal, Poly, PolyRing, PrimeIdeal, DEFAULT_STEP_BUDGET};
use crate::spfilt::{
    enumerate_filtrations, f_map, roundtrip_verify, t_function_check, weak_cousin_check, FinPoset, SpFiltration,
    TCheckMode,
};
use crate::tstruct::{aisle_membership, lemma19_check, psi_roundtrip_check, Lemma19Verdict, RingFiltration};
use crate::xint::XInt;

pub const DEFAULT_WINDOW: (i64, i64) = (-6, 2);
pub const DEFAULT_HRANGE: (i64, i64) = (-2, 2);
pub const DEFAULT_SEARCH_BUDGET: usize = crate::faltings::DEFAULT_BUDGET;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub lines: Vec<String>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub status: Status,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

/// Overrides from the command line; unset fields fall back to `set` lines.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub window: Option<(i64, i64)>,
    pub hrange: Option<(i64, i64)>,
    pub tmax: Option<u32>,
    pub budget: Option<usize>,
    pub steps: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy)]
enum K {
    Ideal,
    Prime,
    OptPrime,
    Module,
    Cx,
    Subset,
    Poset,
    SpFilt,
    Filt,
    Pairs,
    Int,
    OptInt,
    Poly,
    Kw(&'static str),
    Mode,
    Primes,
    Range,
    VarPrimes,
    VarPolys,
}

#[derive(Clone, Debug)]
pub(crate) enum B {
    Ideal(Ideal),
    Prime(PrimeIdeal),
    Module(FgModule),
    Cx(BddComplex),
    Subset(SpcSubset),
    Poset(FinPoset),
    SpFilt(SpFiltration),
    Filt(RingFiltration),
    Pairs(PrimePairList),
    Int(i64),
    Poly(Poly),
    Mode(TCheckMode),
    Primes(Vec<PrimeIdeal>),
    Range(Option<(i64, i64)>),
    Polys(Vec<Poly>),
    Absent,
}

fn signature(verb: &str) -> Option<&'static [K]> {
    use K::*;
    Some(match verb {
        "gb" | "dim" => &[Ideal],
        "nf" => &[Poly, Kw("mod"), Ideal],
        "sum" | "product" | "intersect" | "quotient" | "saturate" | "contains" | "equals" | "radical_contains" => {
            &[Ideal, Ideal]
        }
        "height" => &[Prime, OptPrime],
        "avoid" => &[Ideal, VarPrimes],
        "resolve" => &[Module, Int],
        "ext" => &[Int, Module, Module],
        "ann" | "support" => &[Module],
        "grade" => &[Ideal, Module],
        "depth" | "vanishes" => &[Cx, Kw("at"), Prime],
        "mcm" => &[Module, Kw("at"), Prime],
        "cohomology" | "bounds" | "truncations" | "dann" => &[Cx],
        "koszul" => &[Cx, VarPolys],
        "homotopy" => &[Cx, Poly],
        "hyperext" => &[Ideal, Cx],
        "lc" => &[Subset, Cx, OptInt],
        "lcbound" => &[Subset, Cx],
        "torsion" => &[Subset, Module],
        "annihilate" => &[Ideal, Subset, Cx, Int],
        "spfilt roundtrip" | "spfilt count" => &[Poset, Int, Int],
        "spfilt f" | "spfilt cousin" => &[SpFilt],
        "spfilt tcheck" => &[SpFilt, Mode],
        "tstruct member" => &[Cx, Filt],
        "tstruct psi" => &[Filt, Primes, Range],
        "tstruct lemma19" => &[Filt, Cx, Int, Primes],
        "faltings check1" => &[Cx, Int, Pairs],
        "faltings verify2" => &[Cx, Subset, Subset, Int, Ideal],
        "faltings reduce" => &[Cx, Subset],
        "faltings search" => &[Cx, Subset, Subset, Int],
        _ => return None,
    })
}

fn is_literal(t: &str) -> bool {
    t.starts_with(['<', '[', '{', '(']) || t.starts_with("V<") || t.contains('=')
}

/// Splits `--window a..b` style options off a command.
fn split_options(tokens: &[String]) -> Result<(Vec<String>, RunOptions)> {
    let mut rest = Vec::new();
    let mut o = RunOptions::default();
    let mut k = 0;
    while k < tokens.len() {
        let t = &tokens[k];
        if let Some(opt) = t.strip_prefix("--") {
            let v = tokens.get(k + 1).ok_or_else(|| Error::Invalid(format!("--{opt} needs a value")))?;
            let bad = || Error::Invalid(format!("bad value `{v}` for --{opt}"));
            match opt {
                "window" => o.window = Some(parse_range(v).ok_or_else(bad)?),
                "hrange" => o.hrange = Some(parse_range(v).ok_or_else(bad)?),
                "tmax" => o.tmax = Some(v.parse().map_err(|_| bad())?),
                "budget" => o.budget = Some(v.parse().map_err(|_| bad())?),
                "steps" => o.steps = Some(v.parse().map_err(|_| bad())?),
                _ => return Err(Error::Invalid(format!("unknown option --{opt}"))),
            }
            k += 2;
        } else {
            rest.push(t.clone());
            k += 1;
        }
    }
    Ok((rest, o))
}

pub(crate) struct Bound {
    pub verb: String,
    pub key: String,
    pub args: Vec<B>,
    pub opts: RunOptions,
}

fn value_ring(v: &Value) -> Option<PolyRing> {
    v.ring().cloned()
}

/// Resolves a command's arguments against earlier declarations.
pub(crate) fn bind(session: &Session, cmd: &Command) -> Result<Bound> {
    let (tokens, opts) = split_options(&cmd.tokens)?;
    let (verb, first) = match tokens.first().map(String::as_str) {
        Some(g @ ("spfilt" | "tstruct" | "faltings")) => {
            let sub = tokens.get(1).ok_or_else(|| Error::Invalid(format!("`{g}` needs a subcommand")))?;
            (format!("{g} {sub}"), 2)
        }
        Some(v) => (v.to_string(), 1),
        None => return Err(Error::Invalid("empty command".into())),
    };
    let sig = signature(&verb).ok_or_else(|| Error::Invalid(format!("unknown command `{verb}`")))?;
    let mut keyed: Vec<(String, String)> = Vec::new();
    let mut pos: Vec<String> = Vec::new();
    for t in &tokens[first..] {
        match t.split_once('=') {
            Some((k, v)) if !t.starts_with(['<', '(', '[', '{', 'V']) => keyed.push((k.to_string(), v.to_string())),
            _ => pos.push(t.clone()),
        }
    }
    let ring = pos
        .iter()
        .chain(keyed.iter().map(|kv| &kv.1))
        .find_map(|t| session.lookup(t).and_then(value_ring))
        .or_else(|| cmd.ring.clone());
    let need_ring = || ring.clone().ok_or_else(|| Error::Semantic { line: 0, msg: "no ring declared yet".into() });
    let lookup =
        |t: &str| session.lookup(t).ok_or_else(|| Error::Semantic { line: 0, msg: format!("unknown name `{t}`") });
    let wrong = |t: &str, want: &str| Error::Semantic { line: 0, msg: format!("`{t}` is not {want}") };
    let prime_named = |t: &str| -> Result<PrimeIdeal> {
        match lookup(t)? {
            Value::Prime(p) => Ok(p.clone()),
            _ => Err(wrong(t, "a prime")),
        }
    };
    let mut args = Vec::new();
    let mut key_parts = Vec::new();
    let mut k = 0;
    let take = |k: &mut usize| -> Option<String> {
        let t = pos.get(*k).cloned();
        if t.is_some() {
            *k += 1;
        }
        t
    };
    let missing = |what: &str| Error::Invalid(format!("`{verb}` expects {what}"));
    for kind in sig {
        let b = match *kind {
            K::Kw(w) => {
                let t = take(&mut k).ok_or_else(|| missing(w))?;
                if t != w {
                    return Err(Error::Invalid(format!("expected `{w}`, found `{t}`")));
                }
                continue;
            }
            K::Ideal => {
                let t = take(&mut k).ok_or_else(|| missing("an ideal"))?;
                if t.starts_with('<') {
                    B::Ideal(Ideal::parse(&need_ring()?, &t)?)
                } else {
                    match lookup(&t)? {
                        Value::Ideal(a) => B::Ideal(a.clone()),
                        Value::Prime(p) => B::Ideal(p.ideal().clone()),
                        _ => return Err(wrong(&t, "an ideal")),
                    }
                }
            }
            K::Prime | K::OptPrime => match take(&mut k) {
                Some(t) if t.starts_with('<') => B::Prime(PrimeIdeal::certify(Ideal::parse(&need_ring()?, &t)?)?),
                Some(t) => B::Prime(prime_named(&t)?),
                None if matches!(kind, K::OptPrime) => B::Absent,
                None => return Err(missing("a prime")),
            },
            K::Module => {
                let t = take(&mut k).ok_or_else(|| missing("a module"))?;
                match lookup(&t)? {
                    Value::Module(m) => B::Module(m.clone()),
                    _ => return Err(wrong(&t, "a module")),
                }
            }
            K::Cx => {
                let t = take(&mut k).ok_or_else(|| missing("a complex"))?;
                match lookup(&t)? {
                    Value::Complex(x) => B::Cx(x.clone()),
                    Value::Module(m) => B::Module(m.clone()),
                    _ => return Err(wrong(&t, "a complex or module")),
                }
            }
            K::Subset => {
                let t = take(&mut k).ok_or_else(|| missing("a subset"))?;
                if let Some(rest) = t.strip_prefix('V') {
                    if rest.starts_with('<') {
                        args.push(B::Subset(SpcSubset::closed(Ideal::parse(&need_ring()?, rest)?)));
                        continue;
                    }
                }
                match lookup(&t)? {
                    Value::Subset(s) => B::Subset(s.clone()),
                    Value::Ideal(a) => B::Subset(SpcSubset::closed(a.clone())),
                    Value::Prime(p) => B::Subset(SpcSubset::closed(p.ideal().clone())),
                    _ => return Err(wrong(&t, "a subset")),
                }
            }
            K::Poset => {
                let t = take(&mut k).ok_or_else(|| missing("a poset"))?;
                match lookup(&t)? {
                    Value::Poset(p) => B::Poset(p.clone()),
                    _ => return Err(wrong(&t, "a poset")),
                }
            }
            K::SpFilt => {
                let t = take(&mut k).ok_or_else(|| missing("an sp-filtration"))?;
                match lookup(&t)? {
                    Value::SpFilt { filt, .. } => B::SpFilt(filt.clone()),
                    _ => return Err(wrong(&t, "an sp-filtration")),
                }
            }
            K::Filt => {
                let t = take(&mut k).ok_or_else(|| missing("a filtration"))?;
                match lookup(&t)? {
                    Value::Filt(f) => B::Filt(f.clone()),
                    _ => return Err(wrong(&t, "a filtration")),
                }
            }
            K::Pairs => {
                let v = keyed
                    .iter()
                    .find(|kv| kv.0 == "pairs")
                    .map(|kv| kv.1.clone())
                    .ok_or_else(|| missing("pairs=<list>"))?;
                match lookup(&v)? {
                    Value::Pairs { list, .. } => B::Pairs(list.clone()),
                    _ => return Err(wrong(&v, "a pair list")),
                }
            }
            K::Int | K::OptInt => match take(&mut k) {
                Some(t) => B::Int(t.parse().map_err(|_| Error::Invalid(format!("expected an integer, found `{t}`")))?),
                None if matches!(kind, K::OptInt) => B::Absent,
                None => return Err(missing("an integer")),
            },
            K::Poly => {
                let t = take(&mut k).ok_or_else(|| missing("a polynomial"))?;
                B::Poly(need_ring()?.parse(&t)?)
            }
            K::Mode => {
                let t = take(&mut k).ok_or_else(|| missing("full or saturated"))?;
                B::Mode(match t.as_str() {
                    "full" => TCheckMode::Full,
                    "saturated" => TCheckMode::Saturated,
                    _ => return Err(Error::Invalid(format!("expected full or saturated, found `{t}`"))),
                })
            }
            K::Primes => match keyed.iter().find(|kv| kv.0 == "primes" || kv.0 == "cousin") {
                Some((_, v)) => {
                    let inner = v
                        .strip_prefix('[')
                        .and_then(|x| x.strip_suffix(']'))
                        .ok_or_else(|| Error::Invalid(format!("expected [p, q, ...], found `{v}`")))?;
                    let ps = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(prime_named)
                        .collect::<Result<Vec<_>>>()?;
                    B::Primes(ps)
                }
                None => B::Primes(Vec::new()),
            },
            K::Range => match keyed.iter().find(|kv| kv.0 == "range") {
                Some((_, v)) => {
                    B::Range(Some(parse_range(v).ok_or_else(|| Error::Invalid(format!("bad range `{v}`")))?))
                }
                None => B::Range(None),
            },
            K::VarPrimes => {
                let mut ps = Vec::new();
                while let Some(t) = take(&mut k) {
                    key_parts.push(t.clone());
                    ps.push(prime_named(&t)?);
                }
                args.push(B::Primes(ps));
                continue;
            }
            K::VarPolys => {
                let r = need_ring()?;
                let mut ps = Vec::new();
                while let Some(t) = take(&mut k) {
                    ps.push(r.parse(&t)?);
                }
                args.push(B::Polys(ps));
                continue;
            }
        };
        if let Some(t) = pos.get(k.wrapping_sub(1)) {
            if !matches!(b, B::Absent | B::Primes(_) | B::Range(_) | B::Pairs(_)) && !is_literal(t) {
                key_parts.push(t.clone());
            }
        }
        args.push(b);
    }
    if k < pos.len() {
        return Err(Error::Invalid(format!("unexpected argument `{}`", pos[k])));
    }
    let word = verb.rsplit(' ').next().expect("nonempty").to_uppercase();
    let key = if key_parts.is_empty() { word } else { format!("{word} {}", key_parts.join(" ")) };
    Ok(Bound { verb, key, args, opts })
}

struct Env {
    win: GradedWindow,
    hrange: (i64, i64),
    budget: usize,
    steps: usize,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn fmt_gb(ring: &PolyRing, gens: &[Poly]) -> String {
    let parts: Vec<String> = gens.iter().map(|g| ring.fmt_poly(g)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn as_complex(b: &B) -> BddComplex {
    match b {
        B::Cx(x) => x.clone(),
        B::Module(m) => BddComplex::from_module(m, 0),
        _ => unreachable!("bound as a complex"),
    }
}

macro_rules! arg {
    ($args:expr, $i:expr, $v:ident) => {
        match &$args[$i] {
            B::$v(x) => x,
            other => unreachable!("argument {} bound as {:?}", $i, other),
        }
    };
}

fn line(key: &str, v: impl std::fmt::Display) -> String {
    format!("{key} = {v}")
}

fn dispatch(b: &Bound, env: &Env) -> Result<Fragment> {
    let a = &b.args;
    let key = b.key.as_str();
    let mut lines = Vec::new();
    let mut status = Status::Pass;
    match b.verb.as_str() {
        "gb" => {
            let i = arg!(a, 0, Ideal);
            lines.push(line(key, fmt_gb(i.ring(), &i.groebner_basis()?)));
        }
        "nf" => {
            let (f, i) = (arg!(a, 0, Poly), arg!(a, 1, Ideal));
            lines.push(line(key, i.ring().fmt_poly(&i.normal_form(f)?)));
        }
        "sum" | "product" | "intersect" | "quotient" | "saturate" => {
            let (i, j) = (arg!(a, 0, Ideal), arg!(a, 1, Ideal));
            let r = match b.verb.as_str() {
                "sum" => i.sum(j)?,
                "product" => i.product(j)?,
                "intersect" => i.intersection(j)?,
                "quotient" => i.quotient(j)?,
                _ => i.saturation(j)?,
            };
            lines.push(line(key, r.minimalized()?));
        }
        "contains" | "equals" | "radical_contains" => {
            let (i, j) = (arg!(a, 0, Ideal), arg!(a, 1, Ideal));
            let r = match b.verb.as_str() {
                "contains" => i.contains(j)?,
                "equals" => i.equals(j)?,
                _ => i.radical_contains(j)?,
            };
            lines.push(line(key, r));
        }
        "dim" => {
            let d = arg!(a, 0, Ideal).dimension()?;
            lines.push(line(key, d.map(|d| XInt::Fin(d as i64)).unwrap_or(XInt::NegInf)));
        }
        "height" => {
            let p = arg!(a, 0, Prime);
            let h = match &a[1] {
                B::Prime(q) => p.height_over(q)?,
                _ => p.height()?,
            };
            lines.push(line(key, h));
        }
        "avoid" => {
            let (i, ps) = (arg!(a, 0, Ideal), arg!(a, 1, Primes));
            lines.push(line(key, i.ring().fmt_poly(&i.prime_avoid(ps)?)));
        }
        "resolve" => {
            let (m, n) = (arg!(a, 0, Module), arg!(a, 1, Int));
            let res = resolve(m, (*n).max(0) as usize)?;
            lines.push(line(key, format!("ranks {:?}", res.ranks())));
        }
        "ext" => {
            let (i, m, n) = (arg!(a, 0, Int), arg!(a, 1, Module), arg!(a, 2, Module));
            let e = ext((*i).max(0) as usize, m, n)?;
            lines.push(line(key, if e.is_zero()? { "0".to_string() } else { e.display() }));
        }
        "ann" => lines.push(line(key, arg!(a, 0, Module).annihilator()?)),
        "support" => lines.push(line(key, annihilator_and_support(arg!(a, 0, Module))?.1)),
        "grade" => lines.push(line(key, grade(arg!(a, 0, Ideal), arg!(a, 1, Module))?)),
        "depth" => {
            let p = arg!(a, 1, Prime);
            let d = match &a[0] {
                B::Module(m) => local_depth(m, p)?,
                x => complex_depth_at_prime(&as_complex(x), p)?,
            };
            lines.push(line(key, d));
        }
        "vanishes" => lines.push(line(key, vanishes_at(&as_complex(&a[0]), arg!(a, 1, Prime))?)),
        "mcm" => lines.push(line(key, mcm_test(arg!(a, 0, Module), arg!(a, 1, Prime))?)),
        "cohomology" => {
            let x = as_complex(&a[0]);
            let nz = x.nonzero_degrees()?;
            lines.push(line(key, format!("{nz:?}")));
            for i in nz {
                lines.push(line(&format!("H {} {i}", &key[11..]), x.cohomology_module(i)?.prune()?.module.display()));
            }
        }
        "bounds" => {
            let (s, i) = as_complex(&a[0]).sup_inf()?;
            lines.push(line(key, format!("sup={s} inf={i}")));
        }
        "truncations" => {
            let ser = truncation_series(&as_complex(&a[0]))?;
            lines.push(line(key, format!("{:?}", ser.degrees())));
            for st in &ser.stages {
                lines.push(format!("STAGE s={} head={}", st.s, st.head.prune()?.module.display()));
            }
        }
        "koszul" => {
            let x = tensor_koszul(&as_complex(&a[0]), arg!(a, 1, Polys))?;
            lines.push(line(key, x.display()));
        }
        "homotopy" => {
            let x = as_complex(&a[0]);
            match null_homotopy_mult(&x, arg!(a, 1, Poly))? {
                Some(h) => {
                    let maps: Vec<String> =
                        (x.lo()..=x.hi()).map(|i| format!("h({i})={}", h.at(&x, i).fmt(x.ring()))).collect();
                    lines.push(line(key, format!("found {}", maps.join(" "))));
                }
                None => {
                    lines.push(line(key, "none"));
                    status = Status::Fail;
                }
            }
        }
        "dann" => {
            let d = derived_annihilator_ideal(&as_complex(&a[0]))?;
            lines.push(line(key, format!("{} power={}", d.ideal, d.power)));
        }
        "hyperext" => lines.push(line(key, hyper_ext_inf(arg!(a, 0, Ideal), &as_complex(&a[1]))?)),
        "lc" => {
            let (z, x) = (arg!(a, 0, Subset), as_complex(&a[1]));
            let is: Vec<i64> = match &a[2] {
                B::Int(i) => vec![*i],
                _ => (env.hrange.0..=env.hrange.1).collect(),
            };
            for i in is {
                for p in graded_local_cohomology(z, &x, i, &env.win)? {
                    if !p.stable {
                        status = Status::Inconclusive;
                    }
                    lines.push(p.report_line());
                }
            }
            if status == Status::Inconclusive {
                lines.push(format!("INCONCLUSIVE {key}: some pieces did not stabilize by t={}", env.win.t_max));
            }
        }
        "lcbound" => lines.push(line(key, lc_vanishing_bound(arg!(a, 0, Subset), &as_complex(&a[1]))?)),
        "torsion" => {
            let t = torsion_submodule(arg!(a, 0, Subset), arg!(a, 1, Module))?;
            lines.push(line(key, t.module.prune()?.module.display()));
        }
        "annihilate" => {
            let rep = annihilation_test(
                arg!(a, 0, Ideal),
                arg!(a, 1, Subset),
                &as_complex(&a[2]),
                *arg!(a, 3, Int),
                &env.win,
            )?;
            match rep.verdict {
                AnnihilationVerdict::Holds { certified } => {
                    lines.push(line(key, format!("holds certified={}", yes(certified))))
                }
                AnnihilationVerdict::Fails(w) => {
                    lines.push(line(
                        key,
                        format!("fails i={} d={} g={} class={} image={}", w.i, w.d, w.g, w.class, w.image),
                    ));
                    status = Status::Fail;
                }
                AnnihilationVerdict::Inconclusive(m) => {
                    lines.push(line(key, format!("INCONCLUSIVE {m}")));
                    status = Status::Inconclusive;
                }
            }
        }
        "spfilt roundtrip" => {
            let rep = roundtrip_verify(arg!(a, 0, Poset), *arg!(a, 1, Int), *arg!(a, 2, Int))?;
            if !rep.ok() {
                status = Status::Fail;
            }
            lines.push(rep.report_line());
        }
        "spfilt count" => {
            let n = enumerate_filtrations(arg!(a, 0, Poset), *arg!(a, 1, Int), *arg!(a, 2, Int))?.len();
            lines.push(line(key, n));
        }
        "spfilt f" => lines.push(line(key, f_map(arg!(a, 0, SpFilt)).display())),
        "spfilt cousin" => {
            let phi = arg!(a, 0, SpFilt);
            match weak_cousin_check(phi) {
                None => lines.push(line(key, "ok")),
                Some(v) => {
                    let n = phi.poset().names();
                    lines.push(line(key, format!("fails p={} q={} i={}", n[v.p], n[v.q], v.i)));
                    status = Status::Fail;
                }
            }
        }
        "spfilt tcheck" => {
            let phi = arg!(a, 0, SpFilt);
            match t_function_check(&f_map(phi), *arg!(a, 1, Mode)) {
                None => lines.push(line(key, "ok")),
                Some((p, q)) => {
                    let n = phi.poset().names();
                    lines.push(line(key, format!("fails p={} q={}", n[p], n[q])));
                    status = Status::Fail;
                }
            }
        }
        "tstruct member" => match aisle_membership(&as_complex(&a[0]), arg!(a, 1, Filt))? {
            None => lines.push(line(key, "yes")),
            Some(v) => {
                let r = v.annihilator.ring().clone();
                lines.push(line(
                    key,
                    format!("no degree={} ann={} direction={}", v.degree, v.annihilator, r.fmt_poly(&v.direction)),
                ));
                status = Status::Fail;
            }
        },
        "tstruct psi" => {
            let range = arg!(a, 2, Range).unwrap_or(env.hrange);
            let rep = psi_roundtrip_check(arg!(a, 0, Filt), arg!(a, 1, Primes), range)?;
            if !rep.ok() {
                status = Status::Fail;
            }
            lines.push(rep.report_line());
        }
        "tstruct lemma19" => {
            let (phi, x, n, ps) = (arg!(a, 0, Filt), as_complex(&a[1]), *arg!(a, 2, Int), arg!(a, 3, Primes));
            match lemma19_check(phi, &x, n, &env.win, ps) {
                Ok(Lemma19Verdict::Certificate { ideal, .. }) => {
                    lines.push(line(key, format!("certificate {}", ideal.minimalized()?)))
                }
                Ok(Lemma19Verdict::Inconclusive(m)) => {
                    lines.push(line(key, format!("INCONCLUSIVE {m}")));
                    status = Status::Inconclusive;
                }
                Err(Error::Precondition(m)) => {
                    lines.push(line(key, format!("rejected {m}")));
                    status = Status::Fail;
                }
                Err(e) => return Err(e),
            }
        }
        "faltings check1" => {
            let (x, n, pl) = (as_complex(&a[0]), *arg!(a, 1, Int), arg!(a, 2, Pairs));
            match condition1_check(&x, n, pl)? {
                None => lines.push(line(key, "holds")),
                Some(v) => {
                    let (p, q) = &pl.pairs()[v.index];
                    lines.push(line(
                        key,
                        format!("fails pair=({}, {}) height={} depth={}", p.ideal(), q.ideal(), v.height, v.depth),
                    ));
                    status = Status::Fail;
                }
            }
        }
        "faltings verify2" => {
            let (x, y, z, n, bb) =
                (as_complex(&a[0]), arg!(a, 1, Subset), arg!(a, 2, Subset), *arg!(a, 3, Int), arg!(a, 4, Ideal));
            match condition2_verify(&x, y, z, n, bb, &env.win)? {
                Condition2Verdict::Holds { certified } => {
                    lines.push(line(key, format!("holds certified={}", yes(certified))))
                }
                Condition2Verdict::FailsContainment(g) => {
                    lines.push(line(key, format!("fails leg=i direction={}", x.ring().fmt_poly(&g))));
                    status = Status::Fail;
                }
                Condition2Verdict::FailsAnnihilation(w) => {
                    lines.push(line(
                        key,
                        format!("fails leg=ii i={} d={} g={} class={} image={}", w.i, w.d, w.g, w.class, w.image),
                    ));
                    status = Status::Fail;
                }
                Condition2Verdict::Inconclusive(m) => {
                    lines.push(line(key, format!("INCONCLUSIVE {m}")));
                    status = Status::Inconclusive;
                }
            }
        }
        "faltings reduce" => {
            let st = reduction_step(&as_complex(&a[0]), arg!(a, 1, Subset))?;
            lines.push(st.line(1));
            lines.push(line(
                key,
                if st.is_trivial() { "trivial".to_string() } else { format!("X'={}", st.x_prime.display()) },
            ));
        }
        "faltings search" => {
            let (x, y, z, n) = (as_complex(&a[0]), arg!(a, 1, Subset), arg!(a, 2, Subset), *arg!(a, 3, Int));
            let rep = annihilator_search(&x, y, z, n, &env.win, env.budget)?;
            lines.extend(rep.trace);
            match rep.outcome {
                SearchOutcome::Found { b, .. } => lines.push(line(key, format!("found b={b}"))),
                SearchOutcome::NotFound { tried } => {
                    lines.push(line(key, format!("INCONCLUSIVE not-found tried={tried}")));
                    status = Status::Inconclusive;
                }
            }
        }
        v => return Err(Error::Internal(format!("no handler for `{v}`"))),
    }
    Ok(Fragment { lines, status })
}

fn settings(session: &Session, cli: &RunOptions) -> Env {
    let mut window = DEFAULT_WINDOW;
    let mut hrange = DEFAULT_HRANGE;
    let mut tmax = crate::localcoh::DEFAULT_TMAX;
    let mut budget = DEFAULT_SEARCH_BUDGET;
    let mut steps = DEFAULT_STEP_BUDGET;
    for item in &session.items {
        if let Item::Set(s) = item {
            match *s {
                Setting::Window(a, b) => window = (a, b),
                Setting::HRange(a, b) => hrange = (a, b),
                Setting::TMax(t) => tmax = t,
                Setting::Budget(b) => budget = b,
                Setting::Steps(s) => steps = s,
            }
        }
    }
    let window = cli.window.unwrap_or(window);
    Env {
        win: GradedWindow::new(window.0, window.1).with_tmax(cli.tmax.unwrap_or(tmax)),
        hrange: cli.hrange.unwrap_or(hrange),
        budget: cli.budget.unwrap_or(budget),
        steps: cli.steps.unwrap_or(steps),
    }
}

/// Runs one command; errors become an `ERROR` line.
pub fn run_command(session: &Session, cmd: &Command, base: &RunOptions) -> Fragment {
    let bound = match bind(session, cmd) {
        Ok(b) => b,
        Err(e) => {
            return Fragment { lines: vec![format!("ERROR {} = {e}", cmd.tokens.join(" "))], status: Status::Error }
        }
    };
    let mut env = settings(session, base);
    let o = &bound.opts;
    if let Some((lo, hi)) = o.window {
        env.win = GradedWindow::new(lo, hi).with_tmax(env.win.t_max);
    }
    if let Some(t) = o.tmax {
        env.win.t_max = t;
    }
    env.hrange = o.hrange.unwrap_or(env.hrange);
    env.budget = o.budget.unwrap_or(env.budget);
    env.steps = o.steps.unwrap_or(env.steps);
    let mut frag = match with_step_budget(env.steps, || dispatch(&bound, &env)) {
        Ok(f) => f,
        Err(e @ (Error::ResourceLimit(_) | Error::Inconclusive(_))) => {
            Fragment { lines: vec![format!("{} = INCONCLUSIVE {e}", bound.key)], status: Status::Inconclusive }
        }
        Err(e) => Fragment { lines: vec![format!("ERROR {} = {e}", bound.key)], status: Status::Error },
    };
    if let Some(want) = &cmd.expect {
        let first = frag.lines.first().cloned().unwrap_or_default();
        let got = match first.split_once(" = ") {
            Some((_, v)) => v.to_string(),
            None => first.clone(),
        };
        if got.trim() == want.trim() {
            frag.status = Status::Pass;
        } else {
            frag.lines.push(format!("EXPECT {} = mismatch expected {want}", bound.key));
            frag.status = Status::Fail;
        }
    }
    frag
}

/// Runs every command in order and combines the fragments.
pub fn run_session(session: &Session, opts: &RunOptions) -> Report {
    if let Some(d) = &opts.cache_dir {
        set_cache_dir(Some(d.clone()));
    }
    let mut text = String::new();
    let mut status = Status::Pass;
    for (_, cmd) in session.commands() {
        let f = run_command(session, cmd, opts);
        for l in &f.lines {
            text.push_str(l);
            text.push('\n');
        }
        status = status.max(f.status);
    }
    Report { text, status }
}

/// Parses and runs; a parse or semantic error yields exit status 2.
pub fn run_text(text: &str, opts: &RunOptions) -> Report {
    match super::syntax::parse_session(text) {
        Ok(s) => run_session(&s, opts),
        Err(e) => Report { text: format!("ERROR = {e}\n"), status: Status::Error },
    }
}
