use super::filtration::{f_map, phi_map, t_function_check, weak_cousin_check, SpFiltration, TCheckMode, TFunction};
use super::poset::{ElemSet, FinPoset};
use crate::error::{Error, Result};
use crate::xint::XInt;

pub const MAX_ENUM_ELEMENTS: usize = 10;
pub const MAX_ENUM_WIDTH: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumWhat {
    SpFiltrations,
    TFunctions,
    OrderPreserving,
}

#[derive(Clone, Debug)]
pub enum Enumerated {
    Filtrations(Vec<SpFiltration>),
    Functions(Vec<TFunction>),
}

impl Enumerated {
    pub fn len(&self) -> usize {
        match self {
            Enumerated::Filtrations(v) => v.len(),
            Enumerated::Functions(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn guard(poset: &FinPoset, lo: i64, hi: i64) -> Result<()> {
    if poset.len() > MAX_ENUM_ELEMENTS || hi - lo > MAX_ENUM_WIDTH || hi < lo {
        return Err(Error::ResourceLimit(format!(
            "enumeration needs at most {MAX_ENUM_ELEMENTS} elements and 0 ≤ hi - lo ≤ {MAX_ENUM_WIDTH}"
        )));
    }
    Ok(())
}

/// Every sp-filtration with window `[lo, hi]`.
pub fn enumerate_filtrations(poset: &FinPoset, lo: i64, hi: i64) -> Result<Vec<SpFiltration>> {
    guard(poset, lo, hi)?;
    let ups = poset.up_sets();
    let len = (hi - lo + 3) as usize;
    let mut out = Vec::new();
    let mut cur: Vec<ElemSet> = Vec::with_capacity(len);
    fn go(ups: &[ElemSet], len: usize, cur: &mut Vec<ElemSet>, out: &mut Vec<Vec<ElemSet>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let prev = cur.last().copied();
        for &u in ups {
            if prev.is_none_or(|p| u & !p == 0) {
                cur.push(u);
                go(ups, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut raw = Vec::new();
    go(&ups, len, &mut cur, &mut raw);
    for levels in raw {
        out.push(SpFiltration::new(poset, lo, hi, levels)?);
    }
    Ok(out)
}

/// Every order-preserving map to `{-∞} ∪ [lo, hi + 1] ∪ {+∞}`.
pub fn enumerate_order_preserving(poset: &FinPoset, lo: i64, hi: i64) -> Result<Vec<TFunction>> {
    guard(poset, lo, hi)?;
    let mut vals = vec![XInt::NegInf];
    vals.extend((lo..=hi + 1).map(XInt::Fin));
    vals.push(XInt::PosInf);
    let n = poset.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(poset: &FinPoset, vals: &[XInt], cur: &mut Vec<XInt>, out: &mut Vec<Vec<XInt>>) {
        let k = cur.len();
        if k == poset.len() {
            out.push(cur.clone());
            return;
        }
        for &v in vals {
            let ok = (0..k).all(|j| (!poset.le(j, k) || cur[j] <= v) && (!poset.le(k, j) || v <= cur[j]));
            if ok {
                cur.push(v);
                go(poset, vals, cur, out);
                cur.pop();
            }
        }
    }
    let mut raw = Vec::new();
    go(poset, &vals, &mut cur, &mut raw);
    for v in raw {
        out.push(TFunction::new(poset, v)?);
    }
    Ok(out)
}

pub fn enumerate(poset: &FinPoset, lo: i64, hi: i64, what: EnumWhat) -> Result<Enumerated> {
    Ok(match what {
        EnumWhat::SpFiltrations => Enumerated::Filtrations(enumerate_filtrations(poset, lo, hi)?),
        EnumWhat::OrderPreserving => Enumerated::Functions(enumerate_order_preserving(poset, lo, hi)?),
        EnumWhat::TFunctions => Enumerated::Functions(
            enumerate_order_preserving(poset, lo, hi)?
                .into_iter()
                .filter(|f| t_function_check(f, TCheckMode::Full).is_none())
                .collect(),
        ),
    })
}

/// Counts from an exhaustive check of the `F`/`Φ` correspondence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub filtrations: usize,
    pub functions: usize,
    pub weak_cousin: usize,
    pub phi_f_failures: usize,
    pub f_phi_failures: usize,
    pub cousin_mismatches: usize,
    pub mode_mismatches: usize,
}

impl RoundtripReport {
    pub fn discrepancies(&self) -> usize {
        self.phi_f_failures + self.f_phi_failures + self.cousin_mismatches + self.mode_mismatches
    }

    pub fn ok(&self) -> bool {
        self.discrepancies() == 0
    }

    pub fn report_line(&self) -> String {
        if self.ok() {
            format!("ROUNDTRIP ok filtrations={}", self.filtrations)
        } else {
            format!("ROUNDTRIP fail filtrations={} discrepancies={}", self.filtrations, self.discrepancies())
        }
    }
}

pub fn roundtrip_verify(poset: &FinPoset, lo: i64, hi: i64) -> Result<RoundtripReport> {
    let phis = enumerate_filtrations(poset, lo, hi)?;
    let fs = enumerate_order_preserving(poset, lo, hi)?;
    let mut rep = RoundtripReport { filtrations: phis.len(), functions: fs.len(), ..Default::default() };
    for phi in &phis {
        let f = f_map(phi);
        if phi_map(&f, lo, hi).ok().as_ref() != Some(phi) {
            rep.phi_f_failures += 1;
        }
        let wc = weak_cousin_check(phi).is_none();
        if wc {
            rep.weak_cousin += 1;
        }
        let full = t_function_check(&f, TCheckMode::Full).is_none();
        let sat = t_function_check(&f, TCheckMode::Saturated).is_none();
        if full != sat {
            rep.mode_mismatches += 1;
        }
        if wc != full {
            rep.cousin_mismatches += 1;
        }
    }
    for f in &fs {
        match phi_map(f, lo, hi) {
            Ok(phi) if f_map(&phi) == *f => {}
            _ => rep.f_phi_failures += 1,
        }
    }
    Ok(rep)
}
