use super::complex::BddComplex;
use crate::error::{Error, Result};
use crate::modkernel::{resolve, FgModule, FreeResolution, Matrix};
use crate::ringkernel::{Ideal, PolyRing, PrimeIdeal};
use crate::xint::XInt;

pub(crate) fn ring_dim(ring: &PolyRing) -> Result<usize> {
    Ok(Ideal::zero(ring).dimension()?.unwrap_or(0))
}

/// `Hom(F, X)` for a free resolution `F` of a module:
/// `Hom^n = ⊕_k (X^(n-k))^(f_k)`, `D φ = d∘φ - (-1)^n φ∘∂`.
pub fn hom_complex(res: &FreeResolution, x: &BddComplex) -> Result<BddComplex> {
    let ring = x.ring();
    if x.is_empty() {
        return Ok(BddComplex::zero(ring));
    }
    let l = res.length() as i64;
    let f = |k: i64| if k < 0 || k > l { 0 } else { res.rank(k as usize) };
    let (lo, hi) = (x.lo(), x.hi() + l);
    // offsets of the (k, f_k copies of X^(n-k)) blocks inside Hom^n
    let layout = |n: i64| {
        let mut out = Vec::new();
        let mut off = 0;
        for k in 0..=l {
            let q = n - k;
            let r = x.rank(q);
            if r > 0 && f(k) > 0 {
                out.push((k, q, off));
                off += f(k) * r;
            }
        }
        (out, off)
    };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let (blocks, rank) = layout(n);
        let rels: Vec<Matrix> = blocks.iter().map(|&(k, q, _)| x.rels(q).repeat_diag(f(k))).collect();
        let refs: Vec<&Matrix> = rels.iter().collect();
        terms.push(FgModule::new(ring, rank, Matrix::block_diag(&refs), None)?);
        if n == hi {
            break;
        }
        let (next, nrank) = layout(n + 1);
        let mut d = Matrix::zero(nrank, rank);
        let sign = if n % 2 == 0 { ring.from_i64(-1) } else { ring.one() };
        for &(k, q, off) in &blocks {
            let r = x.rank(q);
            // d_X on each copy
            if let Some(&(_, q1, noff)) = next.iter().find(|&&(k1, q1, _)| k1 == k && q1 == q + 1) {
                let dq = x.diff(q);
                let r1 = x.rank(q1);
                for c in 0..f(k) {
                    for i in 0..r1 {
                        for j in 0..r {
                            let e = dq.get(i, j);
                            if !e.is_zero() {
                                d.set(noff + c * r1 + i, off + c * r + j, e.clone());
                            }
                        }
                    }
                }
            }
            // -(-1)^n φ∘∂_(k+1)
            if let Some(&(_, _, noff)) = next.iter().find(|&&(k1, q1, _)| k1 == k + 1 && q1 == q) {
                let del = &res.maps[k as usize];
                for jp in 0..f(k + 1) {
                    for li in 0..f(k) {
                        let e = del.get(li, jp);
                        if e.is_zero() {
                            continue;
                        }
                        let v = ring.mul(e, &sign);
                        for t in 0..r {
                            d.set(noff + jp * r + t, off + li * r + t, v.clone());
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    BddComplex::new(ring, lo, terms, diffs)
}

/// `RHom(R/b, X)` through a resolution long enough for degrees up to `sup X + dim R`.
pub fn rhom_cyclic(b: &Ideal, x: &BddComplex) -> Result<BddComplex> {
    let ring = x.ring();
    if x.is_empty() {
        return Ok(BddComplex::zero(ring));
    }
    let dim = ring_dim(ring)? as i64;
    let len = (x.hi() - x.lo() + dim + 2).max(1) as usize;
    let res = resolve(&FgModule::cyclic(b).ungraded(), len)?;
    hom_complex(&res, &x.ungraded())
}

/// `Ext^i(R/b, X)` for `i` in the scanned range.
pub fn hyper_ext(b: &Ideal, x: &BddComplex, i: i64) -> Result<FgModule> {
    rhom_cyclic(b, x)?.cohomology_module(i)
}

/// `min{i : Ext^i(R/b, X) ≠ 0}`, `+inf` when none exists.
pub fn hyper_ext_inf(b: &Ideal, x: &BddComplex) -> Result<XInt> {
    if x.is_empty() {
        return Ok(XInt::PosInf);
    }
    let dim = ring_dim(x.ring())? as i64;
    let h = rhom_cyclic(b, x)?;
    for i in x.lo()..=x.hi() + dim {
        if !h.cohomology_module(i)?.is_zero()? {
            return Ok(XInt::Fin(i));
        }
    }
    Ok(XInt::PosInf)
}

/// Whether `X_p ≅ 0`.
pub fn vanishes_at(x: &BddComplex, p: &PrimeIdeal) -> Result<bool> {
    for i in x.nonzero_degrees()? {
        if p.ideal().contains(&x.cohomology_module(i)?.annihilator()?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `depth X_p`: least `n` with `Ext^n(R/p, X)_p ≠ 0`, `+inf` when `X_p ≅ 0`.
pub fn complex_depth_at_prime(x: &BddComplex, p: &PrimeIdeal) -> Result<XInt> {
    if x.ring() != p.ring() {
        return Err(Error::RingMismatch);
    }
    if vanishes_at(x, p)? {
        return Ok(XInt::PosInf);
    }
    let dim = ring_dim(x.ring())? as i64;
    let h = rhom_cyclic(p.ideal(), x)?;
    for n in x.lo()..=x.hi() + dim {
        let e = h.cohomology_module(n)?;
        if p.ideal().contains(&e.annihilator()?)? {
            return Ok(XInt::Fin(n));
        }
    }
    Err(Error::Internal(format!("depth scan reached degree {} without a nonzero local Ext", x.hi() + dim)))
}
