use super::complex::BddComplex;
use crate::error::{Error, Result};
use crate::modkernel::Matrix;
use crate::ringkernel::{lift, Ideal, Poly};

/// Maps `h^i: X^i -> X^(i-1)`; `maps[k]` is `h^(lo+k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub lo: i64,
    pub maps: Vec<Matrix>,
}

impl Homotopy {
    pub fn at(&self, x: &BddComplex, i: i64) -> Matrix {
        if i >= self.lo && ((i - self.lo) as usize) < self.maps.len() {
            self.maps[(i - self.lo) as usize].clone()
        } else {
            Matrix::zero(x.rank(i - 1), x.rank(i))
        }
    }
}

/// Checks `f * id = d h + h d` and that every `h^i` respects relations.
pub fn verify_homotopy(x: &BddComplex, f: &Poly, h: &Homotopy) -> Result<bool> {
    let ring = x.ring();
    for i in x.lo()..=x.hi() {
        let t = x.term(i).expect("in range");
        let hi = h.at(x, i);
        let lhs = Matrix::scalar(&ring.reduce(f), t.rank());
        let rhs = x.diff(i - 1).mul(ring, &hi).add(ring, &h.at(x, i + 1).mul(ring, &x.diff(i)));
        for c in lhs.sub(ring, &rhs).columns() {
            if !t.is_zero_element(&c)? {
                return Ok(false);
            }
        }
        if let Some(prev) = x.term(i - 1) {
            for c in hi.mul(ring, t.relations()).columns() {
                if !prev.is_zero_element(&c)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Solves `f * id = d h + h d` on `X`; returns a verified homotopy or `None`.
pub fn null_homotopy_mult(x: &BddComplex, f: &Poly) -> Result<Option<Homotopy>> {
    let ring = x.ring();
    let f = ring.reduce(f);
    if x.is_empty() {
        return Ok(Some(Homotopy { lo: 0, maps: Vec::new() }));
    }
    if f.is_zero() {
        let maps = (x.lo()..=x.hi()).map(|i| Matrix::zero(x.rank(i - 1), x.rank(i))).collect();
        return Ok(Some(Homotopy { lo: x.lo(), maps }));
    }
    let (lo, hi) = (x.lo(), x.hi());
    // row blocks: (i, j) for the identity at degree i, then (i, c) for relations
    let mut row_off = std::collections::BTreeMap::new();
    let mut rows = 0usize;
    for i in lo..=hi {
        for j in 0..x.rank(i) {
            row_off.insert((0u8, i, j), rows);
            rows += x.rank(i);
        }
    }
    for i in lo + 1..=hi {
        for c in 0..x.rels(i).cols() {
            row_off.insert((1u8, i, c), rows);
            rows += x.rank(i - 1);
        }
    }
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    let mut unknowns = Vec::new();
    for i in lo + 1..=hi {
        let (dprev, rel) = (x.diff(i - 1), x.rels(i));
        for a in 0..x.rank(i - 1) {
            for b in 0..x.rank(i) {
                let mut col = vec![Poly::zero(); rows];
                // d^(i-1) h^i e_b
                let o = row_off[&(0, i, b)];
                for r in 0..x.rank(i) {
                    col[o + r] = dprev.get(r, a).clone();
                }
                // h^i d^(i-1) e_j in degree i-1
                for j in 0..x.rank(i - 1) {
                    let e = dprev.get(b, j);
                    if !e.is_zero() {
                        let o = row_off[&(0, i - 1, j)];
                        col[o + a] = ring.add(&col[o + a], e);
                    }
                }
                for c in 0..rel.cols() {
                    let e = rel.get(b, c);
                    if !e.is_zero() {
                        let o = row_off[&(1, i, c)];
                        col[o + a] = ring.add(&col[o + a], e);
                    }
                }
                cols.push(col);
                unknowns.push((i, a, b));
            }
        }
    }
    let nu = cols.len();
    for (&(kind, i, _), &o) in &row_off {
        let rel = if kind == 0 { x.rels(i) } else { x.rels(i - 1) };
        for c in rel.columns() {
            let mut col = vec![Poly::zero(); rows];
            col[o..o + c.len()].clone_from_slice(&c);
            cols.push(col);
        }
    }
    let mut target = vec![Poly::zero(); rows];
    for i in lo..=hi {
        for j in 0..x.rank(i) {
            target[row_off[&(0, i, j)] + j] = f.clone();
        }
    }
    if cols.is_empty() {
        return Ok(None);
    }
    let sol = lift(ring, rows, &cols, &[target])?.pop().expect("one target");
    let Some(sol) = sol else { return Ok(None) };
    let mut maps: Vec<Matrix> = (lo..=hi).map(|i| Matrix::zero(x.rank(i - 1), x.rank(i))).collect();
    for (k, &(i, a, b)) in unknowns.iter().enumerate().take(nu) {
        maps[(i - lo) as usize].set(a, b, sol[k].clone());
    }
    let h = Homotopy { lo, maps };
    if !verify_homotopy(x, &f, &h)? {
        return Err(Error::Internal("homotopy solution failed verification".into()));
    }
    Ok(Some(h))
}

/// Result of the annihilator search on a complex.
#[derive(Clone, Debug)]
pub struct DerivedAnnihilator {
    pub ideal: Ideal,
    /// Which candidate family succeeded: 1 for `ann H`, `k` for `(ann H)^k`.
    pub power: u32,
    pub homotopies: Vec<(Poly, Homotopy)>,
}

/// `∩_j ann H^j(X)`.
pub fn cohomology_annihilator(x: &BddComplex) -> Result<Ideal> {
    let mut a = Ideal::unit(x.ring());
    for i in x.nonzero_degrees()? {
        a = a.intersection(&x.cohomology_module(i)?.annihilator()?)?;
    }
    a.minimalized()
}

/// An ideal of elements acting null-homotopically on `X`: tries generators of
/// `ann H(X)`, then pairwise products, then powers up to the number of
/// nonzero cohomology degrees.
pub fn derived_annihilator_ideal(x: &BddComplex) -> Result<DerivedAnnihilator> {
    let a = cohomology_annihilator(x)?;
    let c = x.nonzero_degrees()?.len().max(1) as u32;
    let mut tried = Vec::new();
    for k in 1..=c.max(2) {
        let cand = if k == 1 { a.clone() } else { a.power(k).minimalized()? };
        let mut hs = Vec::new();
        let mut ok = true;
        for g in cand.gens() {
            match null_homotopy_mult(x, g)? {
                Some(h) => hs.push((g.clone(), h)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(DerivedAnnihilator { ideal: cand, power: k, homotopies: hs });
        }
        tried.push(k);
    }
    Err(Error::Inconclusive(format!(
        "no null-homotopic candidate among powers {tried:?} of the cohomology annihilator"
    )))
}
