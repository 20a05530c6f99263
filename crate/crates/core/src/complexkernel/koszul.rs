use super::complex::{BddComplex, ChainMap};
use crate::error::Result;
use crate::modkernel::{FgModule, Matrix};
use crate::ringkernel::{Poly, PolyRing};

fn subsets(s: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, s: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for k in start..s {
            cur.push(k);
            go(k + 1, s, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, s, j, &mut Vec::new(), &mut out);
    out
}

fn homogeneous_degrees(ring: &PolyRing, ys: &[Poly]) -> Option<Vec<i64>> {
    if !ring.is_graded() {
        return None;
    }
    ys.iter()
        .map(|y| {
            if y.is_zero() {
                Some(0)
            } else if ring.is_homogeneous(y) {
                ring.degree_of(y).map(|d| d as i64)
            } else {
                None
            }
        })
        .collect()
}

/// The Koszul complex on `ys`, in degrees `[-s, 0]` with `C(s, j)` generators in degree `-j`.
pub fn koszul(ring: &PolyRing, ys: &[Poly]) -> Result<BddComplex> {
    let s = ys.len();
    let ydeg = homogeneous_degrees(ring, ys);
    let mut terms = Vec::with_capacity(s + 1);
    let mut diffs = Vec::with_capacity(s);
    for j in (0..=s).rev() {
        let basis = subsets(s, j);
        let degrees = ydeg.as_ref().map(|yd| basis.iter().map(|b| b.iter().map(|&k| yd[k]).sum()).collect());
        terms.push(FgModule::new(ring, basis.len(), Matrix::zero(basis.len(), 0), degrees)?);
        if j == 0 {
            break;
        }
        let lower = subsets(s, j - 1);
        let mut d = Matrix::zero(lower.len(), basis.len());
        for (c, set) in basis.iter().enumerate() {
            for (t, &k) in set.iter().enumerate() {
                let rest: Vec<usize> = set.iter().copied().filter(|&v| v != k).collect();
                let row = lower.iter().position(|l| *l == rest).expect("face");
                let y = ring.reduce(&ys[k]);
                d.set(row, c, if t % 2 == 0 { y } else { ring.neg(&y) });
            }
        }
        diffs.push(d);
    }
    BddComplex::new(ring, -(s as i64), terms, diffs)
}

/// `X ⊗ K(y)` with the maps of the triangle `X --y--> X -> X ⊗ K(y) -> X[1]`.
#[derive(Clone, Debug)]
pub struct KoszulStep {
    pub complex: BddComplex,
    /// `X -> X ⊗ K(y)`, `a ↦ (a, 0)`.
    pub inclusion: ChainMap,
    /// `X ⊗ K(y) -> X[1]`, `(a, b) ↦ (-1)^n b` in degree `n`.
    pub projection: ChainMap,
}

/// `(X ⊗ K(y))^n = X^n ⊕ X^(n+1)`, `D(a, b) = (da + (-1)^(n+1) y b, db)`.
pub fn tensor_koszul_step(x: &BddComplex, y: &Poly) -> Result<KoszulStep> {
    let ring = x.ring();
    let y = ring.reduce(y);
    if x.is_empty() {
        let z = BddComplex::zero(ring);
        let empty = ChainMap { lo: 0, maps: Vec::new() };
        return Ok(KoszulStep { complex: z, inclusion: empty.clone(), projection: empty });
    }
    let ydeg = homogeneous_degrees(ring, std::slice::from_ref(&y)).map(|v| v[0]);
    let graded = x.is_graded() && ydeg.is_some();
    let (lo, hi) = (x.lo() - 1, x.hi());
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    for n in lo..=hi {
        let (ra, rb) = (x.rank(n), x.rank(n + 1));
        let rels = Matrix::block_diag(&[&x.rels(n), &x.rels(n + 1)]);
        let degrees = graded.then(|| {
            let mut d: Vec<i64> = x.term(n).and_then(|t| t.degrees()).map(|v| v.to_vec()).unwrap_or_default();
            let yd = ydeg.expect("graded");
            d.extend(
                x.term(n + 1)
                    .and_then(|t| t.degrees())
                    .map(|v| v.iter().map(|e| e + yd).collect::<Vec<_>>())
                    .unwrap_or_default(),
            );
            d
        });
        terms.push(FgModule::new(ring, ra + rb, rels, degrees)?);
        if n < hi {
            let rc = x.rank(n + 2);
            let mut d = Matrix::zero(rb + rc, ra + rb);
            let dn = x.diff(n);
            let dn1 = x.diff(n + 1);
            let sy = if (n + 1) % 2 == 0 { y.clone() } else { ring.neg(&y) };
            for i in 0..rb {
                for j in 0..ra {
                    d.set(i, j, dn.get(i, j).clone());
                }
                d.set(i, ra + i, sy.clone());
            }
            for i in 0..rc {
                for j in 0..rb {
                    d.set(rb + i, ra + j, dn1.get(i, j).clone());
                }
            }
            diffs.push(d);
        }
        if n >= x.lo() {
            let mut m = Matrix::zero(ra + rb, ra);
            for i in 0..ra {
                m.set(i, i, ring.one());
            }
            incl.push(m);
        }
        let mut p = Matrix::zero(rb, ra + rb);
        let sign = if n % 2 == 0 { ring.one() } else { ring.from_i64(-1) };
        for i in 0..rb {
            p.set(i, ra + i, sign.clone());
        }
        proj.push(p);
    }
    let complex = BddComplex::new(ring, lo, terms, diffs)?;
    Ok(KoszulStep { complex, inclusion: ChainMap { lo: x.lo(), maps: incl }, projection: ChainMap { lo, maps: proj } })
}

/// `X ⊗ K(y_1, ..., y_s)`, one element at a time.
pub fn tensor_koszul(x: &BddComplex, ys: &[Poly]) -> Result<BddComplex> {
    let mut cur = x.clone();
    for y in ys {
        cur = tensor_koszul_step(&cur, y)?.complex;
    }
    Ok(cur)
}
