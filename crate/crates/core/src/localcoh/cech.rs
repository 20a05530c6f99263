use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use super::spc::SpcSubset;
use super::torsion::lc_vanishing_bound;
use crate::complexkernel::BddComplex;
use crate::error::{Error, Result};
use crate::ringkernel::{span_rank, DenseMatrix, Exps, Ideal, Poly, PolyRing, Scalar};
use crate::xint::XInt;

pub const DEFAULT_TMAX: u32 = 12;

/// Internal degrees `d_lo..=d_hi` and the largest Čech exponent tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradedWindow {
    pub d_lo: i64,
    pub d_hi: i64,
    pub t_max: u32,
}

impl GradedWindow {
    pub fn new(d_lo: i64, d_hi: i64) -> Self {
        GradedWindow { d_lo, d_hi, t_max: DEFAULT_TMAX }
    }

    pub fn with_tmax(mut self, t_max: u32) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.d_lo..=self.d_hi
    }
}

/// `dim_k H^i_Z(X)_d`, with whether the transition ranks stabilized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcPiece {
    pub i: i64,
    pub d: i64,
    pub dim: usize,
    pub stable: bool,
    /// Čech exponent at which the value was read off.
    pub level: u32,
}

impl LcPiece {
    pub fn report_line(&self) -> String {
        format!("LC i={} d={} dim={} stable={}", self.i, self.d, self.dim, if self.stable { "yes" } else { "no" })
    }
}

struct Basis {
    mons: Vec<(usize, Exps)>,
    index: HashMap<(usize, Exps), usize>,
}

#[derive(Clone, Copy)]
struct Block {
    s: usize,
    q: i64,
    e: i64,
    off: usize,
}

/// The level-`t` Čech total complex `⊕ X^q_(f_S)` cut to internal degree `d`,
/// with elements `m / f_S^t`.
pub struct CechComplex {
    x: BddComplex,
    fs: Vec<Poly>,
    fdeg: Vec<i64>,
    subsets: Vec<Vec<usize>>,
    min_deg: i64,
    unit: bool,
    bases: RefCell<HashMap<(i64, i64), Rc<Basis>>>,
    diffs: RefCell<HashMap<(i64, i64, u32), Rc<DenseMatrix>>>,
    kernels: RefCell<HashMap<(i64, i64, u32), Rc<Vec<Vec<Scalar>>>>>,
    ranks: RefCell<HashMap<(i64, i64, u32, u32), usize>>,
}

impl CechComplex {
    pub fn new(z: &SpcSubset, x: &BddComplex) -> Result<Self> {
        let ring = x.ring();
        if z.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if !x.is_empty() && !x.is_graded() {
            return Err(Error::Precondition("graded local cohomology needs a graded complex".into()));
        }
        let a = z.defining().minimalized()?;
        let mut fs = Vec::new();
        let mut fdeg = Vec::new();
        let mut unit = false;
        for f in a.gens() {
            if !ring.is_homogeneous(f) {
                return Err(Error::Precondition(format!("{} is not homogeneous", ring.fmt_poly(f))));
            }
            let dg = ring.degree_of(f).unwrap_or(0) as i64;
            if dg == 0 {
                unit = true;
            }
            fs.push(f.clone());
            fdeg.push(dg);
        }
        let m = fs.len();
        let mut subsets: Vec<Vec<usize>> =
            (0u32..(1 << m)).map(|mask| (0..m).filter(|k| mask >> k & 1 == 1).collect()).collect();
        subsets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let min_deg = x.terms().iter().flat_map(|t| t.degrees().unwrap_or(&[]).iter().copied()).min().unwrap_or(0);
        Ok(CechComplex {
            x: x.clone(),
            fs,
            fdeg,
            subsets,
            min_deg,
            unit,
            bases: RefCell::new(HashMap::new()),
            diffs: RefCell::new(HashMap::new()),
            kernels: RefCell::new(HashMap::new()),
            ranks: RefCell::new(HashMap::new()),
        })
    }

    fn ring(&self) -> &PolyRing {
        self.x.ring()
    }

    /// Cohomological degrees where `H^i_Z(X)` can be nonzero.
    pub fn degree_range(&self) -> (i64, i64) {
        (self.x.lo(), self.x.hi() + self.fs.len() as i64)
    }

    fn sdeg(&self, s: usize) -> i64 {
        self.subsets[s].iter().map(|&k| self.fdeg[k]).sum()
    }

    fn basis(&self, q: i64, e: i64) -> Result<Rc<Basis>> {
        if let Some(b) = self.bases.borrow().get(&(q, e)) {
            return Ok(b.clone());
        }
        let mons = match self.x.term(q) {
            Some(t) => t.graded_basis(e)?,
            None => Vec::new(),
        };
        let index = mons.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let b = Rc::new(Basis { mons, index });
        self.bases.borrow_mut().insert((q, e), b.clone());
        Ok(b)
    }

    fn layout(&self, n: i64, d: i64, t: u32) -> Result<(Vec<Block>, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for (s, set) in self.subsets.iter().enumerate() {
            let q = n - set.len() as i64;
            if self.x.term(q).is_none() {
                continue;
            }
            let e = d + t as i64 * self.sdeg(s);
            let dim = self.basis(q, e)?.mons.len();
            out.push(Block { s, q, e, off });
            off += dim;
        }
        Ok((out, off))
    }

    fn unit_vec(&self, q: i64, j: usize, mono: &Exps) -> Vec<Poly> {
        let r = self.x.rank(q);
        let mut v = vec![Poly::zero(); r];
        v[j] = Poly::monomial(mono.clone(), self.ring().field().one());
        v
    }

    /// Coordinates of `v ∈ X^q` in the standard basis of degree `e`, added into `out`.
    fn add_coords(&self, q: i64, e: i64, v: &[Poly], sign: &Scalar, out: &mut [Scalar], off: usize) -> Result<()> {
        let t = self.x.term(q).expect("term");
        let red = t.reduce(v)?;
        let b = self.basis(q, e)?;
        let f = self.ring().field();
        for (c, p) in red.iter().enumerate() {
            for (ex, co) in p.terms() {
                let idx = *b
                    .index
                    .get(&(c, ex.clone()))
                    .ok_or_else(|| Error::Internal(format!("nonstandard or inhomogeneous term in degree {e}")))?;
                out[off + idx] = f.add(&out[off + idx], &f.mul(co, sign));
            }
        }
        Ok(())
    }

    fn find(blocks: &[Block], s: usize, q: i64) -> Option<Block> {
        blocks.iter().find(|b| b.s == s && b.q == q).copied()
    }

    fn subset_index(&self, set: &[usize]) -> usize {
        self.subsets.iter().position(|s| s == set).expect("subset")
    }

    /// `D^n` at level `t`, internal degree `d`.
    fn diff(&self, n: i64, d: i64, t: u32) -> Result<Rc<DenseMatrix>> {
        if let Some(m) = self.diffs.borrow().get(&(n, d, t)) {
            return Ok(m.clone());
        }
        let ring = self.ring().clone();
        let f = ring.field().clone();
        let (src, ns) = self.layout(n, d, t)?;
        let (dst, nd) = self.layout(n + 1, d, t)?;
        let mut cols = Vec::with_capacity(ns);
        for b in &src {
            let set = &self.subsets[b.s];
            let basis = self.basis(b.q, b.e)?;
            for (j, mono) in &basis.mons {
                let mut col = vec![Scalar::zero(); nd];
                let v = self.unit_vec(b.q, *j, mono);
                if let Some(tb) = Self::find(&dst, b.s, b.q + 1) {
                    let w = self.x.diff(b.q).apply(&ring, &v);
                    let sign = if set.len().is_multiple_of(2) { f.one() } else { f.from_i64(-1) };
                    self.add_coords(tb.q, tb.e, &w, &sign, &mut col, tb.off)?;
                }
                for k in 0..self.fs.len() {
                    if set.contains(&k) {
                        continue;
                    }
                    let mut bigger = set.clone();
                    bigger.push(k);
                    bigger.sort_unstable();
                    let si = self.subset_index(&bigger);
                    let Some(tb) = Self::find(&dst, si, b.q) else { continue };
                    let below = set.iter().filter(|&&s| s < k).count();
                    let sign = if below % 2 == 0 { f.one() } else { f.from_i64(-1) };
                    let ft = ring.pow(&self.fs[k], t);
                    let w: Vec<Poly> = v.iter().map(|p| ring.mul(p, &ft)).collect();
                    self.add_coords(tb.q, tb.e, &w, &sign, &mut col, tb.off)?;
                }
                cols.push(col);
            }
        }
        let m = Rc::new(DenseMatrix::from_cols(nd, &cols));
        self.diffs.borrow_mut().insert((n, d, t), m.clone());
        Ok(m)
    }

    /// Blockwise multiplication by `mult(S)` from `(d, t)` to `(d2, t2)` in total degree `n`.
    fn block_map(
        &self,
        n: i64,
        d: i64,
        t: u32,
        d2: i64,
        t2: u32,
        v: &[Scalar],
        mult: &dyn Fn(usize) -> Poly,
    ) -> Result<Vec<Scalar>> {
        let ring = self.ring();
        let (src, _) = self.layout(n, d, t)?;
        let (dst, nd) = self.layout(n, d2, t2)?;
        let mut out = vec![Scalar::zero(); nd];
        for b in &src {
            let Some(tb) = Self::find(&dst, b.s, b.q) else { continue };
            let g = mult(b.s);
            let basis = self.basis(b.q, b.e)?;
            for (k, (j, mono)) in basis.mons.iter().enumerate() {
                let c = &v[b.off + k];
                if c.is_zero() {
                    continue;
                }
                let w: Vec<Poly> = self.unit_vec(b.q, *j, mono).iter().map(|p| ring.mul(p, &g)).collect();
                self.add_coords(tb.q, tb.e, &w, c, &mut out, tb.off)?;
            }
        }
        Ok(out)
    }

    fn transition(&self, n: i64, d: i64, t: u32, t2: u32, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let ring = self.ring().clone();
        let fs = self.fs.clone();
        let subsets = self.subsets.clone();
        let k = t2 - t;
        self.block_map(n, d, t, d, t2, v, &move |s| {
            let mut g = ring.one();
            for &i in &subsets[s] {
                g = ring.mul(&g, &ring.pow(&fs[i], k));
            }
            g
        })
    }

    fn cycles(&self, n: i64, d: i64, t: u32) -> Result<Rc<Vec<Vec<Scalar>>>> {
        if let Some(z) = self.kernels.borrow().get(&(n, d, t)) {
            return Ok(z.clone());
        }
        let dm = self.diff(n, d, t)?;
        let (_, dim) = self.layout(n, d, t)?;
        let z = if dm.rows() == 0 {
            (0..dim)
                .map(|i| {
                    let mut v = vec![Scalar::zero(); dim];
                    v[i] = Scalar::one();
                    v
                })
                .collect()
        } else {
            dm.nullspace(self.ring().field())
        };
        let z = Rc::new(z);
        self.kernels.borrow_mut().insert((n, d, t), z.clone());
        Ok(z)
    }

    fn boundaries(&self, n: i64, d: i64, t: u32) -> Result<Vec<Vec<Scalar>>> {
        let dm = self.diff(n - 1, d, t)?;
        Ok((0..dm.cols()).map(|j| dm.col(j)).collect())
    }

    /// `rank(v_1..v_k)` modulo boundaries at `(n, d, t)`.
    fn rank_mod_boundaries(&self, n: i64, d: i64, t: u32, vs: &[Vec<Scalar>]) -> Result<usize> {
        let (_, dim) = self.layout(n, d, t)?;
        let f = self.ring().field();
        let b = self.boundaries(n, d, t)?;
        let base = span_rank(f, dim, &b);
        let mut all = b;
        all.extend(vs.iter().cloned());
        Ok(span_rank(f, dim, &all) - base)
    }

    /// Rank of `H^n_t -> H^n_T` in internal degree `d`.
    fn transition_rank(&self, n: i64, d: i64, t: u32, t2: u32) -> Result<usize> {
        if let Some(&r) = self.ranks.borrow().get(&(n, d, t, t2)) {
            return Ok(r);
        }
        let z = self.cycles(n, d, t)?;
        let mut imgs = Vec::with_capacity(z.len());
        for v in z.iter() {
            imgs.push(self.transition(n, d, t, t2, v)?);
        }
        let r = self.rank_mod_boundaries(n, d, t2, &imgs)?;
        self.ranks.borrow_mut().insert((n, d, t, t2), r);
        Ok(r)
    }

    /// Smallest level at which every localized component reaches degree `d`.
    fn floor_level(&self, d: i64) -> u32 {
        let mut t = 1u32;
        for s in 1..self.subsets.len() {
            let ds = self.sdeg(s);
            if ds > 0 {
                let need = self.min_deg - d;
                if need > 0 {
                    t = t.max(((need + ds - 1) / ds) as u32);
                }
            }
        }
        t
    }

    /// `H^i_Z(X)_d`: stable once `H_t -> H_(t+1)`, `H_t -> H_(t+2)` and
    /// `H_(t+1) -> H_(t+2)` have equal rank.
    pub fn piece(&self, i: i64, d: i64, t_max: u32) -> Result<LcPiece> {
        let (lo, hi) = self.degree_range();
        if self.x.is_empty() || self.unit || i < lo || i > hi {
            return Ok(LcPiece { i, d, dim: 0, stable: true, level: 0 });
        }
        let mut t = self.floor_level(d);
        let mut last = None;
        while t + 2 <= t_max {
            let a = self.transition_rank(i, d, t, t + 1)?;
            let b = self.transition_rank(i, d, t, t + 2)?;
            let c = self.transition_rank(i, d, t + 1, t + 2)?;
            if a == b && b == c {
                return Ok(LcPiece { i, d, dim: a, stable: true, level: t });
            }
            last = Some((c, t + 1));
            t += 1;
        }
        let (dim, level) = last.unwrap_or((0, t));
        Ok(LcPiece { i, d, dim, stable: false, level })
    }

    /// A cycle at level `t` whose image under `g` survives at level `t2`,
    /// mapped to level `t2` together with that image.
    fn surviving_multiple(
        &self,
        n: i64,
        d: i64,
        t: u32,
        g: &Poly,
        t2: u32,
    ) -> Result<Option<(Vec<Scalar>, Vec<Scalar>)>> {
        let ring = self.ring().clone();
        let dg = ring.degree_of(g).unwrap_or(0) as i64;
        let z = self.cycles(n, d, t)?;
        for v in z.iter() {
            let moved = self.transition(n, d, t, t2, v)?;
            let gg = g.clone();
            let img = self.block_map(n, d, t2, d + dg, t2, &moved, &move |_| gg.clone())?;
            if self.rank_mod_boundaries(n, d + dg, t2, std::slice::from_ref(&img))? > 0 {
                return Ok(Some((moved, img)));
            }
        }
        Ok(None)
    }

    /// Human-readable form of an element of the level-`t` total complex.
    pub fn format_element(&self, n: i64, d: i64, t: u32, v: &[Scalar]) -> Result<String> {
        let ring = self.ring();
        let (blocks, _) = self.layout(n, d, t)?;
        let mut parts = Vec::new();
        let several_q = self.x.terms().len() > 1;
        for b in &blocks {
            let basis = self.basis(b.q, b.e)?;
            let r = self.x.rank(b.q);
            let mut num = vec![Poly::zero(); r];
            for (k, (j, mono)) in basis.mons.iter().enumerate() {
                let c = &v[b.off + k];
                if !c.is_zero() {
                    num[*j] = ring.add(&num[*j], &Poly::monomial(mono.clone(), c.clone()));
                }
            }
            if num.iter().all(|p| p.is_zero()) {
                continue;
            }
            let set = &self.subsets[b.s];
            let text = if r == 1 {
                fraction(ring, &num[0], set.iter().map(|&k| &self.fs[k]), t)
            } else {
                let inner: Vec<String> =
                    num.iter().map(|p| fraction(ring, p, set.iter().map(|&k| &self.fs[k]), t)).collect();
                format!("[{}]", inner.join(", "))
            };
            parts.push(if several_q { format!("{text} in X^{}", b.q) } else { text });
        }
        Ok(if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

/// `p / (f_1 ... f_k)^t`, cancelled when everything is a monomial.
fn fraction<'a>(ring: &PolyRing, p: &Poly, den: impl Iterator<Item = &'a Poly>, t: u32) -> String {
    let den: Vec<&Poly> = den.collect();
    if p.is_zero() {
        return "0".into();
    }
    if den.is_empty() || t == 0 {
        return ring.fmt_poly(p);
    }
    if p.is_monomial() && den.iter().all(|f| f.is_monomial()) {
        let (pe, pc) = &p.terms()[0];
        let mut ex: Vec<i64> = pe.iter().map(|&e| e as i64).collect();
        let mut c = pc.clone();
        for f in &den {
            let (fe, fc) = &f.terms()[0];
            for (k, &e) in fe.iter().enumerate() {
                ex[k] -= e as i64 * t as i64;
            }
            for _ in 0..t {
                c = ring.field().div(&c, fc);
            }
        }
        let pos: Exps = ex.iter().map(|&e| e.max(0) as u16).collect();
        let neg: Exps = ex.iter().map(|&e| (-e).max(0) as u16).collect();
        let field = ring.field();
        let top = ring.fmt_poly(&Poly::monomial(pos, c.abs()));
        let sign = if c.is_negative() { "-" } else { "" };
        if neg.iter().all(|&e| e == 0) {
            return format!("{sign}{top}");
        }
        let bottom = ring.fmt_poly(&Poly::monomial(neg.clone(), field.one()));
        let several = neg.iter().filter(|&&e| e > 0).count() > 1;
        return if several { format!("{sign}{top}/({bottom})") } else { format!("{sign}{top}/{bottom}") };
    }
    let mut prod = ring.one();
    for f in &den {
        prod = ring.mul(&prod, f);
    }
    format!("({})/({})^{t}", ring.fmt_poly(p), ring.fmt_poly(&prod))
}

/// `dim H^i_Z(X)_d` for `d` in the window.
pub fn graded_local_cohomology(z: &SpcSubset, x: &BddComplex, i: i64, win: &GradedWindow) -> Result<Vec<LcPiece>> {
    let c = CechComplex::new(z, x)?;
    win.degrees().map(|d| c.piece(i, d, win.t_max)).collect()
}

/// A class `c ∈ H^i_Z(X)_d` with `g c ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilationWitness {
    pub i: i64,
    pub d: i64,
    pub g: String,
    pub class: String,
    pub image: String,
    pub image_degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnnihilationVerdict {
    /// `certified` when `H^i_Z(X) = 0` for all `i < n` outright.
    Holds {
        certified: bool,
    },
    Fails(AnnihilationWitness),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct AnnihilationReport {
    pub verdict: AnnihilationVerdict,
    pub pieces: Vec<LcPiece>,
}

/// Whether `b H^i_Z(X) = 0` for all `i < n`, checked degreewise: source
/// degrees run over the window extended downward by the largest generator
/// degree, so every multiplication landing in the window is examined.
pub fn annihilation_test(
    b: &Ideal,
    z: &SpcSubset,
    x: &BddComplex,
    n: i64,
    win: &GradedWindow,
) -> Result<AnnihilationReport> {
    if lc_vanishing_bound(z, x)? >= XInt::Fin(n) {
        return Ok(AnnihilationReport { verdict: AnnihilationVerdict::Holds { certified: true }, pieces: Vec::new() });
    }
    let ring = x.ring();
    let gens = b.minimalized()?;
    for g in gens.gens() {
        if !ring.is_homogeneous(g) {
            return Err(Error::Precondition(format!("{} is not homogeneous", ring.fmt_poly(g))));
        }
    }
    let c = CechComplex::new(z, x)?;
    let reach = gens.gens().iter().filter_map(|g| ring.degree_of(g)).max().unwrap_or(0) as i64;
    let mut pieces = Vec::new();
    let mut unsure = Vec::new();
    for i in x.lo()..n {
        for d in (win.d_lo - reach..=win.d_hi).rev() {
            let p = c.piece(i, d, win.t_max)?;
            pieces.push(p.clone());
            if !p.stable {
                unsure.push(format!("i={i} d={d}"));
            }
            if p.dim == 0 {
                continue;
            }
            for g in gens.gens() {
                let dg = ring.degree_of(g).unwrap_or(0) as i64;
                let tgt = c.piece(i, d + dg, win.t_max)?;
                let t2 = (p.level.max(tgt.level) + 2).min(win.t_max).max(p.level);
                if let Some((cls, img)) = c.surviving_multiple(i, d, p.level, g, t2)? {
                    if p.stable && tgt.stable {
                        let w = AnnihilationWitness {
                            i,
                            d,
                            g: ring.fmt_poly(g),
                            class: c.format_element(i, d, t2, &cls)?,
                            image: c.format_element(i, d + dg, t2, &img)?,
                            image_degree: d + dg,
                        };
                        return Ok(AnnihilationReport { verdict: AnnihilationVerdict::Fails(w), pieces });
                    }
                    unsure.push(format!("i={i} d={d} g={}", ring.fmt_poly(g)));
                }
            }
        }
    }
    let verdict = if unsure.is_empty() {
        AnnihilationVerdict::Holds { certified: false }
    } else {
        AnnihilationVerdict::Inconclusive(format!("no stabilization at {}", unsure.join(", ")))
    };
    Ok(AnnihilationReport { verdict, pieces })
}
