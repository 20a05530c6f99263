use std::fmt;
use std::sync::{Arc, OnceLock};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::ringkernel::{syzygies, Exps, Ideal, ModuleGb, Poly, PolyRing};

/// Degree of a homogeneous vector in a graded free module with generator
/// degrees `shifts`; `None` for the zero vector.
pub fn vec_degree(ring: &PolyRing, v: &[Poly], shifts: &[i64]) -> Result<Option<i64>> {
    let mut deg = None;
    for (p, &s) in v.iter().zip(shifts) {
        if p.is_zero() {
            continue;
        }
        let d = p
            .homogeneous_degree(ring.weights())
            .ok_or_else(|| Error::Invalid(format!("inhomogeneous entry {}", ring.fmt_poly(p))))? as i64
            + s;
        match deg {
            None => deg = Some(d),
            Some(e) if e != d => {
                return Err(Error::Invalid("vector is not homogeneous for the generator degrees".into()));
            }
            _ => {}
        }
    }
    Ok(deg)
}

/// A finitely generated module `R^rank / im(rels)`.
#[derive(Clone)]
pub struct FgModule {
    ring: PolyRing,
    rank: usize,
    rels: Matrix,
    degrees: Option<Vec<i64>>,
    gb: Arc<OnceLock<Arc<ModuleGb>>>,
}

impl PartialEq for FgModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.rank == other.rank && self.rels == other.rels && self.degrees == other.degrees
    }
}

impl Eq for FgModule {}

impl fmt::Debug for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgModule({})", self.display())
    }
}

/// A submodule presentation together with its generators in the old ambient module.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: FgModule,
    /// Column `k` is the image of new generator `k` in the old free module.
    pub gens: Matrix,
}

/// Result of pruning a presentation.
#[derive(Clone, Debug)]
pub struct Pruned {
    pub module: FgModule,
    /// Old generator coordinates expressed in the new generators (new_rank x old_rank).
    pub to_new: Matrix,
    /// New generators as old generators (old_rank x new_rank).
    pub to_old: Matrix,
}

impl FgModule {
    pub fn new(ring: &PolyRing, rank: usize, rels: Matrix, degrees: Option<Vec<i64>>) -> Result<Self> {
        if rels.cols() > 0 && rels.rows() != rank {
            return Err(Error::Invalid(format!("relation matrix has {} rows, expected {rank}", rels.rows())));
        }
        let rels = if rels.rows() != rank { Matrix::zero(rank, 0) } else { rels };
        let mut entries = rels.clone();
        for i in 0..rank {
            for j in 0..rels.cols() {
                entries.set(i, j, ring.reduce(rels.get(i, j)));
            }
        }
        if let Some(d) = &degrees {
            if !ring.is_graded() {
                return Err(Error::Invalid("graded module over an ungraded ring".into()));
            }
            if d.len() != rank {
                return Err(Error::Invalid("generator degree list has the wrong length".into()));
            }
            for c in entries.columns() {
                vec_degree(ring, &c, d)?;
            }
        }
        Ok(FgModule { ring: ring.clone(), rank, rels: entries.nonzero_cols(), degrees, gb: Arc::new(OnceLock::new()) })
    }

    pub fn free(ring: &PolyRing, rank: usize) -> Self {
        let degrees = ring.is_graded().then(|| vec![0; rank]);
        FgModule::new(ring, rank, Matrix::zero(rank, 0), degrees).expect("free module")
    }

    pub fn zero(ring: &PolyRing) -> Self {
        FgModule::free(ring, 0)
    }

    /// `R/a`, graded when the ring is graded and `a` homogeneous.
    pub fn cyclic(a: &Ideal) -> Self {
        let ring = a.ring();
        let rels = Matrix::from_cols(1, &a.gens().iter().map(|g| vec![g.clone()]).collect::<Vec<_>>());
        let graded = ring.is_graded() && a.gens().iter().all(|g| ring.is_homogeneous(g));
        FgModule::new(ring, 1, rels, graded.then(|| vec![0])).expect("cyclic module")
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Matrix {
        &self.rels
    }

    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }

    /// Same presentation, degrees shifted by `k` (so `M(k)` has generators in degree `d - k`).
    pub fn twist(&self, k: i64) -> FgModule {
        let mut m = self.clone();
        m.degrees = self.degrees.as_ref().map(|d| d.iter().map(|x| x - k).collect());
        m.gb = Arc::new(OnceLock::new());
        m
    }

    pub fn ungraded(&self) -> FgModule {
        let mut m = self.clone();
        m.degrees = None;
        m
    }

    pub fn gb(&self) -> Result<Arc<ModuleGb>> {
        if let Some(g) = self.gb.get() {
            return Ok(g.clone());
        }
        let g = ModuleGb::compute(&self.ring, self.rank, &self.rels.columns())?;
        let _ = self.gb.set(Arc::new(g));
        Ok(self.gb.get().expect("set").clone())
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.rank == 0 || self.gb()?.is_full())
    }

    /// Normal form of an element of the ambient free module.
    pub fn reduce(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        Ok(self.gb()?.reduce(v))
    }

    pub fn is_zero_element(&self, v: &[Poly]) -> Result<bool> {
        Ok(self.gb()?.contains(v))
    }

    pub fn direct_sum(&self, other: &FgModule) -> Result<FgModule> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let rels = Matrix::block_diag(&[&self.rels, &other.rels]);
        let degrees = match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        FgModule::new(&self.ring, self.rank + other.rank, rels, degrees)
    }

    /// `ann M = ∩_j (im rels : e_j)`.
    pub fn annihilator(&self) -> Result<Ideal> {
        let r = &self.ring;
        let mut acc = Ideal::unit(r);
        for j in 0..self.rank {
            let mut e = vec![r.zero(); self.rank];
            e[j] = r.one();
            let mut cols = vec![e];
            cols.extend(self.rels.columns());
            let syz = syzygies(r, self.rank, &cols)?;
            let q = Ideal::new(r, syz.into_iter().map(|mut s| s.swap_remove(0)).collect());
            acc = acc.intersection(&q)?;
        }
        acc.minimalized()
    }

    /// `M / aM`.
    pub fn quotient_by_ideal(&self, a: &Ideal) -> Result<FgModule> {
        let r = &self.ring;
        let mut cols = self.rels.columns();
        for j in 0..self.rank {
            for g in a.gens() {
                let mut e = vec![r.zero(); self.rank];
                e[j] = g.clone();
                cols.push(e);
            }
        }
        let degrees =
            if self.is_graded() && a.gens().iter().all(|g| r.is_homogeneous(g)) { self.degrees.clone() } else { None };
        FgModule::new(r, self.rank, Matrix::from_cols(self.rank, &cols), degrees)
    }

    /// `(im G + im Rel) / im Rel` presented on the nonzero columns of `G`.
    pub fn subquotient(
        ring: &PolyRing,
        gens: &Matrix,
        rels: &Matrix,
        ambient_degrees: Option<&[i64]>,
    ) -> Result<Subquotient> {
        let gens = gens.nonzero_cols();
        let g = gens.cols();
        let mut cols = gens.columns();
        cols.extend(rels.columns());
        let syz = syzygies(ring, gens.rows(), &cols)?;
        let proj: Vec<Vec<Poly>> = syz.into_iter().map(|s| s[..g].to_vec()).collect();
        let degrees = match ambient_degrees {
            Some(d) => {
                let mut out = Vec::with_capacity(g);
                for c in gens.columns() {
                    out.push(vec_degree(ring, &c, d)?.expect("nonzero column"));
                }
                Some(out)
            }
            None => None,
        };
        let module = FgModule::new(ring, g, Matrix::from_cols(g, &proj), degrees)?;
        Ok(Subquotient { module, gens })
    }

    /// Kernel of the map `self -> target` induced by `map` on ambient free modules.
    pub fn kernel_of(&self, map: &Matrix, target: &FgModule) -> Result<Subquotient> {
        let r = &self.ring;
        let mut cols = map.columns();
        cols.extend(target.rels.columns());
        let syz = syzygies(r, target.rank, &cols)?;
        let k: Vec<Vec<Poly>> = syz.into_iter().map(|s| s[..self.rank].to_vec()).collect();
        let kmat = Matrix::from_cols(self.rank, &k);
        FgModule::subquotient(r, &kmat, &self.rels, self.degrees.as_deref())
    }

    /// Removes generators killed by unit relations and drops redundant relations.
    pub fn prune(&self) -> Result<Pruned> {
        let r = &self.ring;
        let field = r.field();
        let mut a = self.rels.clone();
        let mut keep: Vec<usize> = (0..self.rank).collect();
        let mut to_new = Matrix::identity(r, self.rank);
        'outer: loop {
            for j in 0..a.cols() {
                for i in 0..a.rows() {
                    let c = match a.get(i, j).as_constant() {
                        Some(c) if !num_traits::Zero::is_zero(&c) => c,
                        _ => continue,
                    };
                    let cinv = r.constant(field.inv(&c));
                    // clear row i in the other columns
                    let colj = a.col(j);
                    for l in 0..a.cols() {
                        if l == j || a.get(i, l).is_zero() {
                            continue;
                        }
                        let f = r.mul(a.get(i, l), &cinv);
                        for k in 0..a.rows() {
                            let v = r.sub(a.get(k, l), &r.mul(&f, &colj[k]));
                            a.set(k, l, v);
                        }
                    }
                    // e_i = -c^{-1} sum_{k != i} a_kj e_k
                    let n = a.rows();
                    let mut p = Matrix::zero(n - 1, n);
                    let mut kk = 0;
                    for k in 0..n {
                        if k == i {
                            continue;
                        }
                        p.set(kk, k, r.one());
                        p.set(kk, i, r.neg(&r.mul(&colj[k], &cinv)));
                        kk += 1;
                    }
                    to_new = p.mul(r, &to_new);
                    let rows: Vec<usize> = (0..n).filter(|&k| k != i).collect();
                    let cols: Vec<usize> = (0..a.cols()).filter(|&l| l != j).collect();
                    let mut b = Matrix::zero(rows.len(), cols.len());
                    for (ri, &k) in rows.iter().enumerate() {
                        for (ci, &l) in cols.iter().enumerate() {
                            b.set(ri, ci, a.get(k, l).clone());
                        }
                    }
                    a = b;
                    keep.remove(i);
                    continue 'outer;
                }
            }
            break;
        }
        let degrees = self.degrees.as_ref().map(|d| keep.iter().map(|&k| d[k]).collect::<Vec<_>>());
        let rank = keep.len();
        let cols = minimal_columns(r, rank, a.nonzero_cols().columns(), degrees.as_deref())?;
        let module = FgModule::new(r, rank, Matrix::from_cols(rank, &cols), degrees)?;
        let mut to_old = Matrix::zero(self.rank, rank);
        for (k, &o) in keep.iter().enumerate() {
            to_old.set(o, k, r.one());
        }
        Ok(Pruned { module, to_new, to_old })
    }

    /// Monomials spanning the degree-`d` piece: `(component, exponent)` pairs
    /// standard with respect to the relation module.
    pub fn graded_basis(&self, d: i64) -> Result<Vec<(usize, Exps)>> {
        let degrees =
            self.degrees.as_ref().ok_or_else(|| Error::Precondition("graded piece of an ungraded module".into()))?;
        let gb = self.gb()?;
        let w = self.ring.weights();
        let mut out = Vec::new();
        for (j, &dj) in degrees.iter().enumerate() {
            let target = d - dj;
            if target < 0 {
                continue;
            }
            for e in monomials_of_degree(w, target as u64) {
                if gb.is_standard(&e, j) {
                    out.push((j, e));
                }
            }
        }
        Ok(out)
    }

    pub fn graded_dim(&self, d: i64) -> Result<usize> {
        Ok(self.graded_basis(d)?.len())
    }

    pub fn display(&self) -> String {
        let mut s = format!("coker R^{} <- {}", self.rank, self.rels.fmt(&self.ring));
        if let Some(d) = &self.degrees {
            let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!(" graded [{}]", ds.join(", ")));
        }
        s
    }
}

/// Exponent vectors of weighted degree `d`, in a fixed enumeration order.
pub fn monomials_of_degree(weights: &[u32], d: u64) -> Vec<Exps> {
    fn rec(weights: &[u32], i: usize, left: u64, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i] as u64;
        let mut a = 0u64;
        while a * w <= left {
            cur[i] = a as u16;
            rec(weights, i + 1, left - a * w, cur, out);
            a += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = Exps::from_elem(0, weights.len());
    rec(weights, 0, d, &mut cur, &mut out);
    out
}

/// Drops columns lying in the span of the remaining ones. With degrees the
/// scan removes high-degree columns first, which leaves a minimal set.
pub fn minimal_columns(
    ring: &PolyRing,
    rank: usize,
    mut cols: Vec<Vec<Poly>>,
    degrees: Option<&[i64]>,
) -> Result<Vec<Vec<Poly>>> {
    cols.retain(|c| c.iter().any(|p| !p.is_zero()));
    if let Some(d) = degrees {
        let mut keyed: Vec<(i64, Vec<Poly>)> = Vec::with_capacity(cols.len());
        for c in cols {
            keyed.push((vec_degree(ring, &c, d)?.unwrap_or(0), c));
        }
        keyed.sort_by_key(|(k, _)| *k);
        cols = keyed.into_iter().map(|(_, c)| c).collect();
    }
    let mut i = cols.len();
    while i > 0 {
        i -= 1;
        let others: Vec<Vec<Poly>> = cols.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()).collect();
        let g = ModuleGb::compute(ring, rank, &others)?;
        if g.contains(&cols[i]) {
            cols.remove(i);
        }
    }
    Ok(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> PolyRing {
        PolyRing::rational_graded(&["x", "y"])
    }

    #[test]
    fn annihilator_of_sum() {
        let r = r2();
        let a = FgModule::cyclic(&Ideal::parse(&r, "<x>").unwrap());
        let b = FgModule::cyclic(&Ideal::parse(&r, "<y>").unwrap());
        let ann = a.direct_sum(&b).unwrap().annihilator().unwrap();
        assert!(ann.equals(&Ideal::parse(&r, "<x*y>").unwrap()).unwrap());
        assert!(FgModule::free(&r, 1).annihilator().unwrap().is_zero());
    }

    #[test]
    fn prune_eliminates_unit_relation() {
        let r = r2();
        // R^2 / <(1, x), (0, y)>  ≅  R / <y>
        let rels = Matrix::parse(&r, "[[1, 0], [x, y]]").unwrap();
        let m = FgModule::new(&r, 2, rels, Some(vec![1, 0])).unwrap();
        let p = m.prune().unwrap();
        assert_eq!(p.module.rank(), 1);
        assert_eq!(p.module.relations().fmt(&r), "[[y]]");
        assert_eq!(p.to_new.fmt(&r), "[[-x, 1]]");
        assert_eq!(p.module.degrees(), Some(&[0][..]));
    }

    #[test]
    fn graded_pieces_of_quotient() {
        let r = r2();
        let m = FgModule::cyclic(&Ideal::parse(&r, "<x^2>").unwrap());
        let dims: Vec<usize> = (0..4).map(|d| m.graded_dim(d).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 2, 2]);
    }

    #[test]
    fn kernel_of_multiplication() {
        let r = r2();
        // kernel of x: R/<xy> -> R/<xy> is generated by y, isomorphic to R/<x>
        let m = FgModule::cyclic(&Ideal::parse(&r, "<x*y>").unwrap());
        let map = Matrix::parse(&r, "[[x]]").unwrap();
        let k = m.kernel_of(&map, &m.twist(-1)).unwrap();
        let ann = k.module.annihilator().unwrap();
        assert!(ann.equals(&Ideal::parse(&r, "<x>").unwrap()).unwrap());
    }
}
