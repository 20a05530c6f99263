//! Submodules of free modules: Gröbner bases, syzygies and lifting.
//!
//! Column vectors are `Vec<Poly>` of the ambient rank. Quotient relations
//! of the ring are adjoined in every component, so all answers are over the
//! presented ring.

use super::gb::{self, LeadIndex, MVec, ModOrder, Term};
use super::order::Exps;
use super::poly::Poly;
use super::ring::PolyRing;
use crate::error::Result;

pub(crate) fn vec_to_mvec(v: &[Poly], offset: u32, ord: &ModOrder) -> MVec {
    let mut out: MVec = Vec::new();
    for (j, p) in v.iter().enumerate() {
        for (e, c) in p.terms() {
            out.push(Term { exps: e.clone(), comp: offset + j as u32, coeff: c.clone() });
        }
    }
    ord.sort(&mut out);
    out
}

pub(crate) fn mvec_to_vec(ring: &PolyRing, v: &[Term], offset: u32, rank: usize) -> Vec<Poly> {
    let mut buckets: Vec<Vec<(Exps, super::Scalar)>> = vec![Vec::new(); rank];
    for t in v {
        let j = (t.comp - offset) as usize;
        buckets[j].push((t.exps.clone(), t.coeff.clone()));
    }
    buckets.into_iter().map(|b| ring.reduce(&Poly::from_terms(ring.field(), b))).collect()
}

fn relation_vectors(ring: &PolyRing, ncomp: usize, ord: &ModOrder) -> Vec<MVec> {
    let mut out = Vec::new();
    for j in 0..ncomp {
        for q in ring.relations() {
            let mut v: MVec =
                q.terms().iter().map(|(e, c)| Term { exps: e.clone(), comp: j as u32, coeff: c.clone() }).collect();
            ord.sort(&mut v);
            out.push(v);
        }
    }
    out
}

/// Gröbner basis of a submodule `im(cols) + I_R * R^rank`.
#[derive(Clone, Debug)]
pub struct ModuleGb {
    ring: PolyRing,
    rank: usize,
    ord: ModOrder,
    basis: Vec<MVec>,
    index: LeadIndex,
}

impl ModuleGb {
    pub fn compute(ring: &PolyRing, rank: usize, cols: &[Vec<Poly>]) -> Result<Self> {
        let ord = ModOrder::new(ring.mono_order().clone());
        let mut gens: Vec<MVec> = cols.iter().map(|c| vec_to_mvec(c, 0, &ord)).collect();
        gens.extend(relation_vectors(ring, rank, &ord));
        let basis = gb::groebner(ring.field(), &ord, gens, super::step_budget())?;
        let index = LeadIndex::build(&basis);
        Ok(ModuleGb { ring: ring.clone(), rank, ord, basis, index })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Rebuilds a Gröbner basis of an ideal from previously computed elements.
    pub(crate) fn from_ideal_basis(ring: &PolyRing, polys: &[Poly]) -> Self {
        let ord = ModOrder::new(ring.mono_order().clone());
        let mut basis: Vec<MVec> = polys.iter().map(|p| vec_to_mvec(std::slice::from_ref(p), 0, &ord)).collect();
        basis.retain(|b| !b.is_empty());
        for b in basis.iter_mut() {
            gb::make_monic(ring.field(), b);
        }
        let index = LeadIndex::build(&basis);
        ModuleGb { ring: ring.clone(), rank: 1, ord, basis, index }
    }

    /// Basis elements of a rank-one module as polynomials of the ambient ring.
    pub(crate) fn ideal_basis_raw(&self) -> Vec<Poly> {
        self.basis
            .iter()
            .map(|g| Poly::from_terms(self.ring.field(), g.iter().map(|t| (t.exps.clone(), t.coeff.clone()))))
            .collect()
    }

    /// Basis elements reduced modulo the ring relations, zeros dropped.
    pub fn elements(&self) -> Vec<Vec<Poly>> {
        self.basis
            .iter()
            .map(|g| mvec_to_vec(&self.ring, g, 0, self.rank))
            .filter(|v| v.iter().any(|p| !p.is_zero()))
            .collect()
    }

    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        let m = vec_to_mvec(v, 0, &self.ord);
        let r = gb::reduce_full(self.ring.field(), &self.ord, &self.basis, &self.index, m);
        mvec_to_vec(&self.ring, &r, 0, self.rank)
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.reduce(v).iter().all(|p| p.is_zero())
    }

    /// Leading monomials as (exponents, component) pairs.
    pub fn leads(&self) -> Vec<(Exps, usize)> {
        self.basis.iter().map(|g| (g[0].exps.clone(), g[0].comp as usize)).collect()
    }

    /// True when `e * gen_comp` is a standard monomial (not in the lead module).
    pub fn is_standard(&self, e: &[u16], comp: usize) -> bool {
        self.index.find(&self.basis, e, comp as u32).is_none()
    }

    /// True when the submodule is everything.
    pub fn is_full(&self) -> bool {
        (0..self.rank).all(|j| {
            let zero = Exps::from_elem(0, self.ring.nvars());
            !self.is_standard(&zero, j)
        })
    }
}

/// Elimination Gröbner basis of `(f_i ; e_i)` in `R^(r+m)`, giving syzygies
/// of the columns and cofactors for membership.
#[derive(Clone, Debug)]
pub struct SyzygyGb {
    ring: PolyRing,
    rank: usize,
    ncols: usize,
    ord: ModOrder,
    basis: Vec<MVec>,
    index: LeadIndex,
}

impl SyzygyGb {
    pub fn compute(ring: &PolyRing, rank: usize, cols: &[Vec<Poly>]) -> Result<Self> {
        let m = cols.len();
        let ord = ModOrder::new(ring.mono_order().clone()).with_split(rank as u32);
        let mut gens: Vec<MVec> = Vec::with_capacity(m);
        for (i, c) in cols.iter().enumerate() {
            let mut v = vec_to_mvec(c, 0, &ord);
            v.push(Term { exps: Exps::from_elem(0, ring.nvars()), comp: (rank + i) as u32, coeff: ring.field().one() });
            ord.sort(&mut v);
            gens.push(v);
        }
        gens.extend(relation_vectors(ring, rank + m, &ord));
        let basis = gb::groebner(ring.field(), &ord, gens, super::step_budget())?;
        let index = LeadIndex::build(&basis);
        Ok(SyzygyGb { ring: ring.clone(), rank, ncols: m, ord, basis, index })
    }

    /// Generators of the syzygy module (nonzero modulo the ring relations).
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        let r = self.rank as u32;
        let mut out = Vec::new();
        for g in &self.basis {
            if g[0].comp < r {
                continue;
            }
            let v = mvec_to_vec(&self.ring, g, r, self.ncols);
            if v.iter().any(|p| !p.is_zero()) {
                out.push(v);
            }
        }
        out
    }

    /// Coefficients `c` with `target = sum c_i col_i` in `R^rank`, if any.
    pub fn lift(&self, target: &[Poly]) -> Option<Vec<Poly>> {
        let v = vec_to_mvec(target, 0, &self.ord);
        let rem = gb::reduce_full(self.ring.field(), &self.ord, &self.basis, &self.index, v);
        if rem.iter().any(|t| (t.comp as usize) < self.rank) {
            return None;
        }
        let w = mvec_to_vec(&self.ring, &rem, self.rank as u32, self.ncols);
        Some(w.iter().map(|p| self.ring.neg(p)).collect())
    }
}

/// Syzygies of the given columns of a `rank x m` matrix.
pub fn syzygies(ring: &PolyRing, rank: usize, cols: &[Vec<Poly>]) -> Result<Vec<Vec<Poly>>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    Ok(SyzygyGb::compute(ring, rank, cols)?.syzygies())
}

/// Solves `cols * c = target` for every target.
pub fn lift(ring: &PolyRing, rank: usize, cols: &[Vec<Poly>], targets: &[Vec<Poly>]) -> Result<Vec<Option<Vec<Poly>>>> {
    let g = SyzygyGb::compute(ring, rank, cols)?;
    Ok(targets.iter().map(|t| g.lift(t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_syzygy(ring: &PolyRing, rank: usize, cols: &[Vec<Poly>], s: &[Poly]) {
        for row in 0..rank {
            let mut acc = Poly::zero();
            for (c, coef) in cols.iter().zip(s) {
                acc = ring.add(&acc, &ring.mul(&c[row], coef));
            }
            assert!(acc.is_zero(), "not a syzygy");
        }
    }

    #[test]
    fn koszul_syzygy_of_two_variables() {
        let r = PolyRing::rational(&["x", "y"]);
        let cols = vec![vec![r.var(0)], vec![r.var(1)]];
        let syz = syzygies(&r, 1, &cols).unwrap();
        assert_eq!(syz.len(), 1);
        check_syzygy(&r, 1, &cols, &syz[0]);
        assert_eq!(r.fmt_poly(&syz[0][0]).trim_start_matches('-'), "y");
    }

    #[test]
    fn syzygies_over_quotient_ring() {
        // over k[x]/(x^2) the column [x] has syzygy x
        let r0 = PolyRing::rational(&["x"]);
        let r = r0.quotient(&[r0.parse("x^2").unwrap()]).unwrap();
        let cols = vec![vec![r.var(0)]];
        let syz = syzygies(&r, 1, &cols).unwrap();
        assert_eq!(syz, vec![vec![r.var(0)]]);
    }

    #[test]
    fn lift_recovers_cofactors() {
        let r = PolyRing::rational(&["x", "y"]);
        let cols = vec![vec![r.var(0)], vec![r.var(1)]];
        let t = vec![r.parse("x^2 + 3*x*y - y^3").unwrap()];
        let c = lift(&r, 1, &cols, &[t.clone(), vec![r.one()]]).unwrap();
        let c0 = c[0].clone().unwrap();
        let back = r.add(&r.mul(&c0[0], &r.var(0)), &r.mul(&c0[1], &r.var(1)));
        assert_eq!(back, t[0]);
        assert!(c[1].is_none());
    }
}
