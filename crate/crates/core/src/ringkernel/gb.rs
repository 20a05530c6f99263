//! Buchberger completion for submodules of free modules over a polynomial ring.
//!
//! Ideals are the rank-one case. Vectors are sparse term lists carrying a
//! component index; the module order compares an elimination block first
//! (components below `split` dominate), then the monomial order, then the
//! component (term over position).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use num_traits::Zero;

use super::field::{BaseField, Scalar};
use super::order::{coprime, divides, lcm, sub_exps, Exps, MonoOrder};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub exps: Exps,
    pub comp: u32,
    pub coeff: Scalar,
}

pub(crate) type MVec = Vec<Term>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ModOrder {
    pub mono: MonoOrder,
    pub split: u32,
}

impl ModOrder {
    pub fn new(mono: MonoOrder) -> Self {
        ModOrder { mono, split: 0 }
    }

    pub fn with_split(mut self, split: u32) -> Self {
        self.split = split;
        self
    }

    #[inline]
    pub fn cmp(&self, ae: &[u16], ac: u32, be: &[u16], bc: u32) -> Ordering {
        let (ba, bb) = (ac < self.split, bc < self.split);
        if ba != bb {
            return if ba { Ordering::Greater } else { Ordering::Less };
        }
        match self.mono.cmp(ae, be) {
            Ordering::Equal => bc.cmp(&ac),
            o => o,
        }
    }

    #[inline]
    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.cmp(&a.exps, a.comp, &b.exps, b.comp)
    }

    pub fn sort(&self, v: &mut MVec) {
        v.sort_by(|a, b| self.cmp_terms(b, a));
    }
}

fn merge_sub(field: &BaseField, ord: &ModOrder, a: &[Term], b: &[Term], c: &Scalar, shift: &[u16]) -> MVec {
    // a - c * x^shift * b
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let mut bj: Option<Term> = None;
    let scaled = |t: &Term| Term {
        exps: t.exps.iter().zip(shift).map(|(x, y)| x + y).collect(),
        comp: t.comp,
        coeff: field.neg(&field.mul(&t.coeff, c)),
    };
    loop {
        if bj.is_none() && j < b.len() {
            bj = Some(scaled(&b[j]));
            j += 1;
        }
        match (a.get(i), bj.as_ref()) {
            (None, None) => break,
            (Some(t), None) => {
                out.push(t.clone());
                i += 1;
            }
            (None, Some(_)) => {
                out.push(bj.take().unwrap());
            }
            (Some(t), Some(u)) => match ord.cmp_terms(t, u) {
                Ordering::Greater => {
                    out.push(t.clone());
                    i += 1;
                }
                Ordering::Less => out.push(bj.take().unwrap()),
                Ordering::Equal => {
                    let s = field.add(&t.coeff, &u.coeff);
                    if !s.is_zero() {
                        out.push(Term { exps: t.exps.clone(), comp: t.comp, coeff: s });
                    }
                    i += 1;
                    bj = None;
                }
            },
        }
    }
    out
}

pub(crate) fn make_monic(field: &BaseField, v: &mut MVec) {
    if let Some(first) = v.first() {
        if !field.is_one(&first.coeff) {
            let inv = field.inv(&first.coeff);
            for t in v.iter_mut() {
                t.coeff = field.mul(&t.coeff, &inv);
            }
        }
    }
}

/// Leading-term lookup grouped by component.
#[derive(Clone, Debug, Default)]
pub(crate) struct LeadIndex {
    by_comp: HashMap<u32, Vec<usize>>,
}

impl LeadIndex {
    pub fn build(basis: &[MVec]) -> Self {
        let mut idx = LeadIndex::default();
        for (k, g) in basis.iter().enumerate() {
            idx.insert(k, g);
        }
        idx
    }

    pub fn insert(&mut self, k: usize, g: &MVec) {
        if let Some(t) = g.first() {
            self.by_comp.entry(t.comp).or_default().push(k);
        }
    }

    pub fn find(&self, basis: &[MVec], exps: &[u16], comp: u32) -> Option<usize> {
        self.by_comp.get(&comp)?.iter().copied().find(|&k| divides(&basis[k][0].exps, exps))
    }
}

/// Fully reduces `p` by a list of monic vectors.
pub(crate) fn reduce_full(field: &BaseField, ord: &ModOrder, basis: &[MVec], index: &LeadIndex, mut p: MVec) -> MVec {
    let mut i = 0;
    while i < p.len() {
        match index.find(basis, &p[i].exps, p[i].comp) {
            Some(k) => {
                let g = &basis[k];
                let shift = sub_exps(&p[i].exps, &g[0].exps);
                let c = p[i].coeff.clone();
                let tail = p.split_off(i);
                let merged = merge_sub(field, ord, &tail[1..], &g[1..], &c, &shift);
                p.extend(merged);
            }
            None => i += 1,
        }
    }
    p
}

fn spoly(field: &BaseField, ord: &ModOrder, f: &MVec, g: &MVec) -> MVec {
    let l = lcm(&f[0].exps, &g[0].exps);
    let sf = sub_exps(&l, &f[0].exps);
    let sg = sub_exps(&l, &g[0].exps);
    let fs: MVec = f[1..]
        .iter()
        .map(|t| Term {
            exps: t.exps.iter().zip(&sf).map(|(a, b)| a + b).collect(),
            comp: t.comp,
            coeff: t.coeff.clone(),
        })
        .collect();
    merge_sub(field, ord, &fs, &g[1..], &field.one(), &sg)
}

fn single_component(v: &MVec) -> bool {
    let c = v[0].comp;
    v.iter().all(|t| t.comp == c)
}

/// Computes the reduced Gröbner basis of the submodule generated by `gens`.
/// `budget` bounds the number of S-pairs processed.
pub(crate) fn groebner(field: &BaseField, ord: &ModOrder, gens: Vec<MVec>, budget: usize) -> Result<Vec<MVec>> {
    let mut basis: Vec<MVec> = Vec::new();
    let mut index = LeadIndex::default();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: Vec<(usize, usize)> = Vec::new();

    let add = |h: MVec,
               basis: &mut Vec<MVec>,
               index: &mut LeadIndex,
               pending: &mut HashSet<(usize, usize)>,
               queue: &mut Vec<(usize, usize)>| {
        let n = basis.len();
        for k in 0..n {
            if basis[k][0].comp == h[0].comp {
                pending.insert((k, n));
                queue.push((k, n));
            }
        }
        index.insert(n, &h);
        basis.push(h);
    };

    for mut g in gens {
        ord.sort(&mut g);
        g.retain(|t| !t.coeff.is_zero());
        let mut r = reduce_full(field, ord, &basis, &index, g);
        if !r.is_empty() {
            make_monic(field, &mut r);
            add(r, &mut basis, &mut index, &mut pending, &mut queue);
        }
    }

    let mut steps = 0usize;
    while !queue.is_empty() {
        // normal selection: smallest lcm
        let mut best = 0;
        let mut best_l = lcm(&basis[queue[0].0][0].exps, &basis[queue[0].1][0].exps);
        for (q, &(i, j)) in queue.iter().enumerate().skip(1) {
            let l = lcm(&basis[i][0].exps, &basis[j][0].exps);
            let c = basis[i][0].comp;
            let bc = basis[queue[best].0][0].comp;
            if ord.cmp(&l, c, &best_l, bc) == Ordering::Less {
                best = q;
                best_l = l;
            }
        }
        let (i, j) = queue.swap_remove(best);
        pending.remove(&(i, j));

        let (fi, fj) = (&basis[i], &basis[j]);
        if coprime(&fi[0].exps, &fj[0].exps) && single_component(fi) && single_component(fj) {
            continue;
        }
        let l = &best_l;
        let comp = fi[0].comp;
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].comp == comp
                && divides(&basis[k][0].exps, l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        steps += 1;
        if steps > budget {
            return Err(Error::ResourceLimit(format!("Gröbner step budget {budget} exhausted")));
        }
        let s = spoly(field, ord, fi, fj);
        let mut r = reduce_full(field, ord, &basis, &index, s);
        if !r.is_empty() {
            make_monic(field, &mut r);
            add(r, &mut basis, &mut index, &mut pending, &mut queue);
        }
    }

    Ok(interreduce(field, ord, basis))
}

/// Turns a Gröbner basis into the reduced one, sorted by ascending leading term.
pub(crate) fn interreduce(field: &BaseField, ord: &ModOrder, mut basis: Vec<MVec>) -> Vec<MVec> {
    basis.sort_by(|a, b| ord.cmp_terms(&a[0], &b[0]));
    let mut kept: Vec<MVec> = Vec::new();
    for g in basis {
        let redundant = kept.iter().any(|k| k[0].comp == g[0].comp && divides(&k[0].exps, &g[0].exps));
        if !redundant {
            kept.push(g);
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for k in 0..kept.len() {
        let others: Vec<MVec> = kept.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, v)| v.clone()).collect();
        let idx = LeadIndex::build(&others);
        let lead = kept[k][0].clone();
        let tail = reduce_full(field, ord, &others, &idx, kept[k][1..].to_vec());
        let mut v = vec![lead];
        v.extend(tail);
        make_monic(field, &mut v);
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringkernel::order::OrderKind;
    use smallvec::smallvec;

    fn t(e: &[u16], comp: u32, c: i64) -> Term {
        Term { exps: e.iter().copied().collect(), comp, coeff: Scalar::from_integer(c.into()) }
    }

    #[test]
    fn circle_and_line_lex() {
        // <x - y, x^2 + y^2 - 1> with x > y lex gives y^2 - 1/2
        let f = BaseField::Rationals;
        let ord = ModOrder::new(MonoOrder::new(OrderKind::Lex, vec![1, 1]));
        let g1 = vec![t(&[1, 0], 0, 1), t(&[0, 1], 0, -1)];
        let g2 = vec![t(&[2, 0], 0, 1), t(&[0, 2], 0, 1), t(&[0, 0], 0, -1)];
        let gb = groebner(&f, &ord, vec![g1, g2], 1000).unwrap();
        assert_eq!(gb.len(), 2);
        let last = gb.iter().find(|g| g[0].exps.as_slice() == [0, 2]).unwrap();
        assert_eq!(last[1].coeff, Scalar::new((-1).into(), 2.into()));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f = BaseField::Rationals;
        let ord = ModOrder::new(MonoOrder::new(OrderKind::GrevLex, vec![1, 1, 1]));
        let g1 = vec![t(&[3, 0, 0], 0, 1), t(&[0, 1, 2], 0, -1)];
        let g2 = vec![t(&[1, 2, 0], 0, 1), t(&[0, 0, 3], 0, -1)];
        let g3 = vec![t(&[0, 3, 0], 0, 1), t(&[1, 0, 1], 0, 1)];
        let r = groebner(&f, &ord, vec![g1, g2, g3], 0);
        assert!(matches!(r, Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn module_elimination_keeps_split_dominant() {
        let ord = ModOrder::new(MonoOrder::new(OrderKind::GrevLex, vec![1])).with_split(1);
        let a: Exps = smallvec![0];
        let b: Exps = smallvec![9];
        assert_eq!(ord.cmp(&a, 0, &b, 1), Ordering::Greater);
    }
}
