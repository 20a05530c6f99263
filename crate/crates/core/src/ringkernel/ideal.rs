use std::fmt;
use std::sync::{Arc, OnceLock};

use super::gb::{self, ModOrder};
use super::modgb::{syzygies, vec_to_mvec, ModuleGb};
use super::order::{Exps, MonoOrder, OrderKind};
use super::poly::Poly;
use super::ring::{mvec_to_poly, PolyRing};
use super::{cache, cache_dir, step_budget};
use crate::error::{Error, Result};

/// An ideal of a presented ring. The Gröbner basis is computed lazily and
/// shared between clones.
#[derive(Clone)]
pub struct Ideal {
    ring: PolyRing,
    gens: Vec<Poly>,
    gb: Arc<OnceLock<Arc<ModuleGb>>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens
    }
}

impl Eq for Ideal {}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.fmt_ideal_gens(&self.gens))
    }
}

impl Ideal {
    /// Generators are reduced modulo the ring; zeros and repeats are dropped.
    pub fn new(ring: &PolyRing, gens: Vec<Poly>) -> Self {
        let mut out: Vec<Poly> = Vec::with_capacity(gens.len());
        for g in gens {
            let g = ring.reduce(&g);
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ideal { ring: ring.clone(), gens: out, gb: Arc::new(OnceLock::new()) }
    }

    pub fn zero(ring: &PolyRing) -> Self {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &PolyRing) -> Self {
        Ideal::new(ring, vec![ring.one()])
    }

    pub fn principal(ring: &PolyRing, f: Poly) -> Self {
        Ideal::new(ring, vec![f])
    }

    pub fn variables(ring: &PolyRing, idx: &[usize]) -> Self {
        Ideal::new(ring, idx.iter().map(|&i| ring.var(i)).collect())
    }

    pub fn from_strs(ring: &PolyRing, gens: &[&str]) -> Result<Self> {
        let gens = gens.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, gens))
    }

    /// Parses `<g1, g2, ...>`.
    pub fn parse(ring: &PolyRing, s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t.strip_prefix('<').and_then(|r| r.strip_suffix('>')).ok_or_else(|| Error::Parse {
            line: 1,
            col: 1,
            msg: "ideal must be written <g1, ...>".into(),
        })?;
        if inner.trim().is_empty() {
            return Ok(Ideal::zero(ring));
        }
        let gens = split_top_level(inner).iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, gens))
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn same_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub(crate) fn module_gb(&self) -> Result<Arc<ModuleGb>> {
        if let Some(g) = self.gb.get() {
            return Ok(g.clone());
        }
        let dir = cache_dir();
        let key = dir.as_ref().map(|_| cache::key(&self.ring, &self.gens));
        let mut computed = None;
        if let (Some(d), Some(k)) = (&dir, &key) {
            if let Some(polys) = cache::load(d, k, &self.ring) {
                let g = ModuleGb::from_ideal_basis(&self.ring, &polys);
                if self.gens.iter().all(|p| g.contains(std::slice::from_ref(p))) {
                    computed = Some(g);
                }
            }
        }
        let g = match computed {
            Some(g) => g,
            None => {
                let cols: Vec<Vec<Poly>> = self.gens.iter().map(|g| vec![g.clone()]).collect();
                let g = ModuleGb::compute(&self.ring, 1, &cols)?;
                if let (Some(d), Some(k)) = (&dir, &key) {
                    cache::store(d, k, &self.ring, &g.ideal_basis_raw());
                }
                g
            }
        };
        let _ = self.gb.set(Arc::new(g));
        Ok(self.gb.get().expect("just set").clone())
    }

    /// Reduced Gröbner basis modulo the ring relations, in ascending lead order.
    pub fn groebner_basis(&self) -> Result<Vec<Poly>> {
        Ok(self.module_gb()?.elements().into_iter().map(|mut v| v.remove(0)).collect())
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        let g = self.module_gb()?;
        Ok(g.reduce(std::slice::from_ref(f)).remove(0))
    }

    pub fn contains_poly(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        self.same_ring(other)?;
        for g in &other.gens {
            if !self.contains_poly(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.module_gb()?.is_full())
    }

    /// `g ∈ √self`, via `self + (1 - t g)` being the unit ideal.
    pub fn radical_contains_poly(&self, g: &Poly) -> Result<bool> {
        let g = self.ring.reduce(g);
        if g.is_zero() {
            return Ok(true);
        }
        let n = self.ring.nvars();
        let map: Vec<usize> = (0..n).collect();
        let field = self.ring.field();
        let ord = ModOrder::new(MonoOrder::new(OrderKind::GrevLex, vec![1; n + 1]));
        let mut gens: Vec<Poly> = self.gens.iter().map(|p| p.remap(n + 1, &map)).collect();
        gens.extend(self.ring.relations().iter().map(|p| p.remap(n + 1, &map)));
        let mut t = Exps::from_elem(0, n + 1);
        t[n] = 1;
        let tg = g.remap(n + 1, &map).mul_term(field, &t, &field.one());
        gens.push(Poly::constant(n + 1, field.one()).sub(field, &tg));
        let mv = gens.iter().map(|p| vec_to_mvec(std::slice::from_ref(p), 0, &ord)).collect();
        let basis = gb::groebner(field, &ord, mv, step_budget())?;
        Ok(basis.iter().any(|b| b[0].exps.iter().all(|&e| e == 0)))
    }

    /// `other ⊆ √self`, i.e. `V(self) ⊆ V(other)`.
    pub fn radical_contains(&self, other: &Ideal) -> Result<bool> {
        self.same_ring(other)?;
        for g in &other.gens {
            if !self.radical_contains_poly(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn radical_equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.radical_contains(other)? && other.radical_contains(self)?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ok(Ideal::new(&self.ring, g))
    }

    pub fn add_poly(&self, f: &Poly) -> Ideal {
        let mut g = self.gens.clone();
        g.push(f.clone());
        Ideal::new(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(self.ring.mul(a, b));
            }
        }
        Ok(Ideal::new(&self.ring, g))
    }

    pub fn power(&self, k: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..k {
            acc = acc.product(self).expect("same ring");
        }
        acc
    }

    /// Intersection from syzygies of the columns `(1,1), (g_i,0), (0,h_j)`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let r = &self.ring;
        let mut cols = vec![vec![r.one(), r.one()]];
        cols.extend(self.gens.iter().map(|g| vec![g.clone(), r.zero()]));
        cols.extend(other.gens.iter().map(|h| vec![r.zero(), h.clone()]));
        let syz = syzygies(r, 2, &cols)?;
        Ok(Ideal::new(r, syz.into_iter().map(|mut s| s.swap_remove(0)).collect()))
    }

    /// `(self : f) = { g : g f ∈ self }`.
    pub fn quotient_poly(&self, f: &Poly) -> Result<Ideal> {
        let r = &self.ring;
        let f = r.reduce(f);
        if f.is_zero() {
            return Ok(Ideal::unit(r));
        }
        let mut cols = vec![vec![f]];
        cols.extend(self.gens.iter().map(|g| vec![g.clone()]));
        let syz = syzygies(r, 1, &cols)?;
        let q = Ideal::new(r, syz.into_iter().map(|mut s| s.swap_remove(0)).collect());
        // self ⊆ (self : f) always; keep the generators so the result reads well
        q.sum(self)?.minimalized()
    }

    pub fn quotient(&self, other: &Ideal) -> Result<Ideal> {
        self.same_ring(other)?;
        let mut acc = Ideal::unit(&self.ring);
        for g in &other.gens {
            acc = acc.intersection(&self.quotient_poly(g)?)?;
        }
        acc.minimalized()
    }

    pub fn saturation_poly(&self, f: &Poly) -> Result<Ideal> {
        let mut cur = self.clone();
        loop {
            let next = cur.quotient_poly(f)?;
            if cur.contains(&next)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `(self : other^∞)`.
    pub fn saturation(&self, other: &Ideal) -> Result<Ideal> {
        let mut cur = self.clone();
        loop {
            let next = cur.quotient(other)?;
            if cur.contains(&next)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `self ∩ k[remaining variables]`, via a block order with the
    /// eliminated variables first.
    pub fn eliminate(&self, vars: &[usize]) -> Result<Ideal> {
        let n = self.ring.nvars();
        let mut perm: Vec<usize> = vars.to_vec();
        perm.sort_unstable();
        perm.dedup();
        let k = perm.len();
        perm.extend((0..n).filter(|i| !vars.contains(i)));
        // old index i sits at position pos[i]
        let mut pos = vec![0; n];
        for (p, &i) in perm.iter().enumerate() {
            pos[i] = p;
        }
        let field = self.ring.field();
        let ord = ModOrder::new(MonoOrder::new(OrderKind::GrevLex, vec![1; n]).with_block(k));
        let mut gens: Vec<Poly> = self.gens.iter().map(|p| p.remap(n, &pos)).collect();
        gens.extend(self.ring.relations().iter().map(|p| p.remap(n, &pos)));
        let mv = gens.iter().map(|p| vec_to_mvec(std::slice::from_ref(p), 0, &ord)).collect();
        let basis = gb::groebner(field, &ord, mv, step_budget())?;
        let keep: Vec<Poly> = basis
            .iter()
            .filter(|b| b[0].exps[..k].iter().all(|&e| e == 0))
            .map(|b| mvec_to_poly(field, b).remap(n, &perm))
            .collect();
        Ideal::new(&self.ring, keep).minimalized()
    }

    /// Drops generators that lie in the ideal generated by the others,
    /// scanning from the last one.
    pub fn minimalized(&self) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        let mut i = gens.len();
        while i > 0 {
            i -= 1;
            let others: Vec<Poly> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let o = Ideal::new(&self.ring, others);
            if o.contains_poly(&gens[i])? {
                gens.remove(i);
            }
        }
        let out = Ideal::new(&self.ring, gens);
        let _ = out.gb.set(self.module_gb()?);
        Ok(out)
    }

    /// Krull dimension of `R/self`; `None` stands for the unit ideal (−∞).
    pub fn dimension(&self) -> Result<Option<usize>> {
        let g = self.module_gb()?;
        if g.is_full() {
            return Ok(None);
        }
        let leads: Vec<Exps> = g.leads().into_iter().map(|(e, _)| e).collect();
        let n = self.ring.nvars();
        let mut best = 0;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            // independent: no leading monomial supported inside the set
            let independent = leads.iter().all(|e| e.iter().enumerate().any(|(i, &a)| a > 0 && mask & (1 << i) == 0));
            if independent {
                best = size;
            }
        }
        Ok(Some(best))
    }

    /// An element of `self` outside every listed prime. Candidates are scanned
    /// by number of generators involved, then coefficient size (1, -1, 2, -2,
    /// ...), then lexicographically.
    pub fn prime_avoid(&self, primes: &[PrimeIdeal]) -> Result<Poly> {
        for p in primes {
            self.same_ring(p.ideal())?;
            if p.ideal().contains(self)? {
                return Err(Error::Precondition(format!("{self} is contained in the prime {}", p.ideal())));
            }
        }
        let m = self.gens.len();
        let coeffs: Vec<i64> = vec![1, -1, 2, -2, 3, -3, 4, -4];
        let avoids = |f: &Poly| -> Result<bool> {
            for p in primes {
                if p.ideal().contains_poly(f)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        for support in 1..=m {
            for bound in 1..=coeffs.len() {
                let cs = &coeffs[..bound];
                for subset in subsets(m, support) {
                    for code in 0..bound.pow(support as u32) {
                        let mut idx = vec![0usize; support];
                        let mut c = code;
                        for k in (0..support).rev() {
                            idx[k] = c % bound;
                            c /= bound;
                        }
                        // only vectors that use the newest coefficient somewhere
                        if bound > 1 && !idx.contains(&(bound - 1)) {
                            continue;
                        }
                        let mut f = Poly::zero();
                        for (k, &g) in subset.iter().enumerate() {
                            let c = self.ring.field().from_i64(cs[idx[k]]);
                            f = self.ring.add(&f, &self.ring.scale(&self.gens[g], &c));
                        }
                        if !f.is_zero() && avoids(&f)? {
                            return Ok(f);
                        }
                    }
                }
            }
        }
        Err(Error::Inconclusive("no avoiding element among small linear combinations".into()))
    }

    /// True when every generator is a monomial.
    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.is_monomial())
    }
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Splits on commas that are not nested inside parentheses or brackets.
pub(crate) fn split_top_level(s: &str) -> Vec<String> {
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
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeCertificate {
    /// Generated by variables modulo relations it contains; prime by inspection.
    VariableGenerated,
    /// Primality supplied by the caller.
    Asserted,
}

impl PrimeCertificate {
    pub fn name(&self) -> &'static str {
        match self {
            PrimeCertificate::VariableGenerated => "variable-generated",
            PrimeCertificate::Asserted => "asserted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    ideal: Ideal,
    certificate: PrimeCertificate,
}

impl PrimeIdeal {
    /// Certifies primality when the ideal is generated by variables and
    /// contains the ring relations, so that `R/p` is a polynomial ring.
    pub fn certify(ideal: Ideal) -> Result<Self> {
        let ring = ideal.ring().clone();
        let mut vars = Vec::new();
        for g in ideal.gens() {
            let t = g.terms();
            let single = t.len() == 1 && t[0].0.iter().map(|&e| e as u32).sum::<u32>() == 1;
            if !single {
                return Err(Error::Precondition(format!("{ideal} is not generated by variables; declare it asserted")));
            }
            vars.push(t[0].0.iter().position(|&e| e == 1).expect("degree one"));
        }
        let ambient = ring.ambient();
        let in_ambient = Ideal::variables(&ambient, &vars);
        for q in ring.relations() {
            if !in_ambient.contains_poly(q)? {
                return Err(Error::Precondition(format!(
                    "{ideal} does not contain the ring relations; declare it asserted"
                )));
            }
        }
        if ideal.is_unit()? {
            return Err(Error::Precondition("the unit ideal is not prime".into()));
        }
        Ok(PrimeIdeal { ideal, certificate: PrimeCertificate::VariableGenerated })
    }

    pub fn asserted(ideal: Ideal) -> Result<Self> {
        if ideal.is_unit()? {
            return Err(Error::Precondition("the unit ideal is not prime".into()));
        }
        Ok(PrimeIdeal { ideal, certificate: PrimeCertificate::Asserted })
    }

    pub fn variables(ring: &PolyRing, idx: &[usize]) -> Result<Self> {
        PrimeIdeal::certify(Ideal::variables(ring, idx))
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &PolyRing {
        self.ideal.ring()
    }

    pub fn certificate(&self) -> PrimeCertificate {
        self.certificate
    }

    /// `dim R/p`.
    pub fn coheight(&self) -> Result<usize> {
        Ok(self.ideal.dimension()?.expect("primes are proper"))
    }

    /// `height p/q = dim R/q - dim R/p` for primes `q ⊆ p`.
    pub fn height_over(&self, q: &PrimeIdeal) -> Result<usize> {
        if !self.ideal.contains(&q.ideal)? {
            return Err(Error::Precondition(format!("{} is not contained in {}", q.ideal, self.ideal)));
        }
        Ok(q.coheight()? - self.coheight()?)
    }

    /// `height p = dim R - dim R/p`.
    pub fn height(&self) -> Result<usize> {
        let d = Ideal::zero(self.ring()).dimension()?.expect("ring is nonzero");
        Ok(d - self.coheight()?)
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ideal.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> PolyRing {
        PolyRing::rational(&["x", "y"])
    }

    fn id(r: &PolyRing, s: &str) -> Ideal {
        Ideal::parse(r, s).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let r = PolyRing::new(super::super::BaseField::Rationals, vec!["x".into(), "y".into()], OrderKind::Lex, None)
            .unwrap();
        let i = id(&r, "<x - y>");
        // substitute x -> y
        assert_eq!(i.normal_form(&r.parse("x^2 + y^2").unwrap()).unwrap(), r.parse("2*y^2").unwrap());
        let gb = id(&r, "<x - y, x^2 + y^2 - 1>").groebner_basis().unwrap();
        let target = r.parse("2*y^2 - 1").unwrap();
        assert!(gb.iter().any(|g| r.scale(g, &r.field().from_i64(2)) == target));
        assert!(id(&r, "<0>").groebner_basis().unwrap().is_empty());
    }

    #[test]
    fn quotient_and_saturation() {
        let r = r2();
        let q = id(&r, "<x*y>").quotient_poly(&r.var(0)).unwrap();
        assert!(q.equals(&id(&r, "<y>")).unwrap());
        let s = id(&r, "<x^2*y>").saturation_poly(&r.var(1)).unwrap();
        assert!(s.equals(&id(&r, "<x^2>")).unwrap());
    }

    #[test]
    fn intersection_of_coordinate_axes() {
        let r = r2();
        let i = id(&r, "<x>").intersection(&id(&r, "<y>")).unwrap();
        assert!(i.equals(&id(&r, "<x*y>")).unwrap());
    }

    #[test]
    fn radical_membership() {
        let r = r2();
        assert!(id(&r, "<x^2 + y^2, x*y>").radical_contains(&id(&r, "<x, y>")).unwrap());
        assert!(!id(&r, "<x^2>").radical_contains(&id(&r, "<y>")).unwrap());
    }

    #[test]
    fn dimension_and_heights() {
        let r = r2();
        assert_eq!(id(&r, "<x>").dimension().unwrap(), Some(1));
        assert_eq!(id(&r, "<1>").dimension().unwrap(), None);
        let m = PrimeIdeal::variables(&r, &[0, 1]).unwrap();
        let p = PrimeIdeal::variables(&r, &[0]).unwrap();
        assert_eq!(m.height_over(&p).unwrap(), 1);
        assert_eq!(m.height_over(&m).unwrap(), 0);
        assert!(p.height_over(&m).is_err());
    }

    #[test]
    fn prime_avoidance() {
        let r = r2();
        let px = PrimeIdeal::variables(&r, &[0]).unwrap();
        let py = PrimeIdeal::variables(&r, &[1]).unwrap();
        let a = id(&r, "<x, y>");
        assert_eq!(a.prime_avoid(&[px.clone(), py]).unwrap(), r.parse("x + y").unwrap());
        assert!(id(&r, "<x>").prime_avoid(&[px]).is_err());
    }

    #[test]
    fn elimination_projects() {
        let r = PolyRing::rational(&["t", "x", "y"]);
        let i = id(&r, "<x - t^2, y - t^3>");
        let e = i.eliminate(&[0]).unwrap();
        assert!(e.equals(&id(&r, "<x^3 - y^2>")).unwrap());
    }

    #[test]
    fn certificate_rules() {
        let r = r2();
        assert!(PrimeIdeal::certify(id(&r, "<x + y>")).is_err());
        assert!(PrimeIdeal::asserted(id(&r, "<x + y>")).is_ok());
        let q = r.quotient(&[r.parse("x*y").unwrap()]).unwrap();
        assert!(PrimeIdeal::certify(id(&q, "<x>")).is_ok());
        let q2 = r.quotient(&[r.parse("x^2 - y").unwrap()]).unwrap();
        assert!(PrimeIdeal::certify(id(&q2, "<x>")).is_err());
    }
}
