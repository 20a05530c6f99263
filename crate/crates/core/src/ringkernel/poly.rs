use std::collections::BTreeMap;

use num_traits::Zero;

use super::field::{BaseField, Scalar};
use super::order::{add_exps, Exps};

/// A polynomial as a sparse list of terms, sorted by exponent vector
/// (lexicographically descending on the raw vectors). This storage order is
/// independent of the ring's monomial order so that equality and hashing are
/// canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    pub(crate) terms: Vec<(Exps, Scalar)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(Exps::from_elem(0, nvars), c)] }
    }

    pub fn monomial(exps: Exps, c: Scalar) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(exps, c)] }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(field: &BaseField, terms: impl IntoIterator<Item = (Exps, Scalar)>) -> Self {
        let mut acc: BTreeMap<Exps, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            match acc.get_mut(&e) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Exps, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(e, c)] if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn degree(&self, weights: &[u32]) -> Option<u64> {
        self.terms.iter().map(|(e, _)| e.iter().zip(weights).map(|(&a, &w)| a as u64 * w as u64).sum()).max()
    }

    /// Weighted degree if homogeneous; `None` for the zero polynomial or mixed degrees.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u64> {
        let mut it =
            self.terms.iter().map(|(e, _)| e.iter().zip(weights).map(|(&a, &w)| a as u64 * w as u64).sum::<u64>());
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        self.is_zero() || self.homogeneous_degree(weights).is_some()
    }

    pub fn add(&self, field: &BaseField, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = field.add(&a[i].1, &b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self, field: &BaseField) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), field.neg(c))).collect() }
    }

    pub fn sub(&self, field: &BaseField, other: &Poly) -> Poly {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &BaseField, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), field.mul(a, c))).filter(|(_, a)| !a.is_zero()).collect(),
        }
    }

    pub fn mul_term(&self, field: &BaseField, e: &[u16], c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(f, a)| (add_exps(f, e), field.mul(a, c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn mul(&self, field: &BaseField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(field, &other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(field, &self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: BTreeMap<Exps, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = add_exps(ea, eb);
                let c = field.mul(ca, cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = field.add(v, &c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Poly { terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, field: &BaseField, nvars: usize, k: u32) -> Poly {
        let mut result = Poly::constant(nvars, field.one());
        for _ in 0..k {
            result = result.mul(field, self);
        }
        result
    }

    /// Variables (by index) occurring in the polynomial.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for (e, _) in &self.terms {
            for (i, &a) in e.iter().enumerate() {
                if a > 0 && !seen.contains(&i) {
                    seen.push(i);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    /// Embeds into a ring with more variables; old variable `i` goes to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut terms: Vec<(Exps, Scalar)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = Exps::from_elem(0, nvars);
                for (i, &a) in e.iter().enumerate() {
                    f[map[i]] = a;
                }
                (f, c.clone())
            })
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    #[test]
    fn product_of_binomials() {
        let f = q();
        let x = Poly::monomial(smallvec![1, 0], f.one());
        let y = Poly::monomial(smallvec![0, 1], f.one());
        let a = x.add(&f, &y);
        let b = x.sub(&f, &y);
        let p = a.mul(&f, &b);
        let expected = Poly::from_terms(&f, vec![(smallvec![2, 0], f.one()), (smallvec![0, 2], f.from_i64(-1))]);
        assert_eq!(p, expected);
    }

    #[test]
    fn cancellation_yields_zero() {
        let f = q();
        let x = Poly::monomial(smallvec![1], f.from_i64(3));
        assert!(x.sub(&f, &x).is_zero());
    }
}
