use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{fmt_scalar, scalar_is_negative, BaseField, Scalar};
use super::gb::{self, LeadIndex, MVec, ModOrder, Term};
use super::order::{Exps, MonoOrder, OrderKind};
use super::poly::Poly;
use crate::error::{Error, Result};

struct RingInner {
    field: BaseField,
    vars: Vec<String>,
    kind: OrderKind,
    grading: Option<Vec<u32>>,
    order: MonoOrder,
    quotient: Vec<Poly>,
    qbasis: Vec<MVec>,
    qindex: LeadIndex,
}

/// A presented ring `k[x_1..x_n] / I_R` with a fixed monomial order.
///
/// Cloning is cheap. Polynomials handed out by the ring are always in normal
/// form modulo the quotient relations.
#[derive(Clone)]
pub struct PolyRing {
    inner: Arc<RingInner>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field
                && self.inner.vars == other.inner.vars
                && self.inner.kind == other.inner.kind
                && self.inner.grading == other.inner.grading
                && self.inner.quotient == other.inner.quotient)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyRing({self})")
    }
}

fn valid_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

impl PolyRing {
    pub fn new(field: BaseField, vars: Vec<String>, kind: OrderKind, grading: Option<Vec<u32>>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::Invalid(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("variable `{v}` declared twice")));
            }
        }
        if let Some(g) = &grading {
            if g.len() != vars.len() {
                return Err(Error::Invalid("grading length differs from number of variables".into()));
            }
            if g.contains(&0) {
                return Err(Error::Invalid("grading degrees must be positive".into()));
            }
        }
        let weights = grading.clone().unwrap_or_else(|| vec![1; vars.len()]);
        let order = MonoOrder::new(kind, weights);
        Ok(PolyRing {
            inner: Arc::new(RingInner {
                field,
                vars,
                kind,
                grading,
                order,
                quotient: Vec::new(),
                qbasis: Vec::new(),
                qindex: LeadIndex::default(),
            }),
        })
    }

    /// Shorthand for a polynomial ring over the rationals with grevlex order.
    pub fn rational(vars: &[&str]) -> Self {
        Self::new(BaseField::Rationals, vars.iter().map(|s| s.to_string()).collect(), OrderKind::GrevLex, None)
            .expect("valid variable names")
    }

    /// Same as [`PolyRing::rational`] with the standard grading.
    pub fn rational_graded(vars: &[&str]) -> Self {
        Self::new(
            BaseField::Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            OrderKind::GrevLex,
            Some(vec![1; vars.len()]),
        )
        .expect("valid variable names")
    }

    /// The quotient of this polynomial ring by `rels`. Relations are taken in
    /// addition to any relations the ring already has.
    pub fn quotient(&self, rels: &[Poly]) -> Result<PolyRing> {
        let mut gens: Vec<Poly> = self.inner.quotient.clone();
        gens.extend(rels.iter().cloned());
        if let Some(w) = &self.inner.grading {
            if gens.iter().any(|g| !g.is_homogeneous(w)) {
                return Err(Error::Invalid("quotient relations of a graded ring must be homogeneous".into()));
            }
        }
        let ord = ModOrder::new(self.inner.order.clone());
        let mvecs: Vec<MVec> = gens.iter().map(|g| poly_to_mvec(g, 0, &ord)).collect();
        let basis = gb::groebner(&self.inner.field, &ord, mvecs, super::step_budget())?;
        if basis.iter().any(|b| b[0].exps.iter().all(|&e| e == 0)) {
            return Err(Error::Invalid("quotient relations generate the unit ideal".into()));
        }
        let quotient: Vec<Poly> = basis.iter().map(|v| mvec_to_poly(&self.inner.field, v)).collect();
        let qindex = LeadIndex::build(&basis);
        Ok(PolyRing {
            inner: Arc::new(RingInner {
                field: self.inner.field.clone(),
                vars: self.inner.vars.clone(),
                kind: self.inner.kind,
                grading: self.inner.grading.clone(),
                order: self.inner.order.clone(),
                quotient,
                qbasis: basis,
                qindex,
            }),
        })
    }

    /// The ambient polynomial ring with the quotient relations dropped.
    pub fn ambient(&self) -> PolyRing {
        PolyRing::new(self.field().clone(), self.inner.vars.clone(), self.inner.kind, self.inner.grading.clone())
            .expect("already validated")
    }

    pub fn field(&self) -> &BaseField {
        &self.inner.field
    }

    pub fn nvars(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn order_kind(&self) -> OrderKind {
        self.inner.kind
    }

    pub fn grading(&self) -> Option<&[u32]> {
        self.inner.grading.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.inner.grading.is_some()
    }

    /// Variable degrees; all ones for an ungraded ring.
    pub fn weights(&self) -> &[u32] {
        &self.inner.order.weights
    }

    pub(crate) fn mono_order(&self) -> &MonoOrder {
        &self.inner.order
    }

    /// Reduced Gröbner basis of the defining relations (empty for a polynomial ring).
    pub fn relations(&self) -> &[Poly] {
        &self.inner.quotient
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.inner.quotient.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.inner.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = Exps::from_elem(0, self.nvars());
        e[i] = 1;
        self.reduce(&Poly::monomial(e, self.field().one()))
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        self.reduce(&Poly::constant(self.nvars(), c))
    }

    pub fn from_i64(&self, c: i64) -> Poly {
        self.constant(self.field().from_i64(c))
    }

    /// Normal form modulo the quotient relations.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if self.inner.qbasis.is_empty() || p.is_zero() {
            return p.clone();
        }
        let ord = ModOrder::new(self.inner.order.clone());
        let v = poly_to_mvec(p, 0, &ord);
        let r = gb::reduce_full(&self.inner.field, &ord, &self.inner.qbasis, &self.inner.qindex, v);
        mvec_to_poly(&self.inner.field, &r)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(self.field(), b)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(self.field(), b)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        a.neg(self.field())
    }

    pub fn scale(&self, a: &Poly, c: &Scalar) -> Poly {
        a.scale(self.field(), c)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(self.field(), b))
    }

    pub fn pow(&self, a: &Poly, k: u32) -> Poly {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn is_homogeneous(&self, p: &Poly) -> bool {
        p.is_homogeneous(self.weights())
    }

    pub fn degree_of(&self, p: &Poly) -> Option<u64> {
        p.degree(self.weights())
    }

    /// Leading term under the ring's order.
    pub fn leading(&self, p: &Poly) -> Option<(Exps, Scalar)> {
        p.terms().iter().max_by(|a, b| self.inner.order.cmp(&a.0, &b.0)).cloned()
    }

    /// Parses the textual polynomial syntax (`3*x^2*y - 1/2*z`).
    pub fn parse(&self, s: &str) -> Result<Poly> {
        let mut p = PolyParser { ring: self, src: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(self.reduce(&v))
    }

    /// Formats with terms in descending monomial order.
    pub fn fmt_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<&(Exps, Scalar)> = p.terms().iter().collect();
        terms.sort_by(|a, b| self.inner.order.cmp(&b.0, &a.0));
        let mut out = String::new();
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let neg = scalar_is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(
                    |(i, &a)| {
                        if a == 1 {
                            self.inner.vars[i].clone()
                        } else {
                            format!("{}^{}", self.inner.vars[i], a)
                        }
                    },
                )
                .collect();
            if mono.is_empty() {
                out.push_str(&fmt_scalar(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&fmt_scalar(&abs));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    pub fn fmt_ideal_gens(&self, gens: &[Poly]) -> String {
        if gens.is_empty() {
            return "<0>".into();
        }
        let parts: Vec<String> = gens.iter().map(|g| self.fmt_poly(g)).collect();
        format!("<{}>", parts.join(", "))
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}", self.inner.field, self.inner.vars.join(","), self.inner.kind.name())?;
        if let Some(g) = &self.inner.grading {
            let gs: Vec<String> = g.iter().map(|d| d.to_string()).collect();
            write!(f, " graded [{}]", gs.join(","))?;
        }
        if !self.inner.quotient.is_empty() {
            write!(f, " / {}", self.fmt_ideal_gens(&self.inner.quotient))?;
        }
        Ok(())
    }
}

pub(crate) fn poly_to_mvec(p: &Poly, comp: u32, ord: &ModOrder) -> MVec {
    let mut v: MVec = p.terms().iter().map(|(e, c)| Term { exps: e.clone(), comp, coeff: c.clone() }).collect();
    ord.sort(&mut v);
    v
}

/// Collapses the terms of one component into a polynomial.
pub(crate) fn mvec_to_poly(field: &BaseField, v: &[Term]) -> Poly {
    Poly::from_terms(field, v.iter().map(|t| (t.exps.clone(), t.coeff.clone())))
}

struct PolyParser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, col: self.pos + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let f = self.ring.field().clone();
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg(&f)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&f, &self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&f, &self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = acc.mul(self.ring.field(), &rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(self.ring.field(), self.ring.nvars(), k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.ring.nvars();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut val = Scalar::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    val /= Scalar::from_integer(den);
                }
                let c = self.ring.field().from_rational(&val)?;
                Ok(Poly::constant(n, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.var_index(name) {
                    Some(i) => {
                        let mut e = Exps::from_elem(0, n);
                        e[i] = 1;
                        Ok(Poly::monomial(e, self.ring.field().one()))
                    }
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable `{name}`")))
                    }
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        let r = PolyRing::rational(&["x", "y", "z"]);
        let p = r.parse("3*x^2*y - 1/2*z + 7").unwrap();
        let s = r.fmt_poly(&p);
        assert_eq!(s, "3*x^2*y - 1/2*z + 7");
        assert_eq!(r.parse(&s).unwrap(), p);
        assert_eq!(r.parse("(x+y)^2 - x^2 - 2*x*y").unwrap(), r.parse("y^2").unwrap());
    }

    #[test]
    fn unknown_variable_is_a_parse_error() {
        let r = PolyRing::rational(&["x"]);
        assert!(matches!(r.parse("x + w"), Err(Error::Parse { col: 5, .. })));
    }

    #[test]
    fn quotient_reduces_products() {
        let r = PolyRing::rational(&["x", "y"]);
        let q = r.quotient(&[r.parse("x^2").unwrap()]).unwrap();
        let x = q.var(0);
        assert!(q.mul(&x, &x).is_zero());
        assert!(r.quotient(&[r.one()]).is_err());
    }

    #[test]
    fn prime_field_parsing_reduces_coefficients() {
        let r = PolyRing::new(BaseField::prime(5).unwrap(), vec!["x".into()], OrderKind::Lex, None).unwrap();
        assert_eq!(r.fmt_poly(&r.parse("7*x - 1/2").unwrap()), "2*x + 2");
        assert!(r.parse("1/5").is_err());
    }
}
