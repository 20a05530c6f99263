use super::*;
use crate::ringkernel::{PolyRing, PrimeIdeal};
use crate::xint::XInt;

fn chain2() -> FinPoset {
    FinPoset::parse("{ p < q; }").unwrap()
}

fn set(p: &FinPoset, s: &str) -> ElemSet {
    p.parse_set(s).unwrap()
}

#[test]
fn f_and_phi_on_a_chain() {
    let p = chain2();
    let phi = SpFiltration::from_listed(&p, 0, 1, &[(0, set(&p, "{p,q}")), (1, set(&p, "{q}")), (2, 0)]).unwrap();
    let f = f_map(&phi);
    assert_eq!(f.values(), &[XInt::Fin(1), XInt::Fin(2)]);
    assert_eq!(phi_map(&f, 0, 1).unwrap(), phi);
    let all = SpFiltration::from_listed(&p, 0, 1, &[(0, p.full())]).unwrap();
    assert_eq!(f_map(&all).values(), &[XInt::PosInf, XInt::PosInf]);
    let none = SpFiltration::from_listed(&p, 0, 1, &[(0, 0)]).unwrap();
    assert_eq!(f_map(&none).values(), &[XInt::NegInf, XInt::NegInf]);
    assert_eq!(phi_map(&f_map(&all), 0, 1).unwrap(), all);
    let wide = TFunction::new(&p, vec![XInt::Fin(1), XInt::Fin(5)]).unwrap();
    assert!(phi_map(&wide, 0, 1).is_err());
}

#[test]
fn weak_cousin_and_t_functions() {
    let p = chain2();
    let bad = SpFiltration::from_listed(&p, 1, 1, &[(1, set(&p, "{q}"))]).unwrap();
    let v = weak_cousin_check(&bad).unwrap();
    assert_eq!((v.p, v.q), (0, 1));
    let all = SpFiltration::from_listed(&p, 0, 1, &[(0, p.full())]).unwrap();
    assert!(weak_cousin_check(&all).is_none());
    let jump = TFunction::new(&p, vec![XInt::Fin(0), XInt::Fin(2)]).unwrap();
    assert_eq!(t_function_check(&jump, TCheckMode::Full), Some((0, 1)));
    assert_eq!(t_function_check(&jump, TCheckMode::Saturated), Some((0, 1)));
    let c = TFunction::new(&p, vec![XInt::Fin(3), XInt::Fin(3)]).unwrap();
    assert!(t_function_check(&c, TCheckMode::Full).is_none());
    let diamond = FinPoset::parse("{ a < b; a < c; b < d; c < d; }").unwrap();
    let h = TFunction::height_function(&diamond).unwrap();
    assert!(t_function_check(&h, TCheckMode::Full).is_none());
    assert!(weak_cousin_check(&phi_map(&h, 0, 2).unwrap()).is_none());
}

#[test]
fn ring_backed_poset() {
    let r = PolyRing::rational(&["x", "y", "z"]);
    let primes = vec![
        PrimeIdeal::variables(&r, &[]).unwrap(),
        PrimeIdeal::variables(&r, &[0]).unwrap(),
        PrimeIdeal::variables(&r, &[0, 1, 2]).unwrap(),
    ];
    let p = FinPoset::from_primes(vec!["o".into(), "px".into(), "m".into()], primes).unwrap();
    assert_eq!(p.covers(), &[(0, 1)]);
    assert_eq!(p.height(1, 2), Some(2));
    let h = TFunction::height_function(&p).unwrap();
    assert_eq!(h.values(), &[XInt::Fin(0), XInt::Fin(1), XInt::Fin(3)]);
    assert!(t_function_check(&h, TCheckMode::Full).is_none());
    assert!(t_function_check(&h, TCheckMode::Saturated).is_none());
}

#[test]
fn enumeration_counts() {
    let point = FinPoset::parse("{ p; }").unwrap();
    assert_eq!(enumerate_filtrations(&point, 0, 0).unwrap().len(), 4);
    assert_eq!(enumerate_order_preserving(&point, 0, 0).unwrap().len(), 4);
    let anti = FinPoset::parse("{ p; q; }").unwrap();
    assert_eq!(enumerate_filtrations(&anti, 0, 0).unwrap().len(), 16);
    assert_eq!(enumerate_filtrations(&anti, 0, 2).unwrap().len(), 36);
    let empty = FinPoset::parse("{ }").unwrap();
    assert_eq!(enumerate_filtrations(&empty, 0, 2).unwrap().len(), 1);
    let big = FinPoset::new((0..11).map(|i| format!("e{i}")).collect(), &[]).unwrap();
    assert!(enumerate_filtrations(&big, 0, 0).is_err());
    assert!(enumerate_filtrations(&point, 0, 5).is_err());
}

#[test]
fn roundtrips() {
    for body in ["{ p < q < r; }", "{ a < b; a < c; b < d; c < d; }", "{ }", "{ a < c; b < c; b < d; e; }"] {
        let p = FinPoset::parse(body).unwrap();
        let rep = roundtrip_verify(&p, 0, 2).unwrap();
        assert!(rep.ok(), "{body}: {rep:?}");
        assert_eq!(rep.filtrations, rep.functions);
    }
    let rep = roundtrip_verify(&FinPoset::parse("{ p; }").unwrap(), 0, 0).unwrap();
    assert_eq!(rep.report_line(), "ROUNDTRIP ok filtrations=4");
}

#[test]
fn display_reparses() {
    let p = FinPoset::parse("{ a < b < c; d; }").unwrap();
    assert_eq!(p.display_body(), "{ a < b; b < c; d; }");
    assert_eq!(FinPoset::parse(&p.display_body()).unwrap(), p);
}
