use super::*;
use crate::modkernel::{FgModule, Matrix};
use crate::ringkernel::{Ideal, PolyRing, PrimeIdeal};
use crate::xint::XInt;

fn mult(r: &PolyRing, f: &str) -> BddComplex {
    BddComplex::free(r, -1, &[1, 1], vec![Matrix::parse(r, &format!("[[{f}]]")).unwrap()], None).unwrap()
}

#[test]
fn null_homotopy_examples() {
    let r = PolyRing::rational(&["x"]);
    let x = r.var(0);
    let h = null_homotopy_mult(&mult(&r, "x"), &x).unwrap().expect("x is null-homotopic");
    assert_eq!(h.at(&mult(&r, "x"), 0).fmt(&r), "[[1]]");
    assert!(null_homotopy_mult(&mult(&r, "x^2"), &x).unwrap().is_none());
    let z = null_homotopy_mult(&mult(&r, "x^2"), &r.zero()).unwrap().unwrap();
    assert!(z.maps.iter().all(|m| m.is_zero()));
}

#[test]
fn homotopy_on_presented_term() {
    let r = PolyRing::rational(&["x", "y"]);
    let m = FgModule::cyclic(&Ideal::parse(&r, "<x*y>").unwrap());
    let x = BddComplex::from_module(&m, 0);
    assert!(null_homotopy_mult(&x, &r.parse("x*y").unwrap()).unwrap().is_some());
    assert!(null_homotopy_mult(&x, &r.parse("x").unwrap()).unwrap().is_none());
}

#[test]
fn derived_annihilator_examples() {
    let r = PolyRing::rational(&["x"]);
    let d = derived_annihilator_ideal(&mult(&r, "x^2")).unwrap();
    assert!(d.ideal.equals(&Ideal::parse(&r, "<x^2>").unwrap()).unwrap());
    assert_eq!(d.power, 1);
}

/// Cohomology `k` in degrees -1 and 0 glued by the nonzero class in `Ext^2(k, k)`.
fn glued(r: &PolyRing) -> BddComplex {
    let d3 = Matrix::parse(r, "[[y], [-x]]").unwrap();
    let d2 = Matrix::parse(r, "[[x^2, x*y], [x*y, y^2]]").unwrap();
    let d1 = Matrix::parse(r, "[[-y, x]]").unwrap();
    BddComplex::free(r, -3, &[1, 2, 2, 1], vec![d3, d2, d1], None).unwrap()
}

#[test]
fn derived_annihilator_needs_products() {
    let r = PolyRing::rational(&["x", "y"]);
    let x = glued(&r);
    assert_eq!(x.nonzero_degrees().unwrap(), vec![-1, 0]);
    let d = derived_annihilator_ideal(&x).unwrap();
    assert_eq!(d.power, 2);
    assert!(d.ideal.equals(&Ideal::parse(&r, "<x, y>").unwrap().power(2)).unwrap());
}

#[test]
fn koszul_shapes_and_cohomology() {
    let r = PolyRing::rational(&["x", "y"]);
    let k = koszul(&r, &[r.var(0), r.var(1)]).unwrap();
    assert_eq!((k.rank(-2), k.rank(-1), k.rank(0)), (1, 2, 1));
    assert_eq!(k.nonzero_degrees().unwrap(), vec![0]);
    let k0 = koszul(&r, &[r.zero()]).unwrap();
    assert_eq!(k0.nonzero_degrees().unwrap(), vec![-1, 0]);
    let one = BddComplex::free(&r, 0, &[1], vec![], None).unwrap();
    let t = tensor_koszul(&one, &[r.var(0), r.var(1)]).unwrap();
    assert_eq!(t.nonzero_degrees().unwrap(), vec![0]);
    let h = t.cohomology_module(0).unwrap();
    assert!(h.annihilator().unwrap().equals(&Ideal::parse(&r, "<x, y>").unwrap()).unwrap());
}

#[test]
fn koszul_step_maps_are_chain_maps() {
    let r = PolyRing::rational(&["x", "y"]);
    let x = mult(&r, "x");
    let st = tensor_koszul_step(&x, &r.var(1)).unwrap();
    let t = &st.complex;
    for i in x.lo()..=x.hi() {
        let a = st.inclusion.at(i).unwrap();
        let lhs = t.diff(i).mul(&r, a);
        let rhs =
            st.inclusion.at(i + 1).cloned().unwrap_or(Matrix::zero(t.rank(i + 1), x.rank(i + 1))).mul(&r, &x.diff(i));
        assert_eq!(lhs, rhs);
    }
    let sh = x.shift(1);
    for i in t.lo()..t.hi() {
        let p0 = st.projection.at(i).unwrap();
        let p1 = st.projection.at(i + 1).unwrap();
        assert_eq!(p1.mul(&r, &t.diff(i)), sh.diff(i).mul(&r, p0));
    }
}

#[test]
fn shift_and_bounds() {
    let r = PolyRing::rational(&["x"]);
    let x = mult(&r, "x");
    assert_eq!(cohomology_and_bounds(&x).unwrap(), (XInt::Fin(0), XInt::Fin(0)));
    let s = x.shift(3);
    assert_eq!(s.lo(), -4);
    assert_eq!(s.sup_inf().unwrap(), (XInt::Fin(-3), XInt::Fin(-3)));
    assert_eq!(s.diff(-4).fmt(&r), "[[-x]]");
    assert_eq!(cohomology_and_bounds(&BddComplex::zero(&r)).unwrap(), (XInt::NegInf, XInt::PosInf));
}

#[test]
fn truncation_series_of_glued_complex() {
    let r = PolyRing::rational(&["x", "y"]);
    let x = glued(&r);
    let ser = truncation_series(&x).unwrap();
    assert_eq!(ser.degrees(), vec![0, -1]);
    let last = &ser.stages[1].complex;
    assert_eq!(last.nonzero_degrees().unwrap(), vec![-1]);
    assert!(truncation_series(&BddComplex::zero(&r)).is_err());
}

#[test]
fn depth_examples() {
    let r = PolyRing::rational(&["x", "y"]);
    let m = PrimeIdeal::variables(&r, &[0, 1]).unwrap();
    let one = BddComplex::free(&r, 0, &[1], vec![], None).unwrap();
    assert_eq!(complex_depth_at_prime(&one, &m).unwrap(), XInt::Fin(2));
    assert_eq!(complex_depth_at_prime(&one.shift(1), &m).unwrap(), XInt::Fin(1));
    let rx = mult(&r, "x");
    assert_eq!(complex_depth_at_prime(&rx, &m).unwrap(), XInt::Fin(1));
    let py = PrimeIdeal::variables(&r, &[1]).unwrap();
    assert_eq!(complex_depth_at_prime(&rx, &py).unwrap(), XInt::PosInf);
    let g = glued(&r);
    assert_eq!(complex_depth_at_prime(&g, &m).unwrap(), XInt::Fin(-1));
    let b = Ideal::parse(&r, "<x, y>").unwrap();
    assert_eq!(hyper_ext_inf(&b, &one).unwrap(), XInt::Fin(2));
}
