use super::*;
use crate::complexkernel::BddComplex;
use crate::modkernel::FgModule;
use crate::ringkernel::{Ideal, PolyRing};
use crate::xint::XInt;

fn v(r: &PolyRing, s: &str) -> SpcSubset {
    SpcSubset::closed(Ideal::parse(r, s).unwrap())
}

fn cyc(r: &PolyRing, s: &str) -> FgModule {
    FgModule::cyclic(&Ideal::parse(r, s).unwrap())
}

#[test]
fn torsion_examples() {
    let r = PolyRing::rational_graded(&["x", "y"]);
    let g = torsion_submodule(&v(&r, "<x>"), &cyc(&r, "<x*y>")).unwrap();
    assert!(g.module.annihilator().unwrap().equals(&Ideal::parse(&r, "<x>").unwrap()).unwrap());
    let all = torsion_submodule(&v(&r, "<x>"), &cyc(&r, "<x^2>")).unwrap();
    assert!(all.module.annihilator().unwrap().equals(&Ideal::parse(&r, "<x^2>").unwrap()).unwrap());
    let none = torsion_submodule(&v(&r, "<x>"), &FgModule::free(&r, 1)).unwrap();
    assert!(none.module.is_zero().unwrap());
}

#[test]
fn vanishing_bounds() {
    let r = PolyRing::rational_graded(&["x", "y"]);
    let m = v(&r, "<x, y>");
    let one = FgModule::free(&r, 1);
    assert_eq!(lc_vanishing_bound_module(&m, &one).unwrap(), XInt::Fin(2));
    assert_eq!(lc_vanishing_bound_module(&v(&r, "<x>"), &cyc(&r, "<x>")).unwrap(), XInt::Fin(0));
    let x = BddComplex::from_module(&one, 0);
    assert_eq!(lc_vanishing_bound(&m, &x).unwrap(), XInt::Fin(2));
    assert_eq!(lc_vanishing_bound(&m, &x.shift(-3)).unwrap(), XInt::Fin(5));
    let q = BddComplex::from_module(&cyc(&r, "<x>"), 0);
    assert_eq!(lc_vanishing_bound(&v(&r, "<x>"), &q).unwrap(), XInt::Fin(0));
    assert_eq!(
        lc_vanishing_bound(&v(&r, "<y>"), &BddComplex::from_module(&cyc(&r, "<y - 1>").ungraded(), 0)).unwrap(),
        XInt::PosInf
    );
}

#[test]
fn cech_top_cohomology_of_plane() {
    let r = PolyRing::rational_graded(&["x", "y"]);
    let x = BddComplex::from_module(&FgModule::free(&r, 1), 0);
    let win = GradedWindow::new(-5, 1);
    let h2 = graded_local_cohomology(&v(&r, "<x, y>"), &x, 2, &win).unwrap();
    for p in &h2 {
        assert!(p.stable, "{}", p.report_line());
        assert_eq!(p.dim as i64, (-p.d - 1).max(0), "{}", p.report_line());
    }
    let h1 = graded_local_cohomology(&v(&r, "<x, y>"), &x, 1, &win).unwrap();
    assert!(h1.iter().all(|p| p.dim == 0 && p.stable));
    assert_eq!(h2[0].report_line(), "LC i=2 d=-5 dim=4 stable=yes");
}

#[test]
fn cech_h0_is_torsion() {
    let r = PolyRing::rational_graded(&["x", "y"]);
    let m = cyc(&r, "<x^2, x*y>");
    let z = v(&r, "<x, y>");
    let g = torsion_submodule(&z, &m).unwrap();
    let h0 = graded_local_cohomology(&z, &BddComplex::from_module(&m, 0), 0, &GradedWindow::new(0, 3)).unwrap();
    for p in h0 {
        assert_eq!(p.dim, g.module.graded_dim(p.d).unwrap());
    }
}

#[test]
fn annihilation_examples() {
    let r = PolyRing::rational_graded(&["x", "y"]);
    let x = BddComplex::from_module(&cyc(&r, "<x>"), 0);
    let z = v(&r, "<x, y>");
    let win = GradedWindow::new(-3, 0);
    let rep = annihilation_test(&Ideal::parse(&r, "<y>").unwrap(), &z, &x, 2, &win).unwrap();
    match rep.verdict {
        AnnihilationVerdict::Fails(w) => {
            assert_eq!((w.i, w.d, w.image_degree), (1, -2, -1));
            assert_eq!(w.class, "1/y^2");
            assert_eq!(w.image, "1/y");
        }
        other => panic!("{other:?}"),
    }
    let ok = annihilation_test(&Ideal::parse(&r, "<x>").unwrap(), &z, &x, 1, &win).unwrap();
    assert_eq!(ok.verdict, AnnihilationVerdict::Holds { certified: true });
    let zero_ann = annihilation_test(&Ideal::parse(&r, "<x>").unwrap(), &z, &x, 2, &win).unwrap();
    assert_eq!(zero_ann.verdict, AnnihilationVerdict::Holds { certified: false });
}
