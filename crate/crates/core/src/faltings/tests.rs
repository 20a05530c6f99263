use super::*;
use crate::modkernel::FgModule;
use crate::ringkernel::PolyRing;

fn setup() -> (PolyRing, BddComplex, SpcSubset, SpcSubset) {
    let r = PolyRing::rational_graded(&["x", "y"]);
    let x = BddComplex::from_module(&FgModule::cyclic(&Ideal::parse(&r, "<x>").unwrap()), 0);
    let m = SpcSubset::closed(Ideal::parse(&r, "<x, y>").unwrap());
    let vx = SpcSubset::closed(Ideal::parse(&r, "<x>").unwrap());
    (r, x, m, vx)
}

fn pairs(r: &PolyRing, y: &SpcSubset, z: &SpcSubset) -> PrimePairList {
    let m = PrimeIdeal::variables(r, &[0, 1]).unwrap();
    let px = PrimeIdeal::variables(r, &[0]).unwrap();
    let zero = PrimeIdeal::variables(r, &[]).unwrap();
    let list: Vec<_> =
        [(m.clone(), px), (m, zero)].into_iter().filter(|(_, q)| !y.contains_prime(q).unwrap()).collect();
    PrimePairList::new(y, z, list).unwrap()
}

#[test]
fn pair_list_validation() {
    let (r, _, m, _) = setup();
    let p = PrimeIdeal::variables(&r, &[0, 1]).unwrap();
    assert!(PrimePairList::new(&m, &m, vec![(p.clone(), p)]).is_err());
}

#[test]
fn condition1_examples() {
    let (r, x, m, _) = setup();
    let pl = pairs(&r, &m, &m);
    assert_eq!(condition1_check(&x, 1, &pl).unwrap(), None);
    let v = condition1_check(&x, 2, &pl).unwrap().unwrap();
    assert_eq!((v.index, v.height, v.depth), (0, 1, XInt::Fin(0)));
    assert_eq!(condition1_check(&x, 5, &PrimePairList::new(&m, &m, vec![]).unwrap()).unwrap(), None);
}

#[test]
fn condition2_examples() {
    let (r, x, m, _) = setup();
    let win = GradedWindow::new(-3, 1);
    let unit = Ideal::unit(&r);
    assert!(condition2_verify(&x, &m, &m, 1, &unit, &win).unwrap().holds());
    match condition2_verify(&x, &m, &m, 2, &Ideal::parse(&r, "<x, y>").unwrap(), &win).unwrap() {
        Condition2Verdict::FailsAnnihilation(w) => assert_eq!(w.i, 1),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        condition2_verify(&x, &m, &m, 2, &Ideal::parse(&r, "<x>").unwrap(), &win).unwrap(),
        Condition2Verdict::FailsContainment(_)
    ));
}

#[test]
fn reduction_examples() {
    let r = PolyRing::rational_graded(&["x", "y"]);
    let x = BddComplex::from_module(&FgModule::cyclic(&Ideal::parse(&r, "<x*y>").unwrap()), 0);
    let vx = SpcSubset::closed(Ideal::parse(&r, "<x>").unwrap());
    let st = reduction_step(&x, &vx).unwrap();
    assert!(st.i.equals(&Ideal::parse(&r, "<x*y>").unwrap()).unwrap());
    assert!(st.j.equals(&Ideal::parse(&r, "<y>").unwrap()).unwrap());
    assert_eq!(st.s, 1);
    assert_eq!(st.line(1), "STEP 1: I=<x*y> J=<y> s=1");
    // no Y-torsion: J = I
    let vy2 = SpcSubset::closed(Ideal::parse(&r, "<x - y>").unwrap());
    let st = reduction_step(&x, &vy2).unwrap();
    assert!(st.j.equals(&st.i).unwrap());
    // supp X inside Y
    let everything = SpcSubset::closed(Ideal::parse(&r, "<x*y>").unwrap());
    assert!(reduction_step(&x, &everything).unwrap().is_trivial());
}

#[test]
fn search_examples() {
    let (r, x, m, vx) = setup();
    let win = GradedWindow::new(-3, 1);
    match annihilator_search(&x, &m, &m, 1, &win, DEFAULT_BUDGET).unwrap().outcome {
        SearchOutcome::Found { b, .. } => assert!(b.is_unit().unwrap()),
        other => panic!("{other:?}"),
    }
    let rep = annihilator_search(&x, &m, &m, 2, &win, DEFAULT_BUDGET).unwrap();
    assert!(matches!(rep.outcome, SearchOutcome::NotFound { .. }), "{rep:?}");
    match annihilator_search(&x, &vx, &m, 2, &win, DEFAULT_BUDGET).unwrap().outcome {
        SearchOutcome::Found { b, .. } => assert!(b.equals(&Ideal::parse(&r, "<x>").unwrap()).unwrap()),
        other => panic!("{other:?}"),
    }
}
