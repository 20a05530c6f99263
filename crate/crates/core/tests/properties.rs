use annwb::cli::parse_session;
use annwb::complexkernel::{complex_depth_at_prime, BddComplex};
use annwb::modkernel::FgModule;
use annwb::ringkernel::{Ideal, Poly, PolyRing, PrimeIdeal};
use annwb::spfilt::{f_map, phi_map, roundtrip_verify, t_function_check, weak_cousin_check, FinPoset, TCheckMode};
use proptest::prelude::*;

fn ring() -> PolyRing {
    PolyRing::rational_graded(&["x", "y"])
}

/// Polynomials with up to three terms, small coefficients and degree at most 4.
fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 1..=3).prop_map(|terms| {
        let parts: Vec<String> =
            terms.into_iter().filter(|t| t.0 != 0).map(|(c, a, b)| format!("({c})*x^{a}*y^{b}")).collect();
        if parts.is_empty() {
            "x".to_string()
        } else {
            parts.join(" + ")
        }
    })
}

fn poly(r: &PolyRing, s: &str) -> Poly {
    r.parse(s).unwrap()
}

fn ideal(r: &PolyRing, gens: &[String]) -> Ideal {
    Ideal::new(r, gens.iter().map(|g| poly(r, g)).collect())
}

fn gens() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(poly_text(), 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generators_lie_in_their_ideal(g in gens()) {
        let r = ring();
        let a = ideal(&r, &g);
        for f in a.gens() {
            prop_assert!(a.contains_poly(f).unwrap());
            prop_assert!(a.normal_form(f).unwrap().is_zero());
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_congruent(g in gens(), f in poly_text()) {
        let r = ring();
        let a = ideal(&r, &g);
        let f = poly(&r, &f);
        let nf = a.normal_form(&f).unwrap();
        prop_assert_eq!(a.normal_form(&nf).unwrap(), nf.clone());
        prop_assert!(a.contains_poly(&r.sub(&f, &nf)).unwrap());
    }

    #[test]
    fn lattice_operations(g in gens(), h in gens()) {
        let r = ring();
        let a = ideal(&r, &g);
        let b = ideal(&r, &h);
        let s = a.sum(&b).unwrap();
        let p = a.product(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        prop_assert!(s.contains(&a).unwrap() && s.contains(&b).unwrap());
        prop_assert!(a.contains(&i).unwrap() && b.contains(&i).unwrap());
        prop_assert!(i.contains(&p).unwrap());
        prop_assert!(a.radical_contains(&p).unwrap());
    }

    #[test]
    fn colon_times_divisor_lands_inside(g in gens(), h in gens()) {
        let r = ring();
        let a = ideal(&r, &g);
        let b = ideal(&r, &h);
        let q = a.quotient(&b).unwrap();
        prop_assert!(q.contains(&a).unwrap());
        prop_assert!(a.contains(&q.product(&b).unwrap()).unwrap());
    }

    #[test]
    fn powers_share_the_radical(g in gens(), k in 1u32..=3) {
        let r = ring();
        let a = ideal(&r, &g);
        let ak = a.power(k);
        prop_assert!(a.contains(&ak).unwrap());
        prop_assert!(ak.radical_contains(&a).unwrap());
    }

    #[test]
    fn ideal_sessions_roundtrip(g in gens()) {
        let text = format!("annwb v1\nring R = QQ[x,y] grevlex graded\nideal a = <{}>\ncmd gb a\n", g.join(", "));
        let s = parse_session(&text).unwrap();
        let t = parse_session(&s.pretty()).unwrap();
        prop_assert_eq!(&s, &t);
        prop_assert_eq!(s.pretty(), t.pretty());
    }
}

/// Random orders on up to four elements, given as `i < j` pairs with `i < j`.
fn poset() -> impl Strategy<Value = FinPoset> {
    (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * (n - 1) / 2))).prop_map(
        |(n, bits)| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        pairs.push((i, j));
                    }
                    k += 1;
                }
            }
            FinPoset::new((0..n).map(|i| format!("e{i}")).collect(), &pairs).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn filtrations_and_functions_correspond(p in poset(), lo in -1i64..=1, w in 0i64..=2) {
        let rep = roundtrip_verify(&p, lo, lo + w).unwrap();
        prop_assert!(rep.ok(), "{:?}", rep);
    }

    #[test]
    fn cousin_iff_t_function(p in poset(), seed in any::<u64>()) {
        let phis = annwb::spfilt::enumerate_filtrations(&p, 0, 1).unwrap();
        let phi = &phis[(seed % phis.len() as u64) as usize];
        let f = f_map(phi);
        prop_assert_eq!(weak_cousin_check(phi).is_none(), t_function_check(&f, TCheckMode::Full).is_none());
        prop_assert_eq!(
            t_function_check(&f, TCheckMode::Full).is_none(),
            t_function_check(&f, TCheckMode::Saturated).is_none()
        );
        prop_assert_eq!(&phi_map(&f, 0, 1).unwrap(), phi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn depth_shifts_by_the_shift(which in 0usize..4, n in -3i64..=3, pi in 0usize..3) {
        let r = ring();
        let modules = ["<0>", "<x>", "<x*y>", "<x, y>"];
        let m = FgModule::cyclic(&Ideal::parse(&r, modules[which]).unwrap());
        let p = [
            PrimeIdeal::variables(&r, &[0, 1]).unwrap(),
            PrimeIdeal::variables(&r, &[0]).unwrap(),
            PrimeIdeal::variables(&r, &[1]).unwrap(),
        ][pi]
            .clone();
        let x = BddComplex::from_module(&m, 0);
        let d = complex_depth_at_prime(&x, &p).unwrap();
        prop_assert_eq!(complex_depth_at_prime(&x.shift(n), &p).unwrap(), d.offset(-n));
    }
}
