use super::*;
use crate::error::Error;

fn run(text: &str) -> Report {
    run_text(text, &RunOptions::default())
}

#[test]
fn minimal_session() {
    let s = parse_session("annwb v1\nring R = QQ[x] grevlex\nideal a = <x>\ncmd gb a").unwrap();
    assert_eq!(s.decls().count(), 2);
    assert_eq!(s.commands().count(), 1);
    let r = run_session(&s, &RunOptions::default());
    assert_eq!(r.text, "GB a = {x}\n");
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn gb_of_literal_zero() {
    let r = run("annwb v1\nring R = QQ[x,y]\ncmd gb <0>\n");
    assert_eq!(r.text, "GB = {}\n");
}

#[test]
fn parse_errors() {
    let e = parse_session("annwb v2\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
    let e = parse_session("ring R = QQ[x]\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 1, col: 1, .. }));
    let e = parse_session(
        "annwb v1\nring R = QQ[x,y]\ncomplex X = { -1: R^1; 0: R^1; 1: R^1; d(-1) = [[x]]; d(0) = [[y]] }\n",
    )
    .unwrap_err();
    match e {
        Error::Semantic { line: 3, msg } => assert!(msg.contains("d(0) * d(-1)"), "{msg}"),
        other => panic!("{other}"),
    }
    let e = parse_session("annwb v1\nring R = QQ[x]\ncmd gb a\nideal a = <x>\n").unwrap_err();
    assert!(matches!(e, Error::Semantic { line: 3, .. }), "{e}");
    let e = parse_session("annwb v1\nring R = QQ[x]\nideal a = <x>\nideal a = <x>\n").unwrap_err();
    assert!(matches!(e, Error::Semantic { line: 4, .. }));
    let e = parse_session("annwb v1\nring R = QQ[x]\nideal a = <x +>\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    assert_eq!(run("annwb v1\nbogus\n").exit_code(), 2);
}

#[test]
fn depth_report() {
    let r = run("annwb v1\nring R = QQ[x,y] graded\nmodule M = R/<x>\nprime p = <x, y>\ncmd depth M at p\n");
    assert_eq!(r.text, "DEPTH M p = 1\n");
}

#[test]
fn spfilt_roundtrip_report() {
    let r = run("annwb v1\nposet P = { p < q; }\ncmd spfilt roundtrip P 0 2\n");
    assert!(r.text.starts_with("ROUNDTRIP ok filtrations="), "{}", r.text);
    assert_eq!(r.exit_code(), 0);
}

const FALTINGS: &str = "annwb v1
ring R = QQ[x,y] grevlex graded [1,1]
module M = R/<x>
prime m = <x, y>
prime px = <x>
prime zero = <0>
subset Z = V<x, y>
subset Yx = V<x>
pairs L for Z Z = { (m, px); (m, zero) }
set window -3..1
cmd faltings check1 M 1 pairs=L
cmd faltings verify2 M Z Z 1 <1>
";

#[test]
fn faltings_session_passes() {
    let r = run(FALTINGS);
    assert_eq!(r.text, "CHECK1 M 1 = holds\nVERIFY2 M Z Z 1 = holds certified=yes\n");
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn failing_check1_exits_1() {
    let r = run(&format!("{FALTINGS}cmd faltings check1 M 2 pairs=L\n"));
    assert!(r.text.contains("CHECK1 M 2 = fails pair=(<x, y>, <x>) height=1 depth=0"), "{}", r.text);
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn witness_and_search() {
    let r = run(&format!("{FALTINGS}cmd faltings verify2 M Z Z 2 m\ncmd faltings search M Yx Z 2\n"));
    assert!(r.text.contains("VERIFY2 M Z Z 2 m = fails leg=ii i=1 d=-2 g=y class=1/y^2 image=1/y"), "{}", r.text);
    assert!(r.text.contains("SEARCH M Yx Z 2 = found b=<x>"), "{}", r.text);
}

#[test]
fn inconclusive_exits_3() {
    let r = run(&format!("{FALTINGS}cmd faltings search M Z Z 2\n"));
    assert!(r.text.contains("INCONCLUSIVE"), "{}", r.text);
    assert_eq!(r.exit_code(), 3);
    let r = run("annwb v1\nring R = QQ[x,y] graded\nmodule F = R^1\nsubset Z = V<x, y>\ncmd lc Z F 2 --window -4..-1 --tmax 1\n");
    assert!(r.text.contains("INCONCLUSIVE"), "{}", r.text);
    assert_eq!(r.exit_code(), 3);
}

#[test]
fn expect_pins_values() {
    let r = run(
        "annwb v1\nring R = QQ[x,y]\nideal a = <x*y>\nideal b = <x>\ncmd quotient a b expect <y>\ncmd dim a expect 2\n",
    );
    assert_eq!(r.exit_code(), 1, "{}", r.text);
    assert!(r.text.contains("EXPECT DIM a = mismatch expected 2"));
}

#[test]
fn complex_degrees_are_inferred() {
    let s =
        parse_session("annwb v1\nring R = QQ[x,y] graded\ncomplex X = { -1: R^1; 0: R^1; d(-1) = [[x*y]] }\n").unwrap();
    match s.lookup("X") {
        Some(Value::Complex(x)) => {
            assert!(x.is_graded());
            assert_eq!(x.display(), "{ -1: R^1 graded [2]; 0: R^1 graded [0]; d(-1) = [[x*y]] }");
        }
        other => panic!("{other:?}"),
    }
}

const EVERYTHING: &str = "annwb v1
# one of each declaration
ring R = QQ[x,y,z] lex graded [1,1,2] / <x*y>
ideal a = <x, z>
prime p = <x>
prime q = <x, y>
prime r = <x + y, z> asserted
prime s = <x, z>
module M = coker R^2 <- [[x, 0], [y, z]] graded [0, 0]
module N = R/a
module F = R^2
complex X = { -2: R^1 graded [1]; -1: coker R^1 <- [[x]] graded [0]; d(-2) = [[x]] }
complex Y = from N at 1
subset W = V(a)
subset V0 = V<x>
poset P = { a < b < c; d; }
spfilt phi on P = { 0: {a,b,c}; 1: {c}; tails lo=0 hi=1 }
filt psi = { 0: V<x>; 1: V<1> }
pairs L for W W = { (s, p) }
set window -4..0
set tmax 6
set budget 10
set hrange -1..1
ring S = GF(7)[u] grevlex
cmd gb <u^8>
cmd gb a expect {x, z}
cmd tstruct psi psi primes=[p, q] range=-1..1
cmd faltings verify2 X W W 1 a --window -2..0
";

#[test]
fn pretty_roundtrip() {
    let s = parse_session(EVERYTHING).unwrap();
    let text = s.pretty();
    let t = parse_session(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(s, t, "{text}");
    assert_eq!(t.pretty(), text);
}

#[test]
fn deterministic_reports() {
    let a = run(EVERYTHING);
    let b = run(EVERYTHING);
    assert_eq!(a, b);
}
