use bassline_cli::session::{parse_session, parse_session_with, Item, Overrides};
use bassline_core::MonomialOrder;
use proptest::prelude::*;

const EXAMPLE: &str = "ring R = poly(char=32003, vars=[x,y,z,w]) / ideal(x*y - z*w); ideal I = (x); module M = coker([[w]]); prime p = (x,y,z,w)";

#[test]
fn hypersurface_session() {
    let s = parse_session(EXAMPLE).unwrap();
    assert_eq!(s.descriptor.vars, ["x", "y", "z", "w"]);
    assert_eq!(s.descriptor.characteristic, 32003);
    assert_eq!(s.ring.quotient_gb().len(), 1);
    assert_eq!(s.ideal_names(), ["I"]);
    assert_eq!(s.module("M").unwrap().gens(), 1);
    assert_eq!(s.prime("p").unwrap().ideal().gens().len(), 4);
    // x*y is z*w in R
    assert_eq!(s.ring.format(&s.ring.parse("x*y").unwrap()), "z*w");
}

#[test]
fn empty_quotient_is_polynomial_ring() {
    for text in ["ring R = poly(char=7, vars=[a,b])", "ring R = poly(char=7, vars=[a,b]) / ideal()"] {
        let s = parse_session(text).unwrap();
        assert!(s.ring.quotient().is_empty());
        assert!(s.items.is_empty());
    }
}

#[test]
fn statements_across_lines_and_comments() {
    let text = "ring R = poly(char=Q, vars=[x,y], order=lex)   # rationals\n\
                module N = coker([[x, y], # first row\n   [y^2, 0]], degrees=[1,0])\n\
                ideal J = (x^2 - 1/2*y)\n\
                window = 2..5\nsmax = 3\n";
    let s = parse_session(text).unwrap();
    assert_eq!(s.descriptor.characteristic, 0);
    assert_eq!(s.descriptor.order, MonomialOrder::Lex);
    let n = s.module("N").unwrap();
    assert_eq!((n.gens(), n.relations().ncols()), (2, 2));
    assert_eq!(s.window, Some((2, 5)));
    assert_eq!(s.s_max, Some(3));
}

#[test]
fn name_references() {
    let s = parse_session("ring R = poly(char=5, vars=[x,y]); ideal I = (x); module M = cyclic(I); prime p = I").unwrap();
    assert!(matches!(s.items[1].1, Item::Module(_)));
    assert_eq!(s.prime("p").unwrap().ideal(), s.ideal("I").unwrap());
}

#[test]
fn overrides_replace_file_values() {
    let s = parse_session_with(EXAMPLE, Overrides { characteristic: Some(0), order: Some(MonomialOrder::Lex) }).unwrap();
    assert_eq!(s.descriptor.characteristic, 0);
    assert_eq!(s.ring.order(), MonomialOrder::Lex);
}

fn err(text: &str) -> (usize, usize, String) {
    let e = parse_session(text).unwrap_err();
    (e.line, e.column, e.message)
}

#[test]
fn positioned_errors() {
    let (l, c, m) = err("ring R = poly(char=5, vars=[x])\nprime p = (1)");
    assert_eq!((l, c), (2, 11));
    assert!(m.contains("improper"), "{m}");

    let (l, c, m) = err("ring R = poly(char=5, vars=[x])\nideal I = (x + q)");
    assert_eq!((l, c), (2, 12));
    assert!(m.contains("unknown variable") || m.contains("q"), "{m}");

    let (l, c, m) = err("ring R = poly(char=6, vars=[x])");
    assert_eq!((l, c), (1, 20));
    assert!(m.contains("prime"), "{m}");

    let (l, c, m) = err("ring R = poly(char=5, vars=[x])\nmodule M = cyclic(K)");
    assert_eq!((l, c), (2, 19));
    assert!(m.contains("unresolved name"), "{m}");

    let (l, _, m) = err("ring R = poly(char=5, vars=[x,y])\nmodule M = coker([[x, y],\n [x]])");
    assert_eq!(l, 3);
    assert!(m.contains("ragged"), "{m}");

    let (l, c, m) = err("ring R = poly(char=5, vars=[x])\nideal I = (x)\nideal I = (x^2)");
    assert_eq!((l, c), (3, 7));
    assert!(m.contains("duplicate"), "{m}");

    let (_, _, m) = err("ideal I = (x)");
    assert!(m.contains("ring first"), "{m}");
    let (_, _, m) = err("ring R = poly(char=5, vars=[x]) / ideal(x*(x+1)");
    assert!(m.contains("unclosed"), "{m}");
    let (_, _, m) = err("");
    assert!(m.contains("no ring"), "{m}");
}

#[test]
fn print_then_parse_is_identity() {
    let text = "ring R = poly(char=32003, vars=[x,y,z]) / ideal(x^2*y, x^2*z)\n\
                ideal I = (x)\nprime p = (x,y)\nmodule M = free(1)\n\
                module N = coker([[x, y^2], [z, 0]])\nwindow = 1..4";
    let a = parse_session(text).unwrap();
    let b = parse_session(&a.to_source()).unwrap();
    assert_eq!(a.descriptor, b.descriptor);
    assert_eq!(a.to_source(), b.to_source());
    assert_eq!(a.ideal("I"), b.ideal("I"));
    assert_eq!(a.module("N"), b.module("N"));
    assert_eq!(a.module("M"), b.module("M"));
    assert_eq!(a.prime("p"), b.prime("p"));
    assert_eq!(a.window, b.window);
}

proptest! {
    #[test]
    fn never_panics(text in "[ -~\n]{0,80}") {
        let _ = parse_session(&text);
    }

    #[test]
    fn ideals_round_trip(exps in proptest::collection::vec((0u32..3, 0u32..3, -3i64..4), 1..4)) {
        let gens: Vec<String> = exps.iter().map(|(a, b, c)| format!("{c}*x^{a}*y^{b} + y")).collect();
        let text = format!("ring R = poly(char=101, vars=[x,y])\nideal I = ({})", gens.join(", "));
        let a = parse_session(&text).unwrap();
        let b = parse_session(&a.to_source()).unwrap();
        prop_assert_eq!(a.ideal("I"), b.ideal("I"));
    }
}
