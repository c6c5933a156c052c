#![no_main]

use bassline_core::poly::{format_polynomial, parse_polynomial};
use bassline_core::{Field, MonomialOrder};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let vars: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
    for field in [Field::Prime(32003), Field::Rational] {
        if let Ok(p) = parse_polynomial(text, &vars, field.clone(), MonomialOrder::Grevlex) {
            // printed form parses back to the same polynomial
            let printed = format_polynomial(&p, &vars, &field);
            let again = parse_polynomial(&printed, &vars, field, MonomialOrder::Grevlex).unwrap();
            assert_eq!(p, again);
        }
    }
});
