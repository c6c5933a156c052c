use bassline_cli::report::{parse_report, Format, Report, Value};
use proptest::prelude::*;

fn sample() -> Report {
    let mut r = Report::new();
    r.push("command", "fit --invariant betti");
    r.push("values.1", 2usize);
    r.push("values.2", Value::Str("infinite".into()));
    r.push("values.3", Value::Str("no-vanishing-in-window:4".into()));
    r.push("fit.coefficients", vec!["1/1", "1/1"]);
    r.push("holds", true);
    r.push("resolution.n1.d2", Value::List(vec![vec!["x", "-z"].into(), vec!["-w", "y"].into()]));
    r.push("note", "quote \" backslash \\ newline \n tab \t bell \u{7}");
    r
}

#[test]
fn structured_keys() {
    let text = sample().emit(Format::Structured);
    assert!(text.contains("values.1 = 2\n"));
    assert!(text.contains("fit.coefficients = [\"1/1\", \"1/1\"]\n"));
    assert!(text.contains("values.2 = \"infinite\"\n"));
    assert!(text.contains("values.3 = \"no-vanishing-in-window:4\"\n"));
}

#[test]
fn structured_round_trip() {
    let r = sample();
    assert_eq!(parse_report(&r.emit(Format::Structured)).unwrap(), r);
}

#[test]
fn structured_output_is_toml() {
    let text = sample().emit(Format::Structured);
    let t: toml::Table = toml::from_str(&text).unwrap();
    assert_eq!(t["values"]["1"].as_integer(), Some(2));
    assert_eq!(t["fit"]["coefficients"][0].as_str(), Some("1/1"));
    assert_eq!(t["note"].as_str(), Some("quote \" backslash \\ newline \n tab \t bell \u{7}"));
}

#[test]
fn table_is_aligned() {
    let text = sample().emit(Format::Table);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("values.")).collect();
    let col = lines[0].find('2').unwrap();
    assert_eq!(lines[1].find("infinite"), Some(col));
    assert!(text.contains("    [  x  -z ]\n    [ -w   y ]\n"));
}

#[test]
fn parse_errors() {
    for bad in ["x", "a b = 1", "a = ", "a = [1, 2", "a = \"open", "a = 1 2", "a = 1\na = 2", "a = 1\na.b = 2", "a..b = 1"] {
        assert!(parse_report(bad).is_err(), "{bad:?}");
    }
    assert_eq!(parse_report("# c\n\nk = -3 # trailing\n").unwrap().get("k"), Some(&Value::Int(-3)));
}

#[test]
fn mismatches() {
    let r = sample();
    let want = parse_report("values.1 = 2\nvalues.2 = 0\nmissing = 1\n").unwrap();
    let m = r.mismatches(&want);
    assert_eq!(m.len(), 2);
    assert!(m[0].starts_with("values.2"));
    assert!(m[1].contains("missing"));
}

fn value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        any::<i64>().prop_map(Value::Int),
        any::<bool>().prop_map(Value::Bool),
        any::<String>().prop_map(Value::Str),
    ];
    leaf.prop_recursive(3, 16, 4, |inner| proptest::collection::vec(inner, 0..4).prop_map(Value::List))
}

proptest! {
    #[test]
    fn any_report_round_trips(vals in proptest::collection::vec(value(), 0..6)) {
        let mut r = Report::new();
        for (k, v) in vals.into_iter().enumerate() {
            r.push(format!("k{k}.v"), v);
        }
        prop_assert_eq!(parse_report(&r.emit(Format::Structured)).unwrap(), r);
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,60}") {
        let _ = parse_report(&text);
    }
}
