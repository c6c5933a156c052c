#![no_main]

use bassline_cli::report::{parse_report, Format};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_report(text) {
        let again = parse_report(&r.emit(Format::Structured)).expect("emitted report reparses");
        assert_eq!(r, again);
    }
});
