#![no_main]

use bassline_cli::session::parse_session;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_session(text) {
        let again = parse_session(&s.to_source()).expect("normalized source reparses");
        assert_eq!(s.to_source(), again.to_source());
    }
});
