#![no_main]

use libfuzzer_sys::fuzz_target;
use powerop::isogeny::{is_power_section, Section};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(s) = Section::from_json(text) else { return };
    let back = Section::from_json(&s.to_json().unwrap()).unwrap();
    assert_eq!(back, s);
    if s.len() < 64 {
        let _ = is_power_section(&s);
    }
});
