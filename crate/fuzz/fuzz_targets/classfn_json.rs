#![no_main]

use libfuzzer_sys::fuzz_target;
use powerop::classfn::ClassFunction;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(f) = ClassFunction::from_json(text, 2000) else { return };
    let back = ClassFunction::from_json(&f.to_json().unwrap(), 2000).unwrap();
    assert_eq!(back.entries(), f.entries());
});
