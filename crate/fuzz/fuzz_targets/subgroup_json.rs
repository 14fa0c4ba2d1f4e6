#![no_main]

use libfuzzer_sys::fuzz_target;
use powerop::padic::{annihilator_basis, FiniteSubgroup};

fuzz_target!(|data: &[u8]| {
    let Ok(h) = serde_json::from_slice::<FiniteSubgroup>(data) else { return };
    if h.ctx().modulus() > 1 << 12 {
        return;
    }
    let text = serde_json::to_string(&h).unwrap();
    let back: FiniteSubgroup = serde_json::from_str(&text).unwrap();
    assert_eq!(back, h);
    assert_eq!(annihilator_basis(&h).det(), h.order() as i128);
});
