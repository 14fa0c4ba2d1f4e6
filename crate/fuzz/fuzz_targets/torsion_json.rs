#![no_main]

use libfuzzer_sys::fuzz_target;
use powerop::padic::{canonicalize, elem_order, Context, TorsionVector};

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<TorsionVector>(data) else { return };
    let n = v.coords.len();
    if n == 0 || n > 3 {
        return;
    }
    let ctx = Context::new(3, n, 3).unwrap();
    if v.validate(&ctx).is_err() {
        return;
    }
    let h = canonicalize(&ctx, &[v.clone()]).unwrap();
    assert!(h.contains(&v));
    assert_eq!(h.order(), elem_order(&ctx, &v));
});
