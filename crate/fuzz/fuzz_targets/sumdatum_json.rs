#![no_main]

use std::sync::Arc;

use libfuzzer_sys::fuzz_target;
use powerop::classify::{classify, standard_representative, Domain, SumDatum};
use powerop::groups::make_group;

fuzz_target!(|data: &[u8]| {
    let Ok(d) = serde_json::from_slice::<SumDatum>(data) else { return };
    let Some(first) = d.parts.first() else { return };
    let ctx = *first.subgroup.ctx();
    if d.parts.iter().any(|l| l.subgroup.ctx() != &ctx) || ctx.modulus() > 64 {
        return;
    }
    let m = d.total_order() as usize;
    if m == 0 || m > 8 {
        return;
    }
    for g in ["e", "C2", "C3"] {
        let base = Domain::plain(&ctx, Arc::new(make_group(g).unwrap()));
        if let Ok(t) = standard_representative(&base, m, &d) {
            assert_eq!(classify(&base, m, &t).unwrap(), SumDatum::new(d.parts.clone()));
        }
    }
});
