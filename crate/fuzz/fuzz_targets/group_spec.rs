#![no_main]

use libfuzzer_sys::fuzz_target;
use powerop::classify::Domain;
use powerop::groups::make_group_with_cap;
use powerop::padic::Context;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = std::str::from_utf8(data) else { return };
    if let Ok(g) = make_group_with_cap(spec, 5000) {
        assert!(g.order() <= 5000);
        assert!(g.elements().iter().all(|x| x.degree() == g.degree()));
    }
    let ctx = Context::new(2, 1, 2).unwrap();
    if let Ok(d) = Domain::parse(&ctx, spec, 500) {
        let _ = d.spec();
    }
});
