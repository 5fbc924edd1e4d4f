#![no_main]

use libfuzzer_sys::fuzz_target;
use ruledgeo::Expr;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(e) = Expr::parse(text) else {
        return;
    };
    // printed form parses back to the same function
    let back = Expr::parse(&e.to_string()).expect("printed expression parses");
    for x in [-1.5, 0.0, 0.25, 2.0] {
        match (e.eval(x), back.eval(x)) {
            (Ok(a), Ok(b)) => assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())),
            (Err(_), Err(_)) => {}
            (a, b) => panic!("round trip changed evaluation at {x}: {a:?} vs {b:?}"),
        }
    }
});
