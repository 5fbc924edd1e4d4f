#![no_main]

use libfuzzer_sys::fuzz_target;
use ruledgeo::Expr;

fuzz_target!(|data: &[u8]| {
    if data.len() < 8 {
        return;
    }
    let (head, rest) = data.split_at(8);
    let x = f64::from_le_bytes(head.try_into().unwrap());
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(e) = Expr::parse(text) else {
        return;
    };
    // the jet's value agrees with plain evaluation
    if let (Ok(v), Ok(j)) = (e.eval(x), e.eval_jet(x)) {
        let w = j.d[0];
        if v.is_finite() && w.is_finite() {
            assert!(
                (v - w).abs() <= 1e-12 * v.abs().max(1e-300),
                "{text} at {x}: {v} vs {w}"
            );
        } else {
            assert!(
                !v.is_finite() && !w.is_finite() || v.is_nan() || w.is_nan(),
                "{text} at {x}: {v} vs {w}"
            );
        }
    }
});
