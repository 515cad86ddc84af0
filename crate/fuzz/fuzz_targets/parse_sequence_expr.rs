#![no_main]
use libfuzzer_sys::fuzz_target;

use gapforge::sequences::expr::parse_sequence_expr;
use gapforge::Primes;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(expr) = parse_sequence_expr(text) else { return };
    // printing then reparsing gives the same tree
    let printed = expr.to_string();
    let again = parse_sequence_expr(&printed).expect("printed expression reparses");
    assert_eq!(again, expr, "{text:?} printed as {printed:?}");
    if !expr.uses_primes() {
        let primes = Primes::new();
        for n in 1..4 {
            let _ = expr.eval(n, &primes);
        }
    }
});
