//! Bound search: published rows, the best curve for F_{3^57}, and log*.

use chudnovsky::builder::{best_curve, log_star, log_star_factor, optimize_bound};
use chudnovsky::elliptic::Curve;
use chudnovsky::gf::Fq;
use num_bigint::BigUint;

fn main() -> chudnovsky::Result<()> {
    let rows = [
        (2, "y^2 + y + x^3 = 0", 163, 8),
        (2, "y^2 + xy + x^3 + 1 = 0", 233, 8),
        (2, "y^2 + xy + x^3 + 1 = 0", 571, 10),
        (3, "y^2 + 2x^3 + 2x^2 + 1 = 0", 97, 5),
        (3, "y^2 + 2x^3 + x^2 + 1 = 0", 400, 6),
    ];
    for (q, eq, n, dmax) in rows {
        let c = Curve::parse(&Fq::standard(q)?, eq)?;
        let r = optimize_bound(n, &c, dmax)?;
        println!("q = {q}, n = {n:>3}: {:>4}  N = {:?}  U = {:?}", r.bound, r.big_n, r.big_u);
    }

    let (curve, r) = best_curve(3, 57, 5)?;
    println!("\nbest curve for n = 57: {} with {} = {}", curve.equation(), r.bound, r.breakdown());

    for n in [2u32, 4, 16, 65536] {
        let n = BigUint::from(n);
        println!("log*_2({n}) = {}, (2q)^log* = {}", log_star(2, &n), log_star_factor(2, &n));
    }
    Ok(())
}
