//! Builds and verifies the rank-234 symmetric algorithm for F_{3^57}.

use std::time::Instant;

use chudnovsky::builder::{assemble_tensor, build, optimize_bound};
use chudnovsky::elliptic::Curve;
use chudnovsky::gf::Fq;

fn main() -> chudnovsky::Result<()> {
    let curve = Curve::parse(&Fq::prime(3)?, "y^2 + 2x^3 + 2x^2 + 1 = 0")?;
    let report = optimize_bound(57, &curve, 5)?;
    println!("{}: bound {} = {}", curve.equation(), report.bound, report.breakdown());

    let t0 = Instant::now();
    let plan = build(&curve, 57, &report.shape.trimmed(), 1)?;
    println!("plan: deg G = {}, attempt {}, {:.2?}", plan.deg_g(), plan.attempt, t0.elapsed());
    let tensor = assemble_tensor(&plan)?;
    println!("tensor: rank {}, {:.2?}", tensor.rank, t0.elapsed());
    let v = tensor.verify()?;
    println!("verify: pass = {}, {} pairs, {:.2?}", v.pass, v.pairs_checked, t0.elapsed());
    Ok(())
}
