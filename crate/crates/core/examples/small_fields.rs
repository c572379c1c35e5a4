//! Builds and verifies algorithms for several small extensions.

use chudnovsky::builder::{assemble_tensor, build, buildable_shape};
use chudnovsky::elliptic::catalog;

fn main() -> chudnovsky::Result<()> {
    for (q, n) in [(2, 7), (2, 9), (3, 4), (3, 5), (4, 3), (5, 3), (7, 4), (9, 3)] {
        let mut best = None;
        for e in catalog(q)? {
            if let Ok(r) = buildable_shape(&e.curve, n, None) {
                if best.as_ref().is_none_or(|(_, b): &(_, chudnovsky::builder::BoundReport)| r.bound < b.bound) {
                    best = Some((e.curve, r));
                }
            }
        }
        let (curve, r) = best.expect("some catalog curve is usable");
        let plan = build(&curve, n, &r.shape.trimmed(), 1)?;
        let t = assemble_tensor(&plan)?;
        let v = t.verify()?;
        println!("F_{q}^{n}: {:<34} rank {:>3} (2n - 1 = {:>2})  verified {}", curve.equation(), t.rank, 2 * n - 1, v.pass);
    }
    Ok(())
}
