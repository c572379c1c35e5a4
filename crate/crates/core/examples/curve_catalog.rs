//! The named curves, their rational points, group structure and case.

use chudnovsky::elliptic::{catalog, classify, CATALOG_Q};
use chudnovsky::gf::ExtField;

fn main() -> chudnovsky::Result<()> {
    for q in CATALOG_Q {
        for e in catalog(q)? {
            let c = classify(&e.curve)?;
            println!("F_{q}: {:<42} N1 = {:<2} {:<10} case {} (slack {})", e.equation, c.n1, c.group.to_string(), c.case, c.slack);
        }
    }

    let curve = &catalog(3)?[6].curve;
    let f = ExtField::base_field(curve.fq());
    println!("\nrational points of {}:", curve.equation());
    for p in curve.rational_points()? {
        println!("  {}", curve.fmt_point(&f, &p));
    }
    Ok(())
}
