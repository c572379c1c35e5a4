//! Places of each degree: zeta-function counts against orbit enumeration.

use chudnovsky::elliptic::{zeta_counts, Curve};
use chudnovsky::function_field::enumerate_places;
use chudnovsky::gf::Fq;

fn main() -> chudnovsky::Result<()> {
    let cases = [(2, "y^2 + y + x^3 = 0", 8), (3, "y^2 + 2x^3 + 2x^2 + 1 = 0", 5)];
    for (q, eq, dmax) in cases {
        let curve = Curve::parse(&Fq::standard(q)?, eq)?;
        let z = zeta_counts(&curve, dmax)?;
        println!("{} over F_{q} (trace {})", curve.equation(), z.trace);
        for d in 1..=dmax {
            let enumerated = enumerate_places(&curve, d)?.len();
            println!("  d = {d}: N_d = {:>4}  B_d = {:>3}  enumerated {enumerated}", z.n[d - 1], z.b[d - 1]);
        }
    }

    let curve = Curve::parse(&Fq::prime(3)?, "y^2 = x^3 + x^2 + 2")?;
    println!("\nplaces of degree 2 on {}:", curve.equation());
    for p in enumerate_places(&curve, 2)? {
        println!("  {}", p.display());
    }
    Ok(())
}
