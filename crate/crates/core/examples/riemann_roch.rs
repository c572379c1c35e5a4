//! Riemann-Roch spaces, valuations and local expansions.

use chudnovsky::elliptic::{sigma, Curve};
use chudnovsky::function_field::{local_expansion, random_place, riemann_roch_basis, valuation, Divisor, Place};
use chudnovsky::gf::Fq;

fn main() -> chudnovsky::Result<()> {
    let curve = Curve::parse(&Fq::prime(3)?, "y^2 = x^3 + x^2 + 2")?;
    let p = random_place(&curve, 3, 7)?;
    let q = random_place(&curve, 1, 1)?;
    let d = Divisor::from_place(p.clone(), 2).add(&Divisor::from_place(Place::Infinity, 1));
    println!("D = {d}, deg D = {}", d.degree());

    let basis = riemann_roch_basis(&curve, &d, None)?;
    for f in &basis {
        println!("  {:<60} v_P = {:>2}, v_inf = {:>2}", f.display(&curve), valuation(&curve, f, &p)?, valuation(&curve, f, &Place::Infinity)?);
    }

    let f = &basis[2];
    let jet = local_expansion(&curve, f, &q, 4)?;
    let k = q.residue_field(&curve);
    let coeffs: Vec<String> = jet.coeffs.iter().map(|c| k.fmt_elem(c)).collect();
    println!("expansion of {} at {}: [{}]", f.display(&curve), q.display(), coeffs.join(", "));

    let sum = sigma(&curve, &d)?;
    println!("sigma(D) = {}", curve.fmt_point(&chudnovsky::gf::ExtField::base_field(curve.fq()), &sum));
    Ok(())
}
