//! The small bilinear algorithms used at each interpolation place.

use chudnovsky::builder::{inner_algorithm, InnerAlgorithm, InnerKind};
use chudnovsky::gf::Fq;

fn show(name: &str, alg: &InnerAlgorithm) {
    println!("{name}: {} products", alg.products());
    for (j, f) in alg.forms.iter().enumerate() {
        println!("  m{} form {:?}", j + 1, f);
    }
    for r in alg.recon.to_rows() {
        println!("  C = {r:?} . m");
    }
}

fn main() -> chudnovsky::Result<()> {
    let fq = Fq::prime(3)?;
    show("truncated product, 3 terms", &InnerAlgorithm::truncated(&fq, 3)?);
    show("Karatsuba", &InnerAlgorithm::convolution(&fq, 2)?);
    show("product in F_81", &inner_algorithm(&fq, InnerKind::FieldMult(4))?);
    let jet = inner_algorithm(&fq, InnerKind::Jet { d: 2, u: 2 })?;
    println!("2-term jets over F_9: {} products on {} coordinates", jet.products(), jet.k);
    println!("(1 + 2t)(2 + t) mod t^2 over F_3: {:?}", InnerAlgorithm::truncated(&fq, 2)?.apply(&fq, &[1, 2], &[2, 1])?);
    Ok(())
}
