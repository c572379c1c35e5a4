//! Turns a verified algorithm into a straight-line program and replays it.

use chudnovsky::builder::{assemble_tensor, build, buildable_shape};
use chudnovsky::elliptic::Curve;
use chudnovsky::gf::Fq;
use chudnovsky::tensor::{emit_slp, SlpProgram};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> chudnovsky::Result<()> {
    let curve = Curve::parse(&Fq::prime(2)?, "y^2 + y + x^3 = 0")?;
    let r = buildable_shape(&curve, 7, None)?;
    let t = assemble_tensor(&build(&curve, 7, &r.shape.trimmed(), 5)?)?;
    let prog = emit_slp(&t)?;
    let text = prog.to_text();
    for line in text.lines().take(12) {
        println!("{line}");
    }
    println!("...");
    println!("{:?}", prog.counts());

    let replay = SlpProgram::parse(&text)?;
    let k = t.field()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..5 {
        let (a, b) = (k.random_elem(&mut rng), k.random_elem(&mut rng));
        let c = replay.run(a.coeffs(), b.coeffs())?;
        println!("{} * {} = {}  (field: {})", k.fmt_elem(&a), k.fmt_elem(&b), k.fmt_elem(&k.elem(&c)?), k.fmt_elem(&k.mul(&a, &b)));
    }
    Ok(())
}
