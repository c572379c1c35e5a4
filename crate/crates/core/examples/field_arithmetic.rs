//! Arithmetic in F_q and F_{q^d}: products, inverses, Frobenius, square roots.

use chudnovsky::gf::{ExtField, Fq, Poly};
use num_bigint::BigUint;

fn main() -> chudnovsky::Result<()> {
    let f9 = Fq::standard(9)?;
    println!("F_9 over F_3 with modulus {:?}", f9.modulus());
    let a = f9.generator();
    println!("generator a = {}, a^8 = {}", f9.fmt_elem(a), f9.fmt_elem(f9.pow(a, 8)));

    let fq = Fq::prime(3)?;
    let k = ExtField::standard(&fq, 5)?;
    println!("F_3^5 = F_3[X]/({})", k.modulus().display(&fq, "X"));
    let x = k.gen();
    let y = k.from_index(100);
    let p = k.mul(&x, &y);
    println!("X * {} = {}", k.fmt_elem(&y), k.fmt_elem(&p));
    println!("inverse of {} is {}", k.fmt_elem(&y), k.fmt_elem(&k.inv(&y)?));
    println!("Frobenius: {} -> {}", k.fmt_elem(&x), k.fmt_elem(&k.frobenius(&x)));
    println!("X^(3^5) == X: {}", k.pow(&x, &BigUint::from(243u32)) == x);

    let s = k.square(&y);
    let r = k.sqrt(&s)?.expect("a square has a root");
    println!("sqrt({}) = {}", k.fmt_elem(&s), k.fmt_elem(&r));
    println!("min poly of X^2: {}", k.min_poly(&k.square(&x)).display(&fq, "T"));

    let h = Poly::random_irreducible(&fq, 7, 42)?;
    println!("a random irreducible of degree 7: {}", h.display(&fq, "X"));
    Ok(())
}
