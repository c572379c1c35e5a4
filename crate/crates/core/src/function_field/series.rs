//! Truncated power series c_0 + c_1 t + … + c_{n-1} t^{n-1} over an extension field.

use crate::gf::{ExtElem, ExtField, Poly};

pub(crate) type Series = Vec<ExtElem>;

pub(crate) fn constant(f: &ExtField, c: ExtElem, prec: usize) -> Series {
    let mut s = vec![f.zero(); prec];
    if prec > 0 {
        s[0] = c;
    }
    s
}

pub(crate) fn add(f: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Series {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub(crate) fn sub(f: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Series {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub(crate) fn scale_base(f: &ExtField, a: &[ExtElem], c: u8) -> Series {
    a.iter().map(|x| f.scale(x, c)).collect()
}

/// a·b mod t^prec.
pub(crate) fn mul(f: &ExtField, a: &[ExtElem], b: &[ExtElem], prec: usize) -> Series {
    let mut out = vec![f.zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            if !y.is_zero() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
    }
    out
}

/// Multiplies by t^k, keeping `prec` terms.
pub(crate) fn shift_up(f: &ExtField, a: &[ExtElem], k: usize, prec: usize) -> Series {
    (0..prec).map(|i| if i >= k && i - k < a.len() { a[i - k].clone() } else { f.zero() }).collect()
}

/// 1/a mod t^prec; a_0 must be nonzero.
pub(crate) fn inv(f: &ExtField, a: &[ExtElem], prec: usize) -> Series {
    let a0 = f.inv(&a[0]).expect("series unit");
    let mut out: Series = Vec::with_capacity(prec);
    for n in 0..prec {
        let mut s = if n == 0 { f.one() } else { f.zero() };
        for k in 1..=n.min(a.len() - 1) {
            s = f.sub(&s, &f.mul(&a[k], &out[n - k]));
        }
        out.push(f.mul(&s, &a0));
    }
    out
}

pub(crate) fn pow(f: &ExtField, a: &[ExtElem], mut e: usize, prec: usize) -> Series {
    let mut acc = constant(f, f.one(), prec);
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(f, &acc, &base, prec);
        }
        e >>= 1;
        if e > 0 {
            base = mul(f, &base, &base, prec);
        }
    }
    acc
}

/// p(s) for a polynomial p over F_q, by Horner.
pub(crate) fn compose(f: &ExtField, p: &Poly, s: &[ExtElem], prec: usize) -> Series {
    let mut acc = vec![f.zero(); prec];
    for &c in p.coeffs().iter().rev() {
        acc = mul(f, &acc, s, prec);
        if prec > 0 {
            acc[0] = f.add(&acc[0], &f.from_base(c));
        }
    }
    acc
}

/// p(x0 + t): Horner with a linear series costs O(prec) per step.
pub(crate) fn compose_linear(f: &ExtField, p: &Poly, x0: &ExtElem, prec: usize) -> Series {
    let mut acc = vec![f.zero(); prec];
    for &c in p.coeffs().iter().rev() {
        let mut next: Series = acc.iter().map(|v| f.mul(v, x0)).collect();
        for i in 1..prec {
            next[i] = f.add(&next[i], &acc[i - 1]);
        }
        if prec > 0 {
            next[0] = f.add(&next[0], &f.from_base(c));
        }
        acc = next;
    }
    acc
}

pub(crate) fn order(a: &[ExtElem]) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}
