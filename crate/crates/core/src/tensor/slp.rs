use std::fmt;

use serde::Serialize;

use super::decomposition::TensorDecomposition;
use crate::error::{Error, Result};
use crate::gf::Fq;

/// A register: inputs a_i, b_i, temporaries t_k, products m_j.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    A(usize),
    B(usize),
    T(usize),
    M(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr {
    Add(usize, Operand, Operand),
    Sub(usize, Operand, Operand),
    Scale(usize, u8, Operand),
    Zero(usize),
    Mul(usize, Operand, Operand),
    /// c_i = src, or c_i = 0.
    Out(usize, Option<Operand>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub products: usize,
    pub additions: usize,
    pub scalar_mults: usize,
}

/// Branch-free program computing c = a·b in F_q[X]/(h) on power-basis
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlpProgram {
    pub q: u64,
    pub n: usize,
    pub modulus: Vec<u8>,
    pub base_modulus: Option<Vec<u8>>,
    pub instrs: Vec<Instr>,
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::A(i) => write!(f, "a{i}"),
            Operand::B(i) => write!(f, "b{i}"),
            Operand::T(i) => write!(f, "t{i}"),
            Operand::M(i) => write!(f, "m{i}"),
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Add(d, x, y) => write!(f, "t{d} = {x} + {y}"),
            Instr::Sub(d, x, y) => write!(f, "t{d} = {x} - {y}"),
            Instr::Scale(d, c, x) => write!(f, "t{d} = {c} * {x}"),
            Instr::Zero(d) => write!(f, "t{d} = 0"),
            Instr::Mul(d, x, y) => write!(f, "m{d} = {x} * {y}"),
            Instr::Out(i, Some(x)) => write!(f, "c{i} = {x}"),
            Instr::Out(i, None) => write!(f, "c{i} = 0"),
        }
    }
}

fn join(v: &[u8]) -> String {
    v.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}

struct Emitter<'a> {
    fq: &'a Fq,
    instrs: Vec<Instr>,
    temps: usize,
}

impl Emitter<'_> {
    fn temp(&mut self) -> usize {
        self.temps += 1;
        self.temps - 1
    }

    /// Σ c·op, or None when every coefficient is zero.
    fn lincomb(&mut self, terms: impl Iterator<Item = (u8, Operand)>) -> Option<Operand> {
        let minus_one = self.fq.neg(1);
        let mut acc: Option<Operand> = None;
        for (c, op) in terms.filter(|t| t.0 != 0) {
            acc = Some(match acc {
                None if c == 1 => op,
                None => {
                    let t = self.temp();
                    self.instrs.push(Instr::Scale(t, c, op));
                    Operand::T(t)
                }
                Some(x) if c == 1 => {
                    let t = self.temp();
                    self.instrs.push(Instr::Add(t, x, op));
                    Operand::T(t)
                }
                Some(x) if c == minus_one => {
                    let t = self.temp();
                    self.instrs.push(Instr::Sub(t, x, op));
                    Operand::T(t)
                }
                Some(x) => {
                    let s = self.temp();
                    self.instrs.push(Instr::Scale(s, c, op));
                    let t = self.temp();
                    self.instrs.push(Instr::Add(t, x, Operand::T(s)));
                    Operand::T(t)
                }
            });
        }
        acc
    }

    fn operand_or_zero(&mut self, op: Option<Operand>) -> Operand {
        op.unwrap_or_else(|| {
            let t = self.temp();
            self.instrs.push(Instr::Zero(t));
            Operand::T(t)
        })
    }
}

/// Straight-line program for a tensor; the basis change is folded into the
/// input forms.
pub fn emit_slp(t: &TensorDecomposition) -> Result<SlpProgram> {
    let fq = t.base_field()?;
    let forms = t.power_basis_forms()?;
    let mut e = Emitter { fq: &fq, instrs: Vec::new(), temps: 0 };
    for (j, (phi, psi)) in forms.iter().enumerate() {
        let x = e.lincomb(phi.iter().enumerate().map(|(i, &c)| (c, Operand::A(i))));
        let x = e.operand_or_zero(x);
        let y = e.lincomb(psi.iter().enumerate().map(|(i, &c)| (c, Operand::B(i))));
        let y = e.operand_or_zero(y);
        e.instrs.push(Instr::Mul(j, x, y));
    }
    for i in 0..t.n {
        let c = e.lincomb(t.products.iter().enumerate().map(|(j, p)| (p.w[i], Operand::M(j))));
        e.instrs.push(Instr::Out(i, c));
    }
    Ok(SlpProgram { q: t.q, n: t.n, modulus: t.modulus.clone(), base_modulus: t.base_modulus.clone(), instrs: e.instrs })
}

fn parse_operand(s: &str) -> Result<Operand> {
    let bad = || Error::Parse(format!("bad register '{s}'"));
    let (head, idx) = s.split_at(1.min(s.len()));
    let i: usize = idx.parse().map_err(|_| bad())?;
    Ok(match head {
        "a" => Operand::A(i),
        "b" => Operand::B(i),
        "t" => Operand::T(i),
        "m" => Operand::M(i),
        _ => return Err(bad()),
    })
}

fn parse_list(s: &str) -> Result<Vec<u8>> {
    s.split(',').map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient list '{s}'")))).collect()
}

impl SlpProgram {
    pub fn counts(&self) -> OpCounts {
        let mut c = OpCounts::default();
        for i in &self.instrs {
            match i {
                Instr::Add(..) | Instr::Sub(..) => c.additions += 1,
                Instr::Scale(..) => c.scalar_mults += 1,
                Instr::Mul(..) => c.products += 1,
                Instr::Zero(_) | Instr::Out(..) => {}
            }
        }
        c
    }

    pub fn field(&self) -> Result<Fq> {
        let fq = Fq::standard(self.q)?;
        match &self.base_modulus {
            Some(m) if m.as_slice() != fq.modulus() => Fq::with_modulus(fq.p(), m),
            _ => Ok(fq),
        }
    }

    pub fn to_text(&self) -> String {
        let c = self.counts();
        let mut s = format!("# slp q={} n={} products={} additions={} scalar_mults={}\n", self.q, self.n, c.products, c.additions, c.scalar_mults);
        s += &format!("# modulus={}\n", join(&self.modulus));
        if let Some(m) = &self.base_modulus {
            s += &format!("# base_modulus={}\n", join(m));
        }
        let n1 = self.n.saturating_sub(1);
        s += &format!("# inputs a0..a{n1} b0..b{n1}\n# outputs c0..c{n1}\n");
        for i in &self.instrs {
            s += &i.to_string();
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<SlpProgram> {
        let (mut q, mut n, mut modulus, mut base_modulus) = (None, None, None, None);
        let mut instrs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                for kv in h.split_whitespace() {
                    if let Some((k, v)) = kv.split_once('=') {
                        let num = || v.parse::<u64>().map_err(|_| Error::Parse(format!("bad header value {kv}")));
                        match k {
                            "q" => q = Some(num()?),
                            "n" => n = Some(num()? as usize),
                            "modulus" => modulus = Some(parse_list(v)?),
                            "base_modulus" => base_modulus = Some(parse_list(v)?),
                            _ => {}
                        }
                    }
                }
                continue;
            }
            let err = || Error::Parse(format!("line {}: cannot parse '{line}'", ln + 1));
            let (lhs, rhs) = line.split_once('=').ok_or_else(err)?;
            let toks: Vec<&str> = rhs.split_whitespace().collect();
            let lhs = lhs.trim();
            if let Some(i) = lhs.strip_prefix('c') {
                let i: usize = i.parse().map_err(|_| err())?;
                instrs.push(match toks.as_slice() {
                    ["0"] => Instr::Out(i, None),
                    [x] => Instr::Out(i, Some(parse_operand(x)?)),
                    _ => return Err(err()),
                });
                continue;
            }
            let instr = match (parse_operand(lhs)?, toks.as_slice()) {
                (Operand::T(d), ["0"]) => Instr::Zero(d),
                (Operand::T(d), [x, "+", y]) => Instr::Add(d, parse_operand(x)?, parse_operand(y)?),
                (Operand::T(d), [x, "-", y]) => Instr::Sub(d, parse_operand(x)?, parse_operand(y)?),
                (Operand::T(d), [c, "*", x]) => Instr::Scale(d, c.parse().map_err(|_| err())?, parse_operand(x)?),
                (Operand::M(d), [x, "*", y]) => Instr::Mul(d, parse_operand(x)?, parse_operand(y)?),
                _ => return Err(err()),
            };
            instrs.push(instr);
        }
        let missing = |k: &str| Error::Parse(format!("header is missing {k}"));
        Ok(SlpProgram {
            q: q.ok_or_else(|| missing("q"))?,
            n: n.ok_or_else(|| missing("n"))?,
            modulus: modulus.ok_or_else(|| missing("modulus"))?,
            base_modulus,
            instrs,
        })
    }

    /// Executes the program; every register must be written before it is read.
    pub fn run(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>> {
        let fq = self.field()?;
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::Domain(format!("program takes {} coordinates per input", self.n)));
        }
        let mut t: Vec<Option<u8>> = Vec::new();
        let mut m: Vec<Option<u8>> = Vec::new();
        let mut c: Vec<Option<u8>> = vec![None; self.n];
        let read = |op: Operand, t: &Vec<Option<u8>>, m: &Vec<Option<u8>>| -> Result<u8> {
            let v = match op {
                Operand::A(i) => a.get(i).copied(),
                Operand::B(i) => b.get(i).copied(),
                Operand::T(i) => t.get(i).copied().flatten(),
                Operand::M(i) => m.get(i).copied().flatten(),
            };
            v.ok_or_else(|| Error::Verification(format!("register {op} read before it was written")))
        };
        let write = |regs: &mut Vec<Option<u8>>, i: usize, v: u8| {
            if regs.len() <= i {
                regs.resize(i + 1, None);
            }
            regs[i] = Some(v);
        };
        for ins in &self.instrs {
            match *ins {
                Instr::Add(d, x, y) => {
                    let v = fq.add(read(x, &t, &m)?, read(y, &t, &m)?);
                    write(&mut t, d, v);
                }
                Instr::Sub(d, x, y) => {
                    let v = fq.sub(read(x, &t, &m)?, read(y, &t, &m)?);
                    write(&mut t, d, v);
                }
                Instr::Scale(d, k, x) => {
                    let v = fq.mul(fq.check(k as u64)?, read(x, &t, &m)?);
                    write(&mut t, d, v);
                }
                Instr::Zero(d) => write(&mut t, d, 0),
                Instr::Mul(d, x, y) => {
                    let v = fq.mul(read(x, &t, &m)?, read(y, &t, &m)?);
                    write(&mut m, d, v);
                }
                Instr::Out(i, src) => {
                    let v = match src {
                        Some(x) => read(x, &t, &m)?,
                        None => 0,
                    };
                    *c.get_mut(i).ok_or_else(|| Error::Verification(format!("output c{i} out of range")))? = Some(v);
                }
            }
        }
        c.into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Verification(format!("output c{i} never written"))))
            .collect()
    }
}
