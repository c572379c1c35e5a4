//! Command-line front end. Exit codes: 0 success, 2 validation error,
//! 3 construction failure, 4 verification failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::builder::{
    assemble_tensor, best_curve, build, buildable_shape, default_dmax, optimize_bound, optimize_bound_with,
    BoundReport, SearchLimits,
};
use crate::elliptic::{catalog, classify, zeta_counts, Curve, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::function_field::enumerate_places;
use crate::gf::Fq;
use crate::tensor::{emit_slp, TensorDecomposition, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "chudnovsky", version, about = "Symmetric multiplication algorithms for F_{q^n} from elliptic curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Slp,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the named curves over F_q with point counts and cases.
    Catalog {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Place counts B_d by zeta function and by enumeration.
    Places {
        #[arg(long)]
        q: u64,
        /// Catalog index, equation, or a1,a2,a3,a4,a6.
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 4)]
        dmax: usize,
        /// Also list the places of this degree.
        #[arg(long)]
        list: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cheapest divisor shape for F_{q^n}; all catalog curves when none is given.
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        dmax: Option<usize>,
        /// Case b: target 2n instead of 2n + 1.
        #[arg(long)]
        strict_b: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build, assemble and verify an algorithm; write the bundle.
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bundle output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the straight-line program here.
        #[arg(long)]
        slp: Option<PathBuf>,
        /// Also write the full build plan here.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Re-check a bundle on all basis pairs.
    Verify {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a verified bundle as a straight-line program.
    Emit {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Slp)]
        format: Format,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Construction(_) | Error::Internal(_) => 3,
        Error::Verification(_) => 4,
        _ => 2,
    }
}

/// Resolves a curve selector: a catalog index, "a1,a2,a3,a4,a6", or an equation.
pub fn select_curve(q: u64, sel: &str) -> Result<Curve> {
    let sel = sel.trim();
    if let Ok(i) = sel.parse::<usize>() {
        let cat = catalog(q)?;
        let len = cat.len();
        return cat.into_iter().nth(i).map(|e| e.curve).ok_or_else(|| {
            Error::Domain(format!("catalog index {i} out of range (F_{q} has {len} entries)"))
        });
    }
    let fq = Fq::standard(q)?;
    if sel.contains(',') {
        let parts: Vec<u64> = sel
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient list '{sel}'"))))
            .collect::<Result<_>>()?;
        let a: [u64; 5] = parts.try_into().map_err(|_| Error::Parse("expected five coefficients a1,a2,a3,a4,a6".into()))?;
        let mut c = [0u8; 5];
        for (dst, v) in c.iter_mut().zip(a) {
            *dst = fq.check(v)?;
        }
        return Curve::new(&fq, c);
    }
    Curve::parse(&fq, sel)
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_catalog(q: u64, format: Format) -> Result<()> {
    let mut rows = Vec::new();
    for (i, e) in catalog(q)?.into_iter().enumerate() {
        let class = classify(&e.curve)?;
        rows.push(json!({
            "index": i,
            "equation": e.equation,
            "normalized": e.curve.equation(),
            "coefficients": e.curve.to_json(),
            "N1": class.n1,
            "group": class.group.to_string(),
            "case": class.case,
            "slack": class.slack,
        }));
        if format == Format::Text {
            println!(
                "{i:>2}  case {}  N1 = {:<3} {:<10} slack {}  {}",
                class.case, class.n1, class.group.to_string(), class.slack, e.equation
            );
        }
    }
    if format == Format::Json {
        print_json(&rows)?;
    }
    Ok(())
}

fn cmd_places(q: u64, sel: &str, dmax: usize, list: Option<usize>, format: Format) -> Result<()> {
    let curve = select_curve(q, sel)?;
    let z = zeta_counts(&curve, dmax)?;
    let mut enumerated = Vec::new();
    for d in 1..=dmax {
        let feasible = (q as u128).checked_pow(d as u32).is_some_and(|s| s <= ENUMERATION_LIMIT as u128);
        enumerated.push(if feasible { Some(enumerate_places(&curve, d)?.len() as i128) } else { None });
    }
    let agree = enumerated.iter().zip(&z.b).all(|(e, b)| e.is_none_or(|e| e == *b));
    let listed = match list {
        Some(d) => Some(enumerate_places(&curve, d)?),
        None => None,
    };
    match format {
        Format::Json => print_json(&json!({
            "curve": curve.equation(),
            "N": z.n,
            "B": z.b,
            "B_enumerated": enumerated,
            "agree": agree,
            "places": listed.as_ref().map(|ps| ps.iter().map(|p| p.to_json()).collect::<Vec<_>>()),
        }))?,
        _ => {
            println!("{}", curve.equation());
            println!(" d  N_d  B_d  enumerated");
            for d in 1..=dmax {
                let e = enumerated[d - 1].map_or("-".to_string(), |v| v.to_string());
                println!("{d:>2}  {:>3}  {:>3}  {e}", z.n[d - 1], z.b[d - 1]);
            }
            if let Some(ps) = &listed {
                for p in ps {
                    println!("{}", p.display());
                }
            }
        }
    }
    if !agree {
        return Err(Error::Verification("enumeration disagrees with zeta counts".into()));
    }
    Ok(())
}

fn print_bound(r: &BoundReport, format: Format) -> Result<()> {
    match format {
        Format::Json => print_json(r),
        _ => {
            println!("{} over F_{}, n = {} (case {}, slack {})", r.curve, r.q, r.n, r.case, r.slack);
            println!("N = {:?}", r.big_n);
            println!("U = {:?}", r.big_u);
            println!("deg G = {}", r.deg_g);
            println!("bound = {} = {}", r.bound, r.breakdown());
            Ok(())
        }
    }
}

fn cmd_bound(q: u64, n: u64, sel: Option<&str>, dmax: Option<usize>, strict_b: bool, format: Format) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain("n must be at least 2".into()));
    }
    let dmax = dmax.unwrap_or_else(|| default_dmax(q, n));
    let r = match sel {
        Some(s) => {
            let c = select_curve(q, s)?;
            if strict_b {
                optimize_bound_with(n, &c, &SearchLimits::new(dmax), true)?
            } else {
                optimize_bound(n, &c, dmax)?
            }
        }
        None => best_curve(q, n, dmax)?.1,
    };
    print_bound(&r, format)
}

/// The catalog curve with the cheapest buildable shape.
fn best_buildable(q: u64, n: usize, dmax: Option<usize>) -> Result<(Curve, BoundReport)> {
    let mut best: Option<(Curve, BoundReport)> = None;
    for e in catalog(q)? {
        match buildable_shape(&e.curve, n, dmax) {
            Ok(r) if best.as_ref().is_none_or(|b| r.bound < b.1.bound) => best = Some((e.curve, r)),
            Ok(_) | Err(Error::Construction(_)) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| Error::Construction(format!("no catalog curve over F_{q} admits a buildable shape for n = {n}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_build(
    q: u64,
    n: usize,
    sel: Option<&str>,
    dmax: Option<usize>,
    seed: u64,
    out: Option<&Path>,
    slp: Option<&Path>,
    plan_out: Option<&Path>,
    format: Format,
) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain("n must be at least 2".into()));
    }
    let (curve, report) = match sel {
        Some(s) => {
            let c = select_curve(q, s)?;
            let r = buildable_shape(&c, n, dmax)?;
            (c, r)
        }
        None => best_buildable(q, n, dmax)?,
    };
    log::info!("building on {} with {}", curve.equation(), report.shape);
    let plan = build(&curve, n, &report.shape.trimmed(), seed)?;
    let tensor = assemble_tensor(&plan)?;
    let v = tensor.verify()?;
    if let Some(p) = plan_out {
        fs::write(p, serde_json::to_string_pretty(&plan.to_json())?)?;
    }
    if !v.pass {
        print_verify(&v, format)?;
        return Err(Error::Verification("built tensor failed exhaustive verification".into()));
    }
    let bundle = tensor.to_json()?;
    if let Some(p) = slp {
        fs::write(p, emit_slp(&tensor)?.to_text())?;
    }
    match out {
        Some(p) => {
            fs::write(p, &bundle)?;
            let summary = json!({
                "curve": curve.equation(),
                "N": report.shape.trimmed().n,
                "U": report.shape.trimmed().u,
                "degG": plan.deg_g(),
                "seed": seed,
                "attempt": plan.attempt,
                "rank": tensor.rank,
                "verify": v,
            });
            if format == Format::Json {
                print_json(&summary)?;
            } else {
                println!("curve {}  {}", curve.equation(), report.shape.trimmed());
                println!("deg G = {}, rank = {}, seed {} (attempt {})", plan.deg_g(), tensor.rank, seed, plan.attempt);
                println!("verify: pass ({} basis pairs)", v.pairs_checked);
                println!("bundle written to {}", p.display());
            }
        }
        None => println!("{bundle}"),
    }
    Ok(())
}

fn print_verify(v: &VerifyReport, format: Format) -> Result<()> {
    if format == Format::Json {
        return print_json(v);
    }
    println!("{}", if v.pass { "pass" } else { "FAIL" });
    println!("pairs checked: {}", v.pairs_checked);
    println!("rank: {} (declared matches: {})", v.rank, v.rank_consistent);
    println!("symmetric: {} (flag matches: {})", v.symmetric, v.symmetric_consistent);
    println!("rank >= 2n - 1: {}", v.lower_bound_ok);
    println!("basis change invertible: {}", v.basis_change_invertible);
    if let Some(w) = &v.witness {
        println!("witness: X^{} * X^{}: expected {:?}, got {:?}", w.i, w.j, w.expected, w.got);
    }
    Ok(())
}

fn load_bundle(path: &Path) -> Result<TensorDecomposition> {
    TensorDecomposition::from_json(&fs::read_to_string(path)?)
}

fn cmd_verify(bundle: &Path, format: Format) -> Result<()> {
    let v = load_bundle(bundle)?.verify()?;
    print_verify(&v, format)?;
    if v.pass {
        Ok(())
    } else {
        Err(Error::Verification("bundle does not compute the field product".into()))
    }
}

fn cmd_emit(bundle: &Path, out: Option<&Path>, format: Format) -> Result<()> {
    let t = load_bundle(bundle)?;
    if !t.verify()?.pass {
        return Err(Error::Verification("refusing to emit an unverified bundle".into()));
    }
    let p = emit_slp(&t)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "q": p.q,
            "n": p.n,
            "counts": p.counts(),
            "program": p.to_text(),
        }))? + "\n",
        _ => p.to_text(),
    };
    write_or_print(out, &text)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Catalog { q, format } => cmd_catalog(q, format),
        Command::Places { q, curve, dmax, list, format } => cmd_places(q, &curve, dmax, list, format),
        Command::Bound { q, n, curve, dmax, strict_b, format } => {
            cmd_bound(q, n, curve.as_deref(), dmax, strict_b, format)
        }
        Command::Build { q, n, curve, dmax, seed, out, slp, plan, format } => {
            cmd_build(q, n, curve.as_deref(), dmax, seed, out.as_deref(), slp.as_deref(), plan.as_deref(), format)
        }
        Command::Verify { bundle, format } => cmd_verify(&bundle, format),
        Command::Emit { bundle, out, format } => cmd_emit(&bundle, out.as_deref(), format),
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_selectors() {
        let by_eq = select_curve(3, "y^2 + 2x^3 + 2x^2 + 1 = 0").unwrap();
        let by_coeffs = select_curve(3, "0,1,0,0,2").unwrap();
        assert_eq!(by_eq, by_coeffs);
        let idx = catalog(3).unwrap().iter().position(|e| e.curve == by_eq).unwrap();
        assert_eq!(select_curve(3, &idx.to_string()).unwrap(), by_eq);
        assert!(select_curve(3, "99").is_err());
        assert!(select_curve(3, "1,2").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Domain(String::new())), 2);
        assert_eq!(exit_code(&Error::Construction(String::new())), 3);
        assert_eq!(exit_code(&Error::Verification(String::new())), 4);
    }
}
