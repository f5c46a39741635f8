//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::carlitz::{carlitz_d, carlitz_exp_coeffs, closed_form, exact_prime_sum};
use crate::error::Error;
use crate::field::FieldDesc;
use crate::polyring::{monic_count, monic_irreducibles_vec};
use crate::primesum::{numeric_prime_sum, numeric_zeta, psi_count, verify, SumRequest};
use crate::ratfun::pade_reconstruct;

/// Enumeration sizes above this print a warning.
pub const WARN_ENUMERATION: u64 = 10_000_000;
/// Enumeration sizes above this are refused.
pub const MAX_ENUMERATION: u64 = 1_000_000_000;

#[derive(Parser, Debug)]
#[command(name = "irrsum", version, about = "Sums over irreducible polynomials over finite fields")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Worker threads for enumeration; defaults to all cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArg {
    /// Field order, a prime power.
    #[arg(long)]
    pub q: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List monic irreducible polynomials by degree.
    Primes {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        max_degree: u32,
        /// Print only the count per degree.
        #[arg(long)]
        count_only: bool,
    },
    /// Truncated sum of G_p(1/P^k) over irreducibles P.
    Sum {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max_degree: u32,
        /// Sum over all irreducibles, not only monic ones.
        #[arg(long)]
        all: bool,
    },
    /// Exact value of the sum over monic irreducibles; needs (q-1) | k.
    Exact {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        k: u64,
    },
    /// Closed form of the sum for small k/(q-1).
    Closed {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        k: u64,
    },
    /// Compare the exact value with the truncated sum.
    Verify {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max_degree: u32,
        /// Record elapsed time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Recover a rational function from the truncated sum.
    Reconstruct {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max_degree: u32,
        #[arg(long)]
        num_deg: usize,
        #[arg(long)]
        den_deg: usize,
    },
    /// Truncated zeta value: sum of 1/A^k over monic A.
    Zeta {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max_degree: u32,
    },
    /// The products D_j and the Carlitz exponential coefficients 1/D_j.
    Carlitz {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        terms: u32,
    },
    /// Number of p-tuples of exponents summing to r with minimum zero.
    Psi {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: u32,
    },
}

/// A command failure and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InvalidField(_)
            | Error::InvalidArgument(_)
            | Error::UnsupportedExponent { .. }
            | Error::SizeBound(_)
            | Error::ConstantPolynomial => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type Out<'a> = &'a mut dyn Write;

fn emit<T: Serialize>(out: Out, format: Format, value: &T, plain: impl FnOnce() -> String) -> Result<(), Failure> {
    match format {
        Format::Plain => writeln!(out, "{}", plain())?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(value).expect("serializable"))?,
    }
    Ok(())
}

fn field(arg: &FieldArg) -> Result<FieldDesc, Failure> {
    Ok(FieldDesc::from_order(arg.q)?)
}

fn check_enumeration(f: &FieldDesc, dmax: u32, err: Out) -> Result<(), Failure> {
    if dmax == 0 {
        return Err(Error::InvalidArgument("max degree must be positive".into()).into());
    }
    let size = monic_count(f, dmax as usize).unwrap_or(u64::MAX);
    if size > MAX_ENUMERATION {
        return Err(Error::SizeBound(format!(
            "q^max-degree = {}^{dmax} exceeds {MAX_ENUMERATION}",
            f.order()
        ))
        .into());
    }
    if size > WARN_ENUMERATION {
        writeln!(err, "warning: enumerating {size} polynomials of top degree")?;
    }
    Ok(())
}

fn dispatch(cmd: &Command, format: Format, out: Out, err: Out) -> Result<i32, Failure> {
    match cmd {
        Command::Primes {
            field: fa,
            max_degree,
            count_only,
        } => {
            let f = field(fa)?;
            check_enumeration(&f, *max_degree, err)?;
            let by_degree: Vec<_> = (1..=*max_degree)
                .map(|d| (d, monic_irreducibles_vec(&f, d as usize)))
                .collect();
            if *count_only {
                let counts: Vec<_> = by_degree
                    .iter()
                    .map(|(d, ps)| json!({"degree": d, "count": ps.len()}))
                    .collect();
                emit(out, format, &counts, || {
                    by_degree
                        .iter()
                        .map(|(d, ps)| format!("{d} {}", ps.len()))
                        .collect::<Vec<_>>()
                        .join("\n")
                })?;
            } else {
                let all: Vec<_> = by_degree.into_iter().flat_map(|(_, ps)| ps).collect();
                emit(out, format, &all, || {
                    all.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n")
                })?;
            }
            Ok(0)
        }
        Command::Sum {
            field: fa,
            k,
            max_degree,
            all,
        } => {
            let f = field(fa)?;
            check_enumeration(&f, *max_degree, err)?;
            let s = numeric_prime_sum(&SumRequest::new(&f, *k, *max_degree, !all)?)?;
            emit(out, format, &s, || s.to_string())?;
            Ok(0)
        }
        Command::Exact { field: fa, k } => {
            let f = field(fa)?;
            let r = exact_prime_sum(&f, *k)?;
            emit(out, format, &r, || r.to_string())?;
            Ok(0)
        }
        Command::Closed { field: fa, k } => {
            let f = field(fa)?;
            let r = closed_form(&f, *k)?;
            emit(out, format, &r, || {
                r.as_ref().map_or("not applicable".to_string(), |r| r.to_string())
            })?;
            Ok(0)
        }
        Command::Verify {
            field: fa,
            k,
            max_degree,
            timing,
        } => {
            let f = field(fa)?;
            check_enumeration(&f, *max_degree, err)?;
            let r = verify(&f, *k, *max_degree, *timing)?;
            emit(out, format, &r, || {
                let mut lines = vec![
                    format!("match: {}", r.matches),
                    format!("precision: {}", r.precision),
                    format!(
                        "first_mismatch: {}",
                        r.first_mismatch.map_or("none".to_string(), |j| j.to_string())
                    ),
                    format!("exact: {}", r.exact),
                    format!("numeric: {}", r.numeric),
                ];
                if let Some(ms) = r.millis {
                    lines.push(format!("millis: {ms}"));
                }
                lines.join("\n")
            })?;
            if !r.matches {
                writeln!(err, "mismatch at u^{}", r.first_mismatch.unwrap_or_default())?;
            }
            Ok(if r.matches { 0 } else { 1 })
        }
        Command::Reconstruct {
            field: fa,
            k,
            max_degree,
            num_deg,
            den_deg,
        } => {
            let f = field(fa)?;
            check_enumeration(&f, *max_degree, err)?;
            let s = numeric_prime_sum(&SumRequest::new(&f, *k, *max_degree, true)?)?;
            let r = pade_reconstruct(&s, *num_deg, *den_deg).map_err(|e| Failure {
                code: 1,
                message: e.to_string(),
            })?;
            emit(out, format, &r, || r.to_string())?;
            Ok(0)
        }
        Command::Zeta {
            field: fa,
            k,
            max_degree,
        } => {
            let f = field(fa)?;
            check_enumeration(&f, *max_degree, err)?;
            let z = numeric_zeta(&f, *k, *max_degree)?;
            emit(out, format, &z, || z.to_string())?;
            Ok(0)
        }
        Command::Carlitz { field: fa, terms } => {
            let f = field(fa)?;
            let ds = (0..*terms)
                .map(|j| carlitz_d(&f, j))
                .collect::<Result<Vec<_>, _>>()?;
            let inv = carlitz_exp_coeffs(&f, *terms)?;
            let value = json!({"D": ds, "exp_coeffs": inv});
            emit(out, format, &value, || {
                let mut lines: Vec<String> =
                    ds.iter().enumerate().map(|(j, d)| format!("D_{j} = {d}")).collect();
                lines.extend(inv.iter().enumerate().map(|(j, c)| format!("1/D_{j} = {c}")));
                lines.join("\n")
            })?;
            Ok(0)
        }
        Command::Psi { p, r } => {
            if !crate::field::is_prime(*p as u64) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")).into());
            }
            if *p > 16 || *r > 64 {
                return Err(Error::SizeBound("psi enumeration limited to p <= 16, r <= 64".into()).into());
            }
            let n = psi_count(*p, *r);
            emit(out, format, &json!({"p": p, "r": r, "psi": n}), || n.to_string())?;
            Ok(0)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code: 0 on success, 1 on a verification mismatch or failed
/// reconstruction, 2 on invalid arguments.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return e.exit_code();
        }
    };
    // buffered so the command can run inside a thread pool
    let mut out_buf: Vec<u8> = Vec::new();
    let mut err_buf: Vec<u8> = Vec::new();
    let mut go = || dispatch(&cli.command, cli.format, &mut out_buf, &mut err_buf);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(go),
            Err(e) => Err(Failure {
                code: 1,
                message: e.to_string(),
            }),
        },
        None => go(),
    };
    let _ = out.write_all(&out_buf);
    let _ = err.write_all(&err_buf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
