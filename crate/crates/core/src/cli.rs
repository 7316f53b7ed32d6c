//! Command-line front end. Every subcommand is a thin adapter over the
//! library; [`run`] returns the process exit code so it can be tested
//! without spawning a process.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when a verification fails.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::chi::{self, CellStructure, DiagonalHypersurface};
use crate::field::{Field, FieldOps, PrimeField, Rationals, Reals};
use crate::gw::{gw_equal, invariants, invariants_json, parse_gw, to_json, GWElement, QuadForm};
use crate::localindex::{diag_local_index, hessian_index, InfinityConvention, LocalZeroDatum, P1Point};
use crate::poly::{parse_poly, parse_rational_function, Factorable, Poly, DEFAULT_SEED};
use crate::rh::{hyperelliptic_rh_verify_seeded, rh_verify_seeded, RHReport};
use crate::transfer::{etale_algebra, scaled_trace_form, transfer};

#[derive(Parser, Debug)]
#[command(name = "quadenum", version, about = "Exact Grothendieck-Witt arithmetic and enriched Euler characteristics")]
pub struct Cli {
    /// Base field: Q, R or Fp:<p> for an odd prime p.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    /// Seed for randomized polynomial factorization.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Arithmetic in GW(k).
    #[command(subcommand)]
    Gw(GwCmd),
    /// Class of the scaled trace form Tr(u x y) on k[T]/(g).
    Trace {
        #[arg(long)]
        modulus: String,
        #[arg(long, default_value = "1")]
        unit: String,
    },
    /// Local indices, transferred to GW(k).
    #[command(subcommand)]
    Index(IndexCmd),
    /// Riemann-Hurwitz identities.
    #[command(subcommand)]
    Rh(RhCmd),
    /// Euler characteristics.
    #[command(subcommand)]
    Chi(ChiCmd),
}

#[derive(Subcommand, Debug)]
pub enum GwCmd {
    /// Evaluate an expression such as "<2> + 3h - <-1>".
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Invariants of the diagonal form <a, b, ...>.
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        diag: String,
    },
    /// Decide equality in GW(k).
    Equal {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
}

#[derive(Args, Debug)]
pub struct ResidueArg {
    /// Irreducible polynomial defining the residue field of the point.
    #[arg(long, default_value = "T")]
    modulus: String,
}

#[derive(Subcommand, Debug)]
pub enum IndexCmd {
    /// Index of a section whose coordinates are u_i x_i^{n_i}.
    Diag {
        #[command(flatten)]
        residue: ResidueArg,
        #[arg(long, allow_hyphen_values = true)]
        units: String,
        #[arg(long)]
        exponents: String,
    },
    /// Index at a nondegenerate critical point from the quadratic part
    /// of the function, given as a_11,a_12,..,a_1n,a_22,..,a_nn.
    Hessian {
        #[command(flatten)]
        residue: ResidueArg,
        #[arg(long, allow_hyphen_values = true)]
        jet: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum RhCmd {
    /// Check the identity for a rational map of the projective line.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        /// Use +1/t instead of -1/t as the parameter at infinity.
        #[arg(long)]
        plus_inverse: bool,
    },
    /// Check the identity for the double cover y^2 = F(x).
    Hyperelliptic {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChiCmd {
    /// Projective n-space.
    Pn { n: u64 },
    /// A cellular scheme with the given number of cells in each dimension.
    Cellular {
        #[arg(long)]
        counts: String,
    },
    /// A smooth projective curve.
    Curve {
        #[arg(long)]
        genus: u64,
    },
    /// The quadric sum a_i X_i^2 = 0.
    Quadric {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// The diagonal hypersurface sum a_i X_i^m = 0.
    Diagonal {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Compute by degeneration instead of the closed form.
        #[arg(long)]
        recursive: bool,
    },
    /// The integer D(f) from the two top Chern degrees.
    Dinv {
        #[arg(long, allow_hyphen_values = true)]
        twisted: i64,
        #[arg(long, allow_hyphen_values = true)]
        untwisted: i64,
    },
}

/// What a subcommand produced.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn element(x: &GWElement) -> Self {
        Output { text: x.to_string(), json: element_json(x), code: 0 }
    }
}

/// The canonical encoding of `x` with its invariants attached.
pub fn element_json(x: &GWElement) -> Value {
    let mut v = to_json(x);
    v["invariants"] = invariants_json(x);
    v
}

type CliResult = Result<Output, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "Q" | "q" => Ok(Field::Rational),
        "R" | "r" => Ok(Field::RealClosed),
        _ => {
            let p = s
                .strip_prefix("Fp:")
                .or_else(|| s.strip_prefix("fp:"))
                .ok_or_else(|| format!("unknown field '{s}'; expected Q, R or Fp:<p>"))?;
            let p: u64 = p.trim().parse().map_err(|_| format!("bad characteristic in '{s}'"))?;
            Field::finite(p).map_err(err)
        }
    }
}

fn list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn ints<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    list(s).into_iter().map(|x| x.parse().map_err(|_| format!("bad integer '{x}'"))).collect()
}

fn scalar<K: FieldOps>(k: &K, s: &str) -> Result<K::Elem, String> {
    let p = parse_poly(k, s).map_err(err)?;
    if !p.is_constant() {
        return Err(format!("'{s}' is not a constant"));
    }
    Ok(p.coeff(0))
}

fn scalars<K: FieldOps>(k: &K, s: &str) -> Result<Vec<K::Elem>, String> {
    let out = list(s).into_iter().map(|x| scalar(k, x)).collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

fn point_string<K: FieldOps>(p: &P1Point<K>) -> String {
    match p {
        P1Point::Finite(g) => g.to_string_in("t"),
        P1Point::Infinity => "inf".into(),
    }
}

fn report_output<K: FieldOps>(r: &RHReport<K>) -> Output {
    let mut text = format!("lhs = {}\nrhs = {}\nholds = {}\nclassical rank check = {}\n", r.lhs, r.rhs, r.holds, r.classical_rank_check);
    let mut points = Vec::new();
    for d in &r.data {
        let (pt, val, unit) = (point_string(&d.point), point_string(&d.critical_value), d.unit.to_string_in("T"));
        text.push_str(&format!("  point {pt}: n = {}, unit = {unit}, value {val}\n", d.ram_index));
        points.push(json!({"point": pt, "ram_index": d.ram_index, "unit": unit, "critical_value": val}));
    }
    let json = json!({
        "lhs": element_json(&r.lhs),
        "rhs": element_json(&r.rhs),
        "holds": r.holds,
        "classical_rank_check": r.classical_rank_check,
        "points": points,
    });
    Output { text: text.trim_end().to_string(), json, code: if r.holds { 0 } else { 2 } }
}

macro_rules! with_field {
    ($field:expr, $k:ident => $body:expr) => {
        match $field {
            Field::Rational => {
                let $k = &Rationals;
                $body
            }
            Field::RealClosed => {
                let $k = &Reals;
                $body
            }
            Field::Finite(p) => {
                let $k = &PrimeField::new(p).map_err(err)?;
                $body
            }
        }
    };
}

fn gw_cmd(field: Field, cmd: &GwCmd) -> CliResult {
    match cmd {
        GwCmd::Eval { expr } => Ok(Output::element(&parse_gw(field, expr).map_err(err)?)),
        GwCmd::Equal { lhs, rhs } => {
            let (a, b) = (parse_gw(field, lhs).map_err(err)?, parse_gw(field, rhs).map_err(err)?);
            let eq = gw_equal(&a, &b).map_err(err)?;
            let json = json!({"equal": eq, "lhs": element_json(&a), "rhs": element_json(&b)});
            Ok(Output { text: eq.to_string(), json, code: 0 })
        }
        GwCmd::Invariants { diag } => with_field!(field, k => {
            let classes = scalars(k, diag)?
                .iter()
                .map(|a| k.square_class(a))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let form = QuadForm::new(field, classes).map_err(err)?;
            let inv = invariants(&form);
            let x = form.to_element();
            let hasse: Vec<String> = inv.hasse.iter().map(|(v, s)| format!("{v}:{s}")).collect();
            let text = format!(
                "form = {x}\nrank = {}\ndisc = {}\nsignature = {}\nwitt index = {}\nhasse = [{}]",
                inv.rank,
                inv.disc.encoding(),
                inv.signature.map_or("none".into(), |s| s.to_string()),
                inv.witt_index,
                hasse.join(", ")
            );
            let mut json = element_json(&x);
            json["invariants"]["witt_index"] = json!(inv.witt_index);
            Ok(Output { text, json, code: 0 })
        }),
    }
}

fn residue_algebra<K: FieldOps>(k: &K, modulus: &str) -> Result<crate::transfer::EtaleAlgebra<K>, String> {
    etale_algebra(&parse_poly(k, modulus).map_err(err)?).map_err(err)
}

fn polys<K: FieldOps>(k: &K, s: &str) -> Result<Vec<Poly<K>>, String> {
    list(s).into_iter().map(|x| parse_poly(k, x).map_err(err)).collect()
}

fn index_cmd<K: FieldOps>(k: &K, cmd: &IndexCmd) -> CliResult {
    let x = match cmd {
        IndexCmd::Diag { residue, units, exponents } => {
            let datum = LocalZeroDatum {
                residue: residue_algebra(k, &residue.modulus)?,
                units: polys(k, units)?,
                exponents: ints(exponents)?,
            };
            diag_local_index(&datum).map_err(err)?
        }
        IndexCmd::Hessian { residue, jet } => {
            let a = residue_algebra(k, &residue.modulus)?;
            let flat = polys(k, jet)?;
            let n = (1..=flat.len()).find(|n| n * (n + 1) / 2 >= flat.len()).unwrap_or(0);
            if n == 0 || n * (n + 1) / 2 != flat.len() {
                return Err(format!("a jet needs n(n+1)/2 entries, got {}", flat.len()));
            }
            let mut m = vec![vec![Poly::zero(k); n]; n];
            let mut it = flat.into_iter();
            for i in 0..n {
                for j in i..n {
                    m[i][j] = it.next().unwrap();
                }
            }
            hessian_index(&a, &m).map_err(err)?
        }
    };
    Ok(Output::element(&transfer(&x).map_err(err)?))
}

fn rh_cmd<K: Factorable>(k: &K, cmd: &RhCmd, seed: u64) -> CliResult {
    let report = match cmd {
        RhCmd::Verify { map, plus_inverse } => {
            let f = parse_rational_function(k, map).map_err(err)?;
            let conv = if *plus_inverse { InfinityConvention::PlusInverse } else { InfinityConvention::MinusInverse };
            rh_verify_seeded(&f, conv, seed).map_err(err)?
        }
        RhCmd::Hyperelliptic { poly } => hyperelliptic_rh_verify_seeded(&parse_poly(k, poly).map_err(err)?, seed).map_err(err)?,
    };
    Ok(report_output(&report))
}

fn chi_cmd<K: FieldOps>(k: &K, cmd: &ChiCmd) -> CliResult {
    let field = k.field();
    let x = match cmd {
        ChiCmd::Pn { n } => chi::chi_pn(field, *n),
        ChiCmd::Cellular { counts } => chi::chi_cellular(field, &CellStructure::new(ints(counts)?).map_err(err)?),
        ChiCmd::Curve { genus } => chi::chi_curve(field, *genus),
        ChiCmd::Quadric { coeffs } => chi::chi_quadric(k, &scalars(k, coeffs)?).map_err(err)?,
        ChiCmd::Diagonal { m, coeffs, recursive } => {
            let x = DiagonalHypersurface::new(k, *m, scalars(k, coeffs)?).map_err(err)?;
            if *recursive {
                chi::chi_diagonal_recursive(&x)
            } else {
                chi::chi_diagonal_closed(&x)
            }
            .map_err(err)?
        }
        ChiCmd::Dinv { twisted, untwisted } => {
            let d = chi::d_invariant(*twisted, *untwisted).map_err(err)?;
            return Ok(Output { text: d.to_string(), json: json!({"d": d}), code: 0 });
        }
    };
    Ok(Output::element(&x))
}

fn dispatch(cli: &Cli) -> CliResult {
    let field = parse_field(&cli.field)?;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Gw(c) => gw_cmd(field, c),
        Command::Trace { modulus, unit } => with_field!(field, k => {
            let a = residue_algebra(k, modulus)?;
            let u = parse_poly(k, unit).map_err(err)?;
            Ok(Output::element(&scaled_trace_form(&a, &u).map_err(err)?))
        }),
        Command::Index(c) => with_field!(field, k => index_cmd(k, c)),
        Command::Rh(c) => with_field!(field, k => rh_cmd(k, c, seed)),
        Command::Chi(c) => with_field!(field, k => chi_cmd(k, c)),
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `errout`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, errout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => write!(out, "{e}"),
                _ => write!(errout, "{e}"),
            };
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let shown = if cli.json { serde_json::to_string_pretty(&o.json).unwrap() } else { o.text };
            let _ = writeln!(out, "{shown}");
            o.code
        }
        Err(e) => {
            let _ = writeln!(errout, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests;
