//! `parsiegel`: exact mass formulas and enumeration checks from the command line.
//!
//! Every command prints one JSON document to standard output. Exit status is
//! 0 on success, 1 on invalid input, and 2 when a `verify` check disagrees.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use parsiegel::arith::{qpow, Polynomial, PowerSeries};
use parsiegel::field::parse_points;
use parsiegel::oracles::{
    eq8_balance_check, hom_inj_count_p1, hyperplane_avoid_count, lemma_conditions_hold,
    local_sublattice_count, p1_mass_census, p1_open_divisor_count, p1_parabolic_census,
    SplittingType,
};
use parsiegel::{
    classical_mass, limit_fixed_determinant, limit_unfixed, quasi_parabolic_mass, r_divisor_series,
    CurveData, CurveInput, Error, P1Point, QuasiParabolicData, Rational,
};

#[derive(Parser)]
#[command(name = "parsiegel", version, about = "Exact quasi-parabolic Siegel mass formulas over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zeta series of a curve and its class number.
    Zeta {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        precision: u64,
    },
    /// Counts of effective rank-r divisors on X - S and their limit.
    Divisors {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        precision: u64,
    },
    /// Classical or quasi-parabolic mass with its factors.
    Mass {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        parabolic: Option<PathBuf>,
    },
    /// Limits of normalized divisor counts, unfixed and with fixed determinant.
    Limits {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        rank: usize,
    },
    /// Compare a formula with a brute-force count on P^1.
    Verify {
        #[command(subcommand)]
        verb: Verify,
    },
}

#[derive(Args)]
struct Field {
    /// Prime field size.
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct Marked {
    /// Comma-separated points of P^1(F_q), e.g. `0,1,inf`.
    #[arg(long, value_delimiter = ',')]
    marked_points: Vec<String>,
}

#[derive(Subcommand)]
enum Verify {
    /// Sublattices of colength n in F_q[[x]]^r against the local series.
    Local {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Hermite normal forms on P^1 - S against the divisor series.
    Divisors {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        marked: Marked,
    },
    /// Truncated sum of 1/|Aut(E)| on P^1 against the classical mass.
    Mass {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        degree: i64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        cutoff: i64,
    },
    /// Truncated sum of 1/|ParAut(E, F)| on P^1 against the quasi-parabolic mass.
    Parabolic {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        parabolic: PathBuf,
        #[command(flatten)]
        marked: Marked,
        #[arg(long, default_value_t = 0)]
        degree: i64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        cutoff: i64,
    },
    /// Maps O^r -> E injective on marked fibers against q^{rχ} times the unit proportion.
    Hom {
        #[command(flatten)]
        field: Field,
        /// Comma-separated twists a_1 >= ... >= a_r.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        twists: Vec<i64>,
        #[command(flatten)]
        marked: Marked,
    },
    /// Points of P(V) off s hyperplanes against q^{d-s}(q-1)^{s-1}.
    Lemma22 {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quasi-parabolic divisors counted directly and grouped by bundle.
    Eq8 {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        marked: Marked,
        /// Flag data; trivial flags at every marked point when absent.
        #[arg(long)]
        parabolic: Option<PathBuf>,
        /// Largest splitting-type gap included; defaults to the degree.
        #[arg(long)]
        cutoff: Option<i64>,
    },
}

/// The shape every `verify` verb reports.
#[derive(Serialize)]
struct Check {
    expected: Value,
    observed: Value,
    #[serde(rename = "match")]
    matched: bool,
    tail_bound: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

enum Outcome {
    Report(Value),
    Check(Check),
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Reads a curve. When the file names no marked points, `marked` supplies the count.
fn read_curve(path: &Path, marked: Option<usize>) -> Result<CurveData, Error> {
    let input: CurveInput = read_json(path)?;
    let curve = input.into_curve()?;
    Ok(match marked {
        Some(s) if input.marked_count.is_none() && input.marked_points.is_none() => curve.with_marked_count(s),
        _ => curve,
    })
}

fn points(q: u64, marked: &Marked) -> Result<Vec<P1Point>, Error> {
    parse_points(marked.marked_points.iter().map(String::as_str), q)
}

fn point_names(points: &[P1Point]) -> Vec<String> {
    points.iter().map(P1Point::to_string).collect()
}

fn check_rank(rank: usize) -> Result<(), Error> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    Ok(())
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Zeta { curve, precision } => {
            let curve = read_curve(&curve, None)?;
            Ok(Outcome::Report(json!({
                "weil_numerator": curve.weil_numerator(),
                "coefficients": curve.zeta_series(precision as usize).coeffs(),
                "class_number": curve.class_number()?,
            })))
        }
        Command::Divisors { curve, rank, precision } => {
            check_rank(rank)?;
            let curve = read_curve(&curve, None)?;
            let table = r_divisor_series(&curve, rank, precision as usize)?;
            Ok(Outcome::Report(json!({
                "rank": rank,
                "counts": table.counts,
                "limit": limit_unfixed(&curve, rank)?,
            })))
        }
        Command::Mass { curve, rank, parabolic } => {
            check_rank(rank)?;
            let report = match parabolic {
                Some(path) => {
                    let data: QuasiParabolicData = read_json(&path)?;
                    if data.rank != rank {
                        return Err(Error::InvalidArgument(format!(
                            "--rank {rank} but the flag data has rank {}",
                            data.rank
                        )));
                    }
                    let curve = read_curve(&curve, Some(data.marked_count()))?;
                    quasi_parabolic_mass(&curve, &data)?
                }
                None => classical_mass(&read_curve(&curve, None)?, rank)?,
            };
            Ok(Outcome::Report(to_value(&report)))
        }
        Command::Limits { curve, rank } => {
            check_rank(rank)?;
            let curve = read_curve(&curve, None)?;
            Ok(Outcome::Report(json!({
                "rank": rank,
                "limit_unfixed": limit_unfixed(&curve, rank)?,
                "limit_fixed_determinant": limit_fixed_determinant(&curve, rank),
            })))
        }
        Command::Verify { verb } => verify(verb).map(Outcome::Check),
    }
}

fn verify(verb: Verify) -> Result<Check, Error> {
    match verb {
        Verify::Local { field: Field { q }, rank, n_max } => {
            check_rank(rank)?;
            // prod_{j=1}^{r} 1/(1 - q^{j-1} t)
            let mut denom = Polynomial::one();
            for j in 0..rank {
                denom = denom.mul(&Polynomial::one_minus(qpow(q, j as i64)));
            }
            let series = PowerSeries::from_rational_function(&Polynomial::one(), &denom, n_max + 1)?;
            let observed = (0..=n_max)
                .map(|n| local_sublattice_count(q, rank, n).map(Rational::from))
                .collect::<Result<Vec<_>, _>>()?;
            let matched = series.coeffs() == observed.as_slice();
            Ok(Check {
                expected: to_value(&series.coeffs()),
                observed: to_value(&observed),
                matched,
                tail_bound: None,
                details: None,
            })
        }
        Verify::Divisors { field: Field { q }, rank, n_max, marked } => {
            check_rank(rank)?;
            let pts = points(q, &marked)?;
            let curve = CurveData::projective_line(q, pts.len())?;
            let table = r_divisor_series(&curve, rank, n_max + 1)?;
            let observed = (0..=n_max)
                .map(|n| p1_open_divisor_count(q, rank, n, &pts).map(Rational::from))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Check {
                matched: table.counts == observed,
                expected: to_value(&table.counts),
                observed: to_value(&observed),
                tail_bound: None,
                details: Some(json!({ "marked_points": point_names(&pts) })),
            })
        }
        Verify::Mass { field: Field { q }, rank, degree, cutoff } => {
            check_rank(rank)?;
            let mass = classical_mass(&CurveData::projective_line(q, 0)?, rank)?.value;
            let census = p1_mass_census(q, rank, degree, cutoff)?;
            Ok(Check {
                matched: census.partial_sum <= mass && mass <= &census.partial_sum + &census.tail_bound,
                expected: to_value(&mass),
                observed: to_value(&census.partial_sum),
                tail_bound: Some(census.tail_bound),
                details: Some(json!({ "rows": census.rows.len() })),
            })
        }
        Verify::Parabolic { field: Field { q }, parabolic, marked, degree, cutoff } => {
            let data: QuasiParabolicData = read_json(&parabolic)?;
            let pts = points(q, &marked)?;
            let curve = CurveData::projective_line(q, pts.len())?;
            let mass = quasi_parabolic_mass(&curve, &data)?.value;
            let census = p1_parabolic_census(q, &data, &pts, degree, cutoff)?;
            Ok(Check {
                matched: census.partial_sum <= mass && mass <= &census.partial_sum + &census.tail_bound,
                expected: to_value(&mass),
                observed: to_value(&census.partial_sum),
                tail_bound: Some(census.tail_bound),
                details: Some(json!({ "rows": census.rows.len(), "marked_points": point_names(&pts) })),
            })
        }
        Verify::Hom { field: Field { q }, twists, marked } => {
            let t = SplittingType::new(twists)?;
            let pts = points(q, &marked)?;
            let r = t.rank();
            let chi = t.degree() + r as i64;
            let expected = parsiegel::hom_inj_factor(r, q, pts.len()) * qpow(q, r as i64 * chi);
            let observed = Rational::from(hom_inj_count_p1(q, &t, &pts)?);
            Ok(Check {
                matched: expected == observed,
                expected: to_value(&expected),
                observed: to_value(&observed),
                tail_bound: None,
                details: Some(json!({
                    "bundle": t.to_string(),
                    "twisted_enough": lemma_conditions_hold(&t, pts.len()),
                })),
            })
        }
        Verify::Lemma22 { field: Field { q }, dim, s, trials, seed } => {
            let report = hyperplane_avoid_count(q, dim, s, trials, seed)?;
            Ok(Check {
                matched: report.count == report.formula,
                expected: json!(report.formula.to_string()),
                observed: json!(report.count.to_string()),
                tail_bound: None,
                details: Some(json!({
                    "trial_counts": report.trial_counts.iter().map(u64::to_string).collect::<Vec<_>>(),
                })),
            })
        }
        Verify::Eq8 { field: Field { q }, rank, degree, marked, parabolic, cutoff } => {
            check_rank(rank)?;
            let pts = points(q, &marked)?;
            let data = match parabolic {
                Some(path) => read_json(&path)?,
                None => QuasiParabolicData::trivial(rank, pts.len()),
            };
            let cutoff = cutoff.unwrap_or(degree as i64);
            let balance = eq8_balance_check(q, rank, degree, &pts, &data, cutoff)?;
            Ok(Check {
                matched: balance.lhs == balance.rhs,
                expected: to_value(&balance.lhs),
                observed: to_value(&balance.rhs),
                tail_bound: None,
                details: Some(json!({ "complete": balance.complete })),
            })
        }
    }
}

fn print(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("report types serialize");
    // A closed pipe is not worth a panic.
    let _ = writeln!(io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = write!(io::stdout().lock(), "{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            print(&json!({ "error": "UsageError", "detail": e.to_string().trim_end() }));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Report(value)) => {
            print(&value);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Check(check)) => {
            print(&check);
            if check.matched {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            print(&json!({ "error": e.kind(), "detail": e.to_string() }));
            match e {
                Error::OracleMismatch(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
