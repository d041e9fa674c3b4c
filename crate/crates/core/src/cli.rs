//! Command-line front end. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code: 0 on success, 1 when a
//! verification fails, 2 on a usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::families::{
    octabasic_coeffs, prop1_measure_check, qjacobi_coeffs, qjacobi_explicit,
    qjacobi_measure_check, qlaguerre_coeffs, qlaguerre_explicit, sum2_coeffs, sum2_explicit,
    MeasureReport, SpecKind,
};
use crate::motzkin::{moment_via_paths, path_to_perm_traced, perm_to_path, WeightedMotzkinPath};
use crate::oddfamily::{
    odd_coeffs, odd_quotient_check, odd_specialization_check, restricted_count,
    theorem4_distribution, OddFamily, SymmetricChain,
};
use crate::orthopoly::{monic_sequence, moments_from_recurrence, RecurrenceCoeffs, Specialized};
use crate::permstat::{
    distribution, distributions, identity_35_violations, moment_via_permutations, Permutation,
    QDistribution, RunTerm, StatProfile,
};
use crate::polyring::Poly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "octabasic", version, about = "Octabasic Laguerre polynomials and Mahonian statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moments mu_0..mu_N of a family.
    Moments(FamilyArgs),
    /// Monic polynomials p_0..p_N of a family.
    Polys {
        #[command(flatten)]
        family: FamilyArgs,
        /// Cross-check against the closed-form expansion.
        #[arg(long)]
        explicit: bool,
    },
    /// Distribution of a statistic over S_n, compared with n!_q.
    Stats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum, default_value = "text")]
        format: StatsFormat,
    },
    /// Exhaustive verification of one identity for n up to a bound.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// The path/permutation bijection.
    Bijection {
        #[command(subcommand)]
        direction: Direction,
    },
    /// Numeric moment check of a discrete measure.
    Measure {
        #[arg(value_enum)]
        which: MeasureKind,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 80)]
        truncate: usize,
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[arg(long, default_value_t = 0)]
        alpha: u32,
    },
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_parser = parse_spec)]
    spec: Option<SpecKind>,
    #[arg(long, default_value_t = 0)]
    alpha: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn parse_spec(s: &str) -> Result<SpecKind, String> {
    s.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Octabasic,
    Qjacobi,
    Sum2,
    Qlaguerre,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsFormat {
    Text,
    Csv,
}

/// An identity checked exhaustively at a single size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Identity35,
    Prop1,
    OddMoments,
    RestrictedCount,
}

#[derive(Debug, Subcommand)]
enum Direction {
    /// Path to permutation.
    Encode {
        #[arg(long)]
        path: String,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Permutation to path.
    Decode {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    Prop1,
    Qjacobi,
}

struct Usage(String);

type Outcome = Result<i32, Usage>;

/// Runs the command line `argv` (program name first).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = dispatch(cli.command, &mut buf);
    let _ = out.write_all(&buf);
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> Outcome {
    match command {
        Command::Moments(f) => moments_cmd(&f, out),
        Command::Polys { family, explicit } => polys_cmd(&family, explicit, out),
        Command::Stats { n, profile, format } => stats_cmd(n, &profile, format, out),
        Command::Verify { check, max_n } => verify_cmd(check, max_n, out),
        Command::Bijection { direction } => bijection_cmd(direction, out),
        Command::Measure {
            which,
            q,
            truncate,
            max_n,
            alpha,
        } => measure_cmd(which, q, truncate, max_n, alpha, out),
    }
}

fn family_name(f: &FamilyArgs) -> String {
    let mut name = format!("{:?}", f.family).to_lowercase();
    if matches!(f.family, Family::Qjacobi | Family::Qlaguerre) {
        name.push_str(&format!("(alpha={})", f.alpha));
    }
    if let Some(s) = f.spec {
        name.push_str(&format!("[{s}]"));
    }
    name
}

fn coefficients(f: &FamilyArgs) -> Result<Box<dyn RecurrenceCoeffs>, Usage> {
    if f.spec.is_some() && !matches!(f.family, Family::Octabasic | Family::Odd) {
        return Err(Usage("--spec applies only to the octabasic and odd families".into()));
    }
    if f.alpha != 0 && !matches!(f.family, Family::Qjacobi | Family::Qlaguerre) {
        return Err(Usage("--alpha applies only to qjacobi and qlaguerre".into()));
    }
    let spec = f.spec.map(|s| s.specialization());
    Ok(match (f.family, spec) {
        (Family::Octabasic, None) => Box::new(octabasic_coeffs()),
        (Family::Octabasic, Some(s)) => {
            Box::new(Specialized::new(octabasic_coeffs(), s.substitution().clone()))
        }
        (Family::Odd, None) => Box::new(odd_coeffs(SymmetricChain)),
        (Family::Odd, Some(s)) => {
            Box::new(Specialized::new(odd_coeffs(SymmetricChain), s.restricted_to_chain()))
        }
        (Family::Qjacobi, _) => Box::new(qjacobi_coeffs(f.alpha)),
        (Family::Sum2, _) => Box::new(sum2_coeffs()),
        (Family::Qlaguerre, _) => Box::new(qlaguerre_coeffs(f.alpha)),
    })
}

fn write_sequence(
    out: &mut Vec<u8>,
    f: &FamilyArgs,
    key: &str,
    symbol: &str,
    items: &[Poly],
) -> Result<(), Usage> {
    match f.format {
        Format::Text => {
            for (n, p) in items.iter().enumerate() {
                let _ = writeln!(out, "{symbol}_{n} = {p}");
            }
        }
        Format::Json => {
            let entries: Vec<_> = items
                .iter()
                .enumerate()
                .map(|(n, p)| json!({ "n": n, "poly": p }))
                .collect();
            let doc = json!({ "family": family_name(f), key: entries });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    Ok(())
}

fn moments_cmd(f: &FamilyArgs, out: &mut Vec<u8>) -> Outcome {
    let c = coefficients(f)?;
    let mu = moments_from_recurrence(&c, f.n);
    write_sequence(out, f, "moments", "mu", &mu.0)?;
    Ok(EXIT_OK)
}

fn polys_cmd(f: &FamilyArgs, explicit: bool, out: &mut Vec<u8>) -> Outcome {
    let c = coefficients(f)?;
    let polys = monic_sequence(&c, f.n);
    if !explicit {
        write_sequence(out, f, "polys", "p", &polys)?;
        return Ok(EXIT_OK);
    }
    let closed: Box<dyn Fn(u32) -> Poly> = match f.family {
        Family::Qjacobi if f.alpha == 0 => Box::new(qjacobi_explicit),
        Family::Qjacobi => {
            return Err(Usage("the qjacobi closed form is available for alpha = 0 only".into()))
        }
        Family::Sum2 => Box::new(sum2_explicit),
        Family::Qlaguerre => {
            let alpha = f.alpha;
            Box::new(move |n| qlaguerre_explicit(n, alpha))
        }
        Family::Octabasic | Family::Odd => {
            return Err(Usage("--explicit needs qjacobi, sum2 or qlaguerre".into()))
        }
    };
    let rows: Vec<(usize, bool)> = polys
        .iter()
        .enumerate()
        .map(|(n, p)| (n, closed(n as u32) == *p))
        .collect();
    match f.format {
        Format::Text => {
            for (p, (n, ok)) in polys.iter().zip(&rows) {
                let _ = writeln!(out, "p_{n} = {p}\t{}", verdict(*ok));
            }
        }
        Format::Json => {
            let entries: Vec<_> = polys
                .iter()
                .zip(&rows)
                .map(|(p, (n, ok))| json!({ "n": n, "poly": p, "explicit_matches": ok }))
                .collect();
            let doc = json!({ "family": family_name(f), "polys": entries });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    Ok(exit_for(rows.iter().all(|r| r.1)))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn stats_cmd(n: usize, profile: &str, format: StatsFormat, out: &mut Vec<u8>) -> Outcome {
    let profile: StatProfile = profile.parse().map_err(|e| Usage(format!("{e}")))?;
    if n == 0 || n > 10 {
        return Err(Usage("--n must lie in 1..=10".into()));
    }
    let dist = distribution(n, &profile);
    let ok = dist.is_qfactorial(n);
    match format {
        StatsFormat::Csv => {
            let _ = out.write_all(dist.to_csv().as_bytes());
        }
        StatsFormat::Text => {
            let _ = writeln!(out, "profile: {profile}");
            let _ = writeln!(out, "sum over S_{n}: {}", dist.to_poly());
            let _ = writeln!(out, "equals {n}!_q: {}", verdict(ok));
        }
    }
    Ok(EXIT_OK)
}

pub fn default_max_n(check: Check) -> usize {
    match check {
        Check::Theorem1 | Check::OddMoments | Check::Prop1 => 6,
        Check::Theorem2 | Check::Theorem3 => 9,
        Check::Theorem4 | Check::Identity35 => 8,
        Check::RestrictedCount => 7,
    }
}

/// Largest `n` accepted by [`verify_at`].
pub fn max_allowed(check: Check) -> usize {
    match check {
        Check::Theorem1 => 7,
        Check::Theorem2 | Check::Theorem3 | Check::Theorem4 | Check::Identity35 => 10,
        Check::Prop1 => 8,
        Check::OddMoments => 8,
        Check::RestrictedCount => 9,
    }
}

fn all_qfactorial(n: usize, dists: &[QDistribution]) -> bool {
    dists.iter().all(|d| d.is_qfactorial(n))
}

/// The sixteen coefficient variants, each with shifts `0, +-1, +-2`.
pub fn theorem_profiles(run_term: RunTerm) -> Vec<StatProfile> {
    StatProfile::sixteen_variants(run_term)
        .into_iter()
        .flat_map(|p| [0, -2, -1, 1, 2].map(|c| p.with_shift(c)))
        .collect()
}

pub fn verify_at(check: Check, n: usize) -> bool {
    match check {
        Check::Theorem1 => {
            let perms = moment_via_permutations(n);
            perms == moment_via_paths(n) && perms == moments_from_recurrence(&octabasic_coeffs(), n)[n]
        }
        Check::Theorem2 => all_qfactorial(n, &distributions(n, &theorem_profiles(RunTerm::NMinusRun))),
        Check::Theorem3 => all_qfactorial(n, &distributions(n, &theorem_profiles(RunTerm::RunMinusOne))),
        Check::Theorem4 => [RunTerm::RunMinusOne, RunTerm::NMinusRun]
            .into_iter()
            .all(|t| theorem4_distribution(n, t).is_qfactorial(n)),
        Check::Identity35 => identity_35_violations(n) == 0,
        Check::Prop1 => [0.3, 0.5].into_iter().all(|q| {
            prop1_measure_check(q, 80, n as u32).per_n[n].rel_error < crate::families::MEASURE_TOLERANCE
                && qjacobi_measure_check(0, q, 80, n as u32).per_n[n].rel_error
                    < crate::families::MEASURE_TOLERANCE
        }),
        Check::OddMoments => {
            odd_quotient_check(SymmetricChain, n).unwrap_or(false)
                && OddFamily::ALL
                    .into_iter()
                    .all(|w| odd_specialization_check(w, n))
        }
        Check::RestrictedCount => restricted_count(n) == (1..=n as u64).product::<u64>(),
    }
}

fn verify_cmd(check: Check, max_n: Option<usize>, out: &mut Vec<u8>) -> Outcome {
    let max_n = max_n.unwrap_or_else(|| default_max_n(check));
    if max_n > max_allowed(check) {
        return Err(Usage(format!(
            "--max-n {max_n} is above the supported bound {}",
            max_allowed(check)
        )));
    }
    let first = match check {
        Check::Prop1 | Check::OddMoments => 0,
        _ => 1,
    };
    let name = check
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let _ = writeln!(out, "{name}\nn\tresult");
    let mut all = true;
    for n in first..=max_n {
        let ok = verify_at(check, n);
        all &= ok;
        let _ = writeln!(out, "{n}\t{}", verdict(ok));
    }
    Ok(exit_for(all))
}

#[derive(Serialize)]
struct BijectionDoc {
    permutation: String,
    runs: String,
    path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<String>>,
}

fn bijection_cmd(direction: Direction, out: &mut Vec<u8>) -> Outcome {
    let (path, sigma, trace, format, decoded) = match direction {
        Direction::Encode {
            path,
            trace,
            format,
        } => {
            let path: WeightedMotzkinPath = path.parse().map_err(|e| Usage(format!("{e}")))?;
            let (sigma, _) = path_to_perm_traced(&path).map_err(|e| Usage(format!("{e}")))?;
            (path, sigma, trace, format, false)
        }
        Direction::Decode {
            perm,
            trace,
            format,
        } => {
            let sigma: Permutation = perm.parse().map_err(|e| Usage(format!("{e}")))?;
            (perm_to_path(&sigma), sigma, trace, format, true)
        }
    };
    let steps = if trace {
        let (_, steps) = path_to_perm_traced(&path).expect("path is valid");
        Some(steps.iter().map(|s| s.render()).collect::<Vec<_>>())
    } else {
        None
    };
    match format {
        Format::Json => {
            let doc = BijectionDoc {
                permutation: sigma.to_string(),
                runs: sigma.with_bars(),
                path: path.to_string(),
                trace: steps,
            };
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Text => {
            if decoded {
                let _ = writeln!(out, "{path}");
            } else {
                let _ = writeln!(out, "{sigma}");
            }
            for line in steps.unwrap_or_default() {
                let _ = writeln!(out, "{line}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn measure_cmd(
    which: MeasureKind,
    q: f64,
    truncate: usize,
    max_n: u32,
    alpha: u32,
    out: &mut Vec<u8>,
) -> Outcome {
    if !(q > 0.0 && q < 1.0) {
        return Err(Usage("--q must lie strictly between 0 and 1".into()));
    }
    if truncate > 200 || max_n > 8 {
        return Err(Usage("--truncate is limited to 200 and --max-n to 8".into()));
    }
    let report: MeasureReport = match which {
        MeasureKind::Prop1 if alpha != 0 => {
            return Err(Usage("--alpha applies only to the qjacobi measure".into()))
        }
        MeasureKind::Prop1 => prop1_measure_check(q, truncate, max_n),
        MeasureKind::Qjacobi => qjacobi_measure_check(alpha, q, truncate, max_n),
    };
    let _ = writeln!(out, "{}", report.to_json());
    Ok(exit_for(report.pass))
}
