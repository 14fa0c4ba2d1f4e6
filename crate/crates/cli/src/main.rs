use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use powerop::classfn::{power_mod_transfer, power_op, ClassFunction, CoeffRepr, CoeffValue};
use powerop::classify::{ClassKey, Domain};
use powerop::groups::DEFAULT_CAP;
use powerop::isogeny::{build_power_section, is_power_section, PowerSectionCheck, Section};
use powerop::oracle::{log_floor, run_suite, verify_bijection, SuiteOptions, VerificationReport, SUITES};
use powerop::padic::{enumerate_subgroups, Context, FiniteSubgroup};
use powerop::Error;

#[derive(Parser, Debug)]
#[command(name = "powerop", version, about = "Exact power operations on class functions of wreath products")]
struct Cli {
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest group, unit group or wreath product that may be materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the subgroups of order p^k in (Z/p^level)^n.
    Subgroups {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        /// Defaults to k.
        #[arg(long)]
        level: Option<u32>,
    },
    /// Compare the brute-force class count of G ≀ Σ_m with the number of sum data.
    Census {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Build the power section on Λ*[p^level].
    Section {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: u32,
        /// Check the composition law and exit 1 if it fails.
        #[arg(long)]
        verify: bool,
    },
    /// Write a class function: the constant 1, a delta function or a seeded random one.
    Classfn {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Kind::One)]
        kind: Kind,
        /// Index of the class for `--kind delta`, in sorted key order.
        #[arg(long, default_value_t = 0)]
        class: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate P_m on a class function file.
    Power {
        classfn: PathBuf,
        #[arg(long)]
        m: usize,
        /// `built`, or a section file.
        #[arg(long, default_value = "built")]
        section: String,
        /// Only the values on single-summand classes, i.e. P_m modulo transfers.
        #[arg(long)]
        mod_transfer: bool,
    },
    /// Run an oracle suite over its parameter grid.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random class functions per instance.
        #[arg(long, default_value_t = 20)]
        functions: usize,
        /// Run the global power check on the shipped mutated sections.
        #[arg(long)]
        mutated: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    One,
    Delta,
    Random,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precision(_) | Error::SizeCap { .. } => 3,
            Error::Internal(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

type CliResult<T> = Result<T, Failure>;

/// What a command produced: the primary output and whether its check passed.
struct Outcome {
    body: String,
    notes: Vec<String>,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &outcome.body).map(|_| {
                    for line in &outcome.notes {
                        println!("{line}");
                    }
                }),
                None => {
                    for line in &outcome.notes {
                        eprintln!("{line}");
                    }
                    print!("{}", outcome.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Subgroups { p, n, k, level } => cmd_subgroups(cli.format, *p, *n, *k, level.unwrap_or(*k)),
        Command::Census { group, p, n, m } => cmd_census(cli.format, group, *p, *n, *m, cli.cap),
        Command::Section { p, n, level, verify } => cmd_section(*p, *n, *level, *verify),
        Command::Classfn { group, p, n, level, kind, class, seed } => {
            cmd_classfn(group, *p, *n, *level, *kind, *class, *seed, cli.cap)
        }
        Command::Power { classfn, m, section, mod_transfer } => {
            cmd_power(classfn, *m, section, *mod_transfer, cli.cap)
        }
        Command::Verify { suite, group, p, n, m, k, t, l, seed, functions, mutated } => {
            let o = SuiteOptions {
                group: group.clone(),
                p: *p,
                n: *n,
                m: *m,
                l: *l,
                k: *k,
                t: *t,
                seed: *seed,
                functions: *functions,
                mutated: *mutated,
                cap: cli.cap,
            };
            cmd_verify(cli.format, suite, &o)
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct SubgroupTable {
    p: u64,
    n: usize,
    level: u32,
    k: u32,
    count: usize,
    subgroups: Vec<SubgroupRow>,
}

#[derive(Serialize)]
struct SubgroupRow {
    generators: Vec<Vec<i64>>,
    subgroup: FiniteSubgroup,
}

fn cmd_subgroups(format: Format, p: u64, n: usize, k: u32, level: u32) -> CliResult<Outcome> {
    if k > level {
        return Err(Error::invalid(format!("order p^{k} does not fit in level {level}")).into());
    }
    let ctx = Context::new(p, n, level)?;
    let subs = enumerate_subgroups(&ctx, k);
    let rows: Vec<SubgroupRow> = subs
        .into_iter()
        .map(|h| SubgroupRow { generators: h.generators().into_iter().map(|v| v.coords).collect(), subgroup: h })
        .collect();
    let body = match format {
        Format::Json => json_line(&SubgroupTable { p, n, level, k, count: rows.len(), subgroups: rows })?,
        Format::Csv => {
            let mut s = format!("# p={p} n={n} level={level} k={k} count={}\nsubgroup,generators\n", rows.len());
            for r in &rows {
                let gens: Vec<String> = r
                    .generators
                    .iter()
                    .map(|g| g.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                writeln!(s, "{},{}", csv_field(&r.subgroup.to_string()), csv_field(&gens.join(";"))).unwrap();
            }
            s
        }
    };
    Ok(Outcome { body, notes: vec![], pass: true })
}

#[derive(Serialize)]
struct CensusRow {
    group: String,
    p: u64,
    n: usize,
    m: usize,
    brute_force: u64,
    sum_data: u64,
    #[serde(rename = "match")]
    matches: bool,
    report: VerificationReport,
}

fn cmd_census(format: Format, group: &str, p: u64, n: usize, m: usize, cap: usize) -> CliResult<Outcome> {
    if m == 0 {
        return Err(Error::invalid("m must be positive").into());
    }
    let report = verify_bijection(group, p, n, m, cap)?;
    let row = CensusRow {
        group: group.to_string(),
        p,
        n,
        m,
        brute_force: report.counts.get("brute_classes").copied().unwrap_or(0),
        sum_data: report.counts.get("sum_data").copied().unwrap_or(0),
        matches: report.pass,
        report,
    };
    let body = match format {
        Format::Json => json_line(&row)?,
        Format::Csv => format!(
            "group,p,n,m,brute_force,sum_data,match\n{},{p},{n},{m},{},{},{}\n",
            csv_field(group),
            row.brute_force,
            row.sum_data,
            row.matches
        ),
    };
    Ok(Outcome { notes: vec![row.report.summary()], pass: row.matches, body })
}

fn cmd_section(p: u64, n: usize, level: u32, verify: bool) -> CliResult<Outcome> {
    let ctx = Context::new(p, n, level.max(1))?;
    let s = build_power_section(&ctx, level)?;
    let mut notes = vec![format!("section on Λ*[{p}^{level}] for n={n}: {} subgroups", s.len())];
    let mut pass = true;
    if verify {
        match is_power_section(&s)? {
            PowerSectionCheck::Pass => notes.push("PASS power section".to_string()),
            PowerSectionCheck::Fail { sub, sup } => {
                pass = false;
                notes.push(format!("FAIL power section at H = {sub} inside T = {sup}"));
            }
        }
    }
    Ok(Outcome { body: s.to_json()? + "\n", notes, pass })
}

#[allow(clippy::too_many_arguments)]
fn cmd_classfn(group: &str, p: u64, n: usize, level: u32, kind: Kind, class: usize, seed: u64, cap: usize) -> CliResult<Outcome> {
    let ctx = Context::new(p, n, level)?;
    let domain = Domain::parse(&ctx, group, cap)?;
    let f = match kind {
        Kind::One => ClassFunction::constant(&domain, &CoeffValue::one())?,
        Kind::Delta => {
            let keys = domain.class_keys()?;
            let key = keys
                .get(class)
                .ok_or_else(|| Error::invalid(format!("class index {class} out of range: {} classes", keys.len())))?;
            ClassFunction::delta(&domain, key, &CoeffValue::one())?
        }
        Kind::Random => ClassFunction::random(&domain, &mut ChaCha8Rng::seed_from_u64(seed))?,
    };
    Ok(Outcome { body: f.to_json()? + "\n", notes: vec![], pass: true })
}

fn load_section(source: &str, ctx: &Context, m: usize) -> CliResult<Section> {
    if source == "built" {
        return Ok(build_power_section(ctx, log_floor(ctx.p(), m))?);
    }
    let s = Section::from_json(&fs::read_to_string(source)?)?;
    if s.ctx() != ctx {
        return Err(Error::invalid("the section file and the class function use different contexts").into());
    }
    Ok(s)
}

#[derive(Serialize)]
struct QuotientEntry {
    subgroup: FiniteSubgroup,
    tuple: ClassKey,
    value: CoeffRepr,
}

#[derive(Serialize)]
struct QuotientFile {
    p: u64,
    n: usize,
    level: u32,
    m: usize,
    entries: Vec<QuotientEntry>,
}

fn cmd_power(path: &PathBuf, m: usize, section: &str, mod_transfer: bool, cap: usize) -> CliResult<Outcome> {
    if m == 0 {
        return Err(Error::invalid("m must be positive").into());
    }
    let f = ClassFunction::from_json(&fs::read_to_string(path)?, cap)?;
    let ctx = *f.ctx();
    let s = load_section(section, &ctx, m)?;
    let body = if mod_transfer {
        let q = power_mod_transfer(&f, m, &s)?;
        let entries = q
            .entries
            .iter()
            .map(|(d, v)| QuotientEntry { subgroup: d.subgroup.clone(), tuple: d.tuple.clone(), value: v.to_repr(&ctx) })
            .collect();
        json_line(&QuotientFile { p: ctx.p(), n: ctx.n(), level: ctx.level(), m, entries })?
    } else {
        power_op(&f, m, &s)?.to_json()? + "\n"
    };
    Ok(Outcome { body, notes: vec![], pass: true })
}

fn cmd_verify(format: Format, suite: &str, o: &SuiteOptions) -> CliResult<Outcome> {
    let reports = run_suite(suite, o)?;
    let pass = reports.iter().all(|r| r.pass);
    let notes: Vec<String> = reports.iter().map(|r| r.summary()).collect();
    let body = match format {
        Format::Json => json_line(&reports)?,
        Format::Csv => {
            let mut s = String::from("check,pass,params,counts,witness\n");
            for r in &reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let witness = r
                    .witness
                    .as_ref()
                    .map(|w| format!("{}: {} != {}", w.class, w.left, w.right))
                    .unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    csv_field(&r.check),
                    r.pass,
                    csv_field(&params.join(" ")),
                    csv_field(&counts.join(" ")),
                    csv_field(&witness)
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome { body, notes, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::precision("x")).code, 3);
        assert_eq!(Failure::from(Error::SizeCap { what: "x".into(), needed: 2, cap: 1 }).code, 3);
        assert_eq!(Failure::from(Error::invalid("x")).code, 2);
        assert_eq!(Failure::from(Error::UnsupportedRank(3)).code, 2);
    }

    #[test]
    fn arguments_parse() {
        Cli::try_parse_from(["powerop", "verify", "relations", "--seed", "3", "--jobs", "2"]).unwrap();
        assert!(Cli::try_parse_from(["powerop", "verify", "nonsense"]).is_err());
        assert!(Cli::try_parse_from(["powerop", "subgroups", "--p", "2"]).is_err());
    }
}
