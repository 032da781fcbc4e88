use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use permstat::alternating::{a_decompose, a_stat_record, g_q_fiber, restrict_f};
use permstat::covering::{f_q, fiber, FiberMethod};
use permstat::distributions::{
    distribution, distribution_even, parse_statistics, verify, FilterSpec, Theorem, VerifyConfig,
};
use permstat::numbers::{bell_q, c_q, stirling1_row, stirling2_row};
use permstat::patterns::{contains_pat_q, h_q_checked};
use permstat::{decompose, stat_record, Error, Permutation, Polynomial, SweepConfig, Q};

#[derive(Parser)]
#[command(name = "permstat", version, about = "q-statistics on symmetric and alternating groups")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for group sweeps.
    #[arg(long, global = true, env = "PERMSTAT_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Largest degree that may be enumerated.
    #[arg(long, global = true, default_value_t = 9)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    S,
    A,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Bellq,
    Stirling1,
    Stirling2,
    Cq,
    H,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Scan,
    Splice,
}

#[derive(Subcommand)]
enum Command {
    /// All q-statistics of one permutation.
    Stats {
        perm: String,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long, value_enum, default_value = "s")]
        group: Group,
    },
    /// Canonical word of a permutation.
    Decompose {
        perm: String,
        #[arg(long, value_enum, default_value = "s")]
        group: Group,
    },
    /// Generating polynomial of statistics over S_m.
    Dist {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Comma-separated statistic ids.
        #[arg(long, default_value = "inv_q")]
        stats: String,
        /// all | avoid | inverse-avoid | inv-des:B | inv-des-del:B1:B2
        #[arg(long, default_value = "all")]
        filter: String,
        /// Sum over the alternating group instead.
        #[arg(long, value_enum, default_value = "s")]
        group: Group,
    },
    /// Exhaustively check an identity at m = n + q - 1.
    Verify {
        /// Theorem id, or `all`.
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
    },
    /// Exact q-Bell, Stirling and avoidance numbers.
    Numbers {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        q: usize,
    },
    /// Images under f_q.
    Map {
        #[arg(required = true)]
        perms: Vec<String>,
        #[arg(long)]
        q: usize,
        /// Use the alternating restriction (q = 2 gives the map f).
        #[arg(long, value_enum, default_value = "s")]
        group: Group,
    },
    /// Preimage of a permutation under f_q (or g_q on the alternating group).
    Fiber {
        base: String,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value = "splice")]
        method: Method,
        #[arg(long, value_enum, default_value = "s")]
        group: Group,
    },
    /// Whether a permutation avoids Pat(q).
    Avoid {
        perm: String,
        #[arg(long)]
        q: usize,
    },
    /// h_q(m) by enumeration, cross-checked against the recurrence.
    Count {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
    },
}

enum Failure {
    Usage(String),
    Identity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Identity(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let sweep = cli
        .threads
        .map(|t| SweepConfig::with_threads(t as usize))
        .unwrap_or_default();
    let budget = cli.budget;
    let enumerable = |m: usize| {
        if m > budget {
            Err(Failure::from(Error::BudgetExceeded { m, budget }))
        } else {
            Ok(())
        }
    };
    match &cli.command {
        Command::Stats { perm, q, group } => {
            let p: Permutation = perm.parse()?;
            let q = Q::new(*q)?;
            match group {
                Group::S => {
                    let r = stat_record(&p, q);
                    render_record(&r, cli.format.unwrap_or(Format::Json))
                }
                Group::A => render_record(&a_stat_record(&p)?, cli.format.unwrap_or(Format::Json)),
            }
        }
        Command::Decompose { perm, group } => {
            let p: Permutation = perm.parse()?;
            let word = match group {
                Group::S => decompose(&p).to_string(),
                Group::A => a_decompose(&p)?.to_string(),
            };
            match cli.format.unwrap_or(Format::Text) {
                Format::Text => Ok(format!("{word}\n")),
                Format::Json => Ok(json_line(&json!({ "permutation": p, "word": word }))),
                Format::Csv => {
                    let perm_col = p.to_string();
                    csv_table(&["permutation", "word"], [[perm_col.as_str(), word.as_str()]])
                }
            }
        }
        Command::Dist { m, q, stats, filter, group } => {
            enumerable(*m)?;
            let q = Q::new(*q)?;
            let stats = parse_statistics(stats)?;
            let filter: FilterSpec = filter.parse()?;
            let poly = match group {
                Group::S => distribution(*m, q, &stats, &filter, sweep)?,
                Group::A => distribution_even(*m, q, &stats, &filter, sweep)?,
            };
            render_polynomial(&poly, cli.format.unwrap_or(Format::Text))
        }
        Command::Verify { theorem, n, q } => {
            let q = Q::new(*q)?;
            let theorems: Vec<Theorem> = if theorem == "all" {
                Theorem::ALL.to_vec()
            } else {
                vec![theorem.parse()?]
            };
            let config = VerifyConfig { budget, sweep };
            let reports = theorems
                .into_iter()
                .map(|t| verify(t, *n, q, &config))
                .collect::<Result<Vec<_>, _>>()?;
            let out = render_reports(&reports, cli.format.unwrap_or(Format::Text))?;
            if reports.iter().all(|r| r.passed()) {
                Ok(out)
            } else {
                Err(Failure::Identity(out))
            }
        }
        Command::Numbers { kind, n, k, q } => {
            let q = Q::new(*q)?;
            let values = numbers(*kind, *n, *k, q, budget, sweep)?;
            render_numbers(&values, cli.format.unwrap_or(Format::Text))
        }
        Command::Map { perms, q, group } => {
            let q = Q::new(*q)?;
            let images = perms
                .iter()
                .map(|s| {
                    let p: Permutation = s.parse()?;
                    match group {
                        Group::S => f_q(&p, q),
                        Group::A if q.get() == 2 => restrict_f(&p),
                        Group::A => {
                            if !p.is_even() {
                                return Err(Error::OddPermutation(p.to_string()));
                            }
                            f_q(&p, q)
                        }
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            render_permutations(&images, cli.format.unwrap_or(Format::Json))
        }
        Command::Fiber { base, q, method, group } => {
            let base: Permutation = base.parse()?;
            let q = Q::new(*q)?;
            let method = match method {
                Method::Scan => {
                    enumerable(base.degree() + q.get() - 1)?;
                    FiberMethod::Scan
                }
                Method::Splice => FiberMethod::Splice,
            };
            let members = match group {
                Group::S => fiber(&base, q, method).members,
                Group::A => g_q_fiber(&base, q),
            };
            render_permutations(&members, cli.format.unwrap_or(Format::Json))
        }
        Command::Avoid { perm, q } => {
            let p: Permutation = perm.parse()?;
            let q = Q::new(*q)?;
            let witness = contains_pat_q(&p, q);
            match cli.format.unwrap_or(Format::Text) {
                Format::Text => Ok(match &witness {
                    None => "avoids\n".to_string(),
                    Some(w) => format!("contains at positions {:?} then {}\n", w.positions, w.bottom),
                }),
                Format::Json => Ok(json_line(&json!({
                    "permutation": p,
                    "q": q,
                    "avoids": witness.is_none(),
                    "witness": witness,
                }))),
                Format::Csv => Err(Failure::Usage("csv output is not available for avoid".into())),
            }
        }
        Command::Count { m, q } => {
            enumerable(*m)?;
            let q = Q::new(*q)?;
            let h = h_q_checked(*m, q, budget, sweep)?;
            render_numbers(&[(None, h)], cli.format.unwrap_or(Format::Text))
        }
    }
}

fn numbers(
    kind: Kind,
    n: usize,
    k: Option<usize>,
    q: Q,
    budget: usize,
    sweep: SweepConfig,
) -> Result<Vec<(Option<usize>, BigUint)>, Failure> {
    let row = |values: Vec<BigUint>, from: usize| -> Vec<(Option<usize>, BigUint)> {
        match k {
            Some(k) => vec![(Some(k), values.get(k).cloned().unwrap_or_default())],
            None => values
                .into_iter()
                .enumerate()
                .skip(from)
                .map(|(i, v)| (Some(i), v))
                .collect(),
        }
    };
    Ok(match kind {
        Kind::Bellq => vec![(None, bell_q(n, q))],
        Kind::Stirling1 => row(stirling1_row(n), 0),
        Kind::Stirling2 => row(stirling2_row(n), 0),
        Kind::Cq => match k {
            Some(k) => vec![(Some(k), c_q(n, k, q)?)],
            None => (1..=n).map(|k| Ok((Some(k), c_q(n, k, q)?))).collect::<Result<_, Error>>()?,
        },
        Kind::H => vec![(None, h_q_checked(n, q, budget, sweep)?)],
    })
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_table<R, F>(header: &[&str], rows: R) -> Outcome
where
    R: IntoIterator<Item = F>,
    F: IntoIterator,
    F::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn render_record<T: Serialize>(record: &T, format: Format) -> Outcome {
    let value = serde_json::to_value(record).expect("serializable");
    let fields = value.as_object().expect("record is an object");
    let cell = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => items
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    };
    match format {
        Format::Json => Ok(json_line(&value)),
        Format::Text => Ok(fields
            .iter()
            .fold(String::new(), |mut out, (k, v)| {
                let _ = writeln!(out, "{k}: {}", cell(v));
                out
            })),
        Format::Csv => {
            let header: Vec<&str> = fields.keys().map(String::as_str).collect();
            let row: Vec<String> = fields.values().map(cell).collect();
            csv_table(&header, [row])
        }
    }
}

fn render_polynomial(poly: &Polynomial, format: Format) -> Outcome {
    match format {
        Format::Text => Ok(format!("{poly}\n")),
        Format::Json => Ok(json_line(poly)),
        Format::Csv => {
            let mut header: Vec<String> = (1..=poly.arity()).map(|i| format!("t{i}")).collect();
            header.push("coefficient".into());
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = poly.graded_terms().into_iter().map(|(e, c)| {
                let mut row: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                row.push(c.to_string());
                row
            });
            csv_table(&header, rows)
        }
    }
}

fn render_reports(reports: &[permstat::VerificationReport], format: Format) -> Outcome {
    match format {
        Format::Json if reports.len() == 1 => Ok(json_line(&reports[0])),
        Format::Json => Ok(json_line(&reports)),
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                if reports.len() == 1 {
                    let _ = writeln!(out, "{status}");
                } else {
                    let _ = writeln!(out, "{status} {} n={} q={} m={} checked={}", r.theorem, r.n, r.q, r.m, r.checked);
                }
                if let Some(w) = &r.witness {
                    if let Some(c) = &w.class {
                        let _ = writeln!(out, "  class: {c}");
                    }
                    if let Some(p) = &w.permutation {
                        let _ = writeln!(out, "  permutation: {p}");
                    }
                    let _ = writeln!(out, "  {}", w.detail);
                    if let (Some(l), Some(rr)) = (&w.left, &w.right) {
                        let _ = writeln!(out, "  left:  {l}");
                        let _ = writeln!(out, "  right: {rr}");
                    }
                }
            }
            Ok(out)
        }
        Format::Csv => {
            let rows = reports.iter().map(|r| {
                vec![
                    r.theorem.to_string(),
                    r.n.to_string(),
                    r.q.to_string(),
                    r.m.to_string(),
                    if r.passed() { "pass" } else { "fail" }.to_string(),
                    r.checked.to_string(),
                ]
            });
            csv_table(&["theorem", "n", "q", "m", "status", "checked"], rows)
        }
    }
}

fn render_numbers(values: &[(Option<usize>, BigUint)], format: Format) -> Outcome {
    match format {
        Format::Text => Ok(format!(
            "{}\n",
            values.iter().map(|(_, v)| v.to_string()).collect::<Vec<_>>().join(" ")
        )),
        Format::Json => {
            let items: Vec<_> = values
                .iter()
                .map(|(k, v)| match k {
                    Some(k) => json!({ "k": k, "value": v.to_string() }),
                    None => json!({ "value": v.to_string() }),
                })
                .collect();
            Ok(json_line(&items))
        }
        Format::Csv => {
            let rows = values.iter().map(|(k, v)| {
                [k.map(|k| k.to_string()).unwrap_or_default(), v.to_string()]
            });
            csv_table(&["k", "value"], rows)
        }
    }
}

fn render_permutations(perms: &[Permutation], format: Format) -> Outcome {
    match format {
        Format::Json => {
            let windows: Vec<String> = perms.iter().map(|p| p.to_string()).collect();
            Ok(json_line(&windows))
        }
        Format::Text => Ok(perms.iter().map(|p| format!("{p}\n")).collect()),
        Format::Csv => csv_table(&["permutation"], perms.iter().map(|p| [p.to_string()])),
    }
}
