use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use dp4::exact::{parse_rat, RatPoly};
use dp4::pencil::Pencil;
use dp4::report::{
    parse_delta, run_analyze_corpus, run_canon, run_kummer, run_local, run_search, run_simulate, verify_lemmas,
    AnalysisReport, Config, Outcome, SimConfig,
};
use dp4::selmersim::DriverMode;
use dp4::{Error, Result};

#[derive(Parser)]
#[command(name = "dp4", version, about = "Arithmetic invariants of pencils of quadrics in P4 over Q")]
struct Cli {
    /// Seed of the single random generator used by the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Upper bound for prime searches.
    #[arg(long, global = true, default_value_t = 100_000)]
    prime_bound: u64,
    /// Node budget of each p-adic solubility search.
    #[arg(long, global = true, default_value_t = dp4::localarith::DEFAULT_EFFORT)]
    effort: usize,
    /// Primes below this bound join the bad set.
    #[arg(long, global = true, default_value_t = dp4::localarith::DEFAULT_MARGIN)]
    margin: u64,
    /// Emit JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Full report for a pencil JSON file (one object, or an array of them).
    Analyze {
        input: PathBuf,
        /// Signed cycle type for a (b, T) witness, e.g. 2'2'1; repeatable.
        #[arg(long = "class")]
        classes: Vec<String>,
    },
    /// Canonical pair of quadrics for (P, delta') and its round trip.
    Canon {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// delta' as one polynomial, or one per irreducible factor of P.
        #[arg(long, allow_hyphen_values = true)]
        delta: Vec<String>,
    },
    /// Kummer model at b, the lambda0 cover and the genus-2 curve.
    Kummer {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        a: String,
    },
    /// Search b and primes with prescribed signed Frobenius types.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: Vec<String>,
        #[arg(long = "class", required = true)]
        classes: Vec<String>,
    },
    /// Local solubility certificates at the bad places of a pencil.
    Local { input: PathBuf },
    /// Run the synthetic Selmer simulator corpus.
    Simulate {
        #[arg(long, default_value_t = 200)]
        systems: usize,
        /// Local ranks, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,2,1,2")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        twist_steps: usize,
        #[arg(long, value_enum, default_value_t = Mode::A)]
        mode: Mode,
        /// Negative control: drop one generator from every global Lagrangian.
        #[arg(long)]
        corrupt_lagrangian: bool,
    },
    /// H^1 dimensions and centralizer degrees for the transitive subgroups of S5.
    VerifyLemmas,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    A,
    B,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn parse_pencils(text: &str) -> Result<Vec<Pencil>> {
    let v: Value = serde_json::from_str(text).map_err(|_| Pencil::from_json(text).unwrap_err())?;
    match v {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| {
                Pencil::from_value(x).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("item {i}: {msg}") },
                    e => e,
                })
            })
            .collect(),
        _ => Ok(vec![Pencil::from_value(&v)?]),
    }
}

fn report_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let flags: Vec<String> = r.delta.flags.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
    out += &format!("input     sha256:{}\n", r.input_hash);
    out += &format!("P         {}\n", r.p);
    out += &format!("factors   {}\n", r.factors.join(" | "));
    let prob = if r.galois.probabilistic { " (probabilistic)" } else { "" };
    out += &format!("galois    {}{prob}\n", r.galois.label);
    out += &format!("delta     [{}]  norm square: {}\n", flags.join(", "), r.delta.norm_square);
    match &r.classification {
        Some(c) => out += &format!("class     {}\n", serde_json::to_value(c.kind).unwrap().as_str().unwrap()),
        None => out += "class     undecided\n",
    }
    if let Some(b) = r.brauer_dimension {
        out += &format!("B dim     {b}\n");
    }
    let local: Vec<String> = r
        .local
        .iter()
        .map(|c| {
            let place = match c.place {
                dp4::exact::LocalPlace::Real => "R".to_string(),
                dp4::exact::LocalPlace::Prime(p) => p.to_string(),
            };
            format!("{place}:{}", serde_json::to_value(c.verdict).unwrap().as_str().unwrap())
        })
        .collect();
    out += &format!("local     {}\n", local.join(" "));
    if let Some(w) = &r.bt_witness {
        let ps: Vec<String> = w.primes.iter().map(|p| format!("{}@{}", p.class, p.p)).collect();
        out += &format!("witness   b = {}  {}\n", w.b, ps.join(" "));
    }
    for u in &r.undecided {
        out += &format!("undecided {u}\n");
    }
    out
}

fn emit(json: bool, outcome: &Outcome, text: impl FnOnce(&Value) -> String) {
    if json {
        print!("{}", outcome.to_json());
    } else {
        print!("{}", text(&outcome.value));
        for u in &outcome.undecided {
            println!("undecided {u}");
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = Config { seed: cli.seed, prime_bound: cli.prime_bound, effort: cli.effort, margin: cli.margin };
    let outcome = match cli.verb {
        Verb::Analyze { input, classes } => {
            let pencils = parse_pencils(&read(&input)?)?;
            let results = run_analyze_corpus(&pencils, &cfg, &classes);
            let single = pencils.len() == 1;
            let mut code = 0;
            let mut values = Vec::new();
            for r in results {
                match r {
                    Ok(rep) => {
                        if !rep.undecided.is_empty() && code == 0 {
                            code = 2;
                        }
                        if !cli.json {
                            print!("{}", report_text(&rep));
                            if !single {
                                println!();
                            }
                        }
                        values.push(rep.to_value());
                    }
                    Err(e) if single => return Err(e),
                    Err(e) => {
                        code = 1;
                        if !cli.json {
                            println!("error     {e}\n");
                        }
                        values.push(serde_json::json!({ "error": e.to_string() }));
                    }
                }
            }
            if cli.json {
                let v = if single { values.pop().unwrap() } else { Value::Array(values) };
                print!("{}", pretty(&v));
            }
            return Ok(code);
        }
        Verb::Canon { poly, delta } => {
            let o = run_canon(&RatPoly::parse(&poly)?, &parse_delta(&delta)?)?;
            emit(cli.json, &o, |v| {
                let eqs: Vec<String> = v["model"]["equations"].as_array().unwrap().iter().map(|e| e.as_str().unwrap().to_string()).collect();
                format!(
                    "Q1 = {}\nQ2 = {}\npencil identity: {}\nround trip ok: {}\n",
                    eqs[0], eqs[1], v["pencil_identity"], v["roundtrip"]["ok"]
                )
            });
            o
        }
        Verb::Kummer { poly, delta, b, a } => {
            let o = run_kummer(&RatPoly::parse(&poly)?, &parse_delta(&delta)?, &parse_rat(&b)?, &parse_rat(&a)?)?;
            emit(cli.json, &o, |v| {
                let eqs: Vec<String> = v["kummer"]["equations"].as_array().unwrap().iter().map(|e| e.as_str().unwrap().to_string()).collect();
                format!(
                    "Q1 = {}\nQ2 = {}\nQ3 = {}\nlambda0 cover splits: {}\ncurve: {}\n",
                    eqs[0], eqs[1], eqs[2], v["lambda0"]["splits"], v["genus2"]["equation"].as_str().unwrap_or("")
                )
            });
            o
        }
        Verb::Search { poly, delta, classes } => {
            let o = run_search(&RatPoly::parse(&poly)?, &parse_delta(&delta)?, &classes, &cfg)?;
            emit(cli.json, &o, pretty);
            o
        }
        Verb::Local { input } => {
            let pencils = parse_pencils(&read(&input)?)?;
            let [pencil] = pencils.as_slice() else {
                return Err(Error::Invalid("local expects a single pencil".into()));
            };
            let o = run_local(pencil, &cfg)?;
            emit(cli.json, &o, |v| {
                let mut s = String::new();
                for c in v["certificates"].as_array().unwrap() {
                    s += &format!("{:<12} {}\n", c["place"].to_string(), c["verdict"].as_str().unwrap());
                }
                s
            });
            o
        }
        Verb::Simulate { systems, dims, twist_steps, mode, corrupt_lagrangian } => {
            let sim = SimConfig {
                seed: cli.seed,
                systems,
                dims,
                twist_steps,
                mode: match mode {
                    Mode::A => DriverMode::A,
                    Mode::B => DriverMode::B,
                },
                corrupt: corrupt_lagrangian,
            };
            let o = run_simulate(&sim)?;
            emit(cli.json, &o, |v| {
                format!(
                    "duality pass rate   {}\nparity pass rate    {}\nbound pass rate     {}\ndescent dims        {}\nreported failures   {}\n",
                    v["duality"]["pass_rate"],
                    v["twists"]["parity_pass_rate"],
                    v["twists"]["bound_pass_rate"],
                    v["descent"]["trace"]["dims"],
                    v["reported_failures"]
                )
            });
            o
        }
        Verb::VerifyLemmas => {
            let (rows, ok) = verify_lemmas()?;
            if cli.json {
                print!("{}", pretty(&serde_json::json!({ "rows": rows, "pass": ok })));
            } else {
                println!("{:<6} {:>5} {:>6} {:>3} {:>10} {:>7} {:>5}", "group", "order", "H1dim", "r", "expected_r", "simple", "pass");
                for r in &rows {
                    println!(
                        "{:<6} {:>5} {:>6} {:>3} {:>10} {:>7} {:>5}",
                        r.group, r.order, r.h1_dim, r.r, r.expected_r, r.simple, r.pass
                    );
                }
            }
            return Ok(if ok { 0 } else { 1 });
        }
    };
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
