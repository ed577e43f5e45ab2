use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rankcover::bounds::{best_bounds, BoundOptions, IntersectionOracle, DEFAULT_INTERSECTION_CAP};
use rankcover::codes::{self, Code};
use rankcover::qcombinatorics as qc;
use rankcover::search::{self, JslOptions, SearchBudget};
use rankcover::{Field, DEFAULT_CAP};

mod table;

#[derive(Parser)]
#[command(name = "rankcover", version, about = "Covering codes in the rank metric: bounds, constructions, verification")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest space (number of vectors) any command will enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct CoverParams {
    #[arg(short = 'q', default_value_t = 2)]
    q: u32,
    #[arg(short = 'm')]
    m: u32,
    #[arg(short = 'n')]
    n: u32,
    /// Covering radius ρ.
    #[arg(short = 'r')]
    rho: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Every bound on K_R(q^m, n, ρ) and the best pair.
    Bound {
        #[command(flatten)]
        p: CoverParams,
        /// Closed forms only: never enumerate to obtain intersection numbers.
        #[arg(long)]
        no_brute_force: bool,
        /// Space size up to which intersection numbers are counted.
        #[arg(long, default_value_t = DEFAULT_INTERSECTION_CAP)]
        intersection_cap: u64,
        /// Also run the greedy construction (letter F).
        #[arg(long)]
        construct: bool,
        /// Node budget for the exhaustive lower bound (letter g); 0 = off.
        #[arg(long, default_value_t = 0.0)]
        exhaustive_budget: f64,
    },
    /// Bound tables over a parameter grid (optionally diffed against golden values).
    Table(table::TableArgs),
    /// Measure a code's covering radius; exit 0 iff it is ≤ ρ.
    Verify {
        file: PathBuf,
        #[arg(short = 'r')]
        rho: u32,
        /// Field when the file has no header, e.g. gf(2^4).
        #[arg(long)]
        field: Option<String>,
        /// Length when the file has no header.
        #[arg(long)]
        length: Option<u32>,
    },
    /// Build a code and write it as a skip-vector file plus a JSON certificate.
    Construct(ConstructArgs),
    /// Size of the intersection of two balls whose centers are at rank distance d.
    Intersect {
        #[arg(short = 'q', default_value_t = 2)]
        q: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'r')]
        r: u32,
        #[arg(short = 's')]
        s: u32,
        #[arg(short = 'd')]
        d: u32,
        /// Cross-check against the closed forms where one applies.
        #[arg(long)]
        closed_form: bool,
    },
    /// Ball volume, rank distribution and its two-sided bracket.
    Volume {
        #[arg(short = 'q', default_value_t = 2)]
        q: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'r')]
        r: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Mrd,
    Gabidulin,
    Jsl,
    Local,
    Embed,
}

#[derive(Args)]
struct ConstructArgs {
    method: Method,
    #[arg(short = 'q', default_value_t = 2)]
    q: u32,
    #[arg(short = 'm')]
    m: u32,
    #[arg(short = 'n')]
    n: u32,
    /// Target covering radius (jsl, local, embed).
    #[arg(short = 'r')]
    rho: Option<u32>,
    /// Minimum distance (mrd).
    #[arg(short = 'd')]
    d: Option<u32>,
    /// Dimension (gabidulin).
    #[arg(short = 'k')]
    k: Option<u32>,
    /// Extension degree added by the embedding (embed).
    #[arg(short = 'u', default_value_t = 1)]
    u: u32,
    /// Code size (local).
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Randomized restarts (jsl, local).
    #[arg(long, default_value_t = 0)]
    restarts: u32,
    /// Moves without improvement before a restart (local).
    #[arg(long, default_value_t = 2000)]
    iterations: u64,
    /// Output file (default: stdout).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Certificate path (default: the output path with a .json extension).
    #[arg(long)]
    cert: Option<PathBuf>,
}

pub(crate) enum Failure {
    /// Usage, parse or input error (exit 2).
    Usage(String),
    /// The check ran and failed (exit 1).
    Check(String),
}

impl From<rankcover::Error> for Failure {
    fn from(e: rankcover::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub(crate) type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    // die quietly on a closed pipe (`rankcover table | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.cmd {
        Cmd::Bound { p, no_brute_force, intersection_cap, construct, exhaustive_budget } => {
            let oracle = if *no_brute_force {
                IntersectionOracle::closed_form_only()
            } else {
                IntersectionOracle::with_cap(*intersection_cap)
            };
            let opts = BoundOptions {
                oracle,
                constructive_cap: if *construct { cli.cap } else { 0 },
                exhaustive_budget: *exhaustive_budget,
            };
            let report = best_bounds(p.q, p.m, p.n, p.rho, &opts)?;
            if cli.json {
                print_json(&report);
            } else {
                print!("{}", report.to_text());
            }
            Ok(())
        }
        Cmd::Table(args) => table::run(args, cli.cap, cli.json),
        Cmd::Verify { file, rho, field, length } => verify(file, *rho, field.as_deref(), *length, cli),
        Cmd::Construct(args) => construct(args, cli),
        Cmd::Intersect { q, m, n, r, s, d, closed_form } => intersect(*q, *m, *n, *r, *s, *d, *closed_form, cli),
        Cmd::Volume { q, m, n, r } => volume(*q, *m, *n, *r, cli.json),
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

#[derive(Serialize)]
struct VerifyReport {
    field: String,
    n: u32,
    size: usize,
    covering_radius: u32,
    min_distance: Option<u32>,
    rho: u32,
    pass: bool,
}

fn verify(file: &PathBuf, rho: u32, field: Option<&str>, length: Option<u32>, cli: &Cli) -> CliResult {
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let fallback = match (field, length) {
        (Some(f), Some(n)) => Some((Arc::new(Field::from_spec(f)?), n)),
        (None, None) => None,
        _ => return Err(Failure::Usage("--field and --length go together".into())),
    };
    let code = codes::parse_code_file(&text, fallback)?;
    let radius = codes::covering_radius_exhaustive(&code, cli.cap)?;
    let min_distance = codes::min_rank_distance(&code).ok();
    let report = VerifyReport {
        field: code.field().spec(),
        n: code.n(),
        size: code.len(),
        covering_radius: radius,
        min_distance,
        rho,
        pass: radius <= rho,
    };
    if cli.json {
        print_json(&report);
    } else {
        println!("code: {} words of length {} over {}", report.size, report.n, report.field);
        println!("covering radius: {radius}");
        match min_distance {
            Some(d) => println!("minimum distance: {d}"),
            None => println!("minimum distance: n/a"),
        }
        println!("{}: radius {radius} {} {rho}", if report.pass { "PASS" } else { "FAIL" }, if report.pass { "≤" } else { ">" });
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}

#[derive(Serialize)]
struct Certificate {
    method: &'static str,
    field: String,
    n: u32,
    params: serde_json::Value,
    #[serde(rename = "K")]
    k: usize,
    covering_radius: u32,
    radius_verified: bool,
    seed: Option<u64>,
}

fn construct(a: &ConstructArgs, cli: &Cli) -> CliResult {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("this method needs {flag}")));
    let (name, code, seed, target): (&str, Code, Option<u64>, Option<u32>) = match a.method {
        Method::Mrd => {
            let d = need(a.d, "-d")?;
            ("mrd", codes::mrd_construct(a.q, a.m, a.n, d)?, None, None)
        }
        Method::Gabidulin => {
            let k = need(a.k, "-k")?;
            let field = Arc::new(Field::default_or_first(a.q, a.m)?);
            ("gabidulin", codes::gabidulin_default(field, a.n, k)?, None, None)
        }
        Method::Jsl => {
            let rho = need(a.rho, "-r")?;
            let opts = JslOptions { restarts: a.restarts, seed: a.seed, cap: cli.cap, ..Default::default() };
            ("jsl", search::jsl_construct(a.q, a.m, a.n, rho, &opts)?, Some(a.seed), Some(rho))
        }
        Method::Local => {
            let rho = need(a.rho, "-r")?;
            let size = a.size.ok_or_else(|| Failure::Usage("local search needs --size".into()))?;
            let budget = SearchBudget {
                max_iterations: a.iterations,
                max_restarts: a.restarts,
                random_seed: a.seed,
                time_limit: None,
            };
            match search::local_search(a.q, a.m, a.n, rho, size, &budget)? {
                Some(c) => ("local", c, Some(a.seed), Some(rho)),
                None => return Err(Failure::Check(format!("no covering of size {size} found within the budget"))),
            }
        }
        Method::Embed => {
            // an (n, n−ρ) MRD code over GF(q^m), mapped into GF(q^{m+u})
            let rho = need(a.rho, "-r")?;
            let base = codes::mrd_construct(a.q, a.m, a.n, rho + 1)?;
            ("embed", codes::field_embed(&base, a.u)?, None, Some(rho))
        }
    };
    let radius = codes::covering_radius_exhaustive(&code, cli.cap)?;
    if let Some(t) = target {
        if radius > t {
            return Err(Failure::Check(format!("constructed code has radius {radius} > {t}")));
        }
    }
    let text = codes::format_code_file(&code);
    let cert = Certificate {
        method: name,
        field: code.field().spec(),
        n: code.n(),
        params: serde_json::json!({
            "q": a.q, "m": code.field().m(), "n": code.n(),
            "rho": target, "d": a.d, "k": a.k, "u": matches!(a.method, Method::Embed).then_some(a.u),
        }),
        k: code.len(),
        covering_radius: radius,
        radius_verified: true,
        seed,
    };
    let cert_json = serde_json::to_string_pretty(&cert).expect("serializable");
    match &a.output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let cert_path = a.cert.clone().unwrap_or_else(|| path.with_extension("json"));
            fs::write(&cert_path, &cert_json).map_err(|e| Failure::Usage(format!("{}: {e}", cert_path.display())))?;
            eprintln!("wrote {} ({} codewords, radius {radius}) and {}", path.display(), code.len(), cert_path.display());
        }
        None => {
            print!("{text}");
            if let Some(cert_path) = &a.cert {
                fs::write(cert_path, &cert_json).map_err(|e| Failure::Usage(format!("{}: {e}", cert_path.display())))?;
            } else if cli.json {
                println!("{cert_json}");
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn intersect(q: u32, m: u32, n: u32, r: u32, s: u32, d: u32, closed_form: bool, cli: &Cli) -> CliResult {
    let value = qc::intersection_bruteforce(q, m, n, r, s, d, cli.cap)?;
    let closed = if !closed_form || d == 0 || d > m.min(n) {
        None
    } else if r + s == d {
        Some(("complementary radii", qc::intersection_complementary(q, m, n, d, r)))
    } else if s == 1 && r == d {
        Some(("radius-1 ball", qc::intersection_ball_radius1(q, m, n, r)))
    } else if r == 1 && s == d {
        Some(("radius-1 ball", qc::intersection_ball_radius1(q, m, n, s)))
    } else {
        None
    };
    if cli.json {
        print_json(&serde_json::json!({
            "q": q, "m": m, "n": n, "r": r, "s": s, "d": d,
            "count": value.to_string(),
            "closed_form": closed.as_ref().map(|(_, v)| v.to_string()),
        }));
    } else {
        println!("{value}");
        if closed_form {
            match &closed {
                Some((name, v)) => println!("closed form ({name}): {v} [{}]", if *v == value { "agrees" } else { "DIFFERS" }),
                None => println!("closed form: not applicable"),
            }
        }
    }
    match closed {
        Some((_, v)) if v != value => Err(Failure::Check("closed form disagrees with the count".into())),
        _ => Ok(()),
    }
}

fn volume(q: u32, m: u32, n: u32, r: u32, json: bool) -> CliResult {
    if !rankcover::finite_field::is_prime(q as u64) {
        return Err(Failure::Usage(format!("q = {q} is not prime")));
    }
    let v = qc::ball_volume(q, m, n, r);
    let dist: Vec<String> = (0..=r.min(m).min(n)).map(|u| qc::num_rank_u(q, m, n, u).to_string()).collect();
    let b = qc::volume_bounds(q, m, n, r);
    if json {
        print_json(&serde_json::json!({
            "q": q, "m": m, "n": n, "r": r,
            "volume": v.to_string(),
            "rank_counts": dist,
            "lower": b.lower.to_string(),
            "upper": b.upper,
            "bracketed": b.brackets(&v),
        }));
    } else {
        println!("V_{r}(GF({q}^{m})^{n}) = {v}");
        for (u, c) in dist.iter().enumerate() {
            println!("  rank {u}: {c}");
        }
        println!("  {} ≤ V < {:.6e}  [{}]", b.lower, b.upper, if b.brackets(&v) { "ok" } else { "VIOLATED" });
    }
    Ok(())
}
