//! `wpvol`: tight Weil–Petersson volumes, moment geometry and JT correlators from the command line.

mod cache;
mod check;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wpvol::geometry::decomposition::{extract_tight, TightTables, VTable};
use wpvol::geometry::formal::{formal_moments, tight_series, FormalInput};
use wpvol::geometry::moments::moments;
use wpvol::geometry::weight::{Mode, Weight};
use wpvol::jt::{fzzt_partition, jt_partition, tight_slots, JtRequest};
use wpvol::kernel::{tight_volume, wp_volume};
use wpvol::nrec::{p_poly, psi_intersection, IntersectionTable};
use wpvol::ring::MPoly;
use wpvol::volume::{check_stable, prefactor_exponent};
use wpvol::Error;

use cache::{Cache, Key, Kind};
use render::{pretty, render, Format, Labelled};

#[derive(Parser)]
#[command(name = "wpvol", version, about = "Tight Weil-Petersson volumes, moment geometry and JT correlators")]
struct Cli {
    /// Bypass the on-disk cache (location: $WP_CACHE_DIR, else $XDG_CACHE_HOME/wpvol or ~/.cache/wpvol).
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Wp,
    Moments,
    Beta,
}

impl BasisArg {
    fn name(self) -> &'static str {
        match self {
            BasisArg::Wp => "wp",
            BasisArg::Moments => "moments",
            BasisArg::Beta => "beta",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Volume polynomial of a stable (g, n).
    Volumes {
        #[arg(short)]
        g: u32,
        #[arg(short)]
        n: u32,
        /// wp: classical V_{g,n}; moments: P_{g,n} with prefactor M0^-(2g-2+n); beta: T_{g,n} in reverse moments.
        #[arg(long, value_enum, default_value = "wp")]
        basis: BasisArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tight volume T_{g,n}, its fixed-defect pieces T_{g,n,p}, or its value for a weight file.
    Tight {
        #[arg(short)]
        g: u32,
        #[arg(short)]
        n: u32,
        /// Number of sharp defects p: prints T_{g,n,p} extracted from classical volumes.
        #[arg(long, conflicts_with = "mu")]
        defects: Option<u32>,
        /// Weight file (JSON): prints T_{g,n}(L; mu] numerically, or as a series in formal mode.
        #[arg(long)]
        mu: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "moments")]
        basis: BasisArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Runs identity suites and prints a JSON report; exit status 1 on any failure.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: check::Suite,
        /// Largest 2g-2+n examined by the paths and string-dilaton suites.
        #[arg(long, default_value_t = 6)]
        max_complexity: u32,
    },
    /// Root R, moments M_k, times t_k and reverse moments beta_k of a weight file.
    Moments {
        #[arg(long)]
        mu: PathBuf,
        /// Highest moment index.
        #[arg(short, default_value_t = 4)]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// JT partition function Z_{g,n}(beta_1..beta_n), optionally with a defect gas or FZZT brane.
    ///
    /// Weight files take cone angles in (0, pi); a JT defect of angle 2 pi alpha is the cone
    /// with angle 2 pi alpha.
    Jt {
        #[arg(short)]
        g: u32,
        /// Asymptotic boundary lengths, one per boundary.
        #[arg(long = "beta", required = true, num_args = 1..)]
        betas: Vec<f64>,
        #[arg(long)]
        mu: Option<PathBuf>,
        /// Topological coupling, entering only the reported prefactor e^{-S0(2g+n-2)}.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        s0: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// psi-class intersection numbers.
    Intersections {
        #[arg(short)]
        g: u32,
        /// A single correlator <tau_d1 ... tau_dn>_g.
        #[arg(short, value_delimiter = ',')]
        d: Option<Vec<u32>>,
        /// Table of all nonzero correlators with at most this many insertions.
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

enum Failure {
    Check(String),
    Usage(String),
    Input(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) | Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Input(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unstable { .. } | Error::OutOfRange { .. } => Failure::Usage(e.to_string()),
            Error::InvalidWeight { .. } => Failure::Input(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn load_weight(path: &Path) -> Result<Weight, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Weight::from_json_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn stable(g: u32, n: u32) -> Result<(), Failure> {
    check_stable(g, n).map_err(Failure::from)
}

fn exact_poly(cache: &Cache, g: u32, n: u32, basis: BasisArg) -> Result<MPoly, Failure> {
    let (kind, compute): (Kind, Box<dyn FnOnce() -> wpvol::Result<MPoly>>) = match basis {
        BasisArg::Wp => (Kind::V, Box::new(move || Ok(wp_volume(g, n)?.poly))),
        BasisArg::Moments => (Kind::P, Box::new(move || Ok(p_poly(g, n)?.poly.clone()))),
        BasisArg::Beta => (Kind::T, Box::new(move || Ok(tight_volume(g, n)?.poly.clone()))),
    };
    Ok(cache.get_or_compute(&Key::new(kind, g, n).with_basis(basis.name()), compute)?)
}

fn cmd_volumes(cache: &Cache, g: u32, n: u32, basis: BasisArg, format: Format) -> Outcome {
    stable(g, n)?;
    let poly = exact_poly(cache, g, n, basis)?;
    let prefactor = (basis == BasisArg::Moments).then(|| prefactor_exponent(g, n));
    let kind = match basis {
        BasisArg::Wp => "V",
        BasisArg::Moments => "P",
        BasisArg::Beta => "T",
    };
    Ok(render(&Labelled { kind, g, n, p: None, basis: basis.name(), prefactor, poly: &poly }, format))
}

fn cmd_tight(cache: &Cache, g: u32, n: u32, defects: Option<u32>, mu: Option<&Path>, basis: BasisArg, format: Format) -> Outcome {
    stable(g, n)?;
    if let Some(p) = defects {
        let key = Key::new(Kind::Tgnp, g, n).with_p(p).with_basis("wp");
        let tables: TightTables = cache.get_or_compute(&key, || extract_tight(&VTable::classical(g, n, p)?, g, n, p))?;
        let poly = &tables.t[p as usize];
        return Ok(render(&Labelled { kind: "T", g, n, p: Some(p), basis: "wp", prefactor: None, poly }, format));
    }
    if let Some(path) = mu {
        return tight_for_weight(g, n, &load_weight(path)?, format);
    }
    if basis == BasisArg::Wp {
        return Err(Failure::Usage("tight volumes are printed in the moments or beta basis".into()));
    }
    let poly = exact_poly(cache, g, n, basis)?;
    let prefactor = (basis == BasisArg::Moments).then(|| prefactor_exponent(g, n));
    Ok(render(&Labelled { kind: "T", g, n, p: None, basis: basis.name(), prefactor, poly: &poly }, format))
}

fn tight_for_weight(g: u32, n: u32, weight: &Weight, format: Format) -> Outcome {
    let k = (3 * g + n - 3) as usize;
    if let Mode::Formal(order) = weight.mode {
        let md = formal_moments(&FormalInput::from_weight(weight)?, order, k)?;
        let series = tight_series(&*tight_volume(g, n)?, &md)?;
        let coeffs: Vec<&MPoly> = series.coeffs().iter().collect();
        return Ok(match format {
            Format::Json => pretty(&json!({ "g": g, "n": n, "order": order, "coefficients": coeffs })),
            Format::Latex => join_orders(&coeffs, |c| c.to_latex()),
            _ => join_orders(&coeffs, |c| c.to_string()),
        });
    }
    let (md, root) = moments(weight, k)?;
    let slots = tight_slots(g, n, &md)?;
    let terms: Vec<Value> = slots.terms.iter().map(|(e, c)| json!({ "exponents": e, "coeff": c })).collect();
    Ok(match format {
        Format::Json => pretty(&json!({ "g": g, "n": n, "R": root.r, "terms": terms })),
        _ => {
            let mut out = format!("R = {:e}", root.r);
            for (e, c) in &slots.terms {
                let mono: Vec<String> =
                    e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, x)| format!("b{}^{x}", i + 1)).collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
                out.push_str(&format!("\n{c:e}  {mono}"));
            }
            out
        }
    })
}

fn join_orders(coeffs: &[&MPoly], f: impl Fn(&MPoly) -> String) -> String {
    coeffs.iter().enumerate().map(|(p, c)| format!("w^{p}: {}", f(c))).collect::<Vec<_>>().join("\n")
}

fn cmd_check(suite: check::Suite, max_complexity: u32) -> Outcome {
    let report = check::run(suite, max_complexity);
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if report.passed {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

fn cmd_moments(path: &Path, k: usize, format: Format) -> Outcome {
    let weight = load_weight(path)?;
    if let Mode::Formal(order) = weight.mode {
        let md = formal_moments(&FormalInput::from_weight(&weight)?, order, k)?;
        let list = |v: &[wpvol::ring::TruncSeries<MPoly>]| -> Vec<Vec<String>> {
            v.iter().map(|s| s.coeffs().iter().map(|c| c.to_string()).collect()).collect()
        };
        let r: Vec<String> = md.r.coeffs().iter().map(|c| c.to_string()).collect();
        let v = json!({ "order": order, "R": r, "M": list(&md.m), "t": list(&md.t), "beta": list(&md.beta) });
        return Ok(pretty(&v));
    }
    let (md, root) = moments(&weight, k)?;
    let v = json!({
        "R": root.r,
        "residual": root.residual,
        "newton_iterations": root.iterations,
        "M": md.m,
        "t": md.t,
        "beta": md.beta,
    });
    Ok(match format {
        Format::Json => pretty(&v),
        _ => {
            let mut out = format!("R = {:e} (|Z(R)| = {:e})", root.r, root.residual);
            for j in 0..=k {
                out.push_str(&format!("\nM{j} = {:e}  t{j} = {:e}  beta{j} = {:e}", md.m[j], md.t[j], md.beta[j]));
            }
            out
        }
    })
}

fn cmd_jt(g: u32, betas: Vec<f64>, mu: Option<&Path>, s0: f64, format: Format) -> Outcome {
    let weight = match mu {
        Some(p) => load_weight(p)?,
        None => Weight::zero(),
    };
    let n = betas.len() as u32;
    if !(wpvol::volume::is_stable(g, n) || (g, n) == (0, 2)) {
        return Err(Failure::Usage(format!("JT partition functions need stable (g, n) or (0, 2), got ({g}, {n})")));
    }
    let req = JtRequest { g, betas, weight, s0 };
    let res = if req.weight.fzzt.is_some() { fzzt_partition(&req)? } else { jt_partition(&req)? };
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(&res).expect("result serializes")),
        _ => format!("{:e}  (times e^(-S0*{}), R = {:e})", res.value, res.prefactor_exponent, res.r),
    })
}

fn cmd_intersections(cache: &Cache, g: u32, d: Option<Vec<u32>>, max_n: u32, format: Format) -> Outcome {
    if let Some(d) = d {
        let v = psi_intersection(g, &d);
        let s = wpvol::ring::rational::to_string(&v);
        return Ok(match format {
            Format::Json => pretty(&json!({ "g": g, "d": d, "value": s })),
            _ => s,
        });
    }
    let key = Key::new(Kind::Intersection, g, max_n);
    let table: Value = cache.get_or_compute(&key, || Ok::<_, Error>(IntersectionTable::for_genus(g, max_n).to_json()))?;
    let table = IntersectionTable::from_json(&table)?;
    Ok(match format {
        Format::Json => pretty(&table.to_json()),
        Format::Csv => {
            let mut out = String::from("g,d,value");
            for ((g, d), v) in &table.entries {
                let d: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("\n{g},{},{}", d.join(" "), wpvol::ring::rational::to_string(v)));
            }
            out
        }
        _ => table
            .entries
            .iter()
            .map(|((g, d), v)| {
                let taus: Vec<String> = d.iter().map(|x| format!("tau_{x}")).collect();
                format!("<{}>_{g} = {}", taus.join(" "), wpvol::ring::rational::to_string(v))
            })
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn run(cli: Cli) -> Outcome {
    let cache = if cli.no_cache { Cache::disabled() } else { Cache::from_env() };
    match cli.command {
        Command::Volumes { g, n, basis, format } => cmd_volumes(&cache, g, n, basis, format),
        Command::Tight { g, n, defects, mu, basis, format } => cmd_tight(&cache, g, n, defects, mu.as_deref(), basis, format),
        Command::Check { suite, max_complexity } => cmd_check(suite, max_complexity),
        Command::Moments { mu, k, format } => cmd_moments(&mu, k, format),
        Command::Jt { g, betas, mu, s0, format } => cmd_jt(g, betas, mu.as_deref(), s0, format),
        Command::Intersections { g, d, max_n, format } => cmd_intersections(&cache, g, d, max_n, format),
    }
}

/// Writes `text` to stdout; a closed pipe is not an error.
fn emit(text: &str, code: ExitCode) -> ExitCode {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        _ => code,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(out) => emit(&out, ExitCode::SUCCESS),
        Err(Failure::Check(report)) => emit(&report, ExitCode::from(1)),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
