//! The `orbit` command line.
//!
//! ```text
//! orbit decide    <FILE> [--max-j J] [--net-cap N] [--witness-cap W] [--sweep-cap S] [--json] [--approx D]
//! orbit limitset  <FILE> [--json] [--approx D]
//! orbit distance  <FILE> --level J [--net-cap N] [--json] [--approx D]
//! orbit orbit     <FILE> --horizon H [--json] [--approx D]
//! ```
//!
//! `FILE` is an instance in the line format of [`ProblemInstance`], or `-`
//! for standard input.

use clap::{Args, Parser, Subcommand};
use orbit_core::arith::poly::Polynomial;
use orbit_core::arith::rational::approx_decimal;
use orbit_core::decide::{decide, DecideOptions, VerdictTag};
use orbit_core::distance::{Distance, NetOptions};
use orbit_core::limitset::{limit_set, LimitSetDescriptor, TorusDescriptor};
use orbit_core::oracle::orbit_prefix;
use orbit_core::{OrbitError, ProblemInstance, Rational};
use serde_json::{json, Value};
use std::io::Read;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 64;
pub const EXIT_RESOURCE: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "orbit", version, about = "Decide whether a rational matrix orbit comes within delta of a target")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the instance: YES with a witness, NO with a search bound, or UNDECIDED at the boundary.
    Decide {
        #[command(flatten)]
        common: Common,
        /// Last level of the distance bracketing.
        #[arg(long, default_value_t = 64)]
        max_j: u32,
        #[arg(long, default_value_t = NetOptions::default().net_cap)]
        net_cap: u64,
        /// Orbit points enumerated when a witness must exist, or at the boundary.
        #[arg(long, default_value_t = DecideOptions::default().witness_cap)]
        witness_cap: u64,
        /// Largest search bound swept exhaustively.
        #[arg(long, default_value_t = DecideOptions::default().sweep_cap)]
        sweep_cap: u64,
    },
    /// Describe the limit set of the orbit.
    Limitset {
        #[command(flatten)]
        common: Common,
    },
    /// Bracket the distance from y to the limit set at one level.
    Distance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = NetOptions::default().net_cap)]
        net_cap: u64,
    },
    /// Print the orbit points A^k x for k = 0..=horizon.
    Orbit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        horizon: u64,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Instance file, or `-` for standard input.
    file: String,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Add decimal approximations with this many digits.
    #[arg(long, value_name = "DIGITS")]
    approx: Option<usize>,
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match execute(cli.command) {
        Ok(r) => r,
        Err(Failure::Input(m)) => (EXIT_INPUT, format!("error: {m}")),
        Err(Failure::Resource(m)) => (EXIT_RESOURCE, format!("error: {m}")),
    }
}

enum Failure {
    Input(String),
    Resource(String),
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::ResourceCap { .. } | OrbitError::BitBudget { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &str) -> Result<ProblemInstance, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    ProblemInstance::parse(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn r(v: &Rational) -> String {
    v.to_string()
}

fn rs(v: &[Rational]) -> Vec<String> {
    v.iter().map(r).collect()
}

fn poly(p: &Polynomial) -> Vec<String> {
    rs(p.coeffs())
}

fn approx_line(digits: Option<usize>, items: &[(&str, &Rational)]) -> String {
    match digits {
        Some(d) if !items.is_empty() => {
            let parts: Vec<String> = items.iter().map(|(k, v)| format!("{k}~{}", approx_decimal(v, d))).collect();
            format!(" (approx {})", parts.join(" "))
        }
        _ => String::new(),
    }
}

fn approx_json(digits: Option<usize>, items: &[(&str, &Rational)]) -> Option<Value> {
    let d = digits?;
    let map = items.iter().map(|(k, v)| (k.to_string(), Value::String(approx_decimal(v, d)))).collect();
    Some(Value::Object(map))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn instance_json(p: &ProblemInstance) -> Value {
    json!({
        "n": p.n(),
        "A": p.a.to_rows().iter().map(|row| rs(row)).collect::<Vec<_>>(),
        "x": rs(&p.x),
        "y": rs(&p.y),
        "delta": r(&p.delta),
        "norm": p.norm,
    })
}

fn execute(cmd: Command) -> Result<(i32, String), Failure> {
    match cmd {
        Command::Decide { common, max_j, net_cap, witness_cap, sweep_cap } => {
            let p = load(&common.file)?;
            let opts = DecideOptions { norm: p.norm, j_max: max_j, net_cap, witness_cap, sweep_cap };
            let v = decide(&p.a, &p.x, &p.y, &p.delta, &opts)?;
            let code = match v.verdict {
                VerdictTag::Yes => EXIT_YES,
                VerdictTag::No => EXIT_NO,
                VerdictTag::UndecidedBoundary => EXIT_UNDECIDED,
            };
            let mut approx: Vec<(&str, &Rational)> = vec![("delta", &p.delta)];
            if let Some(b) = &v.boundary {
                approx.push(("lower", &b.lower));
                approx.push(("upper", &b.upper));
            }
            let out = if common.json {
                let mut j = json!({ "instance": instance_json(&p), "result": v });
                if let Some(a) = approx_json(common.approx, &approx) {
                    j["approx"] = a;
                }
                pretty(&j)
            } else {
                let head = match v.verdict {
                    VerdictTag::Yes => format!("YES k={}", v.witness.expect("YES carries a witness")),
                    VerdictTag::No => format!("NO bound={}", v.bound.expect("NO carries a bound")),
                    VerdictTag::UndecidedBoundary => {
                        let b = v.boundary.as_ref().expect("UNDECIDED carries a bracket");
                        format!("UNDECIDED boundary lower={} upper={}", b.lower, b.upper)
                    }
                };
                head + &approx_line(common.approx, &approx[1..])
            };
            Ok((code, out))
        }
        Command::Limitset { common } => {
            let p = load(&common.file)?;
            let d = limit_set(&p.a, &p.x)?;
            let out = match (&d, common.json) {
                (LimitSetDescriptor::Empty(g), false) => {
                    format!("EMPTY c={} N={}{}", g.c, g.n, approx_line(common.approx, &[("c", &g.c)]))
                }
                (LimitSetDescriptor::Torus(t), false) => format!(
                    "TORUS period={} free_phases={} modes={} classes={}",
                    t.period,
                    t.free_phase_count,
                    t.modes.len(),
                    t.classes.len()
                ),
                (LimitSetDescriptor::Empty(g), true) => {
                    let mut j = json!({ "kind": "empty", "growth": g });
                    if let Some(a) = approx_json(common.approx, &[("c", &g.c)]) {
                        j["approx"] = a;
                    }
                    pretty(&j)
                }
                (LimitSetDescriptor::Torus(t), true) => pretty(&torus_json(t)),
            };
            Ok((0, out))
        }
        Command::Distance { common, level, net_cap } => {
            let p = load(&common.file)?;
            let d = limit_set(&p.a, &p.x)?;
            let LimitSetDescriptor::Torus(t) = &d else {
                let out = if common.json {
                    pretty(&json!({ "kind": "empty", "distance": null }))
                } else {
                    "EMPTY limit set, no distance".to_string()
                };
                return Ok((0, out));
            };
            let b = Distance::new(t, &p.y, p.norm)
                .with_options(NetOptions { net_cap })
                .distance_upper_series(level)?;
            let approx = [("lower", &b.lower), ("upper", &b.upper)];
            let out = if common.json {
                let mut j = json!({ "kind": "torus", "distance": b });
                if let Some(a) = approx_json(common.approx, &approx) {
                    j["approx"] = a;
                }
                pretty(&j)
            } else {
                format!("DISTANCE level={} lower={} upper={}{}", b.level, b.lower, b.upper, approx_line(common.approx, &approx))
            };
            Ok((0, out))
        }
        Command::Orbit { common, horizon } => {
            let p = load(&common.file)?;
            let prefix = orbit_prefix(&p.a, &p.x, horizon);
            let out = if common.json {
                let points: Vec<Value> = prefix
                    .points
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let mut j = json!({ "k": k, "point": rs(v) });
                        if let Some(d) = common.approx {
                            j["approx"] = json!(v.iter().map(|c| approx_decimal(c, d)).collect::<Vec<_>>());
                        }
                        j
                    })
                    .collect();
                pretty(&json!({ "horizon": horizon, "points": points }))
            } else {
                let lines: Vec<String> = prefix
                    .points
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let mut line = format!("k={k} {}", rs(v).join(" "));
                        if let Some(d) = common.approx {
                            let a: Vec<String> = v.iter().map(|c| approx_decimal(c, d)).collect();
                            line += &format!(" (approx {})", a.join(" "));
                        }
                        line
                    })
                    .collect();
                lines.join("\n")
            };
            Ok((0, out))
        }
    }
}

fn torus_json(t: &TorusDescriptor) -> Value {
    let modes: Vec<Value> = t
        .modes
        .iter()
        .map(|m| {
            let b = m.eigenvalue.isolating_box();
            json!({
                "eigenvalue": {
                    "poly": poly(m.eigenvalue.poly()),
                    "re": [r(&b.re.0), r(&b.re.1)],
                    "im": [r(&b.im.0), r(&b.im.1)],
                },
                "modulus": poly(&m.modulus),
                "w": m.w.iter().map(poly).collect::<Vec<_>>(),
                "part": m.part,
                "root": m.root,
            })
        })
        .collect();
    json!({
        "kind": "torus",
        "n": t.n,
        "period": t.period,
        "free_phases": t.free_phase_count,
        "classes": t.classes,
        "modes": modes,
    })
}
