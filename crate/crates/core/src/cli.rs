//! Command-line front end. [`run`] parses `argv`, executes one subcommand
//! and returns the exit status with the report text; the binary only prints.
//!
//! Every report carries the schema tag, the tool version, the full parsed
//! run configuration and the tolerances, so [`replay`] can re-execute it.

use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{classify_by_series, classify_on, ConvergencePolicy, Recurrence};
use crate::dynamics::{self, Holds};
use crate::error::{Error, Result};
use crate::inverse_kernel::{kernel_basis, KernelOptions, RightInverse};
use crate::operators::{make_walk, BandedOp, PSeq};
use crate::seqspace::{norm, FinSeq, Lattice, Space, Tolerance};
use crate::spectral::{self, Membership};
use crate::walk_oracle::{estimate_return_mass, estimate_transition, WalkConfig};

pub const SCHEMA: &str = "markovdyn.report/v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Overrides the default absolute tolerance.
pub const TOL_ENV: &str = "MARKOVDYN_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "markovdyn", version, about = "Linear dynamics of birth-death walk operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Absolute tolerance; defaults to $MARKOVDYN_TOL, then 1e-10.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    Fhc,
    Supercyclic,
    LineBound,
    Dual,
    SymmetricDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    Obstruction,
    Scenario,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Recurrence class of the walk.
    Classify {
        #[arg(long)]
        pseq: String,
        #[arg(long, default_value = "half")]
        lattice: String,
        #[arg(long, default_value_t = 10_000)]
        horizon: usize,
        /// Skip the exact route and read the partial sums only.
        #[arg(long)]
        series_only: bool,
    },
    /// Point-spectrum membership of lambda for a constant walk.
    Spectrum {
        #[arg(long)]
        pseq: String,
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambda: Vec<String>,
        #[arg(long, default_value = "c0")]
        space: String,
        /// Probe a polar grid of this many radii in the disk |lambda| <= 2.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 16)]
        angles: usize,
    },
    /// Right inverse S^k v.
    Inverse {
        #[arg(long)]
        pseq: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// Basis of Ker W^n.
    Kernel {
        #[arg(long)]
        pseq: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50_000)]
        window: usize,
    },
    /// Check the hypotheses of a dynamical criterion.
    Certify {
        #[arg(value_enum)]
        kind: CertKind,
        #[arg(long)]
        pseq: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value = "c0")]
        space: String,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Grid size for the symmetric dual check.
        #[arg(long, default_value_t = 19)]
        points: usize,
    },
    /// Obstruction data and preset probes.
    Probe {
        #[arg(value_enum)]
        kind: ProbeKind,
        #[arg(long)]
        pseq: Option<String>,
        #[arg(long, default_value = "half")]
        lattice: String,
        /// Constant tail of y.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
        /// Finitely supported part of y.
        #[arg(long, default_value = "e0", allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[arg(long)]
        name: Option<String>,
    },
    /// Monte Carlo estimate against the exact transition probability.
    Oracle {
        #[arg(long)]
        pseq: String,
        #[arg(long, default_value = "half")]
        lattice: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also estimate the return mass at i up to this horizon.
        #[arg(long)]
        return_horizon: Option<usize>,
    },
    /// Distances from an orbit to target vectors.
    Orbit {
        #[arg(long)]
        pseq: String,
        #[arg(long, default_value = "half")]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Target vectors separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        targets: String,
        #[arg(long, default_value = "c0")]
        space: String,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[arg(long)]
        projective: bool,
        /// Report hit times below this distance and their lower density.
        #[arg(long)]
        eps: Option<f64>,
    },
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub argv: Vec<String>,
    pub command: Command,
    pub format: Format,
    pub tolerance: Tolerance,
}

/// `e3`, or comma-separated entries with an optional `@offset`.
pub fn parse_vector(s: &str, lattice: Lattice) -> Result<FinSeq> {
    let s = s.trim();
    if let Some(idx) = s.strip_prefix('e') {
        let i: i64 = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad unit vector `{s}`")))?;
        return FinSeq::unit(lattice, i);
    }
    let (body, offset) = match s.split_once('@') {
        Some((b, o)) => (
            b,
            o.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad offset in `{s}`")))?,
        ),
        None => (s, 0),
    };
    let entries = body
        .split(',')
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    FinSeq::new(lattice, offset, entries)
}

/// `3`, `-0.5`, `0.3+0.4i`, `2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    Complex64::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

fn pseq_of(s: &str) -> Result<PSeq> {
    s.parse()
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required here")))
}

fn walk(lattice: &str, pseq: &str) -> Result<BandedOp> {
    make_walk(lattice.parse()?, pseq_of(pseq)?)
}

/// A CSV table: header plus rows.
#[derive(Debug, Clone, Default)]
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }
}

struct Outcome {
    result: Value,
    table: Table,
    /// Set when the primary verdict is undetermined.
    undetermined: Option<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn label<T: Serialize>(x: &T) -> String {
    match to_value(x) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn execute(cmd: &Command, tol: &Tolerance) -> Result<Outcome> {
    match cmd {
        Command::Classify {
            pseq,
            lattice,
            horizon,
            series_only,
        } => {
            let lattice: Lattice = lattice.parse()?;
            let s = pseq_of(pseq)?;
            let policy = ConvergencePolicy::default();
            let v = if *series_only {
                lattice.ensure(Lattice::HalfLine)?;
                classify_by_series(&s, *horizon, &policy)?
            } else {
                classify_on(lattice, &s, *horizon, &policy)?
            };
            let mut table = Table::new(&["n", "s1_partial", "s2_partial"]);
            for (k, n) in v.s1.n.iter().enumerate() {
                table.push([n.to_string(), v.s1.partial_sums[k].to_string(), v.s2.partial_sums[k].to_string()]);
            }
            let undetermined = (v.verdict == Recurrence::Undetermined).then(|| {
                v.note.clone().unwrap_or_else(|| "classification undetermined".into())
            });
            Ok(Outcome {
                result: to_value(&v),
                table,
                undetermined,
            })
        }
        Command::Spectrum {
            pseq,
            lambda,
            space,
            grid,
            angles,
        } => {
            let s = pseq_of(pseq)?;
            let p = s
                .as_constant()
                .ok_or_else(|| Error::InvalidArgument("spectrum needs a constant p-sequence".into()))?;
            let space: Space = space.parse()?;
            if lambda.is_empty() && grid.is_none() {
                return Err(Error::InvalidArgument("give --lambda or --grid".into()));
            }
            let mut table = Table::new(&[
                "lambda_re", "lambda_im", "member", "case", "abs_alpha", "abs_beta", "disc_re", "disc_im",
            ]);
            let mut verdicts = Vec::new();
            let mut undetermined = None;
            for l in lambda {
                let v = spectral::point_spectrum_probe(p, parse_complex(l)?, space)?;
                if v.member == Membership::Undetermined {
                    undetermined = Some(format!("lambda = {l} lies within the band around the unit circle"));
                }
                verdicts.push(v);
            }
            let mut grid_rows = Vec::new();
            let mut radius = None;
            if let Some(radii) = grid {
                let radii = (*radii).max(1);
                for i in 0..=radii {
                    let r = 2.0 * i as f64 / radii as f64;
                    for k in 0..(*angles).max(1) {
                        let t = 2.0 * std::f64::consts::PI * k as f64 / (*angles).max(1) as f64;
                        grid_rows.push(spectral::point_spectrum_probe(p, Complex64::from_polar(r, t), space)?);
                    }
                }
                radius = Some(spectral::certified_disk_radius(p, space, radii, *angles)?);
            }
            for v in verdicts.iter().chain(&grid_rows) {
                table.push([
                    v.lambda.re.to_string(),
                    v.lambda.im.to_string(),
                    label(&v.member),
                    label(&v.case),
                    v.abs_alpha.to_string(),
                    v.abs_beta.to_string(),
                    v.discriminant.re.to_string(),
                    v.discriminant.im.to_string(),
                ]);
            }
            let det = (1.0 - p) / p;
            Ok(Outcome {
                result: json!({
                    "p": p,
                    "det_m": det,
                    "verdicts": verdicts,
                    "grid": grid_rows,
                    "certified_disk_radius": radius,
                }),
                table,
                undetermined,
            })
        }
        Command::Inverse { pseq, v, power } => {
            let op = walk("half", pseq)?;
            let v = parse_vector(v, Lattice::HalfLine)?;
            let s = RightInverse::new(&op)?;
            let mut u = v.clone();
            let mut tail_bound = 0.0_f64;
            let mut capped = false;
            for _ in 0..*power {
                let sol = s.solve(&u)?;
                tail_bound = tail_bound.max(sol.tail_bound);
                capped |= sol.capped;
                u = sol.u;
            }
            let back = op.power_apply(*power, &u)?;
            let residual = norm(&back.sub(&v)?, Space::LInf);
            let mut table = Table::new(&["index", "re", "im"]);
            for (i, z) in u.window(0, u.end()).iter().enumerate() {
                table.push([i.to_string(), z.re.to_string(), z.im.to_string()]);
            }
            Ok(Outcome {
                result: json!({
                    "power": power,
                    "coordinates": u.window(0, u.end()),
                    "residual_sup": residual,
                    "tail_bound": tail_bound,
                    "capped": capped,
                    "norm_bound": s.norm_bound(),
                }),
                table,
                undetermined: None,
            })
        }
        Command::Kernel { pseq, n, window } => {
            let op = walk("half", pseq)?;
            let opts = KernelOptions {
                window: *window,
                ..KernelOptions::default()
            };
            let b = kernel_basis(&op, *n, &opts)?;
            let mut table = Table::new(&["vector", "index", "value"]);
            for (k, v) in b.vectors.iter().enumerate() {
                for (i, z) in v.iter() {
                    table.push([k.to_string(), i.to_string(), z.re.to_string()]);
                }
            }
            let undetermined = (!b.decayed).then(|| "window filled before the coordinates decayed".to_string());
            let vectors: Vec<Vec<f64>> = b.vectors.iter().map(|v| v.re()).collect();
            Ok(Outcome {
                result: json!({
                    "n": b.n,
                    "len": b.len,
                    "decayed": b.decayed,
                    "residual": b.residual,
                    "vectors": vectors,
                }),
                table,
                undetermined,
            })
        }
        Command::Certify {
            kind,
            pseq,
            lambda,
            space,
            n_max,
            x,
            points,
        } => certify(*kind, pseq, lambda, space, *n_max, x, *points, tol),
        Command::Probe {
            kind,
            pseq,
            lattice,
            alpha,
            y,
            i,
            n_max,
            name,
        } => match kind {
            ProbeKind::Obstruction => {
                let op = walk(lattice, required(pseq, "pseq")?)?;
                let z = parse_vector(y, op.lattice())?;
                let r = dynamics::c_space_obstruction(&op, parse_complex(alpha)?, &z, *i, *n_max)?;
                let mut table = Table::new(&["n", "value_re", "value_im", "sup_norm", "ratio"]);
                for n in 0..=*n_max {
                    table.push([
                        n.to_string(),
                        r.values[n].re.to_string(),
                        r.values[n].im.to_string(),
                        r.sup_norms[n].to_string(),
                        r.ratios[n].to_string(),
                    ]);
                }
                Ok(Outcome {
                    result: to_value(&r),
                    table,
                    undetermined: None,
                })
            }
            ProbeKind::Scenario => {
                let name = required(name, "name")?;
                let r = dynamics::run_scenario(name, *n_max)?;
                Ok(Outcome {
                    table: orbit_table(&r.orbit),
                    result: to_value(&r),
                    undetermined: None,
                })
            }
        },
        Command::Oracle {
            pseq,
            lattice,
            n,
            i,
            j,
            samples,
            seed,
            return_horizon,
        } => {
            let lattice: Lattice = lattice.parse()?;
            let s = pseq_of(pseq)?;
            let op = make_walk(lattice, s.clone())?;
            let cfg = WalkConfig::new(lattice, s, *seed, *samples)?;
            let est = estimate_transition(&cfg, *n, *i, *j)?;
            let exact = op.power_entry(*n, *i, *j)?;
            let z = if est.stderr > 0.0 {
                Some((est.estimate - exact) / est.stderr)
            } else {
                None
            };
            let mut table = Table::new(&["statistic", "value"]);
            table.push(["estimate".to_string(), est.estimate.to_string()]);
            table.push(["stderr".to_string(), est.stderr.to_string()]);
            table.push(["exact".to_string(), exact.to_string()]);
            let mut ret = Value::Null;
            if let Some(h) = return_horizon {
                let e = estimate_return_mass(&cfg, *h, *i)?;
                let x = op.return_mass(*i, *h)?[*h - 1];
                table.push(["return_mass_estimate".to_string(), e.to_string()]);
                table.push(["return_mass_exact".to_string(), x.to_string()]);
                ret = json!({"horizon": h, "estimate": e, "exact": x});
            }
            Ok(Outcome {
                result: json!({
                    "estimate": est,
                    "exact": exact,
                    "z_score": z,
                    "return_mass": ret,
                }),
                table,
                undetermined: None,
            })
        }
        Command::Orbit {
            pseq,
            lattice,
            x,
            targets,
            space,
            n_max,
            projective,
            eps,
        } => {
            let op = walk(lattice, pseq)?;
            let x = parse_vector(x, op.lattice())?;
            let targets = targets
                .split(';')
                .map(|t| parse_vector(t, op.lattice()))
                .collect::<Result<Vec<_>>>()?;
            let r = dynamics::orbit_density_probe(&op, &x, &targets, space.parse()?, *n_max, *projective)?;
            let hits = match eps {
                Some(e) => {
                    let mut out = Vec::new();
                    for d in &r.distances {
                        let h = dynamics::hit_times(d, *e);
                        let density = if *n_max > 0 {
                            Some(dynamics::lower_density_estimate(&h, *n_max)?)
                        } else {
                            None
                        };
                        out.push(json!({"hit_times": h, "lower_density": density}));
                    }
                    Value::Array(out)
                }
                None => Value::Null,
            };
            let mut result = to_value(&r);
            result["hits"] = hits;
            Ok(Outcome {
                table: orbit_table(&r),
                result,
                undetermined: None,
            })
        }
    }
}

fn orbit_table(r: &dynamics::OrbitReport) -> Table {
    let mut t = Table::new(&["n", "target", "distance"]);
    for (k, d) in r.distances.iter().enumerate() {
        for (n, v) in d.iter().enumerate() {
            t.push([n.to_string(), k.to_string(), v.to_string()]);
        }
    }
    t
}

fn certificate_outcome(c: dynamics::Certificate) -> Outcome {
    let mut table = Table::new(&["trace", "n", "value"]);
    for (name, values) in &c.traces {
        for (n, v) in values.iter().enumerate() {
            table.push([name.clone(), n.to_string(), v.to_string()]);
        }
    }
    let undetermined = (c.holds == Holds::Undetermined)
        .then(|| c.reason.clone().unwrap_or_else(|| "hypotheses could not be checked".into()));
    Outcome {
        result: to_value(&c),
        table,
        undetermined,
    }
}

#[allow(clippy::too_many_arguments)]
fn certify(
    kind: CertKind,
    pseq: &Option<String>,
    lambda: &Option<String>,
    space: &str,
    n_max: Option<usize>,
    x: &Option<String>,
    points: usize,
    tol: &Tolerance,
) -> Result<Outcome> {
    let space: Space = space.parse()?;
    match kind {
        CertKind::Fhc => {
            let op = walk("half", required(pseq, "pseq")?)?;
            let lambda = parse_complex(required(lambda, "lambda")?)?;
            let c = dynamics::fhc_chaos_certificate(&op, lambda, space, n_max.unwrap_or(20), tol)?;
            Ok(certificate_outcome(c))
        }
        CertKind::Supercyclic => {
            let op = walk("half", required(pseq, "pseq")?)?;
            let c = dynamics::supercyclicity_criterion_certificate(&op, space, n_max.unwrap_or(20))?;
            Ok(certificate_outcome(c))
        }
        CertKind::LineBound => {
            let op = walk("line", required(pseq, "pseq")?)?;
            let x = parse_vector(x.as_deref().unwrap_or("e0"), Lattice::Line)?;
            let n = n_max.unwrap_or(10);
            let mut table = Table::new(&["n", "norm_image", "bound", "holds"]);
            let mut reports = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let r = dynamics::line_walk_lower_bound(&op, &x, k, space)?;
                table.push([k.to_string(), r.norm_image.to_string(), r.bound.to_string(), r.holds.to_string()]);
                reports.push(r);
            }
            let holds = reports.iter().all(|r| r.holds);
            Ok(Outcome {
                result: json!({
                    "holds": holds,
                    "threshold": reports[0].threshold,
                    "steps": reports,
                }),
                table,
                undetermined: None,
            })
        }
        CertKind::Dual => {
            let s = pseq_of(required(pseq, "pseq")?)?;
            let n = n_max.unwrap_or(400);
            let r = spectral::dual_obstruction(&s, space, n, &ConvergencePolicy::default())?;
            let u = spectral::dual_zero_eigenvector(&s, n)?;
            let mut table = Table::new(&["n", "u_n"]);
            for (k, v) in u.iter().enumerate() {
                table.push([k.to_string(), v.to_string()]);
            }
            let undetermined = (r.in_dual == Membership::Undetermined)
                .then(|| "dual eigenvector sits on the summability boundary".to_string());
            Ok(Outcome {
                result: to_value(&r),
                table,
                undetermined,
            })
        }
        CertKind::SymmetricDual => {
            let k = points.max(1);
            let grid: Vec<f64> = if k == 1 {
                vec![0.0]
            } else {
                (0..k).map(|i| -0.95 + 1.9 * i as f64 / (k - 1) as f64).collect()
            };
            let r = spectral::symmetric_dual_interval_check(&grid, n_max.unwrap_or(2000))?;
            let mut table = Table::new(&["lambda", "bounded", "max_abs_q", "bound"]);
            for row in &r.rows {
                table.push([
                    row.lambda.to_string(),
                    row.bounded.to_string(),
                    row.max_abs_q.to_string(),
                    row.bound.map(|b| b.to_string()).unwrap_or_default(),
                ]);
            }
            Ok(Outcome {
                result: to_value(&r),
                table,
                undetermined: None,
            })
        }
    }
}

fn tolerances(tol: &Tolerance) -> Value {
    json!({
        "abs": tol.abs,
        "rel": tol.rel,
        "unit_circle_band": spectral::UNIT_BAND,
        "defective_band": spectral::DEFECTIVE_BAND,
        "kernel_residual": dynamics::KERNEL_RESIDUAL,
        "inverse_residual": dynamics::INVERSE_RESIDUAL,
        "line_bound_rel": dynamics::LINE_BOUND_REL,
        "policy": ConvergencePolicy::default(),
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) => EXIT_UNDETERMINED,
        _ => EXIT_INVALID,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::LatticeMismatch { .. } => "lattice-mismatch",
        Error::NegativeIndex(_) => "negative-index",
        Error::InvalidProbability(_) => "invalid-probability",
        Error::InvalidSpace(_) => "invalid-space",
        Error::Parse(_) => "parse",
        Error::Hypothesis(_) => "hypothesis",
        Error::InvalidArgument(_) => "invalid-argument",
    }
}

fn render(envelope: &Value, table: Option<&Table>, format: Format) -> String {
    match (format, table) {
        (Format::Csv, Some(t)) => {
            let mut out = String::new();
            for key in ["schema", "tool_version", "status"] {
                out.push_str(&format!("# {key}: {}\n", envelope[key].as_str().unwrap_or_default()));
            }
            out.push_str(&format!("# config: {}\n", envelope["config"]));
            out.push_str(&format!("# tolerances: {}\n", envelope["tolerances"]));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.header).expect("in-memory write");
            for row in &t.rows {
                w.write_record(row).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv"));
            out
        }
        _ => serde_json::to_string_pretty(envelope).expect("json") + "\n",
    }
}

/// Executes a parsed configuration.
pub fn run_config(cfg: &RunConfig) -> (i32, String) {
    let base = json!({
        "schema": SCHEMA,
        "tool_version": TOOL_VERSION,
        "config": cfg,
        "tolerances": tolerances(&cfg.tolerance),
    });
    match execute(&cfg.command, &cfg.tolerance) {
        Ok(out) => {
            let mut env = base;
            let code = if out.undetermined.is_some() { EXIT_UNDETERMINED } else { EXIT_OK };
            env["status"] = json!(if code == EXIT_OK { "ok" } else { "undetermined" });
            env["reason"] = json!(out.undetermined);
            env["result"] = out.result;
            (code, render(&env, Some(&out.table), cfg.format))
        }
        Err(e) => {
            let mut env = base;
            env["status"] = json!("error");
            env["error"] = json!({"kind": error_kind(&e), "message": e.to_string()});
            (exit_code(&e), render(&env, None, Format::Json))
        }
    }
}

fn resolve_tolerance(common: &Common, env_tol: Option<String>) -> Result<Tolerance> {
    let mut tol = Tolerance::default();
    if let Some(s) = env_tol {
        tol.abs = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{TOL_ENV}={s} is not a number")))?;
    }
    if let Some(a) = common.tol {
        tol.abs = a;
    }
    if let Some(r) = common.rel_tol {
        tol.rel = r;
    }
    if !(tol.abs >= 0.0 && tol.rel >= 0.0) {
        return Err(Error::InvalidArgument("tolerances must be nonnegative".into()));
    }
    Ok(tol)
}

fn invalid(message: String) -> (i32, String) {
    let env = json!({
        "schema": SCHEMA,
        "tool_version": TOOL_VERSION,
        "status": "error",
        "error": {"kind": "usage", "message": message},
    });
    (EXIT_INVALID, serde_json::to_string_pretty(&env).expect("json") + "\n")
}

/// Parses `argv` (program name first) and runs it.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => invalid(e.to_string()),
            };
        }
    };
    let tolerance = match resolve_tolerance(&cli.common, std::env::var(TOL_ENV).ok()) {
        Ok(t) => t,
        Err(e) => return invalid(e.to_string()),
    };
    let cfg = RunConfig {
        argv,
        command: cli.command,
        format: cli.common.format,
        tolerance,
    };
    run_config(&cfg)
}

/// Re-executes the configuration embedded in a JSON report and returns the new report.
pub fn replay(report: &str) -> Result<(i32, String)> {
    let v: Value = serde_json::from_str(report).map_err(|e| Error::Parse(e.to_string()))?;
    if v["schema"] != SCHEMA {
        return Err(Error::Parse(format!("not a {SCHEMA} report")));
    }
    let cfg: RunConfig = serde_json::from_value(v["config"].clone()).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(run_config(&cfg))
}
