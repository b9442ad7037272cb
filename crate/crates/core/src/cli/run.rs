//! Argument parsing and dispatch for the `stratlab` binary.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gallery;
use super::report::{emit, Format, Report, Table};
use super::spacefile::{FormDomain, ParseErrors, SpaceFile};
use crate::actions::{hilbert_embed, orbit_type_partition, GroupAction, HilbertMap};
use crate::error::Error;
use crate::fields::{
    check_local_completeness, classify, flow, is_admissible, orbit_explore, ClassifyParams, Derivation, FlowParams,
    FlowStatus, OrbitParams,
};
use crate::forms::{find_descent_witness, is_basic, DescentOutcome};
use crate::hamiltonian::{check_sjamaar, derive_momentum_map, hamiltonian_vector_field, reduced_strata, zero_level};
use crate::poly::{format_rational, parse_rational, sample::random_point};
use crate::Rational;

#[derive(Debug, Parser)]
#[command(name = "stratlab", version, about = "Computation on singular subsets and quotients of R^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zariski tangent space at a point (repeat --space to compare spaces).
    Tangent {
        #[arg(long, required = true)]
        space: Vec<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Decide whether a derivation is a vector field.
    Classify {
        #[arg(long)]
        space: PathBuf,
        /// A `[field.NAME]` or an expression such as `-y*d_x + x*d_y`.
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        /// Extra probe points.
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        /// Half-width of the probe time window.
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        /// Integrator tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Integrate a field from a point.
    Flow {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Explore the orbit of a family through a seed point.
    Orbit {
        #[arg(long)]
        space: PathBuf,
        /// Comma-separated field names or expressions.
        #[arg(long, allow_hyphen_values = true)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        /// Relative rank tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Refute local completeness of a family on probe points.
    Completeness {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        family: String,
        /// Probe points; defaults to the file's samples.
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        /// Flow times.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "1")]
        t: Vec<f64>,
    },
    /// Orbit-type stratification of the space under its group.
    Stratify {
        #[arg(long)]
        space: PathBuf,
    },
    /// Check the Hilbert map on samples: relations, inequalities, separation.
    Embed {
        #[arg(long)]
        space: PathBuf,
        /// Random samples added to the file's samples.
        #[arg(long, default_value_t = 48)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        rng_seed: u64,
    },
    /// Check that a form is invariant and horizontal.
    CheckBasic {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Search for a form on the quotient pulling back to the given form.
    Descend {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Momentum map, zero level and its orbit-type strata.
    Momentum {
        #[arg(long)]
        space: PathBuf,
    },
    /// Verify a form on the principal quotient stratum against a form upstairs.
    CheckSjamaar {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Stratum parametrisation to use (default `principal`).
        #[arg(long)]
        stratum: Option<String>,
    },
    /// Run the built-in example corpus.
    Gallery,
}

/// Failure modes, mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unparsable input: exit 2.
    Usage(String),
    /// An operation was refused: exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::UnknownVariable(_) | Error::ArityMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn load(path: &Path) -> CliResult<SpaceFile> {
    SpaceFile::read(path).map_err(|ParseErrors(d)| {
        let sep = |d: &super::Diagnostic| if d.line == 0 { " " } else { "" };
        let lines: Vec<String> = d.iter().map(|d| format!("{}:{}{d}", path.display(), sep(d))).collect();
        CliError::Usage(lines.join("\n"))
    })
}

/// Parses `1,-1/2,0.25`.
pub fn parse_point(s: &str, n: usize) -> CliResult<Vec<Rational>> {
    let p: Vec<Rational> = s
        .split(',')
        .map(|c| parse_rational(c).map_err(|e| CliError::Usage(format!("point `{s}`: {e}"))))
        .collect::<CliResult<_>>()?;
    if p.len() != n {
        return Err(CliError::Usage(format!("point `{s}` has {} coordinates, expected {n}", p.len())));
    }
    Ok(p)
}

fn point_strings(p: &[Rational]) -> Vec<String> {
    p.iter().map(format_rational).collect()
}

fn tuple(p: &[String]) -> String {
    format!("({})", p.join(", "))
}

fn family(file: &SpaceFile, list: &str) -> CliResult<Vec<Derivation>> {
    list.split(',').map(|f| file.field(f.trim()).map_err(CliError::from)).collect()
}

fn require_group(file: &SpaceFile) -> CliResult<&GroupAction> {
    file.group.as_ref().ok_or_else(|| CliError::Usage("the space file has no [group] section".into()))
}

fn require_hilbert(file: &SpaceFile) -> CliResult<&HilbertMap> {
    file.hilbert.as_ref().ok_or_else(|| CliError::Usage("the space file has no [hilbert] section".into()))
}

fn echo(args: &[String]) -> String {
    args.join(" ")
}

/// Runs a parsed command.
pub fn run(cli: &Cli, command_echo: String) -> CliResult<Report> {
    let mut r = Report::new(command_echo);
    match &cli.command {
        Command::Tangent { space, point } => {
            let mut all = Vec::new();
            for path in space {
                let f = load(path)?;
                let x = parse_point(point, f.space.nvars())?;
                let t = f.space.zariski_tangent(&x)?;
                let basis: Vec<Vec<String>> = t.basis.iter().map(|b| point_strings(b)).collect();
                let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                if space.len() == 1 {
                    r.line(format!("dim {}", t.dim()));
                } else {
                    r.line(format!("{name}: dim {}", t.dim()));
                }
                let bs: Vec<String> = basis.iter().map(|b| tuple(b)).collect();
                r.line(format!("basis {}", if bs.is_empty() { "{}".to_string() } else { bs.join(", ") }));
                all.push(serde_json::json!({
                    "space": name,
                    "dim": t.dim(),
                    "basis": basis,
                    "point": point_strings(&x),
                    "provenance": "symbolic",
                }));
            }
            if all.len() == 1 {
                for (k, v) in all.remove(0).as_object().expect("object") {
                    r.results.insert(k.clone(), v.clone());
                }
            } else {
                r.set("spaces", all);
            }
        }
        Command::Classify { space, field, point, t, tol } => {
            let f = load(space)?;
            let x = f.field(field)?;
            let probes: Vec<Vec<f64>> = point
                .iter()
                .map(|p| parse_point(p, f.space.nvars()).map(|p| crate::to_f64_point(&p)))
                .collect::<CliResult<_>>()?;
            let mut params = ClassifyParams { window: *t, ..ClassifyParams::default() };
            if let Some(tol) = tol {
                params.flow.tol = *tol;
            }
            let adm = is_admissible(&f.space, &x);
            let rep = classify(&f.space, &x, &probes, &params)?;
            r.line(format!("{:?}", rep.verdict));
            r.line(format!("reason: {}", rep.reason));
            r.set("field", x.to_string_with(f.var_names()));
            r.set("verdict", rep.verdict);
            r.set("reason", &rep.reason);
            r.set(
                "admissibility",
                serde_json::json!({ "verdict": adm.verdict, "provenance": adm.provenance }),
            );
            r.set("locally_compact", f.space.locally_compact());
            r.set("probes", rep.probes.len());
            r.tol("flow_tol", params.flow.tol);
            r.tol("window", params.window);
            r.tol("active_constraint", 1e-9);
        }
        Command::Flow { space, field, from, t, tol } => {
            let f = load(space)?;
            let x = f.field(field)?;
            let p = parse_point(from, f.space.nvars())?;
            let params = FlowParams { tol: tol.unwrap_or(1e-10), ..FlowParams::default() };
            let res = flow(&f.space, &x, &crate::to_f64_point(&p), *t, &params)?;
            let status = match res.status {
                FlowStatus::Completed => "completed".to_string(),
                FlowStatus::LeftSet { t_exit } => format!("left the set at t = {t_exit}"),
                FlowStatus::BlowUp { t } => format!("blew up near t = {t}"),
                FlowStatus::Stalled { t } => format!("stalled at t = {t}"),
            };
            r.line(format!("status: {status}"));
            r.line(format!("endpoint ({})", res.endpoint().iter().map(|v| format!("{v:.10}")).collect::<Vec<_>>().join(", ")));
            r.line(format!("steps {}", res.trajectory.len() - 1));
            r.set("field", x.to_string_with(f.var_names()));
            r.set("status", res.status);
            r.set("endpoint", res.endpoint());
            r.set("end_time", res.end_time());
            r.numeric("drift_max", res.drift_max, params.tol);
            r.set("trajectory", &res.trajectory);
            r.tol("flow_tol", params.tol);
            r.tol("exit_location", 1e-9);
            let mut header = vec!["t".to_string()];
            header.extend((1..=f.space.nvars()).map(|i| format!("x{i}")));
            let rows = res
                .trajectory
                .iter()
                .map(|(t, x)| std::iter::once(*t).chain(x.iter().copied()).collect())
                .collect();
            r.table = Some(Table { header, rows });
        }
        Command::Orbit { space, family: fam, seed, tol, depth } => {
            let f = load(space)?;
            let family = family(&f, fam)?;
            let s = parse_point(seed, f.space.nvars())?;
            let params = OrbitParams { rank_tol: tol.unwrap_or(1e-8), depth: *depth, ..OrbitParams::default() };
            let o = orbit_explore(&f.space, &family, &s, &params)?;
            let consistent = o.seed_delta == o.est_dim && o.tangent_rank_along.iter().all(|&d| d == o.est_dim);
            r.line(format!("est_dim {}", o.est_dim));
            r.line(format!("seed delta {}", o.seed_delta));
            r.line(format!("points {}", o.points.len()));
            r.check("orbital rank equals est_dim on the cloud", consistent);
            r.set("est_dim", o.est_dim);
            r.set("seed_delta", o.seed_delta);
            r.set("points", o.points.len());
            r.set("truncated", o.truncated);
            r.set("discarded_flows", o.discarded_flows);
            r.set("consistent", consistent);
            r.numeric("drift_max", o.drift_max, 1e-8);
            r.tol("rank_tol", params.rank_tol);
            r.tol("dedup_radius", params.dedup_radius);
            let mut header = vec!["depth".to_string()];
            header.extend((1..=f.space.nvars()).map(|i| format!("x{i}")));
            let rows = o
                .points
                .iter()
                .zip(&o.depths)
                .map(|(p, d)| std::iter::once(*d as f64).chain(p.iter().copied()).collect())
                .collect();
            r.table = Some(Table { header, rows });
        }
        Command::Completeness { space, family: fam, point, t } => {
            let f = load(space)?;
            let family = family(&f, fam)?;
            let points: Vec<Vec<Rational>> = if point.is_empty() {
                f.space.samples().to_vec()
            } else {
                point.iter().map(|p| parse_point(p, f.space.nvars())).collect::<CliResult<_>>()?
            };
            if points.is_empty() {
                return Err(CliError::Usage("no probe points: pass --point or add [samples]".into()));
            }
            let rep = check_local_completeness(&f.space, &family, &points, t)?;
            r.line(format!("{:?}", rep.verdict));
            for w in &rep.witnesses {
                let pushed = w.exact.clone().unwrap_or_else(|| format!("{:?}", w.value));
                r.line(format!(
                    "witness: X{} pushes X{} at {} to {}{}",
                    w.x_index + 1,
                    w.y_index + 1,
                    tuple(&w.point),
                    pushed,
                    w.symbolic.as_ref().map(|s| format!(" (symbolic {s})")).unwrap_or_default()
                ));
            }
            r.set("verdict", rep.verdict);
            r.set("witnesses", &rep.witnesses);
            r.set("probes_checked", rep.probes_checked);
            r.set("probes_skipped", rep.probes_skipped);
            r.tol("span_residual", rep.tolerance);
        }
        Command::Stratify { space } => {
            let f = load(space)?;
            let g = require_group(&f)?;
            let s = orbit_type_partition(g, &f.space)?;
            for o in &s.orbit_types {
                r.line(format!(
                    "{}: stabilizer {}, dim {}{}",
                    o.label,
                    o.stabilizer,
                    o.dim,
                    if o.principal { ", principal" } else { "" }
                ));
            }
            for st in &s.strata {
                r.line(format!("{} ({}): dim {}, {}", st.label, s.orbit_types[st.orbit_type].label, st.dim, st.description.join("; ")));
            }
            for (a, b) in &s.order {
                r.line(format!("{} < {}", s.strata[*a].label, s.strata[*b].label));
            }
            r.set("stratification", &s);
        }
        Command::Embed { space, samples, rng_seed } => {
            let f = load(space)?;
            let g = require_group(&f)?;
            let hm = require_hilbert(&f)?;
            let mut pts = f.space.samples().to_vec();
            let mut rng = ChaCha8Rng::seed_from_u64(*rng_seed);
            pts.extend((0..*samples).map(|_| random_point(&mut rng, f.space.nvars())));
            let rep = hilbert_embed(g, hm, &pts)?;
            r.check("generators invariant", rep.generators_invariant.iter().all(|&b| b));
            r.check("relations compose to zero", rep.relations_vanish.iter().all(|&b| b));
            r.check("images satisfy relations", rep.images_on_relations);
            r.check("images satisfy inequalities", rep.images_satisfy_inequalities);
            if rep.separation_checked {
                r.check(&format!("orbits separated on {} pairs", rep.pairs_checked), rep.separation_failures.is_empty());
            }
            for n in &rep.notes {
                r.line(format!("note: {n}"));
            }
            r.set("embedding", &rep);
        }
        Command::CheckBasic { space, form } => {
            let f = load(space)?;
            let g = require_group(&f)?;
            let a = f.form(form, FormDomain::Space)?;
            if a.on != FormDomain::Space {
                return Err(CliError::Usage(format!("form `{form}` is not on the space")));
            }
            let inv = crate::forms::is_invariant(g, &a.form)?;
            let hor = crate::forms::is_horizontal(g, &a.form, &f.space)?;
            r.line(format!("form {}", a.form.to_string_with(f.var_names())));
            r.check("invariant", inv);
            r.check("horizontal", hor);
            r.set("form", a.form.to_string_with(f.var_names()));
            r.set("invariant", inv);
            r.set("horizontal", hor);
            r.set("basic", is_basic(g, &a.form, &f.space)?);
            r.set("provenance", "symbolic");
        }
        Command::Descend { space, form, degree_bound } => {
            let f = load(space)?;
            let g = require_group(&f)?;
            let hm = require_hilbert(&f)?;
            let a = f.form(form, FormDomain::Space)?;
            let (out, summary) = find_descent_witness(g, hm, &a.form, *degree_bound)?;
            match &out {
                DescentOutcome::Witness(b) => {
                    r.line(format!("witness {}", b.to_string_with(&hm.target_names)));
                    r.check("witness pulls back exactly", true);
                }
                DescentOutcome::Exhausted { bound } => {
                    r.line(format!("no witness up to degree {bound}"));
                    r.check("witness found", false);
                }
            }
            r.set("descent", &summary);
        }
        Command::Momentum { space } => {
            let f = load(space)?;
            let g = require_group(&f)?;
            let w = f.symplectic.as_ref().ok_or_else(|| CliError::Usage("the space file has no [symplectic] section".into()))?;
            let mm = derive_momentum_map(g, w)?;
            let names = f.var_names();
            let comps = mm.strings(names);
            for (k, c) in comps.iter().enumerate() {
                r.line(format!("Phi{} = {c}", k + 1));
            }
            r.check("xi _| omega + dPhi = 0", mm.verify(w)?.into_iter().all(|b| b));
            let mut tangent = true;
            for phi in &mm.components {
                let xf = hamiltonian_vector_field(w, phi)?;
                tangent &= mm.components.iter().all(|other| xf.apply(other).is_zero());
            }
            r.check("Hamiltonian fields of Phi are tangent to its level sets", tangent);
            let z = zero_level(g, &mm, names.to_vec())?;
            let eqs: Vec<String> = z.equations().iter().map(|e| e.to_string_with(names)).collect();
            r.line(format!("zero level: {}", if eqs.is_empty() { "everything".to_string() } else { eqs.join(", ") + " = 0" }));
            let red = reduced_strata(g, &z, f.hilbert.as_ref())?;
            for st in &red.stratification.strata {
                r.line(format!("{}: dim {}, stabilizer {}", st.label, st.dim, red.stratification.orbit_types[st.orbit_type].stabilizer));
            }
            r.set("momentum", comps);
            r.set("zero_level", eqs);
            r.set("reduced", &red);
        }
        Command::CheckSjamaar { space, sigma, alpha, stratum } => {
            let f = load(space)?;
            let g = require_group(&f)?;
            let hm = require_hilbert(&f)?;
            let sname = stratum.as_deref().unwrap_or("principal");
            let st = f
                .space
                .strata()
                .iter()
                .find(|s| s.name == sname)
                .ok_or_else(|| CliError::Usage(format!("no [strata.{sname}] section")))?;
            let s = f.form(sigma, FormDomain::Hilbert)?;
            let a = f.form(alpha, FormDomain::Space)?;
            if s.on != FormDomain::Hilbert || a.on != FormDomain::Space {
                return Err(CliError::Usage("sigma must be on [hilbert] and alpha on the space".into()));
            }
            let rep = check_sjamaar(g, hm, st, &s.form, &a.form)?;
            r.line(format!("pullback of alpha: {}", rep.upstairs));
            r.line(format!("pullback of sigma: {}", rep.downstairs));
            r.check("alpha invariant", rep.alpha_invariant);
            r.check("pullbacks agree on the stratum", rep.verified);
            r.set("sjamaar", &rep);
            r.set("provenance", "symbolic");
        }
        Command::Gallery => {
            let entries = gallery::run_gallery();
            for e in &entries {
                r.check(&format!("{}: {}", e.name, e.detail), e.passed);
            }
            r.set("entries", &entries);
        }
    }
    Ok(r)
}

/// Full entry point: parse arguments, run, emit, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = std::env::var("STRATLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let shown: Vec<String> = args
        .iter()
        .enumerate()
        .map(|(i, a)| if i == 0 { "stratlab".to_string() } else { a.to_string_lossy().into_owned() })
        .filter(|a| !a.is_empty())
        .collect();
    match run(&cli, echo(&shown)) {
        Ok(report) => {
            if let Err(e) = emit(&report, cli.format, cli.out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return 1;
            }
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failed(m) => eprintln!("failed: {m}"),
            }
            e.exit_code()
        }
    }
}
