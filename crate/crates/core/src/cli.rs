//! Command-line front end. Every subcommand prints its report (JSON by
//! default, CSV with `--format csv`) and stores a [`RunRecord`] under
//! `<cache_dir>/<hash>.json` unless `--no-cache` is given.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arithmetic::{
    angular_stats, enumerate_lattice_set, find_angular_target, grid_number, LatticeSet,
};
use crate::config::Config;
use crate::correlations::{correlation_report, scan_semi_correlations, ReportOptions};
use crate::error::{Error, Result};
use crate::field::{sample, FieldKind};
use crate::kacrice::{
    kac_rice_expected_length, moment_integrals, singular_partition, KacRiceParams, MomentParams,
};
use crate::nodal::{monte_carlo_expected_length, monte_carlo_grid_size, LENGTH_CSV_HEADER};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "arw",
    version,
    about = "Arithmetic random waves: lattice points, semi-correlations, Kac-Rice and Monte Carlo nodal length"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Do not write a run record to the cache directory.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Cache directory (default from the config, `cache`).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for scans, trials and quadrature rows.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file with experiment defaults (also `ARW_CONFIG`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice set size, classes, grid number and angular statistics.
    Lattice { n: u64 },
    /// Semi-correlation count, optionally with correlations, diagonal and
    /// quasi-correlation counts.
    Semicorr {
        n: u64,
        #[arg(long, default_value_t = 4)]
        l: usize,
        #[arg(long)]
        with_corr: bool,
        #[arg(long)]
        with_diagonal: bool,
        /// Quasi-correlation exponent; may be repeated.
        #[arg(long = "with-quasi", value_name = "EPS")]
        with_quasi: Vec<f64>,
    },
    /// Semi-correlation ratios over a range of n.
    Scan {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 4)]
        l: usize,
        /// Comma-separated constants C for the fractions `|M| <= C N^(l/2)`.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        thresholds: Vec<f64>,
        #[arg(long)]
        with_corr: bool,
    },
    /// Kac-Rice expected nodal length of the boundary-adapted wave.
    Kacrice {
        n: u64,
        /// Quadrature cells per side.
        #[arg(long)]
        mq: Option<usize>,
        #[arg(long)]
        eps0: Option<f64>,
        #[arg(long)]
        c0: Option<f64>,
        /// Relative tolerance of the grid-doubling check.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Monte Carlo nodal length by marching squares.
    Montecarlo {
        n: u64,
        #[arg(long, default_value = "boundary_adapted")]
        kind: FieldKind,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        ppw: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte Carlo and Kac-Rice side by side with the predicted correction.
    Deficiency {
        n: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        ppw: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        mq: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// Skip the Monte Carlo column.
        #[arg(long)]
        no_mc: bool,
    },
    /// Moment integrals of the local covariance data.
    Moments {
        n: u64,
        /// Midpoint cells per side.
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        eps0: Option<f64>,
        #[arg(long)]
        c0: Option<f64>,
    },
    /// Representable n whose fourth angular coefficient is near a target.
    #[command(allow_negative_numbers = true)]
    Target {
        target: f64,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max: u64,
        /// Keep only the first results.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Dump one sampled field on a grid.
    Grid {
        n: u64,
        #[arg(long, default_value = "boundary_adapted")]
        kind: FieldKind,
        #[arg(long)]
        seed: Option<u64>,
        /// Nodes per side (default from the points-per-wavelength rule).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        ppw: Option<f64>,
    },
}

/// Cached description of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Value,
    pub seed: Option<u64>,
    pub timestamp: String,
    pub code_version: String,
}

impl RunRecord {
    /// SHA-256 over the canonical JSON of command, parameters and seed.
    pub fn content_hash(&self) -> String {
        let key = json!({
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
        });
        let digest = Sha256::digest(key.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn cache_path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.json", self.content_hash()))
    }
}

struct Rendered {
    command: &'static str,
    parameters: BTreeMap<String, Value>,
    seed: Option<u64>,
    outputs: Value,
    json: String,
    csv: String,
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn csv_table(header: &str, rows: &[String]) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn single(
    command: &'static str,
    parameters: BTreeMap<String, Value>,
    seed: Option<u64>,
    outputs: Value,
    csv: String,
) -> Rendered {
    Rendered {
        command,
        parameters,
        seed,
        json: outputs.to_string() + "\n",
        outputs,
        csv,
    }
}

fn lattice(n: u64) -> Result<Rendered> {
    let set = enumerate_lattice_set(n)?;
    let stats = angular_stats(&set);
    let q = grid_number(n)?;
    let out = json!({
        "n": n,
        "N": set.size(),
        "classes": set.classes,
        "axis_points": set.axis_points,
        "Q": q,
        "nu4": stats.nu4,
        "M4": stats.m4,
    });
    let csv = csv_table(
        "n,N,num_classes,Q,nu4,M4",
        &[format!(
            "{},{},{},{},{},{}",
            n,
            set.size(),
            set.classes.len(),
            q,
            stats.nu4,
            stats.m4
        )],
    );
    Ok(single(
        "lattice",
        params(&[("n", json!(n))]),
        None,
        out,
        csv,
    ))
}

fn needs_classes(set: &LatticeSet) -> Result<()> {
    if set.classes.is_empty() {
        Err(Error::EmptySpectrum(set.n))
    } else {
        Ok(())
    }
}

fn run_command(cmd: &Command, cfg: &Config) -> Result<Rendered> {
    match cmd {
        Command::Lattice { n } => lattice(*n),
        Command::Semicorr {
            n,
            l,
            with_corr,
            with_diagonal,
            with_quasi,
        } => {
            let set = enumerate_lattice_set(*n)?;
            let opts = ReportOptions {
                with_correlations: *with_corr,
                with_diagonal: *with_diagonal,
                quasi_eps: with_quasi.clone(),
            };
            let r = correlation_report(&set, *l, &opts)?;
            let mut header = String::from("n,N,l,M_count,R_count,D_count,ratio_M");
            let mut row = format!(
                "{},{},{},{},{},{},{}",
                r.n,
                r.n_points,
                r.l,
                r.m_count,
                opt(r.r_count),
                opt(r.d_count),
                r.ratio_m
            );
            for q in &r.quasi_counts {
                header.push_str(&format!(",quasi_{}", q.eps));
                row.push_str(&format!(",{}", q.count));
            }
            Ok(single(
                "semicorr",
                params(&[
                    ("n", json!(n)),
                    ("l", json!(l)),
                    ("with_corr", json!(with_corr)),
                    ("with_diagonal", json!(with_diagonal)),
                    ("with_quasi", json!(with_quasi)),
                ]),
                None,
                serde_json::to_value(&r)?,
                csv_table(&header, &[row]),
            ))
        }
        Command::Scan {
            min,
            max,
            l,
            thresholds,
            with_corr,
        } => {
            let table = scan_semi_correlations(*min, *max, *l, thresholds, *with_corr)?;
            let mut csv = Vec::new();
            table.write_csv(&mut csv)?;
            let mut jsonl = Vec::new();
            table.write_jsonl(&mut jsonl)?;
            Ok(Rendered {
                command: "scan",
                parameters: params(&[
                    ("min", json!(min)),
                    ("max", json!(max)),
                    ("l", json!(l)),
                    ("thresholds", json!(thresholds)),
                    ("with_corr", json!(with_corr)),
                ]),
                seed: None,
                outputs: serde_json::to_value(&table)?,
                json: String::from_utf8_lossy(&jsonl).into_owned(),
                csv: String::from_utf8_lossy(&csv).into_owned(),
            })
        }
        Command::Kacrice {
            n,
            mq,
            eps0,
            c0,
            tol,
        } => {
            let set = enumerate_lattice_set(*n)?;
            needs_classes(&set)?;
            let p = KacRiceParams {
                mq: Some(mq.unwrap_or_else(|| cfg.mq(*n))),
                tolerance: tol.unwrap_or(cfg.convergence_tol),
            };
            let (eps0, c0) = (eps0.unwrap_or(cfg.eps0), c0.unwrap_or(cfg.c0));
            let r = kac_rice_expected_length(&set, &p)?;
            let part = singular_partition(&set, c0, eps0, cfg.probes)?;
            let mut out = serde_json::to_value(&r)?;
            out["singular_measure"] = json!(part.measure);
            out["eps0"] = json!(eps0);
            out["c0"] = json!(c0);
            let csv = csv_table(
                "n,N,nu4,mq,integral,grid_term,total,leading,correction_pred,convergence,error_estimate,singular_measure",
                &[format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.n, r.n_points, r.nu4, r.mq, r.integral, r.grid_term, r.total, r.leading,
                    r.correction_pred, r.convergence, r.error_estimate, part.measure
                )],
            );
            Ok(single(
                "kacrice",
                params(&[
                    ("n", json!(n)),
                    ("mq", json!(p.mq)),
                    ("tol", json!(p.tolerance)),
                    ("eps0", json!(eps0)),
                    ("c0", json!(c0)),
                ]),
                None,
                out,
                csv,
            ))
        }
        Command::Montecarlo {
            n,
            kind,
            trials,
            ppw,
            seed,
        } => {
            let set = enumerate_lattice_set(*n)?;
            let (trials, ppw, seed) = (
                trials.unwrap_or(cfg.trials),
                ppw.unwrap_or(cfg.ppw),
                seed.unwrap_or(cfg.seed),
            );
            let r = monte_carlo_expected_length(*kind, &set, trials, ppw, seed)?;
            Ok(single(
                "montecarlo",
                params(&[
                    ("n", json!(n)),
                    ("kind", json!(kind)),
                    ("trials", json!(trials)),
                    ("ppw", json!(ppw)),
                ]),
                Some(seed),
                serde_json::to_value(&r)?,
                csv_table(LENGTH_CSV_HEADER, &[r.csv_row()]),
            ))
        }
        Command::Deficiency {
            n,
            trials,
            ppw,
            seed,
            mq,
            tol,
            no_mc,
        } => {
            let set = enumerate_lattice_set(*n)?;
            needs_classes(&set)?;
            let (trials, ppw, seed) = (
                trials.unwrap_or(cfg.trials),
                ppw.unwrap_or(cfg.ppw),
                seed.unwrap_or(cfg.seed),
            );
            let p = KacRiceParams {
                mq: Some(mq.unwrap_or_else(|| cfg.mq(*n))),
                tolerance: tol.unwrap_or(cfg.convergence_tol),
            };
            let kr = kac_rice_expected_length(&set, &p)?;
            let mc = if *no_mc {
                None
            } else {
                Some(monte_carlo_expected_length(
                    FieldKind::BoundaryAdapted,
                    &set,
                    trials,
                    ppw,
                    seed,
                )?)
            };
            let measured = kr.measured_correction();
            let ratio = measured / kr.correction_pred;
            let out = json!({
                "n": n,
                "N": kr.n_points,
                "nu4": kr.nu4,
                "Q": kr.q,
                "mc_mean": mc.as_ref().map(|m| m.mean),
                "mc_stderr": mc.as_ref().map(|m| m.stderr),
                "mc_trials": mc.as_ref().map(|m| m.trials),
                "kacrice_total": kr.total,
                "kacrice_convergence": kr.convergence,
                "leading": kr.leading,
                "correction_pred": kr.correction_pred,
                "measured_correction": measured,
                "mc_measured_correction": mc.as_ref().map(|m| m.mean - kr.leading),
                "ratio": ratio,
            });
            let csv = csv_table(
                "n,N,nu4,mc_mean,mc_stderr,kacrice_total,leading,correction_pred,measured_correction,ratio",
                &[format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    n,
                    kr.n_points,
                    kr.nu4,
                    opt(mc.as_ref().map(|m| m.mean)),
                    opt(mc.as_ref().map(|m| m.stderr)),
                    kr.total,
                    kr.leading,
                    kr.correction_pred,
                    measured,
                    ratio
                )],
            );
            Ok(single(
                "deficiency",
                params(&[
                    ("n", json!(n)),
                    ("trials", json!(trials)),
                    ("ppw", json!(ppw)),
                    ("mq", json!(p.mq)),
                    ("tol", json!(p.tolerance)),
                    ("no_mc", json!(no_mc)),
                ]),
                (!no_mc).then_some(seed),
                out,
                csv,
            ))
        }
        Command::Moments { n, cells, eps0, c0 } => {
            let set = enumerate_lattice_set(*n)?;
            let p = MomentParams {
                cells: *cells,
                c0: c0.unwrap_or(cfg.c0),
                eps0: eps0.unwrap_or(cfg.eps0),
            };
            let r = moment_integrals(&set, &p)?;
            let rows: Vec<String> = r
                .integrals
                .iter()
                .map(|i| {
                    format!(
                        "{},{},{},{},{},{}",
                        i.name,
                        i.value,
                        opt(i.value_nonsingular),
                        opt(i.theory),
                        opt(i.residual),
                        opt(i.scaled_residual)
                    )
                })
                .collect();
            Ok(single(
                "moments",
                params(&[
                    ("n", json!(n)),
                    ("cells", json!(r.midpoint_cells)),
                    ("eps0", json!(p.eps0)),
                    ("c0", json!(p.c0)),
                ]),
                None,
                serde_json::to_value(&r)?,
                csv_table(
                    "name,value,value_nonsingular,theory,residual,scaled_residual",
                    &rows,
                ),
            ))
        }
        Command::Target {
            target,
            tol,
            max,
            limit,
        } => {
            let mut hits = find_angular_target(*target, *tol, *max)?;
            if let Some(k) = limit {
                hits.truncate(*k);
            }
            let rows: Vec<(u64, usize, f64)> = hits
                .iter()
                .map(|&n| {
                    let set = enumerate_lattice_set(n)?;
                    Ok((n, set.size(), angular_stats(&set).nu4))
                })
                .collect::<Result<_>>()?;
            let out = json!(rows
                .iter()
                .map(|(n, big_n, nu4)| json!({"n": n, "N": big_n, "nu4": nu4}))
                .collect::<Vec<_>>());
            let csv = csv_table(
                "n,N,nu4",
                &rows
                    .iter()
                    .map(|(a, b, c)| format!("{a},{b},{c}"))
                    .collect::<Vec<_>>(),
            );
            Ok(single(
                "target",
                params(&[
                    ("target", json!(target)),
                    ("tol", json!(tol)),
                    ("max", json!(max)),
                    ("limit", json!(limit)),
                ]),
                None,
                out,
                csv,
            ))
        }
        Command::Grid {
            n,
            kind,
            seed,
            m,
            ppw,
        } => {
            let set = enumerate_lattice_set(*n)?;
            let seed = seed.unwrap_or(cfg.seed);
            let m = match m {
                Some(m) => *m,
                None => monte_carlo_grid_size(*kind, *n, ppw.unwrap_or(cfg.ppw))?,
            };
            if m < 2 {
                return Err(Error::GridTooSmall(m));
            }
            let wave = sample(*kind, &set, seed)?;
            let grid = wave.evaluate_grid(m);
            let header = format!("kind={kind} n={n} seed={seed}");
            let mut csv = Vec::new();
            grid.write_csv(&mut csv, &header)?;
            let out = json!({"n": n, "kind": kind, "seed": seed, "m": m, "values": grid.values});
            Ok(single(
                "grid",
                params(&[("n", json!(n)), ("kind", json!(kind)), ("m", json!(m))]),
                Some(seed),
                out,
                String::from_utf8_lossy(&csv).into_owned(),
            ))
        }
    }
}

fn store(rendered: &Rendered, dir: &Path, err: &mut dyn Write) -> Result<PathBuf> {
    let record = RunRecord {
        command: rendered.command.to_string(),
        parameters: rendered.parameters.clone(),
        outputs: rendered.outputs.clone(),
        seed: rendered.seed,
        timestamp: chrono::Utc::now().to_rfc3339(),
        code_version: CODE_VERSION.to_string(),
    };
    std::fs::create_dir_all(dir)?;
    let path = record.cache_path(dir);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(old) = serde_json::from_str::<RunRecord>(&text) {
            if old.outputs != record.outputs || old.code_version != record.code_version {
                let _ = writeln!(err, "warning: overwriting cached record {}", path.display());
            }
        }
    }
    std::fs::write(&path, serde_json::to_string_pretty(&record)? + "\n")?;
    Ok(path)
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the process exit code: 0 on
/// success, 1 for numeric or domain errors (printed as one JSON line), 2 for
/// usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            1
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = Config::load(cli.config.as_deref())?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let rendered = pool.install(|| run_command(&cli.command, &cfg))?;
    match cli.format {
        Format::Json => out.write_all(rendered.json.as_bytes())?,
        Format::Csv => out.write_all(rendered.csv.as_bytes())?,
    }
    if !cli.no_cache {
        let dir = cli
            .cache_dir
            .clone()
            .unwrap_or_else(|| cfg.cache_dir.clone());
        store(&rendered, &dir, err)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["arw", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn lattice_subcommand() {
        let (code, out, _) = call(&["lattice", "765"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["Q"], 3);
        let (code, _, err) = call(&["lattice", "3"]);
        assert_eq!(code, 1);
        assert!(err.contains("NotRepresentable"));
        let (code, out, _) = call(&["--format", "csv", "lattice", "25"]);
        assert_eq!(code, 0);
        assert!(out.lines().nth(1).unwrap().starts_with("25,12,"));
    }

    #[test]
    fn usage_error_is_one_line() {
        let (code, _, err) = call(&["lattice"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = call(&["semicorr", "5", "--l", "3"]);
        assert_eq!(code, 1);
        assert!(err.contains("OddLength"));
    }

    #[test]
    fn hash_ignores_outputs_and_time() {
        let mut a = RunRecord {
            command: "lattice".into(),
            parameters: params(&[("n", json!(5))]),
            outputs: json!(1),
            seed: None,
            timestamp: "t0".into(),
            code_version: CODE_VERSION.into(),
        };
        let h = a.content_hash();
        a.outputs = json!(2);
        a.timestamp = "t1".into();
        assert_eq!(a.content_hash(), h);
        a.seed = Some(1);
        assert_ne!(a.content_hash(), h);
        assert_eq!(h.len(), 64);
    }
}
