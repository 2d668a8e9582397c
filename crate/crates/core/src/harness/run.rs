//! Pipelines behind the CLI subcommands, artifact emission and sweeps.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{CheckConfig, ExperimentConfig};
use super::expr::Expr;
use crate::barrier::{barrier_solution, barrier_wellposed, Barrier};
use crate::error::{Error, Result};
use crate::pde::{solve, DiscreteProblem, Solution};
use crate::rearrange::GridFunction;
use crate::verify::{
    barrier_spec_for, comparison_with_barrier, data_conditions, distributional_exponents_check,
    gradient_estimate_report, polya_szego_check, regularity_table, DataExponents, DistributionalSetup, GVariant,
    RatioReport,
};
use crate::young::{klimov_symmetrize, sobolev_classifier};

/// Exit status of a run: 0 all checks pass, 1 failure, 2 hypothesis refusal.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::HypothesisViolation(_) => 2,
        _ => 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Refused,
}

impl Status {
    pub fn exit(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Error => 1,
            Status::Refused => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub values: Value,
}

impl CheckEntry {
    fn from_result(kind: &str, r: Result<(bool, Value)>) -> Self {
        match r {
            Ok((pass, values)) => Self {
                kind: kind.into(),
                status: if pass { Status::Pass } else { Status::Fail },
                message: None,
                values,
            },
            Err(e) => Self {
                kind: kind.into(),
                status: if exit_code(&e) == 2 { Status::Refused } else { Status::Error },
                message: Some(e.to_string()),
                values: Value::Null,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub energy: f64,
    pub residual: f64,
    pub iterations: usize,
    pub eps: f64,
    pub trace_csv_path: String,
}

/// Contents of `report.json`. Paths are relative to the output directory and
/// nothing depends on the clock, so equal configs give equal bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub run_id: String,
    pub config_hash: String,
    #[serde(rename = "empirical_C")]
    pub empirical_c: Option<f64>,
    pub pass: bool,
    pub margins_csv_path: Option<String>,
    pub norms: BTreeMap<String, f64>,
    pub conditions: Value,
    pub solver: Option<SolverSummary>,
    pub checks: Vec<CheckEntry>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit: i32,
    pub report: Report,
    pub out_dir: PathBuf,
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Sum of sine modes `sin(k pi (x - lo)/L)` up to `modes` per axis with
/// amplitudes uniform in `[-1, 1] / |k|^2`.
pub fn band_limited_field<R: Rng>(grid: &GridFunction, modes: usize, rng: &mut R) -> GridFunction {
    let dim = grid.dim();
    let count = modes.pow(dim as u32);
    let terms: Vec<(Vec<usize>, f64)> = (0..count)
        .map(|j| {
            let mut k = Vec::with_capacity(dim);
            let mut r = j;
            for _ in 0..dim {
                k.push(r % modes + 1);
                r /= modes;
            }
            let norm2: usize = k.iter().map(|x| x * x).sum();
            (k, rng.gen_range(-1.0..1.0) / norm2 as f64)
        })
        .collect();
    let (lo, hi) = (grid.lo.clone(), grid.hi.clone());
    grid.with_fn(|x| {
        terms
            .iter()
            .map(|(k, a)| {
                a * k
                    .iter()
                    .enumerate()
                    .map(|(i, &ki)| (ki as f64 * std::f64::consts::PI * (x[i] - lo[i]) / (hi[i] - lo[i])).sin())
                    .product::<f64>()
            })
            .sum()
    })
}

/// Discrete problem described by a config; `f` may be overridden.
pub fn problem(cfg: &ExperimentConfig) -> Result<DiscreteProblem> {
    let (p, lambda) = cfg.power_sum()?;
    let grid = cfg.grid()?;
    let f = cfg.field(&cfg.data.f, &grid)?;
    let g = cfg.data.g.iter().map(|s| cfg.field(s, &grid)).collect::<Result<Vec<_>>>()?;
    DiscreteProblem::new(grid, p, lambda, f, g)
}

fn needs_solution(cfg: &ExperimentConfig) -> bool {
    cfg.checks.iter().any(|c| {
        !matches!(
            c,
            CheckConfig::Distributional { .. } | CheckConfig::PolyaSzego { random_fields: 1.., .. }
        )
    }) || cfg.norms.iter().any(|n| n.of == "u")
}

fn ratio_values(r: &RatioReport) -> Result<(bool, Value)> {
    Ok((r.pass, serde_json::to_value(r)?))
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    prob: &'a DiscreteProblem,
    u: Option<&'a GridFunction>,
    barrier: Option<std::result::Result<Barrier, String>>,
}

impl Context<'_> {
    fn solution(&self) -> Result<&GridFunction> {
        self.u
            .ok_or_else(|| Error::InvalidInput("no solution is available for this check".into()))
    }

    fn barrier(&mut self) -> Result<&Barrier> {
        if self.barrier.is_none() {
            let u = self.solution()?;
            let c = self.cfg.constants;
            let b = barrier_spec_for(self.prob, u, c.c1, c.c2, c.g_variant)
                .and_then(|spec| barrier_solution(&spec))
                .map_err(|e| e.to_string());
            self.barrier = Some(b);
        }
        match self.barrier.as_ref().unwrap() {
            Ok(b) => Ok(b),
            Err(msg) => Err(Error::BarrierUndefined(msg.clone())),
        }
    }
}

fn run_check(
    ctx: &mut Context,
    check: &CheckConfig,
    hash: &str,
    out: &Path,
    margins: &mut Option<(String, f64)>,
) -> Result<(bool, Value)> {
    match check {
        CheckConfig::Comparison { threshold } => {
            let u = ctx.solution()?.clone();
            let mut rep = comparison_with_barrier(&u, ctx.barrier()?, *threshold)?;
            rep.provenance.config_hash = Some(hash.to_string());
            let name = "margins.csv".to_string();
            write_atomic(&out.join(&name), rep.margin_csv().as_bytes())?;
            *margins = Some((name.clone(), rep.empirical_constant));
            let variant = match ctx.cfg.constants.g_variant {
                GVariant::Pseudo => "pseudo",
                GVariant::Conservative => "conservative variant",
            };
            Ok((
                rep.pass,
                json!({
                    "empirical_constant": rep.empirical_constant,
                    "argmax_s": rep.argmax().map(|m| m.s),
                    "threshold": rep.threshold,
                    "margins_csv_path": name,
                    "provenance": rep.provenance,
                    "g": variant,
                }),
            ))
        }
        CheckConfig::GradientEstimate { slack } => {
            let u = ctx.solution()?.clone();
            let prob = ctx.prob;
            ratio_values(&gradient_estimate_report(prob, &u, ctx.barrier()?, *slack)?)
        }
        CheckConfig::PolyaSzego { slack, random_fields } => {
            if *random_fields == 0 {
                return ratio_values(&polya_szego_check(ctx.prob, ctx.solution()?, *slack)?);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
            let mut ratios = Vec::with_capacity(*random_fields);
            let mut pass = true;
            for _ in 0..*random_fields {
                let field = band_limited_field(&ctx.prob.grid, 4, &mut rng);
                let r = polya_szego_check(ctx.prob, &field, *slack)?;
                pass &= r.pass;
                ratios.push(r.ratio);
            }
            let (worst, max) = ratios.iter().cloned().enumerate().fold((0, 0.0), |a, (i, r)| if r > a.1 { (i, r) } else { a });
            Ok((
                pass,
                json!({ "ratios": ratios, "max_ratio": max, "argmax_field": worst, "bound": 1.0 + slack, "seed": ctx.cfg.seed }),
            ))
        }
        CheckConfig::Regularity {
            case,
            m,
            sigma,
            r,
            s,
            max_constant,
        } => {
            let ex = DataExponents {
                m: *m,
                sigma: *sigma,
                r: r.clone(),
                s: s.clone(),
            };
            let p = ctx.prob.p.clone();
            let rep = regularity_table(*case, &p, &ex, ctx.solution()?, &ctx.prob.f, &ctx.prob.g)?;
            let pass = rep.constant.is_finite() && rep.constant <= *max_constant;
            Ok((pass, serde_json::to_value(&rep)?))
        }
        CheckConfig::Distributional {
            gamma,
            m,
            levels,
            stable_factor,
        } => {
            if !ctx.prob.g.is_empty() {
                return Err(Error::HypothesisViolation(
                    "the distributional check is stated for g = 0".into(),
                ));
            }
            let mut grid = ctx.prob.grid.clone();
            grid.values.iter_mut().for_each(|v| *v = 0.0);
            let setup = DistributionalSetup {
                grid,
                p: ctx.prob.p.clone(),
                lambda: ctx.prob.lambda.clone(),
                gamma: *gamma,
                m: *m,
                levels: levels.clone(),
                stable_factor: *stable_factor,
                solve: ctx.cfg.solver,
            };
            let rep = distributional_exponents_check(&setup)?;
            write_atomic(&out.join("distributional.csv"), rep.to_csv().as_bytes())?;
            Ok((rep.pass, serde_json::to_value(&rep)?))
        }
        CheckConfig::SolverError { exact, tol } => {
            let u = ctx.solution()?;
            let e = Expr::parse(exact, u.dim())?;
            let err = (0..u.len())
                .filter(|&k| u.mask[k])
                .map(|k| (u.values[k] - e.eval(&u.centre(k))).abs())
                .fold(0.0, f64::max);
            Ok((err <= *tol, json!({ "max_error": err, "tol": tol })))
        }
    }
}

fn field_by_name<'a>(prob: &'a DiscreteProblem, u: Option<&'a GridFunction>, name: &str) -> Result<&'a GridFunction> {
    match name {
        "u" => u.ok_or_else(|| Error::InvalidInput("norm of u requested without a solution".into())),
        "f" => Ok(&prob.f),
        _ => {
            let k: usize = name[1..].parse().map_err(|_| Error::InvalidInput(format!("unknown field {name}")))?;
            prob.g
                .get(k - 1)
                .ok_or_else(|| Error::InvalidInput(format!("unknown field {name}")))
        }
    }
}

fn evaluate_norms(cfg: &ExperimentConfig, prob: &DiscreteProblem, u: Option<&GridFunction>) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for n in &cfg.norms {
        let spec = n.norm.to_spec(cfg.dim())?;
        out.insert(n.name.clone(), spec.eval_grid(field_by_name(prob, u, &n.of)?)?);
    }
    Ok(out)
}

fn conditions(prob: &DiscreteProblem) -> Value {
    let mut warnings = prob.warnings();
    let data = match data_conditions(prob) {
        Ok(d) => {
            if !d.within_hypotheses {
                warnings.push("outside theorem hypotheses: a data modular is infinite".into());
            }
            serde_json::to_value(d).unwrap_or(Value::Null)
        }
        Err(e) => Value::String(e.to_string()),
    };
    json!({
        "pbar": prob.pbar(),
        "pbar_star": prob.pbar_star(),
        "dim": prob.dim(),
        "data": data,
        "warnings": warnings,
    })
}

fn finish(cfg: &ExperimentConfig, out: &Path, report: Report) -> Result<RunOutcome> {
    write_atomic(&out.join("config.toml"), cfg.canonical().as_bytes())?;
    write_json(&out.join("report.json"), &report)?;
    let exit = report.checks.iter().map(|c| c.status.exit()).max().unwrap_or(0);
    Ok(RunOutcome {
        exit,
        report,
        out_dir: out.to_path_buf(),
    })
}

fn empty_report(hash: &str) -> Report {
    Report {
        run_id: hash[..12].to_string(),
        config_hash: hash.to_string(),
        empirical_c: None,
        pass: false,
        margins_csv_path: None,
        norms: BTreeMap::new(),
        conditions: Value::Null,
        solver: None,
        checks: Vec::new(),
    }
}

fn solve_into(prob: &DiscreteProblem, cfg: &ExperimentConfig, out: &Path) -> Result<(Solution, SolverSummary)> {
    let sol = solve(prob, &cfg.solver)?;
    write_atomic(&out.join("trace.csv"), sol.trace_csv().as_bytes())?;
    write_atomic(&out.join("u.csv"), sol.u.to_csv().as_bytes())?;
    let summary = SolverSummary {
        energy: sol.energy,
        residual: sol.residual,
        iterations: sol.iterations,
        eps: sol.eps,
        trace_csv_path: "trace.csv".into(),
    };
    Ok((sol, summary))
}

/// Runs every declared check and writes `report.json`, `config.toml`,
/// `margins.csv`, `trace.csv` and `u.csv` into `out`.
pub fn run_config(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let hash = cfg.hash();
    let mut report = empty_report(&hash);
    let prob = problem(cfg)?;
    report.conditions = conditions(&prob);
    let solved = if needs_solution(cfg) {
        match solve_into(&prob, cfg, out) {
            Ok((sol, summary)) => {
                report.solver = Some(summary);
                Some(sol)
            }
            Err(e) => {
                report.checks = cfg.checks.iter().map(|c| CheckEntry::from_result(c.name(), Err(clone_err(&e)))).collect();
                report.checks.push(CheckEntry::from_result("solve", Err(e)));
                return finish(cfg, out, report);
            }
        }
    } else {
        None
    };
    let u = solved.as_ref().map(|s| &s.u);
    let mut ctx = Context {
        cfg,
        prob: &prob,
        u,
        barrier: None,
    };
    let mut margins = None;
    for check in &cfg.checks {
        let r = run_check(&mut ctx, check, &hash, out, &mut margins);
        report.checks.push(CheckEntry::from_result(check.name(), r));
    }
    if let Some((path, c)) = margins {
        report.margins_csv_path = Some(path);
        report.empirical_c = Some(c);
    }
    match evaluate_norms(cfg, &prob, u) {
        Ok(n) => report.norms = n,
        Err(e) => report.checks.push(CheckEntry::from_result("norms", Err(e))),
    }
    report.pass = report.checks.iter().all(|c| c.status == Status::Pass);
    finish(cfg, out, report)
}

/// Summary of an error for repeated reporting.
fn clone_err(e: &Error) -> Error {
    match e {
        Error::HypothesisViolation(m) => Error::HypothesisViolation(m.clone()),
        other => Error::InvalidInput(format!("solve failed: {other}")),
    }
}

/// Loads a config file and runs it; every outcome maps to an exit status.
pub fn run(path: &Path, out: Option<&Path>, seed: Option<u64>) -> (i32, std::result::Result<RunOutcome, Error>) {
    let res = ExperimentConfig::load(path).and_then(|mut cfg| {
        if let Some(s) = seed {
            cfg.seed = s;
        }
        let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir());
        run_config(&cfg, &dir)
    });
    match res {
        Ok(o) => (o.exit, Ok(o)),
        Err(e) => (exit_code(&e), Err(e)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub empirical_c: Option<f64>,
    pub pass: bool,
    pub runtime_s: f64,
    pub exit: i32,
    pub message: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub exit: i32,
    pub rows: Vec<SweepRow>,
    pub summary_path: PathBuf,
}

impl SweepOutcome {
    /// Columns `value,empirical_C,pass,runtime,exit`.
    pub fn to_csv(rows: &[SweepRow]) -> String {
        let mut out = String::from("value,empirical_C,pass,runtime,exit\n");
        for r in rows {
            let c = r.empirical_c.map_or(String::new(), |c| format!("{c:.12e}"));
            out.push_str(&format!("{:e},{},{},{:.3},{}\n", r.value, c, r.pass, r.runtime_s, r.exit));
        }
        out
    }
}

/// One job per value of the scalar at `axis`, on a pool of `workers`
/// threads. Job `k` writes into `out/job_k`; rows keep the order of `values`.
pub fn sweep_config(cfg: &ExperimentConfig, axis: &str, values: &[f64], out: &Path, workers: usize) -> Result<SweepOutcome> {
    if values.is_empty() {
        return Err(Error::InvalidInput("sweep needs at least one value".into()));
    }
    cfg.with_scalar(axis, values[0])?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        values
            .par_iter()
            .enumerate()
            .map(|(k, &value)| {
                let start = Instant::now();
                let res = cfg
                    .with_scalar(axis, value)
                    .and_then(|c| run_config(&c, &out.join(format!("job_{k:03}"))));
                let runtime_s = start.elapsed().as_secs_f64();
                match res {
                    Ok(o) => SweepRow {
                        value,
                        empirical_c: o.report.empirical_c,
                        pass: o.report.pass,
                        runtime_s,
                        exit: o.exit,
                        message: None,
                    },
                    Err(e) => SweepRow {
                        value,
                        empirical_c: None,
                        pass: false,
                        runtime_s,
                        exit: exit_code(&e),
                        message: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    let summary_path = out.join("sweep_summary.csv");
    write_atomic(&summary_path, SweepOutcome::to_csv(&rows).as_bytes())?;
    Ok(SweepOutcome {
        exit: rows.iter().map(|r| r.exit).max().unwrap_or(0),
        rows,
        summary_path,
    })
}

/// Klimov symmetrisation of `phi`: writes `phi_diamond.txt` and `symmetrize.json`.
pub fn symmetrize(cfg: &ExperimentConfig, out: &Path) -> Result<Value> {
    let spec = cfg.young_spec()?;
    let k = klimov_symmetrize(&spec)?;
    write_atomic(&out.join("phi_diamond.txt"), k.phi_diamond.to_text().as_bytes())?;
    let sob = match sobolev_classifier(&k.phi_diamond, cfg.dim()) {
        Ok(r) => serde_json::to_value(r.regime)?,
        Err(e) => Value::String(e.to_string()),
    };
    let v = json!({
        "route": format!("{:?}", k.route),
        "closed_form": k.closed_form.map(|(pbar, lambda)| json!({ "pbar": pbar, "Lambda": lambda })),
        "model": k.model,
        "sobolev_regime": sob,
        "phi_diamond_path": "phi_diamond.txt",
    });
    write_json(&out.join("symmetrize.json"), &v)?;
    Ok(v)
}

/// Solver only: writes `u.csv`, `trace.csv` and `solve.json`.
pub fn solve_only(cfg: &ExperimentConfig, out: &Path) -> Result<SolverSummary> {
    let prob = problem(cfg)?;
    let (_, summary) = solve_into(&prob, cfg, out)?;
    write_json(&out.join("solve.json"), &summary)?;
    Ok(summary)
}

/// Data-only barrier (`G` from the decreasing rearrangement of the data
/// term): writes `barrier.csv` and `barrier.json`.
pub fn barrier_only(cfg: &ExperimentConfig, out: &Path) -> Result<Value> {
    let prob = problem(cfg)?;
    let c = cfg.constants;
    let spec = barrier_spec_for(&prob, &prob.f, c.c1, c.c2, GVariant::Conservative)?;
    let wp = barrier_wellposed(&spec);
    let b = barrier_solution(&spec)?;
    write_atomic(&out.join("barrier.csv"), b.profile().to_csv().as_bytes())?;
    let v = json!({
        "measure": spec.measure,
        "v0": b.v[0],
        "blow_up": b.blow_up,
        "gradient_energy": b.gradient_energy()?,
        "wellposed": wp,
        "g": "conservative variant",
        "barrier_csv_path": "barrier.csv",
    });
    write_json(&out.join("barrier.json"), &v)?;
    Ok(v)
}

/// Declared norms, solving first only when a norm of `u` is requested.
pub fn norms_only(cfg: &ExperimentConfig, out: &Path) -> Result<BTreeMap<String, f64>> {
    let prob = problem(cfg)?;
    let sol = if cfg.norms.iter().any(|n| n.of == "u") {
        Some(solve(&prob, &cfg.solver)?)
    } else {
        None
    };
    let norms = evaluate_norms(cfg, &prob, sol.as_ref().map(|s| &s.u))?;
    write_json(&out.join("norms.json"), &norms)?;
    Ok(norms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torsion(h: f64) -> ExperimentConfig {
        let text = format!(
            r#"
[domain]
kind = "disk"
dim = 2
radius = 1.0
h = {h}

[phi]
kind = "power_sum"
p = [2, 2]
lambda = [1, 1]

[data]
f = "1"

[[checks]]
kind = "comparison"

[[checks]]
kind = "gradient_estimate"
slack = 0.1

[[norms]]
name = "sup_u"
norm = {{ kind = "lorentz", p = "inf", q = "inf" }}
"#
        );
        ExperimentConfig::from_toml_str(&text, ".").unwrap()
    }

    #[test]
    fn torsion_run_passes_and_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = torsion(1.0 / 16.0);
        let a = run_config(&cfg, &dir.path().join("a")).unwrap();
        let b = run_config(&cfg, &dir.path().join("b")).unwrap();
        assert_eq!(a.exit, 0, "{:?}", a.report);
        let c = a.report.empirical_c.unwrap();
        assert!((c - 1.0).abs() < 0.1, "{c}");
        let read = |o: &RunOutcome| std::fs::read(o.out_dir.join("report.json")).unwrap();
        assert_eq!(read(&a), read(&b));
        for f in ["margins.csv", "trace.csv", "u.csv", "config.toml"] {
            assert!(a.out_dir.join(f).is_file(), "{f}");
        }
        assert_eq!(a.report.checks.len(), cfg.checks.len());
        let margins = std::fs::read_to_string(a.out_dir.join("margins.csv")).unwrap();
        assert!(margins.starts_with("s,u_star,v,ratio\n"));
        assert!((a.report.norms["sup_u"] - 0.25).abs() < 0.02);
    }

    #[test]
    fn refusals_exit_with_two_and_bad_configs_with_one() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = torsion(1.0 / 16.0);
        cfg.checks = vec![CheckConfig::Regularity {
            case: crate::verify::RegularityCase::Iii,
            m: 1.0,
            sigma: 1.0,
            r: vec![],
            s: vec![],
            max_constant: f64::INFINITY,
        }];
        let o = run_config(&cfg, dir.path()).unwrap();
        assert_eq!(o.exit, 2);
        assert_eq!(o.report.checks[0].status, Status::Refused);
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, cfg.canonical().replace("p = [2.0, 2.0]", "p = [2.0]")).unwrap();
        let (code, res) = run(&path, Some(dir.path()), None);
        assert_eq!(code, 1);
        assert!(res.unwrap_err().to_string().contains("phi.p"));
    }

    #[test]
    fn sweep_rows_follow_the_values() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = torsion(1.0 / 8.0);
        let o = sweep_config(&cfg, "domain.h", &[1.0 / 8.0, 1.0 / 16.0], dir.path(), 2).unwrap();
        assert_eq!(o.rows.len(), 2);
        assert_eq!(o.rows[0].value, 0.125);
        assert!(o.rows.iter().all(|r| r.empirical_c.is_some_and(f64::is_finite)));
        let csv = std::fs::read_to_string(&o.summary_path).unwrap();
        assert!(csv.starts_with("value,empirical_C,pass,runtime,exit\n"));
        assert!(sweep_config(&cfg, "domain.h", &[], dir.path(), 1).is_err());
        assert!(sweep_config(&cfg, "domain.kind", &[1.0], dir.path(), 1).is_err());
    }

    #[test]
    fn band_limited_fields_are_seeded() {
        let g = GridFunction::cube(2, 1.0, 16).unwrap();
        let a = band_limited_field(&g, 4, &mut ChaCha8Rng::seed_from_u64(3));
        let b = band_limited_field(&g, 4, &mut ChaCha8Rng::seed_from_u64(3));
        let c = band_limited_field(&g, 4, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.max_abs() > 0.0);
    }
}
