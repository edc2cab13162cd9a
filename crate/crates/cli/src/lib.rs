//! Runs the named experiments and writes `report.json` plus CSV tables.
//!
//! Exact rationals are serialized as "p/q" strings and floats with 17
//! significant digits, so exact experiments give byte-identical files on
//! every run.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use perturb_core::arith::{int, parse_rational, rat, rat_string, rat_to_f64, Coordinates, CycloElement, Poly, Rational, TrigBasis, TrigSeries};
use perturb_core::asymptotics::{bessel_j0_oracle, hankel_coeff, hankel_partial_sum, optimal_truncation, residual_term_magnitude, DEFAULT_KMAX};
use perturb_core::backward::{optimal_backward_error, pendulum_fit, quintic_fit, simultaneous_backward_error};
use perturb_core::series::{GaugeSeries, LaurentSeries};
use perturb_core::solve::{
    duffing_regular, pendulum_equation, pendulum_regular, perturb_iterate, problems, renormalize, solve_lindstedt,
    solve_puiseux, solve_system_order0,
};
use perturb_core::verify::{dde_residual_series, hyperasymptotic_root, morrison_audit, pendulum_audit, PendulumForm, ResidualReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    QuinticRegular,
    QuinticSystem,
    QuinticPuiseux,
    QuinticSingular,
    Hyperasymptotic,
    BesselTruncation,
    DuffingRegular,
    DuffingLindstedt,
    Morrison,
    Pendulum,
    Dde,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::QuinticRegular => "quintic-regular",
            Experiment::QuinticSystem => "quintic-system",
            Experiment::QuinticPuiseux => "quintic-puiseux",
            Experiment::QuinticSingular => "quintic-singular",
            Experiment::Hyperasymptotic => "hyperasymptotic",
            Experiment::BesselTruncation => "bessel-truncation",
            Experiment::DuffingRegular => "duffing-regular",
            Experiment::DuffingLindstedt => "duffing-lindstedt",
            Experiment::Morrison => "morrison",
            Experiment::Pendulum => "pendulum",
            Experiment::Dde => "dde",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Regular,
    Renorm,
    Modified,
}

impl From<Form> for PendulumForm {
    fn from(f: Form) -> Self {
        match f {
            Form::Regular => PendulumForm::Regular,
            Form::Renorm => PendulumForm::Renorm,
            Form::Modified => PendulumForm::Modified,
        }
    }
}

/// Perturbation experiments with exact series, residuals and backward error.
#[derive(Debug, Clone, Parser)]
#[command(name = "perturb", version, about)]
pub struct ExperimentConfig {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Perturbation order N.
    #[arg(short = 'n', long)]
    pub order: Option<usize>,
    /// Small parameter, as a decimal or exact "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// Evaluation point for bessel-truncation.
    #[arg(long)]
    pub x: Option<f64>,
    /// Initial amplitude for morrison.
    #[arg(long)]
    pub a0: Option<f64>,
    /// DDE coefficient a (decimal or "p/q").
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// DDE coefficient b (decimal or "p/q").
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Pendulum candidate to audit.
    #[arg(long, value_enum, default_value = "renorm")]
    pub form: Form,
    /// End of the time grid.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Number of grid intervals.
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, out: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            experiment,
            order: None,
            eps: None,
            x: None,
            a0: None,
            a: None,
            b: None,
            form: Form::Renorm,
            t_end: None,
            grid: 2000,
            out: out.into(),
            format: Format::Both,
        }
    }

    fn exact(&self, v: &Option<String>, flag: &str, default: Rational) -> Result<Rational, CliError> {
        match v {
            None => Ok(default),
            Some(s) => parse_rational(s).ok_or_else(|| CliError::Usage(format!("--{flag}: cannot parse {s:?}"))),
        }
    }

    fn eps_exact(&self, default: Rational) -> Result<Rational, CliError> {
        self.exact(&self.eps, "eps", default)
    }
}

/// CSV data; the first column is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub tables: Vec<Table>,
    /// Human-readable lines.
    pub summary: Vec<String>,
}

/// 17 significant digits; non-finite values become strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str::<Number>(&float_str(x)).map(Value::Number).unwrap_or(Value::Null)
    } else {
        Value::String(float_str(x))
    }
}

pub fn float_str(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn q(r: &Rational) -> Value {
    Value::String(rat_string(r))
}

fn gauge_name(symbol: &str) -> &str {
    match symbol {
        "eps" => "ε",
        "mu" => "μ",
        s => s,
    }
}

fn rseries(s: &GaugeSeries<Rational>) -> Value {
    json!({
        "gauge": s.gauge().symbol,
        "gauge_denominator": s.gauge().denominator,
        "truncation_order": s.order(),
        "coefficients": s.coeffs().iter().map(q).collect::<Vec<_>>(),
    })
}

fn leading_rational(s: &GaugeSeries<Rational>) -> Value {
    match s.leading() {
        Some((k, c)) => json!({
            "order": k,
            "coefficient": q(c),
            "text": format!("{} {}^{}", rat_string(c), gauge_name(s.gauge().symbol), k),
        }),
        None => Value::Null,
    }
}

fn cyclo(c: &CycloElement) -> Value {
    json!({ "alpha_order": c.order(), "coordinates": c.coeffs().iter().map(q).collect::<Vec<_>>(), "text": c.to_string() })
}

fn trig(t: &TrigSeries) -> Value {
    let terms: Vec<Value> = t
        .coordinates()
        .into_iter()
        .map(|(k, v)| {
            let basis = match k.basis {
                TrigBasis::Cos => "cos",
                TrigBasis::Sin => "sin",
            };
            json!({ "harmonic": k.harmonic, "basis": basis, "power": k.power, "coefficient": q(&v) })
        })
        .collect();
    json!({ "terms": terms, "text": t.to_string() })
}

fn poly(p: &Poly<Rational>) -> Value {
    let n = p.degree().map_or(0, |d| d as usize + 1);
    json!({ "variable": p.symbol(), "coefficients": (0..n).map(|d| q(&p.coeff(d as u32))).collect::<Vec<_>>() })
}

fn laurent_terms<R: perturb_core::arith::Ring>(s: &LaurentSeries<R>, f: impl Fn(&R) -> Value, max: usize) -> Value {
    Value::Array(s.terms().into_iter().take(max).map(|(k, c)| json!({ "power": k, "coefficient": f(&c) })).collect())
}

fn report_json(r: &ResidualReport) -> Value {
    let meta: Map<String, Value> = r.metadata.iter().map(|(k, v)| (k.clone(), float(*v))).collect();
    json!({ "grid_points": r.grid.len(), "max_abs": float(r.max_abs), "max_scaled": float(r.max_scaled), "metadata": meta })
}

fn grid_table(name: &str, r: &ResidualReport) -> Table {
    let rows = r
        .grid
        .iter()
        .zip(&r.residual_values)
        .zip(r.scaled_values())
        .map(|((t, v), s)| vec![float_str(*t), float_str(*v), float_str(s)])
        .collect();
    Table { name: name.into(), headers: vec!["t", "residual", "scaled"], rows }
}

/// Computes the experiment without touching the filesystem.
pub fn compute_experiment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (params, results, tables, summary) = match cfg.experiment {
        Experiment::QuinticRegular => quintic_regular(cfg)?,
        Experiment::QuinticSystem => quintic_system(cfg)?,
        Experiment::QuinticPuiseux => quintic_puiseux(cfg)?,
        Experiment::QuinticSingular => quintic_singular(cfg)?,
        Experiment::Hyperasymptotic => hyperasymptotic(cfg)?,
        Experiment::BesselTruncation => bessel(cfg)?,
        Experiment::DuffingRegular => duffing(cfg)?,
        Experiment::DuffingLindstedt => lindstedt(cfg)?,
        Experiment::Morrison => morrison(cfg)?,
        Experiment::Pendulum => pendulum(cfg)?,
        Experiment::Dde => dde(cfg)?,
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "experiment": cfg.experiment.name(),
        "parameters": params,
        "results": results,
        "tables": tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
    });
    Ok(Outcome { report, tables, summary })
}

/// Computes the experiment and writes its files; returns the outcome and
/// the paths written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Outcome, Vec<PathBuf>), CliError> {
    let outcome = compute_experiment(cfg)?;
    let written = write_outputs(&cfg.out, cfg.format, &outcome)?;
    Ok((outcome, written))
}

pub fn write_outputs(dir: &Path, format: Format, outcome: &Outcome) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if format != Format::Csv {
        let path = dir.join("report.json");
        let mut text = serde_json::to_string_pretty(&outcome.report)?;
        text.push('\n');
        fs::write(&path, text)?;
        written.push(path);
    }
    if format != Format::Json {
        for t in &outcome.tables {
            let path = dir.join(format!("{}.csv", t.name));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(&t.headers)?;
            for row in &t.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}

type Parts = (Value, Value, Vec<Table>, Vec<String>);

fn order(cfg: &ExperimentConfig, default: usize) -> usize {
    cfg.order.unwrap_or(default)
}

fn coefficient_table(name: &str, cols: &[&[Rational]], headers: Vec<&'static str>) -> Table {
    let len = cols.iter().map(|c| c.len()).max().unwrap_or(0);
    let rows = (0..len)
        .map(|k| {
            let mut row = vec![k.to_string()];
            row.extend(cols.iter().map(|c| c.get(k).map(rat_string).unwrap_or_default()));
            row
        })
        .collect();
    Table { name: name.into(), headers, rows }
}

fn quintic_regular(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 3);
    let sol = perturb_iterate(&problems::quintic_regular(), &[int(1)], n).map_err(compute)?;
    let z = sol.scalar();
    let r = sol.scalar_residual();
    let mut results = json!({
        "problem": "u^5 - eps*u - 1",
        "coefficients": z.coeffs().iter().map(q).collect::<Vec<_>>(),
        "residual": rseries(r),
        "residual_leading": leading_rational(r),
        "achieved_order": sol.achieved_order,
    });
    if let Some(e) = cfg.eps.as_ref().map(|_| cfg.eps_exact(int(0))).transpose()? {
        let (zv, rv) = (z.eval(&e), r.eval(&e));
        results["at_eps"] = json!({
            "eps": q(&e), "z": q(&zv), "z_float": float(rat_to_f64(&zv)),
            "residual": q(&rv), "residual_float": float(rat_to_f64(&rv)),
        });
    }
    let summary = vec![
        format!("z_{n} = {z}"),
        format!("residual leading term: {}", leading_rational(r)["text"].as_str().unwrap_or("0")),
    ];
    let table = coefficient_table("coefficients", &[z.coeffs(), r.coeffs()], vec!["k", "coefficient", "residual"]);
    Ok((json!({ "order": n, "eps": cfg.eps }), results, vec![table], summary))
}

fn quintic_system(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 3);
    let p = problems::circle_hyperbola();
    let root = [rat(3, 5), rat(4, 5)];
    let o0 = solve_system_order0(&p, &root).map_err(compute)?;
    let sol = perturb_iterate(&p, &root, n).map_err(compute)?;
    let matrix = |m: &Vec<Vec<Rational>>| m.iter().map(|r| r.iter().map(q).collect::<Vec<_>>()).collect::<Vec<_>>();
    let results = json!({
        "problem": ["x^2 + y^2 - 1 - eps*x*y", "25*x*y - 12 + 2*eps*x"],
        "order0": { "root": root.iter().map(q).collect::<Vec<_>>(), "jacobian": matrix(&o0.jacobian),
                    "determinant": q(&o0.det), "inverse": matrix(&o0.inverse) },
        "x": sol.series[0].coeffs().iter().map(q).collect::<Vec<_>>(),
        "y": sol.series[1].coeffs().iter().map(q).collect::<Vec<_>>(),
        "residual": sol.residual.iter().map(rseries).collect::<Vec<_>>(),
        "residual_leading_order": sol.leading_residual_order(),
        "achieved_order": sol.achieved_order,
    });
    let summary = vec![
        format!("x = {}", sol.series[0]),
        format!("y = {}", sol.series[1]),
        format!("det A = {}, residual O(eps^{})", rat_string(&o0.det), sol.leading_residual_order().unwrap_or(0)),
    ];
    let table = coefficient_table("coefficients", &[sol.series[0].coeffs(), sol.series[1].coeffs()], vec!["k", "x", "y"]);
    Ok((json!({ "order": n }), results, vec![table], summary))
}

fn cyclo_table(name: &str, s: &GaugeSeries<CycloElement>) -> Table {
    let rows = s.coeffs().iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string()]).collect();
    Table { name: name.into(), headers: vec!["k", "coefficient"], rows }
}

fn quintic_puiseux(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 3);
    let b = solve_puiseux(&problems::quintic_puiseux().to_cyclo(5), 5, 1, CycloElement::alpha(5), n).map_err(compute)?;
    let y = b.y();
    let results = json!({
        "problem": "u^5 - eps*(u + 1)",
        "gauge": "eps = mu^5, u = mu*y, alpha^5 = 1",
        "y": y.coeffs().iter().map(cyclo).collect::<Vec<_>>(),
        "candidate_valuation": b.candidate.valuation(),
        "rescaled_residual_leading_order": b.solution.leading_residual_order(),
        "original_residual_leading": laurent_terms(&b.original_residual, cyclo, 2),
        "achieved_order": b.solution.achieved_order,
    });
    let summary = vec![format!("y = {y}"), format!("u = mu * y, residual {}", b.original_residual.leading().map(|(k, c)| format!("{c} mu^{k}")).unwrap_or_else(|| "0".into()))];
    Ok((json!({ "order": n }), results, vec![cyclo_table("coefficients", y)], summary))
}

fn quintic_singular(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 5);
    let p = problems::quintic_singular();
    let reg_order = n / 2;
    let reg = perturb_iterate(&p, &[int(-1)], reg_order).map_err(compute)?;
    let b = solve_puiseux(&p.to_cyclo(4), 4, -1, CycloElement::alpha(4), n).map_err(compute)?;
    let fit = match optimal_backward_error(&b.refined, &b.candidate, &quintic_fit()) {
        Ok(fit) => json!({
            "directions": quintic_fit().directions.iter().map(|d| d.label.clone()).collect::<Vec<_>>(),
            "parameters": fit.parameters.iter().map(q).collect::<Vec<_>>(),
            "u5_coefficient_corrections": fit.slot_correction(5).iter()
                .map(|(k, c)| json!({ "power": k, "coefficient": cyclo(c) })).collect::<Vec<_>>(),
            "new_residual_leading": laurent_terms(&fit.new_residual, cyclo, 1),
            "improvement_order": fit.improvement_order,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let refined = p.refine_gauge(4);
    let mut branches: Vec<_> = (0..4).map(|k| b.conjugate(k)).collect();
    let regs = reg.scalar().refine(4).map_err(compute)?.renamed("mu").map(4, |c| CycloElement::constant(4, c.clone()));
    branches.push(LaurentSeries::from_series(regs));
    let lead = LaurentSeries::new(4, GaugeSeries::constant(refined.gauge(), CycloElement::constant(4, int(1))));
    let sim = simultaneous_backward_error(&branches, &lead, &refined).map_err(compute)?;
    let mut dev_rows = Vec::new();
    let deviation: Vec<Value> = sim
        .deviation
        .iter()
        .enumerate()
        .map(|(j, d)| {
            let terms = d.terms();
            for (k, c) in &terms {
                dev_rows.push(vec![j.to_string(), k.to_string(), rat_string(c)]);
            }
            json!({ "x_power": j, "terms": terms.iter().map(|(k, c)| json!({ "mu_power": k, "coefficient": q(c) })).collect::<Vec<_>>() })
        })
        .collect();
    let results = json!({
        "problem": "eps*u^5 - u - 1",
        "regular_branch": { "order": reg_order, "coefficients": reg.scalar().coeffs().iter().map(q).collect::<Vec<_>>(),
                            "residual_leading": leading_rational(reg.scalar_residual()) },
        "singular_branch": {
            "gauge": "eps = mu^4, u = y/mu, alpha^4 = 1",
            "y": b.y().coeffs().iter().map(cyclo).collect::<Vec<_>>(),
            "original_residual_leading": laurent_terms(&b.original_residual, cyclo, 2),
        },
        "optimal_backward_error": fit,
        "simultaneous_backward_error": { "deviation": deviation, "deviation_order": sim.deviation_order },
    });
    let summary = vec![
        format!("regular branch: {}", reg.scalar()),
        format!("singular branch y = {}", b.y()),
        format!("simultaneous backward error O(mu^{})", sim.deviation_order.map_or("inf".into(), |k| k.to_string())),
    ];
    let tables = vec![
        cyclo_table("singular_branch", b.y()),
        Table { name: "deviation".into(), headers: vec!["x_power", "mu_power", "coefficient"], rows: dev_rows },
    ];
    Ok((json!({ "order": n, "regular_branch_order": reg_order }), results, tables, summary))
}

fn hyperasymptotic(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 0);
    if n > 1 {
        return Err(CliError::Usage("hyperasymptotic supports --order 0 or 1".into()));
    }
    let eps = cfg.eps_exact(rat(1, 10))?;
    let r = hyperasymptotic_root(&eps, n as u32).map_err(compute)?;
    let results = json!({
        "x": float(r.x), "residual": float(r.residual), "w": float(r.w),
        "closed_form_residual": r.closed_form_residual.map(float), "leading_estimate": float(r.leading_estimate),
    });
    let mut rows = Vec::new();
    for k in 2..=20 {
        let e = rat(k, 40);
        let d0 = hyperasymptotic_root(&e, 0).map_err(compute)?;
        let d1 = hyperasymptotic_root(&e, 1).map_err(compute)?;
        rows.push(vec![
            float_str(rat_to_f64(&e)),
            float_str(d0.residual),
            float_str(d0.closed_form_residual.unwrap_or(f64::NAN)),
            float_str(d1.residual),
        ]);
    }
    let summary = vec![format!("x{n} = {:.17e}, residual {:.6e} (estimate {:.6e})", r.x, r.residual, r.leading_estimate)];
    let table = Table { name: "residuals".into(), headers: vec!["eps", "delta0", "closed_form0", "delta1"], rows };
    Ok((json!({ "order": n, "eps": q(&eps) }), results, vec![table], summary))
}

fn bessel(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let x = cfg.x.unwrap_or(2.3);
    if !(x > 0.0) {
        return Err(CliError::Usage("--x must be positive".into()));
    }
    let kmax = cfg.order.unwrap_or(DEFAULT_KMAX);
    let plain = optimal_truncation(x, false, kmax);
    let trig_t = optimal_truncation(x, true, kmax);
    let j0 = bessel_j0_oracle(x).map_err(compute)?;
    let rows = (0..=kmax.min(12))
        .map(|k| {
            let s = hankel_partial_sum(x, k);
            vec![
                k.to_string(),
                rat_string(&hankel_coeff(k)),
                float_str(residual_term_magnitude(k, x, false)),
                float_str(residual_term_magnitude(k, x, true)),
                float_str(s),
                float_str((s - j0).abs()),
            ]
        })
        .collect();
    let results = json!({
        "k_star": { "plain": plain.k_star, "trig": trig_t.k_star },
        "j0_oracle": float(j0),
        "partial_sum_at_k_star": { "plain": float(hankel_partial_sum(x, plain.k_star)), "trig": float(hankel_partial_sum(x, trig_t.k_star)) },
    });
    let summary = vec![
        format!("k* = {} (plain), {} (trig-refined)", plain.k_star, trig_t.k_star),
        format!("J0({x}) = {j0:.10}, partial sum at k={}: {:.10}", trig_t.k_star, hankel_partial_sum(x, trig_t.k_star)),
    ];
    let table = Table {
        name: "table".into(),
        headers: vec!["k", "a_k", "plain", "trig", "partial_sum", "forward_error"],
        rows,
    };
    Ok((json!({ "x": float(x), "kmax": kmax }), results, vec![table], summary))
}

fn eval_trig_series(s: &GaugeSeries<TrigSeries>, eps: f64, t: f64) -> f64 {
    s.coeffs().iter().rev().fold(0.0, |acc, c| acc * eps + c.eval_f64(t))
}

fn time_grid(cfg: &ExperimentConfig, default_end: f64) -> Result<Vec<f64>, CliError> {
    let end = cfg.t_end.unwrap_or(default_end);
    if !(end > 0.0) || cfg.grid == 0 {
        return Err(CliError::Usage("need --t-end > 0 and --grid > 0".into()));
    }
    Ok(perturb_core::verify::uniform_grid(0.0, end, cfg.grid))
}

fn trig_leading(s: &GaugeSeries<TrigSeries>) -> Value {
    match s.leading() {
        Some((k, c)) => json!({ "order": k, "amplitude_degree": c.amplitude_degree(), "coefficient": trig(c) }),
        None => Value::Null,
    }
}

fn duffing(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 1);
    let eps = rat_to_f64(&cfg.eps_exact(rat(1, 10))?);
    let sol = duffing_regular(n).map_err(compute)?;
    let r = sol.scalar_residual();
    let scale = eps.powi(n as i32 + 1);
    let rows = time_grid(cfg, 20.0)?
        .into_iter()
        .map(|t| {
            let rv = eval_trig_series(r, eps, t);
            vec![float_str(t), float_str(eval_trig_series(sol.scalar(), eps, t)), float_str(rv), float_str(rv / scale)]
        })
        .collect();
    let results = json!({
        "problem": "z'' + z + eps*z^3 = 0, z(0) = 1, z'(0) = 0",
        "coefficients": sol.scalar().coeffs().iter().map(trig).collect::<Vec<_>>(),
        "residual_leading": trig_leading(r),
        "residual": r.coeffs().iter().map(trig).collect::<Vec<_>>(),
    });
    let summary = vec![
        format!("z_{n} = {}", sol.scalar()),
        format!("residual leading order {:?}, amplitude degree {:?}", r.leading().map(|l| l.0), r.leading().and_then(|l| l.1.amplitude_degree())),
    ];
    let table = Table { name: "solution".into(), headers: vec!["t", "z", "residual", "scaled"], rows };
    Ok((json!({ "order": n, "eps": float(eps) }), results, vec![table], summary))
}

fn lindstedt(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 1);
    let eps = rat_to_f64(&cfg.eps_exact(rat(1, 10))?);
    let sol = solve_lindstedt(n).map_err(compute)?;
    let omega = sol.omega.eval_f64(eps);
    let scale = eps.powi(n as i32 + 1);
    let rows = time_grid(cfg, 20.0)?
        .into_iter()
        .map(|t| {
            let tau = omega * t;
            let rv = eval_trig_series(&sol.residual, eps, tau);
            vec![float_str(t), float_str(eval_trig_series(&sol.solution, eps, tau)), float_str(rv), float_str(rv / scale)]
        })
        .collect();
    let results = json!({
        "problem": "omega^2 y'' + y + eps*y^3 = 0 in tau = omega*t",
        "omega": rseries(&sol.omega),
        "solution": sol.solution.coeffs().iter().map(trig).collect::<Vec<_>>(),
        "residual_leading": trig_leading(&sol.residual),
    });
    let summary = vec![format!("omega = {}", sol.omega), format!("y = {}", sol.solution)];
    let table = Table { name: "solution".into(), headers: vec!["t", "z", "residual", "scaled"], rows };
    Ok((json!({ "order": n, "eps": float(eps) }), results, vec![table], summary))
}

fn morrison(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let eps = rat_to_f64(&cfg.eps_exact(rat(1, 10))?);
    let a0 = cfg.a0.unwrap_or(1.0);
    let t_end = match cfg.t_end {
        Some(t) => t,
        None if eps > 0.0 => 10.0 * 10f64.ln() / (eps * eps),
        None => return Err(CliError::Usage("morrison at eps = 0 needs --t-end".into())),
    };
    let r = morrison_audit(eps, a0, t_end, cfg.grid).map_err(compute)?;
    let summary = vec![format!("max |residual| = {:.6e}, max scaled = {:.6}", r.max_abs, r.max_scaled)];
    let results = json!({ "scale": "eps^3 * a(t)", "audit": report_json(&r) });
    Ok((
        json!({ "eps": float(eps), "a0": float(a0), "t_end": float(t_end), "grid": cfg.grid }),
        results,
        vec![grid_table("residual", &r)],
        summary,
    ))
}

fn pendulum(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let eps = rat_to_f64(&cfg.eps_exact(rat(1, 10))?);
    let t_end = cfg.t_end.unwrap_or(30.0);
    let reg = pendulum_regular(1).map_err(compute)?;
    let ren = renormalize(&reg, 1).map_err(compute)?;
    let z2 = ren.series_form(2, true).map_err(compute)?;
    let fit = optimal_backward_error(&pendulum_equation(), &z2, &pendulum_fit()).map_err(compute)?;
    let r = pendulum_audit(eps, t_end, cfg.grid, cfg.form.into()).map_err(compute)?;
    let form = match cfg.form {
        Form::Regular => "regular",
        Form::Renorm => "renorm",
        Form::Modified => "modified",
    };
    let results = json!({
        "problem": "(1 + eps*tau) theta'' + 2 eps theta' + theta = 0",
        "regular": { "coefficients": reg.scalar().coeffs().iter().map(trig).collect::<Vec<_>>(),
                     "residual": reg.scalar_residual().coeffs().iter().map(trig).collect::<Vec<_>>() },
        "renormalization": {
            "re_log_amplitude": ren.real.iter().map(poly).collect::<Vec<_>>(),
            "im_log_amplitude": ren.imag.iter().map(poly).collect::<Vec<_>>(),
            "constant_phase": ren.constant_phase.iter().map(q).collect::<Vec<_>>(),
            "closed_form": "exp(-3 eps tau/4) cos(tau - eps tau^2/4)",
        },
        "structured_backward_error": {
            "directions": pendulum_fit().directions.iter().map(|d| d.label.clone()).collect::<Vec<_>>(),
            "parameters": fit.parameters.iter().map(q).collect::<Vec<_>>(),
            "new_residual_leading": laurent_terms(&fit.new_residual, trig, 1),
        },
        "audit": report_json(&r),
    });
    let summary = vec![
        format!("p(tau) parameters: {}", fit.parameters.iter().map(rat_string).collect::<Vec<_>>().join(", ")),
        format!("{form} residual: max |residual| = {:.6e}, max scaled = {:.6}", r.max_abs, r.max_scaled),
    ];
    Ok((
        json!({ "form": form, "eps": float(eps), "t_end": float(t_end), "grid": cfg.grid }),
        results,
        vec![grid_table("residual", &r)],
        summary,
    ))
}

fn dde(cfg: &ExperimentConfig) -> Result<Parts, CliError> {
    let n = order(cfg, 4);
    let a = cfg.exact(&cfg.a, "a", int(1))?;
    let b = cfg.exact(&cfg.b, "b", int(1))?;
    let g = dde_residual_series(&a, &b, n).map_err(compute)?;
    let results = json!({
        "residual_factor": "g(eps) = -(a+b)/(1-a eps) + a exp((a+b) eps/(1-a eps)) + b",
        "g": rseries(&g),
        "g_leading": leading_rational(&g),
    });
    let summary = vec![format!("g = {g}")];
    let table = coefficient_table("coefficients", &[g.coeffs()], vec!["k", "coefficient"]);
    Ok((json!({ "order": n, "a": q(&a), "b": q(&b) }), results, vec![table], summary))
}
