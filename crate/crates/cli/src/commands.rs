//! Subcommand implementations.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use tradeoff_core::adversary_sim::{run_experiment, ExperimentConfig, ExperimentReport, PerturbationSpec};
use tradeoff_core::boundary_solver::{ml_boundaries, ml_boundaries_generic, optimal_linear_boundary, SearchConfig};
use tradeoff_core::param_designer::{design_params, gamma_sweep, sweep_csv, DesignConfig, DesignResult};
use tradeoff_core::theory_checks::{check_assumptions, theorem1_witness, A1Status, AssumptionReport, CheckConfig};
use tradeoff_core::tradeoff::{
    eta_grid, general_curve, linear_curve, ml_curve, y_grid, zeta_grid, GeneralSolverConfig, TradeoffCurve,
};
use tradeoff_core::{presets, ClassifierSpec, HypothesisPair, Norm};

use crate::error::{CliError, CliResult};
use crate::inputs::{load_box, load_perturbation, load_problem, parse_classifier};
use crate::output::{csv_with_config, json_with_config, Metadata, Sink};
use crate::svg::{self, Marker, Plot, Series};
use crate::{Cli, Command, CurveKind, Format, GridArgs, Target};

pub fn run(cli: &Cli) -> CliResult<()> {
    let c = &cli.common;
    let norm: Norm = c.norm.into();
    match &cli.command {
        Command::Boundaries { eta, root_grid } => boundaries(cli, *eta, *root_grid),
        Command::Accuracy { classifier } | Command::Sensitivity { classifier } => {
            classifier_summary(cli, classifier, norm)
        }
        Command::Curve { kind, grids } => curve_cmd(cli, *kind, grids, norm),
        Command::Check => check_cmd(cli, norm),
        Command::Simulate {
            classifier,
            scenario,
            perturbation,
            n_obs,
            n_trials,
        } => {
            let pair = load_problem(&c.problem)?;
            let spec = parse_classifier(classifier, &pair)?;
            let pert = load_perturbation(scenario.as_deref(), perturbation.as_deref())?;
            let cfg = ExperimentConfig {
                n_obs: *n_obs,
                n_trials: *n_trials,
                base_seed: c.seed,
            };
            simulate_cmd(cli, &pair, &spec, &pert, &cfg)
        }
        Command::Design {
            gamma,
            box_file,
            restarts,
        } => design_cmd(cli, *gamma, box_file, *restarts, norm),
        Command::Reproduce {
            target,
            grids,
            restarts,
        } => reproduce(cli, *target, grids, *restarts),
    }
}

fn config(cli: &Cli, pair: Option<&HypothesisPair>, extra: Value) -> Value {
    json!({
        "common": cli.common,
        "command": cli.command,
        "problem": pair,
        "effective": extra,
    })
}

fn sink(cli: &Cli) -> CliResult<Sink> {
    Sink::new(cli.common.out.as_deref())
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
}

fn unsupported(format: Format, command: &str) -> CliError {
    CliError::Config(format!("format {format:?} is not available for `{command}`").to_lowercase())
}

fn boundaries(cli: &Cli, eta: f64, root_grid: usize) -> CliResult<()> {
    if root_grid < 2 {
        return Err(CliError::Config(format!("--root-grid needs at least 2 points, got {root_grid}")));
    }
    let pair = load_problem(&cli.common.problem)?;
    let report = if pair.both_gaussian() {
        ml_boundaries(&pair, eta)?
    } else {
        let search = SearchConfig {
            grid: root_grid,
            ..SearchConfig::default()
        };
        ml_boundaries_generic(&pair, eta, search)?
    };
    let cfg = config(cli, Some(&pair), json!({ "eta": eta }));
    let mut out = sink(cli)?;
    match cli.common.format {
        Format::Text => {
            let text = format!(
                "eta: {eta}\nmethod: {}\norientation: {}\nroots: {}\nresiduals: {}\n",
                serde_json::to_value(report.method).unwrap_or_default().as_str().unwrap_or(""),
                serde_json::to_value(report.orientation).unwrap_or_default().as_str().unwrap_or(""),
                fmt_vec(&report.roots),
                report.residuals.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(", "),
            );
            out.emit("boundaries.txt", &text)
        }
        Format::Json => out.emit("boundaries.json", &json_with_config(&cfg, &report)?),
        Format::Csv => {
            let mut csv = String::from("root,residual\n");
            for (r, e) in report.roots.iter().zip(&report.residuals) {
                csv.push_str(&format!("{r},{e}\n"));
            }
            out.emit("boundaries.csv", &csv_with_config(&cfg, &csv))
        }
        f => Err(unsupported(f, "boundaries")),
    }
}

#[derive(Serialize)]
struct ClassifierReport {
    classifier: ClassifierSpec,
    accuracy: f64,
    norm: Norm,
    sensitivity: f64,
    gradient: Vec<f64>,
    theta_names: Vec<String>,
}

fn classifier_summary(cli: &Cli, classifier: &str, norm: Norm) -> CliResult<()> {
    let pair = load_problem(&cli.common.problem)?;
    let spec = parse_classifier(classifier, &pair)?;
    let report = ClassifierReport {
        accuracy: spec.accuracy(&pair)?,
        sensitivity: spec.sensitivity(&pair, norm)?,
        gradient: spec.accuracy_gradient(&pair)?,
        theta_names: pair.theta_names(),
        classifier: spec,
        norm,
    };
    let is_accuracy = matches!(cli.command, Command::Accuracy { .. });
    let name = if is_accuracy { "accuracy" } else { "sensitivity" };
    let cfg = config(cli, Some(&pair), json!({ "classifier": report.classifier }));
    let mut out = sink(cli)?;
    match cli.common.format {
        Format::Text => {
            let b = report.classifier.boundary_set()?;
            let mut text = format!(
                "boundaries: {}\norientation: {}\naccuracy: {:.6}\n",
                fmt_vec(b.boundaries()),
                serde_json::to_value(b.orientation()).unwrap_or_default().as_str().unwrap_or(""),
                report.accuracy
            );
            if !is_accuracy {
                text.push_str(&format!(
                    "sensitivity ({}): {:.6}\ngradient [{}]: {}\n",
                    norm_name(norm),
                    report.sensitivity,
                    report.theta_names.join(", "),
                    fmt_vec(&report.gradient)
                ));
            }
            out.emit(&format!("{name}.txt"), &text)
        }
        Format::Json => out.emit(&format!("{name}.json"), &json_with_config(&cfg, &report)?),
        Format::Csv => {
            let mut csv = String::from("accuracy,sensitivity");
            for n in &report.theta_names {
                csv.push_str(&format!(",dA_d{n}"));
            }
            csv.push_str(&format!("\n{},{}", report.accuracy, report.sensitivity));
            for g in &report.gradient {
                csv.push_str(&format!(",{g}"));
            }
            csv.push('\n');
            out.emit(&format!("{name}.csv"), &csv_with_config(&cfg, &csv))
        }
        f => Err(unsupported(f, name)),
    }
}

fn norm_name(n: Norm) -> &'static str {
    match n {
        Norm::Inf => "inf",
        Norm::Two => "two",
    }
}

fn solver_config(grids: &GridArgs, seed: u64) -> GeneralSolverConfig {
    GeneralSolverConfig {
        grid: grids.grid,
        top_k: grids.top_k,
        seed,
        ..GeneralSolverConfig::default()
    }
}

fn build_curve(
    pair: &HypothesisPair,
    kind: CurveKind,
    grids: &GridArgs,
    norm: Norm,
    seed: u64,
) -> CliResult<TradeoffCurve> {
    Ok(match kind {
        CurveKind::Ml => ml_curve(pair, &eta_grid(grids.eta_steps)?, norm)?,
        CurveKind::Linear => linear_curve(pair, &y_grid(pair, grids.y_steps)?, norm)?,
        CurveKind::General => general_curve(
            pair,
            &zeta_grid(pair, grids.zeta_steps)?,
            grids.n_boundaries,
            norm,
            solver_config(grids, seed),
        )?,
    })
}

fn kind_name(k: CurveKind) -> &'static str {
    match k {
        CurveKind::Ml => "ml",
        CurveKind::Linear => "linear",
        CurveKind::General => "general",
    }
}

fn curve_effective(grids: &GridArgs, seed: u64) -> Value {
    json!({ "grids": grids, "general_solver": solver_config(grids, seed) })
}

fn curve_cmd(cli: &Cli, kind: CurveKind, grids: &GridArgs, norm: Norm) -> CliResult<()> {
    let pair = load_problem(&cli.common.problem)?;
    let curve = build_curve(&pair, kind, grids, norm, cli.common.seed)?;
    let cfg = config(cli, Some(&pair), curve_effective(grids, cli.common.seed));
    let name = format!("curve_{}", kind_name(kind));
    let mut out = sink(cli)?;
    match cli.common.format {
        Format::Text | Format::Csv => out.emit(&format!("{name}.csv"), &csv_with_config(&cfg, &curve.to_csv())),
        Format::Json => out.emit(&format!("{name}.json"), &json_with_config(&cfg, &curve)?),
        Format::Svg => {
            let plot = curve_plot(&pair, &[(kind, &curve)], norm, &cfg)?;
            out.emit(&format!("{name}.svg"), &svg::render(&plot))
        }
    }
}

fn curve_plot(
    pair: &HypothesisPair,
    curves: &[(CurveKind, &TradeoffCurve)],
    norm: Norm,
    cfg: &Value,
) -> CliResult<Plot> {
    let series = curves
        .iter()
        .map(|(k, c)| {
            let (color, dash) = match k {
                CurveKind::Ml => ("#1f77b4", None),
                CurveKind::Linear => ("#ff7f0e", Some("6 3")),
                CurveKind::General => ("#2ca02c", Some("2 2")),
            };
            Series {
                label: format!("{} classifier", kind_name(*k)),
                points: c.points.iter().map(|p| (p.accuracy, p.sensitivity)).collect(),
                color,
                dash,
            }
        })
        .collect();
    let mut markers = Vec::new();
    for (eta, color) in [(1.0, "red"), (0.4603, "green")] {
        let spec = ClassifierSpec::ml(eta)?.resolve(pair)?;
        markers.push(Marker {
            label: format!("ml eta={eta}"),
            at: (spec.accuracy(pair)?, spec.sensitivity(pair, norm)?),
            color,
            square: false,
        });
    }
    if let Ok(lin) = optimal_linear_boundary(pair) {
        let spec = ClassifierSpec::Linear {
            y: lin.y,
            orientation: lin.orientation,
        };
        markers.push(Marker {
            label: format!("best linear y={:.4}", lin.y),
            at: (lin.accuracy, spec.sensitivity(pair, norm)?),
            color: "red",
            square: true,
        });
    }
    Ok(Plot {
        title: format!("Sensitivity ({}-norm) versus accuracy", norm_name(norm)),
        x_label: "accuracy".into(),
        y_label: "sensitivity".into(),
        series,
        markers,
        comment: format!("config: {cfg}"),
    })
}

#[derive(Serialize)]
struct CheckOutput {
    assumptions: AssumptionReport,
    theorem1: Option<tradeoff_core::theory_checks::Theorem1Witness>,
    theorem1_error: Option<String>,
}

fn check_report(pair: &HypothesisPair, norm: Norm) -> CliResult<(CheckOutput, CheckConfig)> {
    let cfg = CheckConfig {
        norm,
        ..CheckConfig::default()
    };
    let assumptions = check_assumptions(pair, &cfg)?;
    let (theorem1, theorem1_error) = match theorem1_witness(pair, &cfg) {
        Ok(w) => (Some(w), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok((
        CheckOutput {
            assumptions,
            theorem1,
            theorem1_error,
        },
        cfg,
    ))
}

fn check_text(r: &CheckOutput) -> String {
    let a = &r.assumptions;
    let pass = |b: bool| if b { "PASS" } else { "FAIL" };
    let mut s = String::new();
    s.push_str(&format!("boundaries: {}\n", fmt_vec(a.boundaries.boundaries())));
    s.push_str(&format!("accuracy gradient: {}\n", fmt_vec(&a.accuracy_gradient)));
    match a.a1_status {
        A1Status::Holds => s.push_str(&format!(
            "A1: PASS (unique max component j={}, gap {:.3e})\n",
            a.a1_index_j, a.a1_gap
        )),
        A1Status::Tied | A1Status::Fragile => s.push_str(&format!(
            "A1: FAIL (two max components)\n  status: {}, gap {:.3e}\n",
            if a.a1_status == A1Status::Tied { "tied" } else { "fragile" },
            a.a1_gap
        )),
    }
    s.push_str(&format!(
        "A2: {} (boundary {}, w * dy/dtheta_j = {:.3e})\n",
        pass(a.a2_holds),
        a.a2_witness_index,
        a.a2_witness_value
    ));
    s.push_str(&format!(
        "A3: {} (inner product {:.3e})\n",
        pass(a.a3_holds),
        a.a3_inner_product
    ));
    match (&r.theorem1, &r.theorem1_error) {
        (Some(w), _) => {
            let verdict = if w.withheld {
                "WITHHELD (A1 fails)".to_string()
            } else {
                format!("{} (|dS/dy| = {:.3e})", if w.nonzero { "NONZERO" } else { "ZERO" }, w.gradient_norm)
            };
            s.push_str(&format!("sensitivity gradient: {verdict}\n"));
            s.push_str(&format!(
                "boundary identity: {} (max error {:.3e})\n",
                pass(w.identity_holds),
                w.identity_max_error
            ));
            match &w.descent {
                Some(d) => s.push_str(&format!(
                    "descent step: {:.3e} lowers sensitivity {:.6} -> {:.6}\n",
                    d.step, w.baseline_sensitivity, d.sensitivity
                )),
                None => s.push_str("descent step: none found\n"),
            }
        }
        (None, Some(e)) => s.push_str(&format!("theorem 1 witness: unavailable ({e})\n")),
        (None, None) => {}
    }
    s
}

fn check_cmd(cli: &Cli, norm: Norm) -> CliResult<()> {
    let pair = load_problem(&cli.common.problem)?;
    let (report, check_cfg) = check_report(&pair, norm)?;
    let cfg = config(cli, Some(&pair), json!({ "check": check_cfg }));
    let mut out = sink(cli)?;
    match cli.common.format {
        Format::Text => out.emit("check.txt", &check_text(&report)),
        Format::Json => out.emit("check.json", &json_with_config(&cfg, &report)?),
        f => Err(unsupported(f, "check")),
    }
}

fn classifier_label(spec: &ClassifierSpec) -> String {
    match spec {
        ClassifierSpec::MaximumLikelihood { eta, .. } => format!("ml(eta={eta})"),
        ClassifierSpec::Linear { y, .. } => format!("linear(y={y})"),
        ClassifierSpec::General(b) => format!("general(n={})", b.len()),
    }
}

const SUMMARY_HEADER: &str =
    "classifier        boundaries           nominal   scenario                 mc_mean   mc_std    analytic  se        z\n";

fn summary_row(pair: &HypothesisPair, scenario: &str, r: &ExperimentReport) -> CliResult<String> {
    let b = r.classifier.boundary_set()?;
    Ok(format!(
        "{:<17} {:<20} {:<9.6} {:<24} {:<9.6} {:<9.6} {:<9.6} {:<9.3e} {:+.2}\n",
        classifier_label(&r.classifier),
        b.boundaries().iter().map(|y| format!("{y:.4}")).collect::<Vec<_>>().join(", "),
        r.classifier.accuracy(pair)?,
        scenario,
        r.mean_accuracy,
        r.std_accuracy,
        r.analytic_accuracy,
        r.standard_error,
        r.z_score()
    ))
}

fn scenario_label(p: &PerturbationSpec) -> String {
    if *p == PerturbationSpec::s1() {
        "s1".into()
    } else if *p == PerturbationSpec::s2() {
        "s2".into()
    } else if *p == PerturbationSpec::default() {
        "none".into()
    } else {
        format!("({},{},{},{})", p.mu_bar_0, p.sigma_bar_0, p.mu_bar_1, p.sigma_bar_1)
    }
}

fn simulate_cmd(
    cli: &Cli,
    pair: &HypothesisPair,
    spec: &ClassifierSpec,
    pert: &PerturbationSpec,
    exp: &ExperimentConfig,
) -> CliResult<()> {
    let report = run_experiment(pair, spec, pert, exp)?;
    let cfg = config(cli, Some(pair), json!({ "experiment": exp, "perturbation": pert, "classifier": spec }));
    let mut out = sink(cli)?;
    match cli.common.format {
        Format::Text => {
            let text = format!(
                "{SUMMARY_HEADER}{}",
                summary_row(pair, &scenario_label(pert), &report)?
            );
            out.emit("simulate.txt", &text)
        }
        Format::Csv => out.emit("simulate.csv", &csv_with_config(&cfg, &report.to_csv())),
        Format::Json => out.emit("simulate.json", &json_with_config(&cfg, &report)?),
        f => Err(unsupported(f, "simulate")),
    }
}

fn design_config(restarts: usize) -> DesignConfig {
    DesignConfig {
        restarts,
        ..DesignConfig::default()
    }
}

fn design_cmd(cli: &Cli, gamma: f64, box_arg: &str, restarts: usize, norm: Norm) -> CliResult<()> {
    let bx = load_box(box_arg)?;
    let problem = bx.problem(gamma, norm)?;
    let dcfg = design_config(restarts);
    let result = design_params(&problem, &dcfg)?;
    let cfg = config(cli, None, json!({ "box": bx, "design": dcfg }));
    let mut out = sink(cli)?;
    match cli.common.format {
        Format::Text => {
            let text = format!(
                "gamma: {gamma}\nsensitivity*: {:.6}\naccuracy: {:.6}\ntheta* [{}]: {}\nmax accuracy: {:.6}\nbest restart: {}\n",
                result.sensitivity_star,
                result.accuracy,
                bx.template.theta_names().join(", "),
                fmt_vec(&result.theta_star),
                result.max_accuracy,
                result.best_restart
            );
            out.emit("design.txt", &text)
        }
        Format::Csv => out.emit(
            "design.csv",
            &csv_with_config(&cfg, &sweep_csv(&bx.template, std::slice::from_ref(&result))),
        ),
        Format::Json => out.emit("design.json", &json_with_config(&cfg, &result)?),
        f => Err(unsupported(f, "design")),
    }
}

fn reproduce(cli: &Cli, target: Target, grids: &GridArgs, restarts: usize) -> CliResult<()> {
    let start = Instant::now();
    let name = serde_json::to_value(target)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let dir = cli.common.out.clone().unwrap_or_else(|| PathBuf::from("out").join(&name));
    let mut out = Sink::new(Some(&dir))?;
    let seed = cli.common.seed;
    let cfg = match target {
        Target::Fig2a | Target::Fig2b | Target::Fig2c => {
            let (pair, norm) = match target {
                Target::Fig2a => (presets::table1(), Norm::Inf),
                Target::Fig2b => (presets::table1(), Norm::Two),
                _ => (presets::fig2c(), Norm::Inf),
            };
            let mut effective = curve_effective(grids, seed);
            effective["norm"] = json!(norm);
            let mut cfg = config(cli, Some(&pair), effective);
            let curves = [CurveKind::Ml, CurveKind::Linear, CurveKind::General]
                .into_iter()
                .map(|k| build_curve(&pair, k, grids, norm, seed).map(|c| (k, c)))
                .collect::<CliResult<Vec<_>>>()?;
            for (k, c) in &curves {
                out.emit(&format!("{}.csv", kind_name(*k)), &csv_with_config(&cfg, &c.to_csv()))?;
            }
            let refs: Vec<(CurveKind, &TradeoffCurve)> = curves.iter().map(|(k, c)| (*k, c)).collect();
            out.emit(&format!("{name}.svg"), &svg::render(&curve_plot(&pair, &refs, norm, &cfg)?))?;
            let omitted: Vec<_> = curves.iter().flat_map(|(_, c)| c.omitted.clone()).collect();
            cfg["omitted"] = json!(omitted);
            if target == Target::Fig2c {
                let (report, check_cfg) = check_report(&pair, norm)?;
                cfg["effective"]["check"] = json!(check_cfg);
                out.emit("check.txt", &check_text(&report))?;
                out.emit("check.json", &json_with_config(&cfg, &report)?)?;
            }
            cfg
        }
        Target::Fig3 => reproduce_fig3(cli, &mut out, restarts)?,
        Target::Table1 => reproduce_table1(cli, &mut out)?,
    };
    let meta = Metadata {
        command: "reproduce",
        config: &cfg,
        artifacts: out.written().to_vec(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Config(e.to_string()))? + "\n";
    out.emit("metadata.json", &text)?;
    eprintln!("wrote {} files to {}", out.written().len(), dir.display());
    Ok(())
}

fn reproduce_fig3(cli: &Cli, out: &mut Sink, restarts: usize) -> CliResult<Value> {
    let norm: Norm = cli.common.norm.into();
    let bx = load_box("fig3")?;
    let problem = bx.problem(0.9, norm)?;
    let dcfg = design_config(restarts);
    let gammas = presets::fig3_gammas();
    let results = gamma_sweep(&problem, &gammas, &dcfg);
    let mut ok: Vec<DesignResult> = Vec::new();
    let mut failed = Vec::new();
    for (g, r) in gammas.iter().zip(results) {
        match r {
            Ok(r) => ok.push(r),
            Err(e) => failed.push(json!({ "gamma": g, "reason": e.to_string() })),
        }
    }
    let mut cfg = config(cli, None, json!({ "box": bx, "design": dcfg, "gammas": gammas, "norm": norm }));
    cfg["failed"] = json!(failed);
    out.emit("fig3.csv", &csv_with_config(&cfg, &sweep_csv(&bx.template, &ok)))?;
    let comment = format!("config: {cfg}");
    let sens = Plot {
        title: "Minimum sensitivity versus prescribed accuracy".into(),
        x_label: "gamma".into(),
        y_label: "sensitivity*".into(),
        series: vec![Series {
            label: format!("S* ({}-norm)", norm_name(norm)),
            points: ok.iter().map(|r| (r.gamma, r.sensitivity_star)).collect(),
            color: "#1f77b4",
            dash: None,
        }],
        markers: Vec::new(),
        comment: comment.clone(),
    };
    out.emit("fig3a.svg", &svg::render(&sens))?;
    let colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"];
    // only the mean difference is identified for two Gaussians
    let columns: Vec<(String, Box<dyn Fn(&[f64]) -> f64>)> = if bx.template.both_gaussian() {
        vec![
            ("|mu1 - mu0|".into(), Box::new(|t: &[f64]| (t[2] - t[0]).abs())),
            ("sigma0".into(), Box::new(|t: &[f64]| t[1])),
            ("sigma1".into(), Box::new(|t: &[f64]| t[3])),
        ]
    } else {
        bx.template
            .theta_names()
            .into_iter()
            .enumerate()
            .map(|(j, n)| (n, Box::new(move |t: &[f64]| t[j]) as Box<dyn Fn(&[f64]) -> f64>))
            .collect()
    };
    let params = Plot {
        title: "Optimal parameters versus prescribed accuracy".into(),
        x_label: "gamma".into(),
        y_label: "parameter value".into(),
        series: columns
            .into_iter()
            .enumerate()
            .map(|(j, (label, f))| Series {
                label,
                points: ok.iter().map(|r| (r.gamma, f(&r.theta_star))).collect(),
                color: colors[j % colors.len()],
                dash: None,
            })
            .collect(),
        markers: Vec::new(),
        comment,
    };
    out.emit("fig3b.svg", &svg::render(&params))?;
    Ok(cfg)
}

fn reproduce_table1(cli: &Cli, out: &mut Sink) -> CliResult<Value> {
    let pair = presets::table1();
    let exp = ExperimentConfig {
        base_seed: cli.common.seed,
        ..ExperimentConfig::default()
    };
    let scenarios = [("s1", PerturbationSpec::s1()), ("s2", PerturbationSpec::s2())];
    let mut csv = String::from(
        "classifier,eta,y1,y2,accuracy,sensitivity_inf,s1_mc_mean,s1_analytic,s1_z,s2_mc_mean,s2_analytic,s2_z\n",
    );
    let mut text = String::from(SUMMARY_HEADER);
    let mut reports = Vec::new();
    for (label, spec) in [("c1", presets::classifier_c1()), ("c2", presets::classifier_c2())] {
        let spec = spec.resolve(&pair)?;
        let b = spec.boundary_set()?;
        let eta = match spec {
            ClassifierSpec::MaximumLikelihood { eta, .. } => eta,
            _ => unreachable!("table classifiers are ml"),
        };
        let y = b.boundaries();
        csv.push_str(&format!(
            "{label},{eta},{},{},{},{}",
            y.first().copied().unwrap_or(f64::NAN),
            y.get(1).copied().unwrap_or(f64::NAN),
            spec.accuracy(&pair)?,
            spec.sensitivity(&pair, Norm::Inf)?
        ));
        for (name, pert) in &scenarios {
            let r = run_experiment(&pair, &spec, pert, &exp)?;
            csv.push_str(&format!(",{},{},{}", r.mean_accuracy, r.analytic_accuracy, r.z_score()));
            text.push_str(&summary_row(&pair, name, &r)?);
            reports.push(json!({ "classifier": label, "scenario": name, "report": r }));
        }
        csv.push('\n');
    }
    let cfg = config(
        cli,
        Some(&pair),
        json!({ "experiment": exp, "scenarios": { "s1": scenarios[0].1, "s2": scenarios[1].1 } }),
    );
    out.emit("table1.csv", &csv_with_config(&cfg, &csv))?;
    out.emit("table1.txt", &text)?;
    out.emit("table1.json", &json_with_config(&cfg, &reports)?)?;
    Ok(cfg)
}
