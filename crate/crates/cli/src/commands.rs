use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use qso_core::dynamics::{DEFAULT_BUDGET, DEFAULT_TOL};
use qso_core::periodic::{mirror_admissibility_scan, mirror_scan_csv};
use qso_core::suites::{group_labels, run_suite, SuiteConfig};
use qso_core::{
    brute_force_two_cycles, classify, detect_behavior, eval_derivative, fixed_point_set, iterate,
    orbit_from_params, orbit_from_params_mirror, params_from_orbit, stability_of, trapping_sets,
    validate_condition_pc, CycleSide, IntervalSet, OrbitRecord, Params, QsoError, RegimeCase, StabilityClass,
    TrappingSet, TwoCycle,
};

use crate::args::{ClassifyArgs, Coefficients, CycleArgs, Format, SimulateArgs, VerifyArgs};
use crate::error::{CliError, Result};

/// Exit status of a suite with a failing clause.
pub const SUITE_FAILURE: i32 = 2;

pub(crate) fn coefficient(flag: &str, v: f64) -> Result<f64> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(CliError::invalid(flag, format!("{v} is not in [0,1]")))
    }
}

pub(crate) fn params(c: &Coefficients) -> Result<Params> {
    let p = Params::new(
        coefficient("--a", c.a)?,
        coefficient("--b", c.b)?,
        coefficient("--c", c.c)?,
    );
    p.map_err(|e| CliError::invalid("--a/--b/--c", e.to_string()))
}

pub(crate) fn check_budget(budget: usize) -> Result<usize> {
    if budget == 0 {
        return Err(CliError::invalid("--budget", "must be at least 1"));
    }
    Ok(budget)
}

pub(crate) fn check_tol(tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::invalid(
            "--tol",
            format!("{tol} is not a positive number"),
        ));
    }
    Ok(tol)
}

pub(crate) fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_stream(w: &mut dyn Write, content: &str) -> Result<()> {
    w.write_all(content.as_bytes())
        .map_err(|e| CliError::io("<output>", e))
}

/// Writes to `path` when given, otherwise to `out`.
pub(crate) fn emit(path: Option<&Path>, out: &mut dyn Write, content: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, content),
        None => write_stream(out, content),
    }
}

fn cycle_line(label: &str, c: &TwoCycle) -> String {
    let class = match c.stability() {
        StabilityClass::Attracting => "attracting",
        StabilityClass::Repelling => "repelling",
        StabilityClass::Indifferent => "indifferent",
    };
    format!(
        "2-cycle near {label}: {{{:.9}, {:.9}}}, multiplier {:.6}, {class}",
        c.x1, c.x2, c.multiplier
    )
}

/// Closed-form 2-cycles of `p` on either side, as summary lines.
pub fn cycle_summary(p: &Params) -> Vec<String> {
    let mut lines = Vec::new();
    if let Some(c) = orbit_from_params(p.a(), p.b()) {
        lines.push(cycle_line("1/3", &c));
    }
    if let Some(c) = orbit_from_params_mirror(p.b(), p.c()) {
        lines.push(cycle_line("2/3", &c));
    }
    lines
}

fn cobweb_csv(record: &OrbitRecord) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "x", "fx"])?;
    for pair in record.samples.windows(2) {
        if pair[1].step == pair[0].step + 1 {
            w.serialize((pair[0].step, pair[0].x, pair[1].x))?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io("<cobweb>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let p = params(&args.coefficients)?;
    let x0 = coefficient("--x0", args.x0)?;
    let budget = check_budget(args.budget)?;
    let tol = check_tol(args.tol)?;

    let detected =
        detect_behavior(&p, x0, budget, tol).map_err(|e| CliError::invalid("--x0", e.to_string()))?;
    let record = match args.n {
        Some(n) => {
            let mut r = iterate(&p, x0, n).map_err(|e| CliError::invalid("--x0", e.to_string()))?;
            r.behavior = detected.behavior.clone();
            r
        }
        None => detected.clone(),
    };
    let data = match args.format {
        Format::Csv => record.to_csv(),
        Format::Json => serde_json::to_string_pretty(&record)? + "\n",
    };
    if let Some(path) = &args.cobweb {
        write_file(path, &cobweb_csv(&record)?)?;
    }

    let mut summary = format!("{}\n", detected.behavior);
    for line in cycle_summary(&p) {
        summary.push_str(&line);
        summary.push('\n');
    }
    match &args.out {
        Some(path) => {
            write_file(path, &data)?;
            write_stream(out, &summary)?;
        }
        None => {
            write_stream(out, &data)?;
            write_stream(err, &summary)?;
        }
    }
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointStability {
    pub point: f64,
    pub multiplier: f64,
    pub class: StabilityClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub regime: RegimeCase,
    pub fix: IntervalSet,
    pub trapping_sets: Vec<TrappingSet>,
    pub stability: Vec<PointStability>,
}

pub fn classify_report(p: &Params) -> ClassifyReport {
    let fix = fixed_point_set(p);
    let stability = fix
        .isolated_points()
        .map(|x| PointStability {
            point: x,
            multiplier: eval_derivative(p, x).expect("fixed points lie in [0,1]"),
            class: stability_of(p, x, None).expect("isolated points of Fix are fixed"),
        })
        .collect();
    ClassifyReport {
        regime: classify(p),
        fix,
        trapping_sets: trapping_sets(p),
        stability,
    }
}

impl ClassifyReport {
    pub fn render(&self) -> String {
        let mut out = format!("{}; Fix = {}\n", self.regime, self.fix);
        let sides = self.regime.sides();
        if !sides.is_empty() {
            out.push_str(&format!("coefficients: {sides}\n"));
        }
        for t in &self.trapping_sets {
            out.push_str(&format!("trapping: {t}\n"));
        }
        for s in &self.stability {
            out.push_str(&format!(
                "stability of {}: {:?} (f' = {})\n",
                s.point, s.class, s.multiplier
            ));
        }
        out
    }
}

pub fn classify_cmd(args: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let p = params(&args.coefficients)?;
    let report = classify_report(&p);
    let text = match args.format {
        Format::Csv => report.render(),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
    };
    emit(args.out.as_deref(), out, &text)?;
    Ok(0)
}

fn optional_coefficient(flag: &str, v: Option<f64>) -> Result<Option<f64>> {
    v.map(|v| coefficient(flag, v)).transpose()
}

fn cycle_json(c: &Option<TwoCycle>) -> Result<String> {
    Ok(match c {
        Some(c) => serde_json::to_string(c)?,
        None => "none".to_string(),
    })
}

pub fn cycle_cmd(args: &CycleArgs, out: &mut dyn Write) -> Result<i32> {
    if args.grid < 2 {
        return Err(CliError::invalid("--grid", "needs at least 2 nodes"));
    }
    if let Some(res) = args.mirror_scan {
        if res < 2 {
            return Err(CliError::invalid(
                "--mirror-scan",
                "resolution must be at least 2",
            ));
        }
        let rows = mirror_admissibility_scan(res, args.grid);
        let text = match args.format {
            Format::Csv => mirror_scan_csv(&rows),
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        };
        emit(args.out.as_deref(), out, &text)?;
        return Ok(0);
    }

    let a = optional_coefficient("--a", args.a)?;
    let b = optional_coefficient("--b", args.b)?;
    let c = optional_coefficient("--c", args.c)?;
    let text = match (args.x1, args.x2) {
        (Some(x1), Some(x2)) => forward(args, x1, x2)?,
        (None, None) => inverse(args, a, b, c)?,
        (Some(_), None) => return Err(CliError::invalid("--x2", "required together with --x1")),
        (None, Some(_)) => return Err(CliError::invalid("--x1", "required together with --x2")),
    };
    emit(args.out.as_deref(), out, &text)?;
    Ok(0)
}

fn forward(args: &CycleArgs, x1: f64, x2: f64) -> Result<String> {
    let (k1, k2) = params_from_orbit(x1, x2).map_err(|e| match e {
        QsoError::DegenerateOrbit { .. } if x1 == x2 => CliError::invalid("--x1/--x2", "x1 equals x2"),
        other => CliError::invalid("--x1/--x2", other.to_string()),
    })?;
    // the mirror pair is admissible when its reflection y = 1 - x is
    let admissible = if args.mirror {
        validate_condition_pc(1.0 - x2, 1.0 - x1)
    } else {
        validate_condition_pc(x1, x2)
    };
    let (n1, n2) = if args.mirror { ("b", "c") } else { ("a", "b") };
    Ok(match args.format {
        Format::Csv => format!("{n1}={k1}, {n2}={k2}\nadmissible: {admissible}\n"),
        Format::Json => {
            serde_json::to_string(&json!({"x1": x1, "x2": x2, n1: k1, n2: k2, "admissible": admissible}))?
                + "\n"
        }
    })
}

fn inverse(args: &CycleArgs, a: Option<f64>, b: Option<f64>, c: Option<f64>) -> Result<String> {
    let (closed, p, side) = if args.mirror {
        let b = b.ok_or_else(|| CliError::invalid("--b", "required with --mirror"))?;
        let c = c.ok_or_else(|| CliError::invalid("--c", "required with --mirror"))?;
        let p = Params::new(a.unwrap_or(0.5), b, c).expect("validated coefficients");
        (orbit_from_params_mirror(b, c), p, CycleSide::Near23)
    } else {
        let a = a.ok_or_else(|| CliError::Usage("cycle needs --x1 and --x2, or --a and --b".into()))?;
        let b = b.ok_or_else(|| CliError::invalid("--b", "required together with --a"))?;
        let p = Params::new(a, b, c.unwrap_or(0.5)).expect("validated coefficients");
        (orbit_from_params(a, b), p, CycleSide::Near13)
    };
    let oracle = args.oracle.then(|| brute_force_two_cycles(&p, side, args.grid));
    Ok(match args.format {
        Format::Csv => {
            let mut s = cycle_json(&closed)? + "\n";
            if let Some(found) = &oracle {
                s.push_str(&format!("oracle: {}\n", serde_json::to_string(found)?));
            }
            s
        }
        Format::Json => {
            let mut v = json!({ "closed_form": closed });
            if let Some(found) = oracle {
                v["oracle"] = serde_json::to_value(found)?;
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
    })
}

pub fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(t) = &args.theorem {
        let labels = group_labels();
        if !labels.contains(&t.as_str()) {
            return Err(CliError::invalid(
                "--theorem",
                format!("{t} is not one of {}", labels.join(", ")),
            ));
        }
    }
    let config = SuiteConfig {
        budget: DEFAULT_BUDGET,
        tol: DEFAULT_TOL,
        ..SuiteConfig::default()
    };
    let report = run_suite(args.theorem.as_deref(), args.seed, &config);
    emit(args.out.as_deref(), out, &report.render())?;
    Ok(if report.passed() { 0 } else { SUITE_FAILURE })
}
