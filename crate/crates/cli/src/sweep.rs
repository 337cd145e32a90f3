use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qso_core::{
    classify, detect_behavior, orbit_from_params, orbit_from_params_mirror, Behavior, Params, TwoCycle,
};

use crate::args::{Format, SweepArgs};
use crate::commands::{check_budget, check_tol, coefficient, emit};
use crate::error::{CliError, Result};

/// Starts used when `--x0` is not given: two per piece, off the breakpoints.
pub const DEFAULT_STARTS: [f64; 6] = [0.1, 0.2, 0.45, 0.55, 0.8, 0.9];

/// Values taken by one coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / last)
            .collect()
    }
}

fn coefficient_index(name: &str, flag: &str) -> Result<usize> {
    match name {
        "a" => Ok(0),
        "b" => Ok(1),
        "c" => Ok(2),
        other => Err(CliError::invalid(
            flag,
            format!("unknown coefficient {other:?}, expected a, b or c"),
        )),
    }
}

fn number(flag: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::invalid(flag, format!("{s:?} is not a number")))
}

/// Parses `k=v`.
pub fn parse_fix(spec: &str) -> Result<(usize, f64)> {
    let (k, v) = spec
        .split_once('=')
        .ok_or_else(|| CliError::invalid("--fix", format!("{spec:?} is not of the form k=v")))?;
    let idx = coefficient_index(k.trim(), "--fix")?;
    Ok((idx, coefficient("--fix", number("--fix", v)?)?))
}

/// Parses `k:lo:hi:n`. A single point needs `lo == hi` and `n == 1`;
/// otherwise `lo < hi` and `n >= 2`.
pub fn parse_axis(spec: &str) -> Result<(usize, AxisSpec)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [k, lo, hi, n] = parts[..] else {
        return Err(CliError::invalid(
            "--axis",
            format!("{spec:?} is not of the form k:lo:hi:n"),
        ));
    };
    let idx = coefficient_index(k.trim(), "--axis")?;
    let lo = coefficient("--axis", number("--axis", lo)?)?;
    let hi = coefficient("--axis", number("--axis", hi)?)?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| CliError::invalid("--axis", format!("{n:?} is not a point count")))?;
    match (lo == hi, n) {
        (true, 1) => {}
        (true, _) => {
            return Err(CliError::invalid(
                "--axis",
                format!("{spec}: a single value needs n = 1"),
            ))
        }
        (false, _) if lo > hi => return Err(CliError::invalid("--axis", format!("{spec}: lo exceeds hi"))),
        (false, 0 | 1) => {
            return Err(CliError::invalid(
                "--axis",
                format!("{spec}: n must be at least 2"),
            ))
        }
        (false, _) => {}
    }
    Ok((idx, AxisSpec { lo, hi, n }))
}

/// Values of `a`, `b`, `c`. Coefficients named by neither flag stay at 1/2.
pub fn build_axes(fixes: &[String], axes: &[String]) -> Result<[AxisSpec; 3]> {
    let mut out: [Option<AxisSpec>; 3] = [None, None, None];
    let names = ["a", "b", "c"];
    let mut set = |idx: usize, spec: AxisSpec, flag: &str| {
        if out[idx].is_some() {
            return Err(CliError::invalid(
                flag,
                format!("coefficient {} given twice", names[idx]),
            ));
        }
        out[idx] = Some(spec);
        Ok(())
    };
    for f in fixes {
        let (idx, v) = parse_fix(f)?;
        set(idx, AxisSpec { lo: v, hi: v, n: 1 }, "--fix")?;
    }
    for a in axes {
        let (idx, spec) = parse_axis(a)?;
        set(idx, spec, "--axis")?;
    }
    Ok(out.map(|s| {
        s.unwrap_or(AxisSpec {
            lo: 0.5,
            hi: 0.5,
            n: 1,
        })
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartResult {
    pub x0: f64,
    pub behavior: Behavior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub regime: String,
    pub starts: Vec<StartResult>,
    /// Closed-form 2-cycles (only with `--cycles`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycles: Vec<TwoCycle>,
}

/// Compact behavior tag, e.g. `ConvergedTo(0)` or `Trapped(A2)`.
pub fn behavior_tag(b: &Behavior) -> String {
    match b {
        Behavior::ConvergedTo { limit } => format!("ConvergedTo({limit})"),
        Behavior::Trapped { label, .. } => format!("Trapped({label})"),
        Behavior::CycleDetected { period, .. } => format!("CycleDetected({period})"),
        other => other.tag().to_string(),
    }
}

/// Limit, absorbing point, entry step or `|`-joined cycle points.
pub fn behavior_value(b: &Behavior) -> String {
    match b {
        Behavior::ConvergedTo { limit } => limit.to_string(),
        Behavior::AbsorbedAt { fixed_point, .. } => fixed_point.to_string(),
        Behavior::Trapped { entry_step, .. } => entry_step.to_string(),
        Behavior::CycleDetected { orbit, .. } => {
            orbit.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|")
        }
        Behavior::BudgetExhausted => String::new(),
    }
}

pub struct SweepPlan {
    pub axes: [AxisSpec; 3],
    pub starts: Vec<f64>,
    pub budget: usize,
    pub tol: f64,
    pub cycles: bool,
}

impl SweepPlan {
    pub fn cell_count(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    /// Runs every cell in parallel; cells come back in row-major order
    /// (`a` outermost, `c` innermost).
    pub fn run(&self) -> Vec<SweepCell> {
        let [av, bv, cv] = [
            self.axes[0].values(),
            self.axes[1].values(),
            self.axes[2].values(),
        ];
        let (nb, nc) = (bv.len(), cv.len());
        (0..self.cell_count())
            .into_par_iter()
            .map(|i| {
                let (a, b, c) = (av[i / (nb * nc)], bv[(i / nc) % nb], cv[i % nc]);
                let p = Params::new(a, b, c).expect("axis values validated");
                let starts = self
                    .starts
                    .iter()
                    .map(|&x0| StartResult {
                        x0,
                        behavior: detect_behavior(&p, x0, self.budget, self.tol)
                            .expect("starts and budget validated")
                            .behavior,
                    })
                    .collect();
                let cycles = if self.cycles {
                    orbit_from_params(a, b)
                        .into_iter()
                        .chain(orbit_from_params_mirror(b, c))
                        .collect()
                } else {
                    Vec::new()
                };
                SweepCell {
                    a,
                    b,
                    c,
                    regime: classify(&p).name().to_string(),
                    starts,
                    cycles,
                }
            })
            .collect()
    }
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(";")
}

/// One CSV row per cell; per-start fields are `;`-joined in start order.
pub fn sweep_csv(cells: &[SweepCell], with_cycles: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["a", "b", "c", "regime", "x0", "behavior", "value"];
    if with_cycles {
        header.extend(["cycle13_x1", "cycle13_x2", "cycle23_x1", "cycle23_x2"]);
    }
    w.write_record(&header)?;
    for cell in cells {
        let mut row = vec![
            cell.a.to_string(),
            cell.b.to_string(),
            cell.c.to_string(),
            cell.regime.clone(),
            join(&cell.starts, |s| s.x0.to_string()),
            join(&cell.starts, |s| behavior_tag(&s.behavior)),
            join(&cell.starts, |s| behavior_value(&s.behavior)),
        ];
        if with_cycles {
            for side in [qso_core::CycleSide::Near13, qso_core::CycleSide::Near23] {
                match cell.cycles.iter().find(|c| c.side == side) {
                    Some(c) => row.extend([c.x1.to_string(), c.x2.to_string()]),
                    None => row.extend([String::new(), String::new()]),
                }
            }
        }
        w.write_record(&row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io("<sweep>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_cmd(args: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let axes = build_axes(&args.fixes, &args.axes)?;
    let starts = if args.starts.is_empty() {
        DEFAULT_STARTS.to_vec()
    } else {
        args.starts.clone()
    };
    for &x0 in &starts {
        coefficient("--x0", x0)?;
    }
    let plan = SweepPlan {
        axes,
        starts,
        budget: check_budget(args.budget)?,
        tol: check_tol(args.tol)?,
        cycles: args.cycles,
    };
    let cells = plan.run();
    let text = match args.format {
        Format::Csv => sweep_csv(&cells, args.cycles)?,
        Format::Json => serde_json::to_string_pretty(&cells)? + "\n",
    };
    emit(args.out.as_deref(), out, &text)?;
    Ok(0)
}
