use std::f64::consts::PI;

use cespdc::single_mode::{compare_models_with, g2_multi_finite_n, scan};
use cespdc::{
    coeffs, denominator, g2_comb, g2_single, squeezing_spectrum, verify, CorrelationComb, GainSetting, KMax,
    SingleModeParams,
};
use serde_json::json;

use crate::args::{Command, Format};
use crate::config::{Point, Settings};
use crate::error::{CliError, Result};
use crate::output::{emit, write_json, Cell, Meta, Table};

pub fn run(command: &Command, s: &Settings) -> Result<()> {
    match command {
        Command::Coeffs(_) => coeff_table(s),
        Command::Squeeze(_) => squeeze_table(s),
        Command::G2(_) if s.envelopes.is_some() => envelopes(s),
        Command::G2(_) => g2(s),
        Command::G2Single(_) => g2_single_table(s),
        Command::Render(_) => render(s),
        Command::Compare(_) if s.scan.is_some() => scan_table(s, "compare"),
        Command::Compare(_) => compare(s),
        Command::Scan(_) => scan_table(s, "scan"),
        Command::Verify => verify_report(s),
    }
}

fn resolve(s: &Settings) -> Result<Point> {
    let p = s.point()?;
    eprintln!(
        "resolved r = {} (r/r_th = {}, r_th = {})",
        p.gain.r(),
        p.gain.fraction(),
        p.gain.r_th()
    );
    Ok(p)
}

fn point_meta(command: &str, p: &Point) -> Meta {
    let mut m = Meta::new(command);
    m.push("r1", p.cavity.r1())
        .push("r2", p.cavity.r2())
        .push("tau", p.cavity.tau())
        .push("r", p.gain.r())
        .push("r_th", p.gain.r_th())
        .push("gain_fraction", p.gain.fraction());
    m
}

fn write_table(s: &Settings, t: &Table) -> Result<()> {
    match s.format() {
        Format::Csv => emit(s.output.as_deref(), |w| t.write_csv(w)),
        Format::Json => emit(s.output.as_deref(), |w| write_json(&t.to_json(), w)),
    }
}

fn grid(min: f64, max: f64, points: usize, what: &str) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) {
        return Err(CliError::usage(format!("{what} grid bounds must be finite")));
    }
    match points {
        0 => Err(CliError::usage(format!("{what} grid needs at least one point"))),
        1 => Ok(vec![min]),
        _ if max <= min => Err(CliError::usage(format!(
            "{what} grid must be increasing: {min} >= {max}"
        ))),
        n => Ok((0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

/// Frequency grid in the user's unit plus the matching rad/s values.
fn omega_grid(s: &Settings, p: &Point, m: &mut Meta) -> Result<(Vec<f64>, Vec<f64>)> {
    let unit = if s.rad_per_s { 1.0 } else { p.cavity.fsr() };
    let shown = grid(
        s.omega_min.unwrap_or(-0.5 * p.cavity.fsr() / unit),
        s.omega_max.unwrap_or(0.5 * p.cavity.fsr() / unit),
        s.points.unwrap_or(1001),
        "omega",
    )?;
    m.push("omega_unit", if s.rad_per_s { "rad/s" } else { "fsr" })
        .push("fsr", p.cavity.fsr());
    let rad = shown.iter().map(|w| w * unit).collect();
    Ok((shown, rad))
}

fn coeff_table(s: &Settings) -> Result<()> {
    let p = resolve(s)?;
    let mut meta = point_meta("coeffs", &p);
    let (shown, rad) = omega_grid(s, &p, &mut meta)?;
    let cols = [
        "omega", "re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "re_d", "im_d", "abs_d",
    ];
    let rows = s
        .exec()
        .map_range(0..rad.len(), |i| -> cespdc::Result<Vec<Cell>> {
            let k = coeffs(&p.cavity, &p.gain, rad[i])?;
            let d = denominator(&p.cavity, &p.gain, rad[i])?;
            let mut row = vec![Cell::F(shown[i])];
            for z in [k.a, k.b, k.c, k.d] {
                row.extend([Cell::F(z.re), Cell::F(z.im)]);
            }
            row.push(Cell::F(d.norm()));
            Ok(row)
        });
    let mut t = Table::new(meta, cols);
    for r in rows {
        t.row(r?);
    }
    write_table(s, &t)
}

fn squeeze_table(s: &Settings) -> Result<()> {
    let p = resolve(s)?;
    let mut meta = point_meta("squeeze", &p);
    let (shown, rad) = omega_grid(s, &p, &mut meta)?;
    let rows = s
        .exec()
        .map_range(0..rad.len(), |i| -> cespdc::Result<Vec<Cell>> {
            let lo = squeezing_spectrum(&p.cavity, &p.gain, rad[i], 0.0)?;
            let hi = squeezing_spectrum(&p.cavity, &p.gain, rad[i], PI)?;
            Ok(vec![shown[i].into(), lo.into(), hi.into()])
        });
    let mut t = Table::new(meta, ["omega", "s_theta0", "s_thetapi"]);
    for r in rows {
        t.row(r?);
    }
    write_table(s, &t)
}

fn kmax_meta(m: &mut Meta, k: KMax, comb: &CorrelationComb) {
    match k {
        KMax::Fixed(_) => m.push("k_max_policy", "fixed"),
        KMax::Auto { cap } => m.push("k_max_policy", "auto").push("k_cap", cap),
    };
    m.push("k_max", comb.k_max());
}

fn g2(s: &Settings) -> Result<()> {
    let p = resolve(s)?;
    let k = s.k_max()?;
    let comb = g2_comb(&p.cavity, &p.gain, k)?;
    let normalized: Option<Vec<f64>> = match comb.envelope() {
        Ok(env) => Some(env.iter().map(|e| e.value).collect()),
        Err(cespdc::Error::DegenerateComb) => None,
        Err(e) => return Err(e.into()),
    };
    let mut meta = point_meta("g2", &p);
    kmax_meta(&mut meta, k, &comb);
    match s.format() {
        Format::Json => {
            let doc = json!({
                "meta": meta.to_json(),
                "params": {
                    "r1": p.cavity.r1(),
                    "r2": p.cavity.r2(),
                    "tau": p.cavity.tau(),
                    "r": p.gain.r(),
                    "r_th": p.gain.r_th(),
                },
                "weights": comb.weights,
                "background": comb.background,
                "normalized": normalized,
            });
            emit(s.output.as_deref(), |w| write_json(&doc, w))
        }
        Format::Csv => {
            meta.push("background", comb.background);
            let mut t = Table::new(meta, ["k", "t", "weight", "normalized"]);
            for (i, w) in comb.weights.iter().enumerate() {
                let n = normalized.as_ref().map_or(f64::NAN, |v| v[i]);
                t.row(vec![
                    i.into(),
                    (i as f64 * comb.tau).into(),
                    (*w).into(),
                    n.into(),
                ]);
            }
            write_table(s, &t)
        }
    }
}

/// Normalized envelopes at several threshold fractions on a shared lag axis.
fn envelopes(s: &Settings) -> Result<()> {
    let cavity = s.cavity()?;
    let fracs = s.envelopes.as_deref().unwrap_or_default();
    if fracs.is_empty() {
        return Err(CliError::usage("--envelopes needs at least one fraction"));
    }
    let gains = fracs
        .iter()
        .map(|&f| GainSetting::fraction_of_threshold(&cavity, f))
        .collect::<cespdc::Result<Vec<_>>>()?;
    let k = s.k_max()?;
    let shared = match k {
        KMax::Fixed(n) => n,
        KMax::Auto { .. } => gains
            .iter()
            .map(|g| g2_comb(&cavity, g, k).map(|c| c.k_max()))
            .try_fold(0, |acc, n| n.map(|n| acc.max(n)))?,
    };
    let envs = gains
        .iter()
        .map(|g| g2_comb(&cavity, g, KMax::Fixed(shared))?.envelope())
        .collect::<cespdc::Result<Vec<_>>>()?;

    let mut meta = Meta::new("g2");
    meta.push("r1", cavity.r1())
        .push("r2", cavity.r2())
        .push("tau", cavity.tau())
        .push("r_th", gains[0].r_th())
        .push("k_max", shared);
    let mut cols = vec!["k".to_owned(), "t".to_owned()];
    for (f, g) in fracs.iter().zip(&gains) {
        cols.push(format!("envelope_frac_{f}"));
        meta.push(&format!("r_at_frac_{f}"), g.r());
    }
    let mut t = Table::new(meta, cols);
    for i in 0..=shared {
        let mut row = vec![Cell::from(i), Cell::F(i as f64 * cavity.tau())];
        row.extend(envs.iter().map(|e| Cell::F(e[i].value)));
        t.row(row);
    }
    write_table(s, &t)
}

fn g2_single_table(s: &Settings) -> Result<()> {
    let p = resolve(s)?;
    let sm = SingleModeParams::from_cavity(&p.cavity, &p.gain)?;
    let tau = p.cavity.tau();
    let ts = grid(
        s.t_min.unwrap_or(0.0),
        s.t_max.unwrap_or(5.0 * tau),
        s.points.unwrap_or(1001),
        "t",
    )?;
    let mut meta = point_meta("g2-single", &p);
    meta.push("gamma1", sm.gamma1)
        .push("gamma2", sm.gamma2)
        .push("epsilon", sm.epsilon)
        .push("coherence_time", sm.coherence_time());
    let mut cols = vec!["t", "g2", "normalized"];
    if let Some(n) = s.modes {
        meta.push("modes", 2 * n + 1);
        cols.push("g2_modes");
    }
    let g0 = g2_single(&sm, 0.0);
    let mut t = Table::new(meta, cols);
    for &x in &ts {
        let v = g2_single(&sm, x);
        let mut row = vec![Cell::F(x), Cell::F(v), Cell::F(v / g0)];
        if let Some(n) = s.modes {
            row.push(Cell::F(g2_multi_finite_n(&sm, n, x, tau)));
        }
        t.row(row);
    }
    write_table(s, &t)
}

fn render(s: &Settings) -> Result<()> {
    let p = resolve(s)?;
    let tau = p.cavity.tau();
    let k = s.k_max()?;
    let comb = g2_comb(&p.cavity, &p.gain, k)?;
    let fwhm = s.fwhm.unwrap_or(0.02 * tau);
    let ts = grid(
        s.t_min.unwrap_or(0.0),
        s.t_max.unwrap_or(10.0 * tau),
        s.points.unwrap_or(2001),
        "t",
    )?;
    let mut values = comb.render_lorentzian(fwhm, &ts, s.exec())?;
    let mut meta = point_meta("render", &p);
    kmax_meta(&mut meta, k, &comb);
    meta.push("fwhm", fwhm).push("background", comb.background);
    if s.normalized {
        let v0 = comb.render_lorentzian(fwhm, &[0.0], s.exec())?[0];
        if !(v0 > 0.0) {
            return Err(cespdc::Error::DegenerateComb.into());
        }
        values.iter_mut().for_each(|v| *v /= v0);
        meta.push("normalized_by", v0);
    }
    let mut t = Table::new(meta, ["t", "value"]);
    for (x, v) in ts.iter().zip(values) {
        t.row(vec![(*x).into(), v.into()]);
    }
    write_table(s, &t)
}

fn compare(s: &Settings) -> Result<()> {
    let p = resolve(s)?;
    let k = s.k_max()?;
    let cmp = compare_models_with(&p.cavity, &p.gain, k, Default::default())?;
    let mut t = Table::new(point_meta("compare", &p), ["max_deviation", "worst_lag", "k_max"]);
    t.row(vec![
        cmp.max_deviation.into(),
        cmp.worst_lag.into(),
        cmp.k_max.into(),
    ]);
    eprintln!("max deviation {} at lag {}", cmp.max_deviation, cmp.worst_lag);
    write_table(s, &t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<f64>,
}

pub fn parse_axis(arg: &str) -> Result<Axis> {
    let bad = || CliError::usage(format!("bad scan axis {arg:?}; expected name=start:stop:count"));
    let (name, range) = arg.split_once('=').ok_or_else(bad)?;
    let name = match name.trim() {
        "r1" => "r1",
        "r2" => "r2",
        "gainfrac" | "gain_frac" => "gainfrac",
        other => {
            return Err(CliError::usage(format!(
                "unknown scan axis {other:?}; use r1, r2 or gainfrac"
            )))
        }
    };
    let parts: Vec<&str> = range.split(':').collect();
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    let n: usize = n.parse().map_err(|_| bad())?;
    Ok(Axis {
        name,
        values: grid(a, b, n, name)?,
    })
}

fn scan_table(s: &Settings, command: &str) -> Result<()> {
    let mut r1s = grid(0.5, 0.99, 25, "r1")?;
    let mut r2s = r1s.clone();
    let mut fracs = grid(0.05, 0.95, 19, "gainfrac")?;
    let mut seen = Vec::new();
    for arg in s.scan.as_deref().unwrap_or_default() {
        let axis = parse_axis(arg)?;
        if seen.contains(&axis.name) {
            return Err(CliError::usage(format!("scan axis {} given twice", axis.name)));
        }
        seen.push(axis.name);
        match axis.name {
            "r1" => r1s = axis.values,
            "r2" => r2s = axis.values,
            _ => fracs = axis.values,
        }
    }
    let rows = scan(&r1s, &r2s, &fracs, s.exec())?;

    let mut meta = Meta::new(command);
    let span = |v: &[f64]| format!("{}:{}:{}", v[0], v[v.len() - 1], v.len());
    meta.push("tau", 1.0)
        .push("r1", span(&r1s))
        .push("r2", span(&r2s))
        .push("gainfrac", span(&fracs))
        .push("points", rows.len());
    let mut t = Table::new(meta, ["r1", "r2", "gain_fraction", "max_deviation", "worst_lag"]);
    for r in &rows {
        t.row(vec![
            r.r1.into(),
            r.r2.into(),
            r.gain_fraction.into(),
            r.max_deviation.into(),
            r.worst_lag.into(),
        ]);
    }
    if let Some(w) = rows
        .iter()
        .max_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation))
    {
        t.summary
            .push("global_max_deviation", w.max_deviation)
            .push("at_r1", w.r1)
            .push("at_r2", w.r2)
            .push("at_gain_fraction", w.gain_fraction);
        eprintln!(
            "global max deviation {} at r1 = {}, r2 = {}, gain fraction = {}",
            w.max_deviation, w.r1, w.r2, w.gain_fraction
        );
    }
    write_table(s, &t)
}

fn verify_report(s: &Settings) -> Result<()> {
    let p = resolve(s)?;
    let report = verify::run(&p.cavity, &p.gain, s.exec())?;
    let mut meta = point_meta("verify", &p);
    meta.push("passed", report.passed());
    match s.format() {
        Format::Json => {
            let doc = json!({ "meta": meta.to_json(), "checks": report.checks, "passed": report.passed() });
            emit(s.output.as_deref(), |w| write_json(&doc, w))?;
        }
        Format::Csv => {
            let mut t = Table::new(meta, ["check", "worst", "tolerance", "passed"]);
            for c in &report.checks {
                t.row(vec![
                    c.name.into(),
                    c.worst.into(),
                    c.tolerance.into(),
                    (c.passed as usize).into(),
                ]);
            }
            write_table(s, &t)?;
        }
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}: {:e} > {:e}", c.name, c.worst, c.tolerance);
    }
    if report.passed() {
        eprintln!("PASS ({} checks)", report.checks.len());
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
