//! System-definition parsing, artifact emission, and the CLI pipeline.
//!
//! Input format, one line per item, `#` starts a comment:
//!
//! ```text
//! dim_stable 1
//! dim_unstable 1
//! lambda -0.4
//! mu 1.5
//! # F <component> <exponents...> <coefficient>
//! F 1  2 0   1.0
//! F 1  0 2   1.0
//! F 2  3 0  -1.0
//! F 2  0 3   1.0
//! ```
//!
//! Optional `analytic <radius> <norm>` supplies a sup-norm bound for
//! non-polynomial tails. Outputs are a certificate (JSON), coefficient
//! tables (CSV), enclosure samples (CSV) and a plot script.

use crate::certificate::{build_certificate, CertError, Certificate, Certification};
use crate::index::MultiIndex;
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::series::PolySeries;
use crate::solver::{normal_form_tail, AnalyticBound, ManifoldParam, Side, SolveError, VectorField};
use crate::spectrum::{verify_spectrum, SpectrumError};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid system: {0}")]
    Validation(String),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Certificate(#[from] CertError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Stable process exit codes: 2 parse/validation, 3 resonance,
    /// 4 inconclusive interval, 5 tail divergence, 6 iteration cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Validation(_) => 2,
            CliError::Spectrum(SpectrumError::ResonanceDetected { .. }) => 3,
            CliError::Spectrum(SpectrumError::InconclusiveInterval { .. }) => 4,
            CliError::Solve(SolveError::InconclusiveInterval { .. }) => 4,
            CliError::Certificate(CertError::TailDiverges { .. }) => 5,
            CliError::Certificate(CertError::MaxIterationsExceeded(_)) => 6,
            CliError::Spectrum(_) => 2,
            CliError::Solve(SolveError::OrderTooSmall { .. }) => 2,
            CliError::Certificate(CertError::Solve(SolveError::InconclusiveInterval {
                ..
            })) => 4,
            _ => 1,
        }
    }
}

/// Arithmetic mode of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Float,
    Interval,
}

/// One pipeline invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub order: u32,
    pub mode: Mode,
    pub rho: Option<u32>,
    /// Compute the normal-form tail up to this order.
    pub tail_order: Option<u32>,
    pub samples: usize,
    pub out_dir: PathBuf,
}

/// Parsed and structurally validated system definition.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub d_s: usize,
    pub d_u: usize,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    /// (component 0-based, exponents, coefficient), duplicates summed.
    pub monomials: Vec<(usize, Vec<u32>, f64)>,
    pub analytic: Option<AnalyticBound>,
}

impl SystemFile {
    /// Build the verified vector field in the requested scalar mode.
    pub fn build<S: Scalar>(&self) -> Result<VectorField<S>, CliError> {
        let spectrum = verify_spectrum::<S>(&self.lambda, &self.mu)?;
        let d = self.d_s + self.d_u;
        let deg = self
            .monomials
            .iter()
            .map(|(_, exps, _)| exps.iter().sum::<u32>())
            .max()
            .unwrap_or(2);
        let mut f = vec![PolySeries::zero(d, deg); d];
        for (component, exps, coeff) in &self.monomials {
            f[*component].add_term(MultiIndex::new(exps.clone()), S::from_f64(*coeff));
        }
        Ok(VectorField::new(spectrum, f, self.analytic))
    }

    /// Serialise back to the input format (round-trips bit-exactly).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim_stable {}", self.d_s);
        let _ = writeln!(out, "dim_unstable {}", self.d_u);
        for v in &self.lambda {
            let _ = writeln!(out, "lambda {v}");
        }
        for v in &self.mu {
            let _ = writeln!(out, "mu {v}");
        }
        if let Some(a) = self.analytic {
            let _ = writeln!(out, "analytic {} {}", a.radius, a.norm);
        }
        for (component, exps, coeff) in &self.monomials {
            let exps: Vec<String> = exps.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "F {} {} {}", component + 1, exps.join(" "), coeff);
        }
        out
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Parse and validate a system definition.
pub fn parse_system(text: &str) -> Result<SystemFile, CliError> {
    let mut d_s: Option<usize> = None;
    let mut d_u: Option<usize> = None;
    let mut lambda = Vec::new();
    let mut mu = Vec::new();
    let mut analytic: Option<AnalyticBound> = None;
    let mut raw_monomials: Vec<(usize, usize, Vec<u32>, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        match key {
            "dim_stable" | "dim_unstable" => {
                if rest.len() != 1 {
                    return Err(syntax(line_no, format!("{key} takes one value")));
                }
                let v: usize = rest[0]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad integer '{}'", rest[0])))?;
                if v == 0 {
                    return Err(syntax(line_no, format!("{key} must be positive")));
                }
                let slot = if key == "dim_stable" { &mut d_s } else { &mut d_u };
                if slot.replace(v).is_some() {
                    return Err(syntax(line_no, format!("duplicate {key}")));
                }
            }
            "lambda" | "mu" => {
                if rest.is_empty() {
                    return Err(syntax(line_no, format!("{key} needs at least one value")));
                }
                for tok in rest {
                    let v: f64 = tok
                        .parse()
                        .map_err(|_| syntax(line_no, format!("bad number '{tok}'")))?;
                    if key == "lambda" {
                        lambda.push(v);
                    } else {
                        mu.push(v);
                    }
                }
            }
            "analytic" => {
                if rest.len() != 2 {
                    return Err(syntax(line_no, "analytic takes <radius> <norm>"));
                }
                let radius: f64 = rest[0]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad number '{}'", rest[0])))?;
                let norm: f64 = rest[1]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad number '{}'", rest[1])))?;
                if radius <= 0.0 || norm < 0.0 || !radius.is_finite() || !norm.is_finite() {
                    return Err(syntax(line_no, "analytic needs radius > 0 and norm >= 0"));
                }
                analytic = Some(AnalyticBound { radius, norm });
            }
            "F" => {
                if rest.len() < 3 {
                    return Err(syntax(line_no, "F takes <component> <exponents...> <coefficient>"));
                }
                let component: usize = rest[0]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad component '{}'", rest[0])))?;
                let coeff: f64 = rest[rest.len() - 1]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad number '{}'", rest[rest.len() - 1])))?;
                let mut exps = Vec::with_capacity(rest.len() - 2);
                for tok in &rest[1..rest.len() - 1] {
                    let e: u32 = tok
                        .parse()
                        .map_err(|_| syntax(line_no, format!("bad exponent '{tok}'")))?;
                    exps.push(e);
                }
                raw_monomials.push((line_no, component, exps, coeff));
            }
            other => return Err(syntax(line_no, format!("unknown key '{other}'"))),
        }
    }

    let d_s = d_s.ok_or_else(|| CliError::Validation("missing dim_stable".into()))?;
    let d_u = d_u.ok_or_else(|| CliError::Validation("missing dim_unstable".into()))?;
    let d = d_s + d_u;
    if lambda.len() != d_s {
        return Err(CliError::Validation(format!(
            "expected {d_s} lambda entries, got {}",
            lambda.len()
        )));
    }
    if mu.len() != d_u {
        return Err(CliError::Validation(format!(
            "expected {d_u} mu entries, got {}",
            mu.len()
        )));
    }
    if lambda.windows(2).any(|w| w[0] > w[1]) || mu.windows(2).any(|w| w[0] > w[1]) {
        return Err(CliError::Validation(
            "eigenvalues must be sorted ascending".into(),
        ));
    }
    if lambda.iter().any(|v| *v >= 0.0 || !v.is_finite()) {
        return Err(CliError::Validation(
            "stable eigenvalues must be negative and finite".into(),
        ));
    }
    if mu.iter().any(|v| *v <= 0.0 || !v.is_finite()) {
        return Err(CliError::Validation(
            "unstable eigenvalues must be positive and finite".into(),
        ));
    }

    // merge duplicate monomials, preserving first-seen ordering
    let mut merged: BTreeMap<(usize, Vec<u32>), f64> = BTreeMap::new();
    for (line_no, component, exps, coeff) in raw_monomials {
        if component == 0 || component > d {
            return Err(syntax(
                line_no,
                format!("component {component} out of range 1..={d}"),
            ));
        }
        if exps.len() != d {
            return Err(syntax(
                line_no,
                format!("expected {d} exponents, got {}", exps.len()),
            ));
        }
        if exps.iter().sum::<u32>() < 2 {
            return Err(CliError::Validation(format!(
                "line {line_no}: monomial of order < 2 (the nonlinearity must be O(z^2))"
            )));
        }
        if !coeff.is_finite() {
            return Err(CliError::Validation(format!(
                "line {line_no}: coefficient must be finite"
            )));
        }
        *merged.entry((component - 1, exps)).or_insert(0.0) += coeff;
    }
    let monomials = merged
        .into_iter()
        .filter(|(_, c)| *c != 0.0)
        .map(|((component, exps), coeff)| (component, exps, coeff))
        .collect();

    Ok(SystemFile {
        d_s,
        d_u,
        lambda,
        mu,
        monomials,
        analytic,
    })
}

fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v }; // canonical zero, not -0.0
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Certificate serialised as JSON; interval quantities become [lo, hi].
pub fn certificate_json<S: Scalar>(cert: &Certificate<S>, system: &SystemFile) -> String {
    let scalar = |v: S| -> serde_json::Value {
        if S::IS_INTERVAL {
            serde_json::json!([v.lower(), v.upper()])
        } else {
            serde_json::json!(v.approx())
        }
    };
    let value = serde_json::json!({
        "n1": cert.n1,
        "r_theta": cert.r_theta,
        "C": cert.c_fit,
        "M": cert.m_fit,
        "Omega": scalar(cert.omega),
        "A": scalar(cert.a_bound),
        "mode": cert.mode(),
        "shrink_iterations": cert.shrink_iterations,
        "lambda": system.lambda,
        "mu": system.mu,
    });
    serde_json::to_string_pretty(&value).expect("certificate serialises")
}

/// Coefficient tables for both sides: side, component, exponents, value
/// (value_lo/value_hi in interval mode).
pub fn coefficients_csv<S: Scalar>(stable: &ManifoldParam<S>, unstable: &ManifoldParam<S>) -> String {
    let mut out = String::new();
    if S::IS_INTERVAL {
        out.push_str("side,component,exponents,value_lo,value_hi\n");
    } else {
        out.push_str("side,component,exponents,value\n");
    }
    for param in [stable, unstable] {
        let side = param.side().name();
        for (m, row) in param.tables() {
            let exps: Vec<String> = m.exponents().iter().map(|e| e.to_string()).collect();
            for (i, c) in row.iter().enumerate() {
                if S::IS_INTERVAL {
                    let _ = writeln!(
                        out,
                        "{side},{},{},{},{}",
                        i + 1,
                        exps.join(" "),
                        fmt_f64(c.lower()),
                        fmt_f64(c.upper())
                    );
                } else {
                    let _ = writeln!(
                        out,
                        "{side},{},{},{}",
                        i + 1,
                        exps.join(" "),
                        fmt_f64(c.approx())
                    );
                }
            }
        }
    }
    out
}

/// Normal-form tail coefficients, mixed indices only.
pub fn normal_form_csv<S: Scalar>(tail: &crate::solver::NormalFormTail<S>) -> String {
    let mut out = String::new();
    if S::IS_INTERVAL {
        out.push_str("component,exponents,value_lo,value_hi\n");
    } else {
        out.push_str("component,exponents,value\n");
    }
    for (m, row) in tail.tables() {
        let exps: Vec<String> = m.exponents().iter().map(|e| e.to_string()).collect();
        for (i, c) in row.iter().enumerate() {
            if S::IS_INTERVAL {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    i + 1,
                    exps.join(" "),
                    fmt_f64(c.lower()),
                    fmt_f64(c.upper())
                );
            } else {
                let _ = writeln!(out, "{},{},{}", i + 1, exps.join(" "), fmt_f64(c.approx()));
            }
        }
    }
    out
}

/// Sampled enclosure rows for one side: the parameter, the manifold point,
/// and the per-coordinate half-width (remainder bound plus, in interval
/// mode, the coefficient enclosure radius).
pub fn emit_enclosure_samples<S: Scalar>(
    param: &ManifoldParam<S>,
    cert: &Certificate<S>,
    count: usize,
) -> String {
    let d = param.ambient_dim();
    let pdim = param.param_dim();
    let mut out = String::new();
    out.push('t');
    for i in 1..=d {
        let _ = write!(out, ",z{i}");
    }
    for i in 1..=d {
        let _ = write!(out, ",err{i}");
    }
    out.push('\n');
    if count == 0 {
        return out;
    }

    let r = cert.r_theta;
    let eps = r * 1e-3;
    let lo = -r + eps;
    let hi = r - eps;
    // per-axis sample count: a grid for higher-dimensional sides
    let per_axis = if pdim == 1 {
        count
    } else {
        (count as f64).powf(1.0 / pdim as f64).round().max(2.0) as usize
    };
    let axis: Vec<f64> = if per_axis == 1 {
        vec![0.0]
    } else {
        (0..per_axis)
            .map(|i| lo + (hi - lo) * i as f64 / (per_axis - 1) as f64)
            .collect()
    };

    let d_s = match param.side() {
        Side::Stable => pdim,
        Side::Unstable => d - pdim,
    };
    let mut grid_index = vec![0usize; pdim];
    loop {
        let t: Vec<f64> = grid_index.iter().map(|&i| axis[i]).collect();
        let t_scalar: Vec<S> = t.iter().map(|&v| S::from_f64(v)).collect();
        let point = param.eval_point(&t_scalar, d_s);
        let norm = t.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        let tail = cert.remainder_bound(norm);

        let t_str: Vec<String> = t.iter().map(|v| fmt_f64(*v)).collect();
        let _ = write!(out, "{}", t_str.join(" "));
        for z in &point {
            let _ = write!(out, ",{}", fmt_f64(z.approx()));
        }
        for z in &point {
            let half_width = if S::IS_INTERVAL {
                0.5 * (z.upper() - z.lower())
            } else {
                0.0
            };
            let _ = write!(out, ",{}", fmt_f64(tail + half_width));
        }
        out.push('\n');

        // advance the mixed-radix grid counter
        let mut axis_idx = 0;
        loop {
            if axis_idx == pdim {
                return out;
            }
            grid_index[axis_idx] += 1;
            if grid_index[axis_idx] < axis.len() {
                break;
            }
            grid_index[axis_idx] = 0;
            axis_idx += 1;
        }
    }
}

const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plot the sampled manifold enclosures emitted by manifold-cert."""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))

def load(name):
    rows = []
    path = os.path.join(out_dir, name)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append({k: v for k, v in row.items()})
    return rows

fig, ax = plt.subplots(figsize=(7, 7))
for name, color, label in [
    ("samples_stable.csv", "tab:blue", "stable"),
    ("samples_unstable.csv", "tab:red", "unstable"),
]:
    rows = load(name)
    if not rows:
        continue
    xs = [float(r["z1"]) for r in rows]
    ys = [float(r["z2"]) for r in rows]
    ex = [float(r["err1"]) for r in rows]
    ey = [float(r["err2"]) for r in rows]
    ax.plot(xs, ys, color=color, lw=1.2, label=label)
    ax.errorbar(xs, ys, xerr=ex, yerr=ey, fmt="none", ecolor=color, alpha=0.35)

ax.axhline(0.0, color="gray", lw=0.4)
ax.axvline(0.0, color="gray", lw=0.4)
ax.set_xlabel("z1")
ax.set_ylabel("z2")
ax.legend()
ax.set_title("Local invariant manifold enclosures")
target = os.path.join(out_dir, "manifolds.png")
fig.savefig(target, dpi=160, bbox_inches="tight")
print(f"wrote {target}")
"#;

/// Artifacts of a successful run.
#[derive(Debug)]
pub struct RunArtifacts {
    pub certificate_path: PathBuf,
    pub r_theta: f64,
    pub c_fit: f64,
    pub m_fit: f64,
    pub shrink_iterations: usize,
}

fn run_mode<S: Scalar>(cfg: &RunConfig, system: &SystemFile) -> Result<RunArtifacts, CliError> {
    let vf: VectorField<S> = system.build()?;
    let certification: Certification<S> = build_certificate(&vf, cfg.order, cfg.rho)?;
    let Certification {
        stable,
        unstable,
        certificate,
        ..
    } = &certification;

    std::fs::create_dir_all(&cfg.out_dir)?;
    let cert_path = cfg.out_dir.join("certificate.json");
    std::fs::write(&cert_path, certificate_json(certificate, system))?;
    std::fs::write(
        cfg.out_dir.join("coefficients.csv"),
        coefficients_csv(stable, unstable),
    )?;
    std::fs::write(
        cfg.out_dir.join("samples_stable.csv"),
        emit_enclosure_samples(stable, certificate, cfg.samples),
    )?;
    std::fs::write(
        cfg.out_dir.join("samples_unstable.csv"),
        emit_enclosure_samples(unstable, certificate, cfg.samples),
    )?;
    std::fs::write(cfg.out_dir.join("plot_manifolds.py"), PLOT_SCRIPT)?;

    if let Some(tail_order) = cfg.tail_order {
        let tail = normal_form_tail(&vf, stable, unstable, tail_order)?;
        std::fs::write(cfg.out_dir.join("normal_form.csv"), normal_form_csv(&tail))?;
    }

    Ok(RunArtifacts {
        certificate_path: cert_path,
        r_theta: certificate.r_theta,
        c_fit: certificate.c_fit,
        m_fit: certificate.m_fit,
        shrink_iterations: certificate.shrink_iterations,
    })
}

/// Parse the input file, run the chain in the configured mode, and write all
/// artifacts into the output directory.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunArtifacts, CliError> {
    let text = std::fs::read_to_string(&cfg.input)?;
    let system = parse_system(&text)?;
    if cfg.order < 2 {
        return Err(CliError::Validation("order must be at least 2".into()));
    }
    match cfg.mode {
        Mode::Float => run_mode::<f64>(cfg, &system),
        Mode::Interval => run_mode::<Interval>(cfg, &system),
    }
}

/// The planar reference system used across tests and docs.
pub fn planar_example_text() -> &'static str {
    "dim_stable 1\n\
     dim_unstable 1\n\
     lambda -0.4\n\
     mu 1.5\n\
     # F <component> <exponents...> <coefficient>\n\
     F 1  2 0   1.0\n\
     F 1  0 2   1.0\n\
     F 2  3 0  -1.0\n\
     F 2  0 3   1.0\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_planar_example() {
        let system = parse_system(planar_example_text()).unwrap();
        assert_eq!(system.d_s, 1);
        assert_eq!(system.d_u, 1);
        assert_eq!(system.lambda, vec![-0.4]);
        assert_eq!(system.mu, vec![1.5]);
        assert_eq!(system.monomials.len(), 4);
        assert!(system.analytic.is_none());
    }

    #[test]
    fn round_trip_is_exact() {
        let system = parse_system(planar_example_text()).unwrap();
        let again = parse_system(&system.to_text()).unwrap();
        assert_eq!(system, again);
    }

    #[test]
    fn rejects_low_order_monomial() {
        let text = "dim_stable 1\ndim_unstable 1\nlambda -0.4\nmu 1.5\nF 1 1 0 1.0\n";
        assert!(matches!(
            parse_system(text),
            Err(CliError::Validation(_))
        ));
    }

    #[test]
    fn rejects_bad_counts_and_signs() {
        let text = "dim_stable 2\ndim_unstable 1\nlambda -0.4\nmu 1.5\n";
        assert!(matches!(parse_system(text), Err(CliError::Validation(_))));
        let text = "dim_stable 1\ndim_unstable 1\nlambda 0.4\nmu 1.5\n";
        assert!(matches!(parse_system(text), Err(CliError::Validation(_))));
        let text = "dim_stable 1\ndim_unstable 1\nlambda -0.4\nmu 1.5\nbogus 1\n";
        assert!(matches!(parse_system(text), Err(CliError::Syntax { .. })));
    }

    #[test]
    fn empty_f_is_the_zero_field() {
        let text = "dim_stable 1\ndim_unstable 1\nlambda -0.4\nmu 1.5\n";
        let system = parse_system(text).unwrap();
        assert!(system.monomials.is_empty());
        let vf = system.build::<f64>().unwrap();
        assert!(vf.nonlinearity().iter().all(|s| s.is_zero()));
    }

    #[test]
    fn duplicate_monomials_are_summed() {
        let text = "dim_stable 1\ndim_unstable 1\nlambda -0.4\nmu 1.5\nF 1 2 0 1.0\nF 1 2 0 0.5\n";
        let system = parse_system(text).unwrap();
        assert_eq!(system.monomials.len(), 1);
        assert_eq!(system.monomials[0].2, 1.5);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "\n# heading\ndim_stable 1 # trailing\ndim_unstable 1\nlambda -0.4\nmu 1.5\n\n";
        assert!(parse_system(text).is_ok());
    }

    #[test]
    fn exit_codes_are_distinct() {
        let resonant = CliError::Spectrum(SpectrumError::ResonanceDetected {
            side: "stable",
            relation: MultiIndex::new(vec![0, 2]),
            index: 0,
        });
        assert_eq!(resonant.exit_code(), 3);
        let syntax = CliError::Syntax {
            line: 1,
            msg: "x".into(),
        };
        assert_eq!(syntax.exit_code(), 2);
        let tail = CliError::Certificate(CertError::TailDiverges { ratio: 1.5 });
        assert_eq!(tail.exit_code(), 5);
        let cap = CliError::Certificate(CertError::MaxIterationsExceeded(10));
        assert_eq!(cap.exit_code(), 6);
    }

    #[test]
    fn sample_rows_match_remainder_bound() {
        let system = parse_system(planar_example_text()).unwrap();
        let vf = system.build::<f64>().unwrap();
        let certification = build_certificate(&vf, 20, None).unwrap();
        let csv = emit_enclosure_samples(&certification.stable, &certification.certificate, 11);
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(header, "t,z1,z2,err1,err2");
        for line in lines {
            let cols: Vec<&str> = line.split(',').collect();
            let t: f64 = cols[0].parse().unwrap();
            let err: f64 = cols[3].parse().unwrap();
            let expect = certification.certificate.remainder_bound(t.abs());
            assert!((err - expect).abs() <= 1e-15 * expect.max(1.0));
        }
    }

    #[test]
    fn stable_sample_matches_low_order_series() {
        let system = parse_system(planar_example_text()).unwrap();
        let vf = system.build::<f64>().unwrap();
        let certification = build_certificate(&vf, 20, None).unwrap();
        let t = 0.01;
        let point = certification
            .stable
            .eval_point(&[t], 1);
        // x = t - 2.5 t^2 + 6.25 t^3 + O(t^4), y = (10/27) t^3 + O(t^4);
        // the order-4 coefficients are -15.625 and about -2.42
        let t4 = t * t * t * t;
        assert!((point[0] - (t - 2.5 * t * t + 6.25 * t * t * t)).abs() < 20.0 * t4);
        assert!((point[1] - 10.0 / 27.0 * t * t * t).abs() < 5.0 * t4);
    }
}
