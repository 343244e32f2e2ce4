use num_complex::Complex;
use serde_json::{json, Map, Value};
use torspec::discrete_torus::{
    log_det_star, spanning_trees_exact_with_cap, spectral_zeta_discrete, spectrum_range, theta_bessel, theta_spectral,
};
use torspec::harness::{
    dd_identity_check, main_theorem_report, zeta_convergence_report, DegenerationFamily, LEAD_TOL, REAL_TOL,
};
use torspec::real_torus::{log_det_star_real, zeta_real};
use torspec::special_functions::bounds::audit_bounds;
use torspec::special_functions::catalan;
use torspec::transforms::{gauss_transform_split, i_d, lead_term_riemann};
use torspec::{DiscreteTorus, Error, RealTorus};

use crate::config::{Command, RunConfig, ThetaMethod};

/// A rectangular block rendered as CSV or as an aligned table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// Output of a successful command: flat top-level fields plus an optional table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

impl Report {
    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }
}

/// A failed command, with the best estimate when a numerical method gave up.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub code: &'static str,
    pub message: String,
    pub estimate: Option<Complex<f64>>,
    pub error_bound: Option<f64>,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self.code {
            "non_convergence" | "non_finite" | "overflow" => 3,
            _ => 2,
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Failure { code: "invalid_input", message: message.into(), estimate: None, error_bound: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (estimate, error_bound) = match e {
            Error::NonConvergence { estimate_re, estimate_im, error_bound, .. } => {
                (Some(Complex::new(estimate_re, estimate_im)), Some(error_bound))
            }
            _ => (None, None),
        };
        Failure { code: e.code(), message: e.to_string(), estimate, error_bound }
    }
}

pub fn complex_json(z: Complex<f64>) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn torus(dims: &[u64]) -> Result<DiscreteTorus, Failure> {
    Ok(DiscreteTorus::new(dims.to_vec())?)
}

fn real_torus(alphas: &[f64]) -> Result<RealTorus, Failure> {
    Ok(RealTorus::new(alphas.to_vec())?)
}

fn dims_headers(d: usize) -> Vec<String> {
    (1..=d).map(|j| format!("n_{j}")).collect()
}

/// Runs the command in `cfg` on the current rayon pool.
pub fn execute(cfg: &RunConfig) -> Result<Report, Failure> {
    let mut r = Report::default();
    match &cfg.command {
        Command::Spectrum { torus: t, start, limit } => {
            let t = torus(&t.dims)?;
            if *start >= t.volume() {
                return Err(Failure::invalid(format!("start {start} is not below V(N) = {}", t.volume())));
            }
            let end = start.saturating_add(*limit).min(t.volume());
            let values: Vec<f64> = spectrum_range(&t, *start, end).collect();
            r.put("volume", t.volume());
            r.put("start", *start);
            r.put("count", values.len());
            r.table = Some(Table {
                headers: vec!["index".into(), "eigenvalue".into()],
                rows: values.iter().enumerate().map(|(i, &v)| vec![json!(start + i as u64), json!(v)]).collect(),
            });
            r.put("eigenvalues", values);
        }
        Command::Theta { torus: t, t: time, method } => {
            let t = torus(&t.dims)?;
            r.put("volume", t.volume());
            r.put("t", *time);
            let spectral = matches!(method, ThetaMethod::Spectral | ThetaMethod::Both).then(|| theta_spectral(&t, *time));
            let bessel = matches!(method, ThetaMethod::Bessel | ThetaMethod::Both)
                .then(|| theta_bessel(&t, *time, cfg.tol.unwrap_or(1e-15)));
            if let Some(x) = spectral {
                r.put("theta_spectral", x);
            }
            if let Some(x) = bessel {
                r.put("theta_bessel", x);
            }
            if let (Some(a), Some(b)) = (spectral, bessel) {
                r.put("difference", a - b);
            }
        }
        Command::Trees { torus: t } => {
            let t = torus(&t.dims)?;
            let count = spanning_trees_exact_with_cap(&t, cfg.exact_cap)?;
            r.put("volume", t.volume());
            r.put("spanning_trees", count.to_string());
            r.put("bits", count.value.bits());
        }
        Command::Detlog { torus: t } => {
            let t = torus(&t.dims)?;
            t.check_graph()?;
            let ld: f64 = log_det_star(&t);
            r.put("volume", t.volume());
            r.put("log_det_star", ld);
            r.put("log_spanning_trees", ld - (t.volume() as f64).ln());
        }
        Command::ZetaDiscrete { torus: t, w } => {
            let t = torus(&t.dims)?;
            let z = spectral_zeta_discrete(&t, w.to_complex())?;
            r.put("volume", t.volume());
            r.put("w", complex_json(w.to_complex()));
            r.put("zeta", complex_json(z));
        }
        Command::ZetaReal { torus: a, w } => {
            let a = real_torus(&a.alphas)?;
            let tol = cfg.tol.unwrap_or(REAL_TOL);
            let z = zeta_real(&a, w.to_complex(), tol)?;
            r.put("volume", a.volume());
            r.put("w", complex_json(w.to_complex()));
            r.put("zeta", complex_json(z));
            r.put("error_bound", tol);
        }
        Command::DetReal { torus: a } => {
            let a = real_torus(&a.alphas)?;
            let tol = cfg.tol.unwrap_or(REAL_TOL);
            r.put("volume", a.volume());
            r.put("log_det_star", log_det_star_real(&a, tol)?);
            r.put("error_bound", tol);
        }
        Command::Constants { d, riemann_m } => {
            let d = *d as usize;
            let tol = cfg.tol.unwrap_or(LEAD_TOL);
            let value = i_d(d, Complex::new(0.0, 0.0), tol)?.re;
            r.put("d", d);
            r.put("I_d0", value);
            r.put("I_d0_error", tol);
            let closed = match d {
                1 => Some(("0", 0.0)),
                2 => Some(("4G/pi", 4.0 * catalan::<f64>() / std::f64::consts::PI)),
                _ => None,
            };
            if let Some((form, exact)) = closed {
                r.put("closed_form", form);
                r.put("closed_form_value", exact);
                r.put("closed_form_gap", (value - exact).abs());
            }
            if let Some(m) = riemann_m {
                let sum: f64 = lead_term_riemann(d, *m)?;
                r.put("riemann_m", *m);
                r.put("riemann_sum", sum);
                r.put("riemann_gap", (sum - value).abs());
            }
        }
        Command::VerifyTheorem36 { torus: t, s } => {
            let t = torus(&t.dims)?;
            let tol = cfg.tol.unwrap_or(1e-10);
            let g = gauss_transform_split(&t, s.to_complex(), tol)?;
            r.put("volume", t.volume());
            r.put("s", complex_json(g.s));
            r.put("log_product", complex_json(g.log_product));
            r.put("I_d", complex_json(g.i_d));
            r.put("H_N", complex_json(g.h_n));
            r.put("residual", g.residual);
            r.put("tolerance", tol);
        }
        Command::Degenerate { torus: a, u } => {
            let f = DegenerationFamily::new(a.alphas.clone(), u.clone())?;
            let rep = main_theorem_report(&f)?;
            r.put("alphas", rep.alphas.clone());
            r.put("I_d0", rep.i_d0);
            r.put("I_d0_error", rep.i_d0_error);
            r.put("const_term", rep.const_term);
            r.put("const_term_error", rep.const_term_error);
            r.put("decay_slope", rep.decay_slope);
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "u": row.u,
                        "dims": row.dims,
                        "volume": row.volume,
                        "logdet_discrete": row.logdet_discrete,
                        "lead": row.lead,
                        "log_u2": row.log_u2,
                        "const_term": row.const_term,
                        "residual": row.residual,
                        "error_estimate": row.error_estimate,
                    })
                })
                .collect();
            r.put("rows", rows);
            let mut headers = vec!["u".to_string()];
            headers.extend(dims_headers(rep.alphas.len()));
            headers.extend(["V", "logdet_discrete", "lead", "log_u2", "const_term", "residual"].map(String::from));
            let table_rows = rep
                .rows
                .iter()
                .map(|row| {
                    let mut cells = vec![json!(row.u)];
                    cells.extend(row.dims.iter().map(|&n| json!(n)));
                    cells.extend([
                        json!(row.volume),
                        json!(row.logdet_discrete),
                        json!(row.lead),
                        json!(row.log_u2),
                        json!(row.const_term),
                        json!(row.residual),
                    ]);
                    cells
                })
                .collect();
            r.table = Some(Table { headers, rows: table_rows });
        }
        Command::ZetaConverge { torus: a, u, w } => {
            let f = DegenerationFamily::new(a.alphas.clone(), u.clone())?;
            let rep = zeta_convergence_report(&f, w.to_complex(), cfg.tol.unwrap_or(REAL_TOL))?;
            r.put("alphas", a.alphas.clone());
            r.put("w", complex_json(rep.w));
            r.put("regularized", rep.regularized);
            r.put("target", complex_json(rep.target));
            r.put("final_gap", rep.final_gap);
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "u": row.u,
                        "dims": row.dims,
                        "volume": row.volume,
                        "zeta_discrete": complex_json(row.zeta_discrete),
                        "counterterm": complex_json(row.counterterm),
                        "lhs": complex_json(row.lhs),
                        "gap": row.gap,
                        "relative_gap": row.relative_gap,
                    })
                })
                .collect();
            r.put("rows", rows);
            let mut headers = vec!["u".to_string()];
            headers.extend(dims_headers(a.alphas.len()));
            headers.extend(["V", "lhs_re", "lhs_im", "gap", "relative_gap"].map(String::from));
            let table_rows = rep
                .rows
                .iter()
                .map(|row| {
                    let mut cells = vec![json!(row.u)];
                    cells.extend(row.dims.iter().map(|&n| json!(n)));
                    cells.extend([
                        json!(row.volume),
                        json!(row.lhs.re),
                        json!(row.lhs.im),
                        json!(row.gap),
                        json!(row.relative_gap),
                    ]);
                    cells
                })
                .collect();
            r.table = Some(Table { headers, rows: table_rows });
        }
        Command::DdIdentity { y } => {
            let dd = dd_identity_check(*y)?;
            r.put("y", dd.y);
            r.put("lhs", dd.lhs);
            r.put("rhs", dd.rhs);
            r.put("residual", dd.residual);
        }
        Command::BoundsAudit { samples } => {
            let audit = audit_bounds(*samples);
            r.put("samples", audit.samples);
            r.put("total_violations", audit.total_violations());
            let tallies: Vec<Value> = audit
                .tallies
                .iter()
                .map(|t| json!({ "name": t.name, "checked": t.checked, "violations": t.violations, "min_slack": t.min_slack }))
                .collect();
            r.put("tallies", tallies);
            r.table = Some(Table {
                headers: ["name", "checked", "violations", "min_slack"].map(String::from).to_vec(),
                rows: audit
                    .tallies
                    .iter()
                    .map(|t| vec![json!(t.name), json!(t.checked), json!(t.violations), json!(t.min_slack)])
                    .collect(),
            });
        }
    }
    Ok(r)
}
