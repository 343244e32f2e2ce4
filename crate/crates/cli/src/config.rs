use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// A complex number given on the command line as "re" or "re,im".
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexArg {
    pub re: f64,
    pub im: f64,
}

impl ComplexArg {
    pub fn to_complex(self) -> num_complex::Complex<f64> {
        num_complex::Complex::new(self.re, self.im)
    }
}

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|_| format!("'{p}' is not a number"));
        let (re, im) = match parts.as_slice() {
            [re] => (num(re)?, 0.0),
            [re, im] => (num(re)?, num(im)?),
            _ => return Err(format!("expected re or re,im, got '{s}'")),
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(format!("'{s}' is not finite"));
        }
        Ok(Self { re, im })
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.re, self.im)
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaMethod {
    Spectral,
    Bessel,
    #[default]
    Both,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct DimsArg {
    /// Cycle lengths n_1,…,n_d.
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub dims: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct AlphasArg {
    /// Side lengths α_1,…,α_d of the real torus.
    #[arg(long, value_delimiter = ',', required = true, value_parser = positive_f64)]
    pub alphas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Laplacian eigenvalues in lexicographic order.
    Spectrum {
        #[command(flatten)]
        #[serde(flatten)]
        torus: DimsArg,
        #[arg(long, default_value_t = 0)]
        start: u64,
        /// Largest number of eigenvalues to print.
        #[arg(long, default_value_t = 1000)]
        limit: u64,
    },
    /// Heat trace θ_N(t).
    Theta {
        #[command(flatten)]
        #[serde(flatten)]
        torus: DimsArg,
        #[arg(long, value_parser = positive_f64)]
        t: f64,
        #[arg(long, value_enum, default_value_t = ThetaMethod::Both)]
        method: ThetaMethod,
    },
    /// Exact number of spanning trees.
    Trees {
        #[command(flatten)]
        #[serde(flatten)]
        torus: DimsArg,
    },
    /// log det*Δ of the discrete torus.
    Detlog {
        #[command(flatten)]
        #[serde(flatten)]
        torus: DimsArg,
    },
    /// Spectral zeta ζ_N(w), Re(w) > 0.
    ZetaDiscrete {
        #[command(flatten)]
        #[serde(flatten)]
        torus: DimsArg,
        #[arg(long, allow_hyphen_values = true)]
        w: ComplexArg,
    },
    /// Spectral zeta ζ_A(w) of the real torus, w ≠ d/2.
    ZetaReal {
        #[command(flatten)]
        #[serde(flatten)]
        torus: AlphasArg,
        #[arg(long, allow_hyphen_values = true)]
        w: ComplexArg,
    },
    /// log det*Δ of the real torus, −ζ_A'(0).
    DetReal {
        #[command(flatten)]
        #[serde(flatten)]
        torus: AlphasArg,
    },
    /// The lead-term constant I_d(0).
    Constants {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        d: u64,
        /// Also evaluate the midpoint Riemann sum on an m^d grid.
        #[arg(long)]
        riemann_m: Option<usize>,
    },
    /// Check Σ log(s²+Λ) = V(N)·I_d(s) + H_N(s).
    #[command(name = "verify-theorem36")]
    #[serde(rename = "verify-theorem36")]
    VerifyTheorem36 {
        #[command(flatten)]
        #[serde(flatten)]
        torus: DimsArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s: ComplexArg,
    },
    /// Residuals of the log det* asymptotic along N(u) = round(u·α).
    Degenerate {
        #[command(flatten)]
        #[serde(flatten)]
        torus: AlphasArg,
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<u64>,
    },
    /// Convergence of u^{-2w}ζ_N(u)(w) to the real-torus limit.
    ZetaConverge {
        #[command(flatten)]
        #[serde(flatten)]
        torus: AlphasArg,
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<u64>,
        #[arg(long, allow_hyphen_values = true)]
        w: ComplexArg,
    },
    /// Lattice sum Σ(n²+(my)²)^{-2} against its q-series form.
    DdIdentity {
        #[arg(long, value_parser = positive_f64)]
        y: f64,
    },
    /// Count violations of the Bessel bounds on quasi-random samples.
    BoundsAudit {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Theta { .. } => "theta",
            Command::Trees { .. } => "trees",
            Command::Detlog { .. } => "detlog",
            Command::ZetaDiscrete { .. } => "zeta-discrete",
            Command::ZetaReal { .. } => "zeta-real",
            Command::DetReal { .. } => "det-real",
            Command::Constants { .. } => "constants",
            Command::VerifyTheorem36 { .. } => "verify-theorem36",
            Command::Degenerate { .. } => "degenerate",
            Command::ZetaConverge { .. } => "zeta-converge",
            Command::DdIdentity { .. } => "dd-identity",
            Command::BoundsAudit { .. } => "bounds-audit",
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "torspec", version, about = "Spectral invariants of discrete and real tori")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest vertex count accepted by exact spanning-tree counting.
    #[arg(long, global = true, default_value_t = torspec::discrete_torus::DEFAULT_EXACT_CAP)]
    pub exact_cap: u64,
    /// Absolute tolerance override for quadrature-based quantities.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tol: Option<f64>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}
