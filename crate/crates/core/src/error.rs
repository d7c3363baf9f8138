use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One row of the table reported when a one-sided winding limit fails to settle.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub epsilon: f64,
    pub n: usize,
    pub nu_n: f64,
    pub rounded: Option<i64>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension error: need at least {needed} samples, got {got}")]
    Dimension { needed: usize, got: usize },

    #[error("non-finite potential value at phase {re}{im:+}i")]
    NonFinitePotential { re: f64, im: f64 },

    #[error(
        "Lyapunov exponent not converged (last two estimates {previous} and {last} at n={n}, grid={grid})"
    )]
    LeNotConverged {
        previous: f64,
        last: f64,
        n: usize,
        grid: usize,
    },

    #[error("Lyapunov exponent not converged at y={y}: {source}")]
    ProfilePoint {
        y: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("quantization violated at y={y}: local slope {slope} is not within {tol} of an integer")]
    QuantizationViolated { y: f64, slope: f64, tol: f64 },

    #[error("convexity violated: segment slope drops from {left} to {right} near y={y}")]
    ConvexityViolated { y: f64, left: i64, right: i64 },

    #[error("y={y} lies outside the fitted range [{min}, {max}] for the requested side")]
    OutOfRange { y: f64, min: f64, max: f64 },

    #[error("zero on contour at y={y} (grid {grid}, min log|f_n| = {min_log_abs}); perturb y")]
    ZeroOnContour { y: f64, grid: usize, min_log_abs: f64 },

    #[error("winding at y={y} not resolved after grid {grid}")]
    WindingUnresolved { y: f64, grid: usize },

    #[error("one-sided winding limit did not stabilize: {}", format_table(.table))]
    LimitNotStabilized { table: Vec<LimitRow> },

    #[error("Lyapunov exponent at y={y} is {value}, not positive")]
    LeNotPositive { y: f64, value: f64 },

    #[error("root finder did not converge after {iterations} sweeps (max residual {max_residual:e})")]
    RootsNotConverged { iterations: usize, max_residual: f64 },

    #[error("{what} ill-conditioned: relative validation error {rel_err:e}")]
    IllConditioned { what: &'static str, rel_err: f64 },

    #[error("root certificate failed: {0}")]
    RootCheck(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_table(rows: &[LimitRow]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "[eps={} n={} nu_n={:.6} int={}]",
                r.epsilon,
                r.n,
                r.nu_n,
                r.rounded.map_or("-".to_string(), |v| v.to_string())
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LeNotConverged { .. } | Error::ProfilePoint { .. } => 2,
            Error::QuantizationViolated { .. } | Error::ConvexityViolated { .. } => 3,
            Error::ZeroOnContour { .. } | Error::WindingUnresolved { .. } => 4,
            Error::RootsNotConverged { .. }
            | Error::IllConditioned { .. }
            | Error::RootCheck(_) => 5,
            _ => 1,
        }
    }
}
