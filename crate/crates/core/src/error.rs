use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong between reading a surface description and
/// producing a classification.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("grid too short: {count} samples, at least {min} required")]
    GridTooShort { count: usize, min: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in input at sample {index}")]
    NonFinite { index: usize },

    #[error("curve is not regular near u = {u}: speed {speed:e} below {threshold:e}")]
    NonRegularCurve { u: f64, speed: f64, threshold: f64 },

    #[error("arc-length table is not monotone near u = {u}")]
    NonMonotoneLength { u: f64 },

    #[error("cylindrical: striction curve undefined (Eq. 4); min |q'| = {min_speed:e}")]
    Cylindrical { min_speed: f64 },

    #[error("director vanishes near u = {u}: |q| = {norm:e}")]
    DegenerateDirector { u: f64, norm: f64 },

    #[error("singular surface point at (u, v) = ({u}, {v})")]
    SingularPoint { u: f64, v: f64 },

    #[error("torsal band: first curvature vanishes for s in [{s_start}, {s_end}], central normal undefined")]
    TorsalBand { s_start: f64, s_end: f64 },

    #[error("curvature of the curve vanishes near s = {s}: Frenet frame undefined (straight segment)")]
    StraightSegment { s: f64 },

    #[error("initial frame is not orthonormal and right-handed (deviation {deviation:e})")]
    NonOrthonormalFrame { deviation: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("frame fields are not sampled on corresponding grids: {0}")]
    GridMismatch(String),

    #[error("unknown builtin surface '{0}'")]
    UnknownBuiltin(String),

    #[error("invalid surface file: {0}")]
    InvalidSurface(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for degenerate-geometry and hypothesis failures, as opposed to
    /// malformed input or I/O trouble.
    pub fn is_geometric(&self) -> bool {
        matches!(
            self,
            Error::GridTooShort { .. }
                | Error::NonRegularCurve { .. }
                | Error::NonMonotoneLength { .. }
                | Error::Cylindrical { .. }
                | Error::DegenerateDirector { .. }
                | Error::SingularPoint { .. }
                | Error::TorsalBand { .. }
                | Error::StraightSegment { .. }
                | Error::NonOrthonormalFrame { .. }
                | Error::Hypothesis(_)
                | Error::Domain(_)
                | Error::GridMismatch(_)
                | Error::Eval(_)
        )
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
