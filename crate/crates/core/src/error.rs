//! Error types shared by every pipeline stage.

use std::path::PathBuf;

/// Errors produced by the detection pipeline and its file formats.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Every pixel of a loaded map carried the invalid sentinel.
    #[error("disparity map contains no valid pixels")]
    AllInvalid,

    #[error("index out of range: {0}")]
    OutOfRange(String),

    /// Fewer than three distinct ordinates; the column fit has no unique solution.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("y-disparity histogram is empty")]
    EmptyHistogram,

    #[error("target path has {len} points, need at least {min}")]
    PathTooShort { len: usize, min: usize },

    #[error("all RANSAC trials were rank-deficient")]
    AllTrialsDegenerate,

    /// Transformed disparities went negative; retry with a larger delta.
    #[error("{count} transformed disparities are negative (min {min}); increase delta")]
    NegativeTransformed { count: usize, min: f64 },

    /// A constant transformed map has no Otsu threshold.
    #[error("transformed map has fewer than two distinct values; no threshold")]
    ConstantMap,

    #[error("normal field has zero resultant; no optimal direction")]
    DegenerateNormalField,

    #[error("only {have} blocks contain usable pixels, need {need}")]
    InsufficientBlocks { have: usize, need: usize },

    #[error("zero or negative disparity in point-cloud export at ({col},{row})")]
    ZeroDisparity { col: usize, row: usize },

    #[error("invalid scene spec: {0}")]
    InvalidSpec(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("frame set mismatch: {0}")]
    FrameMismatch(String),

    /// Wraps a stage failure with the stage name attached.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attaches a pipeline stage name to an error.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error after unwrapping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
