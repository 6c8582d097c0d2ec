//! Crate-wide error type. Every fallible operation returns a typed variant;
//! readers never panic on malformed input.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("threshold ordering violated: expected gamma < epsilon < beta, got gamma={gamma}, epsilon={epsilon}, beta={beta}")]
    OrderingViolation { gamma: f64, epsilon: f64, beta: f64 },

    #[error("config field `{field}` out of range: {value} ({constraint})")]
    RangeViolation {
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("source resolution {h0}x{w0} is not divisible by 4")]
    ResolutionNotDivisible { h0: usize, w0: usize },

    #[error("limb graph is invalid: {0}")]
    InvalidLimbGraph(String),

    #[error("person {person} has {got} keypoints, expected {expected}")]
    JointCountMismatch {
        person: usize,
        got: usize,
        expected: usize,
    },

    #[error("skeleton frame contains no persons")]
    EmptyFrame,

    #[error("non-finite coordinate at person {person}, joint {joint}")]
    NonFiniteCoordinate { person: usize, joint: usize },

    #[error("limb count {limbs} does not match channel count {channels}")]
    LimbCountMismatch { limbs: usize, channels: usize },

    #[error("limb index {index} out of range for {channels} channels")]
    LimbIndexOutOfRange { index: usize, channels: usize },

    #[error("variant mismatch: {left} vs {right}")]
    VariantMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("shape mismatch: {context} ({left_h}x{left_w} vs {right_h}x{right_w})")]
    ShapeMismatch {
        context: &'static str,
        left_h: usize,
        left_w: usize,
        right_h: usize,
        right_w: usize,
    },

    #[error("positive pixel set for joint {joint} is empty")]
    EmptyPositiveSet { joint: usize },

    #[error("negative pixel set for joint {joint} is empty")]
    EmptyNegativeSet { joint: usize },

    #[error("pixel set `{which}` is empty, cannot sample")]
    EmptySet { which: &'static str },

    #[error("degenerate flow field: max deviation from mean is zero")]
    DegenerateFlow,

    #[error("length mismatch: {got} scores for {expected} labels")]
    LengthMismatch { got: usize, expected: usize },

    #[error("score {value} outside [0, 1] at index {index}")]
    ScoreOutOfRange { value: f64, index: usize },

    #[error("training diverged at step {step}: loss is not finite")]
    DivergenceDetected { step: usize },

    #[error("subdivision schedule invalid: start_scale {start_scale} with {steps} doubling steps does not reach full resolution")]
    SubdivisionMismatch { start_scale: usize, steps: usize },

    #[error("crop size {crop} exceeds frame size {h}x{w}")]
    CropLargerThanFrame { crop: usize, h: usize, w: usize },

    #[error("synthetic scene spec infeasible: {0}")]
    SpecInfeasible(String),

    #[error("keypoint schema error: {0}")]
    SchemaError(String),

    #[error("unknown keypoint layout `{0}`")]
    UnknownLayout(String),

    #[error("bad magic in {format} file: got {got:?}")]
    BadMagic { format: &'static str, got: Vec<u8> },

    #[error("{format} file truncated: needed {needed} bytes, had {got}")]
    TruncatedFile {
        format: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("container header mismatch: {0}")]
    HeaderMismatch(String),

    #[error("checksum error in frame {frame}: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumError {
        frame: usize,
        stored: u32,
        computed: u32,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Coarse error family, used by the CLI to pick distinct exit codes.
    pub fn family(&self) -> ErrorFamily {
        use Error::*;
        match self {
            OrderingViolation { .. }
            | RangeViolation { .. }
            | ResolutionNotDivisible { .. }
            | InvalidLimbGraph(_)
            | JointCountMismatch { .. }
            | EmptyFrame
            | NonFiniteCoordinate { .. } => ErrorFamily::Validation,
            LimbCountMismatch { .. }
            | LimbIndexOutOfRange { .. }
            | VariantMismatch { .. }
            | ShapeMismatch { .. }
            | LengthMismatch { .. }
            | ScoreOutOfRange { .. }
            | SubdivisionMismatch { .. }
            | CropLargerThanFrame { .. } => ErrorFamily::Shape,
            EmptyPositiveSet { .. }
            | EmptyNegativeSet { .. }
            | EmptySet { .. }
            | DegenerateFlow
            | SpecInfeasible(_) => ErrorFamily::Degenerate,
            DivergenceDetected { .. } => ErrorFamily::Divergence,
            SchemaError(_)
            | UnknownLayout(_)
            | BadMagic { .. }
            | TruncatedFile { .. }
            | HeaderMismatch(_)
            | ChecksumError { .. }
            | Io(_)
            | Json(_) => ErrorFamily::Format,
        }
    }
}

/// Error families with stable CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorFamily {
    /// Bad configuration or invalid input data (exit 2).
    Validation,
    /// Shape, count, or variant mismatches (exit 3).
    Shape,
    /// Degenerate inputs: empty sets, constant flow (exit 4).
    Degenerate,
    /// Training loss became non-finite (exit 5).
    Divergence,
    /// File format, schema, or I/O failures (exit 6).
    Format,
}

impl ErrorFamily {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorFamily::Validation => 2,
            ErrorFamily::Shape => 3,
            ErrorFamily::Degenerate => 4,
            ErrorFamily::Divergence => 5,
            ErrorFamily::Format => 6,
        }
    }
}
