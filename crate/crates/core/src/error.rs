use crate::basis::Topology;

/// Errors produced by state construction, operator builders, and evolution.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("chain length s must be at least 1, got {s}")]
    InvalidChainLength { s: usize },

    #[error("{topology:?} topology requires a telomere length of at least 1")]
    MissingTelomere { topology: Topology },

    #[error("register dimension must be at least 1")]
    InvalidRegisterDimension,

    #[error("expected {expected} register unitaries, got {found}")]
    UnitaryCount { expected: usize, found: usize },

    #[error("register unitary {index} is {rows}x{cols}, expected {d_reg}x{d_reg}")]
    UnitaryShape {
        index: usize,
        rows: usize,
        cols: usize,
        d_reg: usize,
    },

    #[error("register unitary {index} is not unitary (max residual {residual:.3e})")]
    NotUnitary { index: usize, residual: f64 },

    #[error("vector norm is {norm}, further than {tol:.1e} from 1")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("register vector has {found} components, basis expects {expected}")]
    RegisterDimension { expected: usize, found: usize },

    #[error("control initialization does not match the chain topology")]
    ControlMismatch { has_control: bool },

    #[error("basis has no control q-bit")]
    NoControl,

    #[error("state/operator basis does not match the expected enumeration")]
    BasisMismatch,

    #[error("label out of range for basis: register {register_index}, site {site}")]
    LabelOutOfRange { register_index: usize, site: usize },

    #[error("site range {start}..={end} invalid for a chain of {n_sites} sites")]
    InvalidSiteRange {
        start: usize,
        end: usize,
        n_sites: usize,
    },

    #[error("mode index {n} outside 1..={s}")]
    InvalidModeIndex { n: usize, s: usize },

    #[error("site {k} outside 1..={s}")]
    InvalidSiteIndex { k: usize, s: usize },

    #[error("operation requires {expected:?} topology, spec has {found:?}")]
    TopologyMismatch { expected: Topology, found: Topology },

    #[error("full spin space with {n_sites} sites exceeds the {max}-site oracle limit")]
    SpaceTooLarge { n_sites: usize, max: usize },

    #[error("dimension {dim} exceeds the dense-eigendecomposition limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("sample times must be sorted in increasing order")]
    UnsortedTimes,

    #[error("time step {dt} must be positive and finite")]
    InvalidTimeStep { dt: f64 },

    #[error("time span end {t_max} must be nonnegative and finite")]
    InvalidTimeSpan { t_max: f64 },

    #[error("sample time {t} is negative")]
    NegativeTime { t: f64 },

    #[error("sample time {t} outside schedule span [{start}, {end}]")]
    TimeOutsideSchedule { t: f64, start: f64, end: f64 },

    #[error("schedule must contain at least one segment")]
    EmptySchedule,

    #[error("segment {index} has non-positive duration")]
    EmptySegment { index: usize },

    #[error("segment {index} does not start where the previous segment ends")]
    ScheduleGap { index: usize },

    #[error("pulse center {t0} leaves no room for the unit window (need t0 >= 0.5)")]
    PulseTooEarly { t0: f64 },

    #[error("schedule end {t_final} must lie beyond the pulse window ending at {window_end}")]
    ScheduleTooShort { t_final: f64, window_end: f64 },

    #[error("time series '{label}' is not sampled on strictly increasing times")]
    NonMonotonicTimes { label: String },

    #[error("probability series '{label}' has value {value} outside [0, 1] at t = {t}")]
    ProbabilityOutOfRange { label: String, t: f64, value: f64 },

    #[error("series do not share a common time grid")]
    GridMismatch,

    #[error("series label {label:?} not usable as a CSV column name")]
    InvalidLabel { label: String },

    #[error("no series given")]
    NoSeries,

    #[error("register q-bit count {mu} outside 1..={max}")]
    InvalidQBitCount { mu: usize, max: usize },

    #[error("register with {mu} q-bits exceeds the dense limit of {max}")]
    RegisterTooLarge { mu: usize, max: usize },

    #[error("chain length s = {s} must be odd")]
    EvenChainLength { s: usize },

    #[error("target has {found} entries, expected {expected}")]
    TargetLength { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
