use alloc::string::String;

use crate::lutmap::EntryIndex;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid axis: {0}")]
    InvalidAxis(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("entry index {0} is out of range for the map")]
    IndexOutOfRange(EntryIndex),
    #[error("query point has {got} coordinates, map has {expected} dimensions")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rejected non-finite query point")]
    NonFinitePoint,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("run {0} has no score")]
    Unscored(u64),
    #[error("syntax error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown channel `{name}` at offset {pos}")]
    UnknownChannel { name: String, pos: usize },
    #[error("signal has no channel `{0}`")]
    MissingChannel(String),
    #[error("run {run}: signal has no channel `{channel}`")]
    RunMissingChannel { run: u64, channel: String },
    #[error("run {0} carries no signals")]
    NoSignals(u64),
    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("formula horizon exceeds the signal: needs up to t={needed}, signal ends at {available}")]
    HorizonExceeded { needed: f64, available: f64 },
    #[error("evaluation time {t} outside signal domain [{start}, {end}]")]
    TimeOutOfDomain { t: f64, start: f64, end: f64 },
    #[error("non-finite value while evaluating an atom")]
    NonFiniteAtom,
    #[error("sample {index} lies outside the parameter box")]
    SampleOutsideBox { index: usize },
    #[error("buggy set is empty")]
    EmptyBuggySet,
}
