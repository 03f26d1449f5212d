use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("subset table needs 2^{n} - 1 entries; node count {n} exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("zero total rate into subset {mask:#x}; the network lacks full mobility")]
    ZeroDenominator { mask: u64 },

    #[error("all event rates are zero")]
    ZeroTotalRate,

    #[error("index {index} out of range for {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("exchange mobility is only defined for the disconnected topology")]
    UnsupportedTopology,

    #[error("config parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
