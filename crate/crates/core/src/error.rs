use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("values do not form a permutation of 1..={len}")]
    NotABijection { len: usize },

    #[error("duplicate value {0} in relative-order input")]
    DuplicateValue(i64),

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("excursion exceeded the cap of {cap} steps")]
    ExcursionTooLong { cap: u64 },

    #[error("pair-chain return exceeded the cap of {cap} steps")]
    ReturnTooLong { cap: u64 },

    #[error("infinite q-product diverges for |q| = {0} >= 1")]
    Diverges(f64),

    #[error("statistic {0} is not admissible here")]
    BadStatistic(String),
}

impl Error {
    /// True for the errors raised when a simulation cap is hit.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ExcursionTooLong { .. } | Error::ReturnTooLong { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
