use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("device set has no devices")]
    EmptySet,

    #[error("device {device} has no on-states")]
    EmptyDevice { device: usize },

    #[error("device {device}: on-state power must be positive")]
    ZeroPower { device: usize },

    #[error("device {device}: non-increasing on-states")]
    NonIncreasing { device: usize },

    #[error("generator produced duplicate power value {value} W (ratio too close to 1)")]
    DuplicatePower { value: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("aggregated power exceeds the 64-bit range")]
    PowerOverflow,

    #[error("state count exceeds the 64-bit range")]
    StateCountOverflow,

    #[error("occupation count exceeds the 128-bit range")]
    CountOverflow,

    #[error("state index {index} out of range for {states} states")]
    StateIndexOutOfRange { index: u64, states: u64 },

    #[error("state digits do not match the device set")]
    DigitsMismatch,

    #[error("probability model does not match the device set")]
    ShapeMismatch,

    #[error("device {device}: invalid on-state probabilities")]
    InvalidProbability { device: usize },

    #[error("enumeration of {states} states exceeds the cap of {cap}; use the convolution engine")]
    EnumerationCap { states: u64, cap: u64 },

    #[error("power axis of {len} values exceeds the cap of {cap}")]
    AxisTooLarge { len: u64, cap: u64 },

    #[error("distribution does not sum to 1 (sum = {0})")]
    NotNormalized(f64),

    #[error("proficiency is undefined at zero entropy")]
    ZeroEntropy,
}

impl Error {
    /// True for errors caused by bounded resources (overflow, caps) rather than bad input.
    pub fn is_computational(&self) -> bool {
        matches!(
            self,
            Error::PowerOverflow
                | Error::StateCountOverflow
                | Error::CountOverflow
                | Error::EnumerationCap { .. }
                | Error::AxisTooLarge { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
