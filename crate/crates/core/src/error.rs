use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The intermediate tip-speed ratio of the Cp form degenerated; the
    /// requested λ lies outside the range the parameterisation supports.
    #[error("non-finite Cp at lambda={lambda}, beta={beta}")]
    NonFiniteResult { lambda: f64, beta: f64 },

    #[error("Cp parameterisation '{0}' has no positive value on the search interval")]
    NoPositiveCp(String),

    #[error("cp_max={0} must lie in (0, 16/27]")]
    InvalidCpMax(f64),

    #[error("unknown Cp parameterisation '{0}'")]
    UnknownCpModel(String),

    #[error("missing mandatory field '{0}'")]
    MissingMandatoryField(&'static str),

    #[error("invalid turbine spec: {0}")]
    InvalidSpec(String),

    #[error("hub height {hub_height} m does not clear a rotor of radius {radius} m")]
    GroundStrike { hub_height: f64, radius: f64 },

    #[error("hub height is required when shear or veer is applied")]
    MissingHubHeight,

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("rotor diameter is required to invert the power equation")]
    MissingDiameter,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown sweep parameter '{0}'")]
    UnknownParameter(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFiniteResult { .. } => "NonFiniteResult",
            Error::NoPositiveCp(_) => "NoPositiveCp",
            Error::InvalidCpMax(_) => "InvalidCpMax",
            Error::UnknownCpModel(_) => "UnknownCpModel",
            Error::MissingMandatoryField(_) => "MissingMandatoryField",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::GroundStrike { .. } => "GroundStrike",
            Error::MissingHubHeight => "MissingHubHeight",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::MissingDiameter => "MissingDiameter",
            Error::InvalidInput(_) => "InvalidInput",
            Error::UnknownParameter(_) => "UnknownParameter",
            Error::Csv(_) => "Csv",
            Error::Json(_) => "Json",
            Error::Io(_) => "Io",
        }
    }

    /// True for failures of the numerical model itself rather than of the
    /// caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteResult { .. } | Error::NoPositiveCp(_) | Error::DivisionByZero(_)
        )
    }
}
