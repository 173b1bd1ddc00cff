use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ela_core::Error),
    #[error("{0}")]
    Config(String),
    #[error("output path `{0}` escapes the output directory")]
    OutsideRoot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use ela_core::Error as E;
        match self {
            CliError::Core(E::BudgetExceeded(_)) => 3,
            CliError::Core(E::Numerical(_)) => 4,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        use ela_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::UnknownFunction(_) => "unknown_function",
                E::Dimension { .. } => "dimension",
                E::Length { .. } => "length",
                E::NonFinite => "non_finite",
                E::InvalidBounds(_) => "invalid_bounds",
                E::InvalidArgument(_) => "invalid_argument",
                E::ReducedDimension { .. } => "reduced_dimension",
                E::GridTooLarge { .. } => "grid_too_large",
                E::Numerical(_) => "numerical",
                E::UnknownGroup(_) => "unknown_group",
                E::BudgetExceeded(_) => "budget_exceeded",
                E::Io(_) => "io",
                E::Csv(_) => "csv",
                E::Json(_) => "json",
            },
            CliError::Config(_) => "config",
            CliError::OutsideRoot(_) => "outside_output_dir",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Csv(_) => "csv",
        }
    }
}
