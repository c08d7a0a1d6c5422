use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while loading tables, running samplers,
/// ranking treatments, or rendering reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: no header row")]
    EmptyInput,

    #[error("table '{name}' has no data rows")]
    NoRows { name: String },

    #[error("row {row}: expected {expected} cells, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("no goal column: need at least one name ending in '+' or '-'")]
    NoGoalColumn,

    #[error("no independent column: every column is a goal")]
    NoIndependentColumn,

    #[error("column '{column}', row {row}: cannot parse '{token}' as a number")]
    BadNumber {
        column: String,
        row: usize,
        token: String,
    },

    #[error("column subset is empty")]
    EmptyColumnSubset,

    #[error("row has a missing value in goal column '{column}'")]
    MissingGoal { column: String },

    #[error("label budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },

    #[error("budget must be at least {min}, got {got}")]
    BudgetTooSmall { min: usize, got: usize },

    #[error("naive-bayes class '{0}' has no rows")]
    EmptyClass(&'static str),

    #[error("sample '{0}' is empty")]
    EmptySample(String),

    #[error("need at least {need} treatments, got {got}")]
    TooFewTreatments { need: usize, got: usize },

    #[error("{name} must lie in (0, 1), got {value}")]
    UnitRange { name: &'static str, value: f64 },

    #[error("{name} must be at least 1, got {value}")]
    CountRange { name: &'static str, value: u64 },

    #[error("sample-size result overflows a 64-bit count")]
    Overflow,

    #[error("table has fewer than 2 rows; cannot pick corners")]
    TooFewRows,

    #[error("no datasets given")]
    NoDatasets,

    #[error("unknown report format '{0}' (expected markdown, csv, or json)")]
    UnknownFormat(String),

    #[error("unknown sampler '{0}' (expected RANDOM, LINE, or LITE)")]
    UnknownSampler(String),

    #[error("plan error: {0}")]
    Plan(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
