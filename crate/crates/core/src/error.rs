use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertexInEdge([usize; 3]),
    #[error("vertex {index} out of range for {n} vertices")]
    OutOfRange { index: usize, n: usize },
    #[error("edge {0:?} appears more than once")]
    DuplicateEdge([usize; 3]),
    #[error("vertex name {0:?} is not unique")]
    DuplicateName(String),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("{what}: would produce {requested} (cap {cap})")]
    TooLarge {
        what: &'static str,
        requested: u128,
        cap: u128,
    },
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("search refused: {n} vertices exceeds the bound {bound}")]
    SearchBudgetExceeded { n: usize, bound: usize },
    #[error("labeled graph contains a monotone P3 {0:?}")]
    NotHalfBipartite((usize, usize, usize)),
    #[error("labeling parts overlap at vertex {0}")]
    Overlap(usize),
    #[error("labeling is not injective at value {0}")]
    NotInjective(i64),
    #[error("not a labeling: {0}")]
    NotALabeling(String),
    #[error("not a (2,1)-type partition: {0}")]
    NotTwoOneType(String),
    #[error("certificate does not match graph: {0}")]
    ShapeMismatch(String),
    #[error("function is not semi-layered ({a1} A1 and {a2} A2 violations)")]
    NotSemiLayered { a1: usize, a2: usize },
    #[error("function is not layered")]
    NotLayered,
    #[error("summands do not share the same reduced graph")]
    ReducedGraphMismatch,
    #[error("shared layer conflict: {0}")]
    SharedLayerConflict(String),
    #[error("vertex {0} lies in no edge")]
    IsolatedVertex(usize),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
