use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two interpolation abscissae (function values) coincide.
    #[error("interpolation nodes {0} and {1} have coincident function values")]
    DegenerateNodes(usize, usize),
    #[error("interpolation node {0} is not finite")]
    InvalidNode(usize),
    #[error("interpolation needs at least two data values, got {0}")]
    TooFewData(usize),
    /// A step ratio q equals 1 or two ratios coincide.
    #[error("degenerate step ratio: {0}")]
    DegenerateRatio(String),
    #[error("derivative vanishes at x = {0}")]
    ZeroDerivative(String),
    #[error("invalid method family: {0}")]
    InvalidFamily(String),
    #[error("function undefined at x = {0}")]
    Domain(String),
    #[error("need at least {needed} usable iterates, got {got}")]
    TooFewIterates { needed: usize, got: usize },
    #[error("no sign change on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    InvalidBracket {
        a: String,
        b: String,
        fa: String,
        fb: String,
    },
    #[error("cannot parse {0:?} as a number")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
