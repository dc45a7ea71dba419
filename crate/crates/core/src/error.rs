use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("chain map does not commute with the coboundaries")]
    NotAChainMap,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid lattice homomorphism: {0}")]
    InvalidHom(String),

    #[error("field vanishes identically at lambda = {lambda}")]
    ZeroField { lambda: f64 },

    #[error("cannot resolve equilibria at lambda = {lambda}: {reason}")]
    RootResolution { lambda: f64, reason: String },

    #[error("time reversal requested on a semiflow phase space")]
    ReversedSemiflow,

    #[error("region is not an attractor: {0}")]
    NotAnAttractor(String),

    #[error("continuation from lambda = {from} to lambda = {to} failed: {reason}")]
    Continuation { from: f64, to: f64, reason: String },

    #[error("more than one signature change in grid cell [{lo}, {hi}]; refine the grid")]
    BifurcationsTooDense { lo: f64, hi: f64 },

    #[error("edge ({lo}, {hi}) is not constant: signature changes inside it")]
    NonConstantEdge { lo: f64, hi: f64 },

    #[error("restriction map is not invertible around the loop at cell {0}")]
    NonInvertibleMonodromy(String),

    #[error("Mayer-Vietoris sequence is not exact: {0}")]
    NotExact(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter subset: {0}")]
    InvalidSubset(String),

    #[error("window [{lo}, {hi}] contains another bifurcation at {other}")]
    WindowNotIsolated { lo: f64, hi: f64, other: f64 },

    #[error("no bifurcation detected near lambda = {lambda} in [{lo}, {hi}]")]
    NoBifurcation { lambda: f64, lo: f64, hi: f64 },

    #[error("invalid transform: {0}")]
    InvalidTransform(String),
}

impl Error {
    /// Errors caused by numerical resolution limits rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroField { .. }
                | Error::RootResolution { .. }
                | Error::Continuation { .. }
                | Error::BifurcationsTooDense { .. }
                | Error::NonConstantEdge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
