//! Exact reductions from discrete Brouwer instances through Linear-FIXP
//! circuits and parameterized LPs to low-rank bimatrix games, with solvers
//! and checkers for every step.

pub mod brouwer;
pub mod compiler;
pub mod exactmath;
pub mod fixp;
pub mod formats;
pub mod lcp_game;
pub mod lp;
pub mod nash;
pub mod pipeline;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Math(#[from] exactmath::MathError),
    #[error(transparent)]
    Circuit(#[from] fixp::FixpError),
    #[error(transparent)]
    Lp(#[from] lp::LpError),
    #[error(transparent)]
    LcpGame(#[from] lcp_game::LcpGameError),
    #[error(transparent)]
    Nash(#[from] nash::NashError),
    #[error(transparent)]
    Brouwer(#[from] brouwer::BrouwerError),
    #[error(transparent)]
    Compile(#[from] compiler::CompileError),
    #[error(transparent)]
    Format(#[from] formats::FormatError),
}

impl Error {
    /// A condition the reductions rule out was observed.
    pub fn is_lemma_alarm(&self) -> bool {
        use compiler::CompileError as C;
        match self {
            Error::LcpGame(lcp_game::LcpGameError::LemmaFalsified(_)) => true,
            Error::Compile(C::LemmaFalsified(_) | C::SamplingBound { .. }) => true,
            Error::Nash(nash::NashError::NotEquilibrium(_)) => true,
            _ => false,
        }
    }

    /// The input was malformed or violates a documented precondition.
    pub fn is_validation(&self) -> bool {
        use compiler::CompileError as C;
        use lcp_game::LcpGameError as G;
        use lp::LpError as L;
        use nash::NashError as N;
        match self {
            Error::Format(_) | Error::Brouwer(_) | Error::Circuit(_) => true,
            Error::Compile(c) => matches!(
                c,
                C::Brouwer(_) | C::Circuit(_) | C::BadParams(_) | C::AlreadyShrunk | C::Domain(_)
            ),
            Error::Lp(l) => matches!(
                l,
                L::Circuit(_) | L::NotUnitLowerTriangular | L::Shape(_) | L::ArityMismatch { .. }
            ),
            Error::LcpGame(g) => matches!(g, G::Precondition(_) | G::Lp(L::Circuit(_))),
            Error::Nash(n) => matches!(
                n,
                N::DimensionTooLarge { .. } | N::Shape { .. } | N::BadLabel { .. } | N::Circuit(_)
            ),
            Error::Math(_) => false,
        }
    }
}
