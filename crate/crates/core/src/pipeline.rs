//! The reduction chain from a Linear-FIXP circuit to its games.

use crate::fixp::{clamp_outputs, normalize_max_zero, FixpCircuit, FixpError};
use crate::lcp_game::{
    build_direct_lcp, build_game, build_lcp_c, build_symmetric_game, imitation_game, normalize,
    BimatrixGame, LcpGameError, LcpInstance, NormalizedSystem, SymmetricGame,
};
use crate::lp::ParamLp;

/// Clamp and max-zero normalize `c` unless it already is.
pub fn prepare_circuit(c: &FixpCircuit) -> Result<FixpCircuit, FixpError> {
    let clamped = if c.is_clamped() {
        c.clone()
    } else {
        clamp_outputs(c)?
    };
    if clamped.is_normalized() {
        Ok(clamped)
    } else {
        normalize_max_zero(&clamped)
    }
}

/// Every intermediate object of the chain for one circuit.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// The clamped, normalized circuit the LP encodes.
    pub circuit: FixpCircuit,
    pub lp: ParamLp,
    pub system: NormalizedSystem,
    pub game: BimatrixGame,
}

impl Reduction {
    pub fn from_circuit(c: &FixpCircuit) -> Result<Self, LcpGameError> {
        let circuit = prepare_circuit(c).map_err(crate::lp::LpError::from)?;
        let lp = ParamLp::from_circuit(&circuit)?;
        let system = normalize(&lp)?;
        let game = build_game(&system)?;
        Ok(Reduction {
            circuit,
            lp,
            system,
            game,
        })
    }

    pub fn lcp(&self) -> Result<LcpInstance, LcpGameError> {
        build_lcp_c(&self.system)
    }

    pub fn direct_lcp(&self) -> Result<LcpInstance, LcpGameError> {
        build_direct_lcp(&self.lp)
    }

    pub fn symmetric(&self) -> Result<SymmetricGame, LcpGameError> {
        build_symmetric_game(&self.lp)
    }

    pub fn imitation(&self) -> Result<BimatrixGame, LcpGameError> {
        Ok(imitation_game(&self.symmetric()?))
    }
}
