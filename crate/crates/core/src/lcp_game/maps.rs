use super::{GameKind, GameMeta, LcpGameError};
use crate::exactmath::{RatVector, Rational};
use crate::nash::Profile;

fn split_last(v: &RatVector, what: &str) -> Result<(RatVector, Rational), LcpGameError> {
    let Some((last, head)) = v.split_last() else {
        return Err(LcpGameError::Precondition(format!("{what} is empty")));
    };
    Ok((RatVector::new(head.to_vec()), last.clone()))
}

fn divide_positive(
    v: &RatVector,
    d: &Rational,
    name: &str,
) -> Result<RatVector, LcpGameError> {
    if !d.is_positive() {
        return Err(LcpGameError::LemmaFalsified(format!(
            "equilibrium has {name} = {d}, but every equilibrium of a constructed game has {name} > 0"
        )));
    }
    Ok(v.iter().map(|e| e / d).collect())
}

/// `(x~ / s, y~ / t)` for an equilibrium `((x~, s), (y~, t))`.
pub fn ne_to_lcp(profile: &Profile) -> Result<(RatVector, RatVector), LcpGameError> {
    let (xt, s) = split_last(&profile.x, "first strategy")?;
    let (yt, t) = split_last(&profile.y, "second strategy")?;
    Ok((divide_positive(&xt, &s, "s")?, divide_positive(&yt, &t, "t")?))
}

/// `((x, 1) / (1 + sum x), (y, 1) / (1 + sum y))`.
pub fn lcp_to_ne(x: &RatVector, y: &RatVector) -> Profile {
    Profile::new(lcp_to_symne(x), lcp_to_symne(y))
}

/// `x / t` for a symmetric equilibrium `(x, t)`.
pub fn symne_to_lcp(z: &RatVector) -> Result<RatVector, LcpGameError> {
    let (x, t) = split_last(z, "strategy")?;
    divide_positive(&x, &t, "t")
}

/// `(x, 1) / (1 + sum x)`.
pub fn lcp_to_symne(x: &RatVector) -> RatVector {
    let total = x.sum() + Rational::one();
    x.with_last(Rational::one()).iter().map(|e| e / &total).collect()
}

/// Fixed point read from an equilibrium of a constructed game. For the
/// rank game the first player's strategy is used, for the symmetric game
/// the common strategy `x`, and for the imitation game the second player's.
pub fn game_to_fixed_point(profile: &Profile, meta: &GameMeta) -> Result<RatVector, LcpGameError> {
    match meta.kind {
        GameKind::RankKPlus1 => {
            let (xt, s) = split_last(&profile.x, "first strategy")?;
            let x = divide_positive(&xt, &s, "s")?;
            read_outputs(&x, meta)
        }
        GameKind::Symmetric => symmetric_to_fixed_point(&profile.x, meta),
        GameKind::Imitation => symmetric_to_fixed_point(&profile.y, meta),
    }
}

/// `lambda_l = x_{o_l} / t` for a symmetric equilibrium `(x, t)`.
pub fn symmetric_to_fixed_point(z: &RatVector, meta: &GameMeta) -> Result<RatVector, LcpGameError> {
    read_outputs(&symne_to_lcp(z)?, meta)
}

fn read_outputs(x: &RatVector, meta: &GameMeta) -> Result<RatVector, LcpGameError> {
    if x.dim() != meta.m {
        return Err(LcpGameError::Precondition(format!(
            "strategy of dimension {} for a game over {} variables",
            x.dim() + 1,
            meta.m
        )));
    }
    Ok(meta.output_rows.iter().map(|&o| x[o].clone()).collect())
}
