//! Transition tables of the reduced system: a partition of a block into four
//! half-open intervals with constant interval and block transitions.

use std::fmt;

use num_bigint::BigInt;

use super::ReducedSystem;
use crate::error::Result;
use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamCase {
    /// `6β < α`
    I,
    /// `4β <= α < 6β`
    II,
    /// `3β <= α < 4β`
    III,
    /// `2β < α < 3β`
    IV,
}

impl fmt::Display for ParamCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParamCase::I => "I",
            ParamCase::II => "II",
            ParamCase::III => "III",
            ParamCase::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Whether a point lies in the odd (`2b − 1`) or even (`2b`) interval of its block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRow {
    pub lo: i64,
    pub hi: i64,
    pub length: i64,
    pub parity: Parity,
    /// `c(F′(z)) − c(z)`
    pub dc: i64,
    /// `b(F′(z)) − b(z)`
    pub db: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionTable {
    pub case: ParamCase,
    pub rows: [TransitionRow; 4],
}

impl TransitionTable {
    /// The row containing `z mod α`.
    pub fn row_of(&self, residue: i64) -> &TransitionRow {
        self.rows
            .iter()
            .find(|r| r.lo <= residue && residue < r.hi)
            .expect("rows partition the block")
    }
}

pub fn param_case(alpha: i64, beta: i64) -> ParamCase {
    if alpha > 6 * beta {
        ParamCase::I
    } else if alpha >= 4 * beta {
        ParamCase::II
    } else if alpha >= 3 * beta {
        ParamCase::III
    } else {
        ParamCase::IV
    }
}

fn row(lo: i64, hi: i64, parity: Parity, dc: i64, db: i64) -> TransitionRow {
    TransitionRow {
        lo,
        hi,
        length: hi - lo,
        parity,
        dc,
        db,
    }
}

/// Rows may have length zero on the case boundaries `α = 6β`, `4β`, `3β`.
pub fn transition_table(p: &Params) -> Result<TransitionTable> {
    let rs = ReducedSystem::new(p)?;
    let (a, b) = (rs.a, rs.b);
    let u = a - 2 * b;
    use Parity::{Even, Odd};
    let case = param_case(a, b);
    let rows = match case {
        ParamCase::I => [
            row(0, a - 6 * b, Odd, 0, 0),
            row(a - 6 * b, a - 4 * b, Odd, 1, 0),
            row(a - 4 * b, u, Odd, 2, 1),
            row(u, a, Even, -3, -1),
        ],
        ParamCase::II => [
            row(0, a - 4 * b, Odd, 1, 0),
            row(a - 4 * b, u, Odd, 2, 1),
            row(u, 2 * (a - 3 * b), Even, -3, -1),
            row(2 * (a - 3 * b), a, Even, -2, -1),
        ],
        // The second row starts at 2(α − 3β); its length is 4β − α.
        ParamCase::III => [
            row(0, 2 * (a - 3 * b), Odd, 2, 1),
            row(2 * (a - 3 * b), u, Odd, 3, 1),
            row(u, 2 * u, Even, -2, -1),
            row(2 * u, a, Even, -1, 0),
        ],
        ParamCase::IV => [
            row(0, u, Odd, 3, 1),
            row(u, 2 * u, Even, -2, -1),
            row(2 * u, 3 * u, Even, -1, 0),
            row(3 * u, a, Even, 0, 0),
        ],
    };
    Ok(TransitionTable { case, rows })
}

/// Checks every row against the dynamics on `[0, α)`.
pub fn table_matches_dynamics(p: &Params) -> Result<bool> {
    let rs = ReducedSystem::new(p)?;
    let table = transition_table(p)?;
    for z in 0..rs.a {
        let zb = BigInt::from(z);
        let img = rs.step(&zb);
        let r = table.row_of(z);
        let parity = if rs.is_odd_interval(&zb) { Parity::Odd } else { Parity::Even };
        let dc = rs.interval_of(&img) - rs.interval_of(&zb);
        let db = rs.block_of(&img) - rs.block_of(&zb);
        if parity != r.parity || dc != BigInt::from(r.dc) || db != BigInt::from(r.db) {
            return Ok(false);
        }
    }
    Ok(true)
}
