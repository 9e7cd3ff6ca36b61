//! Regular points: points of `Z₊` whose α-code is also an α-code of the
//! reduced system, and the decomposition of a block into code cells.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ReducedSystem;
use crate::codes::alpha_code_with;
use crate::error::Result;
use crate::iet::Iet;
use crate::params::Params;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularMatch {
    /// Block index `n(x)`.
    pub block: u64,
    /// `(n − 1)α + ⌊α(x − x_{n−1}) / (nα − β)⌋`, the scaled position of `x` in its block.
    pub guess: BigInt,
    /// Least reduced point with the same block-relative α-code.
    pub z: Option<BigInt>,
    /// `(n, k)`: block index and rank of the code cell within the block.
    pub cell: Option<(u64, usize)>,
    /// `n > 2b` for the safety margin `b`.
    pub margin_ok: bool,
}

impl RegularMatch {
    pub fn is_regular(&self) -> bool {
        self.z.is_some()
    }
}

pub fn match_regular_with(iet: &Iet, rs: &ReducedSystem, x: &BigInt) -> Result<RegularMatch> {
    let n = iet.block_of(x)?;
    let code = alpha_code_with(iet, x)?;
    let blk = iet.block(n);
    let a = BigInt::from(rs.a);
    let base = &a * (n - 1);
    let guess = &base + (&a * (x - &blk.start)) / &blk.size;
    let hit = rs.match_relative(n, code.entries());
    let margin = safety_margin(rs.params())?;
    Ok(RegularMatch {
        block: n,
        guess,
        z: hit.map(|(s, _)| base + s),
        cell: hit.map(|(_, k)| (n, k)),
        margin_ok: BigInt::from(n) > margin.b * 2,
    })
}

pub fn match_regular(p: &Params, x: &BigInt) -> Result<RegularMatch> {
    let rs = ReducedSystem::new(p)?;
    let iet = Iet::new(p)?;
    match_regular_with(&iet, &rs, x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyMargin {
    pub b1: BigInt,
    pub b2: BigInt,
    pub b: BigInt,
}

/// Bound on the mismatch between the scaled return map on block `n` and the
/// reduced system; independent of `n`.
pub fn safety_margin(p: &Params) -> Result<SafetyMargin> {
    let (a, b) = p.small()?;
    let (a, b) = (a as i128, b as i128);
    let mut b1 = 0i128;
    let mut m2 = 0i128;
    for k in -a..=a {
        b1 = b1
            .max((k * (a * k - a - 2 * b) / 2).abs())
            .max((k * (a * k + a - 6 * b) / 2).abs());
        m2 = m2.max((4 * b * k).abs()).max(((2 * b - a) * (2 * k - 1)).abs());
    }
    let b2 = a * m2;
    Ok(SafetyMargin {
        b1: b1.into(),
        b2: b2.into(),
        b: (b1 + b2).into(),
    })
}

/// A maximal run of consecutive points sharing one α-code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub start: BigInt,
    pub size: u64,
    /// Cell rank within the block when the code is regular.
    pub k: Option<usize>,
    pub z: Option<BigInt>,
}

impl Cell {
    pub fn is_regular(&self) -> bool {
        self.k.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub n: u64,
    pub block_size: u64,
    pub cells: Vec<Cell>,
    pub regular_cells: usize,
    /// Total size of the irregular cells.
    pub residual: u64,
}

impl BlockDecomposition {
    pub fn regular_sizes(&self) -> Vec<u64> {
        self.cells.iter().filter(|c| c.is_regular()).map(|c| c.size).collect()
    }
}

/// Scans `Ξ_n` and groups its points by α-code.
pub fn block_decomposition(p: &Params, n: u64) -> Result<BlockDecomposition> {
    let rs = ReducedSystem::new(p)?;
    let iet = Iet::new(p)?;
    block_decomposition_with(&iet, &rs, n)
}

pub fn block_decomposition_with(iet: &Iet, rs: &ReducedSystem, n: u64) -> Result<BlockDecomposition> {
    let blk = iet.block(n);
    let block_size = blk.size.to_u64().ok_or(crate::error::Error::TooLarge("block"))?;
    let mut cells: Vec<Cell> = Vec::new();
    let mut last_code = None;
    let mut x = blk.start.clone();
    while x < blk.end {
        let code = alpha_code_with(iet, &x)?;
        if last_code.as_ref() == Some(&code) {
            cells.last_mut().expect("open cell").size += 1;
        } else {
            let hit = rs.match_relative(n, code.entries());
            cells.push(Cell {
                start: x.clone(),
                size: 1,
                k: hit.map(|(_, k)| k),
                z: hit.map(|(s, _)| BigInt::from(rs.a) * (n - 1) + s),
            });
            last_code = Some(code);
        }
        x += 1;
    }
    let regular_cells = cells.iter().filter(|c| c.is_regular()).count();
    let residual = cells.iter().filter(|c| !c.is_regular()).map(|c| c.size).sum();
    Ok(BlockDecomposition {
        n,
        block_size,
        cells,
        regular_cells,
        residual,
    })
}
