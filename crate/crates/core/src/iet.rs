//! The return map as an interval exchange over the intervals
//! `Δ_m = [δ_{m−1}, δ_m)`: interval and block indices, metric data and the
//! permutation of the intervals.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::poincare::{self, SingularitySeq};

/// Length and translation of one interval `Δ_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellData {
    pub index: u64,
    pub length: BigInt,
    pub translation: BigInt,
}

/// The block `Ξ_n = Δ_{2n−1} ∪ Δ_{2n}` as the half-open range `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRef {
    pub n: u64,
    pub start: BigInt,
    pub end: BigInt,
    pub size: BigInt,
}

/// `⌊(c + 1) / 2⌋`.
pub fn block_of_index(c: u64) -> u64 {
    c.div_ceil(2)
}

/// Closed-form permutation: `σ(j) = i` when `Δ_j` lands in position `i`.
pub fn sigma(upper_range: bool, j: u64) -> u64 {
    assert!(j >= 1, "interval indices start at 1");
    if upper_range {
        match j {
            2 => 1,
            j if j % 2 == 0 => j - 2,
            j => j + 2,
        }
    } else {
        match j {
            1 => 2,
            j if j % 2 == 0 => j + 2,
            j => j - 2,
        }
    }
}

/// Interval-exchange view of the return map for one nontrivial parameter pair.
#[derive(Debug, Clone)]
pub struct Iet {
    params: Params,
    seq: SingularitySeq,
}

impl Iet {
    pub fn new(params: &Params) -> Result<Self> {
        Ok(Iet {
            params: params.clone(),
            seq: SingularitySeq::new(params)?,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn singularities(&self) -> &SingularitySeq {
        &self.seq
    }

    /// `c(x)`: the `m` with `δ_{m−1} <= x < δ_m`.
    pub fn interval_of(&self, x: &BigInt) -> Result<u64> {
        self.seq.locate(x)
    }

    /// `b(x) = ⌊(c(x) + 1) / 2⌋`.
    pub fn block_of(&self, x: &BigInt) -> Result<u64> {
        Ok(block_of_index(self.interval_of(x)?))
    }

    pub fn block(&self, n: u64) -> BlockRef {
        assert!(n >= 1, "block indices start at 1");
        let start = self.seq.delta(2 * n - 2);
        let end = self.seq.delta(2 * n);
        BlockRef {
            n,
            size: &end - &start,
            start,
            end,
        }
    }

    pub fn return_map(&self, x: &BigInt) -> Result<BigInt> {
        poincare::return_map(&self.params, x)
    }

    pub fn return_map_inverse(&self, x: &BigInt) -> Result<BigInt> {
        poincare::return_map_inverse(&self.params, x)
    }

    /// One step of the exchange using the interval table instead of the
    /// transit-time formulas.
    pub fn step_by_cell(&self, x: &BigInt) -> Result<BigInt> {
        let c = self.interval_of(x)?;
        Ok(x + self.cell_data(c)?.translation)
    }

    /// Closed-form length and translation of `Δ_m`.
    pub fn cell_data(&self, m: u64) -> Result<CellData> {
        if m == 0 {
            return Err(Error::Inconsistent("interval indices start at 1".into()));
        }
        let a = self.params.alpha();
        let b = self.params.beta();
        let (length, translation) = if self.params.is_upper_range() {
            if m.is_multiple_of(2) {
                let k = BigInt::from(m / 2);
                let odd = &k * 2 - 1;
                (b * &odd, (b * 2 - a) * odd)
            } else {
                let k = BigInt::from(m.div_ceil(2));
                ((a - b * 2) * &k, b * 4 * k)
            }
        } else if m == 1 {
            (a - b, b * 2 - a)
        } else if m.is_multiple_of(2) {
            let k = BigInt::from(m / 2);
            let odd = k * 2 + 1;
            (&odd * (a - b), odd * (b * 2 - a))
        } else {
            let k = BigInt::from((m - 1) / 2);
            (&k * (b * 2 - a), k * 4 * (b - a))
        };
        Ok(CellData {
            index: m,
            length,
            translation,
        })
    }

    pub fn sigma(&self, j: u64) -> u64 {
        sigma(self.params.is_upper_range(), j)
    }

    /// `σ(1..=count)` reconstructed from the dynamics: the images
    /// `F(δ_{j−1})` of the left end-points, ranked in increasing order.
    pub fn sigma_from_images(&self, count: u64) -> Result<Vec<u64>> {
        // Each interval moves by at most two positions, so a few extra
        // intervals make the ranks of the first `count` exact.
        let extra = 8;
        let mut starts = BTreeMap::new();
        for j in 1..=count + extra {
            starts.insert(self.return_map(&self.seq.delta(j - 1))?, j);
        }
        let mut out = vec![0; count as usize];
        for (rank, (_, j)) in starts.into_iter().enumerate() {
            if j <= count {
                out[(j - 1) as usize] = rank as u64 + 1;
            }
        }
        Ok(out)
    }

    /// Both sides of `F(δ_{j−1}) = Σ_{k ∈ L_i} |Δ_k|` with `i = σ(j)` and
    /// `L_i = {σ⁻¹(k) : k < i}`.
    pub fn ietsum_sides(&self, j: u64) -> Result<(BigInt, BigInt)> {
        let upper = self.params.is_upper_range();
        let i = sigma(upper, j);
        let lhs = self.return_map(&self.seq.delta(j - 1))?;
        // σ⁻¹ of any k < i lies within k + 2.
        let mut rhs = BigInt::from(0);
        for src in 1..=i + 3 {
            if sigma(upper, src) < i {
                rhs += self.cell_data(src)?.length;
            }
        }
        Ok((lhs, rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iet(a: i64, b: i64) -> Iet {
        Iet::new(&Params::new(a, b).unwrap()).unwrap()
    }
    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn interval_examples() {
        let t = iet(19, 5);
        assert_eq!(t.interval_of(&b(0)).unwrap(), 1);
        assert_eq!(t.interval_of(&b(9)).unwrap(), 2);
        assert_eq!(t.interval_of(&b(13)).unwrap(), 2);
        assert_eq!(t.interval_of(&b(14)).unwrap(), 3);
        assert_eq!(t.interval_of(&b(47)).unwrap(), 5);
        for m in 1..50 {
            assert_eq!(t.interval_of(&t.singularities().delta(m)).unwrap(), m + 1);
        }
        assert!(Iet::new(&Params::new(4, 2).unwrap()).is_err());
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_of_index(1), 1);
        assert_eq!(block_of_index(2), 1);
        assert_eq!(block_of_index(3), 2);
        let t = iet(19, 5);
        assert_eq!(t.block_of(&b(1000)).unwrap(), 11);
        assert_eq!(t.singularities().x(10), b(995));
        assert_eq!(t.singularities().x(11), b(1199));
        assert_eq!(t.block_of(&b(47)).unwrap(), 3);
        for n in 1..200u64 {
            let blk = t.block(n);
            assert_eq!(blk.size, b(19 * n as i64 - 5));
            assert_eq!(blk.start, t.singularities().x(n - 1));
        }
    }

    #[test]
    fn cell_examples() {
        let t = iet(19, 5);
        let c = t.cell_data(3).unwrap();
        assert_eq!((c.length, c.translation), (b(18), b(40)));
        let c = t.cell_data(4).unwrap();
        assert_eq!((c.length, c.translation), (b(15), b(-27)));
        let c = t.cell_data(1).unwrap();
        assert_eq!((c.length, c.translation), (b(9), b(20)));
        assert_eq!(t.return_map(&b(0)).unwrap(), b(20));
    }

    #[test]
    fn cells_are_rigid_translations() {
        for (a, bb) in [(19, 5), (19, 14), (8, 1), (7, 6), (23, 13)] {
            let t = iet(a, bb);
            for m in 1..80 {
                let cd = t.cell_data(m).unwrap();
                let lo = t.singularities().delta(m - 1);
                let hi = t.singularities().delta(m);
                assert_eq!(&hi - &lo, cd.length, "({a},{bb}) m={m}");
                let mut x = lo.clone();
                while x < hi {
                    assert_eq!(t.return_map(&x).unwrap() - &x, cd.translation);
                    x += 1;
                }
            }
        }
    }

    #[test]
    fn intervals_tile_the_ray() {
        let t = iet(19, 5);
        let mut total = b(0);
        for k in 1..=400 {
            total += t.cell_data(k).unwrap().length;
            if k % 2 == 0 {
                assert_eq!(total, t.singularities().x(k / 2));
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let up: Vec<u64> = (1..=6).map(|j| sigma(true, j)).collect();
        assert_eq!(up, vec![3, 1, 5, 2, 7, 4]);
        let low: Vec<u64> = (1..=3).map(|j| sigma(false, j)).collect();
        assert_eq!(low, vec![2, 4, 1]);
        for j in 1..=200 {
            assert_eq!(sigma(false, sigma(true, j)), j);
            assert_eq!(sigma(true, sigma(false, j)), j);
        }
    }

    #[test]
    fn sigma_from_dynamics() {
        for (a, bb) in [(19, 5), (19, 14), (8, 1), (5, 4)] {
            let t = iet(a, bb);
            let ranked = t.sigma_from_images(200).unwrap();
            let closed: Vec<u64> = (1..=200).map(|j| t.sigma(j)).collect();
            assert_eq!(ranked, closed);
            for j in 1..=200 {
                let (l, r) = t.ietsum_sides(j).unwrap();
                assert_eq!(l, r, "({a},{bb}) j={j}");
            }
        }
    }

    #[test]
    fn step_by_cell_matches_return_map() {
        let t = iet(31, 9);
        for x in (0..50_000).step_by(13) {
            let x = b(x);
            assert_eq!(t.step_by_cell(&x).unwrap(), t.return_map(&x).unwrap());
        }
    }
}
