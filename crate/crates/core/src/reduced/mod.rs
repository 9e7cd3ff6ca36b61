//! The reduced system `F′(z) = z + 4β` if `z mod α < α − 2β`, else
//! `z − 2(α − 2β)`, on all of `Z`, and the analysis of the return map built on it.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::params::{ParityClass, Params};

pub mod classify;
pub mod functionals;
pub mod regular;
pub mod transitions;

pub use classify::{classify_orbit, density_estimate, ClassifyConfig, DensityReport, OrbitClassification};
pub use functionals::{code_functionals, t_recursions_check, total_translation, Functionals, RecursionReport, TotalTranslation};
pub use regular::{block_decomposition, match_regular, safety_margin, BlockDecomposition, Cell, RegularMatch, SafetyMargin};
pub use transitions::{transition_table, ParamCase, Parity, TransitionRow, TransitionTable};

/// Relative α-codes of the points `0..α`, keyed by code.
#[derive(Debug)]
struct CodeTable {
    /// code → (least `s` with that code, cell rank starting at 1)
    by_code: HashMap<Vec<i64>, (i64, usize)>,
    cells: usize,
}

/// The reduced system for canonical, nontrivial parameters.
#[derive(Debug)]
pub struct ReducedSystem {
    params: Params,
    a: i64,
    b: i64,
    table: OnceLock<CodeTable>,
}

impl Clone for ReducedSystem {
    fn clone(&self) -> Self {
        ReducedSystem {
            params: self.params.clone(),
            a: self.a,
            b: self.b,
            table: OnceLock::new(),
        }
    }
}

impl ReducedSystem {
    pub fn new(p: &Params) -> Result<Self> {
        if !p.is_canonical() {
            return Err(Error::NonCanonical);
        }
        if p.is_trivial() {
            return Err(Error::TrivialParams);
        }
        let (a, b) = p.small()?;
        Ok(ReducedSystem {
            params: p.clone(),
            a,
            b,
            table: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `u = α − 2β`, the length of the odd part of a block.
    pub fn u(&self) -> i64 {
        self.a - 2 * self.b
    }

    /// `w = 2β`.
    pub fn w(&self) -> i64 {
        2 * self.b
    }

    pub fn step_small(&self, z: i64) -> i64 {
        if z.rem_euclid(self.a) < self.u() {
            z + 4 * self.b
        } else {
            z - 2 * self.u()
        }
    }

    pub fn step(&self, z: &BigInt) -> BigInt {
        if self.residue(z) < self.u() {
            z + 4 * self.b
        } else {
            z - 2 * self.u()
        }
    }

    /// `z mod α`.
    pub fn residue(&self, z: &BigInt) -> i64 {
        z.mod_floor(&BigInt::from(self.a)).to_i64().expect("residue below α")
    }

    /// Block index `⌊z/α⌋ + 1`.
    pub fn block_of(&self, z: &BigInt) -> BigInt {
        z.div_floor(&BigInt::from(self.a)) + 1
    }

    pub fn is_odd_interval(&self, z: &BigInt) -> bool {
        self.residue(z) < self.u()
    }

    /// Interval index: `2b − 1` on the odd part of block `b`, `2b` on the even part.
    pub fn interval_of(&self, z: &BigInt) -> BigInt {
        let b2 = self.block_of(z) * 2;
        if self.is_odd_interval(z) {
            b2 - 1
        } else {
            b2
        }
    }

    fn interval_small(&self, z: i64) -> i64 {
        let b2 = 2 * (z.div_euclid(self.a) + 1);
        if z.rem_euclid(self.a) < self.u() {
            b2 - 1
        } else {
            b2
        }
    }

    pub fn orbit(&self, z: &BigInt, len: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(len);
        let mut cur = z.clone();
        for _ in 0..len {
            let next = self.step(&cur);
            out.push(std::mem::replace(&mut cur, next));
        }
        out
    }

    pub fn code(&self, z: &BigInt, len: usize) -> Vec<BigInt> {
        self.orbit(z, len).iter().map(|y| self.interval_of(y)).collect()
    }

    /// α-code of a point `s` of the first block.
    pub fn relative_code(&self, s: i64) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.a as usize);
        let mut z = s;
        for _ in 0..self.a {
            out.push(self.interval_small(z));
            z = self.step_small(z);
        }
        out
    }

    fn table(&self) -> &CodeTable {
        self.table.get_or_init(|| {
            let mut by_code = HashMap::new();
            let mut cells = 0;
            for s in 0..self.a {
                by_code.entry(self.relative_code(s)).or_insert_with(|| {
                    cells += 1;
                    (s, cells)
                });
            }
            CodeTable { by_code, cells }
        })
    }

    /// Number of distinct α-codes in one block.
    pub fn cell_count(&self) -> usize {
        self.table().cells
    }

    /// The least `s ∈ [0, α)` whose α-code equals `code` after shifting
    /// `code` down by `2(n − 1)`, with its cell rank.
    pub fn match_relative(&self, n: u64, code: &[u64]) -> Option<(i64, usize)> {
        let shift = 2 * (n as i64 - 1);
        let rel: Vec<i64> = code.iter().map(|&c| c as i64 - shift).collect();
        self.table().by_code.get(&rel).copied()
    }

    /// `ε(z)`: `+1` when `z mod 4 ∈ {0, 1}`, else `−1`. Defined for `ᾱ` even.
    pub fn epsilon(&self, z: &BigInt) -> Result<i8> {
        if self.params.alpha_bar().is_odd() {
            return Err(Error::AlphaBarOdd);
        }
        Ok(if crate::arith::mod4(z) <= 1 { 1 } else { -1 })
    }

    /// `Σ db` over `α/4` steps of the orbit of `z`.
    pub fn kappa(&self, z: &BigInt) -> BigInt {
        let steps = (self.a / 4) as usize;
        let orbit = self.orbit(z, steps + 1);
        self.block_of(&orbit[steps]) - self.block_of(&orbit[0])
    }
}

pub fn reduced_step(p: &Params, z: &BigInt) -> Result<BigInt> {
    Ok(ReducedSystem::new(p)?.step(z))
}

pub fn epsilon_of(p: &Params, z: &BigInt) -> Result<i8> {
    if !p.is_canonical() {
        return Err(Error::NonCanonical);
    }
    if p.alpha_bar().is_odd() {
        return Err(Error::AlphaBarOdd);
    }
    Ok(if crate::arith::mod4(z) <= 1 { 1 } else { -1 })
}

/// Inverts `c ↦ b = ⌊(c + 1)/2⌋` on reduced codes. The last entry needs the
/// following block index, so the output is one entry shorter than `b_code`.
pub fn recover_c_from_b(b_code: &[i64], four_beta_le_alpha: bool) -> Vec<i64> {
    b_code
        .windows(2)
        .map(|w| {
            let db = w[1] - w[0];
            let even = if four_beta_le_alpha { db == -1 } else { db != 1 };
            if even {
                2 * w[0]
            } else {
                2 * w[0] - 1
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedReport {
    pub params: Params,
    pub class: ParityClass,
    pub checked: u64,
    /// Common period of all orbits (odd case).
    pub period: Option<u64>,
    /// Number of distinct normalized codes seen (odd case).
    pub normalized_codes: usize,
    pub failures: Vec<BigInt>,
    pub passed: bool,
}

/// Odd `ᾱ`: every `z ∈ [0, lcm(α, 4))` has period exactly `ᾱ` and all
/// normalized codes coincide. Even `ᾱ`: `(F′)^{α/4}(z) = z + ε(z)α` on `[0, 4α)`.
/// Non-canonical input is normalized first.
pub fn reduced_theorem_check(p: &Params) -> Result<ReducedReport> {
    let norm = p.normalize();
    if norm.trivial {
        return Err(Error::TrivialParams);
    }
    let rs = ReducedSystem::new(&norm.canonical)?;
    let a = rs.a;
    let class = norm.canonical.classify();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut report_period = None;
    let mut normalized_codes = 0;
    if class == ParityClass::OddPeriodic {
        let abar = norm.canonical.alpha_bar().to_u64().ok_or(Error::TooLarge("alpha"))?;
        let mut codes = std::collections::HashSet::new();
        for z in 0..a.lcm(&4) {
            checked += 1;
            let mut cur = rs.step_small(z);
            let mut period = 1u64;
            let mut min = z.min(cur);
            while cur != z && period <= 2 * a as u64 {
                cur = rs.step_small(cur);
                min = min.min(cur);
                period += 1;
            }
            if period != abar {
                failures.push(BigInt::from(z));
                continue;
            }
            let code = rs.relative_code(min);
            let c0 = code[0];
            codes.insert(code.into_iter().map(|c| c - c0).collect::<Vec<_>>());
        }
        normalized_codes = codes.len();
        if failures.is_empty() {
            report_period = Some(abar);
        }
    } else {
        let steps = a / 4;
        for z in 0..4 * a {
            checked += 1;
            let mut cur = z;
            for _ in 0..steps {
                cur = rs.step_small(cur);
            }
            let eps = if z.rem_euclid(4) <= 1 { 1 } else { -1 };
            if cur != z + eps * a {
                failures.push(BigInt::from(z));
            }
        }
    }
    let passed = failures.is_empty() && (class != ParityClass::OddPeriodic || normalized_codes == 1);
    Ok(ReducedReport {
        params: norm.canonical,
        class,
        checked,
        period: report_period,
        normalized_codes,
        failures,
        passed,
    })
}
