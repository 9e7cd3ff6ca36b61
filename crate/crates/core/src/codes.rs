//! Symbolic dynamics of the return map: interval codes, block codes,
//! difference codes, the minimum point of an orbit and period detection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::iet::{block_of_index, Iet};
use crate::params::Params;
use crate::reduced::classify::{backward_certified, forward_certified, ClassifyConfig};
use crate::reduced::ReducedSystem;

/// The first `α` interval indices `c_t = c(Fᵗ(x))` of an orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlphaCode(pub Vec<u64>);

impl AlphaCode {
    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `C°`: every entry minus the first.
    pub fn translated(&self) -> Vec<i64> {
        let c0 = self.0.first().copied().unwrap_or(0) as i64;
        self.0.iter().map(|&c| c as i64 - c0).collect()
    }
}

/// Orbit points together with their interval indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSegment {
    pub points: Vec<BigInt>,
    pub codes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeBundle {
    pub c_code: Vec<u64>,
    pub b_code: Vec<u64>,
    /// `d_t = b_{t+1} − b_t`; one entry shorter than `b_code`.
    pub d_code: Vec<i64>,
    pub c_translated: Vec<i64>,
}

impl CodeBundle {
    pub fn from_c_code(c_code: Vec<u64>) -> Self {
        let b_code: Vec<u64> = c_code.iter().map(|&c| block_of_index(c)).collect();
        let d_code = b_code.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
        let c_translated = AlphaCode(c_code.clone()).translated();
        CodeBundle {
            c_code,
            b_code,
            d_code,
            c_translated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimumData {
    pub eta: BigInt,
    /// `η = F^{t_η}(x)`; negative when the minimum lies in the past.
    pub t_eta: i64,
    /// `C_{t_η}(x)`, the code of the minimum point.
    pub min_code: AlphaCode,
    /// `C*(x) = C°(η)`.
    pub normalized: Vec<i64>,
}

fn require_nontrivial(p: &Params) -> Result<()> {
    if p.is_trivial() {
        Err(Error::TrivialParams)
    } else {
        Ok(())
    }
}

/// `len` orbit points starting at `x` with their interval indices.
pub fn orbit_segment(iet: &Iet, x: &BigInt, len: usize) -> Result<OrbitSegment> {
    let mut points = Vec::with_capacity(len);
    let mut codes = Vec::with_capacity(len);
    let mut cur = x.clone();
    for t in 0..len {
        codes.push(iet.interval_of(&cur)?);
        if t + 1 < len {
            let next = iet.return_map(&cur)?;
            points.push(std::mem::replace(&mut cur, next));
        } else {
            points.push(cur.clone());
        }
    }
    Ok(OrbitSegment { points, codes })
}

/// The code of length `len` (not necessarily `α`).
pub fn code_of_length(iet: &Iet, x: &BigInt, len: usize) -> Result<Vec<u64>> {
    Ok(orbit_segment(iet, x, len)?.codes)
}

pub fn alpha_code_with(iet: &Iet, x: &BigInt) -> Result<AlphaCode> {
    let len = iet.params().alpha_usize()?;
    Ok(AlphaCode(code_of_length(iet, x, len)?))
}

pub fn alpha_code(p: &Params, x: &BigInt) -> Result<AlphaCode> {
    require_nontrivial(p)?;
    alpha_code_with(&Iet::new(p)?, x)
}

pub fn code_bundle(p: &Params, x: &BigInt, len: usize) -> Result<CodeBundle> {
    require_nontrivial(p)?;
    let iet = Iet::new(p)?;
    Ok(CodeBundle::from_c_code(code_of_length(&iet, x, len)?))
}

/// Lexicographic order on codes of equal length.
pub fn code_compare<T: Ord>(a: &[T], b: &[T]) -> Ordering {
    a.cmp(b)
}

/// Least `P` such that `w[i] = w[i + P]` throughout the window.
fn word_period<T: PartialEq>(w: &[T]) -> usize {
    (1..=w.len())
        .find(|&p| w.iter().zip(&w[p..]).all(|(a, b)| a == b))
        .unwrap_or(w.len())
}

/// The least `T <= max_period` with `F^T(x) = x`, or `None`.
///
/// When a period is found, the code period over a window of length `2T` is
/// computed as well and the two must coincide.
pub fn orbit_period_from_code_with(iet: &Iet, x: &BigInt, max_period: u64) -> Result<Option<u64>> {
    let mut cur = x.clone();
    let mut period = None;
    for t in 1..=max_period {
        cur = iet.return_map(&cur)?;
        if &cur == x {
            period = Some(t);
            break;
        }
    }
    let Some(t) = period else {
        return Ok(None);
    };
    let window = code_of_length(iet, x, 2 * t as usize)?;
    let code_period = word_period(&window) as u64;
    if code_period != t {
        return Err(Error::Inconsistent(format!(
            "orbit period {t} but code period {code_period} at x = {x}"
        )));
    }
    Ok(Some(t))
}

pub fn orbit_period_from_code(p: &Params, x: &BigInt, max_period: u64) -> Result<Option<u64>> {
    if p.is_trivial() {
        return Ok(Some(1));
    }
    orbit_period_from_code_with(&Iet::new(p)?, x, max_period)
}

fn minimum_from_points(iet: &Iet, points: &[(i64, BigInt)]) -> Result<MinimumData> {
    let (t_eta, eta) = points
        .iter()
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.abs().cmp(&b.0.abs())).then(b.0.cmp(&a.0)))
        .cloned()
        .expect("nonempty window");
    let min_code = alpha_code_with(iet, &eta)?;
    let normalized = min_code.translated();
    Ok(MinimumData {
        eta,
        t_eta,
        min_code,
        normalized,
    })
}

/// Minimum point and transit time of the orbit of `x`.
///
/// Periodic orbits are scanned over one period. For escaping orbits the
/// window is widened in both time directions until each tail is above the
/// current minimum by more than the largest jump seen and carries a drift
/// certificate.
pub fn minimum_data(p: &Params, x: &BigInt, window_budget: u64) -> Result<MinimumData> {
    require_nontrivial(p)?;
    let iet = Iet::new(p)?;
    minimum_data_with(&iet, x, window_budget)
}

pub fn minimum_data_with(iet: &Iet, x: &BigInt, window_budget: u64) -> Result<MinimumData> {
    if let Some(t) = orbit_period_from_code_with(iet, x, window_budget)? {
        let seg = orbit_segment(iet, x, t as usize)?;
        let pts: Vec<(i64, BigInt)> = seg.points.into_iter().enumerate().map(|(i, v)| (i as i64, v)).collect();
        return minimum_from_points(iet, &pts);
    }
    let rs = ReducedSystem::new(iet.params())?;
    let cfg = ClassifyConfig::for_params(iet.params());
    let mut window = vec![(0i64, x.clone())];
    let mut fwd = x.clone();
    let mut bwd = x.clone();
    let mut min = x.clone();
    let mut max_jump = BigInt::from(0);
    let (mut fwd_done, mut bwd_done) = (false, false);
    for t in 1..=window_budget as i64 {
        if !fwd_done {
            let next = iet.return_map(&fwd)?;
            max_jump = max_jump.max((&next - &fwd).abs());
            fwd = next;
            min = min.min(fwd.clone());
            window.push((t, fwd.clone()));
        }
        if !bwd_done {
            let prev = iet.return_map_inverse(&bwd)?;
            max_jump = max_jump.max((&prev - &bwd).abs());
            bwd = prev;
            min = min.min(bwd.clone());
            window.push((-t, bwd.clone()));
        }
        let floor = &min + &max_jump;
        if !fwd_done && fwd > floor && forward_certified(iet, &rs, &fwd, cfg.segments)? {
            fwd_done = true;
        }
        if !bwd_done && bwd > floor && backward_certified(iet, &rs, &bwd, cfg.segments)? {
            bwd_done = true;
        }
        if fwd_done && bwd_done {
            return minimum_from_points(iet, &window);
        }
    }
    Err(Error::BudgetExhausted(window_budget))
}
