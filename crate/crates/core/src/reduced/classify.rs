//! Orbit classification (periodic, escaping with a drift certificate, or
//! unresolved) and density sweeps over `[0, x_max)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::regular::match_regular_with;
use super::ReducedSystem;
use crate::arith::cos_half_pi;
use crate::codes::orbit_period_from_code_with;
use crate::error::Result;
use crate::iet::Iet;
use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyConfig {
    /// Return steps searched for a revisit.
    pub period_budget: u64,
    /// Consecutive α-segments required by a drift certificate.
    pub segments: usize,
    /// Orbit points tried as certificate anchors in each time direction.
    pub scan: u64,
}

impl ClassifyConfig {
    /// `4ᾱ` return steps, 3 segments, `α` anchors.
    pub fn for_params(p: &Params) -> Self {
        let canonical = p.normalize().canonical;
        ClassifyConfig {
            period_budget: 4 * canonical.alpha_bar().to_u64().unwrap_or(u64::MAX / 4),
            segments: 3,
            scan: canonical.alpha().to_u64().unwrap_or(u64::MAX),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClassification {
    Periodic { period: u64 },
    /// `direction = +1`: forward tail certified; `−1`: backward tail certified.
    Escaping { direction: i8, certified: bool },
    Unresolved { budget: u64 },
}

impl OrbitClassification {
    pub fn label(&self) -> &'static str {
        match self {
            OrbitClassification::Periodic { .. } => "periodic",
            OrbitClassification::Escaping { .. } => "escaping",
            OrbitClassification::Unresolved { .. } => "unresolved",
        }
    }
}

fn iterate(iet: &Iet, x: &BigInt, steps: i64) -> Result<BigInt> {
    let mut y = x.clone();
    for _ in 0..steps {
        y = iet.return_map(&y)?;
    }
    Ok(y)
}

fn iterate_back(iet: &Iet, x: &BigInt, steps: i64) -> Result<BigInt> {
    let mut y = x.clone();
    for _ in 0..steps {
        y = iet.return_map_inverse(&y)?;
    }
    Ok(y)
}

/// `k` consecutive α-segments starting at `x`, each regular with `ε = +1`,
/// translated by `4z + 10α − 4β + 4cos(πz/2)` and advancing four blocks.
pub fn forward_certified(iet: &Iet, rs: &ReducedSystem, x: &BigInt, k: usize) -> Result<bool> {
    let (a, b) = (rs.a, rs.b);
    let mut x = x.clone();
    for _ in 0..k {
        let Some(z) = match_regular_with(iet, rs, &x)?.z else {
            return Ok(false);
        };
        if rs.epsilon(&z)? != 1 {
            return Ok(false);
        }
        let y = iterate(iet, &x, a)?;
        let expected = &z * 4 + 10 * a - 4 * b + 4 * cos_half_pi(&z);
        if &y - &x != expected || iet.block_of(&y)? != iet.block_of(&x)? + 4 {
            return Ok(false);
        }
        x = y;
    }
    Ok(true)
}

/// `k` consecutive α-segments ending at `x` and running backwards in time,
/// each starting at a regular point with `ε = −1` four blocks above its image.
pub fn backward_certified(iet: &Iet, rs: &ReducedSystem, x: &BigInt, k: usize) -> Result<bool> {
    let mut x = x.clone();
    for _ in 0..k {
        let y = iterate_back(iet, &x, rs.a)?;
        let Some(z) = match_regular_with(iet, rs, &y)?.z else {
            return Ok(false);
        };
        if rs.epsilon(&z)? != -1 || iet.block_of(&y)? != iet.block_of(&x)? + 4 {
            return Ok(false);
        }
        x = y;
    }
    Ok(true)
}

/// Classifier for one parameter pair, reusable across many starting points.
#[derive(Debug, Clone)]
pub struct Classifier {
    original: Params,
    d: BigInt,
    inverted: bool,
    engine: Option<(Iet, ReducedSystem)>,
    cfg: ClassifyConfig,
}

impl Classifier {
    pub fn new(p: &Params, cfg: ClassifyConfig) -> Result<Self> {
        let norm = p.normalize();
        let engine = if norm.trivial {
            None
        } else {
            Some((Iet::new(&norm.canonical)?, ReducedSystem::new(&norm.canonical)?))
        };
        Ok(Classifier {
            original: p.clone(),
            d: norm.d,
            inverted: norm.inverted,
            engine,
            cfg,
        })
    }

    pub fn params(&self) -> &Params {
        &self.original
    }

    pub fn config(&self) -> &ClassifyConfig {
        &self.cfg
    }

    /// Writes `x = r + d·x'` and classifies `x'` for the canonical pair; the
    /// symmetry `β ↦ α − β` reverses time.
    pub fn classify(&self, x: &BigInt) -> Result<OrbitClassification> {
        let Some((iet, rs)) = &self.engine else {
            return Ok(OrbitClassification::Periodic { period: 1 });
        };
        let xr = x.div_floor(&self.d);
        let c = classify_canonical(iet, rs, &xr, &self.cfg)?;
        Ok(match c {
            OrbitClassification::Escaping { direction, certified } if self.inverted => {
                OrbitClassification::Escaping {
                    direction: -direction,
                    certified,
                }
            }
            other => other,
        })
    }
}

fn classify_canonical(iet: &Iet, rs: &ReducedSystem, x: &BigInt, cfg: &ClassifyConfig) -> Result<OrbitClassification> {
    if let Some(period) = orbit_period_from_code_with(iet, x, cfg.period_budget)? {
        return Ok(OrbitClassification::Periodic { period });
    }
    let unresolved = OrbitClassification::Unresolved {
        budget: cfg.period_budget,
    };
    if iet.params().alpha_bar().is_odd() {
        return Ok(unresolved);
    }
    let mut fwd = x.clone();
    let mut bwd = x.clone();
    for t in 0..=cfg.scan {
        if forward_certified(iet, rs, &fwd, cfg.segments)? {
            return Ok(OrbitClassification::Escaping {
                direction: 1,
                certified: true,
            });
        }
        if backward_certified(iet, rs, &bwd, cfg.segments)? {
            return Ok(OrbitClassification::Escaping {
                direction: -1,
                certified: true,
            });
        }
        if t < cfg.scan {
            fwd = iet.return_map(&fwd)?;
            bwd = iet.return_map_inverse(&bwd)?;
        }
    }
    Ok(unresolved)
}

/// Classifies the orbit of `x` with the default configuration.
pub fn classify_orbit(p: &Params, x: &BigInt) -> Result<OrbitClassification> {
    Classifier::new(p, ClassifyConfig::for_params(p))?.classify(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DensityReport {
    pub total: u64,
    pub periodic: u64,
    pub escaping: u64,
    pub unresolved: u64,
}

impl DensityReport {
    fn add(mut self, c: &OrbitClassification) -> Self {
        self.total += 1;
        match c {
            OrbitClassification::Periodic { .. } => self.periodic += 1,
            OrbitClassification::Escaping { .. } => self.escaping += 1,
            OrbitClassification::Unresolved { .. } => self.unresolved += 1,
        }
        self
    }

    pub fn combine(self, o: Self) -> Self {
        DensityReport {
            total: self.total + o.total,
            periodic: self.periodic + o.periodic,
            escaping: self.escaping + o.escaping,
            unresolved: self.unresolved + o.unresolved,
        }
    }

    fn fraction(&self, n: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            n as f64 / self.total as f64
        }
    }

    pub fn periodic_fraction(&self) -> f64 {
        self.fraction(self.periodic)
    }

    pub fn escaping_fraction(&self) -> f64 {
        self.fraction(self.escaping)
    }

    pub fn unresolved_fraction(&self) -> f64 {
        self.fraction(self.unresolved)
    }
}

/// Classifies every `x ∈ [0, x_max)` in parallel and returns the counts.
pub fn density_estimate(p: &Params, x_max: u64) -> Result<DensityReport> {
    let classifier = Classifier::new(p, ClassifyConfig::for_params(p))?;
    classify_range(&classifier, 0, x_max, |_, _| {})
}

/// Parallel sweep over `[x_min, x_max)`; `sink` receives results in ascending `x`.
pub fn classify_range<F>(classifier: &Classifier, x_min: u64, x_max: u64, mut sink: F) -> Result<DensityReport>
where
    F: FnMut(u64, &OrbitClassification),
{
    const CHUNK: u64 = 256;
    let starts: Vec<u64> = (x_min..x_max).step_by(CHUNK as usize).collect();
    let chunks: Vec<Result<Vec<OrbitClassification>>> = starts
        .par_iter()
        .map(|&s| {
            (s..(s + CHUNK).min(x_max))
                .map(|x| classifier.classify(&BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut report = DensityReport::default();
    for (s, chunk) in starts.into_iter().zip(chunks) {
        for (i, c) in chunk?.iter().enumerate() {
            sink(s + i as u64, c);
            report = report.add(c);
        }
    }
    Ok(report)
}
