//! First-return map `F = F₋ ∘ F₊` to the ray `Z₊`, evaluated in closed form.
//!
//! The transit times `u₊`, `u₋` are floors/ceilings of quadratic surds; they
//! are computed with [`floor_sqrt_ratio`] and [`ceil_sqrt_ratio`], so every
//! value here is exact.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{ceil_sqrt_ratio, floor_sqrt_ratio};
use crate::error::{Error, Result};
use crate::lattice::{lattice_step, LatticePoint};
use crate::params::Params;

/// Outcome of a transit map: `image = input + tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitResult {
    pub u: BigInt,
    pub image: BigInt,
    pub tau: BigInt,
}

/// `F₊` on `x >= 0`: `u = ⌊U₊(x) + 1⌋`, `τ₊ = 2βu − αu²`.
pub fn transit_plus(p: &Params, x: &BigInt) -> Result<TransitResult> {
    if x.is_negative() {
        return Err(Error::NegativeInput(x.clone()));
    }
    let (a, b) = (p.alpha(), p.beta());
    let two_b = b * 2u32;
    let d = (&two_b - a).pow(2u32) + a * x * 8u32;
    let u = floor_sqrt_ratio(&(&two_b + a), &d, &(a * 2u32));
    let tau = &two_b * &u - a * &u * &u;
    Ok(TransitResult {
        image: x + &tau,
        u,
        tau,
    })
}

/// `F₋`, defined wherever `U₋` is real, i.e. `(2β + α)² − 8αy >= 0`.
pub fn transit_minus(p: &Params, y: &BigInt) -> Result<TransitResult> {
    let (a, b) = (p.alpha(), p.beta());
    let s = b * 2u32 + a;
    let d = &s * &s - a * y * 8u32;
    if d.is_negative() {
        return Err(Error::OutOfDomain(y.clone()));
    }
    let u = ceil_sqrt_ratio(&-s, &d, &(a * 2u32));
    let tau = b * 2u32 * &u + a * &u * &u;
    Ok(TransitResult {
        image: y + &tau,
        u,
        tau,
    })
}

/// The first-return map on `Z₊`. Identity for trivial parameters.
pub fn return_map(p: &Params, x: &BigInt) -> Result<BigInt> {
    if x.is_negative() {
        return Err(Error::NegativeInput(x.clone()));
    }
    if p.is_trivial() {
        return Ok(x.clone());
    }
    let y = transit_plus(p, x)?.image;
    Ok(transit_minus(p, &y)?.image)
}

/// `F⁻¹_{α,β} = F_{α,α−β}`.
pub fn return_map_inverse(p: &Params, x: &BigInt) -> Result<BigInt> {
    return_map(&p.mirrored(), x)
}

/// Brute-force return map: iterate the lattice map from `(x, 0)` until the
/// orbit is back on `Z₊`.
pub fn return_map_oracle(p: &Params, x: &BigInt, budget: u64) -> Result<BigInt> {
    if x.is_negative() {
        return Err(Error::NegativeInput(x.clone()));
    }
    let mut pt = LatticePoint::new(x.clone(), 0);
    for _ in 0..budget {
        pt = lattice_step(p, &pt);
        if pt.on_positive_ray() {
            return Ok(pt.x);
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// Inverse of `F₊` on its image, on the branch
/// `m(y) = ⌈(2β − 3α + √((2β+α)² − 8αy)) / (2α)⌉`.
pub fn f_plus_inverse(p: &Params, y: &BigInt) -> Result<BigInt> {
    let (a, b) = (p.alpha(), p.beta());
    let s = b * 2u32 + a;
    let d = &s * &s - a * y * 8u32;
    if d.is_negative() {
        return Err(Error::NotInImage(y.clone()));
    }
    let m = ceil_sqrt_ratio(&(b * 2u32 - a * 3u32), &d, &(a * 2u32));
    let m1 = m + 1u32;
    let x = y + &m1 * (a * &m1 - b * 2u32);
    if x.is_negative() || transit_plus(p, &x)?.image != *y {
        return Err(Error::NotInImage(y.clone()));
    }
    Ok(x)
}

// Closed forms of the singularity sequences.

/// `x_m`, singularities of `F₊`.
pub fn x_m(p: &Params, m: &BigInt) -> BigInt {
    m * (p.alpha() * (m + 1u32) - p.beta() * 2u32) / 2u32
}

/// `y_n`, singularities of `F₋`.
pub fn y_n(p: &Params, n: &BigInt) -> BigInt {
    -(n * (p.alpha() * (n + 1u32) + p.beta() * 2u32) / 2u32)
}

/// `z_m = F₊(x_m)`.
pub fn z_m(p: &Params, m: &BigInt) -> BigInt {
    (m + 2u32) * (p.beta() * 2u32 - p.alpha() * (m + 1u32)) / 2u32
}

/// `w_n = F₋(y_n)`.
pub fn w_n(p: &Params, n: &BigInt) -> BigInt {
    n * (p.alpha() * (n - 1u32) + p.beta() * 2u32) / 2u32
}

/// `x'_m`, the preimage under `F₊` of the matching `F₋` singularity.
pub fn x_prime_m(p: &Params, m: &BigInt) -> BigInt {
    let (a, b) = (p.alpha(), p.beta());
    if p.is_upper_range() {
        m * (a * m + (a - b * 2u32) * 3u32) / 2u32 + a - b * 2u32
    } else {
        m * (a * m + a * 5u32 - b * 6u32) / 2u32 + a - b
    }
}

/// Ascending singularities `δ_0 = 0, δ_1, …` of the return map.
pub fn delta(p: &Params, k: u64) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    let upper = p.is_upper_range();
    if k.is_multiple_of(2) {
        let m = BigInt::from(k / 2);
        if upper {
            x_m(p, &m)
        } else {
            x_prime_m(p, &m)
        }
    } else {
        let m = BigInt::from(k.div_ceil(2));
        if upper {
            x_prime_m(p, &(m - 1u32))
        } else {
            x_m(p, &m)
        }
    }
}

// The cache stops growing here; larger indices go through the closed form.
const CACHE_CAP: usize = 1 << 20;

/// Lazily extended, cached prefix of `(δ_k)` for one parameter pair.
///
/// The cache is append-only; readers take a shared lock, growth takes the
/// exclusive lock.
#[derive(Debug)]
pub struct SingularitySeq {
    params: Params,
    cache: RwLock<Vec<BigInt>>,
}

impl Clone for SingularitySeq {
    fn clone(&self) -> Self {
        SingularitySeq {
            params: self.params.clone(),
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl SingularitySeq {
    pub fn new(params: &Params) -> Result<Self> {
        if params.is_trivial() {
            return Err(Error::TrivialParams);
        }
        let initial: Vec<BigInt> = (0..64).map(|k| delta(params, k)).collect();
        Ok(SingularitySeq {
            params: params.clone(),
            cache: RwLock::new(initial),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn delta(&self, k: u64) -> BigInt {
        if let Some(v) = self.cache.read().expect("cache lock").get(k as usize) {
            return v.clone();
        }
        delta(&self.params, k)
    }

    /// `δ_0, …, δ_{count−1}`.
    pub fn prefix(&self, count: usize) -> Vec<BigInt> {
        (0..count as u64).map(|k| self.delta(k)).collect()
    }

    pub fn x(&self, m: u64) -> BigInt {
        x_m(&self.params, &BigInt::from(m))
    }

    pub fn x_prime(&self, m: u64) -> BigInt {
        x_prime_m(&self.params, &BigInt::from(m))
    }

    pub fn y(&self, n: u64) -> BigInt {
        y_n(&self.params, &BigInt::from(n))
    }

    pub fn z(&self, m: u64) -> BigInt {
        z_m(&self.params, &BigInt::from(m))
    }

    pub fn w(&self, n: u64) -> BigInt {
        w_n(&self.params, &BigInt::from(n))
    }

    /// Index `m` of the interval `Δ_m = [δ_{m−1}, δ_m)` containing `x >= 0`,
    /// by binary search over the cached prefix.
    pub fn locate(&self, x: &BigInt) -> Result<u64> {
        if x.is_negative() {
            return Err(Error::NegativeInput(x.clone()));
        }
        {
            let cache = self.cache.read().expect("cache lock");
            if cache.last().is_some_and(|last| last > x) {
                return Ok(cache.partition_point(|d| d <= x) as u64);
            }
        }
        if x >= &delta(&self.params, CACHE_CAP as u64 - 1) {
            return locate_closed_form(&self.params, x);
        }
        {
            let mut cache = self.cache.write().expect("cache lock");
            while cache.last().is_some_and(|last| last <= x) && cache.len() < CACHE_CAP {
                let start = cache.len() as u64;
                let end = (2 * start).min(CACHE_CAP as u64);
                cache.extend((start..end).map(|k| delta(&self.params, k)));
            }
            if cache.last().is_some_and(|last| last > x) {
                return Ok(cache.partition_point(|d| d <= x) as u64);
            }
        }
        locate_closed_form(&self.params, x)
    }
}

/// Interval index from the transit time: `u₊(x) = n` exactly when
/// `x_{n−1} <= x < x_n`, and `x'` splits that range in two.
pub fn locate_closed_form(p: &Params, x: &BigInt) -> Result<u64> {
    if x.is_negative() {
        return Err(Error::NegativeInput(x.clone()));
    }
    if p.is_trivial() {
        return Err(Error::TrivialParams);
    }
    let n = transit_plus(p, x)?.u;
    let c = if p.is_upper_range() {
        let split = x_prime_m(p, &(&n - 1u32));
        if x < &split {
            &n * 2u32 - 1u32
        } else {
            &n * 2u32
        }
    } else if n == BigInt::from(1) {
        BigInt::from(1)
    } else {
        let m = &n - 1u32;
        if x < &x_prime_m(p, &m) {
            m * 2u32
        } else {
            m * 2u32 + 1u32
        }
    };
    c.to_u64().ok_or(Error::TooLarge("interval index"))
}
