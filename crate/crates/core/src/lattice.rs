//! The lattice map on `Z²`, its inverse and orbit streaming, plus the discrete
//! torus twist map and the island parameter formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::sign;
use crate::error::{Error, Result};
use crate::params::Params;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub x: BigInt,
    pub y: BigInt,
}

impl LatticePoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatticePoint {
            x: x.into(),
            y: y.into(),
        }
    }

    /// On the ray `Z₊ = {(x, 0) : x >= 0}`.
    pub fn on_positive_ray(&self) -> bool {
        self.y.is_zero() && !self.x.is_negative()
    }
}

/// `y' = y − sign(x)`, `x' = x + α y' + β`.
pub fn lattice_step(p: &Params, pt: &LatticePoint) -> LatticePoint {
    let y = &pt.y - sign(&pt.x);
    let x = &pt.x + p.alpha() * &y + p.beta();
    LatticePoint { x, y }
}

pub fn lattice_step_inverse(p: &Params, pt: &LatticePoint) -> LatticePoint {
    let x = &pt.x - p.alpha() * &pt.y - p.beta();
    let y = &pt.y + sign(&x);
    LatticePoint { x, y }
}

/// Forward orbit iterator; yields `pt0` first.
#[derive(Debug, Clone)]
pub struct Orbit<'a> {
    params: &'a Params,
    next: LatticePoint,
}

impl<'a> Orbit<'a> {
    pub fn new(params: &'a Params, start: LatticePoint) -> Self {
        Orbit {
            params,
            next: start,
        }
    }
}

impl Iterator for Orbit<'_> {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let following = lattice_step(self.params, &self.next);
        Some(std::mem::replace(&mut self.next, following))
    }
}

/// Summary of a streamed orbit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrbitSummary {
    /// Times `t` with `y_t = 0`, `x_t >= 0` (one per revolution), including `t = 0`
    /// when the start lies on the ray.
    pub return_events: Vec<u64>,
    pub last: Option<LatticePoint>,
}

/// Streams `steps + 1` points (times `0..=steps`) to `sink` and records the
/// visits to `Z₊`. Memory use is independent of `steps` apart from the event list.
pub fn lattice_orbit<F>(p: &Params, pt0: LatticePoint, steps: u64, mut sink: F) -> OrbitSummary
where
    F: FnMut(u64, &LatticePoint),
{
    let mut summary = OrbitSummary::default();
    let mut pt = pt0;
    for t in 0..=steps {
        if pt.on_positive_ray() {
            summary.return_events.push(t);
        }
        sink(t, &pt);
        if t < steps {
            pt = lattice_step(p, &pt);
        }
    }
    summary.last = Some(pt);
    summary
}

/// A point of the discrete torus `(Z/NZ)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    pub x: u64,
    pub y: u64,
}

/// One step of the perturbed twist map on `(Z/NZ)²`.
pub fn torus_step(n: u64, pt: TorusPoint) -> TorusPoint {
    assert!(n >= 2, "torus modulus must be at least 2");
    let f = if pt.x < n / 2 { 1 } else { n - 1 };
    let y = ((pt.y as u128 + f as u128) % n as u128) as u64;
    let x = ((pt.x as u128 + y as u128) % n as u128) as u64;
    TorusPoint { x, y }
}

/// The `β` of the lattice map describing an island of rotation number `m/n`
/// of the torus map with modulus `big_n`.
pub fn island_beta(m: &BigInt, n: &BigInt, big_n: &BigInt) -> Result<BigInt> {
    if !m.is_positive() || m >= n || !m.gcd(n).is_one() {
        return Err(Error::InvalidRotationNumber {
            m: m.clone(),
            n: n.clone(),
        });
    }
    let mut sum = BigInt::zero();
    let mut t = BigInt::one();
    while &t < n {
        let q = (BigInt::from(2) * m * &t).div_floor(n);
        if q.is_even() {
            sum += 1;
        } else {
            sum -= 1;
        }
        t += 1;
    }
    Ok((sum - m * big_n).mod_floor(n))
}
