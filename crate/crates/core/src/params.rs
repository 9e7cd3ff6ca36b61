//! Parameter pairs `(α, β)`, their parity class and reduction to the
//! canonical range `gcd(α, β) = 1`, `α > 2β`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;

/// A validated parameter pair with `0 <= β < α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    alpha: BigInt,
    beta: BigInt,
    g: BigInt,
    alpha_bar: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityClass {
    /// `β = 0` or `α = 2β` (after removing `gcd(α, β)`): the return map is the identity.
    Trivial,
    /// `ᾱ` odd: periodic points of full density, period `ᾱ`.
    OddPeriodic,
    /// `ᾱ` even: escape orbits of full density.
    EvenEscape,
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParityClass::Trivial => "trivial",
            ParityClass::OddPeriodic => "odd-periodic",
            ParityClass::EvenEscape => "even-escape",
        };
        f.write_str(s)
    }
}

/// Result of [`Params::normalize`].
///
/// The input is recovered from `canonical` by first undoing the symmetry
/// (`β ← α − β`) when `inverted` is set, then multiplying both entries by `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationResult {
    pub canonical: Params,
    pub d: BigInt,
    pub inverted: bool,
    pub trivial: bool,
}

impl NormalizationResult {
    /// Valid residues `r` for the conjugacy `ψ_r`.
    pub fn r_range(&self) -> std::ops::Range<BigInt> {
        BigInt::zero()..self.d.clone()
    }

    /// Re-applies the recorded transforms to `canonical`.
    pub fn restore(&self) -> Params {
        let (a, b) = (self.canonical.alpha(), self.canonical.beta());
        let b = if self.inverted { a - b } else { b.clone() };
        Params::new(a * &self.d, b * &self.d).expect("restored parameters are valid")
    }
}

impl Params {
    pub fn new(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Result<Self> {
        let alpha = alpha.into();
        let beta = beta.into();
        if !alpha.is_positive() || beta.is_negative() || beta >= alpha {
            return Err(Error::InvalidParams { alpha, beta });
        }
        let g = alpha.gcd(&(&beta * 2));
        let alpha_bar = &alpha / &g;
        Ok(Params {
            alpha,
            beta,
            g,
            alpha_bar,
        })
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    /// `gcd(α, 2β)`.
    pub fn g(&self) -> &BigInt {
        &self.g
    }

    /// `ᾱ = α / gcd(α, 2β)`.
    pub fn alpha_bar(&self) -> &BigInt {
        &self.alpha_bar
    }

    /// `β = 0` or `α = 2β`: the return map is the identity.
    pub fn is_trivial(&self) -> bool {
        self.beta.is_zero() || self.alpha == &self.beta * 2
    }

    /// `α > 2β`, the range in which the singularities interleave as
    /// `x_0 < x'_0 < x_1 < x'_1 < …`.
    pub fn is_upper_range(&self) -> bool {
        self.alpha > &self.beta * 2
    }

    /// `gcd(α, β) = 1` and `α > 2β`.
    pub fn is_canonical(&self) -> bool {
        self.alpha.gcd(&self.beta).is_one() && self.is_upper_range()
    }

    /// The parameters `(α, α − β)` of the inverse return map.
    pub fn mirrored(&self) -> Params {
        if self.beta.is_zero() {
            // α − 0 = α is out of range; β = 0 already gives the identity.
            return self.clone();
        }
        Params::new(self.alpha.clone(), &self.alpha - &self.beta).expect("0 < α - β < α")
    }

    pub fn classify(&self) -> ParityClass {
        let d = self.alpha.gcd(&self.beta);
        let a = &self.alpha / &d;
        let b = &self.beta / &d;
        if b.is_zero() || a == &b * 2 {
            ParityClass::Trivial
        } else if self.alpha_bar.is_odd() {
            ParityClass::OddPeriodic
        } else {
            ParityClass::EvenEscape
        }
    }

    pub fn normalize(&self) -> NormalizationResult {
        let d = self.alpha.gcd(&self.beta);
        let a = &self.alpha / &d;
        let mut b = &self.beta / &d;
        let inverted = a < &b * 2;
        if inverted {
            b = &a - &b;
        }
        let trivial = b.is_zero() || a == &b * 2;
        let canonical = Params::new(a, b).expect("reduced parameters stay in range");
        NormalizationResult {
            canonical,
            d,
            inverted,
            trivial,
        }
    }

    /// `α` as a machine integer, for operations that walk codes of length `α`.
    pub fn alpha_usize(&self) -> Result<usize> {
        self.alpha
            .to_usize()
            .filter(|a| *a <= 1 << 24)
            .ok_or(Error::TooLarge("alpha"))
    }

    pub(crate) fn small(&self) -> Result<(i64, i64)> {
        let a = self.alpha.to_i64().filter(|a| *a <= 1 << 24).ok_or(Error::TooLarge("alpha"))?;
        let b = self.beta.to_i64().ok_or(Error::TooLarge("beta"))?;
        Ok((a, b))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// The conjugacy `ψ_r : (x, y) ↦ (r + d·x, y)` onto `(r + dZ) × Z`.
pub fn embed_conjugate(x: &BigInt, y: &BigInt, d: &BigInt, r: &BigInt) -> Result<LatticePoint> {
    if !d.is_positive() || r.is_negative() || r >= d {
        return Err(Error::ResidueOutOfRange {
            r: r.clone(),
            d: d.clone(),
        });
    }
    Ok(LatticePoint::new(r + d * x, y.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: i64, b: i64) -> Params {
        Params::new(a, b).unwrap()
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Params::new(5, 5).is_err());
        assert!(Params::new(5, -1).is_err());
        assert!(Params::new(0, 0).is_err());
        assert!(Params::new(1, 0).is_ok());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(p(19, 5).classify(), ParityClass::OddPeriodic);
        assert_eq!(p(19, 5).alpha_bar(), &BigInt::from(19));
        assert_eq!(p(8, 1).classify(), ParityClass::EvenEscape);
        assert_eq!(p(8, 1).g(), &BigInt::from(2));
        assert_eq!(p(8, 1).alpha_bar(), &BigInt::from(4));
        assert_eq!(p(4, 2).classify(), ParityClass::Trivial);
        assert_eq!(p(6, 3).classify(), ParityClass::Trivial);
        assert_eq!(p(9, 0).classify(), ParityClass::Trivial);
    }

    #[test]
    fn normalization_examples() {
        let n = p(38, 10).normalize();
        assert_eq!(n.canonical, p(19, 5));
        assert_eq!(n.d, BigInt::from(2));
        assert!(!n.inverted && !n.trivial);

        let n = p(19, 14).normalize();
        assert_eq!(n.canonical, p(19, 5));
        assert_eq!(n.d, BigInt::from(1));
        assert!(n.inverted);

        let n = p(6, 3).normalize();
        assert!(n.trivial);
        assert_eq!(n.d, BigInt::from(3));
        assert_eq!(n.r_range().end, BigInt::from(3));
    }

    #[test]
    fn normalization_restores_input() {
        for a in 1..60i64 {
            for b in 0..a {
                let q = p(a, b);
                let n = q.normalize();
                assert_eq!(n.restore(), q);
                if !n.trivial {
                    assert!(n.canonical.is_canonical());
                }
                // ᾱ is invariant under both transforms.
                assert_eq!(n.canonical.alpha_bar(), q.alpha_bar());
            }
        }
    }

    #[test]
    fn embed_examples() {
        let b = BigInt::from;
        assert_eq!(embed_conjugate(&b(3), &b(-1), &b(2), &b(1)).unwrap(), LatticePoint::new(7, -1));
        assert_eq!(embed_conjugate(&b(0), &b(0), &b(5), &b(0)).unwrap(), LatticePoint::new(0, 0));
        assert_eq!(embed_conjugate(&b(-2), &b(4), &b(3), &b(2)).unwrap(), LatticePoint::new(-4, 4));
        assert!(embed_conjugate(&b(0), &b(0), &b(3), &b(3)).is_err());
        assert!(embed_conjugate(&b(0), &b(0), &b(3), &b(-1)).is_err());
    }
}
