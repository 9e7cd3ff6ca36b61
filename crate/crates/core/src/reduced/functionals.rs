//! The code functionals `S`, `R`, `T`, the total translation over `α`
//! return steps, and the recursions satisfied by `T` when `ᾱ` is even.

use num_bigint::BigInt;
use num_integer::Integer;

use super::regular::match_regular_with;
use super::ReducedSystem;
use crate::arith::{cos_half_pi, cos_pi};
use crate::codes::alpha_code_with;
use crate::error::{Error, Result};
use crate::iet::Iet;
use crate::params::Params;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functionals {
    pub s: BigInt,
    pub r: BigInt,
    /// Needs a reduced representative.
    pub t: Option<BigInt>,
    /// Even `ᾱ` only.
    pub epsilon: Option<i8>,
    /// Even `ᾱ` only.
    pub v: Option<BigInt>,
}

fn block_of_code(c: &BigInt) -> BigInt {
    (c + 1u32).div_floor(&BigInt::from(2))
}

/// `S = uΣ_{C₀} c − wΣ_{C₁} c` over even (`C₀`) and odd (`C₁`) entries, and
/// `R`, the same sum over block indices.
fn s_and_r(rs: &ReducedSystem, code: &[BigInt]) -> (BigInt, BigInt) {
    let (u, w) = (BigInt::from(rs.u()), BigInt::from(rs.w()));
    let mut s = BigInt::from(0);
    let mut r = BigInt::from(0);
    for c in code {
        let b = block_of_code(c);
        if c.is_even() {
            s += &u * c;
            r += &u * b;
        } else {
            s -= &w * c;
            r -= &w * b;
        }
    }
    (s, r)
}

/// `T(z) = uΣ_{X₀} y − wΣ_{X₁} y` over the first `α` points of the reduced orbit of `z`.
pub fn t_of(rs: &ReducedSystem, z: &BigInt) -> BigInt {
    let (u, w) = (BigInt::from(rs.u()), BigInt::from(rs.w()));
    let mut t = BigInt::from(0);
    for y in rs.orbit(z, rs.a as usize) {
        if rs.is_odd_interval(&y) {
            t -= &w * y;
        } else {
            t += &u * y;
        }
    }
    t
}

/// `V = 2u(β−ε)(β−ε+u+1−cos(πz/2)) − w(u+2ε)((u+2ε)/2 − 1 − cos(πz/2))`.
pub fn v_of(rs: &ReducedSystem, z: &BigInt) -> Result<BigInt> {
    let e = rs.epsilon(z)? as i64;
    let (u, w, b) = (rs.u(), rs.w(), rs.b);
    let c = cos_half_pi(z);
    let first = 2 * u * (b - e) * (b - e + u + 1 - c);
    let second = w * (u + 2 * e) * ((u + 2 * e) / 2 - 1 - c);
    Ok(BigInt::from(first) - BigInt::from(second))
}

pub fn functionals_of(rs: &ReducedSystem, code: &[BigInt], z_rep: Option<&BigInt>) -> Result<Functionals> {
    if code.len() != rs.a as usize {
        return Err(Error::LengthMismatch {
            expected: rs.a as usize,
            got: code.len(),
        });
    }
    let (s, r) = s_and_r(rs, code);
    let even = rs.params().alpha_bar().is_even();
    let (epsilon, v) = match (even, z_rep) {
        (true, Some(z)) => (Some(rs.epsilon(z)?), Some(v_of(rs, z)?)),
        _ => (None, None),
    };
    Ok(Functionals {
        s,
        r,
        t: z_rep.map(|z| t_of(rs, z)),
        epsilon,
        v,
    })
}

/// `S`, `R`, and with a reduced representative `T`, `ε`, `V`, for an α-code.
pub fn code_functionals(p: &Params, code: &[BigInt], z_rep: Option<&BigInt>) -> Result<Functionals> {
    functionals_of(&ReducedSystem::new(p)?, code, z_rep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalTranslation {
    /// `F^α(x) − x` by iteration.
    pub direct: BigInt,
    /// `Σ τ_c` over the α-code.
    pub tau_sum: BigInt,
    /// `0` for odd `ᾱ`; `4z + 10α − 4β + 4cos(πz/2)` for even `ᾱ` and `ε = +1`.
    pub closed_form: Option<BigInt>,
    pub z: BigInt,
    pub epsilon: Option<i8>,
    /// `Σ τ_c = −S + 4β(α − 2β) + 2ε(4β − α)` (with `ε = 0` when `ᾱ` is odd).
    pub tau_sum_identity: bool,
}

impl TotalTranslation {
    pub fn consistent(&self) -> bool {
        self.direct == self.tau_sum
            && self.tau_sum_identity
            && self.closed_form.as_ref().is_none_or(|c| *c == self.direct)
    }
}

pub fn total_translation_with(iet: &Iet, rs: &ReducedSystem, x: &BigInt) -> Result<TotalTranslation> {
    let m = match_regular_with(iet, rs, x)?;
    let z = m.z.ok_or_else(|| Error::Irregular(x.clone()))?;
    let code = alpha_code_with(iet, x)?;
    let mut tau_sum = BigInt::from(0);
    for &c in code.entries() {
        tau_sum += iet.cell_data(c)?.translation;
    }
    let mut y = x.clone();
    for _ in 0..rs.a {
        y = iet.return_map(&y)?;
    }
    let direct = y - x;
    let codes: Vec<BigInt> = code.entries().iter().map(|&c| BigInt::from(c)).collect();
    let (s, _) = s_and_r(rs, &codes);
    let (a, b) = (rs.a, rs.b);
    let (epsilon, closed_form) = if rs.params().alpha_bar().is_even() {
        let e = rs.epsilon(&z)?;
        let cf = (e == 1).then(|| &z * 4 + 10 * a - 4 * b + 4 * cos_half_pi(&z));
        (Some(e), cf)
    } else {
        (None, Some(BigInt::from(0)))
    };
    let e = epsilon.unwrap_or(0) as i64;
    let expected = -&s + 4 * b * (a - 2 * b) + 2 * e * (4 * b - a);
    Ok(TotalTranslation {
        tau_sum_identity: tau_sum == expected,
        direct,
        tau_sum,
        closed_form,
        z,
        epsilon,
    })
}

pub fn total_translation(p: &Params, x: &BigInt) -> Result<TotalTranslation> {
    total_translation_with(&Iet::new(p)?, &ReducedSystem::new(p)?, x)
}

/// Failure counts for the identities satisfied by `T` when `ᾱ` is even.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecursionReport {
    pub checked: u64,
    /// `T(z + 4) = T(z) − 8αε(z)`
    pub delta_t4_failures: u64,
    /// `T(z + α) = T(z) − 2α²ε(z)`
    pub delta_t_alpha_failures: u64,
    /// `T(z) − T(z + cos πz) = 2α cos(πz) ε(z)`
    pub delta_t_cos_failures: u64,
    /// Closed form of `T` on `ε = +1`.
    pub key_checked: u64,
    pub key_failures: u64,
    /// `S = 2R + 2β(α − 2β + 2ε)`
    pub s_r_failures: u64,
    /// `T = αR + 2α²ε + V` and `αS = 2T − 4α²ε − 2V + αw(u + 2ε)` on `ε = +1`.
    pub t_r_checked: u64,
    pub t_r_failures: u64,
    pub s_t_failures: u64,
    /// Residuals `T − αR − 2α²ε − V` on `ε = −1`, by `z mod 4`. Reported, not checked.
    pub t_r_negative_residuals: Vec<(u8, BigInt)>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.delta_t4_failures == 0
            && self.delta_t_alpha_failures == 0
            && self.delta_t_cos_failures == 0
            && self.key_failures == 0
            && self.s_r_failures == 0
            && self.t_r_failures == 0
            && self.s_t_failures == 0
    }
}

pub fn t_recursions_check(p: &Params, sample: &[BigInt]) -> Result<RecursionReport> {
    let rs = ReducedSystem::new(p)?;
    if p.alpha_bar().is_odd() {
        return Err(Error::AlphaBarOdd);
    }
    let (a, b) = (rs.a, rs.b);
    let (u, w) = (rs.u(), rs.w());
    let key_const = a * (2 * b * u + 2 * (4 * b - 3 * a));
    let mut rep = RecursionReport::default();
    for z in sample {
        rep.checked += 1;
        let e = rs.epsilon(z)? as i64;
        let t = t_of(&rs, z);
        if t_of(&rs, &(z + 4)) != &t - 8 * a * e {
            rep.delta_t4_failures += 1;
        }
        if t_of(&rs, &(z + a)) != &t - 2 * a * a * e {
            rep.delta_t_alpha_failures += 1;
        }
        let cp = cos_pi(z);
        if &t - t_of(&rs, &(z + cp)) != BigInt::from(2 * a * cp * e) {
            rep.delta_t_cos_failures += 1;
        }
        let code = rs.code(z, a as usize);
        let f = functionals_of(&rs, &code, Some(z))?;
        if f.s != &f.r * 2 + 2 * b * (u + 2 * e) {
            rep.s_r_failures += 1;
        }
        let v = f.v.expect("even case");
        let residual = &t - &f.r * a - 2 * a * a * e - &v;
        if e == 1 {
            rep.key_checked += 1;
            if t != -2 * a * z + key_const {
                rep.key_failures += 1;
            }
            rep.t_r_checked += 1;
            if residual != BigInt::from(0) {
                rep.t_r_failures += 1;
            }
            if &f.s * a != &t * 2 - 4 * a * a * e - &v * 2 + a * w * (u + 2 * e) {
                rep.s_t_failures += 1;
            }
        } else {
            let key = crate::arith::mod4(z);
            if !rep.t_r_negative_residuals.iter().any(|(k, r)| *k == key && *r == residual) {
                rep.t_r_negative_residuals.push((key, residual));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::alpha_code;

    fn p(a: i64, b: i64) -> Params {
        Params::new(a, b).unwrap()
    }
    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn as_big(c: &[u64]) -> Vec<BigInt> {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn odd_case_values() {
        for (a, b) in [(19, 5), (23, 7), (31, 9), (10, 3), (9, 2)] {
            let q = p(a, b);
            let (iet, rs) = (Iet::new(&q).unwrap(), ReducedSystem::new(&q).unwrap());
            let mut n = 0;
            for x in (3000..30_000).step_by(37) {
                let x = big(x);
                let m = match_regular_with(&iet, &rs, &x).unwrap();
                let Some(z) = m.z else { continue };
                let code = alpha_code_with(&iet, &x).unwrap();
                let f = functionals_of(&rs, &as_big(code.entries()), Some(&z)).unwrap();
                let t = f.t.unwrap();
                assert_eq!(f.s, big(4 * b * (a - 2 * b)));
                assert_eq!(t, big(2 * a * b * (a - 2 * b)));
                assert_eq!(f.s, &f.r * 2 + 2 * b * (a - 2 * b));
                assert_eq!(t, &f.r * a + a * b * (a - 2 * b));
                assert_eq!(&f.s * a, &t * 2);
                let tt = total_translation_with(&iet, &rs, &x).unwrap();
                assert!(tt.consistent());
                assert_eq!(tt.direct, big(0));
                n += 1;
            }
            assert!(n >= 100, "({a},{b}) only {n} regular points");
        }
    }

    #[test]
    fn spec_values_19_5() {
        let q = p(19, 5);
        let code = alpha_code(&q, &big(1000)).unwrap();
        let f = code_functionals(&q, &as_big(code.entries()), None).unwrap();
        assert_eq!((f.s, f.r, f.t), (big(180), big(45), None));
        assert!(code_functionals(&q, &as_big(&code.entries()[..5]), None).is_err());
        assert_eq!(total_translation(&q, &big(1000)).unwrap().direct, big(0));
    }

    #[test]
    fn even_case_counts_and_escape_formula() {
        for (a, b) in [(8, 1), (12, 1), (20, 3), (16, 3)] {
            let q = p(a, b);
            let (iet, rs) = (Iet::new(&q).unwrap(), ReducedSystem::new(&q).unwrap());
            let mut plus = 0;
            for x in (2000..6000).step_by(7) {
                let x = big(x);
                let Ok(tt) = total_translation_with(&iet, &rs, &x) else { continue };
                assert!(tt.consistent(), "({a},{b}) x={x} {tt:?}");
                if tt.epsilon == Some(1) {
                    plus += 1;
                    // |C₀| = 2β − 2ε, |C₁| = α − 2β + 2ε
                    let code = alpha_code_with(&iet, &x).unwrap();
                    let odd = code.entries().iter().filter(|c| *c % 2 == 1).count() as i64;
                    assert_eq!(odd, a - 2 * b + 2);
                    // z* and z*+1 give the same right-hand side.
                    let z1 = &tt.z + 1;
                    assert_eq!(tt.closed_form.clone().unwrap(), &z1 * 4 + 10 * a - 4 * b + 4 * cos_half_pi(&z1));
                }
            }
            assert!(plus >= 100);
        }
    }

    #[test]
    fn escape_translation_is_four_block_lengths() {
        // z = 8(n − 1) + 2j with z ≡ 0 mod 4: 4z + 80 = Σ_{i<4} |Ξ_{n+i}| + 4 + 8j = 32n + 48 + 8j.
        let q = p(8, 1);
        let (iet, rs) = (Iet::new(&q).unwrap(), ReducedSystem::new(&q).unwrap());
        let mut seen = 0;
        for x in (2000..8000).step_by(3) {
            let x = big(x);
            let Ok(tt) = total_translation_with(&iet, &rs, &x) else { continue };
            if tt.epsilon != Some(1) || crate::arith::mod4(&tt.z) != 0 {
                continue;
            }
            let n = iet.block_of(&x).unwrap() as i64;
            let j = (&tt.z - 8 * (n - 1)) / 2;
            let blocks: i64 = (0..4).map(|i| (n + i) * 8 - 1).sum();
            assert_eq!(tt.direct, &tt.z * 4 + 80);
            assert_eq!(tt.direct, &j * 8 + blocks + 4);
            assert_eq!(tt.direct, &j * 8 + 32 * n + 48);
            seen += 1;
        }
        assert!(seen > 50);
    }

    #[test]
    fn recursions_hold() {
        for (a, b) in [(8, 1), (16, 3), (12, 1), (20, 3)] {
            let q = p(a, b);
            let sample: Vec<BigInt> = (-3 * a..5 * a).map(BigInt::from).collect();
            let r = t_recursions_check(&q, &sample).unwrap();
            assert!(r.passed(), "({a},{b}) {r:?}");
            assert!(r.key_checked > 0 && r.t_r_checked > 0);
        }
        let q = p(8, 1);
        let rs = ReducedSystem::new(&q).unwrap();
        assert_eq!(t_of(&rs, &big(4)) - t_of(&rs, &big(0)), big(-64));
        assert_eq!(t_of(&rs, &big(8)) - t_of(&rs, &big(0)), big(-128));
        assert!(t_recursions_check(&p(19, 5), &[big(0)]).is_err());
    }

    #[test]
    fn t_r_identity_fails_on_negative_epsilon() {
        let r = t_recursions_check(&p(8, 1), &(0..64).map(BigInt::from).collect::<Vec<_>>()).unwrap();
        let mut res = r.t_r_negative_residuals.clone();
        res.sort();
        assert_eq!(res, vec![(2, big(-96)), (3, big(-64))]);
    }
}
