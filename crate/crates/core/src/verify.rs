//! Self-checks for one parameter pair, shared by the command-line tool and
//! the acceptance suite. Randomized checks draw from a seeded ChaCha stream.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::alpha_code_with;
use crate::error::Result;
use crate::iet::Iet;
use crate::lattice::{lattice_step, LatticePoint};
use crate::params::{embed_conjugate, ParityClass, Params};
use crate::poincare::{return_map, return_map_inverse, return_map_oracle};
use crate::reduced::classify::{backward_certified, forward_certified};
use crate::reduced::functionals::{functionals_of, t_recursions_check, total_translation_with};
use crate::reduced::regular::match_regular_with;
use crate::reduced::{reduced_theorem_check, ReducedSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

pub const CHECK_NAMES: [&str; 8] = [
    "oracle",
    "sigma",
    "symmetry",
    "conjugacy",
    "special",
    "reduced",
    "invariants",
    "escape",
];

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Return map against lattice iteration on `[0, x_max]`.
pub fn check_oracle(p: &Params, x_max: i64) -> Result<CheckResult> {
    let budget = 1_000_000;
    for x in 0..=x_max {
        let x = big(x);
        let fast = return_map(p, &x)?;
        let slow = return_map_oracle(p, &x, budget)?;
        if fast != slow {
            return Ok(CheckResult::new("oracle", false, format!("x={x}: {fast} != {slow}")));
        }
    }
    Ok(CheckResult::new("oracle", true, format!("x in [0,{x_max}]")))
}

/// Closed-form permutation against ranked images and the length-sum identity.
pub fn check_sigma(p: &Params, count: u64) -> Result<CheckResult> {
    if p.is_trivial() {
        return Ok(CheckResult::new("sigma", true, "identity map, no intervals"));
    }
    let iet = Iet::new(p)?;
    let ranked = iet.sigma_from_images(count)?;
    for j in 1..=count {
        if ranked[(j - 1) as usize] != iet.sigma(j) {
            return Ok(CheckResult::new("sigma", false, format!("rank mismatch at j={j}")));
        }
        let (l, r) = iet.ietsum_sides(j)?;
        if l != r {
            return Ok(CheckResult::new("sigma", false, format!("length sum at j={j}: {l} != {r}")));
        }
    }
    Ok(CheckResult::new("sigma", true, format!("j <= {count}")))
}

/// `F_{α,α−β}` inverts `F_{α,β}` on `[0, x_max]`.
pub fn check_symmetry(p: &Params, x_max: i64) -> Result<CheckResult> {
    for x in 0..=x_max {
        let x = big(x);
        let y = return_map(p, &x)?;
        if return_map_inverse(p, &y)? != x || return_map(p, &return_map_inverse(p, &x)?)? != x {
            return Ok(CheckResult::new("symmetry", false, format!("x={x}")));
        }
    }
    Ok(CheckResult::new("symmetry", true, format!("x in [0,{x_max}]")))
}

/// `ψ_r` intertwines the maps for `(α, β)` and `(dα, dβ)`, for `d ∈ {2, 3, 5}`,
/// both for the lattice map and for the return map.
pub fn check_conjugacy(p: &Params, points: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in [2i64, 3, 5] {
        let scaled = Params::new(p.alpha() * d, p.beta() * d)?;
        let bd = big(d);
        for _ in 0..points {
            let r = big(rng.gen_range(0..d));
            let x = big(rng.gen_range(-5000..5000));
            let y = big(rng.gen_range(-50..50));
            let img = lattice_step(p, &LatticePoint::new(x.clone(), y.clone()));
            let lhs = lattice_step(&scaled, &embed_conjugate(&x, &y, &bd, &r)?);
            if lhs != embed_conjugate(&img.x, &img.y, &bd, &r)? {
                return Ok(CheckResult::new("conjugacy", false, format!("lattice d={d} r={r} ({x},{y})")));
            }
            let xr = BigInt::from(x.magnitude().clone());
            let lhs = return_map(&scaled, &(&r + &bd * &xr))?;
            let rhs = &r + &bd * return_map(p, &xr)?;
            if lhs != rhs {
                return Ok(CheckResult::new("conjugacy", false, format!("return map d={d} r={r} x={xr}")));
            }
        }
    }
    Ok(CheckResult::new("conjugacy", true, format!("{points} points for each d in {{2,3,5}}")))
}

/// `β = 0` and `α = 2β` give the identity return map.
pub fn check_special(p: &Params, x_max: i64) -> Result<CheckResult> {
    let a = p.alpha().clone();
    let mut cases = vec![Params::new(a.clone(), 0)?];
    if (&a % 2u32) == big(0) {
        cases.push(Params::new(a.clone(), &a / 2u32)?);
    }
    for q in &cases {
        for x in 0..x_max {
            let x = big(x);
            if return_map(q, &x)? != x {
                return Ok(CheckResult::new("special", false, format!("{q} x={x}")));
            }
        }
    }
    let names: Vec<String> = cases.iter().map(|q| q.to_string()).collect();
    Ok(CheckResult::new("special", true, format!("identity on [0,{x_max}) for {}", names.join(" "))))
}

pub fn check_reduced(p: &Params) -> Result<CheckResult> {
    if p.normalize().trivial {
        return Ok(CheckResult::new("reduced", true, "trivial parameters"));
    }
    let r = reduced_theorem_check(p)?;
    let detail = match r.class {
        ParityClass::OddPeriodic => format!(
            "{}: {} points, period {:?}, {} normalized code(s)",
            r.params, r.checked, r.period, r.normalized_codes
        ),
        _ => format!("{}: epsilon displacement on {} points, {} failures", r.params, r.checked, r.failures.len()),
    };
    Ok(CheckResult::new("reduced", r.passed, detail))
}

fn engines(p: &Params) -> Result<Option<(Iet, ReducedSystem)>> {
    let norm = p.normalize();
    if norm.trivial {
        return Ok(None);
    }
    Ok(Some((Iet::new(&norm.canonical)?, ReducedSystem::new(&norm.canonical)?)))
}

/// Random starting points far enough out that most of them are regular.
fn sample_range(rs: &ReducedSystem) -> (i64, i64) {
    let a = rs.params().alpha().to_i64().unwrap_or(1);
    (50 * a * a, 500 * a * a)
}

/// Odd `ᾱ`: `S = 4β(α−2β)`, `T = 2αβ(α−2β)` and zero translation at `wanted`
/// regular points. Even `ᾱ`: the recursions for `T` on reduced points.
pub fn check_invariants(p: &Params, wanted: usize, seed: u64) -> Result<CheckResult> {
    let Some((iet, rs)) = engines(p)? else {
        return Ok(CheckResult::new("invariants", true, "trivial parameters"));
    };
    let q = iet.params().clone();
    let (a, b) = (q.alpha().clone(), q.beta().clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if q.alpha_bar().to_u64().is_some_and(|v| v % 2 == 1) {
        let s_want = &b * 4 * (&a - &b * 2);
        let t_want = &a * &b * 2 * (&a - &b * 2);
        let (lo, hi) = sample_range(&rs);
        let mut found = 0;
        let mut tries = 0;
        while found < wanted && tries < 100 * wanted {
            tries += 1;
            let x = big(rng.gen_range(lo..hi));
            let Some(z) = match_regular_with(&iet, &rs, &x)?.z else { continue };
            let code = alpha_code_with(&iet, &x)?;
            let codes: Vec<BigInt> = code.entries().iter().map(|&c| BigInt::from(c)).collect();
            let f = functionals_of(&rs, &codes, Some(&z))?;
            let tt = total_translation_with(&iet, &rs, &x)?;
            if f.s != s_want || f.t.as_ref() != Some(&t_want) || !tt.consistent() || tt.tau_sum != big(0) {
                return Ok(CheckResult::new("invariants", false, format!("x={x}: S={} T={:?}", f.s, f.t)));
            }
            found += 1;
        }
        let ok = found == wanted;
        return Ok(CheckResult::new(
            "invariants",
            ok,
            format!("{found} regular points: S={s_want}, T={t_want}, zero translation"),
        ));
    }
    let sample: Vec<BigInt> = (0..wanted).map(|_| big(rng.gen_range(-100_000..100_000))).collect();
    let r = t_recursions_check(&q, &sample)?;
    Ok(CheckResult::new(
        "invariants",
        r.passed(),
        format!(
            "{} reduced points; closed form of T on {} points with epsilon=+1; epsilon=-1 residuals {:?}",
            r.checked,
            r.key_checked,
            r.t_r_negative_residuals.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>()
        ),
    ))
}

/// Even `ᾱ`: escape formula at `wanted` regular points with `ε = +1`, and
/// four-block drift over `segments` consecutive α-segments (forward for
/// `ε = +1`, backward for `ε = −1`). Odd `ᾱ`: nothing escapes, checked by
/// zero total translation.
pub fn check_escape(p: &Params, wanted: usize, segments: usize, seed: u64) -> Result<CheckResult> {
    let Some((iet, rs)) = engines(p)? else {
        return Ok(CheckResult::new("escape", true, "trivial parameters"));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = sample_range(&rs);
    let even = iet.params().alpha_bar().to_u64().is_some_and(|v| v % 2 == 0);
    let (mut plus, mut minus, mut minus_drift, mut tries) = (0, 0, 0, 0);
    while (plus < wanted || (even && minus < wanted)) && tries < 100 * wanted {
        tries += 1;
        let x = big(rng.gen_range(lo..hi));
        let Ok(tt) = total_translation_with(&iet, &rs, &x) else { continue };
        if !tt.consistent() {
            return Ok(CheckResult::new("escape", false, format!("x={x}: {tt:?}")));
        }
        match tt.epsilon {
            None => plus += 1,
            Some(1) if plus < wanted => {
                if !forward_certified(&iet, &rs, &x, segments)? {
                    return Ok(CheckResult::new("escape", false, format!("forward drift broke at x={x}")));
                }
                plus += 1;
            }
            Some(-1) if minus < wanted => {
                // x is the start of a backward segment ending at F^α(x).
                let mut y = x.clone();
                for _ in 0..iet.params().alpha_usize()? {
                    y = iet.return_map(&y)?;
                }
                if backward_certified(&iet, &rs, &y, segments)? {
                    minus_drift += 1;
                }
                minus += 1;
            }
            _ => {}
        }
    }
    let ok = plus >= wanted && (!even || minus >= wanted);
    let detail = if even {
        format!(
            "{plus} points with epsilon=+1 match the escape formula and drift +4 blocks for {segments} segments; \
             {minus_drift}/{minus} points with epsilon=-1 drift -4 blocks for {segments} segments (informational)"
        )
    } else {
        format!("{plus} regular points with zero total translation")
    };
    Ok(CheckResult::new("escape", ok, detail))
}

/// Runs one named check (or all of them) with the default sizes.
pub fn run_check(name: &str, p: &Params, seed: u64) -> Result<Vec<CheckResult>> {
    let one = |n: &str| -> Result<CheckResult> {
        match n {
            "oracle" => check_oracle(p, 2000),
            "sigma" => check_sigma(p, 200),
            "symmetry" => check_symmetry(p, 2000),
            "conjugacy" => check_conjugacy(p, 1000, seed),
            "special" => check_special(p, 10_000),
            "reduced" => check_reduced(p),
            "invariants" => check_invariants(p, 100, seed),
            "escape" => check_escape(p, 100, 10, seed),
            other => Err(crate::error::Error::Inconsistent(format!("unknown check {other}"))),
        }
    };
    if name == "all" {
        CHECK_NAMES.iter().map(|n| one(n)).collect()
    } else {
        Ok(vec![one(name)?])
    }
}
