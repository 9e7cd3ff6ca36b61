//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs without the libtest harness so the lines show up in plain output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lattice_rotation::codes::{alpha_code_with, orbit_period_from_code_with};
use lattice_rotation::iet::Iet;
use lattice_rotation::params::{ParityClass, Params};
use lattice_rotation::poincare::{return_map, return_map_inverse, return_map_oracle};
use lattice_rotation::reduced::classify::{backward_certified, forward_certified};
use lattice_rotation::reduced::functionals::{functionals_of, t_recursions_check, total_translation_with};
use lattice_rotation::reduced::regular::match_regular_with;
use lattice_rotation::reduced::transitions::param_case;
use lattice_rotation::reduced::{density_estimate, reduced_theorem_check, ReducedSystem};
use lattice_rotation::verify::check_conjugacy;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn p(a: i64, b: i64) -> Params {
    Params::new(a, b).unwrap()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn within(limit: Option<Duration>, elapsed: Duration) -> bool {
    limit.is_none_or(|l| elapsed <= l)
}

fn oracle_equivalence() -> Outcome {
    let pairs = [
        (19, 5),
        (19, 7),
        (19, 1),
        (8, 3),
        (19, 4),
        (23, 11),
        (8, 1),
        (12, 1),
        (20, 3),
        (19, 14),
        (5, 1),
        (7, 3),
        (38, 10),
        (6, 1),
        (10, 3),
        (16, 3),
        (13, 4),
        (11, 2),
        (31, 9),
        (17, 8),
        (25, 12),
        (7, 6),
        (4, 2),
        (9, 0),
    ];
    let mut cases = std::collections::BTreeSet::new();
    let mut lower = false;
    for (a, b) in pairs {
        let q = p(a, b);
        if q.is_canonical() && !q.is_trivial() {
            cases.insert(format!("{:?}", param_case(a, b)));
        }
        lower |= 2 * b > a;
        for x in 0..=5000 {
            let x = big(x);
            let fast = return_map(&q, &x).unwrap();
            let slow = return_map_oracle(&q, &x, 10_000_000).unwrap();
            if fast != slow {
                return (false, format!("({a},{b}) x={x}: {fast} != {slow}"));
            }
        }
    }
    let all_cases = cases.len() == 4;
    (
        all_cases && lower && pairs.len() >= 20,
        format!("{} pairs, x in [0,5000], cases {:?}, both ranges: {lower}", pairs.len(), cases),
    )
}

fn period_comb_19_5() -> Outcome {
    let q = p(19, 5);
    let iet = Iet::new(&q).unwrap();
    let period = |x: i64| orbit_period_from_code_with(&iet, &big(x), 10_000).unwrap();
    if let Some(x) = (730..=5000).find(|&x| period(x) != Some(19)) {
        return (false, format!("x={x} has period {:?}", period(x)));
    }
    let below: Vec<(i64, Option<u64>)> = (0..730).map(|x| (x, period(x))).filter(|(_, t)| *t != Some(19)).collect();
    let last = below.last().copied();
    (
        !below.is_empty(),
        format!("period 19 on [730,5000]; {} points below 730 differ, largest {:?}", below.len(), last),
    )
}

fn closing_19_7() -> Outcome {
    let iet = Iet::new(&p(19, 7)).unwrap();
    let hits = (0..10_000)
        .filter(|&x| orbit_period_from_code_with(&iet, &big(x), 2000).unwrap() == Some(19))
        .count();
    let frac = hits as f64 / 1e4;
    (frac >= 0.99, format!("{hits}/10000 points have period 19 ({frac:.4})"))
}

fn canonical_pairs(max_alpha: i64, class: ParityClass) -> Vec<Params> {
    let mut out = Vec::new();
    for a in 3..=max_alpha {
        for b in 1..a {
            let q = p(a, b);
            if q.is_canonical() && q.classify() == class {
                out.push(q);
            }
        }
    }
    out
}

fn reduced_odd() -> Outcome {
    let pairs = canonical_pairs(60, ParityClass::OddPeriodic);
    for q in &pairs {
        let r = reduced_theorem_check(q).unwrap();
        if !r.passed {
            return (false, format!("{q}: {:?} codes={}", r.failures, r.normalized_codes));
        }
    }
    (true, format!("{} pairs with alpha <= 60", pairs.len()))
}

fn reduced_even() -> Outcome {
    let pairs = canonical_pairs(64, ParityClass::EvenEscape);
    for q in &pairs {
        let r = reduced_theorem_check(q).unwrap();
        if !r.passed {
            return (false, format!("{q}: {:?}", r.failures));
        }
    }
    (true, format!("{} pairs with alpha <= 64, z in [0,4 alpha)", pairs.len()))
}

/// Regular points of `(α, β)` drawn from a seeded stream, with their reduced representatives.
fn regular_points(iet: &Iet, rs: &ReducedSystem, wanted: usize, seed: u64) -> Vec<(BigInt, BigInt)> {
    let a = iet.params().alpha().try_into().unwrap_or(1i64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < wanted {
        let x = big(rng.gen_range(50 * a * a..500 * a * a));
        if let Some(z) = match_regular_with(iet, rs, &x).unwrap().z {
            out.push((x, z));
        }
    }
    out
}

fn invariant_values() -> Outcome {
    let mut details = Vec::new();
    for (a, b) in [(19, 5), (23, 7), (31, 9)] {
        let q = p(a, b);
        let (iet, rs) = (Iet::new(&q).unwrap(), ReducedSystem::new(&q).unwrap());
        let (s_want, t_want) = (big(4 * b * (a - 2 * b)), big(2 * a * b * (a - 2 * b)));
        for (x, z) in regular_points(&iet, &rs, 100, 6) {
            let code: Vec<BigInt> = alpha_code_with(&iet, &x).unwrap().entries().iter().map(|&c| big(c as i64)).collect();
            let f = functionals_of(&rs, &code, Some(&z)).unwrap();
            if f.s != s_want || f.t.as_ref() != Some(&t_want) {
                return (false, format!("({a},{b}) x={x}: S={} T={:?}", f.s, f.t));
            }
        }
        details.push(format!("({a},{b}) S={s_want} T={t_want}"));
    }
    (true, format!("100 regular points each: {}", details.join(", ")))
}

fn zero_translation() -> Outcome {
    for (a, b) in [(19, 5), (23, 7), (31, 9)] {
        let q = p(a, b);
        let (iet, rs) = (Iet::new(&q).unwrap(), ReducedSystem::new(&q).unwrap());
        for (x, _) in regular_points(&iet, &rs, 100, 7) {
            let tt = total_translation_with(&iet, &rs, &x).unwrap();
            if tt.tau_sum != big(0) || tt.direct != big(0) {
                return (false, format!("({a},{b}) x={x}: sum of translations {}", tt.tau_sum));
            }
        }
    }
    (true, "100 regular points for each of (19,5), (23,7), (31,9)".into())
}

fn escape_formula() -> Outcome {
    let mut details = Vec::new();
    for (a, b) in [(8, 1), (12, 1), (20, 3)] {
        let q = p(a, b);
        let (iet, rs) = (Iet::new(&q).unwrap(), ReducedSystem::new(&q).unwrap());
        let (mut plus, mut minus, mut minus_ok) = (0, 0, 0);
        for (x, z) in regular_points(&iet, &rs, 400, 8) {
            let e = rs.epsilon(&z).unwrap();
            if e == 1 && plus < 100 {
                let tt = total_translation_with(&iet, &rs, &x).unwrap();
                if tt.closed_form.as_ref() != Some(&tt.direct) {
                    return (false, format!("({a},{b}) x={x}: {} vs {:?}", tt.direct, tt.closed_form));
                }
                if !forward_certified(&iet, &rs, &x, 10).unwrap() {
                    return (false, format!("({a},{b}) x={x}: drift broke within 10 segments"));
                }
                plus += 1;
            } else if e == -1 {
                minus += 1;
                let mut y = x.clone();
                for _ in 0..a {
                    y = iet.return_map(&y).unwrap();
                }
                if backward_certified(&iet, &rs, &y, 10).unwrap() {
                    minus_ok += 1;
                }
            }
        }
        if plus < 100 {
            return (false, format!("({a},{b}) only {plus} regular points with epsilon=+1"));
        }
        details.push(format!("({a},{b}) eps=-1 backward drift {minus_ok}/{minus}"));
    }
    (
        true,
        format!("100 points with epsilon=+1 each: formula and +4 blocks for 10 segments; {}", details.join(", ")),
    )
}

fn density() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (a, b) in [(19, 5), (23, 7), (31, 9)] {
        let r = density_estimate(&p(a, b), 10_000).unwrap();
        ok &= r.periodic_fraction() >= 0.99;
        lines.push(format!("({a},{b}) periodic {:.4}", r.periodic_fraction()));
    }
    for (a, b) in [(8, 1), (12, 1), (20, 3)] {
        let r = density_estimate(&p(a, b), 10_000).unwrap();
        ok &= r.escaping_fraction() >= 0.99;
        lines.push(format!("({a},{b}) escaping {:.4}", r.escaping_fraction()));
    }
    (ok, lines.join(", "))
}

fn parameter_propositions() -> Outcome {
    for a in [1i64, 4, 7, 10, 19] {
        let mut special = vec![p(a, 0)];
        if a % 2 == 0 {
            special.push(p(a, a / 2));
        }
        for q in special {
            if let Some(x) = (0..10_000).find(|&x| return_map(&q, &big(x)).unwrap() != big(x)) {
                return (false, format!("{q} moves x={x}"));
            }
        }
    }
    for (a, b) in [(19, 5), (19, 14), (8, 1), (23, 11), (7, 3), (12, 5)] {
        let q = p(a, b);
        for x in 0..=2000 {
            let x = big(x);
            if return_map_inverse(&q, &return_map(&q, &x).unwrap()).unwrap() != x {
                return (false, format!("({a},{b}) inverse fails at x={x}"));
            }
        }
    }
    for (a, b) in [(19, 5), (8, 1), (7, 6)] {
        let r = check_conjugacy(&p(a, b), 1000, 10).unwrap();
        if !r.passed {
            return (false, r.detail);
        }
    }
    (true, "identity for beta=0, alpha=2beta; inverse on [0,2000]; conjugacy for d in {2,3,5}".into())
}

fn sigma_permutation() -> Outcome {
    let pairs = [(19, 5), (19, 14), (8, 1), (8, 7), (23, 7), (23, 16), (5, 4), (5, 1), (31, 9), (12, 7), (7, 4)];
    for (a, b) in pairs {
        let iet = Iet::new(&p(a, b)).unwrap();
        let ranked = iet.sigma_from_images(200).unwrap();
        for j in 1..=200u64 {
            let (l, r) = iet.ietsum_sides(j).unwrap();
            if l != r || ranked[(j - 1) as usize] != iet.sigma(j) {
                return (false, format!("({a},{b}) j={j}"));
            }
        }
    }
    (true, format!("{} pairs, j <= 200", pairs.len()))
}

fn t_recursions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut lines = Vec::new();
    for (a, b) in [(8, 1), (16, 3)] {
        let sample: Vec<BigInt> = (0..200).map(|_| big(rng.gen_range(-1_000_000..1_000_000))).collect();
        let r = t_recursions_check(&p(a, b), &sample).unwrap();
        if r.delta_t4_failures != 0 || r.key_failures != 0 {
            return (false, format!("({a},{b}) {r:?}"));
        }
        lines.push(format!("({a},{b}) 200 points, closed form on {} with epsilon=+1", r.key_checked));
    }
    (true, lines.join(", "))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence", Some(60), oracle_equivalence),
        ("period 19 beyond 730 for (19,5)", Some(30), period_comb_19_5),
        ("(19,7) closes after 19 revolutions", Some(60), closing_19_7),
        ("reduced system, odd alpha-bar", Some(10), reduced_odd),
        ("reduced system, even alpha-bar", Some(10), reduced_even),
        ("invariant values S and T", None, invariant_values),
        ("zero total translation, odd alpha-bar", None, zero_translation),
        ("escape formula and block drift", None, escape_formula),
        ("density at desk scale", Some(300), density),
        ("parameter propositions", None, parameter_propositions),
        ("interval permutation", None, sigma_permutation),
        ("recursions for T", None, t_recursions),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let elapsed = start.elapsed();
        let timed = within(limit.map(Duration::from_secs), elapsed);
        let pass = ok && timed;
        if !pass {
            failed += 1;
        }
        let limit = limit.map(|l| format!(" limit {l}s")).unwrap_or_default();
        println!(
            "criterion {:>2} {}: {} ({:.2}s{}) {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit,
            detail
        );
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
