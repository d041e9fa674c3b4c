//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::{Duration, Instant};

use octabasic::families::{
    moment_closed_form, octabasic_coeffs, prop1_measure_check, qjacobi_coeffs, qjacobi_explicit,
    qjacobi_measure_check, qlaguerre_coeffs, qlaguerre_explicit, spec_qlaguerre, spec_theorem2,
    spec_theorem3, sum2_coeffs, sum2_explicit, MeasureReport, SpecKind,
};
use octabasic::motzkin::{for_each_path, moment_via_paths, path_to_perm, perm_to_path};
use octabasic::oddfamily::{
    aux_stat, chain_identification, even_coeffs, lsg_star, odd_quotient_check,
    odd_specialization_check, restricted_count, star_totals, theorem4_distribution, OddFamily,
    SymmetricChain,
};
use octabasic::orthopoly::{
    monic_sequence, moments_from_recurrence, orthogonality_report, RecurrenceCoeffs, Specialized,
};
use octabasic::permstat::{
    all_permutations, distributions, identity_35_violations, moment_via_permutations,
    theorem1_monomial, Permutation, RunTerm, StatProfile,
};
use octabasic::qseries::{binom2, bracket_q, qfactorial};
use octabasic::{Poly, Substitution, Var};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn first_failure<T: std::fmt::Debug>(failures: &[T]) -> String {
    match failures.first() {
        Some(f) => format!("first failure: {f:?} ({} total)", failures.len()),
        None => String::new(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let dp = moments_from_recurrence(&octabasic_coeffs(), 6);
    let mut failures = Vec::new();
    for n in 0..=6 {
        let perms = moment_via_permutations(n);
        let paths = moment_via_paths(n);
        if perms != paths || perms != dp[n] {
            failures.push(n);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(elapsed, 60),
        format!(
            "permutation sum, path sum and recurrence agree for n<=6 ({} terms at n=6) in {elapsed:.1?} {}",
            dp[6].len(),
            first_failure(&failures)
        ),
    )
}

fn theorem_criterion(run_term: RunTerm) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=9 {
        let profiles: Vec<StatProfile> = if n <= 8 {
            StatProfile::sixteen_variants(run_term)
                .into_iter()
                .flat_map(|p| [0, -2, -1, 1, 2].map(|c| p.with_shift(c)))
                .collect()
        } else {
            vec![StatProfile::sixteen_variants(run_term)[0]]
        };
        for (p, d) in profiles.iter().zip(distributions(n, &profiles)) {
            if !d.is_qfactorial(n) {
                failures.push((n, p.to_string()));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(elapsed, 120),
        format!(
            "base statistic n<=9, 16 variants x shifts {{0,+-1,+-2}} n<=8 equal n!_q in {elapsed:.1?} {}",
            first_failure(&failures)
        ),
    )
}

fn criterion_2() -> Outcome {
    let base = StatProfile::theorem2();
    assert_eq!(base, StatProfile::sixteen_variants(RunTerm::NMinusRun)[0]);
    theorem_criterion(RunTerm::NMinusRun)
}

fn criterion_3() -> Outcome {
    let base = StatProfile::theorem3();
    assert_eq!(base, StatProfile::sixteen_variants(RunTerm::RunMinusOne)[0]);
    theorem_criterion(RunTerm::RunMinusOne)
}

fn criterion_4() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    for n in 1..=8 {
        for term in [RunTerm::RunMinusOne, RunTerm::NMinusRun] {
            if !theorem4_distribution(n, term).is_qfactorial(n) {
                failures.push(format!("n={n} {term:?}"));
            }
        }
    }
    let zero: Permutation = "9 1 5 7 2 6 4 3 8".parse().unwrap();
    if aux_stat(&zero).n_of_sigma != 0 {
        failures.push("n(9|157|26|4|38) != 0".into());
    }
    let s: Permutation = "7 12 1 6 9 3 2 10 11 5 4 8".parse().unwrap();
    let aux = aux_stat(&s);
    if (aux.d, aux.c, aux.nleft, aux.n_of_sigma) != (9, Some(3), 1, 11) {
        failures.push(format!("worked example gives {aux:?}"));
    }
    if (lsg_star(&s, 5).unwrap(), lsg_star(&s, 10).unwrap()) != (1, 2) {
        failures.push("lsg*(5), lsg*(10)".into());
    }
    if star_totals(&s) != (10, 8) {
        failures.push(format!("lsg*, rsg* totals {:?}", star_totals(&s)));
    }
    outcome(
        failures.is_empty(),
        format!(
            "both run terms Mahonian for n<=8; worked examples d=9,c=3,nleft=1,n=11 and lsg*=10,rsg*=8 reproduce {}",
            first_failure(&failures)
        ),
    )
}

fn criterion_5() -> Outcome {
    let counts: Vec<(usize, u64)> = (1..=8).map(|n| (n, identity_35_violations(n))).collect();
    let bad: Vec<_> = counts.iter().filter(|c| c.1 != 0).collect();
    outcome(
        bad.is_empty(),
        format!(
            "lsg(op)+rsg(op) = lsg(clos)+rsg(clos) for all of S_n, n<=8 {}",
            first_failure(&bad)
        ),
    )
}

fn flip_q() -> Substitution {
    Substitution::new().with(Var::Q, Poly::var_pow(Var::Q, -1))
}

fn criterion_6() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let targets: [(&str, Box<dyn RecurrenceCoeffs>, _); 3] = [
        ("T2", Box::new(qjacobi_coeffs(0)), spec_theorem2()),
        ("T3", Box::new(sum2_coeffs()), spec_theorem3()),
        ("QL", Box::new(qlaguerre_coeffs(0)), spec_qlaguerre()),
    ];
    for (name, family, spec) in &targets {
        let specialized = Specialized::new(octabasic_coeffs(), spec.substitution().clone());
        for n in 0..=8 {
            if specialized.b(n) != family.b(n) || (n > 0 && specialized.lambda(n) != family.lambda(n)) {
                failures.push(format!("{name} coefficients at n={n}"));
            }
        }
    }
    let mu = moments_from_recurrence(&octabasic_coeffs(), 8);
    let mut specialized_mu = Vec::new();
    for kind in SpecKind::ALL {
        let spec = kind.specialization();
        let values: Vec<Poly> = mu.iter().map(|m| spec.apply(m)).collect();
        for (n, m) in values.iter().enumerate() {
            if *m != moment_closed_form(kind, n as u32) {
                failures.push(format!("{kind} moment at n={n}"));
            }
        }
        specialized_mu.push(values);
    }
    let (t2, ql) = (&specialized_mu[0], &specialized_mu[2]);
    for n in 0..=8 {
        let scale = Poly::var_pow(Var::Q, n as i32);
        let t2_stat = (&scale * &t2[n]).substitute(&flip_q()).unwrap();
        if &scale * &ql[n] != t2_stat {
            failures.push(format!("QL/T2 duality at n={n}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "T2/T3/QL coefficients and moments match n<=8; q^n mu_QL(q) = [q^n mu_T2](1/q) {}",
            first_failure(&failures)
        ),
    )
}

/// The printed sum-of-two expansion, including its separately displayed
/// final term.
fn sum2_as_printed(n: u32) -> Poly {
    let extra = &Poly::var_pow(Var::Q, binom2(i64::from(n) + 1) as i32) * &qfactorial(n);
    let extra = if n % 2 == 0 { extra } else { -extra };
    &sum2_explicit(n) + &extra
}

fn criterion_7() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let qj = monic_sequence(&qjacobi_coeffs(0), 8);
    let s2 = monic_sequence(&sum2_coeffs(), 8);
    for n in 0..=8u32 {
        let i = n as usize;
        if qjacobi_explicit(n) != qj[i] {
            failures.push(format!("q-Jacobi explicit at n={n}"));
        }
        if sum2_explicit(n) != s2[i] {
            failures.push(format!("sum-of-two explicit at n={n}"));
        }
        if n >= 1 && sum2_as_printed(n) == s2[i] {
            failures.push(format!("double-counted reading unexpectedly matches at n={n}"));
        }
    }
    for alpha in 0..=2 {
        let ql = monic_sequence(&qlaguerre_coeffs(alpha), 8);
        for n in 0..=8u32 {
            if qlaguerre_explicit(n, alpha) != ql[n as usize] {
                failures.push(format!("q-Laguerre explicit alpha={alpha} n={n}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "closed forms equal recurrence polynomials n<=8 (sum-of-two with its last term counted once) {}",
            first_failure(&failures)
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut worst: f64 = 0.0;
    let mut record = |r: MeasureReport| {
        worst = worst.max(r.max_rel_error);
        if !r.pass || (r.per_n[0].numeric - 1.0).abs() >= 1e-10 {
            failures.push(format!("{} q={} max rel err {:e}", r.family, r.q, r.max_rel_error));
        }
    };
    for q in [0.3, 0.5] {
        record(prop1_measure_check(q, 80, 6));
        record(qjacobi_measure_check(0, q, 80, 6));
        record(qjacobi_measure_check(1, q, 80, 6));
    }
    outcome(
        failures.is_empty() && worst < 1e-9,
        format!(
            "truncated measures at q in {{0.3,0.5}}, I=80: mu_0=1 and max relative error {worst:.2e} < 1e-9 {}",
            first_failure(&failures)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let even = even_coeffs(SymmetricChain);
    let id = chain_identification();
    for n in 0..=6 {
        let oct = octabasic_coeffs();
        if even.b(n) != oct.b(n).substitute(&id).unwrap()
            || (n > 0 && even.lambda(n) != oct.lambda(n).substitute(&id).unwrap())
        {
            failures.push(format!("even coefficients at n={n}"));
        }
    }
    if odd_quotient_check(SymmetricChain, 6) != Ok(true) {
        failures.push("odd moment quotient relation".into());
    }
    for which in OddFamily::ALL {
        if !odd_specialization_check(which, 8) {
            failures.push(format!("odd specialization {which}"));
        }
    }
    let mut factorial = 1u64;
    for n in 1..=7 {
        factorial *= n as u64;
        if restricted_count(n) != factorial {
            failures.push(format!("restricted count n={n}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "even=octabasic (n<=6), odd quotient exact (n<=6), three odd specializations (n<=8), restricted count = n! (n<=7) {}",
            first_failure(&failures)
        ),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let mut counted = (0usize, 0usize);
    for n in 0..=7 {
        for sigma in all_permutations(n) {
            let path = perm_to_path(&sigma);
            if path.weight_monomial() != theorem1_monomial(&sigma) {
                failures.push(format!("weight of {sigma}"));
            }
            if path_to_perm(&path).as_ref() != Ok(&sigma) {
                failures.push(format!("perm round trip {sigma}"));
            }
            if n == 7 {
                counted.0 += 1;
            }
        }
        for_each_path(n, |path| {
            match path_to_perm(path) {
                Ok(sigma) => {
                    if perm_to_path(&sigma) != *path {
                        failures.push(format!("path round trip {path}"));
                    }
                    if path.weight_monomial() != theorem1_monomial(&sigma) {
                        failures.push(format!("weight of {path}"));
                    }
                }
                Err(e) => failures.push(format!("{path}: {e}")),
            }
            if n == 7 {
                counted.1 += 1;
            }
        });
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && counted == (5040, 5040) && within(elapsed, 60),
        format!(
            "both round trips are identities for n<=7 ({} permutations, {} paths at n=7) and weights agree, in {elapsed:.1?} {}",
            counted.0,
            counted.1,
            first_failure(&failures)
        ),
    )
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let report = orthogonality_report(&octabasic_coeffs(), 6);
    outcome(
        report.passed(),
        format!(
            "L(p_n p_m) = 0 for m != n and L(p_n^2) = lambda_1...lambda_n, n,m <= 6, ten parameters, in {:.1?} {}",
            start.elapsed(),
            first_failure(&report.failures)
        ),
    )
}

fn main() {
    // Sanity of the brackets the closed forms are built from.
    assert_eq!(bracket_q(3).eval(&[(Var::Q, 1.0)]).unwrap(), 3.0);

    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("moment oracle equivalence", criterion_1),
        ("Mahonian statistics, run term n-run", criterion_2),
        ("Mahonian statistics, run term run-1", criterion_3),
        ("starred statistics", criterion_4),
        ("opener/closer identity", criterion_5),
        ("specialization consistency", criterion_6),
        ("explicit formulas", criterion_7),
        ("numeric measures", criterion_8),
        ("odd family", criterion_9),
        ("bijection round trips", criterion_10),
        ("orthogonality", criterion_11),
    ];
    let filter: Option<usize> = std::env::args()
        .skip(1)
        .find(|a| !a.starts_with('-'))
        .and_then(|a| a.parse().ok());
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let number = idx + 1;
        if filter.is_some_and(|f| f != number) {
            continue;
        }
        let result = check();
        let tag = if result.ok { "PASS" } else { "FAIL" };
        println!("{tag} criterion {number:>2} ({name}): {}", result.detail.trim_end());
        if !result.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
