use octabasic::families::{
    moment_closed_form, octabasic_coeffs, qjacobi_coeffs, qjacobi_moment, qlaguerre_coeffs, spec_theorem2,
    spec_theorem3, sum2_coeffs, SpecKind,
};
use octabasic::motzkin::moment_via_motzkin_paths;
use octabasic::oddfamily::{even_coeffs, odd_coeffs, SymmetricChain};
use octabasic::orthopoly::{
    apply_functional, monic_sequence, moments_from_recurrence, orthogonality_check,
    RecurrenceCoeffs, Specialized,
};
use octabasic::permstat::{distributions, moment_via_permutations, RunTerm, StatProfile};
use octabasic::{Poly, Substitution, Var};

fn families() -> Vec<(String, Box<dyn RecurrenceCoeffs>, usize)> {
    let mut out: Vec<(String, Box<dyn RecurrenceCoeffs>, usize)> = vec![
        ("octabasic".into(), Box::new(octabasic_coeffs()), 6),
        ("sum2".into(), Box::new(sum2_coeffs()), 10),
        ("even".into(), Box::new(even_coeffs(SymmetricChain)), 6),
        ("odd".into(), Box::new(odd_coeffs(SymmetricChain)), 6),
    ];
    for alpha in 0..=2 {
        out.push((format!("qjacobi({alpha})"), Box::new(qjacobi_coeffs(alpha)), 10));
        out.push((format!("qlaguerre({alpha})"), Box::new(qlaguerre_coeffs(alpha)), 10));
    }
    for kind in SpecKind::ALL {
        let s = kind.specialization().substitution().clone();
        out.push((format!("octabasic[{kind}]"), Box::new(Specialized::new(octabasic_coeffs(), s)), 10));
    }
    out
}

#[test]
fn recurrence_moments_match_path_sums() {
    for (name, c, max_n) in families() {
        let mu = moments_from_recurrence(&c, max_n);
        for n in 0..=max_n {
            assert_eq!(mu[n], moment_via_motzkin_paths(&c, n), "{name}, n = {n}");
            assert!(!mu[n].contains_var(Var::X), "{name}, n = {n}");
        }
    }
}

#[test]
fn qjacobi_moments_have_closed_form() {
    for alpha in 0..=2 {
        let mu = moments_from_recurrence(&qjacobi_coeffs(alpha), 8);
        for n in 0..=8 {
            assert_eq!(mu[n], qjacobi_moment(alpha, n as u32), "alpha = {alpha}, n = {n}");
        }
    }
}

#[test]
fn polynomials_are_monic_and_orthogonal() {
    for (name, c, max_n) in families() {
        let n_max = (max_n / 2).min(4);
        for (n, p) in monic_sequence(&c, n_max).iter().enumerate() {
            assert_eq!(p.degree_in(Var::X), Some(n as i32), "{name}");
            assert!(p.coefficients_in(Var::X)[&(n as i32)].is_one(), "{name}, n = {n}");
        }
        assert!(orthogonality_check(&c, n_max), "{name}");
    }
}

#[test]
fn functional_is_linear() {
    let mu = moments_from_recurrence(&octabasic_coeffs(), 4);
    let x = Poly::var(Var::X);
    let f = &(&x.pow(3) * &Poly::var(Var::R)) - &Poly::constant(2);
    let g = &x * &Poly::var(Var::B);
    let lhs = apply_functional(&mu, &(&f + &g)).unwrap();
    let rhs = &apply_functional(&mu, &f).unwrap() + &apply_functional(&mu, &g).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn permutation_moments_are_symmetric() {
    use Var::*;
    let swaps: [&[(Var, Var)]; 5] = [&[(R, S)], &[(T, U)], &[(P, Q)], &[(V, W)], &[(P, V), (Q, W)]];
    for n in 0..=6 {
        let mu = moment_via_permutations(n);
        for pairs in swaps {
            let mut s = Substitution::new();
            for &(x, y) in pairs {
                s.insert(x, Poly::var(y));
                s.insert(y, Poly::var(x));
            }
            assert_eq!(mu.substitute(&s).unwrap(), mu, "n = {n}, swap {pairs:?}");
        }
    }
}

#[test]
fn specialized_permutation_moments() {
    for n in 0..=9 {
        let mu = moment_via_permutations(n);
        for (kind, spec) in [(SpecKind::T2, spec_theorem2()), (SpecKind::T3, spec_theorem3())] {
            assert_eq!(spec.apply(&mu), moment_closed_form(kind, n as u32), "{kind}, n = {n}");
        }
    }
}

#[test]
fn all_profiles_are_mahonian() {
    for term in [RunTerm::NMinusRun, RunTerm::RunMinusOne] {
        let mut profiles = StatProfile::sixteen_variants(term);
        let base = profiles[0];
        profiles.extend([-2, -1, 1, 2].map(|c| base.with_shift(c)));
        for n in 1..=8 {
            for (p, d) in profiles.iter().zip(distributions(n, &profiles)) {
                assert!(d.is_qfactorial(n), "{p}, n = {n}");
            }
        }
    }
}
