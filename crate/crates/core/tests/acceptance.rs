//! One test per release criterion, each printing a pass/fail line with
//! its elapsed time (visible under `--nocapture`). Every assertion is
//! exact; the only tolerances are the per-criterion time limits.

use hurwitzian::{
    best_known, build_identity, conjecture_check_n4, count_proper_quadruples, hadamard_paley,
    hurwitz_radon_identity, hurwitzian_from_hadamard, hypothesis_check, is_degree_le3,
    is_hurwitzian, lemma_condition, max_hurwitzian, mutate_signs, quadruple_report, rho,
    twist_from_cubic, verify_symbolic, check_properties, CubicForm, SearchOptions, TruthTable,
    VecSet,
};
use itertools::Itertools;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

fn run_criterion<F>(number: u32, label: &str, limit_secs: f64, body: F)
where
    F: FnOnce(),
{
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) if secs <= limit_secs => {
            println!("[PASS] criterion {number}: {label} ({secs:.2}s)");
        }
        Ok(()) => {
            println!(
                "[FAIL] criterion {number}: {label} ({secs:.2}s, limit {limit_secs:.0}s exceeded)"
            );
            panic!("criterion {number} exceeded its time limit");
        }
        Err(cause) => {
            println!("[FAIL] criterion {number}: {label} ({secs:.2}s)");
            resume_unwind(cause);
        }
    }
}

fn random_cubic(n: usize, rng: &mut StdRng) -> CubicForm {
    let mut lists: Vec<Vec<usize>> = Vec::new();
    for deg in 1..=3usize.min(n) {
        for combo in (1..=n).combinations(deg) {
            if rng.gen_bool(0.5) {
                lists.push(combo);
            }
        }
    }
    CubicForm::new(n, lists).unwrap()
}

fn random_subset(n: usize, rng: &mut StdRng) -> VecSet {
    loop {
        let bits: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen_bool(0.4)).collect();
        if !bits.is_empty() {
            return VecSet::from_bits(n, bits).unwrap();
        }
    }
}

#[test]
fn criterion_1_sharp_maximum_table() {
    run_criterion(1, "maximum set sizes for the counting form, n = 1..7", 60.0, || {
        let expected = [2, 4, 8, 8, 10, 12, 16];
        for (n, want) in (1..=7).zip(expected) {
            let alpha = CubicForm::alpha_o(n).unwrap();
            let result = max_hurwitzian(&alpha, &SearchOptions::default()).unwrap();
            assert!(result.exact, "n = {n} search must be exhaustive");
            assert_eq!(result.max_size, want, "n = {n}");
            assert_eq!(result.witness.len(), want, "n = {n}");
            assert!(is_hurwitzian(&alpha, &result.witness).unwrap(), "n = {n}");
        }
    });
}

#[test]
fn criterion_2_construction_sharpness() {
    run_criterion(2, "constructions meet rho(2^n) for n = 2,3,5,6,7", 1.0, || {
        for n in [2usize, 3, 5, 6, 7] {
            let set = best_known(n).unwrap();
            assert_eq!(set.len() as u32, rho(1 << n), "n = {n}");
            let alpha = CubicForm::alpha_o(n).unwrap();
            assert!(is_hurwitzian(&alpha, &set).unwrap(), "n = {n}");
        }
    });
}

#[test]
fn criterion_3_classical_identities() {
    run_criterion(3, "classical identities verify symbolically", 10.0, || {
        let shapes = [
            (1, [2, 2, 2]),
            (2, [4, 4, 4]),
            (3, [8, 8, 8]),
            (5, [10, 32, 32]),
            (6, [12, 64, 64]),
            (7, [16, 128, 128]),
        ];
        for (n, shape) in shapes {
            let id = hurwitz_radon_identity(n).unwrap();
            assert_eq!(id.size(), shape, "n = {n}");
            assert_eq!(verify_symbolic(&id), Ok(true), "n = {n}");
        }
    });
}

#[test]
fn criterion_4_hadamard_example() {
    run_criterion(4, "order-12 Hadamard data gives the 24-element set", 60.0, || {
        let alpha = CubicForm::alpha_o(11).unwrap();

        let h = hadamard_paley(11).unwrap();
        assert_eq!(h.order(), 12);
        let set = hurwitzian_from_hadamard(&h).unwrap();
        assert_eq!(set.len(), 24);
        assert!(is_hurwitzian(&alpha, &set).unwrap());

        let f = twist_from_cubic(&alpha);
        let b = VecSet::full_space(11).unwrap();
        let id = build_identity(&f, &set, &b).unwrap();
        assert_eq!(id.size(), [24, 2048, 2048]);
        assert_eq!(verify_symbolic(&id), Ok(true));

        let fixture = include_str!("fixtures/hadamard12_rows.txt");
        let printed = VecSet::parse_lines(fixture).unwrap();
        assert_eq!(printed.n(), 11);
        assert_eq!(printed.len(), 24);
        assert!(is_hurwitzian(&alpha, &printed).unwrap());
    });
}

#[test]
fn criterion_5_four_variable_sweep() {
    run_criterion(5, "all 16384 forms on F_2^4 stay at maximum 8", 300.0, || {
        let report = conjecture_check_n4();
        assert_eq!(report.forms_checked, 16384);
        assert!(
            report.global_max <= 8,
            "found a form with maximum {}",
            report.global_max
        );
        assert_eq!(report.distribution.values().sum::<u64>(), 16384);
    });
}

#[test]
fn criterion_6_property_suites() {
    run_criterion(6, "polarization, degree, soundness, and count suites", 120.0, || {
        let mut rng = StdRng::seed_from_u64(2024);

        for n in 1..=6 {
            for _ in 0..10 {
                let alpha = random_cubic(n, &mut rng);
                let f = twist_from_cubic(&alpha);
                let report = check_properties(&alpha, &f).unwrap();
                assert!(report.all(), "alpha = {alpha}");
            }
        }
        for n in 1..=8 {
            let alpha = CubicForm::alpha_o(n).unwrap();
            let f = twist_from_cubic(&alpha);
            let report = check_properties(&alpha, &f).unwrap();
            assert!(report.all(), "counting form, n = {n}");
        }

        for n in [4usize, 5] {
            let alpha = CubicForm::alpha_o(n).unwrap();
            let base = TruthTable::from_cubic(&alpha).unwrap();
            assert!(is_degree_le3(&base));
            let quartics: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() == 4).collect();
            for m in quartics {
                let bumped =
                    TruthTable::from_fn(n, |v| alpha.eval(&hurwitzian::BitVec::new(n, v).unwrap()).unwrap() ^ (v & m == m))
                        .unwrap();
                assert!(!is_degree_le3(&bumped), "monomial mask {m:b}");
            }
        }

        let mut agreement_checked = 0;
        for n in 2..=4 {
            for _ in 0..70 {
                let alpha = random_cubic(n, &mut rng);
                let f = twist_from_cubic(&alpha);
                let a = random_subset(n, &mut rng);
                let b = random_subset(n, &mut rng);
                let id = build_identity(&f, &a, &b).unwrap();
                assert_eq!(
                    verify_symbolic(&id).unwrap(),
                    lemma_condition(&alpha, &a, &b).unwrap(),
                    "alpha = {alpha}, a = {a}, b = {b}"
                );
                agreement_checked += 1;
            }
        }
        assert!(agreement_checked >= 200);

        let quaternion = hurwitz_radon_identity(2).unwrap();
        assert_eq!(quaternion.size(), [4, 4, 4]);
        let mut json = serde_json::to_value(&quaternion).unwrap();
        let buckets: Vec<String> = json["terms"]
            .as_object()
            .unwrap()
            .keys()
            .cloned()
            .collect();
        let mut flips = 0;
        for key in buckets {
            let len = json["terms"][&key].as_array().unwrap().len();
            for i in 0..len {
                let old = json["terms"][&key][i]["s"].as_i64().unwrap();
                json["terms"][&key][i]["s"] = serde_json::json!(-old);
                let broken: hurwitzian::Identity =
                    serde_json::from_value(json.clone()).unwrap();
                assert_eq!(verify_symbolic(&broken), Ok(false), "bucket {key} term {i}");
                json["terms"][&key][i]["s"] = serde_json::json!(old);
                flips += 1;
            }
        }
        assert_eq!(flips, 16);
        assert_eq!(verify_symbolic(&mutate_signs(&quaternion, 1, 3)), Ok(false));

        for trial in 0..110 {
            let n = rng.gen_range(2..=4);
            let a = random_subset(n, &mut rng);
            let b = random_subset(n, &mut rng);
            let fast = count_proper_quadruples(&a, &b).unwrap();
            let mut brute = 0u128;
            let xs: Vec<u64> = a.iter().map(|v| v.bits()).collect();
            let ys: Vec<u64> = b.iter().map(|v| v.bits()).collect();
            for i in 0..xs.len() {
                for j in (i + 1)..xs.len() {
                    for k in 0..ys.len() {
                        for l in (k + 1)..ys.len() {
                            if xs[i] ^ xs[j] == ys[k] ^ ys[l] {
                                brute += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(fast, brute, "trial {trial}");
        }
    });
}

#[test]
fn criterion_7_hypothesis_equivalence_and_ratio() {
    run_criterion(7, "hypothesis check equals the lemma; ratio reported", 60.0, || {
        let mut rng = StdRng::seed_from_u64(4096);
        for _ in 0..120 {
            let n = rng.gen_range(2..=5);
            let alpha = random_cubic(n, &mut rng);
            let a = random_subset(n, &mut rng);
            let b = random_subset(n, &mut rng);
            assert_eq!(
                hypothesis_check(&alpha, &a, &b).unwrap(),
                lemma_condition(&alpha, &a, &b).unwrap(),
                "alpha = {alpha}, a = {a}, b = {b}"
            );
        }

        let alpha = CubicForm::alpha_o(7).unwrap();
        let a = best_known(7).unwrap();
        let b = VecSet::full_space(7).unwrap();
        let report = quadruple_report(&alpha, &a, &b).unwrap();
        assert!(report.hypothesis_holds);
        assert_eq!(report.size, [16, 128]);
        assert!(report.ratio.is_finite() && report.ratio > 0.0);
        println!(
            "  ratio |A+B| / |A|^(6/5) = {:.6} for sizes {:?} (informational)",
            report.ratio, report.size
        );
    });
}
