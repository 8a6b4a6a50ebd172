//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (run with `--nocapture` to see them). Tolerances and runtime
//! budgets are pinned here, not configurable.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steinhaus::{
    brute_lengths, continued_fraction, convergents, decompose, empirical_frequencies,
    gap_structure, hits, render_partition_strip, render_un_map, temperament_report,
    two_length_orders, DistancePartition, GapStructure, NamedConstant, Rational, RealValue,
    UnMapSpec, DEFAULT_SCAN_CAP,
};

fn r(s: &str) -> Rational {
    Rational::parse(s).unwrap()
}

fn rv(s: &str) -> RealValue {
    RealValue::parse(s, 128).unwrap()
}

fn log23() -> RealValue {
    RealValue::named(NamedConstant::Log2_3Frac, 128).unwrap()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact rational alpha with denominator <= 10^4 and > n, order <= 500.
fn sample_distance_cases(count: usize) -> Vec<(RealValue, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3d15);
    let mut cases = Vec::with_capacity(count);
    while cases.len() < count {
        let q: u64 = rng.gen_range(3..=10_000);
        let p: u64 = rng.gen_range(1..q);
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        if q < 3 {
            continue;
        }
        let n: u64 = rng.gen_range(1..=500.min(q - 1));
        cases.push((rv(&format!("{p}/{q}")), n));
    }
    cases
}

/// High convergents (denominator in [3*10^4, 10^15]) of the three named
/// constants: exact rationals that behave irrationally far beyond the
/// horizons used here.
fn high_convergents() -> Vec<Rational> {
    let mut out = Vec::new();
    for constant in [
        NamedConstant::PhiFrac,
        NamedConstant::Sqrt2Frac,
        NamedConstant::Log2_3Frac,
    ] {
        let value = RealValue::named(constant, 128).unwrap();
        let cf = continued_fraction(value.approx()).unwrap();
        for convergent in convergents(&cf) {
            if let Ok(den) = u64::try_from(convergent.denom().clone()) {
                if (30_000..=1_000_000_000_000_000).contains(&den) {
                    out.push(convergent);
                }
            }
        }
    }
    out
}

#[test]
fn criterion_1_figure_ladder_reproduction() {
    let start = Instant::now();
    let report = temperament_report(&log23(), &[2, 3, 5, 7, 12, 17]).unwrap();
    // printed figure values at three decimals, with multiplicities
    let expected: Vec<Vec<(&str, u64)>> = vec![
        vec![("0.415", 1), ("0.585", 1)],
        vec![("0.170", 1), ("0.415", 2)],
        vec![("0.170", 3), ("0.245", 2)],
        vec![("0.075", 2), ("0.170", 5)],
        vec![("0.075", 7), ("0.095", 5)],
        vec![("0.020", 5), ("0.075", 12)],
    ];
    for (row, want) in report.rows.iter().zip(&expected) {
        let got: Vec<(Rational, u64)> = row
            .lengths
            .iter()
            .map(|(len, mult)| (len.round_decimals(3), *mult))
            .collect();
        let want: Vec<(Rational, u64)> =
            want.iter().map(|(len, mult)| (r(len), *mult)).collect();
        assert_eq!(got, want, "ladder row with {} notes", row.notes);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 1 PASS: figure ladder reproduced for 2,3,5,7,12,17 notes in {elapsed:?}");
}

#[test]
fn criterion_2_two_length_note_counts() {
    let start = Instant::now();
    let orders = two_length_orders(&log23(), 16).unwrap();
    let notes: Vec<u64> = orders.iter().map(|n| n + 1).collect();
    assert_eq!(notes, vec![2, 3, 5, 7, 12, 17]);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 2 PASS: two-length note counts {{2,3,5,7,12,17}} in {elapsed:?}");
}

#[test]
fn criterion_3_oracle_equivalence_1000_cases() {
    let start = Instant::now();
    let cases = sample_distance_cases(1000);
    for (alpha, n) in &cases {
        let engine = decompose(alpha, *n).unwrap().census();
        let oracle = brute_lengths(alpha, *n).unwrap();
        assert_eq!(engine, oracle, "alpha = {}, n = {n}", alpha.approx());
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 3 PASS: 1000 randomized censuses equal the oracle exactly in {elapsed:?}");
}

#[test]
fn criterion_4_structural_identities_1000_cases() {
    let start = Instant::now();
    let cases = sample_distance_cases(1000);
    for (alpha, n) in &cases {
        let part = match decompose(alpha, *n).unwrap() {
            DistancePartition::General(g) => g,
            DistancePartition::Uniform(_) => unreachable!("sampled q > n"),
        };
        let n = *n;
        // counts sum to n + 1
        assert_eq!(part.count_s() + part.count_t() + part.count_st(), n + 1);
        // weighted lengths tile the circle
        let total = &(&(part.s() * &Rational::from(part.count_s()))
            + &(part.t() * &Rational::from(part.count_t())))
            + &(&part.s_plus_t() * &Rational::from(part.count_st()));
        assert_eq!(total, Rational::one());
        // three-length case: the largest equals the sum of the other two
        if part.count_st() > 0 && part.s() != part.t() {
            let census = part.census();
            let lengths: Vec<Rational> =
                census.entries().map(|(len, _)| len.clone()).collect();
            assert_eq!(lengths.len(), 3);
            assert_eq!(&lengths[0] + &lengths[1], lengths[2]);
        }
        // remark bounds
        assert_eq!(part.remark_bounds(), (true, true));
        // extremal points against a direct scan
        let mut min: Option<Rational> = None;
        let mut max: Option<Rational> = None;
        for i in 1..=n {
            let (pos, _) = alpha.frac_multiple(i).unwrap();
            if min.as_ref().map(|m| &pos < m).unwrap_or(true) {
                min = Some(pos.clone());
            }
            if max.as_ref().map(|m| &pos > m).unwrap_or(true) {
                max = Some(pos);
            }
        }
        assert_eq!(min.unwrap(), part.s().clone());
        assert_eq!(max.unwrap(), &Rational::one() - part.t());
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 4 PASS: structural identities hold on all 1000 cases in {elapsed:?}");
}

#[test]
fn criterion_5_gap_set_exactness_200_cases() {
    let start = Instant::now();
    let alphas = high_convergents();
    assert!(alphas.len() >= 4, "need several high convergents");
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a9);
    let horizon = 10_000u64;
    let mut checked = 0;
    while checked < 200 {
        let alpha = &alphas[rng.gen_range(0..alphas.len())];
        let bd: u64 = rng.gen_range(20..=1000);
        let bn: u64 = rng.gen_range(bd / 100 + 1..bd);
        let beta = Rational::new(bn, bd).unwrap();
        let alpha = RealValue::exact(alpha.clone()).unwrap();
        let structure = gap_structure(&alpha, &beta, DEFAULT_SCAN_CAP).unwrap();
        let predicted = structure.gap_set();
        let indices = hits(&alpha, &beta, horizon - 1).unwrap();
        let mut realized: BTreeMap<u64, u64> = BTreeMap::new();
        for w in indices.windows(2) {
            *realized.entry(w[1] - w[0]).or_insert(0) += 1;
        }
        // realized gaps are a subset of the prediction
        for gap in realized.keys() {
            assert!(
                predicted.contains(gap),
                "alpha = {}, beta = {beta}: gap {gap} outside {predicted:?}",
                alpha.approx()
            );
        }
        // equality whenever every predicted frequency clears the horizon
        let threshold = Rational::new(10, horizon).unwrap(); // freq * 10^4 > 10
        let all_visible = structure
            .frequencies()
            .values()
            .all(|freq| freq > &threshold);
        if all_visible {
            let realized_set: Vec<u64> = realized.keys().copied().collect();
            assert_eq!(
                realized_set,
                predicted,
                "alpha = {}, beta = {beta}",
                alpha.approx()
            );
        }
        // classification agrees with every realized gap
        if let GapStructure::Narrow(narrow) = &structure {
            for w in indices.windows(2) {
                let (pos, _) = alpha.frac_multiple(w[0]).unwrap();
                assert_eq!(narrow.gap_after(&pos).unwrap(), w[1] - w[0]);
            }
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 5 PASS: 200 randomized gap sets exact over horizon 10^4 in {elapsed:?}");
}

#[test]
fn criterion_6_gap_frequencies() {
    let start = Instant::now();
    let tol = r("1/1000");
    let horizon = 100_000u64;

    // narrow case: log2(3/2), beta = 3/10, gaps 2, 3, 5
    let beta = r("3/10");
    let structure = gap_structure(&log23(), &beta, DEFAULT_SCAN_CAP).unwrap();
    let narrow = match &structure {
        GapStructure::Narrow(n) => n,
        other => panic!("expected narrow, got {other:?}"),
    };
    assert_eq!((narrow.b(), narrow.d()), (2, 3));
    let measured = empirical_frequencies(&log23(), &beta, horizon).unwrap();
    for (gap, freq) in structure.frequencies() {
        let density = measured.get(&gap).cloned().unwrap_or_else(Rational::zero);
        let diff = (&density - &freq).abs();
        assert!(diff < tol, "gap {gap}: |{density} - {freq}| >= 1/1000");
    }

    // wide case: sqrt2 - 1, beta = 7/10, gaps 1, 2
    let sqrt2 = RealValue::named(NamedConstant::Sqrt2Frac, 128).unwrap();
    let beta = r("7/10");
    let structure = gap_structure(&sqrt2, &beta, DEFAULT_SCAN_CAP).unwrap();
    assert!(matches!(structure, GapStructure::Wide(_)));
    let measured = empirical_frequencies(&sqrt2, &beta, horizon).unwrap();
    for (gap, freq) in structure.frequencies() {
        let density = measured.get(&gap).cloned().unwrap_or_else(Rational::zero);
        let diff = (&density - &freq).abs();
        assert!(diff < tol, "gap {gap}: |{density} - {freq}| >= 1/1000");
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("criterion 6 PASS: empirical densities within 1/1000 of theory at N=10^5 in {elapsed:?}");
}

#[test]
fn criterion_7_duality_100_cases() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    let mut checked = 0;
    while checked < 100 {
        let q: u64 = rng.gen_range(10_000..=1_000_000);
        let p: u64 = rng.gen_range(1..q);
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        if q < 10_000 {
            continue;
        }
        let n: u64 = rng.gen_range(1..=200);
        let alpha = rv(&format!("{p}/{q}"));
        let part = match decompose(&alpha, n).unwrap() {
            DistancePartition::General(gp) => gp,
            DistancePartition::Uniform(_) => continue,
        };
        let lo = part.s().clone().max(part.t().clone());
        let hi = part.s_plus_t();
        // beta on (max(s,t), s+t], endpoint included
        let k: u64 = rng.gen_range(1..=8);
        let beta = &lo + &(&(&(&hi - &lo) * &Rational::from(k)) / &Rational::from(8u64));
        if !beta.is_proper() {
            continue;
        }
        match gap_structure(&alpha, &beta, DEFAULT_SCAN_CAP).unwrap() {
            GapStructure::Narrow(narrow) => {
                assert_eq!(
                    (narrow.b(), narrow.d()),
                    (part.pair().b(), part.pair().d()),
                    "alpha = {p}/{q}, n = {n}, beta = {beta}"
                );
            }
            GapStructure::Wide(wide) => {
                // the endpoint beta = s+t can coincide with max(alpha,
                // 1-alpha) when the pair borders 0/1 or 1/1; there the
                // pair's denominators are {1, 2} and the wide frequencies
                // equal the narrow ones gap for gap
                assert_eq!(beta, hi, "wide off the endpoint");
                let (b, d) = (part.pair().b(), part.pair().d());
                assert_eq!((b.min(d), b.max(d)), (1, 2));
                let (freq_gap1, freq_gap2) = if b == 1 {
                    (&beta - part.s(), &beta - part.t())
                } else {
                    (&beta - part.t(), &beta - part.s())
                };
                assert_eq!(wide.freq_1(), &freq_gap1);
                assert_eq!(wide.freq_2(), &freq_gap2);
            }
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("criterion 7 PASS: 100 duality cases recover (b, d) in {elapsed:?}");
}

#[test]
fn criterion_8_rendering_determinism_and_goldens() {
    let start = Instant::now();
    // byte-identical across runs
    let spec = UnMapSpec::new(3, true, 640, 640).unwrap();
    let first = render_un_map(&spec);
    let second = render_un_map(&spec);
    assert_eq!(first, second);
    let strip_a = render_partition_strip(&log23(), 11).unwrap();
    let strip_b = render_partition_strip(&log23(), 11).unwrap();
    assert_eq!(strip_a, strip_b);

    // committed goldens
    let golden_map = include_str!("golden/un_map_n3.svg");
    assert_eq!(first, golden_map, "un-map golden drifted");
    let golden_strip = include_str!("golden/strip_12_notes.svg");
    assert_eq!(strip_a, golden_strip, "strip golden drifted");

    // figure layout: six segments for n = 3
    let segments = first
        .lines()
        .filter(|l| l.starts_with("<line") && l.contains("#000000"))
        .count();
    assert_eq!(segments, 6);

    let elapsed = start.elapsed();
    println!("criterion 8 PASS: renders byte-identical and match goldens in {elapsed:?}");
}

#[test]
fn criterion_9_frequency_sum_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e4f);
    let alphas = high_convergents();
    let mut narrow_seen = 0;
    let mut wide_seen = 0;
    for _ in 0..200 {
        let alpha = RealValue::exact(alphas[rng.gen_range(0..alphas.len())].clone()).unwrap();
        let bd: u64 = rng.gen_range(10..=500);
        let bn: u64 = rng.gen_range(1..bd);
        let beta = Rational::new(bn, bd).unwrap();
        match gap_structure(&alpha, &beta, DEFAULT_SCAN_CAP) {
            Ok(GapStructure::Narrow(n)) => {
                narrow_seen += 1;
                let sum = &(n.freq_b() + n.freq_d()) + n.freq_bd();
                assert_eq!(&sum, n.beta());
            }
            Ok(GapStructure::Wide(w)) => {
                wide_seen += 1;
                assert_eq!(&(w.freq_1() + w.freq_2()), w.beta());
            }
            Err(_) => {} // cap exceeded on extreme beta: no structure built
        }
    }
    assert!(narrow_seen >= 50 && wide_seen >= 10, "unbalanced sampling");
    let elapsed = start.elapsed();
    println!(
        "criterion 9 PASS: frequency sums equal beta on {narrow_seen} narrow / {wide_seen} wide structures in {elapsed:?}"
    );
}
