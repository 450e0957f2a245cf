mod common;

use num_integer::Integer;
use proptest::prelude::*;

use arithseq::kernel::Kernel;
use arithseq::sequences::SequenceId;
use arithseq::verify::{self, Direction, ExceptionSet, Property, ScanSpec, Scanner};
use common::{first_values, id, naive_exceptions};

fn scan(seq: &str, property: Property, range: (u64, u64)) -> ExceptionSet {
    let spec = ScanSpec::new(id(seq), property, range).unwrap();
    Scanner::new(spec, Kernel::default()).unwrap().run_to_end().unwrap()
}

const ROOT_AND_RATIO: [Property; 5] = [
    Property::RootDecreasing,
    Property::RootIncreasing,
    Property::RatioIncreasing,
    Property::RatioDecreasing,
    Property::ValueRatioIncreasing,
];

fn oracle_case(seq: &str, n_hi: u64) {
    let base = id(seq).base_index();
    let values = first_values(seq, (n_hi + 3 - base) as usize);
    for p in ROOT_AND_RATIO {
        // D_1 = 0 is outside the domain of the root laws
        let lo = p.min_index().max(base).max(if seq == "derangement" && p != Property::ValueRatioIncreasing { 2 } else { 0 });
        let got = scan(seq, p, (lo, n_hi));
        assert!(got.indeterminates.is_empty(), "{seq} {p}");
        assert_eq!(got.exceptions, naive_exceptions(&values, base, p, (lo, n_hi)), "{seq} {p}");
    }
}

#[test]
fn scans_match_naive_exact_powers() {
    for seq in [
        "primes",
        "prefix_sum[primes]",
        "squarefree",
        "prefix_sum[squarefree]",
        "two_square[1]",
        "partitions",
        "strict_partitions",
        "hypothesis_h[x,2x+1]",
        "prefix_sum[hypothesis_h[x,x+2]]",
        "proth",
        "polyform[x^2+1]",
        "primitive_root_primes[-2]",
        "fibonacci",
    ] {
        oracle_case(seq, 200);
    }
    for seq in ["harmonic[1]", "irreducible_count[2]", "irreducible_count[11]"] {
        oracle_case(seq, 80);
    }
    for seq in ["bell", "derangement", "bernoulli", "euler", "tangent", "springer", "motzkin", "franel[7]", "apery[2]", "clf"] {
        oracle_case(seq, 40);
    }
}

#[test]
fn stable_starts_reproduce_on_restricted_ranges() {
    for (seq, p, range) in [
        ("prefix_sum[hypothesis_h[x,2x+1]]", Property::RatioIncreasing, (1, 3000)),
        ("hypothesis_h[x,x^2+x+1]", Property::RootDecreasing, (1, 3000)),
        ("primes", Property::PowerMean(4), (2, 3000)),
        ("strict_partitions", Property::RatioIncreasing, (1, 500)),
        ("hypothesis_h[x,x+4,x+6]", Property::SumLowerBound, (2, 2000)),
    ] {
        let whole = scan(seq, p, range);
        let t = whole.threshold();
        let n = t.minimal_stable_start.unwrap();
        assert!(n > range.0, "{seq}: has a failure to reproduce");
        let again = scan(seq, p, (n - 1, range.1));
        assert_eq!(again.exceptions, vec![n - 1], "{seq} {p}");
        assert_eq!(again.threshold().minimal_stable_start, Some(n));
        assert!(scan(seq, p, (n, range.1)).is_clean());
    }
}

#[test]
fn windowed_rescans_see_the_same_exceptions() {
    let seq = "prefix_sum[polyform[x^2+x+1]]";
    let whole = scan(seq, Property::RatioIncreasing, (1, 400));
    for (lo, hi) in [(1, 10), (5, 19), (17, 60), (100, 400)] {
        let part = scan(seq, Property::RatioIncreasing, (lo, hi));
        let expect: Vec<u64> = whole.exceptions.iter().copied().filter(|&i| i >= lo && i <= hi).collect();
        assert_eq!(part.exceptions, expect, "[{lo}, {hi}]");
    }
}

#[test]
fn primes_in_progressions_with_small_modulus() {
    let mut pairs = 0;
    for q in (2..=44u64).step_by(2) {
        for a in (1..=q).step_by(2) {
            if a.gcd(&q) != 1 {
                continue;
            }
            let seq = format!("primes_in_ap[{a},{q}]");
            let e = verify::scan_root_monotone(&id(&seq), Direction::Decreasing, (2, 2000), Kernel::default()).unwrap();
            assert!(e.exceptions.is_empty() && e.indeterminates.is_empty(), "{seq}: {:?}", e.exceptions);
            pairs += 1;
        }
    }
    assert!(pairs > 200);
    let e = verify::scan_root_monotone(&id("primes_in_ap[13,46]"), Direction::Decreasing, (2, 2000), Kernel::default()).unwrap();
    assert!(e.exceptions.contains(&4));
}

#[test]
fn thresholds_hold_after_and_fail_before() {
    for alpha in 1..=6 {
        let e = scan("primes", Property::PowerMean(alpha), (2, 5000));
        let n = e.threshold().minimal_stable_start.unwrap();
        assert!(e.exceptions.iter().all(|&i| i < n));
        assert!(n == 2 || e.exceptions.contains(&(n - 1)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn merging_split_scans_equals_whole(a in 3u64..300, b in 3u64..300, which in 0usize..3) {
        let (seq, p, lo, hi) = [
            ("primes", Property::PowerMean(3), 2u64, 400u64),
            ("prefix_sum[proth]", Property::RatioIncreasing, 1, 400),
            ("hypothesis_h[x,2x-1]", Property::RootDecreasing, 1, 400),
        ][which];
        let (x, y) = (a.min(b).clamp(lo, hi), a.max(b).clamp(lo, hi));
        let whole = scan(seq, p, (lo, hi));
        let left = scan(seq, p, (lo, x));
        let mid = scan(seq, p, (x, y));
        let right = scan(seq, p, (y, hi));
        let m1 = left.merge(&mid).unwrap().merge(&right).unwrap();
        let m2 = left.merge(&mid.merge(&right).unwrap()).unwrap();
        let m3 = right.merge(&left.merge(&mid).unwrap()).unwrap();
        prop_assert_eq!(&m1, &whole);
        prop_assert_eq!(&m2, &whole);
        prop_assert_eq!(&m3, &whole);
    }

    #[test]
    fn exceptions_lie_in_range_and_avoid_indeterminates(lo in 1u64..200, len in 0u64..200) {
        let e = scan("prefix_sum[two_square[2]]", Property::RatioIncreasing, (lo, lo + len));
        prop_assert!(e.exceptions.iter().all(|&i| i >= lo && i <= lo + len));
        prop_assert!(e.exceptions.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(e.exceptions.iter().all(|i| !e.indeterminates.contains(i)));
    }
}

#[test]
fn unknown_scan_requests_are_rejected() {
    let s: SequenceId = "bell".parse().unwrap();
    assert!(ScanSpec::new(s, Property::PowerMean(2), (2, 10)).is_err());
    assert!("power_mean[0]".parse::<Property>().is_err());
    assert!("sideways".parse::<Property>().is_err());
}
