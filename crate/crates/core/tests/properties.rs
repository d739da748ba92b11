mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use typebound::combinatorics::{
    enumerate_types, exact_binomial, ln_biguint, log_multinomial, log_type_probability,
    Compositions, LnFactorials,
};
use typebound::{BmsChannel, TypeVector};

fn row(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("positive sum", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-3).then(|| v.iter().map(|x| x / s).collect())
    })
}

fn exact_multinomial(counts: &[u32]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::from(1u32);
    for &c in counts {
        total += c as u64;
        acc *= exact_binomial(total, c as u64);
    }
    acc
}

proptest! {
    #[test]
    fn llr_is_antisymmetric(p in prop_oneof![row(3), row(5), row(7)]) {
        let ch = BmsChannel::from_p0(p).unwrap();
        let m = ch.half_width() as i32;
        for j in -m..=m {
            prop_assert_eq!(ch.llr(j).value(), -ch.llr(-j).value());
        }
    }

    #[test]
    fn compositions_match_filter(total in 0u32..7, caps in prop::collection::vec(0u32..5, 1..4)) {
        let fast: Vec<Vec<u32>> = Compositions::bounded(total, caps.clone())
            .map(|t| t.counts().to_vec())
            .collect();
        let mut slow = Vec::new();
        let mut cur = vec![0u32; caps.len()];
        loop {
            if cur.iter().sum::<u32>() == total {
                slow.push(cur.clone());
            }
            let mut i = 0;
            while i < cur.len() && cur[i] == caps[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
            cur[i] += 1;
        }
        let mut sorted_fast = fast.clone();
        sorted_fast.sort();
        slow.sort();
        prop_assert_eq!(sorted_fast.len(), fast.len());
        prop_assert_eq!(sorted_fast, slow);
    }

    #[test]
    fn vandermonde(ell in prop::collection::vec(0u32..6, 1..5), frac in 0.0f64..1.0) {
        let total: u32 = ell.iter().sum();
        let w = (frac * total as f64).floor() as u32;
        let sub: BigUint = Compositions::bounded(w, ell.clone())
            .map(|mu| {
                mu.counts()
                    .iter()
                    .zip(&ell)
                    .map(|(&m, &l)| exact_binomial(l as u64, m as u64))
                    .product::<BigUint>()
            })
            .sum();
        prop_assert_eq!(sub, exact_binomial(total as u64, w as u64));
    }

    #[test]
    fn log_multinomial_is_accurate(counts in prop::collection::vec(0u32..20, 1..5)) {
        prop_assume!(counts.iter().sum::<u32>() <= 60);
        let exact = ln_biguint(&exact_multinomial(&counts));
        let approx = log_multinomial(&TypeVector::new(counts.clone())).ln();
        prop_assert!((approx - exact).abs() <= 1e-12 * exact.abs().max(1.0), "{} vs {}", approx, exact);
    }

    #[test]
    fn type_probabilities_sum_to_one(p in prop_oneof![row(3), row(5)], n in 1u32..20) {
        let ch = BmsChannel::from_p0(p).unwrap();
        let lf = LnFactorials::new(n);
        let total: f64 = enumerate_types(n, ch.alphabet_size())
            .map(|t| (log_type_probability(&ch, &t).ln() + lf.ln_multinomial(t.counts())).exp())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bsc_error_set_is_parameter_free(e1 in 1e-6f64..0.499, e2 in 1e-6f64..0.499, a in 0u32..10, b in 0u32..10) {
        let c1 = BmsChannel::bsc(e1).unwrap();
        let c2 = BmsChannel::bsc(e2).unwrap();
        let mu = [a, 0, b];
        prop_assert_eq!(c1.is_error_type(&mu), c2.is_error_type(&mu));
        prop_assert_eq!(c1.is_error_type(&mu), b >= a);
    }

    #[test]
    fn hybrid_error_set(e in 1e-6f64..0.3, d in 0.0f64..0.5, mu in prop::collection::vec(0u32..8, 3)) {
        prop_assume!(e < 1.0 - e - d);
        let ch = BmsChannel::bsc_bec(e, d).unwrap();
        let w = mu.iter().sum::<u32>();
        prop_assert_eq!(ch.is_error_type(&mu), 2 * mu[2] >= w - mu[1]);
    }
}
