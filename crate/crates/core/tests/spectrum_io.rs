mod common;

use std::fs;

use common::*;
use typebound::combinatorics::exact_binomial;
use typebound::spectrum::{load_spectrum_with, sidecar_path};
use typebound::{brute_force_spectrum, load_spectrum, Error, GeneratorMatrix, WeightSpectrum};

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (s, _) in [hamming(), bch_15_7(), rep(7)] {
        let path = dir.path().join(format!("code{}.csv", s.n()));
        s.save(&path).unwrap();
        assert!(sidecar_path(&path).exists());
        let back = load_spectrum(&path).unwrap();
        assert_eq!(back.n(), s.n());
        assert_eq!(back.k(), s.k());
        assert_eq!(back.d_min(), s.d_min());
        assert_eq!(back.exact(), s.exact());
    }
}

#[test]
fn load_without_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    fs::write(&path, "# Hamming\nw,count\n0,1\n3,7\n4,7\n7,1\n").unwrap();
    let s = load_spectrum(&path).unwrap();
    assert_eq!((s.n(), s.k(), s.d_min()), (7, Some(4), Some(3)));
    let longer = load_spectrum_with(&path, Some(9), None).unwrap();
    assert_eq!(longer.n(), 9);
}

#[test]
fn load_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    for (text, line) in [
        ("w,count\n0,1\n3,x\n", 3u64),
        ("w,count\n0,1\n3,7\n3,7\n", 4),
        ("w,count\n0,2\n", 2),
    ] {
        fs::write(&path, text).unwrap();
        match load_spectrum_with(&path, Some(7), None) {
            Err(Error::Load { line: l, .. }) => assert_eq!(l, line, "{text}"),
            other => panic!("unexpected {other:?} for {text}"),
        }
    }
    fs::write(&path, "w,count\n0,1\n9,1\n").unwrap();
    assert!(load_spectrum_with(&path, Some(7), None).is_err());
    let missing = dir.path().join("missing.csv");
    let err = load_spectrum(&missing).unwrap_err().to_string();
    assert!(err.contains("missing.csv"), "{err}");
}

/// `2^k B_j = sum_w S_w K_j(w)` with Krawtchouk `K_j(w) = sum_i (-1)^i C(w,i) C(n-w,j-i)`.
fn macwilliams_dual(s: &WeightSpectrum) -> Vec<i128> {
    let n = s.n() as u64;
    let k = s.k().unwrap();
    let exact = s.exact().unwrap();
    (0..=n)
        .map(|j| {
            let mut acc: i128 = 0;
            for w in 0..=n {
                let sw: i128 = exact[w as usize].to_string().parse().unwrap();
                if sw == 0 {
                    continue;
                }
                let mut kj: i128 = 0;
                for i in 0..=j.min(w) {
                    let term: i128 = (exact_binomial(w, i) * exact_binomial(n - w, j - i))
                        .to_string()
                        .parse()
                        .unwrap();
                    kj += if i % 2 == 0 { term } else { -term };
                }
                acc += sw * kj;
            }
            assert_eq!(acc % (1i128 << k), 0);
            acc >> k
        })
        .collect()
}

fn dual_generator(g: &GeneratorMatrix) -> GeneratorMatrix {
    // Brute-force the dual: every word orthogonal to all rows.
    let n = g.n();
    let mut basis: Vec<Vec<u8>> = Vec::new();
    for v in 1u32..(1 << n) {
        let word: Vec<u8> = (0..n).map(|i| ((v >> i) & 1) as u8).collect();
        let orthogonal = g
            .rows()
            .iter()
            .all(|r| r.iter().zip(&word).map(|(a, b)| a & b).sum::<u8>() % 2 == 0);
        if !orthogonal {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(word);
        if GeneratorMatrix::new(trial.clone()).is_ok_and(|t| brute_force_spectrum(&t).is_ok()) {
            basis = trial;
        }
        if basis.len() == n - g.k() {
            break;
        }
    }
    GeneratorMatrix::new(basis).unwrap()
}

#[test]
fn macwilliams_identity() {
    for g in [
        GeneratorMatrix::hamming_7_4(),
        GeneratorMatrix::cyclic(15, &[1, 0, 0, 0, 1, 0, 1, 1, 1]).unwrap(),
        GeneratorMatrix::single_parity_check(6),
    ] {
        let (s, _) = brute_force_spectrum(&g).unwrap();
        let (d, _) = brute_force_spectrum(&dual_generator(&g)).unwrap();
        let expect = macwilliams_dual(&s);
        let got: Vec<i128> = d
            .exact()
            .unwrap()
            .iter()
            .map(|c| c.to_string().parse().unwrap())
            .collect();
        assert_eq!(got, expect);
    }
}

#[test]
fn generator_errors() {
    let rank_deficit = GeneratorMatrix::new(vec![vec![1, 1, 0], vec![1, 1, 0]]).unwrap();
    assert!(matches!(
        brute_force_spectrum(&rank_deficit),
        Err(Error::Rank { .. })
    ));
    assert!(GeneratorMatrix::parse("1 0 1\n1 1\n").is_err());
}
