mod common;

use beclab::channel::{trial_seed, ReceivedWord};
use beclab::codes::{catalog, Code};
use beclab::decoders::{inplace_decode, Decoder};
use beclab::gf2::BitVec;
use beclab::sim::{
    census_order, census_trial, fer_csv_string, parse_grid, read_csv, run_fer_sweep,
    run_shortfall_census, write_csv, FerPoint, SimTarget, SweepConfig, CHUNK,
};
use common::erased_rank;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: &str = include_str!("data/hamming7_inplace.csv");

fn sweep(code: Code, decoder: Decoder, grid: &str, trials: u64, seed: u64) -> SweepConfig {
    SweepConfig::new(
        SimTarget::Block { code, decoder },
        parse_grid(grid).unwrap(),
        trials,
        seed,
    )
}

/// Replays the channel draws by hand and applies the rank criterion.
fn oracle_errors(code: &Code, eps: f64, trials: u64, seed: u64) -> u64 {
    (0..trials)
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
            let erased: Vec<usize> = (0..code.n()).filter(|_| rng.gen::<f64>() < eps).collect();
            erased_rank(code.h(), &erased) < erased.len()
        })
        .count() as u64
}

#[test]
fn hamming_golden_csv() {
    let code = catalog::hamming7();
    let cfg = sweep(code.clone(), Decoder::InPlace, "0.1:0.5:0.1", 2000, 7);
    let table = run_fer_sweep(&cfg).unwrap();
    assert_eq!(fer_csv_string(&table).unwrap(), GOLDEN);
    for p in &table {
        assert_eq!(
            p.frame_errors,
            oracle_errors(&code, p.epsilon, 2000, 7),
            "eps={}",
            p.epsilon
        );
        assert_eq!(p.undetected, 0);
    }
}

#[test]
fn recovery_fer_covers_exact_value() {
    // Exact FER by enumerating all 128 erasure patterns.
    let code = catalog::hamming7();
    let eps: f64 = 0.3;
    let exact: f64 = (0u32..128)
        .map(|m| {
            let erased: Vec<usize> = (0..7).filter(|j| m >> j & 1 == 1).collect();
            let rw = ReceivedWord::with_erasures(&BitVec::zeros(7), &erased);
            let fails = !beclab::decoders::recover(&code, &rw)
                .unwrap()
                .is_recovered();
            let e = erased.len() as i32;
            if fails {
                eps.powi(e) * (1.0 - eps).powi(7 - e)
            } else {
                0.0
            }
        })
        .sum();
    let table = run_fer_sweep(&sweep(code, Decoder::Recovery, "0.3", 20_000, 3)).unwrap();
    assert!(
        table[0].ci_low <= exact && exact <= table[0].ci_high,
        "{exact} {:?}",
        table[0]
    );
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fer.csv");
    let table = vec![
        FerPoint::from_counts(0.1, 1000, 0, 0),
        FerPoint::from_counts(0.25, 20_000, 137, 2),
    ];
    write_csv(&table, &path).unwrap();
    assert_eq!(read_csv(&path).unwrap(), table);

    write_csv(&[], &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "epsilon,trials,frame_errors,undetected,fer,ci_low,ci_high\n"
    );
    assert!(read_csv(&path).unwrap().is_empty());

    std::fs::write(&path, "eps,trials\n0.1,3\n").unwrap();
    assert!(read_csv(&path).is_err());
    std::fs::write(&path, GOLDEN.replace("2000", "many")).unwrap();
    assert!(read_csv(&path).unwrap_err().to_string().contains(":2:"));
}

#[test]
fn noiseless_channel_never_fails() {
    for name in ["bch15", "golay23"] {
        let code = catalog::by_name(name).unwrap();
        for dec in ["recovery", "guess:1", "multiguess:3", "inplace"] {
            let table =
                run_fer_sweep(&sweep(code.clone(), dec.parse().unwrap(), "0", 500, 1)).unwrap();
            assert_eq!((table[0].frame_errors, table[0].fer), (0, 0.0));
        }
    }
    let table = run_fer_sweep(&sweep(catalog::hamming7(), Decoder::InPlace, "1", 100, 1)).unwrap();
    assert_eq!(table[0].frame_errors, 100);
}

#[test]
fn random_codewords_match_zero_word() {
    let code = catalog::by_name("bch31").unwrap();
    for dec in ["recovery", "guess:2", "multiguess:3", "inplace"] {
        let mut cfg = sweep(code.clone(), dec.parse().unwrap(), "0.2:0.4:0.1", 1500, 9);
        let zero = run_fer_sweep(&cfg).unwrap();
        cfg.random_codewords = true;
        assert_eq!(run_fer_sweep(&cfg).unwrap(), zero, "{dec}");
    }
}

#[test]
fn sweeps_are_deterministic_and_stop_early() {
    let code = catalog::by_name("qr17").unwrap();
    let mut cfg = sweep(
        code,
        "guess:2".parse().unwrap(),
        "0.3:0.5:0.1",
        3 * CHUNK,
        5,
    );
    let a = fer_csv_string(&run_fer_sweep(&cfg).unwrap()).unwrap();
    let b = fer_csv_string(&run_fer_sweep(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);

    cfg.stop_after_errors = Some(1);
    let table = run_fer_sweep(&cfg).unwrap();
    assert!(table
        .iter()
        .all(|p| p.trials == CHUNK && p.frame_errors >= 1));

    cfg.trials = 0;
    assert!(run_fer_sweep(&cfg).is_err());
}

#[test]
fn census_matches_literal_loop() {
    for name in ["bch15", "qr17", "golay23", "bch31"] {
        let code = catalog::by_name(name).unwrap();
        for t in 0..200 {
            let seed = trial_seed(4, t);
            let order = census_order(&code, seed);
            assert_eq!(order.len(), code.redundancy());
            let mut m = order.len();
            while !inplace_decode(
                &code,
                &ReceivedWord::with_erasures(&BitVec::zeros(code.n()), &order[..m]),
            )
            .unwrap()
            .is_recovered()
            {
                m -= 1;
            }
            assert_eq!(census_trial(&code, seed), m, "{name} trial {t}");
        }
    }
}

#[test]
fn census_statistics() {
    let stats = run_shortfall_census(&catalog::by_name("rep3").unwrap(), 500, 1).unwrap();
    assert_eq!((stats.mean_shortfall(), stats.mean_corrected()), (0.0, 2.0));

    let code = catalog::by_name("bch15").unwrap();
    let stats = run_shortfall_census(&code, 3000, 2).unwrap();
    assert_eq!(stats.histogram.iter().sum::<u64>(), 3000);
    assert!((stats.mean_corrected() + stats.mean_shortfall() - 8.0).abs() < 1e-12);
    assert_eq!(stats.prob_corrected_at_most(8), 1.0);
    assert_eq!(run_shortfall_census(&code, 3000, 2).unwrap(), stats);
    assert!(stats
        .csv_string()
        .starts_with("shortfall,corrected,count,probability\n0,8,"));
}
