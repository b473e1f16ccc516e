use beclab::codes::alist::{parse_alist, to_alist_string};
use beclab::codes::catalog::{self, LDPC_255_SPEC, LDPC_341_SPEC};
use beclab::codes::spec_file::CodeSpecFile;
use beclab::codes::{cyclic_ldpc_support, exhaustive_min_distance, CyclicCodeSpec};
use beclab::gf2::BitVec;

#[test]
fn catalog_dimensions() {
    let expected = [
        ("hamming7", 7, 4),
        ("rep3", 3, 1),
        ("bch15", 15, 7),
        ("qr17", 17, 9),
        ("golay23", 23, 12),
        ("bch31", 31, 16),
        ("bch63", 63, 45),
        ("ldpc255", 255, 175),
        ("ldpc341", 341, 205),
        ("bch255", 255, 178),
        ("bch127", 127, 64),
        ("ebch128", 128, 64),
        ("qr103", 103, 52),
        ("ldpc256", 256, 128),
    ];
    for (name, n, k) in expected {
        let code = catalog::by_name(name).unwrap();
        assert_eq!((code.n(), code.k()), (n, k), "{name}");
        assert_eq!(code.h().rank(), n - k, "{name}");
    }
    assert_eq!(catalog::by_name("(255,175)").unwrap().name(), "ldpc255");
}

#[test]
fn cyclic_ldpc_data_files_regenerate() {
    for (text, n, w, k) in [(LDPC_255_SPEC, 255, 16, 175), (LDPC_341_SPEC, 341, 15, 205)] {
        let spec = CodeSpecFile::parse(text, "data").unwrap();
        let support = cyclic_ldpc_support(n, w, k).expect("search finds a support");
        assert_eq!(spec.support, support);
        let cyclic = CyclicCodeSpec::new(n, support).unwrap();
        assert!(cyclic.is_orthogonal());
        let code = spec.build().unwrap();
        assert_eq!(code.k(), k);
        assert_eq!(code.dmin_claimed(), Some(w + 1));
        assert!(code.row_weights().iter().all(|&x| x == w));
    }
}

#[test]
fn small_codes_meet_claimed_distance() {
    for name in ["hamming7", "rep3", "bch15", "qr17", "golay23", "bch31"] {
        let code = catalog::by_name(name).unwrap();
        let d = exhaustive_min_distance(&code).unwrap();
        assert!(d >= code.dmin_claimed().unwrap(), "{name}: {d}");
    }
}

#[test]
fn generator_codewords_satisfy_checks() {
    for name in ["bch127", "ebch128", "qr103", "bch255", "ldpc255"] {
        let code = catalog::by_name(name).unwrap();
        let enc = code.systematic_encoder();
        for seed in 0..20u64 {
            let info = BitVec::from_bools((0..enc.k()).map(|i| (i as u64 * 7 + seed * 13) % 5 < 2));
            let c = enc.encode(&info);
            assert!(code.is_codeword(&c), "{name}");
            assert_eq!(enc.extract(&c), info);
        }
    }
}

#[test]
fn alist_round_trip_corpus() {
    for (name, _) in catalog::names() {
        let code = catalog::by_name(name).unwrap();
        let back = parse_alist(&to_alist_string(&code), name).unwrap();
        assert_eq!(back.h(), code.h(), "{name}");
    }
}
