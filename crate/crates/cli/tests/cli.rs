use std::path::Path;
use std::process::{Command, Output};

fn beclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    let o = beclab(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(
        beclab(&["code-info", "--code", "hamming7", "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        beclab(&["code-info", "--code", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        beclab(&["decode", "--code", "hamming7", "--word", "01x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn code_info_from_support_file() {
    let dir = tempfile::tempdir().unwrap();
    let sup = dir.path().join("support.txt");
    std::fs::write(
        &sup,
        "# first row\n1 2 4 8 16 27 32 54\n64 99 108 128 141 177 198 216\n",
    )
    .unwrap();
    let o = beclab(&[
        "code-info",
        "--family",
        "cyclic",
        "--n",
        "255",
        "--poly",
        path(&sup),
        "--seed",
        "5",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    for line in [
        "n: 255",
        "k: 175",
        "rank: 80",
        "row weight: 16",
        "claimed dmin: 17",
        "seed=5",
    ] {
        assert!(out.lines().any(|l| l == line), "{line} missing from\n{out}");
    }
    let alist = dir.path().join("h.alist");
    assert!(beclab(&[
        "code-info",
        "--code",
        "bch15",
        "--write-alist",
        path(&alist)
    ])
    .status
    .success());
    let o = beclab(&["code-info", "--alist", path(&alist)]);
    assert!(stdout(&o).contains("k: 7"));
}

#[test]
fn sim_fer_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fer.csv");
    let args = [
        "sim-fer",
        "--code",
        "(255,175)",
        "--decoder",
        "guess",
        "--gs",
        "2",
        "--eps",
        "0.25:0.40:0.025",
        "--trials",
        "200",
        "--seed",
        "7",
    ];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path(&csv)]);
    let o = beclab(&with_out);
    assert!(o.status.success());
    assert!(stdout(&o).contains("seed=7"));
    let golden = include_str!("data/sim_fer_guess.csv");
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), golden);
    assert_eq!(stdout(&beclab(&args)), golden);
}

#[test]
fn sim_fer_lt_and_shortfall() {
    let o = beclab(&[
        "sim-fer",
        "--decoder",
        "lt",
        "--lt-k",
        "32",
        "--lt-symbols",
        "64",
        "--eps",
        "0.2",
        "--trials",
        "300",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("epsilon,trials,"));
    assert_eq!(
        beclab(&["sim-fer", "--decoder", "lt", "--eps", "0.2"])
            .status
            .code(),
        Some(2)
    );

    let o = beclab(&[
        "sim-shortfall",
        "--code",
        "rep3",
        "--trials",
        "50",
        "--seed",
        "3",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("shortfall,corrected,count,probability\n0,2,50,1\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mean corrected: 2"));
}

#[test]
fn decode_exit_codes() {
    for dec in ["recovery", "guess", "multiguess", "inplace"] {
        let o = beclab(&[
            "decode",
            "--code",
            "hamming7",
            "--decoder",
            dec,
            "--word",
            "1010101",
        ]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).lines().next(), Some("1010101"));
    }
    let o = beclab(&[
        "decode", "--code", "hamming7", "--word", "??1?101", "--seed", "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1010101\nstatus=recovered"));
    assert!(stdout(&o).contains("seed=4"));
    let o = beclab(&[
        "decode",
        "--code",
        "hamming7",
        "--decoder",
        "recovery",
        "--word",
        "1?1?1?1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status=failure"));
    let o = beclab(&[
        "decode",
        "--code",
        "hamming7",
        "--decoder",
        "guess",
        "--gs",
        "1",
        "--word",
        "10?0??1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status=ambiguous"));
}

#[test]
fn packet_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let data: Vec<u8> = (0..2000u32).map(|i| (i * 7 + i / 13) as u8).collect();
    std::fs::write(p("in"), &data).unwrap();
    let enc = beclab(&[
        "encode-packets",
        "--code",
        "ebch128",
        "--packet-bits",
        "100",
        "--input",
        path(&p("in")),
        "--output",
        path(&p("pk")),
        "--seed",
        "1",
    ]);
    assert!(enc.status.success());
    assert!(stdout(&enc).contains("3 matrices, 384 packets"));

    let loss = |prob: &str, out: &str| {
        beclab(&[
            "inject-loss",
            "--input",
            path(&p("pk")),
            "--output",
            path(&p(out)),
            "--drop-prob",
            prob,
            "--drop-rows",
            "0,5",
            "--seed",
            "9",
        ])
    };
    assert!(loss("0.2", "lossy").status.success());
    assert!(loss("0.2", "lossy2").status.success());
    assert_eq!(
        std::fs::read(p("lossy")).unwrap(),
        std::fs::read(p("lossy2")).unwrap()
    );
    let dec = beclab(&[
        "decode-packets",
        "--code",
        "ebch128",
        "--packet-bits",
        "100",
        "--input",
        path(&p("lossy")),
        "--output",
        path(&p("out")),
    ]);
    assert!(dec.status.success(), "{}", stdout(&dec));
    assert_eq!(std::fs::read(p("out")).unwrap(), data);

    assert!(loss("0.7", "heavy").status.success());
    let dec = beclab(&[
        "decode-packets",
        "--code",
        "ebch128",
        "--packet-bits",
        "100",
        "--input",
        path(&p("heavy")),
        "--output",
        path(&p("out2")),
    ]);
    assert_eq!(dec.status.code(), Some(1));
    assert!(stdout(&dec).contains("rank deficit"));
    assert_eq!(loss("1.5", "bad").status.code(), Some(2));
}
