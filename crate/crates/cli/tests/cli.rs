//! End-to-end tests of the `evostab` binary: subcommand behavior, exit
//! codes, report round-trips, and determinism under the thread cap.

use std::path::PathBuf;
use std::process::{Command, Output};

use evostab_cli::document::{AnalysisDocument, CertifyVerdict};
use evostab_core::barriers::{h_values, MutationSet};
use evostab_core::rat::{int, rat};
use evostab_core::{MixedStrategy, SymmetricGame};

fn evostab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evostab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn evostab_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evostab"))
        .env("EVOSTAB_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("evostab-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn gen_game(target: &[&str]) -> PathBuf {
    let out = evostab(&[&["gen"], target].concat());
    write_temp(&format!("{}.json", target.join("-")), &stdout(&out))
}

#[test]
fn gen_prints_the_named_games() {
    let ex1 = stdout(&evostab(&["gen", "example1"]));
    let game = SymmetricGame::parse(&ex1).unwrap();
    assert_eq!(*game.entry(0, 0), int(-1));
    assert_eq!(*game.entry(1, 0), int(0));

    let ex2 = stdout(&evostab(&["gen", "example2"]));
    let game = SymmetricGame::parse(&ex2).unwrap();
    assert_eq!(*game.entry(0, 0), int(-1));
    assert_eq!(*game.entry(1, 1), int(0));

    let hd = stdout(&evostab(&["gen", "hawk-dove", "2", "4"]));
    let game = SymmetricGame::parse(&hd).unwrap();
    assert_eq!(*game.entry(0, 0), int(-1));
    assert_eq!(*game.entry(0, 1), int(2));
    assert_eq!(*game.entry(1, 0), int(0));
    assert_eq!(*game.entry(1, 1), int(1));

    // Invalid parameters exit with the input-error code.
    let out = evostab(&["gen", "hawk-dove", "4", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_random_is_deterministic_in_the_seed() {
    let a = stdout(&evostab(&["gen", "random", "3", "11"]));
    let b = stdout(&evostab(&["gen", "random", "3", "11"]));
    let c = stdout(&evostab(&["gen", "random", "3", "12"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn analyze_reports_round_trip_and_flag_the_examples() {
    let path = gen_game(&["example1"]);
    let out = stdout(&evostab(&[
        "analyze",
        path.to_str().unwrap(),
        "--strategy",
        "[1/2,1/2]",
    ]));
    let doc: AnalysisDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.game.k, 2);
    assert_eq!(doc.results.len(), 1);
    let flags = &doc.results[0].flags;
    assert!(flags.is_ess && !flags.is_mess && flags.is_nash);
    // Lossless JSON round-trip.
    let again: AnalysisDocument =
        serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);

    let path = gen_game(&["example2"]);
    let out = stdout(&evostab(&["analyze", path.to_str().unwrap(), "--pure-sweep"]));
    let doc: AnalysisDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.results.len(), 2);
    let first = &doc.results[0];
    assert_eq!(first.strategy, MixedStrategy::pure(2, 0));
    assert!(!first.flags.is_nash && !first.flags.is_ess && !first.flags.is_mess);
    let second = &doc.results[1];
    assert!(second.flags.is_mess && second.flags.is_strictly_locally_dominant);
    assert!(!second.flags.is_strict_nash);
}

#[test]
fn analyze_indeterminate_ess_exits_3() {
    // A best-response face whose quadratic vanishes off every power-of-two
    // grid: the ESS fallback reports indeterminate rather than guessing.
    let path = write_temp(
        "indeterminate.json",
        r#"{"k":3,"payoffs":[["-1","2","0"],["2","-4","0"],["0","0","0"]]}"#,
    );
    let out = evostab(&["analyze", path.to_str().unwrap(), "--strategy", "[0,0,1]"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("indeterminate"));
}

#[test]
fn analyze_missing_file_exits_2() {
    let out = evostab(&["analyze", "/nonexistent/missing.json", "--pure-sweep"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn analyze_malformed_game_exits_2_with_field_name() {
    let path = write_temp("bad.json", r#"{"k":2,"payoffs":[["1","x"],["0","0"]]}"#);
    let out = evostab(&["analyze", path.to_str().unwrap(), "--pure-sweep"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("payoffs[0][1]"));
}

#[test]
fn certify_counterexamples_replay_and_agree_with_barrier() {
    let path = gen_game(&["example1"]);
    let out = stdout(&evostab(&[
        "certify",
        path.to_str().unwrap(),
        "--strategy",
        "[1/2,1/2]",
        "--denom",
        "4",
        "--m",
        "2",
        "--eps",
        "1/4",
    ]));
    let verdict: CertifyVerdict = serde_json::from_str(&out).unwrap();
    let CertifyVerdict::Counterexample { counterexample: ce } = verdict else {
        panic!("expected a counterexample, got {out}");
    };
    let game = SymmetricGame::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let p = MixedStrategy::parse("[1/2,1/2]").unwrap();
    let ms = MutationSet::new(p, ce.mutants.clone()).unwrap();
    let h = h_values(&game, &ms, &ce.proportions).unwrap();
    assert_eq!(h[ce.violated_index], ce.h_value);
    assert!(ce.h_value <= int(0));

    // The barrier command on the same mutants agrees there is no barrier.
    let mutant_args: Vec<String> = ce.mutants.iter().map(|m| m.to_string()).collect();
    let mut args = vec![
        "barrier".to_string(),
        path.to_str().unwrap().to_string(),
        "--strategy".to_string(),
        "[1/2,1/2]".to_string(),
        "--mutants".to_string(),
    ];
    args.extend(mutant_args);
    let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = stdout(&evostab(&arg_refs));
    assert!(out.contains("\"kind\": \"none\""), "{out}");
}

#[test]
fn certify_absence_reports_the_resolution() {
    let path = gen_game(&["example2"]);
    let out = stdout(&evostab(&[
        "certify",
        path.to_str().unwrap(),
        "--strategy",
        "[0,1]",
        "--denom",
        "6",
        "--m",
        "2",
        "--eps",
        "1/10",
        "1/5",
    ]));
    let verdict: CertifyVerdict = serde_json::from_str(&out).unwrap();
    let CertifyVerdict::Absent { denom, m, eps_list, note } = verdict else {
        panic!("expected absence, got {out}");
    };
    assert_eq!((denom, m), (6, 2));
    assert_eq!(eps_list, vec!["1/10".to_string(), "1/5".to_string()]);
    assert!(note.contains("no counterexample at resolution"));
}

#[test]
fn certify_output_is_independent_of_the_thread_cap() {
    let path = gen_game(&["random", "3", "77"]);
    let args = [
        "certify",
        path.to_str().unwrap(),
        "--strategy",
        "[1,0,0]",
        "--denom",
        "4",
        "--m",
        "2",
        "--eps",
        "1/8",
        "1/2",
    ];
    let single = stdout(&evostab_with_threads(&args, "1"));
    let many = stdout(&evostab_with_threads(&args, "8"));
    assert_eq!(single, many);
}

#[test]
fn barrier_reports_no_box_for_the_opposed_pair() {
    let path = gen_game(&["example1"]);
    let out = stdout(&evostab(&[
        "barrier",
        path.to_str().unwrap(),
        "--strategy",
        "[1/2,1/2]",
        "--mutants",
        "[1/4,3/4]",
        "[3/4,1/4]",
    ]));
    assert!(out.contains("\"kind\": \"none\""), "{out}");
    assert!(out.contains("\"violated_index\""), "{out}");
}

#[test]
fn barrier_uniform_and_exit_codes() {
    let path = gen_game(&["example2"]);
    let out = stdout(&evostab(&[
        "barrier",
        path.to_str().unwrap(),
        "--strategy",
        "[0,1]",
        "--uniform",
        "3",
    ]));
    assert!(out.contains("\"eps_bar\": \"1/3\""), "{out}");
    assert!(out.contains("\"total_fraction_bound\": \"1\""), "{out}");

    // Uniform barrier for a non-multi-mutation-stable strategy: code 4.
    let path = gen_game(&["example1"]);
    let out = evostab(&[
        "barrier",
        path.to_str().unwrap(),
        "--strategy",
        "[1/2,1/2]",
        "--uniform",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn simulate_writes_csv_and_prints_the_outcome() {
    let path = gen_game(&["example2"]);
    let csv_path = std::env::temp_dir().join(format!("evostab-traj-{}.csv", std::process::id()));
    let out = stdout(&evostab(&[
        "simulate",
        path.to_str().unwrap(),
        "--incumbent",
        "[0,1]",
        "--mutants",
        "[1,0]",
        "--shares",
        "1.0",
        "0.0",
        "--t-end",
        "10",
        "--out",
        csv_path.to_str().unwrap(),
    ]));
    assert_eq!(out.trim(), "restored");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("t,share_0,share_1"));
    assert!(csv.trim_end().ends_with("# outcome=restored"));

    // Without --out the CSV goes to stdout.
    let out = stdout(&evostab(&[
        "simulate",
        path.to_str().unwrap(),
        "--incumbent",
        "[0,1]",
        "--mutants",
        "[1,0]",
        "--shares",
        "0.9",
        "0.1",
        "--t-end",
        "1",
    ]));
    assert!(out.starts_with("t,share_0,share_1"));

    // Mismatched share count is an input error.
    let out = evostab(&[
        "simulate",
        path.to_str().unwrap(),
        "--incumbent",
        "[0,1]",
        "--mutants",
        "[1,0]",
        "--shares",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_classifies_the_opposed_pair_invasion_as_neutral_drift() {
    let path = gen_game(&["example1"]);
    let csv_path =
        std::env::temp_dir().join(format!("evostab-neutral-{}.csv", std::process::id()));
    let out = stdout(&evostab(&[
        "simulate",
        path.to_str().unwrap(),
        "--incumbent",
        "[1/2,1/2]",
        "--mutants",
        "[1/4,3/4]",
        "[3/4,1/4]",
        "--shares",
        "0.9",
        "0.05",
        "0.05",
        "--out",
        csv_path.to_str().unwrap(),
    ]));
    assert_eq!(out.trim(), "neutral_drift");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.trim_end().ends_with("# outcome=neutral_drift"));
}

#[test]
fn certify_replay_values_are_wire_exact() {
    // A counterexample whose h value is a non-trivial fraction survives the
    // JSON round trip bit-exactly.
    let path = gen_game(&["example1"]);
    let out = stdout(&evostab(&[
        "certify",
        path.to_str().unwrap(),
        "--strategy",
        "[1/2,1/2]",
        "--denom",
        "4",
        "--m",
        "2",
        "--eps",
        "1/4",
    ]));
    let verdict: CertifyVerdict = serde_json::from_str(&out).unwrap();
    let round: CertifyVerdict =
        serde_json::from_str(&serde_json::to_string(&verdict).unwrap()).unwrap();
    assert_eq!(verdict, round);
    if let CertifyVerdict::Counterexample { counterexample } = round {
        assert_eq!(counterexample.h_value, rat(-1, 32));
    }
}
