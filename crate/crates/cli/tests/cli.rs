use std::process::Command;

fn aegame(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_aegame")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn solve_prints_the_sandwich() {
    let (code, out) = aegame(&["solve", "--n", "5", "--property", "non_bipartite"]);
    assert_eq!(code, 0);
    assert_eq!(out, "tau_e=5 ex=6 sandwich=4..7 pass=true\n");
    let (code, out) = aegame(&["solve", "--n", "3", "--property", "non_planar"]);
    assert_eq!((code, out.as_str()), (0, "tau_e=inf ex=3 sandwich=3..4 pass=true\n"));
    let (code, _) = aegame(&["solve", "--n", "6", "--property", "min_degree_one"]);
    assert_eq!(code, 2);
}

#[test]
fn play_writes_a_replayable_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let (code, out) = aegame(&[
        "play", "--n", "40", "--avoider", "bibunch_avoider", "--enforcer", "odd_cycle_enforcer",
        "--property", "non_bipartite", "--seed", "4", "--transcript", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n=40 property=non_bipartite avoider=bibunch_avoider enforcer=odd_cycle_enforcer seed=4\n"));
    assert!(out.starts_with("loss_round="));
    let (code, _) = aegame(&["play", "--n", "10", "--avoider", "avoidr", "--enforcer", "adversary:lex", "--property", "non_bipartite"]);
    assert_eq!(code, 2);
}

#[test]
fn tournament_and_verify_share_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.conf");
    let report = dir.path().join("r.txt");
    std::fs::write(
        &config,
        "n = 40\nproperty = non_bipartite\navoider = adversary:random\nenforcer = odd_cycle_enforcer\n\
         repetitions = 4\nseed = 1\nbounds = odd_cycle_upper\n",
    )
    .unwrap();
    let (code, _) = aegame(&["tournament", "--config", config.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out) = aegame(&["verify", "--report", report.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("odd_cycle_upper: pass"));

    std::fs::write(
        &config,
        "n = 40\nproperty = non_bipartite\navoider = adversary:random\nenforcer = odd_cycle_enforcer\n\
         bounds = bipartite_lower\n",
    )
    .unwrap();
    let (code, out) = aegame(&["tournament", "--config", config.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.starts_with("report config "));
}
