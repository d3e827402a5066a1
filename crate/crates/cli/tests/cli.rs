use std::fs;
use std::path::Path;

use strongsum_cli::config::RunConfig;
use strongsum_cli::main_with_args;
use strongsum_cli::output::manifest_path;

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("strongsum").chain(args.iter().copied()))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn small_lemma_sweep_resolves_the_builtin_grid() {
    let c = RunConfig::resolve("verify-lemma", None, vec![("sweep".into(), "small".into()), ("ids".into(), "L2".into())])
        .unwrap();
    let s = c.sweep_for(strongsum::lab::InequalityId::L2).unwrap();
    assert_eq!(s, strongsum::lab::SweepSpec::small_for(strongsum::lab::InequalityId::L2));
}

#[test]
fn means_single_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let code = run(&[
        "means", "--function", "cos3", "--indices", "lacunary:10", "--q", "2", "--x", "0.5", "--out", path(&out),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("function,x,indices,q,h"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "cos3");
    assert!(row[4].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn config_file_with_s_equal_p_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "sweep = small\nps = 2:2\n").unwrap();
    let out = dir.path().join("r.csv");
    assert_eq!(run(&["verify-lemma", "L2", "--config", path(&cfg), "--out", path(&out)]), 2);
    assert!(!out.exists());
}

#[test]
fn unknown_key_is_a_config_error() {
    assert_eq!(run(&["verify-lemma", "L2", "--set", "colour=red"]), 2);
    assert_eq!(run(&["verify-lemma", "L9", "--sweep", "small"]), 2);
    assert_eq!(run(&["verify-theorem", "L2", "--sweep", "small"]), 2);
}

#[test]
fn missing_output_directory_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("absent").join("r.csv");
    assert_eq!(run(&["verify-lemma", "L2", "--sweep", "small", "--out", path(&out)]), 2);
}

#[test]
fn halved_constant_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let code = run(&[
        "verify-lemma",
        "L4a",
        "--sweep",
        "small",
        "--set",
        "test_constant_scale=0.5",
        "--out",
        path(&out),
    ]);
    assert_eq!(code, 1);
    assert!(fs::read_to_string(&out).unwrap().contains(",fail,"));
}

#[test]
fn manifest_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["verify-theorem", "T1", "--sweep", "small", "--seed", "3", "--set", "subsample=2", "--out"];
    let mut first: Vec<&str> = args.to_vec();
    first.push(path(&a));
    assert_eq!(run(&first), 0);
    let manifest = manifest_path(&a);
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("# result T1 verdict=BoundedRatio"));
    assert_eq!(run(&["verify-theorem", "T1", "--config", path(&manifest), "--out", path(&b)]), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn manifest_for_another_command_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("m.cfg");
    fs::write(&cfg, "command = verify-lemma\nids = L2\n").unwrap();
    assert_eq!(run(&["verify-corollary", "--config", path(&cfg)]), 2);
}

#[test]
fn sweep_file_supplies_grid_keys() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    fs::write(&grid, "functions = cos\npoints = 1\ndelta_levels = 1,2\nps = 1:2\n").unwrap();
    let out = dir.path().join("r.csv");
    assert_eq!(run(&["verify-elementary", "E1", "--sweep", path(&grid), "--out", path(&out)]), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.starts_with("E1,cos,1.0000000000000000e0,")));
}

#[test]
fn single_computations_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, extra) in [
        ("coeffs", vec!["--function", "cos3", "--degree", "8"]),
        ("partial-sums", vec!["--function", "squarewave", "--x", "-pi/2", "--kmax", "16"]),
        ("chars", vec!["--function", "cusp050", "--x", "0", "--levels", "3"]),
    ] {
        let out = dir.path().join(format!("{cmd}.csv"));
        let mut args = vec![cmd];
        args.extend(extra);
        args.extend(["--out", path(&out)]);
        assert_eq!(run(&args), 0, "{cmd}");
        assert!(fs::read_to_string(&out).unwrap().lines().count() > 3, "{cmd}");
    }
}

#[test]
fn corollary_exit_code_follows_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let ok = run(&["verify-corollary", "--set", "functions=cos,squarewave", "--set", "points=1,2", "--out", path(&out)]);
    assert_eq!(ok, 0);
    let red = run(&["verify-corollary", "--set", "functions=cusp025", "--set", "points=0"]);
    assert_eq!(red, 1);
}

#[test]
fn command_line_definition_is_consistent() {
    use clap::CommandFactory;
    strongsum_cli::Cli::command().debug_assert();
}
