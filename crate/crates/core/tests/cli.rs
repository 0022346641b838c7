use std::path::PathBuf;
use std::process::{Command, Output};

use hlito::simulate::read_ensemble;

fn hlito(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlito"))
        .args(args)
        .env_remove("HLITO_SEED")
        .output()
        .unwrap()
}

fn hlito_with_seed(seed: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlito"))
        .args(args)
        .env("HLITO_SEED", seed)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hlito-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn poly_json_is_byte_exact() {
    let out = hlito(&["poly", "--m", "1", "--n", "1", "--rho", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"terms\":[{\"p\":1,\"q\":1,\"re\":1,\"im\":0},{\"p\":0,\"q\":0,\"re\":-1,\"im\":0}]}\n"
    );
    let notes = String::from_utf8(out.stderr).unwrap();
    assert!(notes.starts_with("# hlito "));
}

#[test]
fn invalid_input_exits_one() {
    assert_eq!(hlito(&["poly", "--m", "1", "--rho=-1"]).status.code(), Some(1));
    assert_eq!(hlito(&["poly", "--m", "40", "--n", "30"]).status.code(), Some(1));
    assert_eq!(hlito(&["nonsense"]).status.code(), Some(1));
    assert_eq!(hlito(&["expand", "--monomial", "1"]).status.code(), Some(1));
    assert_eq!(hlito(&["lattice", "--n", "1"]).status.code(), Some(1));
    assert_eq!(hlito(&["poly", "--threads", "0"]).status.code(), Some(1));
    assert_eq!(hlito_with_seed("abc", &["simulate"]).status.code(), Some(1));
    assert_eq!(hlito(&["--help"]).status.code(), Some(0));
}

#[test]
fn failed_check_exits_two() {
    // 40 levels cannot resolve the kernel at u = 0.8
    let out = hlito(&["mehler", "--u", "0.8", "--random-points", "4", "--check"]);
    assert_eq!(out.status.code(), Some(2));
    let ok = hlito(&["mehler", "--u", "0.3", "--random-points", "4", "--check"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(hlito(&["spectrum", "--max-level", "5", "--check"]).status.code(), Some(0));
    assert_eq!(hlito(&["lattice", "--check"]).status.code(), Some(0));
    assert_eq!(hlito(&["ortho", "--max-level", "3", "--check"]).status.code(), Some(0));
}

#[test]
fn config_file_sits_below_explicit_flags() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# semigroup run\nmode = semigroup\npaths = 300\nmax_level = 1\nseed = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = json(&hlito(&["--config", cfg, "simulate"]));
    assert_eq!(from_file["config"]["paths"], 300);
    assert_eq!(from_file["config"]["mode"], "semigroup");
    let overridden = json(&hlito(&["simulate", "--config", cfg, "--paths", "200"]));
    assert_eq!(overridden["config"]["paths"], 200);
    assert_eq!(overridden["config"]["seed"], 4);
    assert_eq!(hlito(&["--config", "/nonexistent/x.cfg", "poly"]).status.code(), Some(1));
}

#[test]
fn seed_env_overrides_flag() {
    let args = ["simulate", "--mode", "semigroup", "--paths", "500", "--seed", "1"];
    let a = hlito_with_seed("99", &args);
    let b = hlito(&["simulate", "--mode", "semigroup", "--paths", "500", "--seed", "99"]);
    assert_eq!(json(&a)["config"]["seed"], 99);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, hlito(&args).stdout);
}

#[test]
fn out_flag_writes_file_only() {
    let path = scratch("spectrum.json");
    let out = hlito(&["spectrum", "--max-level", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["spectrum"].as_array().unwrap().len(), 6);
}

#[test]
fn ensemble_files_round_trip() {
    let bin = scratch("paths.bin");
    let csv = scratch("paths.csv");
    let base = ["simulate", "--mode", "ou", "--paths", "7", "--steps", "5", "--seed", "3"];
    let mut args = base.to_vec();
    args.extend(["--ensemble", bin.to_str().unwrap()]);
    assert_eq!(hlito(&args).status.code(), Some(0));
    let ensemble = read_ensemble(std::fs::File::open(&bin).unwrap()).unwrap();
    assert_eq!((ensemble.n_paths(), ensemble.n_steps(), ensemble.seed), (7, 5, 3));

    let mut args = base.to_vec();
    args.extend(["--ensemble", csv.to_str().unwrap(), "--ensemble-format", "csv"]);
    assert_eq!(hlito(&args).status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 7 * 6);
    let last: Vec<f64> = text.lines().last().unwrap().split(',').skip(3).map(|s| s.parse().unwrap()).collect();
    let z = ensemble.paths[6][5];
    assert_eq!((last[0], last[1]), (z.re, z.im));
}

#[test]
fn csv_outputs_carry_provenance_header() {
    let out = hlito(&["ortho", "--max-level", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# hlito "));
    assert!(lines.next().unwrap().starts_with("# config {"));
    assert_eq!(lines.next().unwrap(), "m,n,k,l,re,im,expected");
    assert_eq!(lines.count(), 9);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["expand", "--generating", "0.3,0.2", "--max-level", "6"];
    let one = hlito(&[&args[..], &["--threads", "1"]].concat());
    let four = hlito(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
}
