use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nclock(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_nclock"));
    c.args(args).env_remove("NCLOCK_OUT_DIR");
    if let Some(d) = out_dir {
        c.env("NCLOCK_OUT_DIR", d);
    }
    c.output().unwrap()
}

fn json_of(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn gen_then_reports() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("v.json");
    let f = field.to_str().unwrap();
    let o = nclock(&["gen", "--scenario", "vortex", "--epsilon", "0.015625", "--theta", "0.2", "--out", f], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let e = json_of(&nclock(&["energy", f, "--vortices", "1"], None));
    assert_eq!(e["n_states"], 31);
    assert_eq!(e["sites"], 64 * 64);
    assert!(e["bv_lower_bound"].as_f64().unwrap() <= e["rescaled_energy"].as_f64().unwrap());

    let v = json_of(&nclock(&["vorticity", f], None));
    assert_eq!(v["total_charge"], 1);
    assert_eq!(v["atoms"].as_array().unwrap().len(), 1);

    assert_eq!(json_of(&nclock(&["flatnorm", f, f], None))["flat_distance"], 0.0);
    let to_zero = json_of(&nclock(&["flatnorm", f], None))["flat_distance"].as_f64().unwrap();
    assert!((to_zero - 0.5).abs() < 0.02, "{to_zero}");
}

#[test]
fn random_fields_follow_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let p = dir.path().join(name);
        let args = ["--seed", seed, "gen", "--scenario", "random", "--epsilon", "0.125", "--theta", "0.5"];
        let o = nclock(&[&args[..], &["--out", p.to_str().unwrap()]].concat(), None);
        assert!(o.status.success());
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("7", "a.nclk"), run("7", "b.nclk"));
    assert_ne!(run("7", "a.nclk"), run("8", "c.nclk"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = nclock(&["limits", "--refinement", "256"], Some(dir.path()));
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(dir.path().join("limits.json")).unwrap()).unwrap();
    assert!((v["anisotropic_dirichlet"].as_f64().unwrap() - 3.5).abs() < 0.05);
    assert_eq!(v["cantor_part"], 0.0);
}

#[test]
fn recover_flat_and_with_vortices() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.nclk");
    let o = nclock(
        &["recover", "--epsilon", "0.001953125", "--theta", "0.2", "--lambda", "0.25", "--angle", "1.0", "--out", flat.to_str().unwrap()],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_of(&nclock(&["vorticity", flat.to_str().unwrap()], None));
    assert_eq!(v["total_variation"], 0);

    let glued = dir.path().join("glued.nclk");
    let o = nclock(
        &[
            "recover", "--epsilon", "0.0009765625", "--theta", "0.2", "--lambda", "0.125", "--eta", "1.5", "--half",
            "0.75", "--vortex", "0,0,1", "--out", glued.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_of(&nclock(&["vorticity", glued.to_str().unwrap()], None));
    assert_eq!(v["total_charge"], 1);
}

#[test]
fn sweep_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let good = write(
        "good.json",
        r#"{"epsilon_list": [0.03125, 0.015625], "theta_rule": {"rule": "proportional", "c": 10},
            "scenario": {"kind": "interface", "jump": 1.5707963267948966, "length": 0.5}}"#,
    );
    let o = nclock(&["sweep", good.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("epsilon,theta,regime_tag,rescaled_energy,excess_energy,M,total_vorticity,flat_distance,seconds\n"));

    let failing = write(
        "failing.json",
        r#"{"epsilon_list": [0.03125], "theta_rule": {"rule": "fixed", "value": 0.2},
            "scenario": {"kind": "combined"}, "lambda": 0.3}"#,
    );
    let csv = dir.path().join("rows.csv");
    let o = nclock(&["sweep", failing.to_str().unwrap(), "--out", csv.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(std::fs::read_to_string(&csv).unwrap().contains(",NA,"));

    let empty = write(
        "empty.json",
        r#"{"epsilon_list": [], "theta_rule": {"rule": "fixed", "value": 0.2}, "scenario": {"kind": "combined"}}"#,
    );
    assert_eq!(nclock(&["sweep", empty.to_str().unwrap()], None).status.code(), Some(1));
    assert_eq!(nclock(&["sweep", "/nonexistent/config.json"], None).status.code(), Some(1));
    assert_eq!(nclock(&["energy"], None).status.code(), Some(1));
    assert_eq!(nclock(&["--help"], None).status.code(), Some(0));
}
