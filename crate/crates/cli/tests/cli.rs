use std::io::Write;
use std::process::{Command, Output, Stdio};

fn tracemap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracemap")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tracemap"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn levels_check_passes() {
    let o = tracemap(&["table", "levels", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(",ok")).count(), 5);
}

#[test]
fn slices_o4_row() {
    let o = tracemap(&["table", "slices"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let o4: Vec<&str> = out.lines().filter(|l| l.starts_with("O4,") && !l.contains("total")).collect();
    assert_eq!(o4, ["O4,1/3,6", "O4,1/4,4", "O4,1/6,6"]);
}

#[test]
fn data_dir_override_and_mismatch_exit() {
    let dir = std::env::temp_dir().join(format!("tracemap-data-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("levels.csv"), "orbit,size,level\nO4,16,1/3\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_tracemap"))
        .args(["table", "levels", "--check"])
        .env("TRACEMAP_DATA_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("O4,16 | 1/3,16 | 1/2,mismatch"));
    std::fs::write(dir.join("levels.csv"), "orbit,size,level\nO4,16,1/2\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_tracemap"))
        .args(["table", "levels", "--check"])
        .env("TRACEMAP_DATA_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tracemap(&["figure-data", "O7"]).status.code(), Some(2));
    assert_eq!(tracemap(&["table", "nope"]).status.code(), Some(2));
    assert_eq!(tracemap(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(tracemap(&["orbit", "1/2, 1/2"]).status.code(), Some(2));
    assert_eq!(tracemap(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn resource_cap_exit_three() {
    let o = tracemap(&["orbit", "O3", "--bound", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.contains("\"exhausted\":false"), "{last}");
}

#[test]
fn orbit_footer_and_slice_csv() {
    let o = tracemap(&["orbit", "O4", "--perm-order"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 17);
    let footer: serde_json::Value = serde_json::from_str(lines[16]).unwrap();
    assert_eq!(footer["stats"]["size"], 16);
    assert_eq!(footer["stats"]["level"], "1/2");
    assert_eq!(footer["stats"]["perm_order"], "2^12*3^2");
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["n"], 2);

    let o = tracemap(&["orbit", "O2", "--table", "2"]);
    assert_eq!(stdout(&o), "rho,count\n3/8,8\n1/3,6\n1/4,8\n1/6,6\n1/8,8\n");
}

#[test]
fn classify_jsonl_round_trip() {
    let input = concat!(
        r#"{"n":2,"x":{"1":"1/2","2":"1/2","12":"1/2"}}"#,
        "\n",
        r#"{"n":2,"x":["1/3","1/3","1/3"]}"#,
        "\n\n",
        r#"[{"n":2,"x":["0","0","1/2"]}]"#,
        "\n"
    );
    let o = with_stdin(&["classify", "--deterministic"], input);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(v.len(), 3);
    assert_eq!(v[0]["case"], "finite_group");
    assert_eq!(v[0]["orbit"], "O4");
    assert_eq!(v[1]["case"], "infinite_orbit");
    assert_eq!(v[1]["finite_orbit"], false);
    assert_eq!(v[2]["case"], "axis");
}

#[test]
fn classify_bad_line_is_usage() {
    let o = with_stdin(&["classify"], "{\"n\":2,\"x\":[1]}\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_reports_per_point_errors() {
    // F != 0 is outside the rank-3 classification
    let o = tracemap(&["classify", "--point", "1/2,1/2,1/2,1/2,1/2,1/2,1/3"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["error"].as_str().unwrap().contains("precondition"));
}

#[test]
fn deterministic_across_thread_counts() {
    let a = tracemap(&["orbit", "O3", "--threads", "1"]);
    let b = tracemap(&["orbit", "O3", "--threads", "4"]);
    let c = tracemap(&["orbit", "O3", "--deterministic"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let a = tracemap(&["table", "inventories", "--check", "--threads", "1"]);
    let b = tracemap(&["table", "inventories", "--check", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_suites_pass() {
    let o = tracemap(&["verify", "identities", "presentation", "invariance", "fano", "--samples", "60", "--csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("identities,det(g3) + F = G^2,60,pass"));
    assert!(out.contains("fano,edge (U6;U1) labelled 12,1,pass"));
    assert!(!out.contains(",fail"));
}

#[test]
fn fano_json() {
    let v: serde_json::Value = serde_json::from_slice(&tracemap(&["fano"]).stdout).unwrap();
    assert_eq!(v["fano"]["lines"].as_array().unwrap().len(), 7);
    assert_eq!(v["sigma7"]["order"], "168");
    assert_eq!(v["sigma7"]["images"][0], serde_json::json!(["U", "(1,5)(2,6)"]));
    let e = v["fano"]["edges"].as_array().unwrap().iter().find(|e| e["a"] == 1 && e["b"] == 6).unwrap();
    assert_eq!(e["label"], "12");
}

#[test]
fn figure_data_rows() {
    for (id, n) in [("O4", 16), ("O2", 36)] {
        let o = tracemap(&["figure-data", id]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(rows.len(), n);
        for r in rows {
            assert_eq!(r.split(',').filter(|c| c.contains('@')).count(), 3, "{r}");
        }
    }
}

#[test]
fn groups_closures() {
    let o = tracemap(&["groups", "BT24", "BO48", "BI120", "BD12", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "group,expected_order,closure_size\nBT24,24,24\nBO48,48,48\nBI120,120,120\nBD12,12,12\n");
}

#[test]
fn gram_of_catalog_point() {
    let o = tracemap(&["gram", "1/2,1/2,1/2,1/2,1/2,1/2,1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["definiteness"]["verdict"], "positive");
    assert!(v["cholesky_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["gram"][0][1], "1/2");
    assert!(v["coxeter"]["kind"].is_string());
}
