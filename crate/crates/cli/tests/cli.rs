use std::path::PathBuf;

use assert_cmd::Command;
use brieskorn_lab::Report;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn lab() -> Command {
    Command::cargo_bin("brieskorn-lab").unwrap()
}

fn json_report(args: &[&str]) -> (Report, i32) {
    let out = lab().args(args).arg("--json").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    (Report::from_json(&text).unwrap(), out.status.code().unwrap())
}

fn write_spec(text: &str) -> tempfile::NamedTempFile {
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), text).unwrap();
    file
}

#[test]
fn two_cusp_quartic_matches_golden_file() {
    let out = lab()
        .args(["analyze", "--json", "--input"])
        .arg(spec("two_cusp_quartic.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let expected = std::fs::read_to_string(golden("two_cusp_quartic.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn golden_report_round_trips() {
    let text = std::fs::read_to_string(golden("two_cusp_quartic.json")).unwrap();
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
    let hodge = report.hodge.as_ref().unwrap();
    assert_eq!(hodge[0].jq_dim, 1);
    assert!(hodge[0].hodge_dim < hodge[0].pole_dim);
    assert_eq!(report.alpha_y.as_deref(), Some("5/6"));
}

#[test]
fn cuspidal_cubic_report() {
    let path = spec("cuspidal_cubic.toml");
    let (r, code) = json_report(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.pole.as_ref().unwrap().dims, vec![0, 0, 0]);
    assert_eq!(r.alpha_y.as_deref(), Some("5/6"));
    let bs = r.briancon_skoda.as_ref().unwrap();
    assert!(bs.holds);
    assert!(bs.witness_power.is_some());
    assert!(r.all_checks_pass());
}

#[test]
fn fermat_cubic_hodge_equals_pole() {
    let path = spec("fermat_cubic.toml");
    let (r, code) = json_report(&["hodge", "--input", path.to_str().unwrap(), "--q-max", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r.smooth, Some(true));
    assert_eq!(r.alpha_y.as_deref(), Some("inf"));
    let dims: Vec<(usize, usize)> = r
        .hodge
        .unwrap()
        .iter()
        .map(|h| (h.hodge_dim, h.pole_dim))
        .collect();
    assert_eq!(dims, vec![(1, 1), (2, 2), (2, 2)]);
}

#[test]
fn every_shipped_spec_analyzes_cleanly() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let (r, code) = json_report(&["analyze", "--input", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {:?}", path.display(), r.checks);
        assert!(r.pole.is_some());
        count += 1;
    }
    assert!(count >= 10);
}

#[test]
fn text_and_json_agree() {
    let path = spec("fermat_quartic_curve.toml");
    let (r, _) = json_report(&["pole", "--input", path.to_str().unwrap()]);
    let text = lab()
        .args(["pole", "--input", path.to_str().unwrap()])
        .output()
        .unwrap()
        .stdout;
    let text = String::from_utf8(text).unwrap();
    let pole = r.pole.unwrap();
    for (q, (dim, cert)) in pole.dims.iter().zip(&pole.certificates).enumerate() {
        let row = text
            .lines()
            .find(|l| l.trim_start().starts_with(&format!("{q}  P^")))
            .unwrap();
        let cells: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(cells[2], cert.k.to_string());
        assert_eq!(cells[3], dim.to_string());
    }
}

#[test]
fn subcommands_fill_their_sections() {
    let path = spec("tjurina_jump_family.toml");
    let p = path.to_str().unwrap();
    let (r, code) = json_report(&["jacobian", "--input", p]);
    assert_eq!(code, 0);
    assert_eq!(r.jacobian.unwrap().tjurina, Some(12));
    assert!(r.pole.is_none());
    let (r, _) = json_report(&["milnor", "--input", p]);
    assert_eq!(r.milnor.unwrap().eigenspaces.len(), 5);
    let (r, _) = json_report(&["bs", "--input", p]);
    assert!(r.briancon_skoda.unwrap().holds);
    let (r, code) = json_report(&["family", "--input", p, "--samples", "0,1,-1/2"]);
    assert_eq!(code, 0);
    let fam = r.family.unwrap();
    assert_eq!(fam.samples, vec!["0", "1", "-1/2"]);
    assert_eq!(fam.tjurina, vec![Some(12), Some(11), Some(11)]);
    assert_eq!(fam.tjurina_jumps, vec!["0"]);
}

#[test]
fn fermat_pencil_connection() {
    let path = spec("fermat_cubic.toml");
    let (r, code) = json_report(&["family", "--input", path.to_str().unwrap(), "--q-max", "1"]);
    assert_eq!(code, 0);
    let nabla = &r.family.unwrap().nabla;
    assert_eq!(nabla.len(), 2);
    assert!(nabla[0].matrix.is_empty() || nabla[0].matrix.iter().flatten().all(|e| e == "0"));
    assert_eq!(nabla[1].matrix, vec![vec!["-1".to_string()]]);
    assert!(nabla[1].power_independent && nabla[1].well_defined);
}

#[test]
fn malformed_polynomial_exits_1_with_position() {
    let f = write_spec("variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^3 + 2y\"\n");
    let out = lab().args(["analyze", "--input"]).arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position 7"), "{err}");
}

#[test]
fn input_errors_exit_1() {
    let cases = [
        "variables = [\"x\", \"y\"]\npolynomial = \"x^2 + y^2\"\n",
        "variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^2*y\"\n",
        "variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^3 + y\"\n",
        "variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^3 + y^2*z\"\n[[singular_points]]\npoint = [\"0\", \"1\", \"0\"]\nweights = [\"1/3\", \"1/2\"]\n",
        "variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^2*z + y^3\"\n[family]\ndirection = \"-y^3\"\nsamples = [\"0\", \"1\"]\n",
    ];
    for text in cases {
        let f = write_spec(text);
        let out = lab().args(["analyze", "--input"]).arg(f.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{text}");
        assert!(out.stdout.is_empty());
    }
    lab().args(["analyze", "--input", "/nonexistent.toml"]).assert().code(1);
}

#[test]
fn hodge_needs_charts_when_singular() {
    let f = write_spec("variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^3 + y^2*z\"\n");
    lab().args(["hodge", "--input"]).arg(f.path()).assert().code(1);
    lab().args(["family", "--input"]).arg(f.path()).assert().code(1);
    let (r, code) = json_report(&["analyze", "--input", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(r.hodge.is_none());
    assert!(r.notes.iter().any(|n| n.contains("hodge")));
}

#[test]
fn failed_stabilization_exits_2() {
    let path = spec("fermat_quartic_surface.toml");
    let out = lab()
        .args(["pole", "--json", "--stab-window", "2", "--stab-max", "2", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let r = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!r.all_checks_pass());
    assert!(r.notes.iter().any(|n| n.contains("no stabilization")));
}

#[test]
fn timing_is_opt_in() {
    let path = spec("fermat_cubic.toml");
    let (r, _) = json_report(&["bs", "--input", path.to_str().unwrap()]);
    assert_eq!(r.timing_ms, None);
    let (r, _) = json_report(&["bs", "--timing", "--threads", "1", "--input", path.to_str().unwrap()]);
    assert!(r.timing_ms.is_some());
}

#[test]
fn reads_spec_from_stdin() {
    let out = lab()
        .args(["jacobian", "--input", "-"])
        .write_stdin("variables = [\"x\", \"y\", \"z\"]\npolynomial = \"x^3 + y^3 + z^3\"\n")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("smooth  true"));
}
