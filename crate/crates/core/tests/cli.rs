use std::path::PathBuf;
use std::process::{Command, Output};

use tropsurf::build_complex;
use tropsurf::topology::{euler_characteristic, orientability, Orientation};
use tropsurf::tropical::attach_constants;
use tropsurf::Fixture;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.trs"))
}

fn tropsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropsurf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn version_is_the_format_version() {
    let o = tropsurf(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "tropsurf 1");
}

#[test]
fn validate_octahedron() {
    let o = tropsurf(&["validate", &path("octahedron")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid: 6 vertices, 12 edges, 8 facets\n");
}

#[test]
fn classify_torus_with_constants_in_file() {
    let o = tropsurf(&["classify", &path("torus7_ones")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verdict: Tropical\n"));
}

#[test]
fn classify_without_constants_is_an_input_error() {
    let o = tropsurf(&["classify", &path("torus7")]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn malformed_fixture_gives_one_line_diagnostic() {
    let dir = std::env::temp_dir().join(format!("tropsurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.trs");
    std::fs::write(&bad, "tropsurf 1\nvertices 3\nedge 0 0 1\nedge 1 0 2\nedge 2 1 2\nfacet 0 0 0 1 0 1 2\n").unwrap();
    let o = tropsurf(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert_eq!(String::from_utf8(o.stderr).unwrap().lines().count(), 1);
}

#[test]
fn exhausted_search_exits_two() {
    let o = tropsurf(&["search", &path("genus2"), "--bound", "0", "--mode", "tropical"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "exhausted: 0 witnesses\n");
}

#[test]
fn search_witnesses_append_to_the_fixture() {
    let o = tropsurf(&["search", &path("pillow"), "--bound", "1", "--all", "--deterministic"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let base = std::fs::read_to_string(fixture("pillow")).unwrap();
    let blocks: Vec<&str> = text.split("# witness ").skip(1).collect();
    assert!(!blocks.is_empty());
    for block in blocks {
        let lines: String = block.lines().skip(1).filter(|l| l.starts_with("alpha")).map(|l| format!("{l}\n")).collect();
        let f = Fixture::parse(&format!("{base}{lines}")).unwrap();
        let w = attach_constants(f.complex, &f.alpha).unwrap();
        assert_eq!(w.classify().verdict.name(), "Tropical");
    }
}

#[test]
fn report_flag_switches_to_key_value_lines() {
    let o = tropsurf(&["--report", "search", &path("genus2"), "--bound", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.contains('=')));
    assert!(text.contains("exhausted=true\n"));
    assert!(text.contains("witnesses=0\n"));
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["sheaf", &path("torus7_ones")];
    assert_eq!(tropsurf(&args).stdout, tropsurf(&args).stdout);
    let args = ["--report", "search", &path("pillow"), "--bound", "1", "--all", "--deterministic", "--threads", "3"];
    let serial = ["--report", "search", &path("pillow"), "--bound", "1", "--all", "--deterministic"];
    assert_eq!(tropsurf(&args).stdout, tropsurf(&serial).stdout);
}

#[test]
fn sheaf_emits_section_lines() {
    let o = tropsurf(&["sheaf", &path("torus7_ones")]);
    let text = stdout(&o);
    let sections: Vec<&str> = text.lines().filter(|l| l.starts_with("section ")).collect();
    // two sections on a 21-edge torus
    assert_eq!(sections.len(), 2 * 21);
    assert!(text.contains("sections_rank: 2\n"));
}

/// An at-most-one structure on the pillow that is not tropical.
fn semidefinite_pillow() -> PathBuf {
    let o = tropsurf(&["search", &path("pillow"), "--bound", "1", "--mode", "at-most-one", "--all", "--deterministic"]);
    let base = std::fs::read_to_string(fixture("pillow")).unwrap();
    let text = stdout(&o);
    for block in text.split("# witness ").skip(1) {
        let lines: String = block.lines().skip(1).filter(|l| l.starts_with("alpha")).map(|l| format!("{l}\n")).collect();
        let candidate = format!("{base}{lines}");
        let f = Fixture::parse(&candidate).unwrap();
        if attach_constants(f.complex, &f.alpha).unwrap().classify().verdict.name() != "Tropical" {
            let dir = std::env::temp_dir().join(format!("tropsurf-cli-blowup-{}", std::process::id()));
            std::fs::create_dir_all(&dir).unwrap();
            let file = dir.join("pillow.trs");
            std::fs::write(&file, candidate).unwrap();
            return file;
        }
    }
    panic!("no semidefinite witness on the pillow");
}

#[test]
fn blowup_output_is_a_tropical_fixture() {
    let input = semidefinite_pillow();
    let o = tropsurf(&["blowup", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("# blowup v=")));
    let f = Fixture::parse(&text).unwrap();
    let w = attach_constants(f.complex, &f.alpha).unwrap();
    assert_eq!(w.classify().verdict.name(), "Tropical");
}

#[test]
fn cover_output_parses_as_an_orientable_double() {
    let o = tropsurf(&["cover", &path("klein8"), "--auto"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let cover = build_complex(&text).unwrap();
    let base = build_complex(&std::fs::read_to_string(fixture("klein8")).unwrap()).unwrap();
    assert_eq!(cover.facet_count(), 2 * base.facet_count());
    assert_eq!(euler_characteristic(&cover), 2 * euler_characteristic(&base));
    let all: Vec<usize> = (0..cover.facet_count()).collect();
    assert!(matches!(orientability(&cover, &all).unwrap(), Orientation::Orientable { .. }));
}

#[test]
fn recognize_auto_round_trips_through_a_file() {
    let o = tropsurf(&["recognize", &path("torus_two_fins"), "--auto"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let decomposition: String =
        text.lines().filter(|l| l.starts_with("sigma ") || l.starts_with("fin ") && !l.contains(':')).map(|l| format!("{l}\n")).collect();
    let dir = std::env::temp_dir().join(format!("tropsurf-cli-dec-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("d.txt");
    std::fs::write(&file, decomposition).unwrap();
    let o = tropsurf(&["--report", "recognize", &path("torus_two_fins"), "--decomposition", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid=yes\n"));
}

#[test]
fn recognize_rejects_a_bad_fin_order() {
    let dir = std::env::temp_dir().join(format!("tropsurf-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("d.txt");
    std::fs::write(&file, "sigma 0 1 2 3 4 5 6 7 8 9 10 11 12 13\nfin 1 16\nfin 2 14 15\n").unwrap();
    let o = tropsurf(&["recognize", &path("torus_two_fins"), "--decomposition", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("valid: no\n"));
}

#[test]
fn recognize_needs_exactly_one_source() {
    assert_eq!(tropsurf(&["recognize", &path("torus_fin")]).status.code(), Some(1));
}

#[test]
fn obstruction_report_on_a_sphere() {
    let o = tropsurf(&["--report", "report", &path("octahedron"), "--bound", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("certificate=not-applicable\n"));
    assert!(text.contains("tropical.witnesses=1\n"));
    assert!(text.contains("consistent=yes\n"));
}
