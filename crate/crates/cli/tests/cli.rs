//! End-to-end runs of the binary: golden reports, exit statuses, fixture
//! round-trips and determinism. Set `UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::Path;
use std::process::Command;

use cobarkit::fixture::{parse_document, parse_fixture, serialize, Fixture};
use cobarkit_core::simplicial::builtins::{by_name, map_by_name};
use cobarkit_core::Field;

const GOLDEN: &[(&str, &str)] = &[
    ("chain_homology_torus", "chain-homology --fixture fixtures/torus.sset --max-degree 3"),
    ("chain_homology_rp2_f2", "chain-homology --fixture fixtures/rp2.sset --field fp:2 --max-degree 2"),
    ("cobar_homology_sphere2", "cobar-homology --fixture sphere2_min --max-degree 6"),
    ("cobar_homology_sphere2_human", "--format human cobar-homology --fixture sphere2_min --field fp:2 --max-degree 4"),
    ("fundamental_bialgebra_rp2", "fundamental-bialgebra --fixture rp2_presentation --field fp:2"),
    ("localize_s1", "localize --fixture s1"),
    ("localized_cobar_s1", "localized-cobar --fixture s1 --max-degree 1 --max-length 3"),
    ("check_omega_iota", "check --notion omega --map iota_s1 --max-degree 2"),
    ("check_omega_hat_iota", "check --notion omega-hat --map iota_s1 --max-degree 2"),
    ("check_pi1_collapse_rp2", "check --notion pi1-r --map collapse(rp2_presentation) --field fp:2 --max-degree 2"),
    ("check_r_eq_meridian", "check --notion r-eq --map fixtures/circle_into_torus.map --max-degree 2"),
    ("verify_phi_psi_s1_localized", "verify-phi-psi --fixture s1_localized --field fp:2"),
    ("verify_appendix_rp2_f3", "verify-appendix --fixture rp2_presentation --field fp:3 --max-degree 2 --max-length 2"),
    ("bar_cobar_exterior", "bar-cobar-check --algebra exterior --max-degree 4"),
    ("validate_coalgebra", "validate --fixture fixtures/circle_f2.coalg"),
    ("parse_error", "chain-homology --fixture tests/data/bad_face.sset"),
];

fn run(args: &str) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_cobarkit"))
        .args(args.split_whitespace())
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8 output"), out.status.code().expect("exit code"))
}

#[test]
fn golden_reports() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut stale = Vec::new();
    for (name, args) in GOLDEN {
        let (out, _) = run(args);
        let ext = if args.contains("human") { "txt" } else { "jsonl" };
        let path = dir.join(format!("{name}.{ext}"));
        if update {
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if want != out {
            eprintln!("--- {name}: expected\n{want}--- got\n{out}");
            stale.push(*name);
        }
    }
    assert!(stale.is_empty(), "golden mismatches: {stale:?}");
}

#[test]
fn structured_lines_follow_the_schema() {
    for (name, args) in GOLDEN.iter().filter(|(_, a)| !a.contains("human")) {
        let (out, code) = run(args);
        let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines[0]["record"], "header", "{name}");
        assert_eq!(lines[0]["schema"], cobarkit::report::SCHEMA);
        let last = lines.last().unwrap();
        assert_eq!(last["record"], "summary", "{name}");
        assert_eq!(last["exit"], code, "{name}");
        assert!(lines.iter().all(|l| l["record"] != "timing"), "{name}");
    }
}

#[test]
fn exit_statuses() {
    assert_eq!(run("chain-homology --fixture s1").1, 0);
    // inconclusive still exits 0
    let (out, code) = run("verify-phi-psi --fixture s1_localized --budget 1");
    assert!(out.ends_with("{\"exit\":0,\"record\":\"summary\",\"status\":\"inconclusive\"}\n"), "{out}");
    assert_eq!(code, 0);
    assert_eq!(run("check --notion omega --map iota_s1 --max-degree 2").1, 1);
    assert_eq!(run("validate --fixture tests/data/not_simplicial.sset").1, 1);
    assert_eq!(run("validate --fixture nerve_j").1, 1);
    assert_eq!(run("chain-homology --fixture no_such_space").1, 2);
    assert_eq!(run("chain-homology --fixture tests/data/bad_face.sset").1, 2);
    assert_eq!(run("chain-homology --no-such-flag").1, 2);
    assert_eq!(run("check --notion pi1-r --fixture s1").1, 2);
}

#[test]
fn parse_errors_carry_line_and_column() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/bad_face.sset")).unwrap();
    let e = parse_document(&text, (Field::Rationals, 3)).unwrap_err();
    assert_eq!((e.line, e.column), (4, 31));
    let e = parse_document("level 2\nsset x\n  simplex one *\nend\n", (Field::Rationals, 3)).unwrap_err();
    assert_eq!((e.line, e.column), (3, 11));
    let e = parse_document("sset x\n  simplex 0 \"*\"\n", (Field::Rationals, 3)).unwrap_err();
    assert_eq!(e.line, 1);
    assert!(e.message.contains("not closed"), "{e}");
}

#[test]
fn timing_is_opt_in() {
    let (plain, _) = run("chain-homology --fixture s1");
    let (timed, _) = run("--timing chain-homology --fixture s1");
    assert!(!plain.contains("\"timing\""));
    assert!(timed.contains("\"record\":\"timing\""));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        "check --notion pi1-r --map collapse(rp2_presentation) --field fp:2 --max-degree 2",
        "verify-appendix --fixture wedge(s1,s1) --field fp:3 --max-degree 2 --max-length 2",
        "localized-cobar --fixture s1_localized --max-degree 1 --max-length 2",
    ] {
        assert_eq!(run(args), run(args), "{args}");
    }
}

fn round_trip(f: &Fixture) {
    let text = serialize(f);
    let g = parse_fixture(&text, (Field::Rationals, 3)).unwrap_or_else(|e| panic!("{}: {e}\n{text}", f.name()));
    assert_eq!(serialize(&g), text, "{}", f.name());
    match (f, &g) {
        (Fixture::SSet(x), Fixture::SSet(y)) => assert_eq!(x.simplices, y.simplices),
        (Fixture::Map(a), Fixture::Map(b)) => {
            assert_eq!(a.images, b.images);
            assert_eq!(a.source.simplices, b.source.simplices);
        }
        (Fixture::Coalgebra(a), Fixture::Coalgebra(b)) => assert_eq!(a.levels, b.levels),
        _ => panic!("{} changed kind", f.name()),
    }
}

#[test]
fn every_fixture_round_trips() {
    let names = ["pt", "s1", "s1_localized", "sphere2_min", "rp2", "rp2_presentation", "nerve_j", "wedge(s1,s1)", "boundary_delta(3)"];
    for n in names {
        round_trip(&Fixture::SSet(by_name(n, 3).unwrap()));
    }
    for n in ["iota_s1", "collapse(rp2)", "id(sphere2_min)", "collapse_sphere2"] {
        round_trip(&Fixture::Map(map_by_name(n, 3).unwrap()));
    }
    for f in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
        let c = cobarkit_core::coalgebra::chains_coalgebra(&by_name("rp2", 3).unwrap(), f, 3).unwrap();
        round_trip(&Fixture::Coalgebra(c));
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(files.len() >= 4);
    for p in files {
        let text = std::fs::read_to_string(&p).unwrap();
        let f = parse_fixture(&text, (Field::Rationals, 3)).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        round_trip(&f);
    }
}
