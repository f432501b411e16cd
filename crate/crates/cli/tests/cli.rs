use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use morseward::image::{build_simplicial, parse_image, sweep_filtration, Axis, ImageFormat};
use morseward::oracle::direct_persistent_group_limited;
use morseward::persist::Barcode;
use num_bigint::BigInt;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn nested_frames() -> Vec<PathBuf> {
    (1..=4).map(|k| data(&format!("nested_frame{k}.txt"))).collect()
}

fn morseward<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_morseward")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn with_inputs(cmd: &[&str], inputs: &[PathBuf], rest: &[&str]) -> Vec<String> {
    cmd.iter().map(|s| s.to_string()).chain(inputs.iter().map(|p| p.display().to_string())).chain(rest.iter().map(|s| s.to_string())).collect()
}

/// Two one-pixel holes, enclosed by rows 2 and 7.
const TWO_HOLES: &str = "#####\n#.###\n#####\n#####\n#####\n#####\n###.#\n#####\n#####\n#####\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn nested_frames_info_counts() {
    let text = stdout(&morseward(with_inputs(&["info"], &nested_frames(), &[])));
    assert_eq!(text.lines().next(), Some("203 vertices, 408 edges, 208 triangles"));
    assert!(text.contains("Euler characteristic 3"));
}

#[test]
fn nested_frames_persist_session_output() {
    let text = stdout(&morseward(with_inputs(&["persist"], &nested_frames(), &["--query", "1,4,0", "--query", "2,4,1"])));
    let expected = "Persistent Homology H^{1,4}_0\nComponent Z\nComponent Z\nComponent Z\nComponent Z\n\
                    Persistent Homology H^{2,4}_1\nComponent Z\nComponent Z\n";
    assert_eq!(text, expected);
}

#[test]
fn zero_step_query_is_empty_group() {
    let text = stdout(&morseward(with_inputs(&["persist"], &nested_frames(), &["--query", "0,3,1"])));
    assert_eq!(text, "Persistent Homology H^{0,3}_1\n");
}

#[test]
fn skip_reduction_gives_identical_output() {
    let queries = ["--query", "all", "--query", "1,2,3,1"];
    let reduced = stdout(&morseward(with_inputs(&["persist"], &nested_frames(), &queries)));
    let mut flags = queries.to_vec();
    flags.push("--skip-reduction");
    let direct = stdout(&morseward(with_inputs(&["persist"], &nested_frames(), &flags)));
    assert_eq!(reduced, direct);
    assert!(reduced.contains("Persistent Homology H^{1,2,3}_1"));
}

#[test]
fn nested_frames_reduce_statistics() {
    let text = stdout(&morseward(with_inputs(&["reduce"], &nested_frames(), &["--dump-dvf"])));
    assert!(text.starts_with("d1: 187 vectors\n"));
    assert!(text.contains("critical: 16 vertices, 14 edges, 1 triangles"));
    let field = text.lines().find(|l| l.starts_with("field d1: ")).unwrap();
    assert_eq!(field.matches(';').count(), 187);
}

#[test]
fn ring_cubical_info() {
    let text = stdout(&morseward(["info".to_string(), "--complex".into(), "cubical".into(), data("ring.txt").display().to_string()]));
    assert_eq!(text.lines().next(), Some("16 vertices, 24 edges, 8 squares"));
}

#[test]
fn empty_image_has_zero_counts() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "empty.txt", "...\n...\n");
    let text = stdout(&morseward(with_inputs(&["info"], std::slice::from_ref(&p), &[])));
    assert!(text.starts_with("0 vertices, 0 edges, 0 triangles\n"));
    let bc = stdout(&morseward(with_inputs(&["barcode"], &[p], &[])));
    assert!(Barcode::<BigInt>::from_json_str(&bc).unwrap().bars.is_empty());
}

#[test]
fn single_pixel_has_one_infinite_bar() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "dot.txt", "#\n");
    let bc: Barcode<BigInt> = Barcode::from_json_str(&stdout(&morseward(with_inputs(&["barcode"], &[p], &[])))).unwrap();
    assert_eq!(bc.bars.len(), 1);
    assert_eq!((bc.bars[0].dim, bc.bars[0].birth, bc.bars[0].death), (0, 1, None));
}

#[test]
fn torsion_barcode_has_z2_label() {
    let text = stdout(&morseward(["barcode".to_string(), data("torsion.txt").display().to_string()]));
    assert!(text.contains("\"label\": \"Z_2\""));
}

#[test]
fn barcode_json_round_trips_through_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("bars.json");
    let args = with_inputs(&["barcode"], &nested_frames(), &["--emit-generators", "--out", out.to_str().unwrap()]);
    assert_eq!(stdout(&morseward(args)), "");
    let text = std::fs::read_to_string(&out).unwrap();
    let bc: Barcode<BigInt> = Barcode::from_json_str(&text).unwrap();
    assert_eq!(bc.to_json_string().trim_end(), text.trim_end());
    assert!(bc.bars.iter().all(|b| b.generator.is_some()));
}

#[test]
fn svg_barcode() {
    let text = stdout(&morseward(["barcode".to_string(), "--format".into(), "svg".into(), data("torsion.txt").display().to_string()]));
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
}

#[test]
fn generators_live_in_the_original_complex() {
    let text = stdout(&morseward(with_inputs(&["generators"], &nested_frames(), &["--query", "2,4,1"])));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "Persistent Homology H^{2,4}_1");
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().all(|l| l.starts_with("Component Z: ") && l.contains("*<")));
}

#[test]
fn two_hole_row_sweep() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "holes.txt", TWO_HOLES);
    let args = with_inputs(&["barcode"], &[p], &["--filtration", "rows", "--steps", "10"]);
    let bc: Barcode<BigInt> = Barcode::from_json_str(&stdout(&morseward(args))).unwrap();
    let holes: Vec<(usize, Option<usize>)> = bc.bars_in_degree(1).map(|b| (b.birth, b.death)).collect();
    assert_eq!(holes, vec![(3, None), (8, None)]);

    // independent check on the unreduced complex
    let img = parse_image(TWO_HOLES.as_bytes(), ImageFormat::AsciiGrid).unwrap();
    let c = build_simplicial::<BigInt>(&img, &sweep_filtration(&img, Axis::Rows, 10).unwrap()).unwrap();
    let ranks: Vec<usize> = (1..=10).map(|i| direct_persistent_group_limited(&c, i, 10, 1, 2000).unwrap().rank).collect();
    assert_eq!(ranks, vec![0, 0, 1, 1, 1, 1, 1, 2, 2, 2]);
}

#[test]
fn gray_filtration_runs() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "g.pgm", "P2\n3 3\n8\n0 0 0\n0 3 0\n0 0 0\n");
    let text = stdout(&morseward(with_inputs(&["homology"], &[p], &["--filtration", "gray", "--steps", "2"])));
    assert_eq!(text, "step 1: H0 = Z, H1 = Z, H2 = 0\nstep 2: H0 = Z, H1 = 0, H2 = 0\n");
}

#[test]
fn exit_codes() {
    let code = |args: Vec<String>| morseward(args).status.code();
    assert_eq!(code(vec!["--help".into()]), Some(0));
    assert_eq!(code(vec!["--version".into()]), Some(0));
    assert_eq!(code(vec!["frobnicate".into()]), Some(1));
    assert_eq!(code(with_inputs(&["persist"], &nested_frames(), &["--query", "3,2,0"])), Some(1));
    assert_eq!(code(with_inputs(&["persist"], &nested_frames(), &["--format", "svg"])), Some(1));
    assert_eq!(code(with_inputs(&["info"], &nested_frames(), &["--filtration", "rows"])), Some(1));
    assert_eq!(code(vec!["info".into(), "/nonexistent/image.pgm".into()]), Some(2));

    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "#x#\n");
    assert_eq!(code(with_inputs(&["info"], &[bad], &[])), Some(2));
    let bad_complex = write(&dir, "bad.cx", "steps 1\ndegrees 2\ncell 0 1 1 -\nbd 0 7 1\n");
    assert_eq!(code(with_inputs(&["info"], &[bad_complex], &[])), Some(2));
    let out = dir.path().join("missing-dir/out.json");
    assert_eq!(code(with_inputs(&["barcode"], &[data("torsion.txt")], &["--out", out.to_str().unwrap()])), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let one = stdout(&morseward(with_inputs(&["barcode"], &nested_frames(), &[])));
    let four = stdout(&morseward(with_inputs(&["barcode"], &nested_frames(), &["--threads", "4"])));
    assert_eq!(one, four);
}
