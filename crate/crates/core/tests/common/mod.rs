#![allow(dead_code)]

use std::sync::Arc;

use morseward::chain::parse_complex;
use morseward::image::{build_cubical, build_simplicial, frames_filtration, parse_image, DigitalImage, FiltrationSpec, ImageFormat};
use morseward::IntComplex;

pub const NESTED_FRAMES: [&str; 4] = [
    include_str!("../data/nested_frame1.txt"),
    include_str!("../data/nested_frame2.txt"),
    include_str!("../data/nested_frame3.txt"),
    include_str!("../data/nested_frame4.txt"),
];

pub fn nested_frames_image() -> (DigitalImage, FiltrationSpec) {
    let frames: Vec<DigitalImage> =
        NESTED_FRAMES.iter().map(|s| parse_image(s.as_bytes(), ImageFormat::AsciiGrid).unwrap()).collect();
    frames_filtration(&frames).unwrap()
}

pub fn nested_frames() -> Arc<IntComplex> {
    let (img, spec) = nested_frames_image();
    Arc::new(build_simplicial(&img, &spec).unwrap())
}

pub fn ring_image() -> DigitalImage {
    parse_image(include_bytes!("../data/ring.txt"), ImageFormat::AsciiGrid).unwrap()
}

pub fn ring_cubical() -> Arc<IntComplex> {
    let img = ring_image();
    Arc::new(build_cubical(&img, &FiltrationSpec::single(&img)).unwrap())
}

/// `v`, a loop `e` at step 1, `t` with `d(t) = 2e` at step 2.
pub fn torsion_fixture() -> Arc<IntComplex> {
    Arc::new(parse_complex(include_str!("../data/torsion.txt")).unwrap())
}

pub fn torsion_fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/torsion.txt")
}

pub type BarTuple = (usize, usize, Option<usize>, String);

pub fn bar_tuples(bc: &morseward::IntBarcode) -> Vec<BarTuple> {
    bc.bars.iter().map(|b| (b.dim, b.birth, b.death, b.label.clone())).collect()
}
