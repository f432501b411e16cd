//! Digital images and their filtered cell complexes.
//!
//! Pixel `(r, c)` has row `r` counted from the top. It spans the grid
//! vertices `(r, c)`, `(r, c+1)`, `(r+1, c)` and `(r+1, c+1)`.

mod build;
mod filtration;
mod parse;
mod synthetic;

use thiserror::Error;

pub use build::{build_cubical, build_simplicial, ComplexKind};
pub use filtration::{frames_filtration, graylevel_filtration, sweep_filtration, Axis, FiltrationMode, FiltrationSpec};
pub use parse::{detect_format, parse_image, ImageFormat};
pub use synthetic::ridge_image;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageError {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },
    #[error("illegal character {ch:?} at line {line}, column {column}")]
    IllegalCharacter { line: usize, column: usize, ch: char },
    #[error("pixel value {value} exceeds maxval {maxval}")]
    Value { value: u32, maxval: u16 },
    #[error("frame {frame} drops pixel ({row}, {col}) present in the previous frame")]
    NotNested { frame: usize, row: usize, col: usize },
    #[error("no frames given")]
    NoFrames,
    #[error("{steps} steps requested for an axis of length {len}")]
    Steps { steps: usize, len: usize },
    #[error("thresholds must be a nonempty strictly increasing list")]
    Thresholds,
    #[error("filtration is for a {expected:?} image, got {found:?}")]
    FiltrationShape { expected: (usize, usize), found: (usize, usize) },
}

/// Grid of gray values in `[0, maxval]`, row-major from the top row.
///
/// Dark pixels are foreground: a pixel is foreground when
/// `2 * value < maxval + 1`. Binary images use `maxval = 1`, so value `0`
/// is foreground and `1` background.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitalImage {
    width: usize,
    height: usize,
    maxval: u16,
    pixels: Vec<u16>,
}

impl DigitalImage {
    pub fn new(width: usize, height: usize, maxval: u16, pixels: Vec<u16>) -> Result<Self, ImageError> {
        if pixels.len() != width * height {
            return Err(ImageError::Dimension { expected: format!("{} pixels", width * height), found: pixels.len().to_string() });
        }
        if maxval == 0 {
            return Err(ImageError::Header("maxval must be positive".into()));
        }
        if let Some(&v) = pixels.iter().find(|&&v| v > maxval) {
            return Err(ImageError::Value { value: v as u32, maxval });
        }
        Ok(Self { width, height, maxval, pixels })
    }

    /// Binary image from a foreground mask.
    pub fn from_mask(width: usize, height: usize, mask: &[bool]) -> Result<Self, ImageError> {
        Self::new(width, height, 1, mask.iter().map(|&f| if f { 0 } else { 1 }).collect())
    }

    /// Binary image from rows of `#` (foreground) and `.`.
    pub fn from_rows(rows: &[&str]) -> Result<Self, ImageError> {
        parse_image(rows.join("\n").as_bytes(), ImageFormat::AsciiGrid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.pixels[r * self.width + c]
    }

    pub fn is_foreground(&self, r: usize, c: usize) -> bool {
        2 * self.get(r, c) as u32 <= self.maxval as u32
    }

    pub fn foreground_count(&self) -> usize {
        (0..self.height).flat_map(|r| (0..self.width).map(move |c| (r, c))).filter(|&(r, c)| self.is_foreground(r, c)).count()
    }

    /// `#`/`.` rows separated by newlines.
    pub fn to_ascii(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for r in 0..self.height {
            for c in 0..self.width {
                out.push(if self.is_foreground(r, c) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    /// Plain (P2) PGM.
    pub fn to_pgm_plain(&self) -> String {
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval);
        for row in self.pixels.chunks(self.width.max(1)) {
            let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&vals.join(" "));
            out.push('\n');
        }
        out
    }

    /// Binary (P5) PGM; two big-endian bytes per pixel when `maxval > 255`.
    pub fn to_pgm_binary(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        for &v in &self.pixels {
            if self.maxval > 255 {
                out.extend_from_slice(&v.to_be_bytes());
            } else {
                out.push(v as u8);
            }
        }
        out
    }
}
