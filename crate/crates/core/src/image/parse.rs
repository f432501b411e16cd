use super::{DigitalImage, ImageError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    /// Rows of `#` (foreground) and `.` (background).
    AsciiGrid,
    /// Netpbm P2.
    PgmPlain,
    /// Netpbm P5.
    PgmBinary,
}

/// By magic number; anything else is taken as an ascii grid.
pub fn detect_format(bytes: &[u8]) -> ImageFormat {
    match bytes.get(..2) {
        Some(b"P2") => ImageFormat::PgmPlain,
        Some(b"P5") => ImageFormat::PgmBinary,
        _ => ImageFormat::AsciiGrid,
    }
}

pub fn parse_image(bytes: &[u8], format: ImageFormat) -> Result<DigitalImage, ImageError> {
    match format {
        ImageFormat::AsciiGrid => parse_ascii(bytes),
        ImageFormat::PgmPlain => parse_pgm(bytes, false),
        ImageFormat::PgmBinary => parse_pgm(bytes, true),
    }
}

fn parse_ascii(bytes: &[u8]) -> Result<DigitalImage, ImageError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ImageError::Header("ascii grid is not valid UTF-8".into()))?;
    let mut rows: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    while rows.last().is_some_and(|l| l.trim().is_empty()) {
        rows.pop();
    }
    if rows.is_empty() {
        return Err(ImageError::Header("empty input".into()));
    }
    let width = rows[0].chars().count();
    let mut mask = Vec::with_capacity(width * rows.len());
    for (i, row) in rows.iter().enumerate() {
        let n = row.chars().count();
        if n != width {
            return Err(ImageError::Dimension { expected: format!("row of width {width}"), found: format!("row {} of width {n}", i + 1) });
        }
        for (j, ch) in row.chars().enumerate() {
            match ch {
                '#' => mask.push(true),
                '.' => mask.push(false),
                _ => return Err(ImageError::IllegalCharacter { line: i + 1, column: j + 1, ch }),
            }
        }
    }
    DigitalImage::from_mask(width, rows.len(), &mask)
}

/// Reads one whitespace-delimited header token, skipping `#` comments.
fn header_token(bytes: &[u8], pos: &mut usize) -> Option<String> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    (start < *pos).then(|| String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn parse_pgm(bytes: &[u8], binary: bool) -> Result<DigitalImage, ImageError> {
    let mut pos = 0;
    let magic = header_token(bytes, &mut pos).ok_or_else(|| ImageError::Header("empty input".into()))?;
    let expected = if binary { "P5" } else { "P2" };
    if magic != expected {
        return Err(ImageError::Header(format!("expected magic {expected}, found {magic:?}")));
    }
    let mut field = |name: &str| -> Result<usize, ImageError> {
        let tok = header_token(bytes, &mut pos).ok_or_else(|| ImageError::Header(format!("missing {name}")))?;
        tok.parse().map_err(|_| ImageError::Header(format!("{name} is not a number: {tok:?}")))
    };
    let width = field("width")?;
    let height = field("height")?;
    let maxval = field("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(ImageError::Header(format!("maxval {maxval} outside [1, 65535]")));
    }
    let maxval = maxval as u16;
    let count = width * height;
    let mut pixels = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let data = bytes.get(pos + 1..).unwrap_or(&[]);
        let per = if maxval > 255 { 2 } else { 1 };
        if data.len() < count * per {
            return Err(ImageError::Dimension { expected: format!("{} raster bytes", count * per), found: data.len().to_string() });
        }
        for k in 0..count {
            let v = if per == 2 { u16::from_be_bytes([data[2 * k], data[2 * k + 1]]) } else { data[k] as u16 };
            pixels.push(v);
        }
    } else {
        let text = std::str::from_utf8(&bytes[pos..]).map_err(|_| ImageError::Header("raster is not ASCII".into()))?;
        for tok in text.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| ImageError::Header(format!("pixel value {tok:?} is not a number")))?;
            if v > maxval as u32 {
                return Err(ImageError::Value { value: v, maxval });
            }
            pixels.push(v as u16);
        }
        if pixels.len() != count {
            return Err(ImageError::Dimension { expected: format!("{count} pixel values"), found: pixels.len().to_string() });
        }
    }
    DigitalImage::new(width, height, maxval, pixels)
}
