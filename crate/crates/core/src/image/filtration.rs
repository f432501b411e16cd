use super::{DigitalImage, ImageError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiltrationMode {
    Single,
    Frames,
    RowSweep,
    ColSweep,
    Graylevel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

/// Filtration index per pixel, `None` for background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationSpec {
    pub mode: FiltrationMode,
    pub steps: usize,
    pub width: usize,
    pub height: usize,
    /// Row-major, indices in `[1, steps]`.
    pub assignment: Vec<Option<usize>>,
}

impl FiltrationSpec {
    /// Every foreground pixel at step 1.
    pub fn single(img: &DigitalImage) -> Self {
        let assignment = (0..img.height())
            .flat_map(|r| (0..img.width()).map(move |c| (r, c)))
            .map(|(r, c)| img.is_foreground(r, c).then_some(1))
            .collect();
        Self { mode: FiltrationMode::Single, steps: 1, width: img.width(), height: img.height(), assignment }
    }

    pub fn index(&self, r: usize, c: usize) -> Option<usize> {
        self.assignment[r * self.width + c]
    }

    /// Foreground of the step-`i` sub-image.
    pub fn frame(&self, i: usize) -> DigitalImage {
        let mask: Vec<bool> = self.assignment.iter().map(|a| a.is_some_and(|s| s <= i)).collect();
        DigitalImage::from_mask(self.width, self.height, &mask).expect("mask has the spec's shape")
    }
}

/// Rows (or columns) split into `steps` contiguous bands of near-equal size;
/// band `b` (1-based) holds lines `l` with `floor(l * steps / len) + 1 = b`.
pub fn sweep_filtration(img: &DigitalImage, axis: Axis, steps: usize) -> Result<FiltrationSpec, ImageError> {
    let len = match axis {
        Axis::Rows => img.height(),
        Axis::Cols => img.width(),
    };
    if steps == 0 || steps > len {
        return Err(ImageError::Steps { steps, len });
    }
    let mode = match axis {
        Axis::Rows => FiltrationMode::RowSweep,
        Axis::Cols => FiltrationMode::ColSweep,
    };
    let assignment = (0..img.height())
        .flat_map(|r| (0..img.width()).map(move |c| (r, c)))
        .map(|(r, c)| {
            let line = if axis == Axis::Rows { r } else { c };
            img.is_foreground(r, c).then_some(line * steps / len + 1)
        })
        .collect();
    Ok(FiltrationSpec { mode, steps, width: img.width(), height: img.height(), assignment })
}

/// Nested frames: each pixel gets the index of the first frame containing
/// it. The merged image is the last frame.
pub fn frames_filtration(frames: &[DigitalImage]) -> Result<(DigitalImage, FiltrationSpec), ImageError> {
    let last = frames.last().ok_or(ImageError::NoFrames)?;
    let (w, h) = (last.width(), last.height());
    let mut assignment: Vec<Option<usize>> = vec![None; w * h];
    for (k, frame) in frames.iter().enumerate() {
        if (frame.width(), frame.height()) != (w, h) {
            return Err(ImageError::Dimension { expected: format!("{w}x{h} frame"), found: format!("{}x{}", frame.width(), frame.height()) });
        }
        for r in 0..h {
            for c in 0..w {
                let slot = &mut assignment[r * w + c];
                match (slot.is_some(), frame.is_foreground(r, c)) {
                    (true, false) => return Err(ImageError::NotNested { frame: k + 1, row: r, col: c }),
                    (false, true) => *slot = Some(k + 1),
                    _ => {}
                }
            }
        }
    }
    let spec = FiltrationSpec { mode: FiltrationMode::Frames, steps: frames.len(), width: w, height: h, assignment };
    Ok((last.clone(), spec))
}

/// Sublevel filtration: a pixel enters at the first threshold its value does
/// not exceed; pixels brighter than every threshold are background.
pub fn graylevel_filtration(img: &DigitalImage, thresholds: &[u16]) -> Result<FiltrationSpec, ImageError> {
    if thresholds.is_empty() || thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ImageError::Thresholds);
    }
    let assignment = img.pixels().iter().map(|&v| thresholds.iter().position(|&t| v <= t).map(|k| k + 1)).collect();
    Ok(FiltrationSpec {
        mode: FiltrationMode::Graylevel,
        steps: thresholds.len(),
        width: img.width(),
        height: img.height(),
        assignment,
    })
}
