use std::fs;
use std::path::Path;
use std::sync::Arc;

use morseward::chain::{parse_complex, validate_complex};
use morseward::image::{
    detect_format, frames_filtration, graylevel_filtration, parse_image, sweep_filtration, Axis, ComplexKind, DigitalImage,
    FiltrationSpec,
};
use morseward::IntComplex;

use crate::args::{Common, ComplexArg, FiltrationArg};
use crate::error::CliError;

pub struct Loaded {
    pub complex: Arc<IntComplex>,
    /// `None` for complexes read from a complex file.
    pub kind: Option<ComplexKind>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A complex file's first meaningful line is `steps <m>`.
fn is_complex_file(bytes: &[u8]) -> bool {
    let text = String::from_utf8_lossy(&bytes[..bytes.len().min(4096)]);
    text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("steps"))
}

fn image(path: &Path, bytes: &[u8]) -> Result<DigitalImage, CliError> {
    parse_image(bytes, detect_format(bytes)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn steps(args: &Common) -> Result<usize, CliError> {
    args.steps.ok_or_else(|| CliError::Usage("this filtration needs --steps N".into()))
}

pub fn load(args: &Common) -> Result<Loaded, CliError> {
    let blobs: Vec<Vec<u8>> = args.inputs.iter().map(|p| read(p)).collect::<Result<_, _>>()?;
    if blobs.iter().any(|b| is_complex_file(b)) {
        if blobs.len() != 1 {
            return Err(CliError::Usage("a complex file must be the only input".into()));
        }
        if args.filtration.is_some() || args.steps.is_some() {
            return Err(CliError::Usage("complex files carry their own filtration".into()));
        }
        let text = String::from_utf8(blobs[0].clone()).map_err(|_| CliError::Input("complex file is not UTF-8".into()))?;
        let c: IntComplex = parse_complex(&text).map_err(|e| CliError::Input(format!("{}: {e}", args.inputs[0].display())))?;
        let report = validate_complex(&c);
        if let Some(v) = report.violations.first() {
            return Err(CliError::Input(format!("{}: not a filtered chain complex: {v:?}", args.inputs[0].display())));
        }
        return Ok(Loaded { complex: Arc::new(c), kind: None });
    }
    let images: Vec<DigitalImage> = args.inputs.iter().zip(&blobs).map(|(p, b)| image(p, b)).collect::<Result<_, _>>()?;
    let mode = args.filtration.unwrap_or(if images.len() > 1 { FiltrationArg::Frames } else { FiltrationArg::Rows });
    if images.len() > 1 && mode != FiltrationArg::Frames {
        return Err(CliError::Usage("several inputs are only accepted as --filtration frames".into()));
    }
    let (img, spec) = match (mode, args.filtration.is_some()) {
        (FiltrationArg::Frames, _) => {
            if args.steps.is_some_and(|s| s != images.len()) {
                return Err(CliError::Usage(format!("--steps disagrees with the {} frames", images.len())));
            }
            frames_filtration(&images)?
        }
        // no filtration requested: a single step
        (FiltrationArg::Rows, false) if args.steps.is_none() => {
            let img = images.into_iter().next().expect("inputs are required");
            let spec = FiltrationSpec::single(&img);
            (img, spec)
        }
        (FiltrationArg::Rows | FiltrationArg::Cols, _) => {
            let img = images.into_iter().next().expect("inputs are required");
            let axis = if mode == FiltrationArg::Rows { Axis::Rows } else { Axis::Cols };
            let spec = sweep_filtration(&img, axis, steps(args)?).map_err(|e| CliError::Usage(e.to_string()))?;
            (img, spec)
        }
        (FiltrationArg::Gray, _) => {
            let img = images.into_iter().next().expect("inputs are required");
            let n = steps(args)?;
            let cutoff = img.maxval() / 2;
            let thresholds: Vec<u16> = (1..=n).map(|s| (cutoff as usize * s / n) as u16).collect();
            let spec = graylevel_filtration(&img, &thresholds)
                .map_err(|_| CliError::Usage(format!("{n} gray levels do not fit below {cutoff}")))?;
            (img, spec)
        }
    };
    let kind = match args.complex {
        ComplexArg::Simplicial => ComplexKind::Simplicial,
        ComplexArg::Cubical => ComplexKind::Cubical,
    };
    Ok(Loaded { complex: Arc::new(kind.build(&img, &spec)?), kind: Some(kind) })
}

#[cfg(test)]
mod tests {
    use super::is_complex_file;

    #[test]
    fn complex_files_are_recognised_by_their_first_line() {
        assert!(is_complex_file(b"# comment\n\nsteps 2\n"));
        assert!(!is_complex_file(b"P2\n1 1\n1\n0\n"));
        assert!(!is_complex_file(b"#.#\n"));
    }
}
