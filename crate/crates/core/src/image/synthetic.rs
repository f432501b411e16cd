//! Synthetic ridge images standing in for fingerprints.

use super::DigitalImage;

/// Concentric one-pixel elliptical ridges every `spacing` pixels, joined by a
/// horizontal spine through the centre so the pattern is connected. Each
/// ridge closes two holes (one above, one below the spine).
pub fn ridge_image(width: usize, height: usize, spacing: usize) -> DigitalImage {
    let spacing = spacing.max(2) as f64;
    let (cy, cx) = (height as f64 / 2.0, width as f64 / 2.0);
    let aspect = if width > 0 { height as f64 / width as f64 } else { 1.0 };
    let mut mask = vec![false; width * height];
    for r in 0..height {
        for c in 0..width {
            let dy = r as f64 + 0.5 - cy;
            let dx = (c as f64 + 0.5 - cx) * aspect;
            let rad = (dx * dx + dy * dy).sqrt();
            let on_ridge = (rad / spacing).fract() < 1.0 / spacing && rad < cy.min(cx * aspect) - 1.0;
            let spine = r == height / 2 && rad < cy.min(cx * aspect) - 1.0;
            mask[r * width + c] = on_ridge || spine;
        }
    }
    DigitalImage::from_mask(width, height, &mask).expect("mask has width * height entries")
}
