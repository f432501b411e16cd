use std::collections::HashMap;

use super::{DigitalImage, FiltrationSpec, ImageError};
use crate::chain::{Cell, CellLabel, FilteredComplex};
use crate::intlinalg::SparseMatrix;
use crate::scalar::Coefficient;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    /// Two triangles per pixel, split along `(r,c)-(r+1,c+1)`.
    Simplicial,
    /// One square per pixel.
    Cubical,
}

type Vertex = (usize, usize);

/// Cells keyed by their sorted vertex tuple, in creation order, each with the
/// least filtration index seen so far.
struct Level<K> {
    keys: Vec<K>,
    filts: Vec<usize>,
    index: HashMap<K, usize>,
}

impl<K: std::hash::Hash + Eq + Clone> Level<K> {
    fn new() -> Self {
        Self { keys: Vec::new(), filts: Vec::new(), index: HashMap::new() }
    }

    fn touch(&mut self, key: K, filt: usize) -> usize {
        match self.index.get(&key) {
            Some(&p) => {
                self.filts[p] = self.filts[p].min(filt);
                p
            }
            None => {
                let p = self.keys.len();
                self.index.insert(key.clone(), p);
                self.keys.push(key);
                self.filts.push(filt);
                p
            }
        }
    }
}

fn check_shape(img: &DigitalImage, filt: &FiltrationSpec) -> Result<(), ImageError> {
    if (img.width(), img.height()) != (filt.width, filt.height) {
        return Err(ImageError::FiltrationShape { expected: (filt.width, filt.height), found: (img.width(), img.height()) });
    }
    Ok(())
}

/// Foreground pixels in row-major order with their indices.
fn pixels(filt: &FiltrationSpec) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    (0..filt.height).flat_map(move |r| (0..filt.width).filter_map(move |c| filt.index(r, c).map(|i| (r, c, i))))
}

fn assemble<T: Coefficient>(
    steps: usize,
    levels: Vec<(Vec<Vec<Vertex>>, Vec<usize>)>,
    boundaries: Vec<Vec<(usize, usize, T)>>,
) -> FilteredComplex<T> {
    let mut next_id = 0;
    let mut bases = Vec::new();
    let mut dims = Vec::new();
    for (n, (keys, filts)) in levels.into_iter().enumerate() {
        dims.push(keys.len());
        bases.push(
            keys.into_iter()
                .zip(filts)
                .map(|(k, filt)| {
                    next_id += 1;
                    Cell { id: next_id - 1, dim: n, filt, label: Some(CellLabel::Grid(k)) }
                })
                .collect::<Vec<_>>(),
        );
    }
    let mats = boundaries
        .into_iter()
        .enumerate()
        .map(|(n, t)| SparseMatrix::from_triplets(if n == 0 { 0 } else { dims[n - 1] }, dims[n], t))
        .collect();
    FilteredComplex::new(steps.max(1), bases, mats).expect("image complexes are well formed")
}

/// Per foreground pixel: 4 vertices, 5 edges (four sides and the diagonal
/// `(r,c)-(r+1,c+1)`), 2 triangles. Simplices are oriented by lexicographic
/// vertex order.
pub fn build_simplicial<T: Coefficient>(img: &DigitalImage, filt: &FiltrationSpec) -> Result<FilteredComplex<T>, ImageError> {
    check_shape(img, filt)?;
    let mut v = Level::<Vertex>::new();
    let mut e = Level::<[Vertex; 2]>::new();
    let mut t = Level::<[Vertex; 3]>::new();
    for (r, c, i) in pixels(filt) {
        let (a, b, cc, d) = ((r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1));
        for p in [a, b, cc, d] {
            v.touch(p, i);
        }
        for edge in [[a, b], [a, cc], [b, d], [cc, d], [a, d]] {
            e.touch(edge, i);
        }
        t.touch([a, b, d], i);
        t.touch([a, cc, d], i);
    }
    let one = T::one();
    let d1 = e
        .keys
        .iter()
        .enumerate()
        .flat_map(|(k, [x, y])| [(v.index[y], k, one.clone()), (v.index[x], k, -one.clone())])
        .collect();
    let d2 = t
        .keys
        .iter()
        .enumerate()
        .flat_map(|(k, [x, y, z])| {
            [(e.index[&[*y, *z]], k, one.clone()), (e.index[&[*x, *z]], k, -one.clone()), (e.index[&[*x, *y]], k, one.clone())]
        })
        .collect();
    let levels = vec![
        (v.keys.into_iter().map(|p| vec![p]).collect(), v.filts),
        (e.keys.into_iter().map(|k| k.to_vec()).collect(), e.filts),
        (t.keys.into_iter().map(|k| k.to_vec()).collect(), t.filts),
    ];
    Ok(assemble(filt.steps, levels, vec![Vec::new(), d1, d2]))
}

/// Per foreground pixel: 4 vertices, 4 edges, 1 square with
/// `d[a,b,c,d] = [a,b] + [b,d] - [c,d] - [a,c]` for corners
/// `a=(r,c)`, `b=(r,c+1)`, `c=(r+1,c)`, `d=(r+1,c+1)`.
pub fn build_cubical<T: Coefficient>(img: &DigitalImage, filt: &FiltrationSpec) -> Result<FilteredComplex<T>, ImageError> {
    check_shape(img, filt)?;
    let mut v = Level::<Vertex>::new();
    let mut e = Level::<[Vertex; 2]>::new();
    let mut s = Level::<[Vertex; 4]>::new();
    for (r, c, i) in pixels(filt) {
        let (a, b, cc, d) = ((r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1));
        for p in [a, b, cc, d] {
            v.touch(p, i);
        }
        for edge in [[a, b], [a, cc], [b, d], [cc, d]] {
            e.touch(edge, i);
        }
        s.touch([a, b, cc, d], i);
    }
    let one = T::one();
    let d1 = e
        .keys
        .iter()
        .enumerate()
        .flat_map(|(k, [x, y])| [(v.index[y], k, one.clone()), (v.index[x], k, -one.clone())])
        .collect();
    let d2 = s
        .keys
        .iter()
        .enumerate()
        .flat_map(|(k, [a, b, c, d])| {
            [
                (e.index[&[*a, *b]], k, one.clone()),
                (e.index[&[*b, *d]], k, one.clone()),
                (e.index[&[*c, *d]], k, -one.clone()),
                (e.index[&[*a, *c]], k, -one.clone()),
            ]
        })
        .collect();
    let levels = vec![
        (v.keys.into_iter().map(|p| vec![p]).collect(), v.filts),
        (e.keys.into_iter().map(|k| k.to_vec()).collect(), e.filts),
        (s.keys.into_iter().map(|k| k.to_vec()).collect(), s.filts),
    ];
    Ok(assemble(filt.steps, levels, vec![Vec::new(), d1, d2]))
}

impl ComplexKind {
    pub fn build<T: Coefficient>(self, img: &DigitalImage, filt: &FiltrationSpec) -> Result<FilteredComplex<T>, ImageError> {
        match self {
            ComplexKind::Simplicial => build_simplicial(img, filt),
            ComplexKind::Cubical => build_cubical(img, filt),
        }
    }

    /// Name of the top-dimensional cells.
    pub fn top_cell_name(self) -> &'static str {
        match self {
            ComplexKind::Simplicial => "triangles",
            ComplexKind::Cubical => "squares",
        }
    }
}
