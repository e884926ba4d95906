use std::sync::atomic::{AtomicU64, Ordering};

/// Row-major `f64` matrix that many threads may read and update at once
/// without locking.
///
/// Entries are stored as bit patterns in relaxed atomics, so concurrent
/// updates to the same row can interleave and lose writes, but every read
/// observes some value that was written. Sparse SGD tolerates this.
pub struct HogwildMatrix {
    rows: usize,
    cols: usize,
    data: Box<[AtomicU64]>,
}

impl HogwildMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec(rows, cols, vec![0.0; rows * cols])
    }

    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), rows * cols);
        HogwildMatrix {
            rows,
            cols,
            data: values.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        f64::from_bits(self.data[row * self.cols + col].load(Ordering::Relaxed))
    }

    #[inline]
    pub fn set(&self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col].store(value.to_bits(), Ordering::Relaxed);
    }

    #[inline]
    pub fn read_row(&self, row: usize, out: &mut [f64]) {
        let cells = &self.data[row * self.cols..(row + 1) * self.cols];
        for (o, c) in out.iter_mut().zip(cells) {
            *o = f64::from_bits(c.load(Ordering::Relaxed));
        }
    }

    pub fn row(&self, row: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.read_row(row, &mut out);
        out
    }

    /// `row += scale * delta`, element by element.
    #[inline]
    pub fn add_scaled(&self, row: usize, scale: f64, delta: &[f64]) {
        let cells = &self.data[row * self.cols..(row + 1) * self.cols];
        for (c, d) in cells.iter().zip(delta) {
            let current = f64::from_bits(c.load(Ordering::Relaxed));
            c.store((current + scale * d).to_bits(), Ordering::Relaxed);
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.data
            .iter()
            .map(|c| f64::from_bits(c.load(Ordering::Relaxed)))
            .collect()
    }
}

impl Clone for HogwildMatrix {
    fn clone(&self) -> Self {
        Self::from_vec(self.rows, self.cols, self.to_vec())
    }
}

impl std::fmt::Debug for HogwildMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HogwildMatrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish_non_exhaustive()
    }
}
