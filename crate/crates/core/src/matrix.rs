/// Per-sublist bucket sizes: `count(i, j)` is the number of items of sublist
/// `i` that fall into bucket `j` (both zero-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketMatrix {
    rows: usize,
    cols: usize,
    counts: Vec<usize>,
}

impl BucketMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BucketMatrix {
            rows,
            cols,
            counts: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged bucket rows");
        BucketMatrix {
            rows: rows.len(),
            cols,
            counts: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: usize) {
        self.counts[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.counts[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column_sum(&self, j: usize) -> usize {
        (0..self.rows).map(|i| self.count(i, j)).sum()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Start position of every bucket `A_ij` in the relocated buffer. Stored
/// column-major, which is also the order of the underlying prefix sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffsetMatrix {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
}

impl OffsetMatrix {
    /// `offsets` in column-major order: all rows of column 0, then column 1, …
    pub fn from_column_major(rows: usize, cols: usize, offsets: Vec<usize>) -> Self {
        assert_eq!(offsets.len(), rows * cols, "offset matrix size mismatch");
        OffsetMatrix { rows, cols, offsets }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn offset(&self, i: usize, j: usize) -> usize {
        self.offsets[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.offsets[j * self.rows..(j + 1) * self.rows]
    }

    pub fn as_column_major(&self) -> &[usize] {
        &self.offsets
    }
}
