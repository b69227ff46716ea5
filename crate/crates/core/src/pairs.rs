/// Values indexed by unordered pairs `i < j` of `0..size`, stored flat in the
/// order (0,1), (0,2), (1,2), (0,3), ... (grouped by the larger index).
#[derive(Debug, Clone, PartialEq)]
pub struct PairMatrix {
    size: usize,
    values: Vec<f64>,
}

impl PairMatrix {
    pub fn zeros(size: usize) -> Self {
        Self { size, values: vec![0.0; size * size.saturating_sub(1) / 2] }
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(size);
        for j in 1..size {
            for i in 0..j {
                m.values[Self::offset(i, j)] = f(i, j);
            }
        }
        m
    }

    fn offset(i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        j * (j - 1) / 2 + i
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Symmetric access; `i == j` is not a pair.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i != j && i < self.size && j < self.size, "pair ({i},{j}) out of range");
        self.values[Self::offset(i.min(j), i.max(j))]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i != j && i < self.size && j < self.size, "pair ({i},{j}) out of range");
        self.values[Self::offset(i.min(j), i.max(j))] = v;
    }

    /// `((i, j), value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        (1..self.size).flat_map(move |j| (0..j).map(move |i| ((i, j), self.values[Self::offset(i, j)])))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
