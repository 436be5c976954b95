//! Dense rank-k index arrays with lexicographic flat layout.
//!
//! Connections, curvature obstructions, deformation residuals, and structure
//! constants all live in this one shape. Flat order is lexicographic on the
//! multi-index, which fixes witness selection and the per-component seed
//! streams deterministically.

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    dims: Vec<usize>,
    data: Vec<T>,
}

impl<T> Tensor<T> {
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> T) -> Self {
        let size = dims.iter().product();
        let mut data = Vec::with_capacity(size);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..size {
            data.push(f(&idx));
            Self::advance(dims, &mut idx);
        }
        Tensor {
            dims: dims.to_vec(),
            data,
        }
    }

    fn advance(dims: &[usize], idx: &mut [usize]) {
        for ax in (0..dims.len()).rev() {
            idx[ax] += 1;
            if idx[ax] < dims[ax] {
                return;
            }
            idx[ax] = 0;
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn flat(&self) -> &[T] {
        &self.data
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut flat = 0usize;
        for (ax, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.dims[ax]);
            flat = flat * self.dims[ax] + i;
        }
        flat
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dims.len()];
        for ax in (0..self.dims.len()).rev() {
            idx[ax] = flat % self.dims[ax];
            flat /= self.dims[ax];
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.data[self.flat_index(idx)]
    }

    /// Iterate `(multi-index, value)` in flat (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        self.data
            .iter()
            .enumerate()
            .map(|(f, v)| (self.multi_index(f), v))
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Tensor<U> {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }
}
