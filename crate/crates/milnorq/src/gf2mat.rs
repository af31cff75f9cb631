//! Bit-packed GF(2) vectors and matrices.
//!
//! Everything downstream (relation checks, submodule closures, Margolis
//! homology, generator counting) reduces to XOR, rank and solve over GF(2),
//! so this is the single linear-algebra kernel of the crate. Rows are packed
//! 64 entries per `u64`, matrices are row-major and contiguous.

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of all set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Concatenate two vectors.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The sub-vector covering bit positions `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> BitVec {
        let mut out = BitVec::zeros(range.len());
        for (j, i) in range.enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize, // words per row
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            wpr,
            data: vec![0; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVec], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            debug_assert_eq!(r.len(), cols);
            for j in r.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.wpr + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % 64);
        let w = &mut self.data[r * self.wpr + c / 64];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.data[r * self.wpr..(r + 1) * self.wpr].to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        debug_assert_eq!(v.len(), self.cols);
        self.data[r * self.wpr..(r + 1) * self.wpr].copy_from_slice(&v.words);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_row_into(&mut self, dst: usize, src: usize) {
        let (a, b) = (dst * self.wpr, src * self.wpr);
        for k in 0..self.wpr {
            let w = self.data[b + k];
            self.data[a + k] ^= w;
        }
    }

    /// Applies the matrix to a row vector on the left: `v^T M`, i.e. the
    /// XOR of the rows selected by the set bits of `v`.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = BitVec::zeros(self.cols);
        for i in v.ones() {
            for k in 0..self.wpr {
                out.words[k] ^= self.data[i * self.wpr + k];
            }
        }
        out
    }

    /// Matrix product over GF(2); `self.cols` must equal `other.rows`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                let (a, b) = (i * out.wpr, j * other.wpr);
                for k in 0..out.wpr {
                    out.data[a + k] ^= other.data[b + k];
                }
            }
        }
        out
    }

    /// Rank by in-place Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            for k in 0..m.wpr {
                m.data.swap(rank * m.wpr + k, pivot * m.wpr + k);
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(r, rank);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// A subspace of GF(2)^n kept in reduced row-echelon form, with optional
/// bookkeeping columns so that membership solves also return coordinates.
///
/// Rows are stored as `[main | aug]`; pivots are chosen only in the main
/// part. Inserting the vectors of a basis with unit augmentation turns
/// `reduce` into a solver: the residue's aug part holds the coordinates of
/// the removed span component.
#[derive(Clone)]
pub struct Echelon {
    main_cols: usize,
    aug_cols: usize,
    rows: Vec<BitVec>,   // sorted by pivot, reduced
    pivots: Vec<usize>,  // ascending
}

impl Echelon {
    pub fn new(main_cols: usize) -> Self {
        Echelon {
            main_cols,
            aug_cols: 0,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn with_aug(main_cols: usize, aug_cols: usize) -> Self {
        Echelon {
            main_cols,
            aug_cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn main_cols(&self) -> usize {
        self.main_cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` (main part only drives pivoting) against the stored rows.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.main_cols + self.aug_cols);
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Inserts `v` if independent; returns true when the dimension grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.ones().find(|&i| i < self.main_cols) else {
            return false;
        };
        // Back-substitute to keep the reduced form canonical.
        for row in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, v);
        true
    }

    /// True iff the main part of `v` lies in the span.
    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).ones().all(|i| i >= self.main_cols)
    }

    /// Rows in pivot order (canonical basis of the subspace).
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }
}

/// Solver for coordinates with respect to an explicit spanning set.
///
/// `insert` the spanning vectors in order; `solve(w)` returns the
/// coefficient vector over the inserted set when `w` lies in the span.
pub struct SpanSolver {
    ech: Echelon,
    n_inserted: usize,
    capacity: usize,
}

impl SpanSolver {
    pub fn new(main_cols: usize, capacity: usize) -> Self {
        SpanSolver {
            ech: Echelon::with_aug(main_cols, capacity),
            n_inserted: 0,
            capacity,
        }
    }

    pub fn insert(&mut self, v: &BitVec) {
        assert!(self.n_inserted < self.capacity, "span solver is full");
        let mut aug = BitVec::zeros(self.capacity);
        aug.set(self.n_inserted, true);
        self.ech.insert(&v.concat(&aug));
        self.n_inserted += 1;
    }

    pub fn solve(&self, w: &BitVec) -> Option<BitVec> {
        let res = self.ech.reduce(&w.concat(&BitVec::zeros(self.capacity)));
        let main = res.slice(0..self.ech.main_cols);
        if main.is_zero() {
            Some(res.slice(self.ech.main_cols..self.ech.main_cols + self.n_inserted))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: plain bool-matrix elimination.
    fn naive_rank(m: &BitMatrix) -> usize {
        let mut a: Vec<Vec<bool>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            if let Some(p) = (rank..a.len()).find(|&r| a[r][col]) {
                a.swap(rank, p);
                for r in 0..a.len() {
                    if r != rank && a[r][col] {
                        for c in 0..m.cols() {
                            let v = a[rank][c];
                            a[r][c] ^= v;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
        let mut s = seed;
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if splitmix(&mut s) & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[test]
    fn rank_matches_naive_elimination() {
        for seed in 0..40u64 {
            let rows = 1 + (seed as usize * 7) % 23;
            let cols = 1 + (seed as usize * 11) % 29;
            let m = random_matrix(rows, cols, seed);
            assert_eq!(m.rank(), naive_rank(&m), "seed {seed}");
        }
    }

    #[test]
    fn rank_across_word_boundary() {
        // 100 columns forces multi-word rows.
        let m = random_matrix(80, 100, 7);
        assert_eq!(m.rank(), naive_rank(&m));
        let id = BitMatrix::identity(130);
        assert_eq!(id.rank(), 130);
    }

    #[test]
    fn mul_against_entrywise_definition() {
        for seed in 0..10u64 {
            let a = random_matrix(9, 13, seed);
            let b = random_matrix(13, 17, seed + 100);
            let c = a.mul(&b);
            for i in 0..9 {
                for j in 0..17 {
                    let mut expect = false;
                    for k in 0..13 {
                        expect ^= a.get(i, k) && b.get(k, j);
                    }
                    assert_eq!(c.get(i, j), expect);
                }
            }
        }
    }

    #[test]
    fn apply_is_row_combination() {
        let m = random_matrix(10, 70, 3);
        let mut v = BitVec::zeros(10);
        v.set(1, true);
        v.set(4, true);
        v.set(9, true);
        let mut expect = m.row(1);
        expect.xor_assign(&m.row(4));
        expect.xor_assign(&m.row(9));
        assert_eq!(m.apply(&v), expect);
    }

    #[test]
    fn echelon_membership_and_dim() {
        let mut e = Echelon::new(5);
        let mut a = BitVec::zeros(5);
        a.set(0, true);
        a.set(2, true);
        let mut b = BitVec::zeros(5);
        b.set(2, true);
        b.set(4, true);
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        assert!(!e.insert(&a)); // dependent
        let mut sum = a.clone();
        sum.xor_assign(&b);
        assert!(e.contains(&sum));
        assert_eq!(e.dim(), 2);
        let mut c = BitVec::zeros(5);
        c.set(1, true);
        assert!(!e.contains(&c));
    }

    #[test]
    fn echelon_canonical_under_insertion_order() {
        let vs: Vec<BitVec> = (0..6).map(|i| random_matrix(1, 40, i).row(0)).collect();
        let mut fwd = Echelon::new(40);
        let mut rev = Echelon::new(40);
        for v in &vs {
            fwd.insert(v);
        }
        for v in vs.iter().rev() {
            rev.insert(v);
        }
        assert_eq!(fwd.dim(), rev.dim());
        for (a, b) in fwd.rows().iter().zip(rev.rows()) {
            assert_eq!(a, b, "reduced echelon basis must be order-independent");
        }
    }

    #[test]
    fn span_solver_recovers_coordinates() {
        let basis: Vec<BitVec> = vec![
            random_matrix(1, 30, 41).row(0),
            random_matrix(1, 30, 42).row(0),
            random_matrix(1, 30, 43).row(0),
        ];
        let mut solver = SpanSolver::new(30, 3);
        for b in &basis {
            solver.insert(b);
        }
        let mut w = basis[0].clone();
        w.xor_assign(&basis[2]);
        let coords = solver.solve(&w).expect("in span");
        let mut rebuilt = BitVec::zeros(30);
        for i in coords.ones() {
            rebuilt.xor_assign(&basis[i]);
        }
        assert_eq!(rebuilt, w);
        let outside = random_matrix(1, 30, 99).row(0);
        // Not necessarily outside the span, but if solve succeeds the
        // coordinates must rebuild the vector.
        if let Some(coords) = solver.solve(&outside) {
            let mut rebuilt = BitVec::zeros(30);
            for i in coords.ones() {
                rebuilt.xor_assign(&basis[i]);
            }
            assert_eq!(rebuilt, outside);
        }
    }
}
