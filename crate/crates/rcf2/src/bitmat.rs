//! Bit-packed matrices and vectors over F2.
//!
//! A matrix stores one 64-bit word per row, column `j` in bit `j`; matrices
//! are therefore at most 64 columns wide. All operations are pure and all
//! values are immutable after construction, so everything here is freely
//! shareable across threads.

use crate::Error;

pub(crate) fn width_mask(width: usize) -> u64 {
    debug_assert!(width <= 64);
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// A vector of `len <= 64` bits over F2, coordinate `i` stored in bit `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    bits: u64,
}

impl BitVector {
    pub fn zero(len: usize) -> Self {
        assert!(len <= 64, "vector length must be at most 64");
        BitVector { len, bits: 0 }
    }

    /// Builds a vector from a raw word; bits at positions >= `len` are cleared.
    pub fn from_bits(len: usize, bits: u64) -> Self {
        assert!(len <= 64, "vector length must be at most 64");
        BitVector {
            len,
            bits: bits & width_mask(len),
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        assert!(i < len);
        BitVector {
            len,
            bits: 1u64 << i,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.bits >> i & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "vector length mismatch");
        BitVector {
            len: self.len,
            bits: self.bits ^ other.bits,
        }
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        (self.bits & other.bits).count_ones() & 1 == 1
    }
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl std::fmt::Display for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A dense `n_rows x n_cols` matrix over F2 with `n_cols <= 64`.
/// Zero-dimensional matrices are legal and behave as empty blocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        assert!(n_cols <= 64, "matrices are at most 64 columns wide");
        BitMatrix {
            n_rows,
            n_cols,
            rows: vec![0; n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from raw row words; bits beyond `n_cols` are cleared.
    pub fn from_rows(rows: Vec<u64>, n_cols: usize) -> Self {
        assert!(n_cols <= 64, "matrices are at most 64 columns wide");
        let mask = width_mask(n_cols);
        let n_rows = rows.len();
        BitMatrix {
            n_rows,
            n_cols,
            rows: rows.into_iter().map(|r| r & mask).collect(),
        }
    }

    /// Parses rows given as strings of `0`/`1`, e.g. `&["101", "010"]`.
    /// All rows must have equal length. Intended for tests and the catalog.
    pub fn from_lines(lines: &[&str]) -> Self {
        let n_cols = lines.first().map_or(0, |l| l.len());
        let rows = lines
            .iter()
            .map(|line| {
                assert_eq!(line.len(), n_cols, "ragged rows");
                line.chars().enumerate().fold(0u64, |acc, (j, c)| match c {
                    '0' => acc,
                    '1' => acc | 1 << j,
                    _ => panic!("expected 0/1, got {c:?}"),
                })
            })
            .collect();
        BitMatrix {
            n_rows: lines.len(),
            n_cols,
            rows,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n_rows && j < self.n_cols);
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n_rows && j < self.n_cols);
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_bits(self.n_cols, self.rows[i])
    }

    pub fn row_words(&self) -> &[u64] {
        &self.rows
    }

    pub fn col(&self, j: usize) -> BitVector {
        assert!(j < self.n_cols);
        let mut bits = 0u64;
        for (i, r) in self.rows.iter().enumerate() {
            bits |= (r >> j & 1) << i;
        }
        BitVector::from_bits(self.n_rows, bits)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        BitMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Matrix product over F2. Row `i` of the result is the XOR of the rows
    /// of `other` selected by the set bits of row `i` of `self`.
    pub fn matmul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.n_cols, other.n_rows,
            "inner dimension mismatch in matmul"
        );
        let rows = self
            .rows
            .iter()
            .map(|&r| combine_rows(r, &other.rows))
            .collect();
        BitMatrix {
            n_rows: self.n_rows,
            n_cols: other.n_cols,
            rows,
        }
    }

    pub fn matvec(&self, x: &BitVector) -> BitVector {
        assert_eq!(self.n_cols, x.len(), "length mismatch in matvec");
        let mut bits = 0u64;
        for (i, &r) in self.rows.iter().enumerate() {
            bits |= (((r & x.bits()).count_ones() & 1) as u64) << i;
        }
        BitVector::from_bits(self.n_rows, bits)
    }

    /// `y^T M` as a row word: XOR of the rows selected by the bits of `y`.
    pub fn row_combination(&self, y: u64) -> u64 {
        debug_assert!(y & !width_mask(self.n_rows) == 0);
        combine_rows(y, &self.rows)
    }

    pub fn transpose(&self) -> BitMatrix {
        assert!(self.n_rows <= 64, "transpose requires at most 64 rows");
        let mut rows = vec![0u64; self.n_cols];
        for (i, &r) in self.rows.iter().enumerate() {
            let mut w = r;
            while w != 0 {
                let j = w.trailing_zeros() as usize;
                rows[j] |= 1 << i;
                w &= w - 1;
            }
        }
        BitMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        self.rows.iter().filter(|&&r| ech.insert(r)).count()
    }

    /// Reduced row-echelon form together with the pivot columns and the
    /// invertible row transform `T` such that `T * self == reduced`.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut t = BitMatrix::identity(self.n_rows).rows;
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..self.n_cols {
            let Some(pos) = (rank..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pos);
            t.swap(rank, pos);
            let (pr, pt) = (rows[rank], t[rank]);
            for r in 0..rows.len() {
                if r != rank && rows[r] >> col & 1 == 1 {
                    rows[r] ^= pr;
                    t[r] ^= pt;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        Rref {
            reduced: BitMatrix {
                n_rows: self.n_rows,
                n_cols: self.n_cols,
                rows,
            },
            pivot_cols: pivots,
            row_transform: BitMatrix {
                n_rows: self.n_rows,
                n_cols: self.n_rows,
                rows: t,
            },
        }
    }

    /// Basis of the right kernel `{x : Mx = 0}`, one vector per free column,
    /// in increasing free-column order.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let rref = self.rref();
        let pivots = &rref.pivot_cols;
        let mut basis = Vec::with_capacity(self.n_cols - pivots.len());
        let mut piv_iter = 0usize;
        for free in 0..self.n_cols {
            if piv_iter < pivots.len() && pivots[piv_iter] == free {
                piv_iter += 1;
                continue;
            }
            let mut bits = 1u64 << free;
            for (i, &pc) in pivots.iter().enumerate() {
                if rref.reduced.rows[i] >> free & 1 == 1 {
                    bits |= 1 << pc;
                }
            }
            basis.push(BitVector::from_bits(self.n_cols, bits));
        }
        basis
    }

    /// Basis of the left kernel `{y : y^T M = 0}`.
    pub fn left_kernel(&self) -> Vec<BitVector> {
        self.transpose().nullspace()
    }

    pub fn invert(&self) -> Option<BitMatrix> {
        if self.n_rows != self.n_cols {
            return None;
        }
        let rref = self.rref();
        if rref.pivot_cols.len() == self.n_rows {
            Some(rref.row_transform)
        } else {
            None
        }
    }

    /// Solves `self * x = b`, returning any solution.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(self.n_rows, b.len(), "length mismatch in solve");
        let rref = self.rref();
        let bt = rref.row_transform.matvec(b);
        let rank = rref.pivot_cols.len();
        for i in rank..self.n_rows {
            if bt.get(i) {
                return None;
            }
        }
        let mut x = 0u64;
        for (i, &pc) in rref.pivot_cols.iter().enumerate() {
            if bt.get(i) {
                x |= 1 << pc;
            }
        }
        Some(BitVector::from_bits(self.n_cols, x))
    }

    /// Row-major flattening into a single word; requires `n_rows * n_cols <= 64`.
    /// Entry `(i, j)` goes to bit `i * n_cols + j`.
    pub fn flatten(&self) -> u64 {
        assert!(
            self.n_rows * self.n_cols <= 64,
            "flattening requires at most 64 entries"
        );
        let mut word = 0u64;
        for (i, &r) in self.rows.iter().enumerate() {
            word |= r << (i * self.n_cols);
        }
        word
    }

    pub fn unflatten(word: u64, n_rows: usize, n_cols: usize) -> BitMatrix {
        assert!(n_rows * n_cols <= 64);
        let mask = width_mask(n_cols);
        let rows = (0..n_rows)
            .map(|i| {
                if n_cols == 0 {
                    0
                } else {
                    word >> (i * n_cols) & mask
                }
            })
            .collect();
        BitMatrix {
            n_rows,
            n_cols,
            rows,
        }
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Result of [`BitMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: BitMatrix,
    pub pivot_cols: Vec<usize>,
    pub row_transform: BitMatrix,
}

fn combine_rows(selector: u64, rows: &[u64]) -> u64 {
    let mut acc = 0u64;
    let mut w = selector;
    while w != 0 {
        let i = w.trailing_zeros() as usize;
        acc ^= rows[i];
        w &= w - 1;
    }
    acc
}

/// Incrementally maintained reduced echelon basis of a set of words.
/// Rows are kept fully reduced with strictly increasing pivot positions
/// (pivot = lowest set bit), so the row list is a canonical representation
/// of the span: two equal subspaces produce bitwise-equal row lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Echelon {
    rows: Vec<u64>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn from_words(words: impl IntoIterator<Item = u64>) -> Self {
        let mut e = Echelon::new();
        for w in words {
            e.insert(w);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.trailing_zeros() as usize)
    }

    /// Canonical coset representative of `w` modulo the span: the unique
    /// element of `w + span` with zeros at every pivot position.
    pub fn reduce(&self, mut w: u64) -> u64 {
        for &r in &self.rows {
            if w >> r.trailing_zeros() & 1 == 1 {
                w ^= r;
            }
        }
        w
    }

    pub fn contains(&self, w: u64) -> bool {
        self.reduce(w) == 0
    }

    /// Inserts `w`; returns true iff the dimension grew.
    pub fn insert(&mut self, w: u64) -> bool {
        let w = self.reduce(w);
        if w == 0 {
            return false;
        }
        let piv = w.trailing_zeros();
        for r in &mut self.rows {
            if *r >> piv & 1 == 1 {
                *r ^= w;
            }
        }
        let pos = self
            .rows
            .partition_point(|r| r.trailing_zeros() < piv);
        self.rows.insert(pos, w);
        true
    }

    /// Coordinates of `w` in the echelon basis, read off at the pivots;
    /// `None` if `w` is not in the span. Bit `k` corresponds to row `k`.
    pub fn coordinates(&self, w: u64) -> Option<u64> {
        let mut coords = 0u64;
        let mut rem = w;
        for (k, &r) in self.rows.iter().enumerate() {
            if rem >> r.trailing_zeros() & 1 == 1 {
                rem ^= r;
                coords |= 1 << k;
            }
        }
        (rem == 0).then_some(coords)
    }
}

/// Order of `GL_n(F2)`.
pub fn gl_order(n: usize) -> u64 {
    let mut order = 1u64;
    for i in 0..n {
        order *= (1u64 << n) - (1u64 << i);
    }
    order
}

/// Enumerates every invertible `n x n` matrix over F2 exactly once, in
/// ascending order of the row-word tuple `(row_0, ..., row_{n-1})` (the
/// lexicographic order of the row-major flattening). `n` must lie in `1..=5`;
/// `|GL_5(F2)|` is just under ten million, the ceiling for full iteration.
pub fn enumerate_gl(n: usize) -> Result<GlEnumerator, Error> {
    if n == 0 || n > 5 {
        return Err(Error::Precondition(format!(
            "enumerate_gl supports 1 <= n <= 5, got {n}"
        )));
    }
    Ok(GlEnumerator {
        n,
        rows: Vec::new(),
        echelons: vec![Echelon::new()],
        started: false,
        finished: false,
    })
}

pub struct GlEnumerator {
    n: usize,
    rows: Vec<u64>,
    // echelons[k] spans rows[0..k]
    echelons: Vec<Echelon>,
    started: bool,
    finished: bool,
}

impl GlEnumerator {
    fn push_smallest_from(&mut self, mut candidate: u64) -> bool {
        let limit = width_mask(self.n);
        while candidate <= limit {
            if !self.echelons.last().unwrap().contains(candidate) {
                let mut e = self.echelons.last().unwrap().clone();
                e.insert(candidate);
                self.echelons.push(e);
                self.rows.push(candidate);
                return true;
            }
            candidate += 1;
        }
        false
    }

    fn complete(&mut self) -> bool {
        while self.rows.len() < self.n {
            if !self.push_smallest_from(1) {
                return false;
            }
        }
        true
    }
}

impl Iterator for GlEnumerator {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            if !self.complete() {
                self.finished = true;
                return None;
            }
        } else {
            loop {
                let Some(last) = self.rows.pop() else {
                    self.finished = true;
                    return None;
                };
                self.echelons.pop();
                if self.push_smallest_from(last + 1) {
                    if self.complete() {
                        break;
                    }
                    // dead end cannot happen: any independent prefix extends
                    unreachable!("every independent prefix extends to GL");
                }
            }
        }
        Some(BitMatrix::from_rows(self.rows.clone(), self.n))
    }
}
