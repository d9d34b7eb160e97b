//! Linear and affine subspaces of `Mat_{n,p}(F2)`.
//!
//! A subspace is stored as the reduced echelon basis of the row-major
//! flattenings of its elements, so equality and hashing are bitwise and two
//! equal subspaces are always represented identically. The flattening puts
//! entry `(i, j)` at bit `i * p + j`; it is the single global convention used
//! by every canonical form in the crate.

use crate::bitmat::{width_mask, BitMatrix, BitVector, Echelon};
use crate::Error;

/// A linear subspace of `Mat_{n,p}(F2)`, `n * p <= 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatSubspace {
    n_rows: usize,
    n_cols: usize,
    ech: Echelon,
}

impl MatSubspace {
    fn check_ambient(n: usize, p: usize) -> Result<(), Error> {
        if n * p > 64 {
            return Err(Error::TooLarge {
                what: "ambient dimension n*p",
                value: n * p,
                max: 64,
            });
        }
        Ok(())
    }

    pub fn zero_space(n: usize, p: usize) -> Self {
        Self::check_ambient(n, p).expect("ambient too large");
        MatSubspace {
            n_rows: n,
            n_cols: p,
            ech: Echelon::new(),
        }
    }

    pub fn full_space(n: usize, p: usize) -> Self {
        Self::check_ambient(n, p).expect("ambient too large");
        let ech = Echelon::from_words((0..n * p).map(|k| 1u64 << k));
        MatSubspace {
            n_rows: n,
            n_cols: p,
            ech,
        }
    }

    /// Smallest subspace containing all the given `n x p` matrices.
    pub fn span(mats: &[BitMatrix], n: usize, p: usize) -> Result<Self, Error> {
        Self::check_ambient(n, p)?;
        let mut ech = Echelon::new();
        for m in mats {
            if m.shape() != (n, p) {
                return Err(Error::shape(
                    "span generator",
                    format!("{n}x{p}"),
                    format!("{}x{}", m.n_rows(), m.n_cols()),
                ));
            }
            ech.insert(m.flatten());
        }
        Ok(MatSubspace {
            n_rows: n,
            n_cols: p,
            ech,
        })
    }

    pub(crate) fn from_flat(n: usize, p: usize, words: impl IntoIterator<Item = u64>) -> Self {
        Self::check_ambient(n, p).expect("ambient too large");
        MatSubspace {
            n_rows: n,
            n_cols: p,
            ech: Echelon::from_words(words),
        }
    }

    pub fn ambient_rows(&self) -> usize {
        self.n_rows
    }

    pub fn ambient_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n_rows * self.n_cols
    }

    pub fn dim(&self) -> usize {
        self.ech.dim()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub(crate) fn echelon(&self) -> &Echelon {
        &self.ech
    }

    pub fn basis_flat(&self) -> &[u64] {
        self.ech.rows()
    }

    /// The stored ordered basis (reduced echelon order).
    pub fn basis_matrices(&self) -> Vec<BitMatrix> {
        self.ech
            .rows()
            .iter()
            .map(|&w| BitMatrix::unflatten(w, self.n_rows, self.n_cols))
            .collect()
    }

    pub fn contains_flat(&self, w: u64) -> bool {
        self.ech.contains(w)
    }

    pub fn contains(&self, m: &BitMatrix) -> bool {
        assert_eq!(m.shape(), self.shape(), "shape mismatch in contains");
        self.contains_flat(m.flatten())
    }

    pub fn is_subspace_of(&self, other: &MatSubspace) -> bool {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.ech.rows().iter().all(|&w| other.contains_flat(w))
    }

    /// Coordinates of `m` in the stored basis, or `None` if not a member.
    pub fn coordinates(&self, m: &BitMatrix) -> Option<u64> {
        assert_eq!(m.shape(), self.shape(), "shape mismatch in coordinates");
        self.ech.coordinates(m.flatten())
    }

    pub fn sum(&self, other: &MatSubspace) -> Result<MatSubspace, Error> {
        if self.shape() != other.shape() {
            return Err(Error::shape(
                "sum of subspaces",
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ));
        }
        let mut ech = self.ech.clone();
        for &w in other.ech.rows() {
            ech.insert(w);
        }
        Ok(MatSubspace {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            ech,
        })
    }

    pub fn intersect(&self, other: &MatSubspace) -> Result<MatSubspace, Error> {
        if self.shape() != other.shape() {
            return Err(Error::shape(
                "intersection of subspaces",
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ));
        }
        // (A cap B) = (A^perp + B^perp)^perp via the trace pairing.
        let o = self.orthogonal().sum(&other.orthogonal())?;
        Ok(o.orthogonal())
    }

    /// Orthogonal subspace of `Mat_{p,n}` under the trace pairing
    /// `(A, B) -> tr(B A)`; satisfies `dim S + dim S^perp = n p`.
    pub fn orthogonal(&self) -> MatSubspace {
        // tr(B A) = <flat(A), flat(B^T)> in the row-major flattening, so the
        // orthogonal space is the dot-product complement, transposed.
        let d = self.dim();
        let stacked = BitMatrix::from_rows(self.ech.rows().to_vec(), self.ambient_dim());
        let words = stacked.nullspace().into_iter().map(|v| {
            BitMatrix::unflatten(v.bits(), self.n_rows, self.n_cols)
                .transpose()
                .flatten()
        });
        let out = MatSubspace::from_flat(self.n_cols, self.n_rows, words.collect::<Vec<_>>());
        debug_assert_eq!(out.dim() + d, self.ambient_dim());
        out
    }

    pub fn transpose_space(&self) -> MatSubspace {
        let words = self.ech.rows().iter().map(|&w| {
            BitMatrix::unflatten(w, self.n_rows, self.n_cols)
                .transpose()
                .flatten()
        });
        MatSubspace::from_flat(self.n_cols, self.n_rows, words.collect::<Vec<_>>())
    }

    /// Block construction `self ∨ other`: all matrices `[A C; 0 B]` with
    /// `A` here, `B` in `other` and `C` free. Zero-dimensional blocks are
    /// legal and behave as empty blocks.
    pub fn vee(&self, other: &MatSubspace) -> MatSubspace {
        let (m, p) = self.shape();
        let (n, q) = other.shape();
        let (rows, cols) = (m + n, p + q);
        Self::check_ambient(rows, cols).expect("ambient too large in vee");
        let mut gens: Vec<u64> = Vec::new();
        let embed = |mat: &BitMatrix, row_off: usize, col_off: usize| -> u64 {
            let mut w = 0u64;
            for i in 0..mat.n_rows() {
                for j in 0..mat.n_cols() {
                    if mat.get(i, j) {
                        w |= 1 << ((i + row_off) * cols + (j + col_off));
                    }
                }
            }
            w
        };
        for a in self.basis_matrices() {
            gens.push(embed(&a, 0, 0));
        }
        for b in other.basis_matrices() {
            gens.push(embed(&b, m, p));
        }
        for i in 0..m {
            for j in p..cols {
                gens.push(1 << (i * cols + j));
            }
        }
        MatSubspace::from_flat(rows, cols, gens)
    }

    /// Horizontal juxtaposition `self ∐ other`: all `[A B]` with `A` here and
    /// `B` in `other`. Requires equal row counts.
    pub fn coprod(&self, other: &MatSubspace) -> Result<MatSubspace, Error> {
        if self.n_rows != other.n_rows {
            return Err(Error::shape("coprod row count", self.n_rows, other.n_rows));
        }
        let (n, p, q) = (self.n_rows, self.n_cols, other.n_cols);
        Self::check_ambient(n, p + q)?;
        let cols = p + q;
        let mut gens = Vec::new();
        for a in self.basis_matrices() {
            gens.push(BitMatrix::from_rows(a.row_words().to_vec(), cols).flatten());
        }
        for b in other.basis_matrices() {
            let rows: Vec<u64> = b.row_words().iter().map(|r| r << p).collect();
            gens.push(BitMatrix::from_rows(rows, cols).flatten());
        }
        Ok(MatSubspace::from_flat(n, cols, gens))
    }

    /// The subspace `S x` of `F2^n`, returned as a space of `n x 1` matrices.
    pub fn apply(&self, x: &BitVector) -> Result<MatSubspace, Error> {
        if x.len() != self.n_cols {
            return Err(Error::shape("apply vector length", self.n_cols, x.len()));
        }
        let words: Vec<u64> = self
            .basis_matrices()
            .iter()
            .map(|m| m.matvec(x).bits())
            .collect();
        Ok(MatSubspace::from_flat(self.n_rows, 1, words))
    }

    /// Dimension of `S x` without materializing the subspace.
    pub(crate) fn apply_dim(&self, x_bits: u64) -> usize {
        let x = BitVector::from_bits(self.n_cols, x_bits);
        let mut ech = Echelon::new();
        for m in self.basis_matrices() {
            ech.insert(m.matvec(&x).bits());
        }
        ech.dim()
    }

    /// Basis of the common kernel `∩ ker s` over all `s` in the space.
    pub fn common_kernel(&self) -> Vec<BitVector> {
        let mut rows = Vec::with_capacity(self.dim() * self.n_rows);
        for m in self.basis_matrices() {
            rows.extend_from_slice(m.row_words());
        }
        BitMatrix::from_rows(rows, self.n_cols).nullspace()
    }

    /// Echelon basis of the sum of the ranges `Σ im s`.
    pub fn total_image(&self) -> Vec<BitVector> {
        let mut ech = Echelon::new();
        for m in self.basis_matrices() {
            for j in 0..self.n_cols {
                ech.insert(m.col(j).bits());
            }
        }
        ech.rows()
            .iter()
            .map(|&w| BitVector::from_bits(self.n_rows, w))
            .collect()
    }

    /// Reduced: no common kernel vector and ranges jointly spanning the target.
    pub fn is_reduced(&self) -> bool {
        self.common_kernel().is_empty() && self.total_image().len() == self.n_rows
    }

    /// The reduced operator space on `(U/U_0, V_0)` where `U_0` is the common
    /// kernel and `V_0` the sum of ranges. Coordinates are deterministic: the
    /// complement of `U_0` is spanned by the standard coordinates away from
    /// its echelon pivots (in increasing index order), and `V_0` carries its
    /// echelon basis, coefficients read off at the pivot positions.
    pub fn reduce(&self) -> ReducedSpace {
        let u0 = Echelon::from_words(self.common_kernel().iter().map(|v| v.bits()));
        let u0_pivots: Vec<usize> = u0.pivots().collect();
        let keep_cols: Vec<usize> = (0..self.n_cols)
            .filter(|j| !u0_pivots.contains(j))
            .collect();

        let v0 = Echelon::from_words(self.total_image().iter().map(|v| v.bits()));
        let v0_pivots: Vec<usize> = v0.pivots().collect();

        let (rows, cols) = (v0.dim(), keep_cols.len());
        let words: Vec<u64> = self
            .basis_matrices()
            .iter()
            .map(|m| {
                let mut w = 0u64;
                for (l, &j) in keep_cols.iter().enumerate() {
                    let col = m.col(j);
                    for (r, &pv) in v0_pivots.iter().enumerate() {
                        if col.get(pv) {
                            w |= 1 << (r * cols + l);
                        }
                    }
                }
                w
            })
            .collect();
        let reduced = MatSubspace::from_flat(rows, cols, words);
        ReducedSpace {
            reduced,
            u0_dim: u0.dim(),
            v0_dim: v0.dim(),
        }
    }

    /// The space spanned by the evaluation-map coefficient matrices: with the
    /// stored ordered basis `(s_1, ..., s_d)`, the generator for `x` is the
    /// `n x d` matrix whose `j`-th column is `s_j x`, for `x` over the
    /// standard basis of `F2^p`.
    pub fn hat(&self) -> MatSubspace {
        hat_from_generators(&self.basis_matrices(), self.n_rows, self.n_cols)
    }

    /// Quotient space `S mod F2 y` of operators into `F2^n / F2 y`, in the
    /// deterministic coordinates given by dropping the pivot coordinate of
    /// `y` and keeping the remaining standard coordinates in increasing order.
    pub fn quotient_mod(&self, y: &BitVector) -> Result<MatSubspace, Error> {
        if y.len() != self.n_rows {
            return Err(Error::shape(
                "quotient_mod vector length",
                self.n_rows,
                y.len(),
            ));
        }
        if y.is_zero() {
            return Err(Error::Precondition(
                "quotient_mod requires y != 0".to_string(),
            ));
        }
        let pivot = y.bits().trailing_zeros() as usize;
        let words: Vec<u64> = self
            .basis_matrices()
            .iter()
            .map(|m| {
                let mut rows = Vec::with_capacity(self.n_rows - 1);
                for k in 0..self.n_rows {
                    if k == pivot {
                        continue;
                    }
                    let mut r = m.row_words()[k];
                    if y.get(k) {
                        r ^= m.row_words()[pivot];
                    }
                    rows.push(r);
                }
                BitMatrix::from_rows(rows, self.n_cols).flatten()
            })
            .collect();
        Ok(MatSubspace::from_flat(self.n_rows - 1, self.n_cols, words))
    }

    /// Transform by `(P, Q_inv)`: the subspace `P S Q_inv` (so the group
    /// action `(P, Q).S = P S Q^{-1}` is `act(P, Q^{-1})`).
    pub fn act(&self, p: &BitMatrix, q_inv: &BitMatrix) -> MatSubspace {
        assert_eq!(p.n_cols(), self.n_rows, "left factor shape");
        assert_eq!(q_inv.n_rows(), self.n_cols, "right factor shape");
        let words: Vec<u64> = self
            .basis_matrices()
            .iter()
            .map(|m| p.matmul(m).matmul(q_inv).flatten())
            .collect();
        MatSubspace::from_flat(p.n_rows(), q_inv.n_cols(), words)
    }

    /// Iterates all `2^dim` flattened elements exactly once in Gray-code
    /// order, starting from zero. The dimension must be at most 30.
    pub fn elements_flat(&self) -> Result<ElementIter<'_>, Error> {
        if self.dim() > 30 {
            return Err(Error::TooLarge {
                what: "subspace dimension for element enumeration",
                value: self.dim(),
                max: 30,
            });
        }
        Ok(ElementIter {
            basis: self.ech.rows(),
            idx: 0,
            total: 1u64 << self.dim(),
            current: 0,
        })
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = BitMatrix> + '_, Error> {
        let (n, p) = self.shape();
        Ok(self
            .elements_flat()?
            .map(move |w| BitMatrix::unflatten(w, n, p)))
    }
}

impl std::fmt::Debug for MatSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MatSubspace {}x{} dim {} {:?}",
            self.n_rows,
            self.n_cols,
            self.dim(),
            self.ech.rows()
        )
    }
}

/// Builds the evaluation-map space for an explicitly ordered generating
/// family of `n x p` matrices. Exposed separately from [`MatSubspace::hat`]
/// because the resulting subspace of `Mat_{n,d}` depends on the order and
/// choice of the basis (two choices differ by a right `GL_d` factor).
pub fn hat_from_generators(basis: &[BitMatrix], n: usize, p: usize) -> MatSubspace {
    let d = basis.len();
    let words: Vec<u64> = (0..p)
        .map(|x| {
            let xv = BitVector::unit(p, x);
            let mut w = 0u64;
            for (j, s) in basis.iter().enumerate() {
                let col = s.matvec(&xv);
                for i in 0..n {
                    if col.get(i) {
                        w |= 1 << (i * d + j);
                    }
                }
            }
            w
        })
        .collect();
    MatSubspace::from_flat(n, d, words)
}

/// Result of [`MatSubspace::reduce`].
#[derive(Clone, Debug)]
pub struct ReducedSpace {
    pub reduced: MatSubspace,
    pub u0_dim: usize,
    pub v0_dim: usize,
}

pub struct ElementIter<'a> {
    basis: &'a [u64],
    idx: u64,
    total: u64,
    current: u64,
}

impl Iterator for ElementIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.idx == self.total {
            return None;
        }
        if self.idx > 0 {
            let flip = self.idx.trailing_zeros() as usize;
            self.current ^= self.basis[flip];
        }
        self.idx += 1;
        Some(self.current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.total - self.idx) as usize;
        (rem, Some(rem))
    }
}

/// Number of `k`-dimensional subspaces of `F2^n` (Gaussian binomial).
pub fn gaussian_binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (k - i)) - 1;
    }
    (num / den) as u64
}

/// Enumerates every `k`-dimensional subspace of `Mat_{n,p}(F2)` exactly once
/// via reduced row-echelon forms of the flattened coordinates. Requires
/// `n * p <= 12`. Enumeration order is deterministic: pivot-column sets in
/// lexicographic order, free entries in binary-counter order; harnesses can
/// shard on the enumeration index.
pub fn enumerate_subspaces(n: usize, p: usize, k: usize) -> Result<SubspaceEnumerator, Error> {
    if n * p > 12 {
        return Err(Error::TooLarge {
            what: "ambient dimension n*p for subspace enumeration",
            value: n * p,
            max: 12,
        });
    }
    if k > n * p {
        return Err(Error::Precondition(format!(
            "subspace dimension {k} exceeds ambient {}",
            n * p
        )));
    }
    let pivots: Vec<usize> = (0..k).collect();
    let mut it = SubspaceEnumerator {
        n,
        p,
        k,
        ambient: n * p,
        pivots,
        free_bits: Vec::new(),
        counter: 0,
        done: false,
    };
    it.recompute_free_positions();
    Ok(it)
}

pub struct SubspaceEnumerator {
    n: usize,
    p: usize,
    k: usize,
    ambient: usize,
    pivots: Vec<usize>,
    // bit positions (basis row, flattened column) of the free entries
    free_bits: Vec<(usize, usize)>,
    counter: u64,
    done: bool,
}

impl SubspaceEnumerator {
    fn recompute_free_positions(&mut self) {
        self.free_bits.clear();
        for (i, &pi) in self.pivots.iter().enumerate() {
            for j in pi + 1..self.ambient {
                if !self.pivots.contains(&j) {
                    self.free_bits.push((i, j));
                }
            }
        }
        self.counter = 0;
    }

    fn advance_pivots(&mut self) -> bool {
        // next k-combination of 0..ambient in lexicographic order
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if self.pivots[i] < self.ambient - (k - i) {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
    }
}

impl Iterator for SubspaceEnumerator {
    type Item = MatSubspace;

    fn next(&mut self) -> Option<MatSubspace> {
        if self.done {
            return None;
        }
        if self.k == 0 {
            self.done = true;
            return Some(MatSubspace::zero_space(self.n, self.p));
        }
        let mut rows: Vec<u64> = self.pivots.iter().map(|&c| 1u64 << c).collect();
        for (t, &(row, bit)) in self.free_bits.iter().enumerate() {
            if self.counter >> t & 1 == 1 {
                rows[row] |= 1 << bit;
            }
        }
        // rows are already a reduced echelon basis by construction
        let out = MatSubspace {
            n_rows: self.n,
            n_cols: self.p,
            ech: Echelon::from_words(rows.iter().copied()),
        };
        debug_assert_eq!(out.dim(), self.k);
        debug_assert_eq!(out.basis_flat(), rows.as_slice());

        self.counter += 1;
        if self.counter >= 1u64 << self.free_bits.len() {
            if self.advance_pivots() {
                self.recompute_free_positions();
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}

/// An affine subspace `offset + direction` of `Mat_{n,p}(F2)`. The stored
/// offset is the canonical coset representative: its flattening has zeros at
/// every pivot of the direction's echelon basis, so equal affine spaces are
/// represented identically. The space contains zero iff the stored offset is
/// the zero matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineMatSpace {
    direction: MatSubspace,
    offset: u64,
}

impl AffineMatSpace {
    pub fn new(direction: MatSubspace, offset: &BitMatrix) -> Result<Self, Error> {
        if offset.shape() != direction.shape() {
            return Err(Error::shape(
                "affine offset",
                format!("{:?}", direction.shape()),
                format!("{:?}", offset.shape()),
            ));
        }
        Ok(Self::from_flat(direction, offset.flatten()))
    }

    pub(crate) fn from_flat(direction: MatSubspace, offset: u64) -> Self {
        let offset = direction.echelon().reduce(offset);
        AffineMatSpace { direction, offset }
    }

    pub fn direction(&self) -> &MatSubspace {
        &self.direction
    }

    pub fn offset_flat(&self) -> u64 {
        self.offset
    }

    pub fn offset_matrix(&self) -> BitMatrix {
        BitMatrix::unflatten(self.offset, self.direction.n_rows, self.direction.n_cols)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.direction.shape()
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn codim(&self) -> usize {
        self.direction.codim()
    }

    pub fn contains_zero(&self) -> bool {
        self.offset == 0
    }

    pub fn contains(&self, m: &BitMatrix) -> bool {
        assert_eq!(m.shape(), self.shape(), "shape mismatch in contains");
        self.direction.contains_flat(m.flatten() ^ self.offset)
    }

    pub fn elements_flat(&self) -> Result<impl Iterator<Item = u64> + '_, Error> {
        let off = self.offset;
        Ok(self.direction.elements_flat()?.map(move |w| w ^ off))
    }

    /// Transform by `(P, Q_inv)` exactly as for linear subspaces; the coset
    /// representative is renormalized.
    pub fn act(&self, p: &BitMatrix, q_inv: &BitMatrix) -> AffineMatSpace {
        let dir = self.direction.act(p, q_inv);
        let off = p.matmul(&self.offset_matrix()).matmul(q_inv).flatten();
        AffineMatSpace::from_flat(dir, off)
    }

    pub fn transpose(&self) -> AffineMatSpace {
        let dir = self.direction.transpose_space();
        let off = self.offset_matrix().transpose().flatten();
        AffineMatSpace::from_flat(dir, off)
    }

    /// The linear span of the affine space: direction plus offset line.
    pub fn linear_span(&self) -> MatSubspace {
        let mut ech = self.direction.ech.clone();
        ech.insert(self.offset);
        MatSubspace {
            n_rows: self.direction.n_rows,
            n_cols: self.direction.n_cols,
            ech,
        }
    }
}

impl std::fmt::Debug for AffineMatSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "AffineMatSpace {}x{} dim {} offset {:#x} dir {:?}",
            self.direction.n_rows,
            self.direction.n_cols,
            self.dim(),
            self.offset,
            self.direction.ech.rows()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmat::BitMatrix;
    use proptest::prelude::*;

    fn mats2() -> MatSubspace {
        let e11 = BitMatrix::from_lines(&["10", "00"]);
        let e12_21 = BitMatrix::from_lines(&["01", "10"]);
        let e22 = BitMatrix::from_lines(&["00", "01"]);
        MatSubspace::span(&[e11, e12_21, e22], 2, 2).unwrap()
    }

    #[test]
    fn span_examples() {
        let s = mats2();
        assert_eq!(s.dim(), 3);
        assert!(s.contains(&BitMatrix::from_lines(&["11", "11"])));
        assert!(!s.contains(&BitMatrix::from_lines(&["01", "00"])));

        let empty = MatSubspace::span(&[], 2, 2).unwrap();
        assert_eq!(empty.dim(), 0);

        let m = BitMatrix::from_lines(&["11", "00"]);
        let dup = MatSubspace::span(&[m.clone(), m], 2, 2).unwrap();
        assert_eq!(dup.dim(), 1);

        let wrong = BitMatrix::zeros(3, 2);
        assert!(MatSubspace::span(&[wrong], 2, 2).is_err());
    }

    #[test]
    fn orthogonal_of_symmetric_is_alternating() {
        let s = mats2();
        let o = s.orthogonal();
        assert_eq!(o.shape(), (2, 2));
        assert_eq!(o.dim(), 1);
        assert!(o.contains(&BitMatrix::from_lines(&["01", "10"])));

        let full = MatSubspace::full_space(3, 2);
        assert_eq!(full.orthogonal().dim(), 0);
    }

    #[test]
    fn double_orthogonal_exhaustive_mat22() {
        for k in 0..=4 {
            for s in enumerate_subspaces(2, 2, k).unwrap() {
                assert_eq!(s.orthogonal().orthogonal(), s);
            }
        }
    }

    #[test]
    fn vee_and_coprod_dimensions() {
        let s = mats2();
        let m11 = MatSubspace::full_space(1, 1);
        let v = s.vee(&m11);
        assert_eq!(v.shape(), (3, 3));
        assert_eq!(v.dim(), 6);
        assert_eq!(v.codim(), 3);

        // empty block leaves the space unchanged
        let empty = MatSubspace::full_space(0, 0);
        let v2 = s.vee(&empty);
        assert_eq!(v2.shape(), (2, 2));
        assert_eq!(v2, s);

        let e11 = BitMatrix::from_lines(&["100", "000", "000"]);
        let sym3_gens: Vec<BitMatrix> = vec![
            e11,
            BitMatrix::from_lines(&["010", "100", "000"]),
            BitMatrix::from_lines(&["001", "000", "100"]),
            BitMatrix::from_lines(&["000", "010", "000"]),
            BitMatrix::from_lines(&["000", "001", "010"]),
            BitMatrix::from_lines(&["000", "000", "001"]),
        ];
        let mats3 = MatSubspace::span(&sym3_gens, 3, 3).unwrap();
        let m31 = MatSubspace::full_space(3, 1);
        let c = mats3.coprod(&m31).unwrap();
        assert_eq!(c.shape(), (3, 4));
        assert_eq!(c.dim(), 9);

        let zero_cols = MatSubspace::full_space(3, 0);
        let same = mats3.coprod(&zero_cols).unwrap();
        assert_eq!(same, mats3);

        let bad = MatSubspace::full_space(2, 1);
        assert!(mats3.coprod(&bad).is_err());
    }

    #[test]
    fn apply_examples() {
        let full = MatSubspace::full_space(3, 2);
        let x = BitVector::from_bits(2, 0b01);
        assert_eq!(full.apply(&x).unwrap().dim(), 3);
        let zero = BitVector::zero(2);
        assert_eq!(full.apply(&zero).unwrap().dim(), 0);
        assert!(full.apply(&BitVector::zero(3)).is_err());
    }

    #[test]
    fn reduce_examples() {
        // an already reduced space comes back unchanged
        let s = mats2();
        let r = s.reduce();
        assert_eq!(r.u0_dim, 0);
        assert_eq!(r.v0_dim, 2);
        assert_eq!(r.reduced, s);

        // Mats_2 embedded in the upper-left corner of Mat_3
        let gens: Vec<BitMatrix> = mats2()
            .basis_matrices()
            .iter()
            .map(|m| {
                let mut big = BitMatrix::zeros(3, 3);
                for i in 0..2 {
                    for j in 0..2 {
                        big.set(i, j, m.get(i, j));
                    }
                }
                big
            })
            .collect();
        let emb = MatSubspace::span(&gens, 3, 3).unwrap();
        let r = emb.reduce();
        assert_eq!((r.u0_dim, r.v0_dim), (1, 2));
        assert_eq!(r.reduced, mats2());

        let z = MatSubspace::zero_space(2, 2);
        let r = z.reduce();
        assert_eq!((r.u0_dim, r.v0_dim), (2, 0));
        assert_eq!(r.reduced.shape(), (0, 0));
        assert_eq!(r.reduced.dim(), 0);
    }

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    #[test]
    fn reduce_is_idempotent() {
        let mut rng = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            let words: Vec<u64> = (0..3).map(|_| xorshift(&mut rng) & width_mask(9)).collect();
            let s = MatSubspace::from_flat(3, 3, words);
            let r1 = s.reduce().reduced;
            let r2 = r1.reduce().reduced;
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn hat_of_mats2() {
        let s = mats2();
        // stored basis is (E11, E12+E21, E22); x = e1 gives [[1,0,0],[0,1,0]]
        let h = s.hat();
        assert_eq!(h.shape(), (2, 3));
        let gen = BitMatrix::from_lines(&["100", "010"]);
        assert!(h.contains(&gen));
        assert_eq!(h.dim(), 2);
    }

    #[test]
    fn quotient_mod_examples() {
        let full = MatSubspace::full_space(3, 2);
        let y = BitVector::from_bits(3, 0b100);
        let q = full.quotient_mod(&y).unwrap();
        assert_eq!(q.shape(), (2, 2));
        assert_eq!(q.dim(), 4);
        assert!(full.quotient_mod(&BitVector::zero(3)).is_err());
    }

    #[test]
    fn quotient_codimension_identity_random() {
        let mut rng = 0xdeadbeefu64;
        for _ in 0..100 {
            let words: Vec<u64> = (0..4).map(|_| xorshift(&mut rng) & width_mask(9)).collect();
            let s = MatSubspace::from_flat(3, 3, words);
            let sperp = s.orthogonal();
            for yb in 1u64..8 {
                let y = BitVector::from_bits(3, yb);
                let q = s.quotient_mod(&y).unwrap();
                let sy = sperp.apply_dim(yb);
                assert_eq!(q.codim(), s.codim() - sy);
            }
        }
    }

    #[test]
    fn element_enumeration() {
        let z = MatSubspace::zero_space(1, 1);
        assert_eq!(z.elements_flat().unwrap().collect::<Vec<_>>(), vec![0]);

        let s = mats2();
        let els: Vec<u64> = s.elements_flat().unwrap().collect();
        assert_eq!(els.len(), 8);
        let set: std::collections::HashSet<u64> = els.into_iter().collect();
        assert_eq!(set.len(), 8);
    }

    #[test]
    fn subspace_enumeration_counts() {
        assert_eq!(enumerate_subspaces(2, 2, 2).unwrap().count() as u64, 35);
        assert_eq!(gaussian_binomial(4, 2), 35);
        assert_eq!(enumerate_subspaces(2, 2, 0).unwrap().count(), 1);
        assert_eq!(gaussian_binomial(9, 6), 788035);
        for k in 0..=6 {
            assert_eq!(
                enumerate_subspaces(2, 3, k).unwrap().count() as u64,
                gaussian_binomial(6, k),
            );
        }
        assert!(enumerate_subspaces(4, 4, 2).is_err());
    }

    #[test]
    fn affine_normalization() {
        let dir = MatSubspace::span(&[BitMatrix::from_lines(&["10", "00"])], 2, 2).unwrap();
        let off = BitMatrix::from_lines(&["11", "00"]);
        let a = AffineMatSpace::new(dir.clone(), &off).unwrap();
        // offset reduced modulo the direction pivot: only the (0,1) entry survives
        assert_eq!(a.offset_matrix(), BitMatrix::from_lines(&["01", "00"]));
        assert!(!a.contains_zero());
        assert!(a.contains(&off));
        assert!(a.contains(&BitMatrix::from_lines(&["01", "00"])));
        assert!(!a.contains(&BitMatrix::zeros(2, 2)));

        let b = AffineMatSpace::new(dir, &BitMatrix::from_lines(&["10", "00"])).unwrap();
        assert!(b.contains_zero());
    }

    proptest! {
        #[test]
        fn double_orthogonal_random(words in proptest::collection::vec(any::<u64>(), 1..6)) {
            let s = MatSubspace::from_flat(3, 4, words.into_iter().map(|w| w & width_mask(12)));
            prop_assert_eq!(s.orthogonal().orthogonal(), s);
        }

        #[test]
        fn vee_coprod_dim_formulas(
            wa in proptest::collection::vec(any::<u64>(), 0..4),
            wb in proptest::collection::vec(any::<u64>(), 0..4),
        ) {
            let a = MatSubspace::from_flat(2, 2, wa.into_iter().map(|w| w & width_mask(4)));
            let b = MatSubspace::from_flat(2, 2, wb.into_iter().map(|w| w & width_mask(4)));
            let v = a.vee(&b);
            prop_assert_eq!(v.dim(), a.dim() + b.dim() + 2 * 2);
            let c = a.coprod(&b).unwrap();
            prop_assert_eq!(c.dim(), a.dim() + b.dim());
        }
    }
}
