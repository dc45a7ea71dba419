//! Dense linear algebra over the two-element field.
//!
//! Rows are packed into `u64` words. Elimination always picks the lowest
//! available column as the next pivot, so every basis this module returns
//! is reproducible bit-for-bit.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::Gf2Error;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
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
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn add_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Coordinatewise product (the ring multiplication of a Boolean ring).
    pub fn and(&self, other: &Gf2Vector) -> Gf2Vector {
        assert_eq!(self.len, other.len, "vector length mismatch");
        Gf2Vector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn sum(&self, other: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Gf2Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let bits: Vec<u8> = (0..self.len).map(|i| u8::from(self.get(i))).collect();
        bits.serialize(serializer)
    }
}

/// Dense GF(2) matrix, row-major with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Gf2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, &bit) in row.iter().enumerate() {
                m.set(r, c, bit & 1 == 1);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Gf2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has wrong length");
            for r in col.support() {
                m.set(r, c, true);
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
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c);
    }

    pub fn row(&self, r: usize) -> &Gf2Vector {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<Gf2Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Gf2Vector::is_zero)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].support() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "mul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc = Gf2Vector::zeros(other.cols);
            for k in self.data[r].support() {
                acc.add_assign(&other.data[k]);
            }
            out.data[r] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self.data[r]
                .words
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            out.set(r, parity % 2 == 1);
        }
        out
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_assign(b);
        }
        Ok(out)
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "hstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Gf2Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.data[r].support() {
                out.set(r, c, true);
            }
            for c in other.data[r].support() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "vstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Gf2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn block_diag(&self, other: &Gf2Matrix) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.data[r].support() {
                out.set(r, c, true);
            }
        }
        for r in 0..other.rows {
            for c in other.data[r].support() {
                out.set(self.rows + r, self.cols + c, true);
            }
        }
        out
    }

    /// Submatrix picking the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(ri, ci, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns, lowest column first.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for c in 0..self.cols {
            if next_row == self.rows {
                break;
            }
            let Some(p) = (next_row..self.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.data.swap(next_row, p);
            let pivot_row = m.data[next_row].clone();
            for r in 0..self.rows {
                if r != next_row && m.get(r, c) {
                    m.data[r].add_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{v : M v = 0}`.
    ///
    /// One vector per free column, in increasing free-column order; each has a
    /// single 1 among the free coordinates.
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = Gf2Vector::unit(self.cols, free);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Columns of `self` forming a basis of the column space (greedy, left to right).
    pub fn column_space_basis(&self) -> Vec<usize> {
        self.transpose().row_basis_indices()
    }

    fn row_basis_indices(&self) -> Vec<usize> {
        let mut reduced: Vec<(usize, Gf2Vector)> = Vec::new();
        let mut chosen = Vec::new();
        for r in 0..self.rows {
            let mut v = self.data[r].clone();
            for (pivot, basis_row) in &reduced {
                if v.get(*pivot) {
                    v.add_assign(basis_row);
                }
            }
            if let Some(p) = v.first_one() {
                for (_, basis_row) in reduced.iter_mut() {
                    if basis_row.get(p) {
                        basis_row.add_assign(&v);
                    }
                }
                reduced.push((p, v));
                chosen.push(r);
            }
        }
        chosen
    }

    /// Whether `v` lies in the column space.
    pub fn column_space_contains(&self, v: &Gf2Vector) -> bool {
        let extended = self
            .hstack(&Gf2Matrix::from_columns(self.rows, std::slice::from_ref(v)))
            .expect("row counts agree");
        extended.rank() == self.rank()
    }

    /// Standard basis vectors completing the column space to the whole space,
    /// i.e. representatives of a basis of the cokernel.
    pub fn cokernel_representatives(&self) -> Vec<Gf2Vector> {
        let mut acc = self.clone();
        let mut reps = Vec::new();
        let mut rank = acc.rank();
        for i in 0..self.rows {
            let e = Gf2Vector::unit(self.rows, i);
            let trial = acc
                .hstack(&Gf2Matrix::from_columns(self.rows, std::slice::from_ref(&e)))
                .expect("row counts agree");
            let trial_rank = trial.rank();
            if trial_rank > rank {
                acc = trial;
                rank = trial_rank;
                reps.push(e);
            }
        }
        reps
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.data[r])?;
        }
        Ok(())
    }
}

impl Serialize for Gf2Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&Gf2Vector> = self.data.iter().collect();
        rows.serialize(serializer)
    }
}

pub fn rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Gf2Matrix) -> Vec<Gf2Vector> {
    m.kernel_basis()
}

/// A two-term cochain complex `C^0 --delta--> C^1`.
///
/// Every complex over a one-dimensional parameter space has this shape.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub delta: Gf2Matrix,
}

impl CochainComplex {
    pub fn new(delta: Gf2Matrix) -> Self {
        Self { delta }
    }

    pub fn dim0(&self) -> usize {
        self.delta.cols()
    }

    pub fn dim1(&self) -> usize {
        self.delta.rows()
    }

    /// `(dim H^0, dim H^1)`
    pub fn cohomology_dims(&self) -> (usize, usize) {
        let r = self.delta.rank();
        (self.dim0() - r, self.dim1() - r)
    }
}

/// Cohomology of the mapping cone of a chain map `i: total -> sub`.
///
/// The cone is `K^0 = C^0`, `K^1 = C^1 ⊕ C'^0`, `K^2 = C'^1` with
/// `d^0 = [δ; i^0]` and `d^1 = [i^1 | δ']`; its cohomology is the relative
/// cohomology of the pair. Returns `[H^0, H^1, H^2]`.
pub fn cone_cohomology(
    i_star_0: &Gf2Matrix,
    i_star_1: &Gf2Matrix,
    total: &CochainComplex,
    sub: &CochainComplex,
) -> Result<[usize; 3], Gf2Error> {
    let expect = |m: &Gf2Matrix, rows: usize, cols: usize, what: &'static str| {
        if m.rows() != rows || m.cols() != cols {
            Err(Gf2Error::DimensionMismatch {
                op: what,
                left: (m.rows(), m.cols()),
                right: (rows, cols),
            })
        } else {
            Ok(())
        }
    };
    expect(i_star_0, sub.dim0(), total.dim0(), "chain map degree 0")?;
    expect(i_star_1, sub.dim1(), total.dim1(), "chain map degree 1")?;

    let lhs = i_star_1.mul(&total.delta)?;
    let rhs = sub.delta.mul(i_star_0)?;
    if lhs != rhs {
        return Err(Gf2Error::NotAChainMap);
    }

    let d0 = total.delta.vstack(i_star_0)?;
    let d1 = i_star_1.hstack(&sub.delta)?;
    debug_assert!(d1.mul(&d0)?.is_zero());

    let k0 = d0.cols();
    let k1 = d0.rows();
    let k2 = d1.rows();
    let r0 = d0.rank();
    let r1 = d1.rank();
    Ok([k0 - r0, k1 - r0 - r1, k2 - r1])
}
