//! Dense exact matrices over a cyclotomic field, reduced row echelon form
//! and kernels.
//!
//! Elimination is fraction-free in the forward pass (Bareiss cross-
//! multiplication with division by the previous pivot) followed by one
//! normalization pass, with deterministic leftmost-column / first-nonzero-row
//! pivoting. The reduced row echelon form of a matrix is unique, so every
//! reported basis is reproducible byte for byte.

use num::integer::lcm;
use num::BigInt;
use num::One;

use crate::scalar::Cyclotomic;

pub type Vector = Vec<Cyclotomic>;

pub fn vec_zero(n: usize, order: u64) -> Vector {
    vec![Cyclotomic::zero(order); n]
}

pub fn vec_is_zero(v: &[Cyclotomic]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn vec_add(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn vec_sub(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn vec_scale(c: &Cyclotomic, a: &[Cyclotomic]) -> Vector {
    a.iter().map(|x| c.mul_ref(x)).collect()
}

/// a += c * b
pub fn vec_add_mul(a: &mut [Cyclotomic], c: &Cyclotomic, b: &[Cyclotomic]) {
    for (x, y) in a.iter_mut().zip(b) {
        x.add_mul_assign(c, y);
    }
}

/// Dense row-major matrix with entries in one cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    order: u64,
    entries: Vec<Cyclotomic>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, order: u64) -> Self {
        ExactMatrix {
            rows,
            cols,
            order,
            entries: vec![Cyclotomic::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u64) -> Self {
        let mut m = ExactMatrix::zeros(n, n, order);
        for i in 0..n {
            m.set(i, i, Cyclotomic::one(order));
        }
        m
    }

    /// Build from rows, promoting every entry into Q(zeta_lcm).
    pub fn from_rows(rows_in: Vec<Vector>) -> Self {
        let rows = rows_in.len();
        let cols = rows_in.first().map(|r| r.len()).unwrap_or(0);
        let mut order = 1u64;
        for r in &rows_in {
            assert_eq!(r.len(), cols, "ragged rows");
            for e in r {
                order = lcm(order, e.order());
            }
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in rows_in {
            for e in r {
                entries.push(e.promote(order).unwrap());
            }
        }
        ExactMatrix {
            rows,
            cols,
            order,
            entries,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        order: u64,
        mut f: impl FnMut(usize, usize) -> Cyclotomic,
    ) -> Self {
        let mut m = ExactMatrix::zeros(rows, cols, order);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
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

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.order = lcm(self.order, v.order());
        if self.order != v.order() {
            self.entries[i * self.cols + j] = v.promote(self.order).unwrap();
            self.promote_all();
        } else {
            self.entries[i * self.cols + j] = v;
        }
    }

    fn promote_all(&mut self) {
        let order = self.order;
        for e in &mut self.entries {
            if e.order() != order {
                *e = e.promote(order).unwrap();
            }
        }
    }

    pub fn promote(&self, order: u64) -> ExactMatrix {
        let order = lcm(order, self.order);
        let mut m = self.clone();
        m.order = order;
        m.promote_all();
        m
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vector {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.cols, self.rows, self.order, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let order = lcm(self.order, other.order);
        let (a, b) = (self.promote(order), other.promote(order));
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.add_ref(y))
            .collect();
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries,
        }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let order = lcm(self.order, other.order);
        let (a, b) = (self.promote(order), other.promote(order));
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.sub_ref(y))
            .collect();
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries,
        }
    }

    pub fn neg(&self) -> ExactMatrix {
        let entries = self.entries.iter().map(|x| x.neg_ref()).collect();
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries,
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> ExactMatrix {
        let order = lcm(self.order, c.order());
        let a = self.promote(order);
        let c = c.promote(order).unwrap();
        let entries = a.entries.iter().map(|x| x.mul_ref(&c)).collect();
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries,
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let order = lcm(self.order, other.order);
        let a = self.promote(order);
        let b = other.promote(order);
        let mut out = ExactMatrix::zeros(self.rows, other.cols, order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = a.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = b.get(k, j);
                    if !t.is_zero() {
                        out.entries[i * out.cols + j].add_mul_assign(aik, t);
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product (vector as a column).
    pub fn apply(&self, v: &[Cyclotomic]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix apply shape mismatch");
        let mut out = vec_zero(self.rows, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if !aik.is_zero() && !v[k].is_zero() {
                    out[i].add_mul_assign(aik, &v[k]);
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, other.rows);
        let order = lcm(self.order, other.order);
        ExactMatrix::from_fn(self.rows, self.cols + other.cols, order, |i, j| {
            if j < self.cols {
                self.get(i, j).promote(order).unwrap()
            } else {
                other.get(i, j - self.cols).promote(order).unwrap()
            }
        })
    }

    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols);
        let order = lcm(self.order, other.order);
        ExactMatrix::from_fn(self.rows + other.rows, self.cols, order, |i, j| {
            if i < self.rows {
                self.get(i, j).promote(order).unwrap()
            } else {
                other.get(i - self.rows, j).promote(order).unwrap()
            }
        })
    }

    /// Flatten row-major into one vector.
    pub fn flatten(&self) -> Vector {
        self.entries.clone()
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let order = self.order;
        let mut rows: Vec<Vector> = (0..self.rows).map(|i| self.row_vec(i)).collect();
        // Clear denominators row by row so the forward pass works on
        // integral entries.
        for row in &mut rows {
            let mut denom = BigInt::one();
            for e in row.iter() {
                denom = lcm(denom, e.denominator_lcm());
            }
            if !denom.is_one() {
                for e in row.iter_mut() {
                    *e = e.scale_int(&denom);
                }
            }
        }
        let cols = self.cols;
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        let mut prev_pivot = Cyclotomic::one(order);
        // Fraction-free forward elimination.
        for c in 0..cols {
            let mut pr = None;
            for i in r..rows.len() {
                if !rows[i][c].is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(p) = pr else { continue };
            rows.swap(r, p);
            let pivot = rows[r][c].clone();
            let prev_inv = prev_pivot.inv().expect("previous pivot nonzero");
            for i in r + 1..rows.len() {
                let f = rows[i][c].clone();
                if f.is_zero() {
                    for k in c..cols {
                        if !rows[i][k].is_zero() {
                            let t = rows[i][k].mul_ref(&pivot).mul_ref(&prev_inv);
                            rows[i][k] = t;
                        }
                    }
                    continue;
                }
                for k in c..cols {
                    let mut t = rows[i][k].mul_ref(&pivot);
                    t.sub_mul_assign(&f, &rows[r][k]);
                    rows[i][k] = t.mul_ref(&prev_inv);
                }
            }
            prev_pivot = pivot;
            pivot_cols.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let rank = pivot_cols.len();
        // Division pass: normalize pivots to 1 and clear above.
        for (ri, &pc) in pivot_cols.iter().enumerate().rev() {
            let inv = rows[ri][pc].inv().expect("pivot nonzero");
            for k in pc..cols {
                if !rows[ri][k].is_zero() {
                    rows[ri][k] = rows[ri][k].mul_ref(&inv);
                }
            }
            for i in 0..ri {
                let f = rows[i][pc].clone();
                if !f.is_zero() {
                    for k in pc..cols {
                        let t = rows[ri][k].clone();
                        if !t.is_zero() {
                            rows[i][k].sub_mul_assign(&f, &t);
                        }
                    }
                }
            }
        }
        for row in rows.iter_mut().skip(rank) {
            for e in row.iter_mut() {
                *e = Cyclotomic::zero(order);
            }
        }
        Rref {
            matrix: ExactMatrix::from_rows(rows).promote(order),
            rank,
            pivot_cols,
        }
    }

    /// Kernel of the matrix acting on column vectors.
    pub fn nullspace(&self) -> crate::subspace::Subspace {
        let mut builder = RrefBuilder::new(self.cols, self.order);
        for i in 0..self.rows {
            builder.push_row(self.row_vec(i));
        }
        builder.kernel()
    }

    /// One solution of self * x = rhs (free variables set to zero),
    /// or None when the system is inconsistent.
    pub fn solve(&self, rhs: &[Cyclotomic]) -> Option<Vector> {
        assert_eq!(self.rows, rhs.len());
        let order = lcm(self.order, rhs.iter().fold(1u64, |o, c| lcm(o, c.order())));
        let aug = self.hstack(&ExactMatrix::from_rows(
            rhs.iter().map(|c| vec![c.clone()]).collect::<Vec<_>>(),
        ));
        let red = aug.promote(order).rref();
        let n = self.cols;
        let mut x = vec_zero(n, order);
        for (ri, &pc) in red.pivot_cols.iter().enumerate() {
            if pc == n {
                return None; // pivot in the rhs column: inconsistent
            }
            x[pc] = red.matrix.get(ri, n).clone();
        }
        Some(x)
    }
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "ExactMatrix {}x{} (order {}):",
            self.rows, self.cols, self.order
        )?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub struct Rref {
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Incremental reduced-row-echelon accumulator.
///
/// Rows are fed one at a time and the canonical RREF basis of the row space
/// is maintained throughout; since the RREF of a subspace is unique the
/// result does not depend on insertion order.
pub struct RrefBuilder {
    cols: usize,
    order: u64,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl RrefBuilder {
    pub fn new(cols: usize, order: u64) -> Self {
        RrefBuilder {
            cols,
            order,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the current basis in place.
    pub fn reduce(&self, v: &mut Vector) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for k in pc..self.cols {
                    if !row[k].is_zero() {
                        v[k].sub_mul_assign(&f, &row[k]);
                    }
                }
            }
        }
    }

    /// Insert a row; returns true when the rank grew.
    pub fn push_row(&mut self, mut v: Vector) -> bool {
        if v.iter().any(|c| c.order() != self.order) {
            self.order = v.iter().fold(self.order, |o, c| lcm(o, c.order()));
            for row in &mut self.rows {
                for e in row.iter_mut() {
                    *e = e.promote(self.order).unwrap();
                }
            }
            for e in v.iter_mut() {
                *e = e.promote(self.order).unwrap();
            }
        }
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[pc].inv().expect("nonzero leading entry");
        for k in pc..self.cols {
            if !v[k].is_zero() {
                v[k] = v[k].mul_ref(&inv);
            }
        }
        // Clear the new pivot column from the existing rows.
        for row in &mut self.rows {
            if !row[pc].is_zero() {
                let f = row[pc].clone();
                for k in pc..self.cols {
                    if !v[k].is_zero() {
                        row[k].sub_mul_assign(&f, &v[k]);
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        true
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        if self.rows.is_empty() {
            ExactMatrix::zeros(0, self.cols, self.order)
        } else {
            ExactMatrix::from_rows(self.rows.clone()).promote(self.order)
        }
    }

    /// Canonical kernel of the accumulated row space.
    pub fn kernel(&self) -> crate::subspace::Subspace {
        let piv: std::collections::BTreeSet<usize> = self.pivots.iter().copied().collect();
        let mut basis = RrefBuilder::new(self.cols, self.order);
        for f in 0..self.cols {
            if piv.contains(&f) {
                continue;
            }
            let mut v = vec_zero(self.cols, self.order);
            v[f] = Cyclotomic::one(self.order);
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                if !row[f].is_zero() {
                    v[pc] = row[f].neg_ref();
                }
            }
            basis.push_row(v);
        }
        crate::subspace::Subspace::from_rref_builder(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n, 1)
    }

    #[test]
    fn identity_rref_is_identity() {
        let id = ExactMatrix::identity(3, 1);
        let r = id.rref();
        assert_eq!(r.rank, 3);
        assert_eq!(r.matrix, id);
    }

    #[test]
    fn zero_matrix_rref() {
        let z = ExactMatrix::zeros(2, 4, 1);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.matrix.is_zero());
    }

    #[test]
    fn dependent_rows_over_gaussian_integers() {
        // Second row is zeta_4 times the first, so the rank is 1.
        let i = Cyclotomic::root_of_unity(4, 1);
        let m = ExactMatrix::from_rows(vec![
            vec![Cyclotomic::one(4), i.clone()],
            vec![i.clone(), Cyclotomic::from_integer(-1, 4)],
        ]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_cols, vec![0]);
        assert_eq!(*r.matrix.get(0, 1), i);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = ExactMatrix::from_rows(vec![
            vec![c(2), c(4), c(-2)],
            vec![c(1), c(2), c(0)],
            vec![c(3), c(6), c(-2)],
        ]);
        let r1 = m.rref();
        let r2 = r1.matrix.rref();
        assert_eq!(r1.matrix, r2.matrix);
        assert_eq!(r1.rank, r2.rank);
    }

    #[test]
    fn nullspace_of_identity_and_zero() {
        assert_eq!(ExactMatrix::identity(4, 1).nullspace().dim(), 0);
        assert_eq!(ExactMatrix::zeros(2, 3, 1).nullspace().dim(), 3);
        let m = ExactMatrix::from_rows(vec![vec![c(1), c(1), c(0)]]);
        assert_eq!(m.nullspace().dim(), 2);
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for trial in 0..200 {
            let order = if trial % 3 == 0 { 4 } else { 1 };
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = ExactMatrix::from_fn(rows, cols, order, |_, _| {
                let n = rng.gen_range(-2i64..=2);
                let base = Cyclotomic::from_integer(n, order);
                if order > 1 && rng.gen_bool(0.3) {
                    base.mul_ref(&Cyclotomic::root_of_unity(order, 1))
                } else {
                    base
                }
            });
            let r = m.rref();
            let k = m.nullspace();
            assert_eq!(r.rank + k.dim(), cols);
            // Kernel vectors actually lie in the kernel.
            for bi in 0..k.dim() {
                let v = k.basis_row(bi);
                assert!(vec_is_zero(&m.apply(&v)));
            }
        }
    }

    #[test]
    fn incremental_builder_matches_batch_rref() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = ExactMatrix::from_fn(rows, cols, 1, |_, _| c(rng.gen_range(-3i64..=3)));
            let batch = m.rref();
            let mut b = RrefBuilder::new(cols, 1);
            for i in 0..rows {
                b.push_row(m.row_vec(i));
            }
            assert_eq!(b.rank(), batch.rank);
            let bm = b.to_matrix();
            for i in 0..batch.rank {
                assert_eq!(bm.row(i), batch.matrix.row(i));
            }
        }
    }

    #[test]
    fn solve_augmented() {
        let m = ExactMatrix::from_rows(vec![vec![c(1), c(2)], vec![c(0), c(1)]]);
        let x = m.solve(&[c(5), c(2)]).unwrap();
        assert_eq!(x, vec![c(1), c(2)]);
        let inconsistent = ExactMatrix::from_rows(vec![vec![c(1), c(1)], vec![c(1), c(1)]]);
        assert!(inconsistent.solve(&[c(0), c(1)]).is_none());
    }
}
