//! Subspaces of Q(zeta_m)^n in canonical reduced row echelon form.
//!
//! The basis matrix is the unique RREF basis of the span, so subspace
//! equality is representation equality.

use crate::error::Error;
use crate::matrix::{vec_zero, ExactMatrix, RrefBuilder, Vector};
use crate::scalar::Cyclotomic;

#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    order: u64,
    basis: ExactMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize, order: u64) -> Self {
        Subspace {
            ambient,
            order,
            basis: ExactMatrix::zeros(0, ambient, order),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize, order: u64) -> Self {
        Subspace {
            ambient,
            order,
            basis: ExactMatrix::identity(ambient, order),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors(ambient: usize, order: u64, vectors: &[Vector]) -> Self {
        let mut b = RrefBuilder::new(ambient, order);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector/ambient mismatch");
            b.push_row(v.clone());
        }
        Subspace::from_rref_builder(b)
    }

    pub(crate) fn from_rref_builder(b: RrefBuilder) -> Self {
        let basis = b.to_matrix();
        Subspace {
            ambient: basis.cols(),
            order: basis.order(),
            pivots: b.pivots().to_vec(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn basis_row(&self, i: usize) -> Vector {
        self.basis.row_vec(i)
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = Vector> + '_ {
        (0..self.dim()).map(|i| self.basis_row(i))
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// v minus its canonical projection onto the subspace: the remainder of
    /// reduction against the RREF basis. Zero iff v is a member.
    pub fn reduce_mod(&self, v: &[Cyclotomic]) -> Vector {
        assert_eq!(v.len(), self.ambient);
        let mut w: Vector = v.to_vec();
        for (ri, &pc) in self.pivots.iter().enumerate() {
            if !w[pc].is_zero() {
                let f = w[pc].clone();
                let row = self.basis.row(ri);
                for k in pc..self.ambient {
                    if !row[k].is_zero() {
                        w[k].sub_mul_assign(&f, &row[k]);
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Cyclotomic]) -> bool {
        self.reduce_mod(v).iter().all(|c| c.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_rows().all(|v| self.contains(&v))
    }

    /// Coefficients of v over the basis rows, or None when v is outside.
    pub fn coordinates(&self, v: &[Cyclotomic]) -> Option<Vector> {
        let mut w: Vector = v.to_vec();
        let mut coords = vec_zero(self.dim(), self.order);
        for (ri, &pc) in self.pivots.iter().enumerate() {
            if !w[pc].is_zero() {
                let f = w[pc].clone();
                let row = self.basis.row(ri);
                for k in pc..self.ambient {
                    if !row[k].is_zero() {
                        w[k].sub_mul_assign(&f, &row[k]);
                    }
                }
                coords[ri] = f;
            }
        }
        if w.iter().all(|c| c.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    /// Linear combination of the basis rows.
    pub fn from_coordinates(&self, coords: &[Cyclotomic]) -> Vector {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec_zero(self.ambient, self.order);
        for (ri, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let row = self.basis.row(ri);
                for k in 0..self.ambient {
                    if !row[k].is_zero() {
                        out[k].add_mul_assign(c, &row[k]);
                    }
                }
            }
        }
        out
    }

    /// Coordinates in the canonical complement: the non-pivot components of
    /// the reduction of v. This is the quotient map ambient -> ambient/self.
    pub fn quotient_coords(&self, v: &[Cyclotomic]) -> Vector {
        let w = self.reduce_mod(v);
        let mut out = Vec::with_capacity(self.ambient - self.dim());
        let mut pi = 0;
        for k in 0..self.ambient {
            if pi < self.pivots.len() && self.pivots[pi] == k {
                pi += 1;
            } else {
                out.push(w[k].clone());
            }
        }
        out
    }

    /// The canonical section of `quotient_coords`: place the coordinates at
    /// the non-pivot positions.
    pub fn section_vector(&self, coords: &[Cyclotomic]) -> Vector {
        assert_eq!(coords.len(), self.ambient - self.dim());
        let mut out = vec_zero(self.ambient, self.order);
        let mut pi = 0;
        let mut ci = 0;
        for k in 0..self.ambient {
            if pi < self.pivots.len() && self.pivots[pi] == k {
                pi += 1;
            } else {
                out[k] = coords[ci].clone();
                ci += 1;
            }
        }
        out
    }

    /// Indices of the non-pivot coordinates (the canonical representatives
    /// of the quotient by this subspace).
    pub fn complement_coords(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut pi = 0;
        for k in 0..self.ambient {
            if pi < self.pivots.len() && self.pivots[pi] == k {
                pi += 1;
            } else {
                out.push(k);
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut b = RrefBuilder::new(self.ambient, self.order);
        for v in self.basis_rows() {
            b.push_row(v);
        }
        for v in other.basis_rows() {
            b.push_row(v);
        }
        Ok(Subspace::from_rref_builder(b))
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let n = self.ambient;
        let order = num::integer::lcm(self.order, other.order);
        let mut rows: Vec<Vector> = Vec::new();
        for u in self.basis_rows() {
            let mut r = u.clone();
            r.extend(u);
            rows.push(r);
        }
        for v in other.basis_rows() {
            let mut r = v;
            r.extend(vec_zero(n, order));
            rows.push(r);
        }
        if rows.is_empty() {
            return Ok(Subspace::zero(n, order));
        }
        let red = ExactMatrix::from_rows(rows).rref();
        let mut b = RrefBuilder::new(n, order);
        for i in 0..red.rank {
            let left = &red.matrix.row(i)[..n];
            if left.iter().all(|c| c.is_zero()) {
                b.push_row(red.matrix.row(i)[n..].to_vec());
            }
        }
        Ok(Subspace::from_rref_builder(b))
    }

    /// dim(self / (self ∩ other)).
    pub fn quotient_dim(&self, other: &Subspace) -> Result<usize, Error> {
        let inter = self.intersect(other)?;
        Ok(self.dim() - inter.dim())
    }

    /// Representatives completing `sub` to self; `sub` must be contained in
    /// self. Deterministic: basis rows of self that grow the span, in order.
    pub fn complement_of(&self, sub: &Subspace) -> Result<Vec<Vector>, Error> {
        if self.ambient != sub.ambient {
            return Err(Error::AmbientMismatch(self.ambient, sub.ambient));
        }
        if !self.contains_subspace(sub) {
            return Err(Error::DimensionMismatch(
                "complement_of requires sub to be contained in the space".into(),
            ));
        }
        let mut b = RrefBuilder::new(self.ambient, self.order);
        for v in sub.basis_rows() {
            b.push_row(v);
        }
        let mut reps = Vec::new();
        for v in self.basis_rows() {
            if b.push_row(v.clone()) {
                reps.push(v);
            }
        }
        Ok(reps)
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace dim {} of {}: {:?}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}
