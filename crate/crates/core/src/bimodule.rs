//! Bimodules over a structure-constant algebra with explicit action
//! matrices, centralizers, annihilator ideals and sub/quotient modules.

use num::integer::lcm;

use crate::algebra::{FDAlgebra, Ideal, QuotientAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, RrefBuilder, Vector};
use crate::scalar::Cyclotomic;
use crate::subspace::Subspace;

/// A bimodule given by one left and one right action matrix per algebra
/// basis element. The left action is a representation, the right action an
/// anti-representation, and the two commute; all three laws are verified
/// at construction.
#[derive(Clone)]
pub struct Bimodule {
    dim: usize,
    order: u64,
    left: Vec<ExactMatrix>,
    right: Vec<ExactMatrix>,
}

impl Bimodule {
    pub fn new(
        alg: &FDAlgebra,
        left: Vec<ExactMatrix>,
        right: Vec<ExactMatrix>,
    ) -> Result<Bimodule> {
        let d = alg.dim();
        if left.len() != d || right.len() != d {
            return Err(Error::DimensionMismatch(
                "one action matrix per algebra basis element".into(),
            ));
        }
        let m = left.first().map(|x| x.rows()).unwrap_or(0);
        let mut order = alg.order();
        for mat in left.iter().chain(right.iter()) {
            if mat.rows() != m || mat.cols() != m {
                return Err(Error::DimensionMismatch("square action matrices".into()));
            }
            order = lcm(order, mat.order());
        }
        let left: Vec<ExactMatrix> = left.into_iter().map(|x| x.promote(order)).collect();
        let right: Vec<ExactMatrix> = right.into_iter().map(|x| x.promote(order)).collect();
        let module = Bimodule {
            dim: m,
            order,
            left,
            right,
        };

        // Representation / anti-representation / commutation laws.
        for i in 0..d {
            for j in 0..d {
                let mut lsum = ExactMatrix::zeros(m, m, order);
                let mut rsum = ExactMatrix::zeros(m, m, order);
                for k in 0..d {
                    let c = alg.sc(i, j, k);
                    if !c.is_zero() {
                        lsum = lsum.add(&module.left[k].scale(c));
                        rsum = rsum.add(&module.right[k].scale(c));
                    }
                }
                if module.left[i].mul(&module.left[j]) != lsum {
                    return Err(Error::Internal(format!(
                        "left action is not a representation at ({}, {})",
                        i, j
                    )));
                }
                if module.right[j].mul(&module.right[i]) != rsum {
                    return Err(Error::Internal(format!(
                        "right action is not an anti-representation at ({}, {})",
                        i, j
                    )));
                }
                if module.left[i].mul(&module.right[j]) != module.right[j].mul(&module.left[i]) {
                    return Err(Error::Internal(format!(
                        "left and right actions do not commute at ({}, {})",
                        i, j
                    )));
                }
            }
        }
        // The unit acts as the identity on both sides.
        let lu = module.left_action(alg.unit());
        let ru = module.right_action(alg.unit());
        let id = ExactMatrix::identity(m, order);
        if lu != id || ru != id {
            return Err(Error::UnitViolation(0));
        }
        Ok(module)
    }

    /// The algebra as a bimodule over itself.
    pub fn regular(alg: &FDAlgebra) -> Bimodule {
        let left = (0..alg.dim()).map(|i| alg.left_mult(i).clone()).collect();
        let right = (0..alg.dim()).map(|i| alg.right_mult(i).clone()).collect();
        Bimodule::new(alg, left, right).expect("regular bimodule is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn left_basis_action(&self, i: usize) -> &ExactMatrix {
        &self.left[i]
    }

    pub fn right_basis_action(&self, i: usize) -> &ExactMatrix {
        &self.right[i]
    }

    /// Matrix of m -> a*m.
    pub fn left_action(&self, a: &[Cyclotomic]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.dim, self.dim, self.order);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.left[i].scale(c));
            }
        }
        out
    }

    /// Matrix of m -> m*a.
    pub fn right_action(&self, a: &[Cyclotomic]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.dim, self.dim, self.order);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.right[i].scale(c));
            }
        }
        out
    }

    /// zm = mz for every z in the center: the central-bimodule condition.
    pub fn is_central(&self, alg: &FDAlgebra) -> bool {
        alg.center()
            .basis_rows()
            .all(|z| self.left_action(&z) == self.right_action(&z))
    }

    /// M^S = { m : sm = ms for all s in S }.
    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        let mut b = RrefBuilder::new(self.dim, self.order);
        for v in s.basis_rows() {
            let d = self.left_action(&v).sub(&self.right_action(&v));
            for r in 0..self.dim {
                b.push_row(d.row_vec(r));
            }
        }
        b.kernel()
    }

    /// Is `n` stable under both actions?
    pub fn is_sub_bimodule(&self, n: &Subspace) -> bool {
        n.ambient_dim() == self.dim
            && n.basis_rows().all(|v| {
                self.left
                    .iter()
                    .chain(self.right.iter())
                    .all(|mat| n.contains(&mat.apply(&v)))
            })
    }

    /// The two-sided ideal I_N = { a : aM in N and Ma in N }.
    pub fn annihilator_ideal(&self, alg: &FDAlgebra, n: &Subspace) -> Result<Ideal> {
        if !self.is_sub_bimodule(n) {
            return Err(Error::NotSubBimodule);
        }
        let d = alg.dim();
        let qdim = self.dim - n.dim();
        let mut b = RrefBuilder::new(d, self.order);
        for j in 0..self.dim {
            for (acts, _) in [(&self.left, 0u8), (&self.right, 1u8)] {
                // rows over the unknown a: quotient coordinates of a * m_j.
                let mut cols: Vec<Vector> = Vec::with_capacity(d);
                for mat in acts.iter() {
                    cols.push(n.quotient_coords(&mat.col_vec(j)));
                }
                for qc in 0..qdim {
                    let row: Vector = cols.iter().map(|c| c[qc].clone()).collect();
                    b.push_row(row);
                }
            }
        }
        let space = b.kernel();
        Ideal::from_subspace(alg, space)
    }

    /// Restrict the actions to a sub-bimodule.
    pub fn sub_bimodule(&self, alg: &FDAlgebra, n: &Subspace) -> Result<Bimodule> {
        if !self.is_sub_bimodule(n) {
            return Err(Error::NotSubBimodule);
        }
        let k = n.dim();
        let restrict = |mats: &Vec<ExactMatrix>| -> Vec<ExactMatrix> {
            mats.iter()
                .map(|mat| {
                    ExactMatrix::from_rows(
                        (0..k)
                            .map(|t| n.coordinates(&mat.apply(&n.basis_row(t))).unwrap())
                            .collect(),
                    )
                    .transpose()
                    .promote(self.order)
                })
                .collect()
        };
        Bimodule::new(alg, restrict(&self.left), restrict(&self.right))
    }

    /// Quotient bimodule M/N over the same algebra, with the canonical
    /// projection and section.
    pub fn quotient_bimodule(
        &self,
        alg: &FDAlgebra,
        n: &Subspace,
    ) -> Result<(Bimodule, ExactMatrix, ExactMatrix)> {
        if !self.is_sub_bimodule(n) {
            return Err(Error::NotSubBimodule);
        }
        let m = self.dim;
        let q = m - n.dim();
        let mut proj = ExactMatrix::zeros(q, m, self.order);
        for j in 0..m {
            let mut unit = crate::matrix::vec_zero(m, self.order);
            unit[j] = Cyclotomic::one(self.order);
            let coords = n.quotient_coords(&unit);
            for (t, v) in coords.into_iter().enumerate() {
                proj.set(t, j, v);
            }
        }
        let mut section = ExactMatrix::zeros(m, q, self.order);
        for (t, &j) in n.complement_coords().iter().enumerate() {
            section.set(j, t, Cyclotomic::one(self.order));
        }
        let map = |mats: &Vec<ExactMatrix>| -> Vec<ExactMatrix> {
            mats.iter().map(|mat| proj.mul(mat).mul(&section)).collect()
        };
        let module = Bimodule::new(alg, map(&self.left), map(&self.right))?;
        Ok((module, proj, section))
    }

    /// M/N as a bimodule over the quotient algebra A/C. Requires C to lie in
    /// the annihilator ideal I_N so the induced actions are well defined.
    pub fn quotient_bimodule_over(
        &self,
        alg: &FDAlgebra,
        q: &QuotientAlgebra,
        n: &Subspace,
    ) -> Result<(Bimodule, ExactMatrix, ExactMatrix)> {
        let i_n = self.annihilator_ideal(alg, n)?;
        if !i_n.space.contains_subspace(&q.ideal.space) {
            return Err(Error::ConstraintViolation);
        }
        let m = self.dim;
        let qd = q.algebra.dim();
        let mdim = m - n.dim();
        let mut proj = ExactMatrix::zeros(mdim, m, self.order);
        for j in 0..m {
            let mut unit = crate::matrix::vec_zero(m, self.order);
            unit[j] = Cyclotomic::one(self.order);
            let coords = n.quotient_coords(&unit);
            for (t, v) in coords.into_iter().enumerate() {
                proj.set(t, j, v);
            }
        }
        let mut section = ExactMatrix::zeros(m, mdim, self.order);
        for (t, &j) in n.complement_coords().iter().enumerate() {
            section.set(j, t, Cyclotomic::one(self.order));
        }
        let mut left = Vec::with_capacity(qd);
        let mut right = Vec::with_capacity(qd);
        for t in 0..qd {
            let rep = q.section.col_vec(t);
            left.push(proj.mul(&self.left_action(&rep)).mul(&section));
            right.push(proj.mul(&self.right_action(&rep)).mul(&section));
        }
        let module = Bimodule::new(&q.algebra, left, right)?;
        Ok((module, proj, section))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra, tensor_product};

    #[test]
    fn regular_bimodule_centralizer_of_center() {
        let m2 = matrix_algebra(2);
        let reg = Bimodule::regular(&m2);
        // The center acts by scalars, so the centralizer is everything.
        assert_eq!(reg.centralizer(&m2.center()).dim(), 4);
        assert!(reg.is_central(&m2));
    }

    #[test]
    fn regular_bimodule_is_central_for_samples() {
        for alg in [
            matrix_algebra(2),
            function_algebra(3),
            tensor_product(&function_algebra(2), &matrix_algebra(2)),
        ] {
            assert!(Bimodule::regular(&alg).is_central(&alg));
        }
    }

    #[test]
    fn annihilator_ideal_componentwise() {
        // M = regular C^3, N = span{p1}: componentwise action gives I_N = span{p1}.
        let c3 = function_algebra(3);
        let reg = Bimodule::regular(&c3);
        let n = Subspace::from_vectors(3, 1, &[c3.basis_vector(0)]);
        let i_n = reg.annihilator_ideal(&c3, &n).unwrap();
        assert_eq!(i_n.space, n);
    }

    #[test]
    fn non_sub_bimodule_is_rejected() {
        let m2 = matrix_algebra(2);
        let reg = Bimodule::regular(&m2);
        let not_stable = Subspace::from_vectors(4, 1, &[m2.basis_vector(1)]);
        assert!(matches!(
            reg.annihilator_ideal(&m2, &not_stable),
            Err(Error::NotSubBimodule)
        ));
    }

    #[test]
    fn sub_and_quotient_bimodules() {
        let a = tensor_product(&function_algebra(3), &matrix_algebra(2));
        let reg = Bimodule::regular(&a);
        // Functions vanishing at the first point.
        let gens: Vec<Vector> = (4..12).map(|i| a.basis_vector(i)).collect();
        let n = Subspace::from_vectors(12, a.order(), &gens);
        assert!(reg.is_sub_bimodule(&n));
        let sub = reg.sub_bimodule(&a, &n).unwrap();
        assert_eq!(sub.dim(), 8);
        let (quot, proj, section) = reg.quotient_bimodule(&a, &n).unwrap();
        assert_eq!(quot.dim(), 4);
        let ps = proj.mul(&section);
        assert_eq!(ps, ExactMatrix::identity(4, ps.order()));
    }
}
