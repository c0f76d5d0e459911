//! Hochschild cochain complexes with values in a bimodule, the relative,
//! normalized-relative and constrained subcomplexes, low-degree cohomology
//! and the comparison map into the quotient complex.
//!
//! A degree-n cochain is the coefficient tensor of a multilinear map
//! A^(x)n -> M over the fixed bases; variant subcomplexes are nullspaces of
//! linear constraint systems over the full cochain coordinates, so a single
//! differential serves all variants.

use num::integer::lcm;

use crate::algebra::{FDAlgebra, QuotientAlgebra};
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::matrix::{vec_zero, ExactMatrix, RrefBuilder, Vector};
use crate::scalar::Cyclotomic;
use crate::subspace::Subspace;

/// Coefficient tensor of a multilinear map A^(x)n -> M; the flat index is
/// (row-major argument tuple) * dim M + module coordinate.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub alg_dim: usize,
    pub module_dim: usize,
    pub tensor: Vector,
}

impl std::fmt::Debug for Cochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Cochain deg {} ({}^{} -> {})",
            self.degree, self.alg_dim, self.degree, self.module_dim
        )
    }
}

impl Cochain {
    pub fn zero(degree: usize, alg_dim: usize, module_dim: usize, order: u64) -> Cochain {
        let size = alg_dim.pow(degree as u32) * module_dim;
        Cochain {
            degree,
            alg_dim,
            module_dim,
            tensor: vec_zero(size, order),
        }
    }

    pub fn from_tensor(
        degree: usize,
        alg_dim: usize,
        module_dim: usize,
        tensor: Vector,
    ) -> Cochain {
        assert_eq!(tensor.len(), alg_dim.pow(degree as u32) * module_dim);
        Cochain {
            degree,
            alg_dim,
            module_dim,
            tensor,
        }
    }

    fn tuple_rank(&self, args: &[usize]) -> usize {
        let mut r = 0;
        for &a in args {
            r = r * self.alg_dim + a;
        }
        r
    }

    /// Value on a basis tuple.
    pub fn value_at(&self, args: &[usize]) -> &[Cyclotomic] {
        assert_eq!(args.len(), self.degree);
        let r = self.tuple_rank(args);
        &self.tensor[r * self.module_dim..(r + 1) * self.module_dim]
    }

    fn set_value(&mut self, args: &[usize], v: Vector) {
        let r = self.tuple_rank(args);
        for (k, c) in v.into_iter().enumerate() {
            self.tensor[r * self.module_dim + k] = c;
        }
    }

    /// Multilinear evaluation on arbitrary argument vectors.
    pub fn eval(&self, args: &[Vector]) -> Vector {
        assert_eq!(args.len(), self.degree);
        let order = self.tensor.first().map(|c| c.order()).unwrap_or(1);
        let mut out = vec_zero(self.module_dim, order);
        let mut idx = vec![0usize; self.degree];
        loop {
            let mut coeff = Cyclotomic::one(order);
            let mut zero = false;
            for (slot, &i) in idx.iter().enumerate() {
                if args[slot][i].is_zero() {
                    zero = true;
                    break;
                }
                coeff = coeff.mul_ref(&args[slot][i]);
            }
            if !zero {
                let v = self.value_at(&idx);
                for k in 0..self.module_dim {
                    if !v[k].is_zero() {
                        out[k].add_mul_assign(&coeff, &v[k]);
                    }
                }
            }
            // advance multi-index
            let mut slot = self.degree;
            loop {
                if slot == 0 {
                    return out;
                }
                slot -= 1;
                idx[slot] += 1;
                if idx[slot] < self.alg_dim {
                    break;
                }
                idx[slot] = 0;
            }
        }
    }
}

fn for_each_tuple(d: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; n];
    loop {
        f(&idx);
        let mut slot = n;
        loop {
            if slot == 0 {
                return;
            }
            slot -= 1;
            idx[slot] += 1;
            if idx[slot] < d {
                break;
            }
            idx[slot] = 0;
        }
    }
}

/// The Hochschild differential.
pub fn delta(alg: &FDAlgebra, module: &Bimodule, f: &Cochain) -> Cochain {
    let d = alg.dim();
    let m = module.dim();
    assert_eq!(f.alg_dim, d);
    assert_eq!(f.module_dim, m);
    let n = f.degree;
    let order = lcm(alg.order(), module.order());
    let mut out = Cochain::zero(n + 1, d, m, order);
    for_each_tuple(d, n + 1, |j| {
        let mut value = vec_zero(m, order);
        // a_1 f(a_2, ..., a_{n+1})
        let tail = &j[1..];
        let fv = f.value_at(tail);
        let la = module.left_basis_action(j[0]);
        for mc in 0..m {
            for mi in 0..m {
                let c = la.get(mc, mi);
                if !c.is_zero() && !fv[mi].is_zero() {
                    value[mc].add_mul_assign(c, &fv[mi]);
                }
            }
        }
        // (-1)^i f(..., a_i a_{i+1}, ...)
        for i in 1..=n {
            let neg = i % 2 == 1;
            let mut merged: Vec<usize> = Vec::with_capacity(n);
            merged.extend_from_slice(&j[..i - 1]);
            merged.push(0);
            merged.extend_from_slice(&j[i + 1..]);
            for k in 0..d {
                let c = alg.sc(j[i - 1], j[i], k);
                if c.is_zero() {
                    continue;
                }
                merged[i - 1] = k;
                let fv = f.value_at(&merged);
                for mc in 0..m {
                    if !fv[mc].is_zero() {
                        if neg {
                            value[mc].sub_mul_assign(c, &fv[mc]);
                        } else {
                            value[mc].add_mul_assign(c, &fv[mc]);
                        }
                    }
                }
            }
        }
        // (-1)^{n+1} f(a_1, ..., a_n) a_{n+1}
        let neg = (n + 1) % 2 == 1;
        let head = &j[..n];
        let fv = f.value_at(head);
        let ra = module.right_basis_action(j[n]);
        for mc in 0..m {
            for mi in 0..m {
                let c = ra.get(mc, mi);
                if !c.is_zero() && !fv[mi].is_zero() {
                    if neg {
                        value[mc].sub_mul_assign(c, &fv[mi]);
                    } else {
                        value[mc].add_mul_assign(c, &fv[mi]);
                    }
                }
            }
        }
        out.set_value(j, value);
    });
    out
}

/// Kernel of delta_n inside the full cochain space, built row by row.
fn kernel_of_delta(alg: &FDAlgebra, module: &Bimodule, n: usize) -> Subspace {
    let d = alg.dim();
    let m = module.dim();
    let order = lcm(alg.order(), module.order());
    let cols = d.pow(n as u32) * m;
    let mut b = RrefBuilder::new(cols, order);
    let rank = |args: &[usize]| -> usize {
        let mut r = 0;
        for &a in args {
            r = r * d + a;
        }
        r
    };
    for_each_tuple(d, n + 1, |j| {
        for mc in 0..m {
            let mut row = vec_zero(cols, order);
            let la = module.left_basis_action(j[0]);
            let tail_rank = rank(&j[1..]);
            for mi in 0..m {
                let c = la.get(mc, mi);
                if !c.is_zero() {
                    row[tail_rank * m + mi] = row[tail_rank * m + mi].add_ref(c);
                }
            }
            for i in 1..=n {
                let neg = i % 2 == 1;
                let mut merged: Vec<usize> = Vec::with_capacity(n);
                merged.extend_from_slice(&j[..i - 1]);
                merged.push(0);
                merged.extend_from_slice(&j[i + 1..]);
                for k in 0..d {
                    let c = alg.sc(j[i - 1], j[i], k);
                    if c.is_zero() {
                        continue;
                    }
                    merged[i - 1] = k;
                    let col = rank(&merged) * m + mc;
                    row[col] = if neg {
                        row[col].sub_ref(c)
                    } else {
                        row[col].add_ref(c)
                    };
                }
            }
            let neg = (n + 1) % 2 == 1;
            let ra = module.right_basis_action(j[n]);
            let head_rank = rank(&j[..n]);
            for mi in 0..m {
                let c = ra.get(mc, mi);
                if !c.is_zero() {
                    let col = head_rank * m + mi;
                    row[col] = if neg {
                        row[col].sub_ref(c)
                    } else {
                        row[col].add_ref(c)
                    };
                }
            }
            b.push_row(row);
        }
    });
    b.kernel()
}

/// Which subcomplex of the Hochschild complex to work in.
#[derive(Clone)]
pub enum ComplexVariant {
    Ordinary,
    /// Relative to a unital subalgebra S.
    Relative(Subspace),
    /// Relative cochains vanishing whenever an argument lies in S.
    NormalizedRelative(Subspace),
    /// Cochains sending any tuple with an entry in the ideal C into the
    /// sub-bimodule N.
    Constrained {
        c: Subspace,
        n: Subspace,
    },
}

impl ComplexVariant {
    pub fn validate(&self, alg: &FDAlgebra, module: &Bimodule) -> Result<()> {
        match self {
            ComplexVariant::Ordinary => Ok(()),
            ComplexVariant::Relative(s) | ComplexVariant::NormalizedRelative(s) => {
                alg.subalgebra(s).map(|_| ()).map_err(|e| match e {
                    Error::NotSubalgebra(m) => Error::NotSubalgebra(m),
                    other => other,
                })
            }
            ComplexVariant::Constrained { c, n } => {
                let i_n = module.annihilator_ideal(alg, n)?;
                if !i_n.space.contains_subspace(c) {
                    return Err(Error::ConstraintViolation);
                }
                if !alg.is_ideal(c) {
                    return Err(Error::NotIdeal);
                }
                Ok(())
            }
        }
    }
}

/// The subspace of C^n cut out by the variant's linear conditions.
pub fn variant_subspace(
    alg: &FDAlgebra,
    module: &Bimodule,
    n: usize,
    variant: &ComplexVariant,
) -> Subspace {
    let d = alg.dim();
    let m = module.dim();
    let order = lcm(alg.order(), module.order());
    if n == 0 {
        return match variant {
            ComplexVariant::Ordinary | ComplexVariant::Constrained { .. } => {
                Subspace::full(m, order)
            }
            ComplexVariant::Relative(s) | ComplexVariant::NormalizedRelative(s) => {
                module.centralizer(s)
            }
        };
    }
    let cols = d.pow(n as u32) * m;
    match variant {
        ComplexVariant::Ordinary => Subspace::full(cols, order),
        ComplexVariant::Relative(s) => {
            let mut b = RrefBuilder::new(cols, order);
            relative_rows(alg, module, n, s, &mut b);
            b.kernel()
        }
        ComplexVariant::NormalizedRelative(s) => {
            let mut b = RrefBuilder::new(cols, order);
            relative_rows(alg, module, n, s, &mut b);
            // f vanishes when at least one argument is in S.
            for slot in 0..n {
                for sv in s.basis_rows() {
                    for_each_tuple(d, n - 1, |rest| {
                        for mc in 0..m {
                            let mut row = vec_zero(cols, order);
                            for (k, coeff) in sv.iter().enumerate() {
                                if coeff.is_zero() {
                                    continue;
                                }
                                let mut args: Vec<usize> = Vec::with_capacity(n);
                                args.extend_from_slice(&rest[..slot]);
                                args.push(k);
                                args.extend_from_slice(&rest[slot..]);
                                let r = rank_of(d, &args);
                                row[r * m + mc] = row[r * m + mc].add_ref(coeff);
                            }
                            b.push_row(row);
                        }
                    });
                }
            }
            b.kernel()
        }
        ComplexVariant::Constrained { c, n: nsub } => {
            let mut b = RrefBuilder::new(cols, order);
            let qdim = m - nsub.dim();
            // Quotient-coordinate rows of the module value.
            let mut unit_images: Vec<Vector> = Vec::with_capacity(m);
            for mc in 0..m {
                let mut u = vec_zero(m, order);
                u[mc] = Cyclotomic::one(order);
                unit_images.push(nsub.quotient_coords(&u));
            }
            for slot in 0..n {
                for cv in c.basis_rows() {
                    for_each_tuple(d, n - 1, |rest| {
                        for qc in 0..qdim {
                            let mut row = vec_zero(cols, order);
                            for (k, coeff) in cv.iter().enumerate() {
                                if coeff.is_zero() {
                                    continue;
                                }
                                let mut args: Vec<usize> = Vec::with_capacity(n);
                                args.extend_from_slice(&rest[..slot]);
                                args.push(k);
                                args.extend_from_slice(&rest[slot..]);
                                let r = rank_of(d, &args);
                                for mc in 0..m {
                                    let qv = &unit_images[mc][qc];
                                    if !qv.is_zero() {
                                        row[r * m + mc].add_mul_assign(coeff, qv);
                                    }
                                }
                            }
                            b.push_row(row);
                        }
                    });
                }
            }
            b.kernel()
        }
    }
}

fn rank_of(d: usize, args: &[usize]) -> usize {
    let mut r = 0;
    for &a in args {
        r = r * d + a;
    }
    r
}

/// The three S-bilinearity condition families of the relative complex.
fn relative_rows(alg: &FDAlgebra, module: &Bimodule, n: usize, s: &Subspace, b: &mut RrefBuilder) {
    let d = alg.dim();
    let m = module.dim();
    let order = lcm(alg.order(), module.order());
    let cols = d.pow(n as u32) * m;
    for sv in s.basis_rows() {
        let ls = module.left_action(&sv);
        let rs = module.right_action(&sv);
        // f(s a_1, ...) = s f(a_1, ...)
        for_each_tuple(d, n, |j| {
            let w = alg.right_mult(j[0]).apply(&sv); // s * e_{j0}
            for mc in 0..m {
                let mut row = vec_zero(cols, order);
                for (k, coeff) in w.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut args = j.to_vec();
                    args[0] = k;
                    let r = rank_of(d, &args);
                    row[r * m + mc] = row[r * m + mc].add_ref(coeff);
                }
                let r0 = rank_of(d, j);
                for mi in 0..m {
                    let c = ls.get(mc, mi);
                    if !c.is_zero() {
                        row[r0 * m + mi] = row[r0 * m + mi].sub_ref(c);
                    }
                }
                b.push_row(row);
            }
        });
        // f(..., a_n s) = f(...) s
        for_each_tuple(d, n, |j| {
            let w = alg.left_mult(j[n - 1]).apply(&sv); // e_{j_{n-1}} * s
            for mc in 0..m {
                let mut row = vec_zero(cols, order);
                for (k, coeff) in w.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut args = j.to_vec();
                    args[n - 1] = k;
                    let r = rank_of(d, &args);
                    row[r * m + mc] = row[r * m + mc].add_ref(coeff);
                }
                let r0 = rank_of(d, j);
                for mi in 0..m {
                    let c = rs.get(mc, mi);
                    if !c.is_zero() {
                        row[r0 * m + mi] = row[r0 * m + mi].sub_ref(c);
                    }
                }
                b.push_row(row);
            }
        });
        // f(..., a_i s, a_{i+1}, ...) = f(..., a_i, s a_{i+1}, ...)
        for i in 0..n.saturating_sub(1) {
            for_each_tuple(d, n, |j| {
                let w1 = alg.left_mult(j[i]).apply(&sv); // e_{j_i} * s
                let w2 = alg.right_mult(j[i + 1]).apply(&sv); // s * e_{j_{i+1}}
                for mc in 0..m {
                    let mut row = vec_zero(cols, order);
                    for (k, coeff) in w1.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut args = j.to_vec();
                        args[i] = k;
                        let r = rank_of(d, &args);
                        row[r * m + mc] = row[r * m + mc].add_ref(coeff);
                    }
                    for (k, coeff) in w2.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut args = j.to_vec();
                        args[i + 1] = k;
                        let r = rank_of(d, &args);
                        row[r * m + mc] = row[r * m + mc].sub_ref(coeff);
                    }
                    b.push_row(row);
                }
            });
        }
    }
}

pub struct Cohomology {
    pub degree: usize,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    pub dim: usize,
    pub representatives: Vec<Cochain>,
}

/// dim ker(delta_n) - dim im(delta_{n-1}) inside the variant subcomplex,
/// with canonical representatives. Checks stability of the variant under
/// delta as part of the computation.
pub fn cohomology(
    alg: &FDAlgebra,
    module: &Bimodule,
    n: usize,
    variant: &ComplexVariant,
    cap: usize,
) -> Result<Cohomology> {
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    variant.validate(alg, module)?;
    let d = alg.dim();
    let m = module.dim();
    let order = lcm(alg.order(), module.order());
    let v_n = variant_subspace(alg, module, n, variant);
    let z_n = if n == 0 {
        // ker of delta_0 : m -> d*m
        let mut b = RrefBuilder::new(m, order);
        for i in 0..d {
            let diff = module
                .left_basis_action(i)
                .sub(module.right_basis_action(i));
            for r in 0..m {
                b.push_row(diff.row_vec(r));
            }
        }
        b.kernel().intersect(&v_n)?
    } else {
        kernel_of_delta(alg, module, n).intersect(&v_n)?
    };
    let b_n = if n == 0 {
        Subspace::zero(m, order)
    } else {
        let v_prev = variant_subspace(alg, module, n - 1, variant);
        let mut span = RrefBuilder::new(d.pow(n as u32) * m, order);
        for v in v_prev.basis_rows() {
            let f = Cochain::from_tensor(n - 1, d, m, v);
            span.push_row(delta(alg, module, &f).tensor);
        }
        Subspace::from_rref_builder(span)
    };
    if !z_n.contains_subspace(&b_n) {
        return Err(Error::Internal(
            "coboundaries escape the variant cocycles: delta does not preserve the subcomplex"
                .into(),
        ));
    }
    let reps = z_n
        .complement_of(&b_n)?
        .into_iter()
        .map(|v| Cochain::from_tensor(n, d, m, v))
        .collect::<Vec<_>>();
    Ok(Cohomology {
        degree: n,
        dim: z_n.dim() - b_n.dim(),
        cocycles: z_n,
        coboundaries: b_n,
        representatives: reps,
    })
}

/// The comparison map into the quotient complex: chi(f) on A/C with values
/// in M/N, computed through the canonical sections. Verifies membership of
/// f in the constrained subcomplex (well-definedness) and the commuting
/// square chi(delta f) = delta-bar(chi f).
pub fn chi_map(
    alg: &FDAlgebra,
    q: &QuotientAlgebra,
    module: &Bimodule,
    n_sub: &Subspace,
    f: &Cochain,
) -> Result<Cochain> {
    let variant = ComplexVariant::Constrained {
        c: q.ideal.space.clone(),
        n: n_sub.clone(),
    };
    variant.validate(alg, module)?;
    if f.degree > 0 {
        let v = variant_subspace(alg, module, f.degree, &variant);
        if !v.contains(&f.tensor) {
            return Err(Error::PredicateNotVerified(
                "cochain is not in the constrained subcomplex".into(),
            ));
        }
    }
    let (qmod, pr, _sec) = module.quotient_bimodule_over(alg, q, n_sub)?;
    let chi = build_chi(alg, q, module, &pr, f);
    // Commuting square on this f.
    let lhs = build_chi(alg, q, module, &pr, &delta(alg, module, f));
    let rhs = delta(&q.algebra, &qmod, &chi);
    if lhs != rhs {
        return Err(Error::Internal("chi does not commute with delta".into()));
    }
    Ok(chi)
}

fn build_chi(
    alg: &FDAlgebra,
    q: &QuotientAlgebra,
    module: &Bimodule,
    pr: &ExactMatrix,
    f: &Cochain,
) -> Cochain {
    let qd = q.algebra.dim();
    let order = lcm(alg.order(), module.order());
    let mut out = Cochain::zero(f.degree, qd, pr.rows(), order);
    let sections: Vec<Vector> = (0..qd).map(|t| q.section.col_vec(t)).collect();
    for_each_tuple(qd, f.degree, |t| {
        let args: Vec<Vector> = t.iter().map(|&i| sections[i].clone()).collect();
        let v = f.eval(&args);
        out.set_value(t, pr.apply(&v));
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        dual_number_extension, function_algebra, matrix_algebra, quotient_algebra, tensor_product,
    };
    use crate::derivation::{derivations, inner_derivations, preserving_space};
    use rand::{Rng, SeedableRng};

    fn regular(alg: &FDAlgebra) -> Bimodule {
        Bimodule::regular(alg)
    }

    fn random_cochain(
        rng: &mut rand_chacha::ChaCha8Rng,
        degree: usize,
        d: usize,
        m: usize,
        order: u64,
    ) -> Cochain {
        let size = d.pow(degree as u32) * m;
        let tensor = (0..size)
            .map(|_| Cyclotomic::from_integer(rng.gen_range(-2i64..=2), order))
            .collect();
        Cochain::from_tensor(degree, d, m, tensor)
    }

    #[test]
    fn delta_on_degree_zero_is_a_commutator() {
        // f = e12 in C^0(M(2); M(2)): (delta f)(e21) = e21 e12 - e12 e21 = e22 - e11.
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        let f = Cochain::from_tensor(0, 4, 4, m2.basis_vector(1));
        let df = delta(&m2, &reg, &f);
        let expected = crate::matrix::vec_sub(
            &m2.product(&m2.basis_vector(2), &m2.basis_vector(1)),
            &m2.product(&m2.basis_vector(1), &m2.basis_vector(2)),
        );
        assert_eq!(df.value_at(&[2]), &expected[..]);
    }

    #[test]
    fn delta_of_identity_cochain_is_the_product() {
        // Oracle: term-by-term expansion gives (delta id)(a, b) = a b.
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        let mut id = Cochain::zero(1, 4, 4, 1);
        for i in 0..4 {
            id.set_value(&[i], m2.basis_vector(i));
        }
        let d_id = delta(&m2, &reg, &id);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(d_id.value_at(&[i, j]), &m2.basis_product_public(i, j)[..]);
            }
        }
    }

    #[test]
    fn delta_squared_vanishes_on_random_cochains() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let algebras = vec![
            matrix_algebra(2),
            function_algebra(3),
            dual_number_extension(2),
            dual_number_extension(1),
        ];
        for alg in &algebras {
            let reg = regular(alg);
            for degree in 0..=2 {
                for _ in 0..3 {
                    let f = random_cochain(&mut rng, degree, alg.dim(), alg.dim(), alg.order());
                    let ddf = delta(alg, &reg, &delta(alg, &reg, &f));
                    assert!(ddf.tensor.iter().all(|c| c.is_zero()));
                }
            }
        }
    }

    #[test]
    fn h1_identifications() {
        // Z^1(A;A) = Der(A) and B^1(A;A) = Int(A) as exact subspaces.
        for alg in [
            matrix_algebra(2),
            function_algebra(2),
            dual_number_extension(2),
        ] {
            let reg = regular(&alg);
            let h1 = cohomology(&alg, &reg, 1, &ComplexVariant::Ordinary, 3).unwrap();
            assert_eq!(h1.cocycles, derivations(&alg).space);
            assert_eq!(h1.coboundaries, inner_derivations(&alg).space);
        }
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        assert_eq!(
            cohomology(&m2, &reg, 1, &ComplexVariant::Ordinary, 3)
                .unwrap()
                .dim,
            0
        );
        let c2 = function_algebra(2);
        let reg2 = regular(&c2);
        assert_eq!(
            cohomology(&c2, &reg2, 1, &ComplexVariant::Ordinary, 3)
                .unwrap()
                .dim,
            0
        );
    }

    #[test]
    fn h2_of_m2_vanishes() {
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        let h2 = cohomology(&m2, &reg, 2, &ComplexVariant::Ordinary, 3).unwrap();
        assert_eq!(h2.dim, 0);
    }

    #[test]
    fn cap_is_enforced() {
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        assert!(matches!(
            cohomology(&m2, &reg, 4, &ComplexVariant::Ordinary, 3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn relative_complex_for_the_center() {
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        let variant = ComplexVariant::Relative(m2.center());
        // C^0(A, Z(A); A) = A for the regular central bimodule.
        let v0 = variant_subspace(&m2, &reg, 0, &variant);
        assert_eq!(v0.dim(), 4);
        // Z^1(A, Z; A): derivations vanishing on the scalar center = all 3.
        let z1 = cohomology(&m2, &reg, 1, &variant, 3).unwrap();
        assert_eq!(z1.cocycles.dim(), 3);
        assert_eq!(z1.dim, 0);
    }

    #[test]
    fn normalized_relative_matches_relative_dims() {
        use crate::algebra::direct_sum;
        let mut algebras = vec![
            matrix_algebra(2),
            function_algebra(1),
            function_algebra(2),
            function_algebra(3),
            dual_number_extension(1),
            dual_number_extension(2),
            direct_sum(&function_algebra(1), &function_algebra(2)),
            direct_sum(&function_algebra(1), &dual_number_extension(1)),
        ];
        // cyclic group algebras of order 2 and 3
        for (k, order) in [(2usize, 1u64), (3, 3)] {
            let one = Cyclotomic::one(order);
            let mut sc = vec![Cyclotomic::zero(order); k * k * k];
            for i in 0..k {
                for j in 0..k {
                    sc[(i * k + j) * k + (i + j) % k] = one.clone();
                }
            }
            let mut unit = crate::matrix::vec_zero(k, order);
            unit[0] = one;
            let labels = (0..k).map(|i| format!("g{}", i)).collect();
            algebras.push(FDAlgebra::new(labels, unit, sc).unwrap());
        }
        // a non-commutative dim-3 shape: upper triangular 2x2
        let m2 = matrix_algebra(2);
        let ut = m2
            .subalgebra(&Subspace::from_vectors(
                4,
                1,
                &[m2.basis_vector(0), m2.basis_vector(1), m2.basis_vector(3)],
            ))
            .unwrap();
        algebras.push(ut.algebra);
        assert!(algebras.iter().filter(|a| a.dim() <= 3).count() >= 10);
        for alg in &algebras {
            let reg = regular(alg);
            let s = alg.center();
            for n in 0..=2 {
                let rel =
                    cohomology(alg, &reg, n, &ComplexVariant::Relative(s.clone()), 3).unwrap();
                let norm = cohomology(
                    alg,
                    &reg,
                    n,
                    &ComplexVariant::NormalizedRelative(s.clone()),
                    3,
                )
                .unwrap();
                assert_eq!(rel.dim, norm.dim, "degree {} of {:?}", n, alg);
            }
        }
    }

    #[test]
    fn normalized_cochains_vanish_on_the_unit() {
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        let variant = ComplexVariant::NormalizedRelative(m2.center());
        let v1 = variant_subspace(&m2, &reg, 1, &variant);
        for v in v1.basis_rows() {
            let f = Cochain::from_tensor(1, 4, 4, v);
            assert!(crate::matrix::vec_is_zero(&f.eval(&[m2.unit().clone()])));
        }
    }

    #[test]
    fn constrained_cohomology_of_dual_numbers() {
        // A = C[t]/(t^2), C = (t): Der has dimension 1 and preserves (t),
        // Int = 0, so H^1_C has dimension 1.
        let a = dual_number_extension(1);
        let c = a.ideal_closure(&[a.basis_vector(1)]);
        let reg = regular(&a);
        let variant = ComplexVariant::Constrained {
            c: c.space.clone(),
            n: c.space.clone(),
        };
        let h1 = cohomology(&a, &reg, 1, &variant, 3).unwrap();
        assert_eq!(h1.dim, 1);
    }

    #[test]
    fn constrained_cocycles_are_the_preserving_derivations() {
        let a = tensor_product(&function_algebra(3), &matrix_algebra(2));
        let gens: Vec<Vector> = (4..12).map(|i| a.basis_vector(i)).collect();
        let c = a.ideal_closure(&gens);
        let reg = regular(&a);
        let variant = ComplexVariant::Constrained {
            c: c.space.clone(),
            n: c.space.clone(),
        };
        let z1 = cohomology(&a, &reg, 1, &variant, 3).unwrap().cocycles;
        let der = derivations(&a);
        let g_c = preserving_space(&a, &der, &c.space);
        assert_eq!(z1, g_c.space);
    }

    #[test]
    fn trivial_constraint_recovers_the_ordinary_complex() {
        let m2 = matrix_algebra(2);
        let reg = regular(&m2);
        let zero = Subspace::zero(4, 1);
        let variant = ComplexVariant::Constrained {
            c: zero.clone(),
            n: zero,
        };
        for n in 0..=2 {
            let con = cohomology(&m2, &reg, n, &variant, 3).unwrap();
            let ord = cohomology(&m2, &reg, n, &ComplexVariant::Ordinary, 3).unwrap();
            assert_eq!(con.dim, ord.dim);
            assert_eq!(con.cocycles, ord.cocycles);
        }
    }

    #[test]
    fn delta_squared_vanishes_inside_variants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let a = function_algebra(3);
        let reg = regular(&a);
        let c = a.ideal_closure(&[a.basis_vector(0)]);
        let variants = vec![
            ComplexVariant::Relative(a.center()),
            ComplexVariant::NormalizedRelative(a.center()),
            ComplexVariant::Constrained {
                c: c.space.clone(),
                n: c.space.clone(),
            },
        ];
        for variant in &variants {
            for degree in 1..=2 {
                let v = variant_subspace(&a, &reg, degree, variant);
                for _ in 0..3 {
                    if v.dim() == 0 {
                        continue;
                    }
                    let coeffs: Vector = (0..v.dim())
                        .map(|_| Cyclotomic::from_integer(rng.gen_range(-2i64..=2), 1))
                        .collect();
                    let f = Cochain::from_tensor(degree, 3, 3, v.from_coordinates(&coeffs));
                    let df = delta(&a, &reg, &f);
                    // delta stays in the variant
                    let v_next = variant_subspace(&a, &reg, degree + 1, variant);
                    assert!(v_next.contains(&df.tensor));
                    let ddf = delta(&a, &reg, &df);
                    assert!(ddf.tensor.iter().all(|c| c.is_zero()));
                }
            }
        }
    }

    #[test]
    fn chi_commutes_and_matches_pi_on_derivations() {
        let a = tensor_product(&function_algebra(3), &matrix_algebra(2));
        let gens: Vec<Vector> = (4..12).map(|i| a.basis_vector(i)).collect();
        let c = a.ideal_closure(&gens);
        let q = quotient_algebra(&a, &c).unwrap();
        let reg = regular(&a);
        let der = derivations(&a);
        let g_c = preserving_space(&a, &der, &c.space);
        // chi of a derivation in G_C equals pi(X) as a matrix.
        let x = g_c.basis_derivations(&a)[0].clone();
        let f = Cochain::from_tensor(1, 12, 12, x.to_vec());
        let chi = chi_map(&a, &q, &reg, &c.space, &f).unwrap();
        let pi_x = q.proj.mul(x.matrix()).mul(&q.section);
        for t in 0..4 {
            assert_eq!(chi.value_at(&[t]), &pi_x.col_vec(t)[..]);
        }
        // Degree-0 instance of the commuting square.
        let m = Cochain::from_tensor(0, 12, 12, a.basis_vector(0));
        let chi_dm = chi_map(&a, &q, &reg, &c.space, &delta(&a, &reg, &m)).unwrap();
        let (qmod, pr, _) = reg.quotient_bimodule_over(&a, &q, &c.space).unwrap();
        let dm_bar = delta(
            &q.algebra,
            &qmod,
            &Cochain::from_tensor(0, 4, 4, pr.apply(&a.basis_vector(0))),
        );
        assert_eq!(chi_dm, dm_bar);
    }

    #[test]
    fn chi_with_distinct_ideal_and_submodule() {
        // C = span{p1} inside N = span{p1, p2}: C lies in I_N = N, so the
        // pair is admissible with N != C and the square still commutes.
        let a = function_algebra(3);
        let c = a.ideal_closure(&[a.basis_vector(0)]);
        let q = quotient_algebra(&a, &c).unwrap();
        let n = Subspace::from_vectors(3, 1, &[a.basis_vector(0), a.basis_vector(1)]);
        let reg = regular(&a);
        let variant = ComplexVariant::Constrained {
            c: c.space.clone(),
            n: n.clone(),
        };
        variant.validate(&a, &reg).unwrap();
        let v1 = variant_subspace(&a, &reg, 1, &variant);
        assert!(v1.dim() > 0);
        for v in v1.basis_rows() {
            let f = Cochain::from_tensor(1, 3, 3, v);
            let chi = chi_map(&a, &q, &reg, &n, &f).unwrap();
            assert_eq!(chi.alg_dim, 2);
            assert_eq!(chi.module_dim, 1);
        }
        // an inadmissible pair is rejected: C = everything-at-p3 does not
        // act into N
        let bad_c = a.ideal_closure(&[a.basis_vector(2)]);
        let bad = ComplexVariant::Constrained { c: bad_c.space, n };
        assert!(matches!(
            bad.validate(&a, &reg),
            Err(Error::ConstraintViolation)
        ));
    }

    #[test]
    fn left_exactness_bookkeeping_for_the_center_sequence() {
        // dim Z^1(A, Z; A) <= dim Der(A) and the composite
        // Z^1(A, Z; A) -> Der(A) -> Der(Z(A)) is zero.
        let a = tensor_product(&dual_number_extension(2), &matrix_algebra(2));
        let reg = regular(&a);
        let variant = ComplexVariant::Relative(a.center());
        let z1 = cohomology(&a, &reg, 1, &variant, 3).unwrap().cocycles;
        let der = derivations(&a);
        assert!(z1.dim() <= der.dim());
        assert!(der.space.contains_subspace(&z1));
        // Members vanish on the center, so their restriction to Z(A) is 0.
        for v in z1.basis_rows() {
            let x = crate::derivation::Derivation::matrix_from_vec(12, &v);
            for z in a.center().basis_rows() {
                assert!(crate::matrix::vec_is_zero(&x.apply(&z)));
            }
        }
    }
}
