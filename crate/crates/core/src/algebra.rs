//! Finite-dimensional associative unital algebras given by structure
//! constants, their ideals, quotients and subalgebras, and the concrete
//! constructors used by the examples.

use num::integer::lcm;

use crate::error::{Error, Result};
use crate::matrix::{vec_sub, vec_zero, ExactMatrix, RrefBuilder, Vector};
use crate::scalar::Cyclotomic;
use crate::subspace::Subspace;

/// Associative unital algebra with product e_i e_j = sum_k sc(i,j,k) e_k.
///
/// Associativity and the two-sided unit law are verified at construction;
/// left/right multiplication matrices are cached.
#[derive(Clone)]
pub struct FDAlgebra {
    dim: usize,
    order: u64,
    labels: Vec<String>,
    unit: Vector,
    sc: Vec<Cyclotomic>,
    left_mult: Vec<ExactMatrix>,
    right_mult: Vec<ExactMatrix>,
}

impl FDAlgebra {
    /// Validate structure constants and build the algebra.
    pub fn new(labels: Vec<String>, unit: Vector, sc: Vec<Cyclotomic>) -> Result<FDAlgebra> {
        let dim = labels.len();
        if unit.len() != dim || sc.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "algebra dim {}: unit has length {}, sc has length {} (need {})",
                dim,
                unit.len(),
                sc.len(),
                dim * dim * dim
            )));
        }
        let mut order = 1u64;
        for c in unit.iter().chain(sc.iter()) {
            order = lcm(order, c.order());
        }
        let unit: Vector = unit.iter().map(|c| c.promote(order).unwrap()).collect();
        let sc: Vec<Cyclotomic> = sc.iter().map(|c| c.promote(order).unwrap()).collect();

        let idx = |i: usize, j: usize, k: usize| (i * dim + j) * dim + k;
        // Cached multiplication matrices: L_i[p][q] = sc[i][q][p].
        let mut left_mult = Vec::with_capacity(dim);
        let mut right_mult = Vec::with_capacity(dim);
        for i in 0..dim {
            left_mult.push(ExactMatrix::from_fn(dim, dim, order, |p, q| {
                sc[idx(i, q, p)].clone()
            }));
            right_mult.push(ExactMatrix::from_fn(dim, dim, order, |p, q| {
                sc[idx(q, i, p)].clone()
            }));
        }
        let alg = FDAlgebra {
            dim,
            order,
            labels,
            unit,
            sc,
            left_mult,
            right_mult,
        };

        // Associativity on all basis triples.
        for i in 0..dim {
            for j in 0..dim {
                let ij = alg.basis_product(i, j);
                for k in 0..dim {
                    let jk = alg.basis_product(j, k);
                    let left = alg.product(&ij, &alg.basis_vector(k));
                    let right = alg.product(&alg.basis_vector(i), &jk);
                    if left != right {
                        return Err(Error::AssociativityViolation {
                            i,
                            j,
                            k,
                            left: format_vector(&left),
                            right: format_vector(&right),
                        });
                    }
                }
            }
        }
        // Two-sided unit.
        for i in 0..dim {
            let e = alg.basis_vector(i);
            if alg.product(&alg.unit, &e) != e || alg.product(&e, &alg.unit) != e {
                return Err(Error::UnitViolation(i));
            }
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn sc(&self, i: usize, j: usize, k: usize) -> &Cyclotomic {
        &self.sc[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec_zero(self.dim, self.order);
        v[i] = Cyclotomic::one(self.order);
        v
    }

    fn basis_product(&self, i: usize, j: usize) -> Vector {
        (0..self.dim)
            .map(|k| self.sc[(i * self.dim + j) * self.dim + k].clone())
            .collect()
    }

    pub fn left_mult(&self, i: usize) -> &ExactMatrix {
        &self.left_mult[i]
    }

    pub fn right_mult(&self, i: usize) -> &ExactMatrix {
        &self.right_mult[i]
    }

    /// Matrix of x -> a*x.
    pub fn left_mult_matrix(&self, a: &[Cyclotomic]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.dim, self.dim, self.order);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.left_mult[i].scale(c));
            }
        }
        m
    }

    /// Matrix of x -> x*a.
    pub fn right_mult_matrix(&self, a: &[Cyclotomic]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.dim, self.dim, self.order);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.right_mult[i].scale(c));
            }
        }
        m
    }

    pub fn product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vector {
        let mut out = vec_zero(self.dim, self.order);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let f = ai.mul_ref(bj);
                for k in 0..self.dim {
                    let c = &self.sc[(i * self.dim + j) * self.dim + k];
                    if !c.is_zero() {
                        out[k].add_mul_assign(&f, c);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vector {
        vec_sub(&self.product(a, b), &self.product(b, a))
    }

    /// Solution space of [a, e_i] = 0 for every basis element; always
    /// contains the unit.
    pub fn center(&self) -> Subspace {
        let mut b = RrefBuilder::new(self.dim, self.order);
        let mut rows: Vec<Vector> = Vec::new();
        for i in 0..self.dim {
            let d = self.left_mult[i].sub(&self.right_mult[i]);
            for r in 0..self.dim {
                rows.push(d.row_vec(r));
            }
        }
        for r in rows {
            b.push_row(r);
        }
        let center = b.kernel();
        debug_assert!(center.contains(&self.unit));
        center
    }

    /// Smallest two-sided ideal containing the generators: the fixed point
    /// of span U A*S U S*A iteration.
    pub fn ideal_closure(&self, gens: &[Vector]) -> Ideal {
        let mut b = RrefBuilder::new(self.dim, self.order);
        let mut queue: Vec<Vector> = Vec::new();
        for g in gens {
            if b.push_row(g.clone()) {
                queue.push(g.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for i in 0..self.dim {
                for w in [self.left_mult[i].apply(&v), self.right_mult[i].apply(&v)] {
                    if b.push_row(w.clone()) {
                        queue.push(w);
                    }
                }
            }
        }
        Ideal {
            space: Subspace::from_rref_builder(b),
        }
    }

    pub fn is_ideal(&self, space: &Subspace) -> bool {
        space.basis_rows().all(|v| {
            (0..self.dim).all(|i| {
                space.contains(&self.left_mult[i].apply(&v))
                    && space.contains(&self.right_mult[i].apply(&v))
            })
        })
    }

    /// Check that `space` is a unital subalgebra and compute its own
    /// structure constants over the canonical RREF basis.
    pub fn subalgebra(&self, space: &Subspace) -> Result<Subalgebra> {
        if space.ambient_dim() != self.dim {
            return Err(Error::AmbientMismatch(space.ambient_dim(), self.dim));
        }
        if !space.contains(&self.unit) {
            return Err(Error::NotSubalgebra(
                "the unit is not in the subspace".into(),
            ));
        }
        let b = space.dim();
        let basis: Vec<Vector> = space.basis_rows().collect();
        let unit_b = space
            .coordinates(&self.unit)
            .ok_or_else(|| Error::Internal("unit coordinates".into()))?;
        let mut sc = Vec::with_capacity(b * b * b);
        for x in &basis {
            for y in &basis {
                let p = self.product(x, y);
                let coords = space.coordinates(&p).ok_or_else(|| {
                    Error::NotSubalgebra("the subspace is not closed under the product".into())
                })?;
                sc.extend(coords);
            }
        }
        let labels = (0..b).map(|t| format!("b{}", t)).collect();
        let algebra = FDAlgebra::new(labels, unit_b, sc)?;
        let inclusion = ExactMatrix::from_rows(basis).transpose();
        Ok(Subalgebra {
            algebra,
            inclusion,
            space: space.clone(),
        })
    }
}

fn format_vector(v: &[Cyclotomic]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl std::fmt::Debug for FDAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FDAlgebra dim {} over Q(zeta_{}) [{}]",
            self.dim,
            self.order,
            self.labels.join(", ")
        )
    }
}

/// Two-sided ideal given as a verified subspace of the parent.
#[derive(Clone)]
pub struct Ideal {
    pub space: Subspace,
}

impl Ideal {
    /// Wrap a subspace after verifying two-sidedness.
    pub fn from_subspace(alg: &FDAlgebra, space: Subspace) -> Result<Ideal> {
        if alg.is_ideal(&space) {
            Ok(Ideal { space })
        } else {
            Err(Error::NotIdeal)
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// A quotient algebra A/C with the projection and its canonical linear
/// section (coset representatives are the non-pivot coordinates of the
/// ideal's RREF basis).
#[derive(Clone)]
pub struct QuotientAlgebra {
    pub algebra: FDAlgebra,
    pub proj: ExactMatrix,
    pub section: ExactMatrix,
    pub ideal: Ideal,
}

pub fn quotient_algebra(a: &FDAlgebra, c: &Ideal) -> Result<QuotientAlgebra> {
    if !a.is_ideal(&c.space) {
        return Err(Error::NotIdeal);
    }
    if c.space.contains(a.unit()) {
        return Err(Error::UnitInIdeal);
    }
    let d = a.dim();
    let order = lcm(a.order(), c.space.order());
    let q = d - c.space.dim();
    let reps = c.space.complement_coords();
    let mut proj = ExactMatrix::zeros(q, d, order);
    for j in 0..d {
        let coords = c.space.quotient_coords(&a.basis_vector(j));
        for (t, v) in coords.into_iter().enumerate() {
            proj.set(t, j, v);
        }
    }
    let mut section = ExactMatrix::zeros(d, q, order);
    for (t, &j) in reps.iter().enumerate() {
        section.set(j, t, Cyclotomic::one(order));
    }
    let labels: Vec<String> = reps.iter().map(|&j| a.labels()[j].clone()).collect();
    let unit_q = proj.apply(a.unit());
    let mut sc = Vec::with_capacity(q * q * q);
    for s in 0..q {
        for t in 0..q {
            let p = a.product(&section.col_vec(s), &section.col_vec(t));
            sc.extend(proj.apply(&p));
        }
    }
    let algebra = FDAlgebra::new(labels, unit_q, sc)?;
    // proj is an algebra map and proj . section = id.
    for i in 0..d {
        for j in 0..d {
            let lhs = proj.apply(&a.basis_product_public(i, j));
            let rhs = algebra.product(
                &proj.apply(&a.basis_vector(i)),
                &proj.apply(&a.basis_vector(j)),
            );
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "quotient projection is not multiplicative at ({}, {})",
                    i, j
                )));
            }
        }
    }
    let ps = proj.mul(&section);
    if ps != ExactMatrix::identity(q, ps.order()) {
        return Err(Error::Internal("proj . section is not the identity".into()));
    }
    Ok(QuotientAlgebra {
        algebra,
        proj,
        section,
        ideal: c.clone(),
    })
}

impl FDAlgebra {
    /// e_i * e_j as a coefficient vector.
    pub fn basis_product_public(&self, i: usize, j: usize) -> Vector {
        self.basis_product(i, j)
    }
}

/// A unital subalgebra with its own structure constants and the inclusion
/// matrix into the parent (columns are images of the subalgebra basis).
#[derive(Clone)]
pub struct Subalgebra {
    pub algebra: FDAlgebra,
    pub inclusion: ExactMatrix,
    pub space: Subspace,
}

impl Subalgebra {
    /// Parent-coordinates of an element given by subalgebra coordinates.
    pub fn include(&self, v: &[Cyclotomic]) -> Vector {
        self.inclusion.apply(v)
    }

    /// Subalgebra coordinates of a parent element lying in the subspace.
    pub fn restrict(&self, v: &[Cyclotomic]) -> Option<Vector> {
        self.space.coordinates(v)
    }
}

// ---------------------------------------------------------------------------
// Constructors for the concrete algebras used by the examples.
// ---------------------------------------------------------------------------

/// Full matrix algebra M(n) in the matrix-unit basis e_ij, row-major.
pub fn matrix_algebra(n: usize) -> FDAlgebra {
    let d = n * n;
    let order = 1;
    let mut sc = vec![Cyclotomic::zero(order); d * d * d];
    let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    // e_{ab} e_{cd} = delta_{bc} e_{ad}
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    if b == c {
                        sc[idx(a * n + b, c * n + e, a * n + e)] = Cyclotomic::one(order);
                    }
                }
            }
        }
    }
    let mut unit = vec_zero(d, order);
    for a in 0..n {
        unit[a * n + a] = Cyclotomic::one(order);
    }
    let labels = (0..n)
        .flat_map(|a| (0..n).map(move |b| format!("e{}{}", a + 1, b + 1)))
        .collect();
    FDAlgebra::new(labels, unit, sc).expect("matrix algebra is associative")
}

/// Functions on k points: C^k with pointwise product, basis of point
/// idempotents p_1..p_k.
pub fn function_algebra(k: usize) -> FDAlgebra {
    let order = 1;
    let mut sc = vec![Cyclotomic::zero(order); k * k * k];
    for i in 0..k {
        sc[(i * k + i) * k + i] = Cyclotomic::one(order);
    }
    let unit = vec![Cyclotomic::one(order); k];
    let labels = (0..k).map(|i| format!("p{}", i + 1)).collect();
    FDAlgebra::new(labels, unit, sc).expect("function algebra is associative")
}

/// Direct sum with block product; labels get "l." / "r." prefixes.
pub fn direct_sum(a: &FDAlgebra, b: &FDAlgebra) -> FDAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let order = lcm(a.order(), b.order());
    let mut sc = vec![Cyclotomic::zero(order); d * d * d];
    let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    for i in 0..da {
        for j in 0..da {
            for k in 0..da {
                sc[idx(i, j, k)] = a.sc(i, j, k).promote(order).unwrap();
            }
        }
    }
    for i in 0..db {
        for j in 0..db {
            for k in 0..db {
                sc[idx(da + i, da + j, da + k)] = b.sc(i, j, k).promote(order).unwrap();
            }
        }
    }
    let mut unit = vec_zero(d, order);
    for (i, c) in a.unit().iter().enumerate() {
        unit[i] = c.promote(order).unwrap();
    }
    for (i, c) in b.unit().iter().enumerate() {
        unit[da + i] = c.promote(order).unwrap();
    }
    let labels = a
        .labels()
        .iter()
        .map(|l| format!("l.{}", l))
        .chain(b.labels().iter().map(|l| format!("r.{}", l)))
        .collect();
    FDAlgebra::new(labels, unit, sc).expect("direct sum is associative")
}

/// Tensor product with the lexicographic basis a_i (x) b_j at index
/// i*dim(B) + j; labels are "la.lb".
pub fn tensor_product(a: &FDAlgebra, b: &FDAlgebra) -> FDAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    let order = lcm(a.order(), b.order());
    let mut sc = vec![Cyclotomic::zero(order); d * d * d];
    let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    for i1 in 0..da {
        for j1 in 0..db {
            for i2 in 0..da {
                for j2 in 0..db {
                    for k1 in 0..da {
                        let ca = a.sc(i1, i2, k1);
                        if ca.is_zero() {
                            continue;
                        }
                        for k2 in 0..db {
                            let cb = b.sc(j1, j2, k2);
                            if !cb.is_zero() {
                                let v = ca
                                    .promote(order)
                                    .unwrap()
                                    .mul_ref(&cb.promote(order).unwrap());
                                sc[idx(i1 * db + j1, i2 * db + j2, k1 * db + k2)] = v;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut unit = vec_zero(d, order);
    for (i, ca) in a.unit().iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.unit().iter().enumerate() {
            if !cb.is_zero() {
                unit[i * db + j] = ca
                    .promote(order)
                    .unwrap()
                    .mul_ref(&cb.promote(order).unwrap());
            }
        }
    }
    let labels = a
        .labels()
        .iter()
        .flat_map(|la| b.labels().iter().map(move |lb| format!("{}.{}", la, lb)))
        .collect();
    FDAlgebra::new(labels, unit, sc).expect("tensor product is associative")
}

/// Commutative C (+) V with V*V = 0: the unit plus `nilpotents` square-zero
/// generators. This is the only way a commutative algebra of this size gets
/// nonzero derivations.
pub fn dual_number_extension(nilpotents: usize) -> FDAlgebra {
    let d = 1 + nilpotents;
    let order = 1;
    let mut sc = vec![Cyclotomic::zero(order); d * d * d];
    let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    for i in 0..d {
        sc[idx(0, i, i)] = Cyclotomic::one(order);
        if i > 0 {
            sc[idx(i, 0, i)] = Cyclotomic::one(order);
        }
    }
    let mut unit = vec_zero(d, order);
    unit[0] = Cyclotomic::one(order);
    let letters = ["s", "t", "u", "v"];
    let labels = std::iter::once("1".to_string())
        .chain((0..nilpotents).map(|i| {
            if nilpotents <= letters.len() {
                letters[i].to_string()
            } else {
                format!("s{}", i + 1)
            }
        }))
        .collect();
    FDAlgebra::new(labels, unit, sc).expect("dual numbers are associative")
}
