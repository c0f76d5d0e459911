//! Der(A) as a Lie algebra and Z(A)-module: inner and outer derivations,
//! the constrained subalgebras (derivations preserving or killing a given
//! subspace), and the induced maps into derivations of quotients and
//! subalgebras.
//!
//! Endomorphisms of A are flattened argument-major: coordinate q*d + p is
//! the coefficient of e_p in X(e_q). Derivation spaces are canonical RREF
//! subspaces of that d^2-dimensional coordinate space.

use crate::algebra::{FDAlgebra, QuotientAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::matrix::{vec_zero, ExactMatrix, RrefBuilder, Vector};
use crate::scalar::Cyclotomic;
use crate::subspace::Subspace;

/// A single derivation, stored as its matrix on the algebra basis
/// (column q is the image of e_q). The Leibniz rule is verified on
/// construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    matrix: ExactMatrix,
}

impl Derivation {
    pub fn new(alg: &FDAlgebra, matrix: ExactMatrix) -> Result<Derivation> {
        let d = alg.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch(
                "derivation matrix must be dim x dim".into(),
            ));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = matrix.apply(&alg.basis_product_public(i, j));
                let xe_i = matrix.col_vec(i);
                let xe_j = matrix.col_vec(j);
                let rhs = crate::matrix::vec_add(
                    &alg.product(&xe_i, &alg.basis_vector(j)),
                    &alg.product(&alg.basis_vector(i), &xe_j),
                );
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "Leibniz rule fails at basis pair ({}, {})",
                        i, j
                    )));
                }
            }
        }
        Ok(Derivation { matrix })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Cyclotomic]) -> Vector {
        self.matrix.apply(v)
    }

    pub fn to_vec(&self) -> Vector {
        let d = self.matrix.rows();
        let mut out = Vec::with_capacity(d * d);
        for q in 0..d {
            for p in 0..d {
                out.push(self.matrix.get(p, q).clone());
            }
        }
        out
    }

    pub fn matrix_from_vec(d: usize, v: &[Cyclotomic]) -> ExactMatrix {
        assert_eq!(v.len(), d * d);
        ExactMatrix::from_fn(d, d, 1, |p, q| v[q * d + p].clone())
    }
}

/// Flatten an endomorphism matrix into the argument-major coordinates used
/// by derivation spaces, without the Leibniz re-check.
pub(crate) fn flatten_endo(m: &ExactMatrix) -> Vector {
    let d = m.rows();
    let mut out = Vec::with_capacity(d * d);
    for q in 0..d {
        for p in 0..d {
            out.push(m.get(p, q).clone());
        }
    }
    out
}

impl std::fmt::Debug for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Derivation {:?}", self.matrix)
    }
}

/// The inner derivation ad(a) = [a, .].
pub fn ad(alg: &FDAlgebra, a: &[Cyclotomic]) -> Derivation {
    let m = alg.left_mult_matrix(a).sub(&alg.right_mult_matrix(a));
    Derivation::new(alg, m).expect("ad(a) satisfies Leibniz")
}

/// Commutator of two derivations; the result is verified to satisfy
/// Leibniz again.
pub fn bracket(alg: &FDAlgebra, x: &Derivation, y: &Derivation) -> Derivation {
    let m = x.matrix().mul(y.matrix()).sub(&y.matrix().mul(x.matrix()));
    Derivation::new(alg, m).expect("bracket of derivations satisfies Leibniz")
}

/// A subspace of Der(A) in the d^2 endomorphism coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    alg_dim: usize,
    pub space: Subspace,
}

impl DerivationSpace {
    /// Wrap a subspace of the endomorphism coordinates whose members are
    /// already known to satisfy Leibniz (spans of verified derivations).
    pub(crate) fn from_subspace_unchecked(alg_dim: usize, space: Subspace) -> DerivationSpace {
        DerivationSpace { alg_dim, space }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn basis_derivations(&self, alg: &FDAlgebra) -> Vec<Derivation> {
        self.space
            .basis_rows()
            .map(|v| {
                Derivation::new(alg, Derivation::matrix_from_vec(self.alg_dim, &v))
                    .expect("basis of a derivation space satisfies Leibniz")
            })
            .collect()
    }

    pub fn basis_matrices(&self) -> Vec<ExactMatrix> {
        self.space
            .basis_rows()
            .map(|v| Derivation::matrix_from_vec(self.alg_dim, &v))
            .collect()
    }

    pub fn contains(&self, x: &Derivation) -> bool {
        self.space.contains(&x.to_vec())
    }

    /// Coefficients of x over the basis, if x lies in the space.
    pub fn coordinates(&self, x: &Derivation) -> Option<Vector> {
        self.space.coordinates(&x.to_vec())
    }

    /// Closure under the commutator bracket, checked on basis pairs.
    pub fn is_lie_closed(&self, _alg: &FDAlgebra) -> bool {
        let mats = self.basis_matrices();
        for (i, x) in mats.iter().enumerate() {
            for y in mats.iter().skip(i + 1) {
                let b = x.mul(y).sub(&y.mul(x));
                let as_der = Derivation { matrix: b };
                if !self.contains(&as_der) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for DerivationSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DerivationSpace dim {}", self.dim())
    }
}

/// Exact solution space of the Leibniz system; closure under the bracket is
/// verified before returning.
pub fn derivations(alg: &FDAlgebra) -> DerivationSpace {
    let d = alg.dim();
    let order = alg.order();
    let mut b = RrefBuilder::new(d * d, order);
    for i in 0..d {
        for j in 0..d {
            let rj = alg.right_mult(j);
            let li = alg.left_mult(i);
            for r in 0..d {
                let mut row = vec_zero(d * d, order);
                for q in 0..d {
                    let c = alg.sc(i, j, q);
                    if !c.is_zero() {
                        row[q * d + r] = row[q * d + r].add_ref(c);
                    }
                }
                for p in 0..d {
                    let c = rj.get(r, p);
                    if !c.is_zero() {
                        row[i * d + p] = row[i * d + p].sub_ref(c);
                    }
                    let c = li.get(r, p);
                    if !c.is_zero() {
                        row[j * d + p] = row[j * d + p].sub_ref(c);
                    }
                }
                b.push_row(row);
            }
        }
    }
    let space = b.kernel();
    let ds = DerivationSpace { alg_dim: d, space };
    debug_assert!(ds.is_lie_closed(alg));
    ds
}

/// Image of a -> ad(a); its dimension is dim A - dim Z(A).
pub fn inner_derivations(alg: &FDAlgebra) -> DerivationSpace {
    let d = alg.dim();
    let mut b = RrefBuilder::new(d * d, alg.order());
    for i in 0..d {
        let m = alg.left_mult(i).sub(alg.right_mult(i));
        let der = Derivation { matrix: m };
        b.push_row(der.to_vec());
    }
    DerivationSpace {
        alg_dim: d,
        space: Subspace::from_rref_builder(b),
    }
}

/// Out(A) = Der(A)/Int(A): dimension and explicit coset representatives.
pub fn out(alg: &FDAlgebra) -> (usize, Vec<Derivation>) {
    let der = derivations(alg);
    let int = inner_derivations(alg);
    let reps = der
        .space
        .complement_of(&int.space)
        .expect("Int(A) is contained in Der(A)")
        .into_iter()
        .map(|v| {
            Derivation::new(alg, Derivation::matrix_from_vec(alg.dim(), &v))
                .expect("coset representative is a derivation")
        })
        .collect::<Vec<_>>();
    (der.dim() - int.dim(), reps)
}

/// { X in D : X(source) is contained in target }. One solver covers G_C
/// (source = target = C), G_A (source = A), h (source = target = B) and
/// g-hat (target = 0).
pub fn derivations_mapping(
    alg: &FDAlgebra,
    d_space: &DerivationSpace,
    source: &Subspace,
    target: &Subspace,
) -> DerivationSpace {
    let d = alg.dim();
    let g = d_space.dim();
    let order = alg.order();
    let mats = d_space.basis_matrices();
    let mut b = RrefBuilder::new(g, order);
    for v in source.basis_rows() {
        let images: Vec<Vector> = mats
            .iter()
            .map(|m| target.quotient_coords(&m.apply(&v)))
            .collect();
        let qdim = d - target.dim();
        for qc in 0..qdim {
            let row: Vector = images.iter().map(|im| im[qc].clone()).collect();
            b.push_row(row);
        }
    }
    let coeffs = b.kernel();
    let mut span = RrefBuilder::new(d * d, order);
    for y in coeffs.basis_rows() {
        span.push_row(d_space.space.from_coordinates(&y));
    }
    DerivationSpace {
        alg_dim: d,
        space: Subspace::from_rref_builder(span),
    }
}

/// G_C = { X in Der(A) : X C in C }; with a subalgebra in place of C this
/// is h = { X : X B in B }.
pub fn preserving_space(
    alg: &FDAlgebra,
    d_space: &DerivationSpace,
    c: &Subspace,
) -> DerivationSpace {
    derivations_mapping(alg, d_space, c, c)
}

/// G_A = { X in Der(A) : X A in C }.
pub fn mapping_into(alg: &FDAlgebra, d_space: &DerivationSpace, c: &Subspace) -> DerivationSpace {
    let full = Subspace::full(alg.dim(), alg.order());
    derivations_mapping(alg, d_space, &full, c)
}

/// g-hat = { X in Der(A) : X B = 0 }.
pub fn killing_space(alg: &FDAlgebra, d_space: &DerivationSpace, b: &Subspace) -> DerivationSpace {
    let zero = Subspace::zero(alg.dim(), alg.order());
    derivations_mapping(alg, d_space, b, &zero)
}

/// Z(A)-module span of the given derivations: span of z*X over a basis of
/// the center (which contains the unit, so the X themselves are included).
pub fn zmodule_span(alg: &FDAlgebra, ders: &[Derivation]) -> DerivationSpace {
    let d = alg.dim();
    let mut b = RrefBuilder::new(d * d, alg.order());
    let center = alg.center();
    for x in ders {
        for z in center.basis_rows() {
            let zx = alg.left_mult_matrix(&z).mul(x.matrix());
            b.push_row(Derivation { matrix: zx }.to_vec());
        }
    }
    DerivationSpace {
        alg_dim: d,
        space: Subspace::from_rref_builder(b),
    }
}

/// The induced Lie algebra map pi : G_C -> Der(Q), pi(X) p(a) = p(X a).
pub struct InducedMap {
    /// Columns are images of the G_C basis, in End(Q) coordinates.
    pub matrix: ExactMatrix,
    pub image: DerivationSpace,
    /// Kernel as a subspace of Der(A); always equals G_A, which is verified.
    pub kernel: DerivationSpace,
}

pub fn induced_map_pi(
    alg: &FDAlgebra,
    g_c: &DerivationSpace,
    q: &QuotientAlgebra,
) -> Result<InducedMap> {
    let d = alg.dim();
    let qd = q.algebra.dim();
    let order = alg.order();
    let c_space = &q.ideal.space;
    let mats = g_c.basis_matrices();
    // Well-definedness: each X maps C into C, so proj . X kills C.
    for m in &mats {
        for v in c_space.basis_rows() {
            if !crate::matrix::vec_is_zero(&q.proj.apply(&m.apply(&v))) {
                return Err(Error::PredicateNotVerified(
                    "a derivation in the given space does not preserve the ideal".into(),
                ));
            }
        }
    }
    let mut cols: Vec<Vector> = Vec::with_capacity(mats.len());
    let mut image = RrefBuilder::new(qd * qd, order);
    for m in &mats {
        let pi_m = q.proj.mul(m).mul(&q.section);
        let der = Derivation::new(&q.algebra, pi_m)
            .map_err(|_| Error::Internal("pi(X) fails Leibniz on the quotient".into()))?;
        let v = der.to_vec();
        image.push_row(v.clone());
        cols.push(v);
    }
    let matrix = if cols.is_empty() {
        ExactMatrix::zeros(qd * qd, 0, order)
    } else {
        ExactMatrix::from_rows(cols).transpose()
    };
    // Kernel of the coefficient matrix, mapped back into End(A).
    let kernel_coeffs = matrix.nullspace();
    let mut kspan = RrefBuilder::new(d * d, order);
    for y in kernel_coeffs.basis_rows() {
        kspan.push_row(g_c.space.from_coordinates(&y));
    }
    let kernel = DerivationSpace {
        alg_dim: d,
        space: Subspace::from_rref_builder(kspan),
    };
    // ker pi = G_A exactly.
    let g_a = mapping_into(alg, g_c, c_space);
    if kernel.space != g_a.space {
        return Err(Error::Internal("kernel of pi differs from G_A".into()));
    }
    // pi(ad(a)) = ad(p(a)) on basis generators.
    for i in 0..d {
        let ad_a = ad(alg, &alg.basis_vector(i));
        let lhs = q.proj.mul(ad_a.matrix()).mul(&q.section);
        let ad_pa = ad(&q.algebra, &q.proj.apply(&alg.basis_vector(i)));
        if &lhs != ad_pa.matrix() {
            return Err(Error::Internal("pi(ad(a)) differs from ad(p(a))".into()));
        }
    }
    Ok(InducedMap {
        matrix,
        image: DerivationSpace {
            alg_dim: qd,
            space: Subspace::from_rref_builder(image),
        },
        kernel,
    })
}

/// The restriction map rho : h -> Der(B) for a unital subalgebra B; the
/// kernel is exactly g-hat, which is verified.
pub struct RestrictionMap {
    /// Columns are images of the h basis, in End(B) coordinates.
    pub matrix: ExactMatrix,
    pub image: DerivationSpace,
    pub kernel: DerivationSpace,
}

pub fn restriction_rho(
    alg: &FDAlgebra,
    h: &DerivationSpace,
    b: &Subalgebra,
) -> Result<RestrictionMap> {
    let d = alg.dim();
    let bd = b.algebra.dim();
    let order = alg.order();
    let mats = h.basis_matrices();
    let mut cols: Vec<Vector> = Vec::with_capacity(mats.len());
    let mut image = RrefBuilder::new(bd * bd, order);
    for m in &mats {
        let mut rho = ExactMatrix::zeros(bd, bd, order);
        for t in 0..bd {
            let im = m.apply(&b.inclusion.col_vec(t));
            let coords = b.restrict(&im).ok_or_else(|| {
                Error::PredicateNotVerified("a derivation in h does not map B into B".into())
            })?;
            for (p, v) in coords.into_iter().enumerate() {
                rho.set(p, t, v);
            }
        }
        let der = Derivation::new(&b.algebra, rho)
            .map_err(|_| Error::Internal("restriction fails Leibniz on B".into()))?;
        let v = der.to_vec();
        image.push_row(v.clone());
        cols.push(v);
    }
    let matrix = if cols.is_empty() {
        ExactMatrix::zeros(bd * bd, 0, order)
    } else {
        ExactMatrix::from_rows(cols).transpose()
    };
    let kernel_coeffs = matrix.nullspace();
    let mut kspan = RrefBuilder::new(d * d, order);
    for y in kernel_coeffs.basis_rows() {
        kspan.push_row(h.space.from_coordinates(&y));
    }
    let kernel = DerivationSpace {
        alg_dim: d,
        space: Subspace::from_rref_builder(kspan),
    };
    let g_hat = killing_space(alg, h, &b.space);
    if kernel.space != g_hat.space {
        return Err(Error::Internal("kernel of rho differs from g-hat".into()));
    }
    Ok(RestrictionMap {
        matrix,
        image: DerivationSpace {
            alg_dim: bd,
            space: Subspace::from_rref_builder(image),
        },
        kernel,
    })
}
