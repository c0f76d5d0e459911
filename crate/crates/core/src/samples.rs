//! Named constructors for the algebras the examples and fixtures use.

use crate::algebra::{
    direct_sum, dual_number_extension, function_algebra, matrix_algebra, tensor_product, FDAlgebra,
    Ideal,
};
use crate::matrix::{vec_zero, ExactMatrix, Vector};
use crate::scalar::Cyclotomic;
use crate::subspace::Subspace;

pub fn m2() -> FDAlgebra {
    matrix_algebra(2)
}

pub fn m3() -> FDAlgebra {
    matrix_algebra(3)
}

pub fn c3() -> FDAlgebra {
    function_algebra(3)
}

/// Functions on three points with values in M(2): the finite shadow of
/// matrix-valued functions on a manifold.
pub fn f3xm2() -> FDAlgebra {
    tensor_product(&function_algebra(3), &matrix_algebra(2))
}

/// The dual numbers on two nilpotents: C\[s,t\]/(s,t)^2.
pub fn dual2() -> FDAlgebra {
    dual_number_extension(2)
}

/// C\[s,t\]/(s,t)^2 (x) M(2): the quotient-manifold test algebra.
pub fn dual2xm2() -> FDAlgebra {
    tensor_product(&dual_number_extension(2), &matrix_algebra(2))
}

pub fn m2_plus_m2() -> FDAlgebra {
    direct_sum(&matrix_algebra(2), &matrix_algebra(2))
}

/// The ideal of functions vanishing at point `p` (0-based) in f3xm2.
pub fn f3xm2_vanishing_ideal(a: &FDAlgebra, p: usize) -> Ideal {
    let gens: Vec<Vector> = (0..3)
        .filter(|&i| i != p)
        .flat_map(|i| (0..4).map(move |j| i * 4 + j))
        .map(|ix| a.basis_vector(ix))
        .collect();
    a.ideal_closure(&gens)
}

/// The diagonal copy of M(2) inside M(2) (+) M(2).
pub fn diagonal_subspace(a: &FDAlgebra) -> Subspace {
    let vs: Vec<Vector> = (0..4)
        .map(|i| {
            let mut v = vec_zero(8, a.order());
            v[i] = Cyclotomic::one(a.order());
            v[4 + i] = Cyclotomic::one(a.order());
            v
        })
        .collect();
    Subspace::from_vectors(8, a.order(), &vs)
}

/// The clock and shift matrices over Q(zeta_n): U diagonal with powers of
/// q, V the cyclic shift; UV = qVU and together they generate M(n).
pub fn clock_shift_matrices(n: usize) -> (ExactMatrix, ExactMatrix) {
    let order = n as u64;
    let mut u = ExactMatrix::zeros(n, n, order);
    for i in 0..n {
        u.set(i, i, Cyclotomic::root_of_unity(order, i as i64));
    }
    let mut v = ExactMatrix::zeros(n, n, order);
    for i in 0..n {
        v.set(i, (i + 1) % n, Cyclotomic::one(order));
    }
    (u, v)
}
