//! Derivation-based differential forms: antisymmetric Z(A)-multilinear maps
//! from Der(A)^n to A, the Koszul differential, the (non graded-commutative)
//! product, the Cartan operations i_X and L_X, the generated subalgebra of
//! forms, the constrained subcomplex attached to an ideal, the projection
//! onto forms of a quotient, and basic subspaces for a Lie algebra action.
//!
//! A form of degree n is stored by its values on increasing basis tuples of
//! a fixed C-basis D_1..D_r of Der(A): coordinate (rank of tuple)*d + k is
//! the coefficient of e_k in omega(D_{i_1},...,D_{i_n}). Z(A)-multilinearity
//! is imposed as linear constraints over those coordinates, since Der(A)
//! need not be a free Z(A)-module.

use crate::algebra::{FDAlgebra, QuotientAlgebra, Subalgebra};
use crate::derivation::{derivations, Derivation, DerivationSpace, InducedMap, RestrictionMap};
use crate::error::{Error, Result};
use crate::matrix::{vec_is_zero, vec_zero, ExactMatrix, RrefBuilder, Vector};
use crate::scalar::Cyclotomic;
use crate::subspace::Subspace;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: usize = 1;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// Lexicographic rank of an increasing tuple among the k-subsets of 0..r.
fn comb_rank(c: &[usize], r: usize) -> usize {
    let n = c.len();
    let mut rank = 0;
    let mut prev = 0;
    for (t, &ct) in c.iter().enumerate() {
        for j in prev..ct {
            rank += binom(r - 1 - j, n - 1 - t);
        }
        prev = ct + 1;
    }
    rank
}

fn for_each_combination(r: usize, n: usize, mut f: impl FnMut(&[usize])) {
    if n > r {
        return;
    }
    let mut c: Vec<usize> = (0..n).collect();
    loop {
        f(&c);
        // advance
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < r - (n - i) {
                c[i] += 1;
                for j in i + 1..n {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        if n == 0 {
            return;
        }
    }
}

/// All precomputed data needed to operate on forms over one algebra: the
/// canonical Der(A) basis, its bracket table, and the center action table.
pub struct FormContext {
    pub alg: FDAlgebra,
    pub der: DerivationSpace,
    der_mats: Vec<ExactMatrix>,
    /// brackets[i][j] = coordinates of [D_i, D_j] over the Der basis.
    brackets: Vec<Vec<Vector>>,
    /// z_action[c][j] = coordinates of z_c * D_j over the Der basis.
    z_action: Vec<Vec<Vector>>,
    pub center: Subspace,
    order: u64,
}

impl FormContext {
    pub fn new(alg: &FDAlgebra) -> FormContext {
        let der = derivations(alg);
        let der_mats = der.basis_matrices();
        let r = der_mats.len();
        let order = alg.order();
        let mut brackets = Vec::with_capacity(r);
        for i in 0..r {
            let mut row = Vec::with_capacity(r);
            for j in 0..r {
                let b = der_mats[i]
                    .mul(&der_mats[j])
                    .sub(&der_mats[j].mul(&der_mats[i]));
                let coords = der
                    .space
                    .coordinates(
                        &Derivation::new(alg, b)
                            .expect("bracket is a derivation")
                            .to_vec(),
                    )
                    .expect("Der(A) is closed under the bracket");
                row.push(coords);
            }
            brackets.push(row);
        }
        let center = alg.center();
        let mut z_action = Vec::with_capacity(center.dim());
        for z in center.basis_rows() {
            let lz = alg.left_mult_matrix(&z);
            let mut row = Vec::with_capacity(r);
            for mat in &der_mats {
                let zx = lz.mul(mat);
                let coords = der
                    .space
                    .coordinates(
                        &Derivation::new(alg, zx)
                            .expect("z*X is a derivation")
                            .to_vec(),
                    )
                    .expect("Der(A) is a Z(A)-module");
                row.push(coords);
            }
            z_action.push(row);
        }
        FormContext {
            alg: alg.clone(),
            der,
            der_mats,
            brackets,
            z_action,
            center,
            order,
        }
    }

    pub fn rank(&self) -> usize {
        self.der_mats.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn der_matrix(&self, i: usize) -> &ExactMatrix {
        &self.der_mats[i]
    }

    pub fn ambient_dim(&self, degree: usize) -> usize {
        binom(self.rank(), degree) * self.alg.dim()
    }

    pub fn zero_form(&self, degree: usize) -> Form {
        Form {
            degree,
            values: vec_zero(self.ambient_dim(degree), self.order),
        }
    }

    /// Coordinates of a derivation over the context basis.
    pub fn der_coords(&self, x: &Derivation) -> Option<Vector> {
        self.der.space.coordinates(&x.to_vec())
    }

    /// Value on a basis tuple given by arbitrary indices: antisymmetric
    /// lookup with sign, zero on repeated indices.
    pub fn value_at(&self, form: &Form, idx: &[usize]) -> Vector {
        let d = self.alg.dim();
        debug_assert_eq!(idx.len(), form.degree);
        let mut sorted: Vec<usize> = idx.to_vec();
        // insertion sort, counting inversions
        let mut inversions = 0usize;
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                inversions += 1;
                j -= 1;
            }
        }
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return vec_zero(d, self.order);
            }
        }
        let rk = comb_rank(&sorted, self.rank());
        let slice = &form.values[rk * d..(rk + 1) * d];
        if inversions % 2 == 0 {
            slice.to_vec()
        } else {
            slice.iter().map(|c| c.neg_ref()).collect()
        }
    }

    fn set_value(&self, form: &mut Form, tuple: &[usize], v: Vector) {
        let d = self.alg.dim();
        let rk = comb_rank(tuple, self.rank());
        for (k, c) in v.into_iter().enumerate() {
            form.values[rk * d + k] = c;
        }
    }

    /// Multilinear antisymmetric evaluation on derivations given by their
    /// coordinate vectors over the context basis.
    pub fn eval(&self, form: &Form, args: &[Vector]) -> Vector {
        let d = self.alg.dim();
        let n = form.degree;
        assert_eq!(args.len(), n);
        if n == 0 {
            return form.values.clone();
        }
        let mut out = vec_zero(d, self.order);
        for_each_combination(self.rank(), n, |t| {
            // determinant of the n x n minor args[s][t[u]]
            let det = minor_det(args, t, self.order);
            if det.is_zero() {
                return;
            }
            let rk = comb_rank(t, self.rank());
            for k in 0..d {
                let c = &form.values[rk * d + k];
                if !c.is_zero() {
                    out[k].add_mul_assign(&det, c);
                }
            }
        });
        out
    }

    /// The exact 1-form da: X -> X(a).
    pub fn d_zero(&self, a: &[Cyclotomic]) -> Form {
        let d = self.alg.dim();
        let r = self.rank();
        let mut values = Vec::with_capacity(r * d);
        for mat in &self.der_mats {
            values.extend(mat.apply(a));
        }
        Form { degree: 1, values }
    }

    /// Koszul differential.
    pub fn d(&self, form: &Form, cap: usize) -> Result<Form> {
        let n = form.degree;
        if n + 1 > cap {
            return Err(Error::CapExceeded {
                requested: n + 1,
                cap,
            });
        }
        if n == 0 {
            return Ok(self.d_zero(&form.values));
        }
        let d = self.alg.dim();
        let mut out = self.zero_form(n + 1);
        for_each_combination(self.rank(), n + 1, |t| {
            let mut value = vec_zero(d, self.order);
            // sum_i (-1)^i D_{t_i} omega(..omit i..)
            for (i, &ti) in t.iter().enumerate() {
                let mut rest: Vec<usize> = Vec::with_capacity(n);
                rest.extend_from_slice(&t[..i]);
                rest.extend_from_slice(&t[i + 1..]);
                let w = self.der_mats[ti].apply(&self.value_at(form, &rest));
                if i % 2 == 0 {
                    value = crate::matrix::vec_add(&value, &w);
                } else {
                    value = crate::matrix::vec_sub(&value, &w);
                }
            }
            // sum_{i<j} (-1)^{i+j} omega([D_{t_i}, D_{t_j}], ..omit i,j..)
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    let coords = &self.brackets[t[i]][t[j]];
                    if vec_is_zero(coords) {
                        continue;
                    }
                    let mut rest: Vec<usize> = Vec::with_capacity(n);
                    rest.extend_from_slice(&t[..i]);
                    rest.extend_from_slice(&t[i + 1..j]);
                    rest.extend_from_slice(&t[j + 1..]);
                    let mut idx = vec![0usize; n];
                    idx[1..].copy_from_slice(&rest[..n - 1]);
                    let neg = (i + j) % 2 == 1;
                    for (l, c) in coords.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        idx[0] = l;
                        let w = self.value_at(form, &idx);
                        for k in 0..d {
                            if !w[k].is_zero() {
                                if neg {
                                    value[k].sub_mul_assign(c, &w[k]);
                                } else {
                                    value[k].add_mul_assign(c, &w[k]);
                                }
                            }
                        }
                    }
                }
            }
            self.set_value(&mut out, t, value);
        });
        Ok(out)
    }

    /// Shuffle-sum product without factorial normalization; associative but
    /// not graded-commutative in general.
    pub fn wedge(&self, a: &Form, b: &Form, cap: usize) -> Result<Form> {
        let (p, q) = (a.degree, b.degree);
        if p + q > cap {
            return Err(Error::CapExceeded {
                requested: p + q,
                cap,
            });
        }
        let d = self.alg.dim();
        let mut out = self.zero_form(p + q);
        for_each_combination(self.rank(), p + q, |t| {
            let mut value = vec_zero(d, self.order);
            for_each_combination(p + q, p, |pos| {
                let mut sign = 0usize;
                for (i, &s) in pos.iter().enumerate() {
                    sign += s - i;
                }
                let left: Vec<usize> = pos.iter().map(|&s| t[s]).collect();
                let mut in_pos = vec![false; p + q];
                for &s in pos {
                    in_pos[s] = true;
                }
                let right: Vec<usize> = (0..p + q).filter(|&s| !in_pos[s]).map(|s| t[s]).collect();
                let va = self.value_at(a, &left);
                let vb = self.value_at(b, &right);
                let prod = self.alg.product(&va, &vb);
                if sign % 2 == 0 {
                    value = crate::matrix::vec_add(&value, &prod);
                } else {
                    value = crate::matrix::vec_sub(&value, &prod);
                }
            });
            self.set_value(&mut out, t, value);
        });
        Ok(out)
    }

    /// Contraction i_X; on degree 0 it returns the zero 0-form.
    pub fn contract(&self, x_coords: &[Cyclotomic], form: &Form) -> Form {
        let n = form.degree;
        let d = self.alg.dim();
        if n == 0 {
            return self.zero_form(0);
        }
        let mut out = self.zero_form(n - 1);
        for_each_combination(self.rank(), n - 1, |t| {
            let mut value = vec_zero(d, self.order);
            let mut idx = vec![0usize; n];
            idx[1..].copy_from_slice(t);
            for (l, c) in x_coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                idx[0] = l;
                let w = self.value_at(form, &idx);
                for k in 0..d {
                    if !w[k].is_zero() {
                        value[k].add_mul_assign(c, &w[k]);
                    }
                }
            }
            self.set_value(&mut out, t, value);
        });
        out
    }

    /// Lie derivative by the direct formula
    /// (L_X w)(X_1..X_n) = X(w(X_1..X_n)) - sum_t w(X_1, .., bracket(X, X_t), .., X_n);
    /// the homotopy identity L_X = i_X d + d i_X is a checked property,
    /// not the definition.
    pub fn lie(&self, x: &Derivation, form: &Form) -> Form {
        let n = form.degree;
        let d = self.alg.dim();
        let mut out = self.zero_form(n);
        // [X, D_l] expansions
        let bx: Vec<Vector> = self
            .der_mats
            .iter()
            .map(|m| {
                let b = x.matrix().mul(m).sub(&m.mul(x.matrix()));
                self.der
                    .space
                    .coordinates(&crate::derivation::flatten_endo(&b))
                    .expect("bracket with a derivation stays in Der(A)")
            })
            .collect();
        for_each_combination(self.rank(), n, |t| {
            let mut value = x.matrix().apply(&self.value_at(form, t));
            for (slot, &ts) in t.iter().enumerate() {
                let coords = &bx[ts];
                if vec_is_zero(coords) {
                    continue;
                }
                let mut idx = t.to_vec();
                for (l, c) in coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    idx[slot] = l;
                    let w = self.value_at(form, &idx);
                    for k in 0..d {
                        if !w[k].is_zero() {
                            value[k].sub_mul_assign(c, &w[k]);
                        }
                    }
                }
                idx[slot] = ts;
            }
            self.set_value(&mut out, t, value);
        });
        out
    }

    /// The full space of antisymmetric Z(A)-multilinear forms of one degree,
    /// cut out of the coefficient space by the center-linearity constraints.
    pub fn omega_bar(&self, n: usize, cap: usize) -> Result<Subspace> {
        if n > cap {
            return Err(Error::CapExceeded { requested: n, cap });
        }
        let d = self.alg.dim();
        let r = self.rank();
        let cols = self.ambient_dim(n);
        if n == 0 {
            return Ok(Subspace::full(d, self.order));
        }
        if n > r {
            return Ok(Subspace::zero(cols, self.order));
        }
        let mut b = RrefBuilder::new(cols, self.order);
        for (ci, z) in self.center.basis_rows().enumerate() {
            let lz = self.alg.left_mult_matrix(&z);
            for j in 0..r {
                let lambda = &self.z_action[ci][j];
                for_each_combination(r, n - 1, |rest| {
                    // sum_l lambda_l w(D_l, rest) - z * w(D_j, rest) = 0
                    let mut rows: Vec<Vector> =
                        (0..d).map(|_| vec_zero(cols, self.order)).collect();
                    let mut idx = vec![0usize; n];
                    idx[1..].copy_from_slice(rest);
                    for (l, lam) in lambda.iter().enumerate() {
                        if lam.is_zero() {
                            continue;
                        }
                        idx[0] = l;
                        add_tuple_entries(self, &idx, lam, None, &mut rows);
                    }
                    idx[0] = j;
                    let neg_one = Cyclotomic::from_integer(-1, self.order);
                    add_tuple_entries(self, &idx, &neg_one, Some(&lz), &mut rows);
                    for row in rows {
                        b.push_row(row);
                    }
                });
            }
        }
        Ok(b.kernel())
    }

    /// Spans of a_0 da_1 ... da_n for n <= cap; each degree is verified to
    /// map into the next one under d.
    pub fn omega_generated(&self, cap: usize) -> Result<Vec<Subspace>> {
        let d = self.alg.dim();
        let mut out: Vec<Subspace> = vec![Subspace::full(d, self.order)];
        let exact: Vec<Form> = (0..d)
            .map(|bi| self.d_zero(&self.alg.basis_vector(bi)))
            .collect();
        for n in 1..=cap {
            let cols = self.ambient_dim(n);
            let mut span = RrefBuilder::new(cols, self.order);
            if n == 1 {
                for a in 0..d {
                    let la = self.alg.left_mult(a);
                    for db in &exact {
                        let mut vals = Vec::with_capacity(db.values.len());
                        for chunk in db.values.chunks(d) {
                            vals.extend(la.apply(chunk));
                        }
                        span.push_row(vals);
                    }
                }
            } else {
                for prev in out[n - 1].basis_rows() {
                    let w = Form {
                        degree: n - 1,
                        values: prev,
                    };
                    for db in &exact {
                        span.push_row(self.wedge(&w, db, cap)?.values);
                    }
                }
            }
            out.push(Subspace::from_rref_builder(span));
        }
        // d-closure of the generated algebra, degree by degree.
        for n in 0..cap {
            for v in out[n].basis_rows() {
                let f = Form {
                    degree: n,
                    values: v,
                };
                let df = self.d(&f, cap)?;
                if !out[n + 1].contains(&df.values) {
                    return Err(Error::Internal(format!(
                        "generated forms are not d-closed at degree {}",
                        n
                    )));
                }
            }
        }
        Ok(out)
    }

    /// The recursive subcomplex attached to an ideal: degree 0 is C itself,
    /// degree n is { w : i_X w lies in the previous degree for all X in G_C }.
    pub fn omega_c_subcomplex(
        &self,
        c: &Subspace,
        g_c: &DerivationSpace,
        omega: &[Subspace],
        cap: usize,
    ) -> Result<Vec<Subspace>> {
        let mut out: Vec<Subspace> = vec![c.clone()];
        let g_coords: Vec<Vector> = g_c
            .space
            .basis_rows()
            .map(|v| {
                self.der
                    .space
                    .coordinates(&v)
                    .expect("G_C is a subspace of Der(A)")
            })
            .collect();
        for n in 1..=cap {
            let basis: Vec<Vector> = omega[n].basis_rows().collect();
            let mut b = RrefBuilder::new(basis.len(), self.order);
            let prev = &out[n - 1];
            let prev_ambient = self.ambient_dim(n - 1);
            let qdim = prev_ambient - prev.dim();
            for x in &g_coords {
                // quotient coordinates of i_X(each basis form) modulo prev
                let reduced: Vec<Vector> = basis
                    .iter()
                    .map(|v| {
                        let f = Form {
                            degree: n,
                            values: v.clone(),
                        };
                        prev.quotient_coords(&self.contract(x, &f).values)
                    })
                    .collect();
                for qc in 0..qdim {
                    let row: Vector = reduced.iter().map(|rv| rv[qc].clone()).collect();
                    b.push_row(row);
                }
            }
            let coeffs = b.kernel();
            let mut span = RrefBuilder::new(self.ambient_dim(n), self.order);
            for y in coeffs.basis_rows() {
                let mut acc = vec_zero(self.ambient_dim(n), self.order);
                for (t, c) in y.iter().enumerate() {
                    if !c.is_zero() {
                        crate::matrix::vec_add_mul(&mut acc, c, &basis[t]);
                    }
                }
                span.push_row(acc);
            }
            out.push(Subspace::from_rref_builder(span));
        }
        Ok(out)
    }

    /// Horizontal and invariant elements of a space of forms under the
    /// listed derivations; d-stability of the result is verified by
    /// `verify_basic_d_stable`.
    pub fn basic_subspace(&self, g: &[Derivation], degree: usize, space: &Subspace) -> Subspace {
        let basis: Vec<Vector> = space.basis_rows().collect();
        let mut b = RrefBuilder::new(basis.len(), self.order);
        for x in g {
            let xc = self
                .der_coords(x)
                .expect("the acting derivations lie in Der(A)");
            let contracted: Vec<Vector> = basis
                .iter()
                .map(|v| {
                    let f = Form {
                        degree,
                        values: v.clone(),
                    };
                    self.contract(&xc, &f).values
                })
                .collect();
            let lies: Vec<Vector> = basis
                .iter()
                .map(|v| {
                    let f = Form {
                        degree,
                        values: v.clone(),
                    };
                    self.lie(x, &f).values
                })
                .collect();
            let low = if degree == 0 {
                self.alg.dim()
            } else {
                self.ambient_dim(degree - 1)
            };
            for coord in 0..low {
                let row: Vector = contracted.iter().map(|cv| cv[coord].clone()).collect();
                b.push_row(row);
            }
            for coord in 0..self.ambient_dim(degree) {
                let row: Vector = lies.iter().map(|lv| lv[coord].clone()).collect();
                b.push_row(row);
            }
        }
        let coeffs = b.kernel();
        let mut span = RrefBuilder::new(self.ambient_dim(degree), self.order);
        for y in coeffs.basis_rows() {
            let mut acc = vec_zero(self.ambient_dim(degree), self.order);
            for (t, c) in y.iter().enumerate() {
                if !c.is_zero() {
                    crate::matrix::vec_add_mul(&mut acc, c, &basis[t]);
                }
            }
            span.push_row(acc);
        }
        Subspace::from_rref_builder(span)
    }

    /// d maps basic elements to basic elements.
    pub fn verify_basic_d_stable(
        &self,
        g: &[Derivation],
        degree: usize,
        basic: &Subspace,
        cap: usize,
    ) -> Result<bool> {
        for v in basic.basis_rows() {
            let f = Form { degree, values: v };
            let df = self.d(&f, cap)?;
            for x in g {
                let xc = self.der_coords(x).expect("acting derivation in Der(A)");
                if !vec_is_zero(&self.contract(&xc, &df).values) {
                    return Ok(false);
                }
                if !vec_is_zero(&self.lie(x, &df).values) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn minor_det(args: &[Vector], cols: &[usize], order: u64) -> Cyclotomic {
    let n = cols.len();
    match n {
        1 => args[0][cols[0]].clone(),
        2 => {
            let mut det = args[0][cols[0]].mul_ref(&args[1][cols[1]]);
            det.sub_mul_assign(&args[0][cols[1]], &args[1][cols[0]]);
            det
        }
        _ => {
            // Laplace expansion along the first row; n stays tiny.
            let mut det = Cyclotomic::zero(order);
            for (i, &c) in cols.iter().enumerate() {
                if args[0][c].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, &x)| x)
                    .collect();
                let sub = minor_det(&args[1..], &rest, order);
                if i % 2 == 0 {
                    det.add_mul_assign(&args[0][c], &sub);
                } else {
                    det.sub_mul_assign(&args[0][c], &sub);
                }
            }
            det
        }
    }
}

/// Scatter the coefficient pattern of one evaluated tuple into d constraint
/// rows: with `action` None the tuple contributes coeff * identity on the
/// value coordinates, otherwise coeff * action matrix.
fn add_tuple_entries(
    ctx: &FormContext,
    idx: &[usize],
    coeff: &Cyclotomic,
    action: Option<&ExactMatrix>,
    rows: &mut [Vector],
) {
    let d = ctx.alg.dim();
    let mut sorted: Vec<usize> = idx.to_vec();
    let mut inv = 0usize;
    for i in 1..sorted.len() {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            inv += 1;
            j -= 1;
        }
    }
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return;
        }
    }
    let rk = comb_rank(&sorted, ctx.rank());
    let signed = if inv % 2 == 0 {
        coeff.clone()
    } else {
        coeff.neg_ref()
    };
    match action {
        None => {
            for (a, row) in rows.iter_mut().enumerate() {
                row[rk * d + a] = row[rk * d + a].add_ref(&signed);
            }
        }
        Some(m) => {
            for (a, row) in rows.iter_mut().enumerate() {
                for ap in 0..d {
                    let c = m.get(a, ap);
                    if !c.is_zero() {
                        row[rk * d + ap].add_mul_assign(&signed, c);
                    }
                }
            }
        }
    }
}

/// A form: degree plus the coefficient vector over increasing basis tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    pub degree: usize,
    pub values: Vector,
}

impl Form {
    pub fn from_values(degree: usize, values: Vector) -> Form {
        Form { degree, values }
    }
}

impl std::fmt::Debug for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Form deg {} ({} coords)", self.degree, self.values.len())
    }
}

/// The degree-wise projection of generated forms onto the quotient:
/// p(a_0 da_1 ... da_n) = p(a_0) dp(a_1) ... dp(a_n), realized as a linear
/// map on the generated span with a well-definedness certificate.
pub struct DgaProjection {
    pub degree: usize,
    /// RREF rows of [generated-form coords | projected coords].
    rows: Vec<(Vector, Vector)>,
    pivots: Vec<usize>,
    pub image: Subspace,
    pub kernel: Subspace,
}

impl DgaProjection {
    /// Apply to a form in the generated span; None when outside the span.
    pub fn apply(&self, v: &[Cyclotomic]) -> Option<Vector> {
        let order = self
            .rows
            .first()
            .and_then(|(_, w)| w.first().map(|c| c.order()))
            .unwrap_or(1);
        let out_len = self.rows.first().map(|(_, w)| w.len()).unwrap_or(0);
        let mut rem: Vector = v.to_vec();
        let mut out = vec_zero(out_len, order);
        for ((row, w), &pc) in self.rows.iter().zip(&self.pivots) {
            if !rem[pc].is_zero() {
                let f = rem[pc].clone();
                for k in pc..rem.len() {
                    if !row[k].is_zero() {
                        rem[k].sub_mul_assign(&f, &row[k]);
                    }
                }
                crate::matrix::vec_add_mul(&mut out, &f, w);
            }
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(out)
        } else {
            None
        }
    }
}

/// Build the projections of generated forms for every degree up to cap and
/// verify the graded-differential-algebra relations d.p = p.d and
/// i_{pi(X)}.p = p.i_X on the generated bases.
pub fn project_forms(
    ctx_a: &FormContext,
    q: &QuotientAlgebra,
    pi: &InducedMap,
    g_c: &DerivationSpace,
    ctx_q: &FormContext,
    omega_a: &[Subspace],
    omega_q: &[Subspace],
    cap: usize,
) -> Result<Vec<DgaProjection>> {
    if pi.image.space != ctx_q.der.space {
        return Err(Error::PredicateNotVerified(
            "pi is not surjective onto Der(Q); the projection of forms is only defined for submanifold algebras".into(),
        ));
    }
    let d = ctx_a.alg.dim();
    let qd = q.algebra.dim();
    // Generators per degree: (form over A, its image over Q).
    let exact_a: Vec<Form> = (0..d)
        .map(|i| ctx_a.d_zero(&ctx_a.alg.basis_vector(i)))
        .collect();
    let exact_q: Vec<Form> = (0..d)
        .map(|i| ctx_q.d_zero(&q.proj.apply(&ctx_a.alg.basis_vector(i))))
        .collect();
    let mut gens: Vec<Vec<(Vector, Vector)>> = Vec::with_capacity(cap + 1);
    let mut deg0 = Vec::with_capacity(d);
    for i in 0..d {
        deg0.push((
            ctx_a.alg.basis_vector(i),
            q.proj.apply(&ctx_a.alg.basis_vector(i)),
        ));
    }
    gens.push(deg0);
    for n in 1..=cap {
        let mut cur = Vec::new();
        for (va, vq) in &gens[n - 1] {
            let fa = Form {
                degree: n - 1,
                values: va.clone(),
            };
            let fq = Form {
                degree: n - 1,
                values: vq.clone(),
            };
            for i in 0..d {
                let wa = if n == 1 {
                    // a * d(e_i): left multiplication of the exact form values
                    let la = ctx_a.alg.left_mult_matrix(va);
                    let mut vals = Vec::with_capacity(exact_a[i].values.len());
                    for chunk in exact_a[i].values.chunks(d) {
                        vals.extend(la.apply(chunk));
                    }
                    Form {
                        degree: 1,
                        values: vals,
                    }
                } else {
                    ctx_a.wedge(&fa, &exact_a[i], cap)?
                };
                let wq = if n == 1 {
                    let lq = q.algebra.left_mult_matrix(vq);
                    let mut vals = Vec::with_capacity(exact_q[i].values.len());
                    for chunk in exact_q[i].values.chunks(qd) {
                        vals.extend(lq.apply(chunk));
                    }
                    Form {
                        degree: 1,
                        values: vals,
                    }
                } else {
                    ctx_q.wedge(&fq, &exact_q[i], cap)?
                };
                cur.push((wa.values, wq.values));
            }
        }
        gens.push(cur);
    }
    let mut maps = Vec::with_capacity(cap + 1);
    for (n, gen_list) in gens.iter().enumerate() {
        let cols_a = ctx_a.ambient_dim(n);
        let cols_q = ctx_q.ambient_dim(n);
        let mut rows: Vec<(Vector, Vector)> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut image = RrefBuilder::new(cols_q, ctx_q.order());
        for (va, vq) in gen_list {
            let mut a = va.clone();
            let mut qv = vq.clone();
            for ((row, w), &pc) in rows.iter().zip(&pivots) {
                if !a[pc].is_zero() {
                    let f = a[pc].clone();
                    for k in pc..cols_a {
                        if !row[k].is_zero() {
                            a[k].sub_mul_assign(&f, &row[k]);
                        }
                    }
                    for k in 0..cols_q {
                        if !w[k].is_zero() {
                            qv[k].sub_mul_assign(&f, &w[k]);
                        }
                    }
                }
            }
            image.push_row(vq.clone());
            match a.iter().position(|c| !c.is_zero()) {
                None => {
                    // A linear relation among generators must be a relation
                    // among the images: this is the well-definedness of p.
                    if !qv.iter().all(|c| c.is_zero()) {
                        return Err(Error::PredicateNotVerified(
                            "the projection of forms is not well defined on the generated span"
                                .into(),
                        ));
                    }
                }
                Some(pc) => {
                    let inv = a[pc].inv().expect("nonzero pivot");
                    for k in pc..cols_a {
                        if !a[k].is_zero() {
                            a[k] = a[k].mul_ref(&inv);
                        }
                    }
                    for k in 0..cols_q {
                        if !qv[k].is_zero() {
                            qv[k] = qv[k].mul_ref(&inv);
                        }
                    }
                    for ((row, w), _) in rows.iter_mut().zip(&pivots) {
                        if !row[pc].is_zero() {
                            let f = row[pc].clone();
                            for k in pc..cols_a {
                                if !a[k].is_zero() {
                                    row[k].sub_mul_assign(&f, &a[k]);
                                }
                            }
                            for k in 0..cols_q {
                                if !qv[k].is_zero() {
                                    w[k].sub_mul_assign(&f, &qv[k]);
                                }
                            }
                        }
                    }
                    let at = pivots.partition_point(|&p| p < pc);
                    pivots.insert(at, pc);
                    rows.insert(at, (a, qv));
                }
            }
        }
        // Kernel of p on the generated span.
        let basis: Vec<Vector> = omega_a[n].basis_rows().collect();
        let proj = DgaProjection {
            degree: n,
            rows,
            pivots,
            image: Subspace::from_rref_builder(image),
            kernel: Subspace::zero(cols_a, ctx_a.order()),
        };
        let mut coeff_rows = RrefBuilder::new(basis.len(), ctx_a.order());
        let mut images: Vec<Vector> = Vec::with_capacity(basis.len());
        for v in &basis {
            let w = proj.apply(v).ok_or_else(|| {
                Error::Internal("generated basis escapes the projection span".into())
            })?;
            images.push(w);
        }
        for coord in 0..cols_q {
            let row: Vector = images.iter().map(|w| w[coord].clone()).collect();
            coeff_rows.push_row(row);
        }
        let coeffs = coeff_rows.kernel();
        let mut kspan = RrefBuilder::new(cols_a, ctx_a.order());
        for y in coeffs.basis_rows() {
            let mut acc = vec_zero(cols_a, ctx_a.order());
            for (t, c) in y.iter().enumerate() {
                if !c.is_zero() {
                    crate::matrix::vec_add_mul(&mut acc, c, &basis[t]);
                }
            }
            kspan.push_row(acc);
        }
        let mut proj = proj;
        proj.kernel = Subspace::from_rref_builder(kspan);
        maps.push(proj);
    }
    // Surjectivity onto the generated forms of Q.
    for n in 0..=cap {
        if maps[n].image != omega_q[n] {
            return Err(Error::Internal(format!(
                "projection image differs from the generated forms of the quotient at degree {}",
                n
            )));
        }
    }
    // d . p = p . d on the generated bases.
    for n in 0..cap {
        for v in omega_a[n].basis_rows() {
            let f = Form {
                degree: n,
                values: v.clone(),
            };
            let pv = maps[n].apply(&v).unwrap();
            let lhs = ctx_q.d(
                &Form {
                    degree: n,
                    values: pv,
                },
                cap,
            )?;
            let rhs = maps[n + 1]
                .apply(&ctx_a.d(&f, cap)?.values)
                .ok_or_else(|| Error::Internal("d leaves the generated span".into()))?;
            if lhs.values != rhs {
                return Err(Error::Internal("d . p differs from p . d".into()));
            }
        }
    }
    // p is multiplicative: p(w ^ e) = p(w) ^ p(e) on generated bases, for
    // every degree split that stays under the cap.
    for p_deg in 0..=cap {
        for q_deg in 0..=cap - p_deg {
            for vw in omega_a[p_deg].basis_rows() {
                let fw = Form {
                    degree: p_deg,
                    values: vw.clone(),
                };
                let pw = Form {
                    degree: p_deg,
                    values: maps[p_deg].apply(&vw).unwrap(),
                };
                for ve in omega_a[q_deg].basis_rows() {
                    let fe = Form {
                        degree: q_deg,
                        values: ve.clone(),
                    };
                    let pe = Form {
                        degree: q_deg,
                        values: maps[q_deg].apply(&ve).unwrap(),
                    };
                    let lhs = maps[p_deg + q_deg]
                        .apply(&ctx_a.wedge(&fw, &fe, cap)?.values)
                        .ok_or_else(|| {
                            Error::Internal("product leaves the generated span".into())
                        })?;
                    let rhs = ctx_q.wedge(&pw, &pe, cap)?.values;
                    if lhs != rhs {
                        return Err(Error::Internal(
                            "the projection of forms is not multiplicative".into(),
                        ));
                    }
                }
            }
        }
    }
    // i_{pi(X)} . p = p . i_X on the generated bases, for X in G_C.
    let g_mats = g_c.basis_matrices();
    for (t, gm) in g_mats.iter().enumerate() {
        let pi_x = pi.matrix.col_vec(t);
        let pi_x_coords = ctx_q
            .der
            .space
            .coordinates(&pi_x)
            .ok_or_else(|| Error::Internal("pi(X) outside Der(Q)".into()))?;
        let x_coords = ctx_a
            .der
            .space
            .coordinates(&Derivation::new(&ctx_a.alg, gm.clone()).unwrap().to_vec())
            .unwrap();
        for n in 1..=cap {
            for v in omega_a[n].basis_rows() {
                let f = Form {
                    degree: n,
                    values: v.clone(),
                };
                let pv = maps[n].apply(&v).unwrap();
                let lhs = ctx_q.contract(
                    &pi_x_coords,
                    &Form {
                        degree: n,
                        values: pv,
                    },
                );
                let rhs = maps[n - 1]
                    .apply(&ctx_a.contract(&x_coords, &f).values)
                    .ok_or_else(|| Error::Internal("i_X leaves the generated span".into()))?;
                if lhs.values != rhs {
                    return Err(Error::Internal("i_{pi X} . p differs from p . i_X".into()));
                }
            }
        }
    }
    Ok(maps)
}

/// Per-degree outcome of the basic-forms comparison.
pub struct IsomDegreeReport {
    pub degree: usize,
    pub dim_basic_a: usize,
    pub dim_omega_bar_b: usize,
    pub bijective: bool,
}

pub struct IsomReport {
    pub hypothesis_zmodule_full: bool,
    pub degrees: Vec<IsomDegreeReport>,
}

/// Check the hypothesis that the Z(A)-module generated by h is all of
/// Der(A); when it holds, compare basic forms over A with forms over B
/// through the restriction map and certify bijectivity degree by degree.
pub fn isom_check(
    ctx_a: &FormContext,
    b: &Subalgebra,
    h: &DerivationSpace,
    ghat: &DerivationSpace,
    rho: &RestrictionMap,
    cap: usize,
) -> Result<IsomReport> {
    let hyp = crate::derivation::zmodule_span(&ctx_a.alg, &h.basis_derivations(&ctx_a.alg));
    let hypothesis = hyp.space == ctx_a.der.space;
    let mut degrees = Vec::new();
    if !hypothesis {
        return Ok(IsomReport {
            hypothesis_zmodule_full: false,
            degrees,
        });
    }
    let ctx_b = FormContext::new(&b.algebra);
    let ghat_ders = ghat.basis_derivations(&ctx_a.alg);
    // Lifts of the Der(B) basis through rho.
    let bd = b.algebra.dim();
    let mut lifts: Vec<Vector> = Vec::new();
    for t in 0..ctx_b.rank() {
        let target = {
            let m = ctx_b.der_matrix(t);
            let mut v = Vec::with_capacity(bd * bd);
            for q in 0..bd {
                for p in 0..bd {
                    v.push(m.get(p, q).clone());
                }
            }
            v
        };
        let sol = rho.matrix.solve(&target).ok_or_else(|| {
            Error::PredicateNotVerified("rho is not surjective onto Der(B)".into())
        })?;
        // coordinates over the h basis -> coordinates over the Der(A) basis
        let amb = h.space.from_coordinates(&sol);
        let coords = ctx_a.der.space.coordinates(&amb).expect("h inside Der(A)");
        lifts.push(coords);
    }
    for n in 0..=cap {
        let bar_a = ctx_a.omega_bar(n, cap)?;
        let basic = ctx_a.basic_subspace(&ghat_ders, n, &bar_a);
        if !ctx_a.verify_basic_d_stable(&ghat_ders, n, &basic, cap.max(n + 1))? {
            return Err(Error::Internal("basic subspace is not d-stable".into()));
        }
        let bar_b = ctx_b.omega_bar(n, cap)?;
        // Restriction of each basic form to lifted arguments.
        let mut image = RrefBuilder::new(ctx_b.ambient_dim(n), ctx_b.order());
        let mut injective = true;
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        for_each_combination(ctx_b.rank(), n, |t| tuples.push(t.to_vec()));
        for v in basic.basis_rows() {
            let f = Form {
                degree: n,
                values: v,
            };
            let mut vals = vec_zero(ctx_b.ambient_dim(n), ctx_b.order());
            let bd_amb = b.algebra.dim();
            for t in &tuples {
                let args: Vec<Vector> = t.iter().map(|&i| lifts[i].clone()).collect();
                let w = ctx_a.eval(&f, &args);
                let coords = b.restrict(&w).ok_or_else(|| {
                    Error::PredicateNotVerified(
                        "a basic form escapes B on lifted arguments; the quotient manifold conditions fail upstream"
                            .into(),
                    )
                })?;
                let rk = comb_rank(t, ctx_b.rank());
                for (k, c) in coords.into_iter().enumerate() {
                    vals[rk * bd_amb + k] = c;
                }
            }
            if !bar_b.contains(&vals) {
                return Err(Error::Internal(
                    "restricted form is not Z(B)-multilinear".into(),
                ));
            }
            if !image.push_row(vals) {
                injective = false;
            }
        }
        let bijective = injective && image.rank() == bar_b.dim() && basic.dim() == bar_b.dim();
        degrees.push(IsomDegreeReport {
            degree: n,
            dim_basic_a: basic.dim(),
            dim_omega_bar_b: bar_b.dim(),
            bijective,
        });
    }
    Ok(IsomReport {
        hypothesis_zmodule_full: true,
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{function_algebra, matrix_algebra, tensor_product};
    use crate::derivation::ad;
    use rand::{Rng, SeedableRng};

    const CAP: usize = 3;

    fn m2_ctx() -> FormContext {
        FormContext::new(&matrix_algebra(2))
    }

    #[test]
    fn exact_form_of_a_matrix_unit() {
        // (d e11)(ad e12) = [e12, e11] = -e12.
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let da = ctx.d_zero(&alg.basis_vector(0));
        let x = ad(alg, &alg.basis_vector(1));
        let xc = ctx.der_coords(&x).unwrap();
        let v = ctx.eval(&da, &[xc]);
        let expected = alg.commutator(&alg.basis_vector(1), &alg.basis_vector(0));
        assert_eq!(v, expected);
        assert_eq!(
            v,
            alg.basis_vector(1)
                .iter()
                .map(|c| c.neg_ref())
                .collect::<Vector>()
        );
    }

    #[test]
    fn d_of_unit_vanishes() {
        let ctx = m2_ctx();
        let one = Form::from_values(0, ctx.alg.unit().clone());
        assert!(vec_is_zero(&ctx.d(&one, CAP).unwrap().values));
    }

    #[test]
    fn d_squared_vanishes_on_basis_forms() {
        let ctx = m2_ctx();
        for i in 0..4 {
            let a = Form::from_values(0, ctx.alg.basis_vector(i));
            let da = ctx.d(&a, CAP).unwrap();
            let dda = ctx.d(&da, CAP).unwrap();
            assert!(vec_is_zero(&dda.values));
        }
    }

    #[test]
    fn d_squared_vanishes_on_omega_bar_two() {
        let ctx = m2_ctx();
        let bar1 = ctx.omega_bar(1, CAP).unwrap();
        for v in bar1.basis_rows() {
            let f = Form::from_values(1, v);
            let ddf = ctx.d(&ctx.d(&f, CAP).unwrap(), CAP).unwrap();
            assert!(vec_is_zero(&ddf.values));
        }
    }

    #[test]
    fn contraction_identities() {
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let x = ad(alg, &alg.basis_vector(1));
        let xc = ctx.der_coords(&x).unwrap();
        // i_X(da) = X(a)
        for i in 0..4 {
            let da = ctx.d_zero(&alg.basis_vector(i));
            let ixda = ctx.contract(&xc, &da);
            assert_eq!(ixda.values, x.apply(&alg.basis_vector(i)));
        }
        // i_X i_X = 0 on a 2-form
        let w = ctx
            .wedge(
                &ctx.d_zero(&alg.basis_vector(0)),
                &ctx.d_zero(&alg.basis_vector(1)),
                CAP,
            )
            .unwrap();
        let once = ctx.contract(&xc, &w);
        let twice = ctx.contract(&xc, &once);
        assert!(vec_is_zero(&twice.values));
        // i_X on degree 0 is zero
        let a = Form::from_values(0, alg.basis_vector(0));
        assert!(vec_is_zero(&ctx.contract(&xc, &a).values));
    }

    #[test]
    fn cartan_homotopy_identity() {
        // L_X is computed by the direct formula, so L_X = i_X d + d i_X is
        // an actual check of the Koszul differential.
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let x = ad(alg, &alg.basis_vector(2));
        let xc = ctx.der_coords(&x).unwrap();
        let forms: Vec<Form> = vec![
            Form::from_values(0, alg.basis_vector(1)),
            ctx.d_zero(&alg.basis_vector(0)),
            ctx.wedge(
                &ctx.d_zero(&alg.basis_vector(0)),
                &ctx.d_zero(&alg.basis_vector(3)),
                CAP,
            )
            .unwrap(),
        ];
        for f in &forms {
            let lhs = ctx.lie(&x, f);
            let rhs = crate::matrix::vec_add(
                &ctx.contract(&xc, &ctx.d(f, CAP).unwrap()).values,
                &ctx.d(&ctx.contract(&xc, f), CAP).unwrap().values,
            );
            assert_eq!(lhs.values, rhs);
        }
    }

    #[test]
    fn lie_bracket_contraction_identity() {
        // [L_X, i_Y] = i_{[X,Y]} on 2-forms.
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let x = ad(alg, &alg.basis_vector(1));
        let y = ad(alg, &alg.basis_vector(2));
        let yc = ctx.der_coords(&y).unwrap();
        let bxy = crate::derivation::bracket(alg, &x, &y);
        let bc = ctx.der_coords(&bxy).unwrap();
        let w = ctx
            .wedge(
                &ctx.d_zero(&alg.basis_vector(0)),
                &ctx.d_zero(&alg.basis_vector(1)),
                CAP,
            )
            .unwrap();
        let lhs = crate::matrix::vec_sub(
            &ctx.lie(&x, &ctx.contract(&yc, &w)).values,
            &ctx.contract(&yc, &ctx.lie(&x, &w)).values,
        );
        let rhs = ctx.contract(&bc, &w).values;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_leibniz_identities() {
        // d, i_X and L_X against the product: d is an antiderivation of
        // degree +1, i_X of degree -1, and L_X a derivation of degree 0.
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let x = ad(alg, &alg.basis_vector(1));
        let xc = ctx.der_coords(&x).unwrap();
        let omega = ctx.omega_generated(2).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(131);
        let mut rand_form = |deg: usize| {
            let coeffs: Vector = (0..omega[deg].dim())
                .map(|_| Cyclotomic::from_integer(rng.gen_range(-2i64..=2), 1))
                .collect();
            Form::from_values(deg, omega[deg].from_coordinates(&coeffs))
        };
        for (p, q) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)] {
            let w = rand_form(p);
            let e = rand_form(q);
            let cap = 4;
            let prod = ctx.wedge(&w, &e, cap).unwrap();
            // d(w e) = (d w) e + (-1)^p w (d e)
            let lhs = ctx.d(&prod, cap).unwrap();
            let mut rhs = ctx.wedge(&ctx.d(&w, cap).unwrap(), &e, cap).unwrap().values;
            let second = ctx.wedge(&w, &ctx.d(&e, cap).unwrap(), cap).unwrap().values;
            if p % 2 == 0 {
                rhs = crate::matrix::vec_add(&rhs, &second);
            } else {
                rhs = crate::matrix::vec_sub(&rhs, &second);
            }
            assert_eq!(lhs.values, rhs, "d Leibniz at ({}, {})", p, q);
            // i_X(w e) = (i_X w) e + (-1)^p w (i_X e)
            if p + q >= 1 {
                let lhs = ctx.contract(&xc, &prod);
                let left = ctx.wedge(&ctx.contract(&xc, &w), &e, cap).unwrap().values;
                let right = ctx.wedge(&w, &ctx.contract(&xc, &e), cap).unwrap().values;
                let rhs = if p % 2 == 0 {
                    crate::matrix::vec_add(&left, &right)
                } else {
                    crate::matrix::vec_sub(&left, &right)
                };
                assert_eq!(lhs.values, rhs, "i_X antiderivation at ({}, {})", p, q);
            }
            // L_X(w e) = (L_X w) e + w (L_X e)
            let lhs = ctx.lie(&x, &prod);
            let rhs = crate::matrix::vec_add(
                &ctx.wedge(&ctx.lie(&x, &w), &e, cap).unwrap().values,
                &ctx.wedge(&w, &ctx.lie(&x, &e), cap).unwrap().values,
            );
            assert_eq!(lhs.values, rhs, "L_X derivation at ({}, {})", p, q);
        }
    }

    #[test]
    fn lie_derivatives_represent_the_bracket() {
        // [L_X, L_Y] = L_{[X,Y]} on generated forms of degree <= 2.
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let x = ad(alg, &alg.basis_vector(1));
        let y = ad(alg, &alg.basis_vector(2));
        let bxy = crate::derivation::bracket(alg, &x, &y);
        let omega = ctx.omega_generated(2).unwrap();
        for degree in 0..=2usize {
            for v in omega[degree].basis_rows().take(4) {
                let f = Form::from_values(degree, v);
                let lhs = crate::matrix::vec_sub(
                    &ctx.lie(&x, &ctx.lie(&y, &f)).values,
                    &ctx.lie(&y, &ctx.lie(&x, &f)).values,
                );
                assert_eq!(lhs, ctx.lie(&bxy, &f).values);
            }
        }
    }

    #[test]
    fn wedge_left_module_structure_and_associativity() {
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        // a * omega for degree 0 = left multiplication of values.
        let a = Form::from_values(0, alg.basis_vector(1));
        let db = ctx.d_zero(&alg.basis_vector(2));
        let prod = ctx.wedge(&a, &db, CAP).unwrap();
        let la = alg.left_mult_matrix(&alg.basis_vector(1));
        let mut expect = Vec::new();
        for chunk in db.values.chunks(4) {
            expect.extend(la.apply(chunk));
        }
        assert_eq!(prod.values, expect);
        // associativity on random degree-1 triples
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let bar1 = ctx.omega_bar(1, CAP).unwrap();
        for _ in 0..5 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let coeffs: Vector = (0..bar1.dim())
                    .map(|_| Cyclotomic::from_integer(rng.gen_range(-2i64..=2), 1))
                    .collect();
                Form::from_values(1, bar1.from_coordinates(&coeffs))
            };
            let (f, g, h) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let fg_h = ctx
                .wedge(&ctx.wedge(&f, &g, CAP).unwrap(), &h, CAP)
                .unwrap();
            let f_gh = ctx
                .wedge(&f, &ctx.wedge(&g, &h, CAP).unwrap(), CAP)
                .unwrap();
            assert_eq!(fg_h.values, f_gh.values);
        }
    }

    #[test]
    fn wedge_is_not_graded_commutative() {
        // Search a db products over M(2) for a pair with wh != -hw.
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let mut found = false;
        'outer: for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for e in 0..4 {
                        let la = alg.left_mult_matrix(&alg.basis_vector(a));
                        let lc = alg.left_mult_matrix(&alg.basis_vector(c));
                        let db = ctx.d_zero(&alg.basis_vector(b));
                        let de = ctx.d_zero(&alg.basis_vector(e));
                        let mut w1 = Vec::new();
                        for chunk in db.values.chunks(4) {
                            w1.extend(la.apply(chunk));
                        }
                        let mut w2 = Vec::new();
                        for chunk in de.values.chunks(4) {
                            w2.extend(lc.apply(chunk));
                        }
                        let f = Form::from_values(1, w1);
                        let g = Form::from_values(1, w2);
                        let fg = ctx.wedge(&f, &g, CAP).unwrap();
                        let gf = ctx.wedge(&g, &f, CAP).unwrap();
                        let anti: Vector = gf.values.iter().map(|x| x.neg_ref()).collect();
                        if fg.values != anti {
                            found = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        assert!(
            found,
            "all products graded-commute, which contradicts noncommutativity"
        );
    }

    #[test]
    fn generated_forms_of_m2() {
        let ctx = m2_ctx();
        let omega = ctx.omega_generated(2).unwrap();
        assert_eq!(omega[0].dim(), 4);
        assert_eq!(omega[1].dim(), 12);
        // containment in the full multilinear spaces
        let bar1 = ctx.omega_bar(1, CAP).unwrap();
        assert!(bar1.contains_subspace(&omega[1]));
        assert_eq!(bar1.dim(), 12);
        let bar2 = ctx.omega_bar(2, CAP).unwrap();
        assert!(bar2.contains_subspace(&omega[2]));
    }

    #[test]
    fn no_forms_over_points() {
        let ctx = FormContext::new(&function_algebra(3));
        assert_eq!(ctx.rank(), 0);
        let omega = ctx.omega_generated(2).unwrap();
        assert_eq!(omega[0].dim(), 3);
        assert_eq!(omega[1].dim(), 0);
        assert_eq!(omega[2].dim(), 0);
    }

    #[test]
    fn omega_bar_of_point_tensor_m2() {
        // Der is a free Z-module of rank 3, so Hom_Z(Der, A) = A^3.
        let a = tensor_product(&function_algebra(3), &matrix_algebra(2));
        let ctx = FormContext::new(&a);
        assert_eq!(ctx.rank(), 9);
        assert_eq!(ctx.omega_bar(1, CAP).unwrap().dim(), 36);
        assert_eq!(ctx.omega_bar(2, CAP).unwrap().dim(), 36);
    }

    #[test]
    fn basic_subspaces_over_m2() {
        let ctx = m2_ctx();
        let alg = &ctx.alg;
        let int = crate::derivation::inner_derivations(alg);
        let g = int.basis_derivations(alg);
        // degree 0: the basic algebra of the inner action is the center
        let basic0 = ctx.basic_subspace(&g, 0, &Subspace::full(4, 1));
        assert_eq!(basic0, alg.center());
        // degree 1 with g = Der(A): horizontality kills everything
        let bar1 = ctx.omega_bar(1, CAP).unwrap();
        let basic1 = ctx.basic_subspace(&g, 1, &bar1);
        assert_eq!(basic1.dim(), 0);
        assert!(ctx.verify_basic_d_stable(&g, 0, &basic0, CAP).unwrap());
    }
}
