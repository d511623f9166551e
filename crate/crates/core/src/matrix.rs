//! Dense matrices over the Gaussian rationals with exact linear algebra:
//! row reduction, kernels, solves, subspace operations, and certified
//! eigenspace splitting for operators whose spectrum is rational.

use crate::exact::{C, Q};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::fmt;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("operator does not preserve the given subspace")]
    NotInvariant,
    #[error("operator is not diagonalizable with real rational eigenvalues (found {found} of {expected} dimensions)")]
    NotRationallyDiagonalizable { found: usize, expected: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for CMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<C>> = (0..self.rows).map(|r| self.row(r)).collect();
        (self.rows, self.cols, rows).serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for CMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        let (nr, nc, rows): (usize, usize, Vec<Vec<C>>) = serde::Deserialize::deserialize(d)?;
        if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
            return Err(serde::de::Error::custom("matrix shape mismatch"));
        }
        Ok(CMat { rows: nr, cols: nc, data: rows.into_iter().flatten().collect() })
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C;
    fn index(&self, (r, c): (usize, usize)) -> &C {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C {
        &mut self.data[r * self.cols + c]
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> CMat {
        CMat { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &C) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> CMat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> CMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        CMat { rows: r, cols: c, data }
    }

    /// Integer-entry constructor: `re[r][c] + i·im[r][c]`.
    pub fn from_ints(re: &[&[i64]], im: Option<&[&[i64]]>) -> CMat {
        CMat::from_fn(re.len(), re.first().map_or(0, |r| r.len()), |r, c| {
            let b = im.map_or(0, |m| m[r][c]);
            C::new(Q::int(re[r][c]), Q::int(b))
        })
    }

    pub fn column_vector(v: &[C]) -> CMat {
        CMat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn diag(entries: &[C]) -> CMat {
        let mut m = CMat::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|r| self[(r, j)].clone()).collect()
    }

    pub fn col_mat(&self, j: usize) -> CMat {
        CMat::column_vector(&self.col(j))
    }

    pub fn row(&self, i: usize) -> Vec<C> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn from_cols(cols: &[Vec<C>], nrows: usize) -> CMat {
        CMat::from_fn(nrows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(self.rows, idx.len(), |r, c| self[(r, idx[c])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(idx.len(), self.cols, |r, c| self[(idx[r], c)].clone())
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> CMat {
        CMat::from_fn(nr, nc, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == CMat::identity(self.rows)
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.conj()).collect() }
    }

    pub fn scale(&self, s: &C) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_q(&self, s: &Q) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.scale(s)).collect() }
    }

    pub fn mul_i(&self) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul_i()).collect() }
    }

    pub fn trace(&self) -> C {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn add(&self, o: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "add shape");
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "sub shape");
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add_assign(&mut self, o: &CMat) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "add shape");
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    /// `self += s·o`.
    pub fn axpy(&mut self, s: &C, o: &CMat) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "axpy shape");
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += &(b * s);
            }
        }
    }

    pub fn neg(&self) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.cols, o.rows, "mul shape {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols);
        let mut out = CMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let orow = &o.data[k * o.cols..(k + 1) * o.cols];
                let outrow = &mut out.data[i * o.cols..(i + 1) * o.cols];
                for (dst, b) in outrow.iter_mut().zip(orow) {
                    if !b.is_zero() {
                        *dst += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut s = C::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        s += &(a * x);
                    }
                }
                s
            })
            .collect()
    }

    pub fn commutator(&self, o: &CMat) -> CMat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn anticommutator(&self, o: &CMat) -> CMat {
        self.mul(o).add(&o.mul(self))
    }

    pub fn kron(&self, o: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = &o[(k, l)];
                        if !b.is_zero() {
                            out[(i * o.rows + k, j * o.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(mats: &[&CMat]) -> CMat {
        let rows = mats.first().map_or(0, |m| m.rows);
        let cols: usize = mats.iter().map(|m| m.cols).sum();
        let mut out = CMat::zeros(rows, cols);
        let mut off = 0;
        for m in mats {
            assert_eq!(m.rows, rows, "hstack rows");
            for r in 0..rows {
                for c in 0..m.cols {
                    out[(r, off + c)] = m[(r, c)].clone();
                }
            }
            off += m.cols;
        }
        out
    }

    pub fn vstack(mats: &[&CMat]) -> CMat {
        let cols = mats.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for m in mats {
            assert_eq!(m.cols, cols, "vstack cols");
            data.extend(m.data.iter().cloned());
            rows += m.rows;
        }
        CMat { rows, cols, data }
    }

    pub fn block_diag(mats: &[&CMat]) -> CMat {
        let rows: usize = mats.iter().map(|m| m.rows).sum();
        let cols: usize = mats.iter().map(|m| m.cols).sum();
        let mut out = CMat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in mats {
            for r in 0..m.rows {
                for c in 0..m.cols {
                    out[(r0 + r, c0 + c)] = m[(r, c)].clone();
                }
            }
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Largest entry modulus, in floating point.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    /// Scalar value when the matrix is a multiple of the identity.
    pub fn as_scalar(&self) -> Option<C> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(C::zero());
        }
        let s = self[(0, 0)].clone();
        if *self == CMat::scalar(self.rows, &s) {
            Some(s)
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.is_real())
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].to_c64())
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    /// Bilinear pairing `uᵀ·self·v` of two coordinate vectors.
    pub fn bilinear(&self, u: &[C], v: &[C]) -> C {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
    }
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(m: &CMat) -> (CMat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row >= a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..a.cols {
                a.data.swap(p * a.cols + c, row * a.cols + c);
            }
        }
        let inv = a[(row, col)].inv();
        for c in col..a.cols {
            if !a[(row, c)].is_zero() {
                a[(row, c)] = &a[(row, c)] * &inv;
            }
        }
        let pivot_row: Vec<(usize, C)> =
            (col..a.cols).filter(|&c| !a[(row, c)].is_zero()).map(|c| (c, a[(row, c)].clone())).collect();
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let f = a[(r, col)].clone();
            if f.is_zero() {
                continue;
            }
            for (c, v) in &pivot_row {
                let t = &a[(r, *c)] - &(&f * v);
                a[(r, *c)] = t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &CMat) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel, as columns.
pub fn nullspace(m: &CMat) -> CMat {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = CMat::zeros(m.cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        out[(f, k)] = C::one();
        for (i, &p) in pivots.iter().enumerate() {
            out[(p, k)] = -&r[(i, f)];
        }
    }
    out
}

/// Solve `a·x = b`; `None` when inconsistent. Free variables are set to zero.
pub fn solve(a: &CMat, b: &CMat) -> Option<CMat> {
    assert_eq!(a.rows, b.rows, "solve rows");
    let aug = CMat::hstack(&[a, b]);
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= a.cols) {
        return None;
    }
    let mut x = CMat::zeros(a.cols, b.cols);
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(p, j)] = r[(i, a.cols + j)].clone();
        }
    }
    Some(x)
}

pub fn inverse(a: &CMat) -> Result<CMat, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Dimension("inverse of non-square matrix".into()));
    }
    if rank(a) < a.rows {
        return Err(LinalgError::Singular);
    }
    solve(a, &CMat::identity(a.rows)).ok_or(LinalgError::Singular)
}

/// Linearly independent subset of columns spanning the same space.
pub fn column_basis(m: &CMat) -> CMat {
    let (_, pivots) = rref(m);
    m.select_cols(&pivots)
}

/// Basis of the intersection of two column spans.
pub fn intersect(a: &CMat, b: &CMat) -> CMat {
    if a.cols == 0 || b.cols == 0 {
        return CMat::zeros(a.rows, 0);
    }
    let stacked = CMat::hstack(&[a, &b.neg()]);
    let ns = nullspace(&stacked);
    let coeffs = ns.block(0, 0, a.cols, ns.cols);
    column_basis(&a.mul(&coeffs))
}

/// Column-span containment `span(a) ⊆ span(b)`.
pub fn span_contains(b: &CMat, a: &CMat) -> bool {
    if a.cols == 0 {
        return true;
    }
    rank(&CMat::hstack(&[b, a])) == rank(b)
}

pub fn span_eq(a: &CMat, b: &CMat) -> bool {
    span_contains(a, b) && span_contains(b, a)
}

/// Coordinates of the columns of `v` in the (independent) basis `basis`.
pub fn coordinates(basis: &CMat, v: &CMat) -> Result<CMat, LinalgError> {
    solve(basis, v).ok_or(LinalgError::NotInvariant)
}

/// Matrix of `op` restricted to the invariant subspace spanned by `basis`.
pub fn restrict(op: &CMat, basis: &CMat) -> Result<CMat, LinalgError> {
    if basis.cols == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    coordinates(basis, &op.mul(basis))
}

/// Positive-definiteness of a Hermitian matrix by exact elimination.
pub fn is_positive_definite(h: &CMat) -> bool {
    if *h != h.adjoint() {
        return false;
    }
    let mut a = h.clone();
    let n = a.rows;
    for k in 0..n {
        let piv = a[(k, k)].clone();
        if !piv.is_real() || piv.re.signum() <= 0 {
            return false;
        }
        let inv = piv.inv();
        for r in k + 1..n {
            let f = &a[(r, k)] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let t = &a[(r, c)] - &(&f * &a[(k, c)]);
                a[(r, c)] = t;
            }
        }
    }
    true
}

/// Inertia (positive, negative, zero counts) of a real symmetric matrix by
/// exact congruence diagonalization.
pub fn inertia(sym: &CMat) -> (usize, usize, usize) {
    let n = sym.rows;
    let mut a = sym.clone();
    let mut diag: Vec<Q> = Vec::new();
    let mut k = 0;
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pick = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let i = match pick {
            Some(i) => i,
            None => {
                // All active diagonal entries vanish: combine two indices.
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && !a[(i, j)].is_zero());
                match pair {
                    None => {
                        diag.extend(std::iter::repeat(Q::zero()).take(active.len()));
                        break;
                    }
                    Some((i, j)) => {
                        // e_i ← e_i + e_j as a congruence.
                        for r in 0..n {
                            let t = &a[(r, i)] + &a[(r, j)];
                            a[(r, i)] = t;
                        }
                        for c in 0..n {
                            let t = &a[(i, c)] + &a[(j, c)];
                            a[(i, c)] = t;
                        }
                        i
                    }
                }
            }
        };
        let piv = a[(i, i)].clone();
        let inv = piv.inv();
        for &r in &active {
            if r == i {
                continue;
            }
            let f = &a[(r, i)] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let t = &a[(r, c)] - &(&f * &a[(i, c)]);
                a[(r, c)] = t;
            }
            for rr in 0..n {
                let t = &a[(rr, r)] - &(&f * &a[(rr, i)]);
                a[(rr, r)] = t;
            }
        }
        diag.push(piv.re.clone());
        active.retain(|&x| x != i);
        k += 1;
    }
    let _ = k;
    let pos = diag.iter().filter(|d| d.signum() > 0).count();
    let neg = diag.iter().filter(|d| d.signum() < 0).count();
    (pos, neg, n - pos - neg)
}

/// Orthogonalize columns with respect to the symmetric bilinear form `form`
/// (no normalization). Returns the new basis and the form values on it.
pub fn orthogonalize(basis: &CMat, form: &CMat) -> Result<(CMat, Vec<C>), LinalgError> {
    let mut cols: Vec<Vec<C>> = Vec::new();
    let mut norms: Vec<C> = Vec::new();
    for j in 0..basis.cols {
        let mut v = basis.col(j);
        for (u, nu) in cols.iter().zip(&norms) {
            let coef = &form.bilinear(&v, u) / nu;
            if coef.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(u) {
                *x -= &(&coef * y);
            }
        }
        let n = form.bilinear(&v, &v);
        if n.is_zero() {
            return Err(LinalgError::Singular);
        }
        cols.push(v);
        norms.push(n);
    }
    Ok((CMat::from_cols(&cols, basis.rows), norms))
}

/// Eigenvalue candidates from a floating point Schur form.
/// The unbounded Schur iteration can stall on some exactly structured
/// inputs, so it is capped and retried on shifted copies; candidates are
/// certified exactly by the caller anyway.
fn numeric_eigenvalues(m: &CMat) -> Vec<Complex64> {
    let a = m.to_nalgebra();
    let n = a.nrows();
    for shift in [0.0, 0.3711, -1.1377, 2.7183] {
        let s = Complex64::new(shift, 0.5 * shift);
        let shifted = &a + nalgebra::DMatrix::<Complex64>::identity(n, n) * s;
        if let Some(schur) = nalgebra::linalg::Schur::try_new(shifted, 1e-14, 10_000) {
            let (_, t) = schur.unpack();
            return (0..n).map(|i| t[(i, i)] - s).collect();
        }
    }
    Vec::new()
}

/// Split the space into eigenspaces of `m`, which must be diagonalizable
/// with real rational eigenvalues. Candidates come from a floating point
/// Schur form; every eigenspace is then certified by an exact kernel, and
/// the dimensions must add up to the full size.
pub fn rational_eigenspaces(m: &CMat) -> Result<Vec<(Q, CMat)>, LinalgError> {
    let n = m.rows;
    if n == 0 {
        return Ok(Vec::new());
    }
    if let Some(s) = m.as_scalar() {
        if s.is_real() {
            return Ok(vec![(s.re, CMat::identity(n))]);
        }
    }
    let mut cands: Vec<Q> = Vec::new();
    for z in numeric_eigenvalues(m) {
        let scale = 1.0 + z.re.abs();
        if z.im.abs() > 1e-6 * scale {
            continue;
        }
        if let Some(r) = Q::approximate(z.re, 10_000) {
            if (r.to_f64() - z.re).abs() < 1e-6 * scale && !cands.contains(&r) {
                cands.push(r);
            }
        }
    }
    cands.sort();
    let mut out = Vec::new();
    let mut total = 0;
    for lam in cands {
        let shifted = m.sub(&CMat::scalar(n, &C::real(lam.clone())));
        let ns = nullspace(&shifted);
        if ns.cols > 0 {
            total += ns.cols;
            out.push((lam, ns));
        }
    }
    if total != n {
        return Err(LinalgError::NotRationallyDiagonalizable { found: total, expected: n });
    }
    Ok(out)
}

/// Joint eigenspace decomposition of pairwise commuting operators on the
/// column span of `basis` (coordinates in the ambient space). Returns one
/// entry per joint eigenvalue tuple, with an ambient basis of its space.
pub fn joint_eigenspaces(ops: &[CMat], basis: &CMat) -> Result<Vec<(Vec<Q>, CMat)>, LinalgError> {
    let mut parts: Vec<(Vec<Q>, CMat)> = vec![(Vec::new(), basis.clone())];
    for op in ops {
        let mut next = Vec::new();
        for (vals, b) in parts {
            if b.cols == 0 {
                continue;
            }
            let r = restrict(op, &b)?;
            for (lam, sub) in rational_eigenspaces(&r)? {
                let mut v = vals.clone();
                v.push(lam);
                next.push((v, b.mul(&sub)));
            }
        }
        parts = next;
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{c, q};

    #[test]
    fn kernel_and_solve() {
        let m = CMat::from_ints(&[&[1, 2, 3], &[2, 4, 6]], None);
        let ns = nullspace(&m);
        assert_eq!(ns.cols(), 2);
        assert!(m.mul(&ns).is_zero());
        let a = CMat::from_ints(&[&[2, 1], &[1, 3]], None);
        let inv = inverse(&a).unwrap();
        assert!(a.mul(&inv).is_identity());
        let sing = CMat::from_ints(&[&[1, 1], &[1, 1]], None);
        assert_eq!(inverse(&sing), Err(LinalgError::Singular));
    }

    #[test]
    fn complex_solve() {
        let a = CMat::from_rows(vec![vec![c(0, 1), c(1, 0)], vec![c(1, 0), c(0, -1)]]);
        assert_eq!(rank(&a), 1);
        let b = CMat::from_rows(vec![vec![c(1, 1)], vec![c(1, -1)]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
    }

    #[test]
    fn eigenspaces_certified() {
        let m = CMat::from_rows(vec![
            vec![C::real(q(1, 2)), C::zero(), C::one()],
            vec![C::zero(), C::real(q(-3, 2)), C::zero()],
            vec![C::zero(), C::zero(), C::real(q(1, 2))],
        ]);
        assert!(matches!(rational_eigenspaces(&m), Err(LinalgError::NotRationallyDiagonalizable { .. })));
        let d = CMat::diag(&[C::real(q(1, 2)), C::real(q(-3, 2)), C::real(q(1, 2))]);
        let p = CMat::from_ints(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]], None);
        let conj = p.mul(&d).mul(&inverse(&p).unwrap());
        let es = rational_eigenspaces(&conj).unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es[0].0, q(-3, 2));
        assert_eq!(es[1].1.cols(), 2);
    }

    #[test]
    fn inertia_counts() {
        let s = CMat::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]], None);
        assert_eq!(inertia(&s), (1, 2, 0));
        let h = CMat::from_rows(vec![vec![c(2, 0), c(0, 1)], vec![c(0, -1), c(2, 0)]]);
        assert!(is_positive_definite(&h));
        assert!(!is_positive_definite(&h.neg()));
    }

    #[test]
    fn subspace_ops() {
        let a = CMat::from_ints(&[&[1, 0], &[0, 1], &[0, 0]], None);
        let b = CMat::from_ints(&[&[1, 0], &[0, 0], &[0, 1]], None);
        let i = intersect(&a, &b);
        assert_eq!(i.cols(), 1);
        assert!(span_contains(&a, &i) && span_contains(&b, &i));
        assert!(!span_eq(&a, &b));
    }
}
