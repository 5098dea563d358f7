//! Dense exact linear algebra over Q and prime fields.
//!
//! Everything downstream reduces to ranks, kernels, and quotient bases, so
//! determinism here is what makes the whole toolkit reproducible: Gaussian
//! elimination always takes the first usable pivot, and bases of subquotients
//! are always the first linearly independent subset of the ambient ordered
//! basis.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { v: 1, p: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            Field::Fp(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp { v: r, p: *p }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "q"),
            Field::Fp(p) => write!(f, "p:{}", p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Fp { v: (a + b) % p, p: *p }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                let prod = (*a as u128 * *b as u128 % *p as u128) as u64;
                Scalar::Fp { v: prod, p: *p }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: mod_inverse(*v, *p), p: *p },
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "not invertible mod p");
    old_s.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{}", v),
        }
    }
}

/// Row-major dense matrix over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j);
                assert_eq!(s.field(), field);
                data.push(s);
            }
        }
        DenseMatrix { field, rows, cols, data }
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DenseMatrix {
        Self::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    pub fn scale(&self, c: &Scalar) -> DenseMatrix {
        Self::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        assert_eq!(self.field, other.field);
        let mut out = Self::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product, with the row index of `self` major: entry
    /// ((i1, i2), (j1, j2)) = self[i1, j1] * other[i2, j2] under the flat
    /// indexing i1 * other.rows + i2.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.field, other.field);
        Self::from_fn(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let a = self.get(i / other.rows, j / other.cols);
                if a.is_zero() {
                    return self.field.zero();
                }
                a.mul(other.get(i % other.rows, j % other.cols))
            },
        )
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![self.field.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    out[i] = out[i].add(&a.mul(&v[j]));
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> DenseMatrix {
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn hstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> DenseMatrix {
        Self::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let mut piv = None;
            for r in row..m.rows {
                if !m.get(r, col).is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != row {
                for j in 0..m.cols {
                    let a = m.get(row, j).clone();
                    let b = m.get(piv, j).clone();
                    m.set(row, j, b);
                    m.set(piv, j, a);
                }
            }
            let inv = m.get(row, col).inv();
            for j in col..m.cols {
                let v = m.get(row, j).mul(&inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let c = m.get(r, col).clone();
                    for j in col..m.cols {
                        let v = m.get(r, j).sub(&c.mul(m.get(row, j)));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns forming the first linearly independent spanning subset,
    /// scanning left to right.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Basis of the right kernel, one column per free variable, in column
    /// order; the free coordinate is set to 1 and pivots back-substituted.
    pub fn kernel_basis(&self) -> DenseMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = DenseMatrix::zero(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                let v = r.get(prow, fc).neg();
                out.set(pc, k, v);
            }
        }
        out
    }

    /// dim of target minus rank: the dimension of coker(self).
    pub fn quotient_dim(&self) -> usize {
        self.rows - self.rank()
    }

    /// One solution of self * x = b, free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let bm = DenseMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&bm);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols);
        let aug = self.hstack(&DenseMatrix::identity(self.field, self.rows));
        let (r, pivots) = aug.rref();
        if pivots.len() != self.rows || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(DenseMatrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            r.get(i, self.cols + j).clone()
        }))
    }

    /// Do the columns of self and other span the same subspace?
    pub fn same_column_span(&self, other: &DenseMatrix) -> bool {
        assert_eq!(self.rows, other.rows);
        let ra = self.rank();
        let rb = other.rank();
        ra == rb && self.hstack(other).rank() == ra
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Deterministic description of a quotient V/W with V = k^n and W spanned by
/// the columns of a given matrix.  The complement basis consists of the
/// standard basis vectors not absorbed by W, chosen greedily.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    pub ambient_dim: usize,
    pub sub_rank: usize,
    pub complement: Vec<usize>,
    change: DenseMatrix,
}

impl QuotientMap {
    pub fn new(sub: &DenseMatrix) -> Self {
        let n = sub.rows;
        let field = sub.field;
        let id = DenseMatrix::identity(field, n);
        let pivots = sub.hstack(&id).independent_columns();
        let sub_cols: Vec<usize> = pivots.iter().filter(|&&p| p < sub.cols).cloned().collect();
        let complement: Vec<usize> = pivots
            .iter()
            .filter(|&&p| p >= sub.cols)
            .map(|&p| p - sub.cols)
            .collect();
        let basis = sub
            .select_columns(&sub_cols)
            .hstack(&id.select_columns(&complement));
        let change = basis.inverse().expect("complement basis is invertible");
        QuotientMap {
            ambient_dim: n,
            sub_rank: sub_cols.len(),
            complement,
            change,
        }
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates of the class of v in the complement basis.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let coords = self.change.apply(v);
        coords[self.sub_rank..].to_vec()
    }

    /// Matrix of the projection k^n -> V/W in the chosen bases.
    pub fn projection_matrix(&self) -> DenseMatrix {
        let field = self.change.field;
        DenseMatrix::from_fn(field, self.quotient_dim(), self.ambient_dim, |i, j| {
            self.change.get(self.sub_rank + i, j).clone()
        })
    }

    /// Standard-basis representatives of the quotient basis.
    pub fn lift_matrix(&self) -> DenseMatrix {
        let field = self.change.field;
        let id = DenseMatrix::identity(field, self.ambient_dim);
        id.select_columns(&self.complement)
    }
}

/// Basis data for a subquotient span(Z)/span(B) of k^n, with B contained in
/// the span of Z.  Representatives are the first columns of Z independent
/// modulo B.
#[derive(Debug, Clone)]
pub struct SubquotientBasis {
    pub ambient_dim: usize,
    pub dim: usize,
    pub reps: DenseMatrix,
    basis: DenseMatrix,
    boundary_rank: usize,
}

impl SubquotientBasis {
    pub fn new(cycles: &DenseMatrix, boundaries: &DenseMatrix) -> Self {
        assert_eq!(cycles.rows, boundaries.rows);
        let n = cycles.rows;
        let stacked = boundaries.hstack(cycles);
        let pivots = stacked.independent_columns();
        let b_cols: Vec<usize> = pivots.iter().filter(|&&p| p < boundaries.cols).cloned().collect();
        let z_cols: Vec<usize> = pivots
            .iter()
            .filter(|&&p| p >= boundaries.cols)
            .map(|&p| p - boundaries.cols)
            .collect();
        let reps = cycles.select_columns(&z_cols);
        let basis = boundaries.select_columns(&b_cols).hstack(&reps);
        SubquotientBasis {
            ambient_dim: n,
            dim: z_cols.len(),
            reps,
            basis,
            boundary_rank: b_cols.len(),
        }
    }

    /// Class coordinates of a vector lying in span(Z).
    pub fn express(&self, v: &[Scalar]) -> Vec<Scalar> {
        let x = self
            .basis
            .solve(v)
            .expect("vector does not lie in the cycle space");
        x[self.boundary_rank..].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1000003;

    #[test]
    fn identity_and_zero() {
        for field in [Field::Q, Field::Fp(P)] {
            let id = DenseMatrix::identity(field, 4);
            assert_eq!(id.rank(), 4);
            assert_eq!(id.kernel_basis().cols, 0);
            let z = DenseMatrix::zero(field, 3, 5);
            assert_eq!(z.rank(), 0);
            assert_eq!(z.kernel_basis().cols, 5);
            assert_eq!(z.quotient_dim(), 3);
        }
    }

    #[test]
    fn rank_one_kernel() {
        let m = DenseMatrix::from_i64_rows(Field::Q, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.cols, 1);
        // kernel is spanned by (2, -1) up to scale: 1*x + 2*y = 0
        let v = k.column(0);
        let lhs = v[0].add(&v[1].add(&v[1]));
        assert!(lhs.is_zero());
        assert!(!v.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn rank_agrees_over_q_and_fp() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let ints: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            let mq = DenseMatrix::from_i64_rows(Field::Q, &ints);
            let mp = DenseMatrix::from_i64_rows(Field::Fp(P), &ints);
            assert_eq!(mq.rank(), mp.rank());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = DenseMatrix::from_i64_rows(Field::Q, &[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), DenseMatrix::identity(Field::Q, 2));
        let b = vec![Field::Q.from_i64(3), Field::Q.from_i64(2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
    }

    #[test]
    fn quotient_map_complement() {
        // W = span{(1,1,0)} in k^3: greedy scan keeps e1 and e3, since e2 is
        // absorbed once W and e1 are in play
        let w = DenseMatrix::from_i64_rows(Field::Q, &[vec![1], vec![1], vec![0]]);
        let q = QuotientMap::new(&w);
        assert_eq!(q.quotient_dim(), 2);
        assert_eq!(q.complement, vec![0, 2]);
        // class of (1,1,0) is zero
        let v = vec![Field::Q.one(), Field::Q.one(), Field::Q.zero()];
        assert!(q.project(&v).iter().all(|s| s.is_zero()));
        // class of e1 is the first complement vector
        let e1 = vec![Field::Q.one(), Field::Q.zero(), Field::Q.zero()];
        let c = q.project(&e1);
        assert!(c[0].is_one() && c[1].is_zero());
    }

    #[test]
    fn subquotient_reps() {
        // Z = k^2 (columns e1, e2), B = span{e1}: homology is class of e2
        let z = DenseMatrix::identity(Field::Q, 2);
        let b = DenseMatrix::from_i64_rows(Field::Q, &[vec![1], vec![0]]);
        let h = SubquotientBasis::new(&z, &b);
        assert_eq!(h.dim, 1);
        let v = vec![Field::Q.from_i64(5), Field::Q.from_i64(3)];
        let c = h.express(&v);
        assert_eq!(c, vec![Field::Q.from_i64(3)]);
    }

    #[test]
    fn kron_mixed_product() {
        let f = Field::Q;
        let a = DenseMatrix::from_i64_rows(f, &[vec![1, 2], vec![0, 3]]);
        let b = DenseMatrix::from_i64_rows(f, &[vec![2, 1], vec![1, 1]]);
        let c = DenseMatrix::from_i64_rows(f, &[vec![1, 1], vec![2, 0]]);
        let d = DenseMatrix::from_i64_rows(f, &[vec![0, 1], vec![1, 2]]);
        let lhs = a.kron(&b).mul(&c.kron(&d));
        let rhs = a.mul(&c).kron(&b.mul(&d));
        assert_eq!(lhs.data, rhs.data);
        assert_eq!(*a.kron(&b).get(1, 2), f.from_i64(2));
    }
}
