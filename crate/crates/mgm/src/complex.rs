//! Cochain complexes in three flavors.
//!
//! `VectComplex` is a complex of finite-dimensional vector spaces; homology
//! with chosen bases and induced maps lives here.  `FreeComplex` is a complex
//! of graded free modules with homogeneous differentials; shift, cone, tensor
//! and internal Hom are computed symbolically and realized degreewise.
//! `FinDimComplex` is a complex of finite-dimensional modules, the target of
//! Hom and tensor constructions against a finite-dimensional coefficient
//! module.
//!
//! Sign conventions: d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy, and
//! d(f) = d_Y f - (-1)^|f| f d_X on Hom.

use crate::linalg::{DenseMatrix, Field, SubquotientBasis};
use crate::module::{FinDimModule, FreeGradedMap, GradedFPModule};
use crate::ring::MonomialQuotientRing;
use std::collections::BTreeMap;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// scalar-level complexes

#[derive(Debug, Clone)]
pub struct VectComplex {
    pub field: Field,
    pub min: i64,
    pub dims: Vec<usize>,
    pub diffs: Vec<DenseMatrix>,
}

impl VectComplex {
    pub fn new(field: Field, min: i64, dims: Vec<usize>, diffs: Vec<DenseMatrix>) -> Self {
        assert_eq!(diffs.len(), dims.len().saturating_sub(1).max(0));
        for (k, d) in diffs.iter().enumerate() {
            assert_eq!(d.cols, dims[k], "differential source dim");
            assert_eq!(d.rows, dims[k + 1], "differential target dim");
        }
        for k in 0..diffs.len().saturating_sub(1) {
            assert!(diffs[k + 1].mul(&diffs[k]).is_zero(), "d^2 != 0 at {}", k);
        }
        VectComplex { field, min, dims, diffs }
    }

    pub fn zero(field: Field) -> Self {
        VectComplex { field, min: 0, dims: vec![], diffs: vec![] }
    }

    pub fn max(&self) -> i64 {
        self.min + self.dims.len() as i64 - 1
    }

    pub fn dim_at(&self, i: i64) -> usize {
        if i < self.min || i > self.max() {
            0
        } else {
            self.dims[(i - self.min) as usize]
        }
    }

    /// Differential leaving degree i.
    pub fn diff_at(&self, i: i64) -> DenseMatrix {
        let k = i - self.min;
        if k < 0 || k as usize >= self.diffs.len() {
            DenseMatrix::zero(self.field, self.dim_at(i + 1), self.dim_at(i))
        } else {
            self.diffs[k as usize].clone()
        }
    }

    pub fn shift(&self, k: i64) -> VectComplex {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        let diffs = self
            .diffs
            .iter()
            .map(|d| if sign < 0 { d.neg() } else { d.clone() })
            .collect();
        VectComplex {
            field: self.field,
            min: self.min - k,
            dims: self.dims.clone(),
            diffs,
        }
    }

    pub fn homology_basis(&self, i: i64) -> SubquotientBasis {
        let cycles = self.diff_at(i).kernel_basis();
        let boundaries = self.diff_at(i - 1);
        SubquotientBasis::new(&cycles, &boundaries)
    }

    pub fn homology_dim(&self, i: i64) -> usize {
        let n = self.dim_at(i);
        let z = n - self.diff_at(i).rank();
        z - self.diff_at(i - 1).rank()
    }

    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for i in self.min..=self.max() {
            let h = self.homology_dim(i);
            if h > 0 {
                out.insert(i, h);
            }
        }
        out
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct VectChainMap {
    pub min: i64,
    pub mats: Vec<DenseMatrix>,
}

impl VectChainMap {
    /// Levelwise matrices src^i -> tgt^i; degrees outside the stored range
    /// carry the zero map.
    pub fn new(src: &VectComplex, tgt: &VectComplex, min: i64, mats: Vec<DenseMatrix>) -> Self {
        let f = VectChainMap { min, mats };
        for i in min - 1..=min + f.mats.len() as i64 {
            let lhs = tgt.diff_at(i).mul(&f.mat_at(i, src, tgt));
            let rhs = f.mat_at(i + 1, src, tgt).mul(&src.diff_at(i));
            assert_eq!(lhs, rhs, "not a chain map at degree {}", i);
        }
        f
    }

    pub fn mat_at(&self, i: i64, src: &VectComplex, tgt: &VectComplex) -> DenseMatrix {
        let k = i - self.min;
        if k < 0 || k as usize >= self.mats.len() {
            DenseMatrix::zero(
                self.mats
                    .first()
                    .map(|m| m.field)
                    .unwrap_or(src.field),
                tgt.dim_at(i),
                src.dim_at(i),
            )
        } else {
            self.mats[k as usize].clone()
        }
    }

    /// Matrix of the induced map on homology in the chosen bases.
    pub fn induced_on_homology(
        &self,
        i: i64,
        src: &VectComplex,
        tgt: &VectComplex,
        hsrc: &SubquotientBasis,
        htgt: &SubquotientBasis,
    ) -> DenseMatrix {
        let f = self.mat_at(i, src, tgt);
        let mut cols = Vec::new();
        for j in 0..hsrc.dim {
            let rep = hsrc.reps.column(j);
            let img = f.apply(&rep);
            cols.push(htgt.express(&img));
        }
        DenseMatrix::from_columns(f.field, htgt.dim, &cols)
    }
}

/// Mapping cone of f: X -> Y, with C^i = X^{i+1} (+) Y^i.
pub fn cone(f: &VectChainMap, x: &VectComplex, y: &VectComplex) -> VectComplex {
    let field = x.field;
    let min = (x.min - 1).min(y.min);
    let max = (x.max() - 1).max(y.max());
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for i in min..=max {
        dims.push(x.dim_at(i + 1) + y.dim_at(i));
    }
    for i in min..max {
        let dx = x.diff_at(i + 1).neg();
        let dy = y.diff_at(i);
        let fi = f.mat_at(i + 1, x, y);
        let top = dx.hstack(&DenseMatrix::zero(field, dx.rows, dy.cols));
        let bot = fi.hstack(&dy);
        diffs.push(top.vstack(&bot));
    }
    VectComplex::new(field, min, dims, diffs)
}

// ---------------------------------------------------------------------------
// graded free complexes

/// Complex of graded free modules; term at cohomological degree min + k has
/// the generator degrees gens[k].
#[derive(Debug, Clone)]
pub struct FreeComplex {
    pub ring: Arc<MonomialQuotientRing>,
    pub min: i64,
    pub gens: Vec<Vec<i64>>,
    pub diffs: Vec<FreeGradedMap>,
}

impl FreeComplex {
    pub fn new(
        ring: Arc<MonomialQuotientRing>,
        min: i64,
        gens: Vec<Vec<i64>>,
        diffs: Vec<FreeGradedMap>,
    ) -> Self {
        assert_eq!(diffs.len(), gens.len().saturating_sub(1));
        for (k, d) in diffs.iter().enumerate() {
            assert_eq!(&d.src_degrees, &gens[k]);
            assert_eq!(&d.tgt_degrees, &gens[k + 1]);
        }
        for k in 0..diffs.len().saturating_sub(1) {
            assert!(diffs[k + 1].compose(&diffs[k]).is_zero(), "d^2 != 0");
        }
        FreeComplex { ring, min, gens, diffs }
    }

    /// The ring itself in degree 0.
    pub fn unit(ring: &Arc<MonomialQuotientRing>) -> Self {
        FreeComplex {
            ring: ring.clone(),
            min: 0,
            gens: vec![vec![0]],
            diffs: vec![],
        }
    }

    pub fn max(&self) -> i64 {
        self.min + self.gens.len() as i64 - 1
    }

    pub fn gens_at(&self, i: i64) -> Vec<i64> {
        if i < self.min || i > self.max() {
            vec![]
        } else {
            self.gens[(i - self.min) as usize].clone()
        }
    }

    pub fn diff_at(&self, i: i64) -> FreeGradedMap {
        let k = i - self.min;
        if k < 0 || k as usize >= self.diffs.len() {
            FreeGradedMap::zero(&self.ring, self.gens_at(i), self.gens_at(i + 1))
        } else {
            self.diffs[k as usize].clone()
        }
    }

    pub fn shift(&self, k: i64) -> FreeComplex {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        FreeComplex {
            ring: self.ring.clone(),
            min: self.min - k,
            gens: self.gens.clone(),
            diffs: self.diffs.iter().map(|d| d.scale_sign(sign)).collect(),
        }
    }

    pub fn realize(&self, d: i64) -> VectComplex {
        let dims: Vec<usize> = self
            .gens
            .iter()
            .map(|g| g.iter().map(|&gd| self.ring.dim_piece(d - gd)).sum())
            .collect();
        let diffs: Vec<DenseMatrix> = self.diffs.iter().map(|m| m.realize(d)).collect();
        VectComplex::new(self.ring.field, self.min, dims, diffs)
    }

    pub fn tensor(&self, other: &FreeComplex) -> FreeComplex {
        assert!(Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring);
        let min = self.min + other.min;
        let max = self.max() + other.max();
        let mut gens = Vec::new();
        for n in min..=max {
            let mut g = Vec::new();
            for p in self.min..=self.max() {
                let q = n - p;
                for &a in &self.gens_at(p) {
                    for &b in &other.gens_at(q) {
                        g.push(a + b);
                    }
                }
            }
            gens.push(g);
        }
        let mut diffs = Vec::new();
        for n in min..max {
            let src = gens[(n - min) as usize].clone();
            let tgt = gens[(n + 1 - min) as usize].clone();
            let mut d = FreeGradedMap::zero(&self.ring, src, tgt);
            for p in self.min..=self.max() {
                let q = n - p;
                let a_gens = self.gens_at(p);
                let b_gens = other.gens_at(q);
                if a_gens.is_empty() || b_gens.is_empty() {
                    continue;
                }
                let col_off = self.tensor_block_offset(other, n, p);
                // d1 (x) id into block (p+1, q)
                if !self.gens_at(p + 1).is_empty() {
                    let block = self
                        .diff_at(p)
                        .tensor(&FreeGradedMap::identity(&self.ring, b_gens.clone()), 1);
                    let row_off = self.tensor_block_offset(other, n + 1, p + 1);
                    add_free_block(&mut d, row_off, col_off, &block);
                }
                // (-1)^p id (x) d2 into block (p, q+1)
                if !other.gens_at(q + 1).is_empty() {
                    let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                    let block = FreeGradedMap::identity(&self.ring, a_gens.clone())
                        .tensor(&other.diff_at(q), sign);
                    let row_off = self.tensor_block_offset(other, n + 1, p);
                    add_free_block(&mut d, row_off, col_off, &block);
                }
            }
            diffs.push(d);
        }
        FreeComplex::new(self.ring.clone(), min, gens, diffs)
    }

    /// Generator offset of the block X^p (x) Y^{n-p} inside (X (x) Y)^n.
    fn tensor_block_offset(&self, other: &FreeComplex, n: i64, p: i64) -> usize {
        let mut off = 0;
        for pp in self.min..p {
            off += self.gens_at(pp).len() * other.gens_at(n - pp).len();
        }
        off
    }

    /// Internal Hom complex with Hom^n = (+)_p Hom(X^p, Y^{p+n}).
    pub fn hom(&self, other: &FreeComplex) -> FreeComplex {
        let min = other.min - self.max();
        let max = other.max() - self.min;
        let mut gens = Vec::new();
        for n in min..=max {
            let mut g = Vec::new();
            for p in self.min..=self.max() {
                for &a in &self.gens_at(p) {
                    for &b in &other.gens_at(p + n) {
                        g.push(b - a);
                    }
                }
            }
            gens.push(g);
        }
        let mut diffs = Vec::new();
        for n in min..max {
            let src = gens[(n - min) as usize].clone();
            let tgt = gens[(n + 1 - min) as usize].clone();
            let mut d = FreeGradedMap::zero(&self.ring, src, tgt);
            for p in self.min..=self.max() {
                let a_gens = self.gens_at(p);
                let b_gens = other.gens_at(p + n);
                if a_gens.is_empty() || b_gens.is_empty() {
                    continue;
                }
                let col_off = self.hom_block_offset(other, n, p);
                // post-composition with d_Y into block p of Hom^{n+1}
                if !other.gens_at(p + n + 1).is_empty() {
                    let block = hom_post(&other.diff_at(p + n), &a_gens);
                    let row_off = self.hom_block_offset(other, n + 1, p);
                    add_free_block(&mut d, row_off, col_off, &block);
                }
                // pre-composition with d_X into block p-1, sign -(-1)^n
                if !self.gens_at(p - 1).is_empty() {
                    let sign = if n.rem_euclid(2) == 0 { -1 } else { 1 };
                    let block = hom_pre(&self.diff_at(p - 1), &b_gens).scale_sign(sign);
                    let row_off = self.hom_block_offset(other, n + 1, p - 1);
                    add_free_block(&mut d, row_off, col_off, &block);
                }
            }
            diffs.push(d);
        }
        FreeComplex::new(self.ring.clone(), min, gens, diffs)
    }

    /// Generator offset of the block Hom(X^p, Y^{p+n}) inside Hom^n.
    fn hom_block_offset(&self, other: &FreeComplex, n: i64, p: i64) -> usize {
        let mut off = 0;
        for pp in self.min..p {
            off += self.gens_at(pp).len() * other.gens_at(pp + n).len();
        }
        off
    }

    /// Hom(X, R) with R in degree 0.
    pub fn dual(&self) -> FreeComplex {
        self.hom(&FreeComplex::unit(&self.ring))
    }
}

/// Post-composition map Hom(X^p, Y) -> Hom(X^p, Y') for u: Y -> Y', on
/// generator pairs (a, b) ordered a-major.
fn hom_post(u: &FreeGradedMap, x_degrees: &[i64]) -> FreeGradedMap {
    let ring = &u.ring;
    let src: Vec<i64> = x_degrees
        .iter()
        .flat_map(|&a| u.src_degrees.iter().map(move |&b| b - a))
        .collect();
    let tgt: Vec<i64> = x_degrees
        .iter()
        .flat_map(|&a| u.tgt_degrees.iter().map(move |&b| b - a))
        .collect();
    let mut out = FreeGradedMap::zero(ring, src, tgt);
    for (ai, _) in x_degrees.iter().enumerate() {
        for bp in 0..u.tgt_degrees.len() {
            for b in 0..u.src_degrees.len() {
                let e = u.get(bp, b);
                if !e.is_zero() {
                    out.set(
                        ai * u.tgt_degrees.len() + bp,
                        ai * u.src_degrees.len() + b,
                        e.clone(),
                    );
                }
            }
        }
    }
    out
}

/// Pre-composition map Hom(X, Y) -> Hom(X', Y) for t: X' -> X, on generator
/// pairs (a, b) ordered a-major.
fn hom_pre(t: &FreeGradedMap, y_degrees: &[i64]) -> FreeGradedMap {
    let ring = &t.ring;
    let x = &t.tgt_degrees;
    let xp = &t.src_degrees;
    let src: Vec<i64> = x
        .iter()
        .flat_map(|&a| y_degrees.iter().map(move |&b| b - a))
        .collect();
    let tgt: Vec<i64> = xp
        .iter()
        .flat_map(|&a| y_degrees.iter().map(move |&b| b - a))
        .collect();
    let mut out = FreeGradedMap::zero(ring, src, tgt);
    for (api, _) in xp.iter().enumerate() {
        for (ai, _) in x.iter().enumerate() {
            let e = t.get(ai, api);
            if e.is_zero() {
                continue;
            }
            for bi in 0..y_degrees.len() {
                out.set(api * y_degrees.len() + bi, ai * y_degrees.len() + bi, e.clone());
            }
        }
    }
    out
}

fn add_free_block(d: &mut FreeGradedMap, row_off: usize, col_off: usize, block: &FreeGradedMap) {
    for t in 0..block.rows() {
        for i in 0..block.cols() {
            let e = block.get(t, i);
            if !e.is_zero() {
                let cur = d.get(row_off + t, col_off + i).clone();
                d.set(row_off + t, col_off + i, cur.add(e).unwrap());
            }
        }
    }
}

/// Degree-zero chain map between free complexes, levelwise homogeneous.
#[derive(Debug, Clone)]
pub struct FreeChainMap {
    pub min: i64,
    pub mats: Vec<FreeGradedMap>,
}

impl FreeChainMap {
    pub fn new(src: &FreeComplex, tgt: &FreeComplex, min: i64, mats: Vec<FreeGradedMap>) -> Self {
        let f = FreeChainMap { min, mats };
        for i in src.min.min(tgt.min) - 1..=src.max().max(tgt.max()) {
            let lhs = tgt.diff_at(i).compose(&f.mat_at(i, src, tgt));
            let rhs = f.mat_at(i + 1, src, tgt).compose(&src.diff_at(i));
            assert!(lhs.add(&rhs.neg()).is_zero(), "not a chain map at {}", i);
        }
        f
    }

    pub fn mat_at(&self, i: i64, src: &FreeComplex, tgt: &FreeComplex) -> FreeGradedMap {
        let k = i - self.min;
        if k < 0 || k as usize >= self.mats.len() {
            FreeGradedMap::zero(&src.ring, src.gens_at(i), tgt.gens_at(i))
        } else {
            self.mats[k as usize].clone()
        }
    }

    pub fn realize(&self, d: i64, src: &FreeComplex, tgt: &FreeComplex) -> VectChainMap {
        let vs = src.realize(d);
        let vt = tgt.realize(d);
        let lo = src.min.min(tgt.min);
        let hi = src.max().max(tgt.max());
        let mats: Vec<DenseMatrix> = (lo..=hi).map(|i| self.mat_at(i, src, tgt).realize(d)).collect();
        VectChainMap::new(&vs, &vt, lo, mats)
    }

    /// f (x) g on the tensor complexes.
    pub fn tensor(
        &self,
        other: &FreeChainMap,
        src1: &FreeComplex,
        tgt1: &FreeComplex,
        src2: &FreeComplex,
        tgt2: &FreeComplex,
    ) -> FreeChainMap {
        let s = src1.tensor(src2);
        let t = tgt1.tensor(tgt2);
        let mut mats = Vec::new();
        for n in s.min..=s.max() {
            let mut m = FreeGradedMap::zero(&s.ring, s.gens_at(n), t.gens_at(n));
            for p in src1.min..=src1.max() {
                let q = n - p;
                if src1.gens_at(p).is_empty() || src2.gens_at(q).is_empty() {
                    continue;
                }
                if tgt1.gens_at(p).is_empty() || tgt2.gens_at(q).is_empty() {
                    continue;
                }
                let block = self
                    .mat_at(p, src1, tgt1)
                    .tensor(&other.mat_at(q, src2, tgt2), 1);
                let col_off = src1.tensor_block_offset(src2, n, p);
                let row_off = tgt1.tensor_block_offset(tgt2, n, p);
                add_free_block(&mut m, row_off, col_off, &block);
            }
            mats.push(m);
        }
        FreeChainMap::new(&s, &t, s.min, mats)
    }

    /// Hom(t, Y): the contravariantly induced map Hom(X, Y) -> Hom(X', Y)
    /// for t = self: X' -> X.
    pub fn hom_left(&self, src_x: &FreeComplex, tgt_x: &FreeComplex, y: &FreeComplex) -> FreeChainMap {
        // self: src_x -> tgt_x; induced: Hom(tgt_x, Y) -> Hom(src_x, Y)
        let s = tgt_x.hom(y);
        let t = src_x.hom(y);
        let mut mats = Vec::new();
        for n in s.min..=s.max() {
            let mut m = FreeGradedMap::zero(&s.ring, s.gens_at(n), t.gens_at(n));
            for p in src_x.min..=src_x.max() {
                let yg = y.gens_at(p + n);
                if yg.is_empty() || tgt_x.gens_at(p).is_empty() || src_x.gens_at(p).is_empty() {
                    continue;
                }
                let block = hom_pre(&self.mat_at(p, src_x, tgt_x), &yg);
                let col_off = tgt_x.hom_block_offset(y, n, p);
                let row_off = src_x.hom_block_offset(y, n, p);
                add_free_block(&mut m, row_off, col_off, &block);
            }
            mats.push(m);
        }
        FreeChainMap::new(&s, &t, s.min, mats)
    }

    /// Hom(X, u): the covariantly induced map Hom(X, Y) -> Hom(X, Y') for
    /// u = self: Y -> Y'.
    pub fn hom_right(&self, x: &FreeComplex, src_y: &FreeComplex, tgt_y: &FreeComplex) -> FreeChainMap {
        let s = x.hom(src_y);
        let t = x.hom(tgt_y);
        let mut mats = Vec::new();
        for n in s.min..=s.max() {
            let mut m = FreeGradedMap::zero(&s.ring, s.gens_at(n), t.gens_at(n));
            for p in x.min..=x.max() {
                let xg = x.gens_at(p);
                if xg.is_empty() || src_y.gens_at(p + n).is_empty() || tgt_y.gens_at(p + n).is_empty()
                {
                    continue;
                }
                let block = hom_post(&self.mat_at(p + n, src_y, tgt_y), &xg);
                let col_off = x.hom_block_offset(src_y, n, p);
                let row_off = x.hom_block_offset(tgt_y, n, p);
                add_free_block(&mut m, row_off, col_off, &block);
            }
            mats.push(m);
        }
        FreeChainMap::new(&s, &t, s.min, mats)
    }
}

// ---------------------------------------------------------------------------
// complexes of finite-dimensional modules

#[derive(Debug, Clone)]
pub struct FinDimComplex {
    pub ring: Arc<MonomialQuotientRing>,
    pub min: i64,
    pub terms: Vec<FinDimModule>,
    pub diffs: Vec<DenseMatrix>,
}

impl FinDimComplex {
    pub fn concentrated(m: &FinDimModule) -> Self {
        FinDimComplex {
            ring: m.ring.clone(),
            min: 0,
            terms: vec![m.clone()],
            diffs: vec![],
        }
    }

    pub fn max(&self) -> i64 {
        self.min + self.terms.len() as i64 - 1
    }

    pub fn term_at(&self, i: i64) -> Option<&FinDimModule> {
        if i < self.min || i > self.max() {
            None
        } else {
            Some(&self.terms[(i - self.min) as usize])
        }
    }

    pub fn dim_at(&self, i: i64) -> usize {
        self.term_at(i).map(|t| t.dim).unwrap_or(0)
    }

    pub fn to_vect(&self) -> VectComplex {
        VectComplex::new(
            self.ring.field,
            self.min,
            self.terms.iter().map(|t| t.dim).collect(),
            self.diffs.clone(),
        )
    }
}

/// Direct sum of n copies of a module, copies ordered block-major.
fn module_power(m: &FinDimModule, n: usize) -> FinDimModule {
    let field = m.ring.field;
    let dim = m.dim * n;
    let actions = m
        .actions
        .iter()
        .map(|a| {
            let mut big = DenseMatrix::zero(field, dim, dim);
            for k in 0..n {
                for i in 0..m.dim {
                    for j in 0..m.dim {
                        if !a.get(i, j).is_zero() {
                            big.set(k * m.dim + i, k * m.dim + j, a.get(i, j).clone());
                        }
                    }
                }
            }
            big
        })
        .collect();
    FinDimModule {
        ring: m.ring.clone(),
        dim,
        actions,
    }
}

fn direct_sum(ring: &Arc<MonomialQuotientRing>, parts: &[FinDimModule]) -> FinDimModule {
    let field = ring.field;
    let dim: usize = parts.iter().map(|p| p.dim).sum();
    let actions = (0..ring.num_vars())
        .map(|v| {
            let mut big = DenseMatrix::zero(field, dim, dim);
            let mut off = 0;
            for p in parts {
                let a = &p.actions[v];
                for i in 0..p.dim {
                    for j in 0..p.dim {
                        if !a.get(i, j).is_zero() {
                            big.set(off + i, off + j, a.get(i, j).clone());
                        }
                    }
                }
                off += p.dim;
            }
            big
        })
        .collect();
    FinDimModule {
        ring: ring.clone(),
        dim,
        actions,
    }
}

fn set_block(out: &mut DenseMatrix, r0: usize, c0: usize, m: &DenseMatrix, negate: bool) {
    for i in 0..m.rows {
        for j in 0..m.cols {
            let v = m.get(i, j);
            if !v.is_zero() {
                let v = if negate { v.neg() } else { v.clone() };
                let cur = out.get(r0 + i, c0 + j).add(&v);
                out.set(r0 + i, c0 + j, cur);
            }
        }
    }
}

/// Hom(K, X) for a free complex K and finite-dimensional complex X, with
/// Hom^n = (+)_p Hom(K^p, X^{p+n}); the block for (n, p) starts at the
/// recorded offset, pairs (generator, X-coordinate) ordered generator-major.
pub struct HomFreeFinDim {
    pub complex: FinDimComplex,
    pub offsets: BTreeMap<(i64, i64), usize>,
}

pub fn hom_free_findim(k: &FreeComplex, x: &FinDimComplex) -> HomFreeFinDim {
    let ring = &k.ring;
    let field = ring.field;
    let min = x.min - k.max();
    let max = x.max() - k.min;
    let mut offsets = BTreeMap::new();
    let mut terms = Vec::new();
    for n in min..=max {
        let mut parts = Vec::new();
        let mut off = 0;
        for p in k.min..=k.max() {
            let g = k.gens_at(p);
            let xd = x.dim_at(p + n);
            if !g.is_empty() && xd > 0 {
                offsets.insert((n, p), off);
                let m = module_power(x.term_at(p + n).unwrap(), g.len());
                off += m.dim;
                parts.push(m);
            }
        }
        terms.push(direct_sum(ring, &parts));
    }
    let mut diffs = Vec::new();
    for n in min..max {
        let src_dim = terms[(n - min) as usize].dim;
        let tgt_dim = terms[(n + 1 - min) as usize].dim;
        let mut d = DenseMatrix::zero(field, tgt_dim, src_dim);
        for p in k.min..=k.max() {
            let Some(&col_off) = offsets.get(&(n, p)) else { continue };
            let g = k.gens_at(p);
            let xdim = x.dim_at(p + n);
            // post-composition with d_X, block p -> p
            if let Some(&row_off) = offsets.get(&(n + 1, p)) {
                let k_idx = p + n - x.min;
                if k_idx >= 0 && (k_idx as usize) < x.diffs.len() {
                    let dx = &x.diffs[k_idx as usize];
                    for a in 0..g.len() {
                        set_block(&mut d, row_off + a * dx.rows, col_off + a * xdim, dx, false);
                    }
                }
            }
            // pre-composition with d_K, block p -> p-1, sign -(-1)^n
            if let Some(&row_off) = offsets.get(&(n + 1, p - 1)) {
                let dk = k.diff_at(p - 1);
                let xterm = x.term_at(p + n).unwrap();
                let negate = n.rem_euclid(2) == 0;
                for api in 0..dk.src_degrees.len() {
                    for ai in 0..dk.tgt_degrees.len() {
                        let e = dk.get(ai, api);
                        if !e.is_zero() {
                            let act = xterm.action_of(e);
                            set_block(
                                &mut d,
                                row_off + api * xterm.dim,
                                col_off + ai * xterm.dim,
                                &act,
                                negate,
                            );
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    // check d^2 = 0
    for i in 0..diffs.len().saturating_sub(1) {
        assert!(diffs[i + 1].mul(&diffs[i]).is_zero(), "hom d^2 != 0");
    }
    HomFreeFinDim {
        complex: FinDimComplex {
            ring: ring.clone(),
            min,
            terms,
            diffs,
        },
        offsets,
    }
}

/// K (x) X for a free complex K and finite-dimensional complex X, with block
/// (n, p) = K^p (x) X^{n-p}, pairs (generator, X-coordinate) generator-major.
pub struct TensorFreeFinDim {
    pub complex: FinDimComplex,
    pub offsets: BTreeMap<(i64, i64), usize>,
}

pub fn tensor_free_findim(k: &FreeComplex, x: &FinDimComplex) -> TensorFreeFinDim {
    let ring = &k.ring;
    let field = ring.field;
    let min = k.min + x.min;
    let max = k.max() + x.max();
    let mut offsets = BTreeMap::new();
    let mut terms = Vec::new();
    for n in min..=max {
        let mut parts = Vec::new();
        let mut off = 0;
        for p in k.min..=k.max() {
            let g = k.gens_at(p);
            let xd = x.dim_at(n - p);
            if !g.is_empty() && xd > 0 {
                offsets.insert((n, p), off);
                let m = module_power(x.term_at(n - p).unwrap(), g.len());
                off += m.dim;
                parts.push(m);
            }
        }
        terms.push(direct_sum(ring, &parts));
    }
    let mut diffs = Vec::new();
    for n in min..max {
        let src_dim = terms[(n - min) as usize].dim;
        let tgt_dim = terms[(n + 1 - min) as usize].dim;
        let mut d = DenseMatrix::zero(field, tgt_dim, src_dim);
        for p in k.min..=k.max() {
            let Some(&col_off) = offsets.get(&(n, p)) else { continue };
            let g = k.gens_at(p);
            let xterm = x.term_at(n - p).unwrap();
            // d_K (x) id into block (p+1, n-p)
            if let Some(&row_off) = offsets.get(&(n + 1, p + 1)) {
                let dk = k.diff_at(p);
                for ai in 0..g.len() {
                    for bi in 0..dk.tgt_degrees.len() {
                        let e = dk.get(bi, ai);
                        if !e.is_zero() {
                            let act = xterm.action_of(e);
                            set_block(
                                &mut d,
                                row_off + bi * xterm.dim,
                                col_off + ai * xterm.dim,
                                &act,
                                false,
                            );
                        }
                    }
                }
            }
            // (-1)^p id (x) d_X into block (p, n-p+1)
            if let Some(&row_off) = offsets.get(&(n + 1, p)) {
                let k_idx = n - p - x.min;
                if k_idx >= 0 && (k_idx as usize) < x.diffs.len() {
                    let dx = &x.diffs[k_idx as usize];
                    let negate = p.rem_euclid(2) != 0;
                    for a in 0..g.len() {
                        set_block(&mut d, row_off + a * dx.rows, col_off + a * xterm.dim, dx, negate);
                    }
                }
            }
        }
        diffs.push(d);
    }
    for i in 0..diffs.len().saturating_sub(1) {
        assert!(diffs[i + 1].mul(&diffs[i]).is_zero(), "tensor d^2 != 0");
    }
    TensorFreeFinDim {
        complex: FinDimComplex {
            ring: ring.clone(),
            min,
            terms,
            diffs,
        },
        offsets,
    }
}

/// Hom(K, M) for a graded module M, realized in internal degree d, with the
/// block for (n, generator a of K^{-n}) being the piece M_{d + deg a}.
pub fn hom_into_graded(k: &FreeComplex, m: &GradedFPModule, d: i64) -> VectComplex {
    let field = k.ring.field;
    let min = -k.max();
    let max = -k.min;
    let mut dims = Vec::new();
    for n in min..=max {
        let g = k.gens_at(-n);
        let dim: usize = g.iter().map(|&a| m.piece_dim(d + a)).sum();
        dims.push(dim);
    }
    let mut diffs = Vec::new();
    for n in min..max {
        let src_g = k.gens_at(-n);
        let tgt_g = k.gens_at(-n - 1);
        let src_dims: Vec<usize> = src_g.iter().map(|&a| m.piece_dim(d + a)).collect();
        let tgt_dims: Vec<usize> = tgt_g.iter().map(|&a| m.piece_dim(d + a)).collect();
        let mut out = DenseMatrix::zero(field, tgt_dims.iter().sum(), src_dims.iter().sum());
        let dk = k.diff_at(-n - 1);
        let negate = n.rem_euclid(2) == 0;
        let mut row_off = vec![0usize; tgt_g.len()];
        for i in 1..tgt_g.len() {
            row_off[i] = row_off[i - 1] + tgt_dims[i - 1];
        }
        let mut col_off = vec![0usize; src_g.len()];
        for i in 1..src_g.len() {
            col_off[i] = col_off[i - 1] + src_dims[i - 1];
        }
        for api in 0..tgt_g.len() {
            for ai in 0..src_g.len() {
                let e = dk.get(ai, api);
                if !e.is_zero() {
                    let block = m.mult(e, d + src_g[ai]);
                    set_block(&mut out, row_off[api], col_off[ai], &block, negate);
                }
            }
        }
        diffs.push(out);
    }
    VectComplex::new(field, min, dims, diffs)
}

/// Realized contravariant action of a chain map t: K -> K' on Hom(-, M):
/// the matrices of Hom(K', M) -> Hom(K, M) in internal degree d.
pub fn hom_into_graded_map(
    t: &FreeChainMap,
    ksrc: &FreeComplex,
    ktgt: &FreeComplex,
    m: &GradedFPModule,
    d: i64,
) -> VectChainMap {
    let field = ksrc.ring.field;
    let s = hom_into_graded(ktgt, m, d);
    let tgt = hom_into_graded(ksrc, m, d);
    let min = s.min.min(tgt.min);
    let max = s.max().max(tgt.max());
    let mut mats = Vec::new();
    for n in min..=max {
        let src_g = ktgt.gens_at(-n);
        let tgt_g = ksrc.gens_at(-n);
        let src_dims: Vec<usize> = src_g.iter().map(|&a| m.piece_dim(d + a)).collect();
        let tgt_dims: Vec<usize> = tgt_g.iter().map(|&a| m.piece_dim(d + a)).collect();
        let mut out = DenseMatrix::zero(field, tgt_dims.iter().sum(), src_dims.iter().sum());
        let tm = t.mat_at(-n, ksrc, ktgt);
        let mut row_off = vec![0usize; tgt_g.len()];
        for i in 1..tgt_g.len() {
            row_off[i] = row_off[i - 1] + tgt_dims[i - 1];
        }
        let mut col_off = vec![0usize; src_g.len()];
        for i in 1..src_g.len() {
            col_off[i] = col_off[i - 1] + src_dims[i - 1];
        }
        for api in 0..src_g.len() {
            for ai in 0..tgt_g.len() {
                let e = tm.get(api, ai);
                if !e.is_zero() {
                    // source coordinate is the piece M_{d + deg b} at the
                    // generator b = src_g[api] of ktgt
                    let block = m.mult(e, d + src_g[api]);
                    set_block(&mut out, row_off[ai], col_off[api], &block, false);
                }
            }
        }
        mats.push(out);
    }
    VectChainMap::new(&s, &tgt, min, mats)
}

/// Hom(K, M) for a finite-dimensional module M concentrated in degree 0.
pub fn hom_into_findim(k: &FreeComplex, m: &FinDimModule) -> HomFreeFinDim {
    hom_free_findim(k, &FinDimComplex::concentrated(m))
}

/// Realized contravariant action on Hom(-, M) for finite-dimensional M:
/// Hom(K', M) -> Hom(K, M) induced by t: K -> K'.
pub fn hom_into_findim_map(
    t: &FreeChainMap,
    ksrc: &FreeComplex,
    ktgt: &FreeComplex,
    m: &FinDimModule,
) -> VectChainMap {
    let field = m.ring.field;
    let s = hom_into_findim(ktgt, m);
    let tg = hom_into_findim(ksrc, m);
    let sv = s.complex.to_vect();
    let tv = tg.complex.to_vect();
    let min = sv.min.min(tv.min);
    let max = sv.max().max(tv.max());
    let mut mats = Vec::new();
    for n in min..=max {
        let mut out = DenseMatrix::zero(field, tv.dim_at(n), sv.dim_at(n));
        let tm = t.mat_at(-n, ksrc, ktgt);
        if let (Some(&col_off), Some(&row_off)) = (s.offsets.get(&(n, -n)), tg.offsets.get(&(n, -n)))
        {
            for api in 0..tm.src_degrees.len() {
                for ai in 0..tm.tgt_degrees.len() {
                    let e = tm.get(ai, api);
                    if !e.is_zero() {
                        // rows are indexed by ksrc generators (api), columns
                        // by ktgt generators (ai)
                        let act = m.action_of(e);
                        set_block(&mut out, row_off + api * m.dim, col_off + ai * m.dim, &act, false);
                    }
                }
            }
        }
        mats.push(out);
    }
    VectChainMap::new(&sv, &tv, min, mats)
}
