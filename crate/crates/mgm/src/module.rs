//! Two module backends.
//!
//! `GradedFPModule` presents a graded module by generators and homogeneous
//! relations and realizes each graded piece as an explicit quotient of a
//! degree piece of a free module.  `FinDimModule` is a finite-dimensional
//! module given by commuting action matrices, the backend for torsion and
//! contramodule checks that do not see the grading.

use crate::linalg::{DenseMatrix, QuotientMap};
use crate::ring::{GeneratingSequence, HomogeneousElement, MonomialQuotientRing};
use crate::{MgmError, Result};
use std::sync::Arc;

/// Graded map between free modules, entries homogeneous.  Generator degrees
/// are carried on both sides so every entry degree is forced: the (t, i)
/// entry has degree src_degrees[i] - tgt_degrees[t].
#[derive(Debug, Clone)]
pub struct FreeGradedMap {
    pub ring: Arc<MonomialQuotientRing>,
    pub src_degrees: Vec<i64>,
    pub tgt_degrees: Vec<i64>,
    entries: Vec<HomogeneousElement>,
}

impl FreeGradedMap {
    pub fn zero(ring: &Arc<MonomialQuotientRing>, src: Vec<i64>, tgt: Vec<i64>) -> Self {
        let entries = tgt
            .iter()
            .flat_map(|&gt| {
                src.iter()
                    .map(move |&gs| (gs, gt))
                    .collect::<Vec<_>>()
            })
            .map(|(gs, gt)| HomogeneousElement::zero(ring, gs - gt))
            .collect();
        FreeGradedMap {
            ring: ring.clone(),
            src_degrees: src,
            tgt_degrees: tgt,
            entries,
        }
    }

    pub fn identity(ring: &Arc<MonomialQuotientRing>, degrees: Vec<i64>) -> Self {
        let mut m = Self::zero(ring, degrees.clone(), degrees);
        for i in 0..m.tgt_degrees.len() {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.tgt_degrees.len()
    }

    pub fn cols(&self) -> usize {
        self.src_degrees.len()
    }

    pub fn get(&self, t: usize, i: usize) -> &HomogeneousElement {
        &self.entries[t * self.cols() + i]
    }

    pub fn set(&mut self, t: usize, i: usize, e: HomogeneousElement) {
        assert_eq!(
            e.degree,
            self.src_degrees[i] - self.tgt_degrees[t],
            "entry degree must match generator degrees"
        );
        let c = self.cols();
        self.entries[t * c + i] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn compose(&self, inner: &FreeGradedMap) -> FreeGradedMap {
        assert_eq!(self.src_degrees, inner.tgt_degrees, "composition degrees");
        let mut out = Self::zero(&self.ring, inner.src_degrees.clone(), self.tgt_degrees.clone());
        for t in 0..out.rows() {
            for i in 0..out.cols() {
                let mut acc = HomogeneousElement::zero(
                    &self.ring,
                    inner.src_degrees[i] - self.tgt_degrees[t],
                );
                for k in 0..self.cols() {
                    acc = acc.add(&self.get(t, k).mul(inner.get(k, i))).unwrap();
                }
                out.set(t, i, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &FreeGradedMap) -> FreeGradedMap {
        assert_eq!(self.src_degrees, other.src_degrees);
        assert_eq!(self.tgt_degrees, other.tgt_degrees);
        let mut out = Self::zero(&self.ring, self.src_degrees.clone(), self.tgt_degrees.clone());
        for t in 0..out.rows() {
            for i in 0..out.cols() {
                out.set(t, i, self.get(t, i).add(other.get(t, i)).unwrap());
            }
        }
        out
    }

    pub fn neg(&self) -> FreeGradedMap {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.neg();
        }
        out
    }

    pub fn scale_sign(&self, sign: i64) -> FreeGradedMap {
        if sign >= 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Scalar matrix of the degree-d piece: sum of dims R_{d - g} over source
    /// generators maps to the same over target generators.
    pub fn realize(&self, d: i64) -> DenseMatrix {
        let field = self.ring.field;
        let src_dims: Vec<usize> = self.src_degrees.iter().map(|&g| self.ring.dim_piece(d - g)).collect();
        let tgt_dims: Vec<usize> = self.tgt_degrees.iter().map(|&g| self.ring.dim_piece(d - g)).collect();
        let total_src: usize = src_dims.iter().sum();
        let total_tgt: usize = tgt_dims.iter().sum();
        let mut out = DenseMatrix::zero(field, total_tgt, total_src);
        let mut row_off = 0;
        for t in 0..self.rows() {
            let mut col_off = 0;
            for i in 0..self.cols() {
                let e = self.get(t, i);
                if !e.is_zero() {
                    let block = e.mult_map(d - self.src_degrees[i]);
                    assert_eq!(block.rows, tgt_dims[t]);
                    assert_eq!(block.cols, src_dims[i]);
                    for r in 0..block.rows {
                        for c in 0..block.cols {
                            let v = out.get(row_off + r, col_off + c).add(block.get(r, c));
                            out.set(row_off + r, col_off + c, v);
                        }
                    }
                }
                col_off += src_dims[i];
            }
            row_off += tgt_dims[t];
        }
        out
    }

    pub fn piece_dim(&self, degrees: &[i64], d: i64) -> usize {
        degrees.iter().map(|&g| self.ring.dim_piece(d - g)).sum()
    }

    /// Tensor product of maps with a Koszul sign applied globally.
    pub fn tensor(&self, other: &FreeGradedMap, sign: i64) -> FreeGradedMap {
        let src: Vec<i64> = self
            .src_degrees
            .iter()
            .flat_map(|&a| other.src_degrees.iter().map(move |&b| a + b))
            .collect();
        let tgt: Vec<i64> = self
            .tgt_degrees
            .iter()
            .flat_map(|&a| other.tgt_degrees.iter().map(move |&b| a + b))
            .collect();
        let mut out = Self::zero(&self.ring, src, tgt);
        for t1 in 0..self.rows() {
            for t2 in 0..other.rows() {
                for i1 in 0..self.cols() {
                    for i2 in 0..other.cols() {
                        let e = self.get(t1, i1).mul(other.get(t2, i2));
                        let e = if sign < 0 { e.neg() } else { e };
                        out.set(t1 * other.rows() + t2, i1 * other.cols() + i2, e);
                    }
                }
            }
        }
        out
    }
}

/// One graded piece of a finitely presented graded module, realized as a
/// quotient of the degree piece of the free cover.
#[derive(Debug, Clone)]
pub struct DegreePiece {
    pub degree: i64,
    pub dim: usize,
    pub qmap: QuotientMap,
}

/// Finitely presented graded module coker(F1 -> F0).
#[derive(Debug, Clone)]
pub struct GradedFPModule {
    pub ring: Arc<MonomialQuotientRing>,
    pub gen_degrees: Vec<i64>,
    pub presentation: FreeGradedMap,
}

impl GradedFPModule {
    pub fn free(ring: &Arc<MonomialQuotientRing>, gen_degrees: Vec<i64>) -> Self {
        let presentation = FreeGradedMap::zero(ring, vec![], gen_degrees.clone());
        GradedFPModule {
            ring: ring.clone(),
            gen_degrees,
            presentation,
        }
    }

    pub fn from_presentation(presentation: FreeGradedMap) -> Self {
        GradedFPModule {
            ring: presentation.ring.clone(),
            gen_degrees: presentation.tgt_degrees.clone(),
            presentation,
        }
    }

    /// Cyclic module R/(f_1..f_k).
    pub fn cyclic_quotient(ring: &Arc<MonomialQuotientRing>, rels: &[HomogeneousElement]) -> Self {
        let src: Vec<i64> = rels.iter().map(|f| f.degree).collect();
        let mut pres = FreeGradedMap::zero(ring, src, vec![0]);
        for (j, f) in rels.iter().enumerate() {
            pres.set(0, j, f.clone());
        }
        Self::from_presentation(pres)
    }

    pub fn graded_piece(&self, d: i64) -> DegreePiece {
        let image = self.presentation.realize(d);
        let qmap = QuotientMap::new(&image);
        DegreePiece {
            degree: d,
            dim: qmap.quotient_dim(),
            qmap,
        }
    }

    pub fn piece_dim(&self, d: i64) -> usize {
        self.graded_piece(d).dim
    }

    /// Matrix of multiplication by f from the piece in degree d to the piece
    /// in degree d + deg f, in the deterministic quotient bases.
    pub fn mult(&self, f: &HomogeneousElement, d: i64) -> DenseMatrix {
        let src = self.graded_piece(d);
        let tgt = self.graded_piece(d + f.degree);
        let free_mult =
            FreeGradedMap::from_diagonal(&self.ring, &self.gen_degrees, f).realize(d + f.degree);
        tgt.qmap
            .projection_matrix()
            .mul(&free_mult)
            .mul(&src.qmap.lift_matrix())
    }

    /// Degreewise dimension of M/(s_1^n..s_m^n)M.
    pub fn quotient_by_bracket_power_dim(&self, seq: &GeneratingSequence, n: u32, d: i64) -> usize {
        let piece = self.graded_piece(d);
        let mut cols: Option<DenseMatrix> = None;
        for f in seq.bracket_power_ideal(n) {
            let m = self.mult(&f, d - f.degree);
            cols = Some(match cols {
                None => m,
                Some(c) => c.hstack(&m),
            });
        }
        match cols {
            None => piece.dim,
            Some(c) => piece.dim - c.rank(),
        }
    }
}

impl FreeGradedMap {
    /// f acting diagonally on a free module with the given generator degrees.
    pub fn from_diagonal(
        ring: &Arc<MonomialQuotientRing>,
        degrees: &[i64],
        f: &HomogeneousElement,
    ) -> FreeGradedMap {
        let src: Vec<i64> = degrees.iter().map(|&g| g + f.degree).collect();
        let mut out = Self::zero(ring, src, degrees.to_vec());
        for i in 0..degrees.len() {
            out.set(i, i, f.clone());
        }
        out
    }
}

/// Finite-dimensional module over the ring, given by one action matrix per
/// variable.  The grading is forgotten at this level.
#[derive(Debug, Clone)]
pub struct FinDimModule {
    pub ring: Arc<MonomialQuotientRing>,
    pub dim: usize,
    pub actions: Vec<DenseMatrix>,
}

impl FinDimModule {
    pub fn new(ring: &Arc<MonomialQuotientRing>, actions: Vec<DenseMatrix>) -> Result<Self> {
        if actions.len() != ring.num_vars() {
            return Err(MgmError::Invalid("one action matrix per variable".into()));
        }
        let dim = actions.first().map(|a| a.rows).unwrap_or(0);
        for a in &actions {
            if a.rows != dim || a.cols != dim {
                return Err(MgmError::Shape("action matrices must be square of equal size".into()));
            }
            if a.field != ring.field {
                return Err(MgmError::FieldMismatch);
            }
        }
        for i in 0..actions.len() {
            for j in i + 1..actions.len() {
                if actions[i].mul(&actions[j]) != actions[j].mul(&actions[i]) {
                    return Err(MgmError::Invalid(format!(
                        "actions of {} and {} do not commute",
                        ring.var_names[i], ring.var_names[j]
                    )));
                }
            }
        }
        let m = FinDimModule { ring: ring.clone(), dim, actions };
        for r in &ring.relations {
            if !m.action_of_monomial(r).is_zero() {
                return Err(MgmError::Invalid("action does not kill a defining relation".into()));
            }
        }
        Ok(m)
    }

    pub fn action_of_monomial(&self, m: &[u32]) -> DenseMatrix {
        let mut out = DenseMatrix::identity(self.ring.field, self.dim);
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                out = self.actions[i].mul(&out);
            }
        }
        out
    }

    pub fn action_of(&self, f: &HomogeneousElement) -> DenseMatrix {
        let mut out = DenseMatrix::zero(self.ring.field, self.dim, self.dim);
        for (m, c) in &f.coeffs {
            out = out.add(&self.action_of_monomial(m).scale(c));
        }
        out
    }

    /// The largest submodule on which some bracket power of the sequence
    /// acts by zero; returns the inclusion of a basis.
    pub fn gamma(&self, seq: &GeneratingSequence) -> DenseMatrix {
        let field = self.ring.field;
        let mut prev_dim = usize::MAX;
        let mut current = DenseMatrix::identity(field, self.dim);
        let mut n = 1u32;
        loop {
            // intersection of ker(s_j^n) over j, as columns
            let mut stacked: Option<DenseMatrix> = None;
            for s in &seq.elements {
                let a = self.action_of(&s.pow(n));
                stacked = Some(match stacked {
                    None => a,
                    Some(m) => m.vstack(&a),
                });
            }
            let ker = stacked.unwrap().kernel_basis();
            if ker.cols == prev_dim || n as usize > self.dim + 1 {
                return current;
            }
            prev_dim = ker.cols;
            current = ker;
            n += 1;
        }
    }

    /// Quotient M/(s_1^n..s_m^n)M with induced actions, plus the projection.
    pub fn quotient_by_bracket_power(
        &self,
        seq: &GeneratingSequence,
        n: u32,
    ) -> (FinDimModule, DenseMatrix) {
        let field = self.ring.field;
        let mut image: Option<DenseMatrix> = None;
        for s in &seq.elements {
            let a = self.action_of(&s.pow(n));
            image = Some(match image {
                None => a,
                Some(m) => m.hstack(&a),
            });
        }
        let image = image.unwrap_or_else(|| DenseMatrix::zero(field, self.dim, 0));
        let qmap = QuotientMap::new(&image);
        let proj = qmap.projection_matrix();
        let lift = qmap.lift_matrix();
        let actions = self
            .actions
            .iter()
            .map(|a| proj.mul(&a.mul(&lift)))
            .collect();
        let q = FinDimModule {
            ring: self.ring.clone(),
            dim: qmap.quotient_dim(),
            actions,
        };
        (q, proj)
    }

    /// Splitting M = M_nil + M_inv for the action of f: bases of the
    /// generalized kernel and the stable image.
    pub fn fitting_decomposition(&self, f: &HomogeneousElement) -> (DenseMatrix, DenseMatrix) {
        let a = self.action_of(f);
        let mut power = DenseMatrix::identity(self.ring.field, self.dim);
        for _ in 0..self.dim {
            power = power.mul(&a);
        }
        let nil = power.kernel_basis();
        let stable = {
            let pivots = power.independent_columns();
            power.select_columns(&pivots)
        };
        (nil, stable)
    }

    /// In finite dimension a module is a contramodule along the sequence
    /// exactly when every s_j acts nilpotently.
    pub fn is_contramodule(&self, seq: &GeneratingSequence) -> bool {
        seq.elements.iter().all(|s| {
            let (_, stable) = self.fitting_decomposition(s);
            stable.cols == 0
        })
    }

    /// Same criterion characterizes torsion modules in finite dimension.
    pub fn is_torsion(&self, seq: &GeneratingSequence) -> bool {
        self.gamma(seq).cols == self.dim
    }

    /// Tower of quotients M/(s^[n])M for n = 1..N with the natural
    /// surjections level n+1 -> level n.
    pub fn truncated_completion(
        &self,
        seq: &GeneratingSequence,
        levels: u32,
    ) -> (Vec<FinDimModule>, Vec<DenseMatrix>) {
        let mut quots = Vec::new();
        let mut projs = Vec::new();
        for n in 1..=levels {
            let (q, p) = self.quotient_by_bracket_power(seq, n);
            quots.push(q);
            projs.push(p);
        }
        // transition level n+1 -> level n factors the projection at n through
        // the one at n+1
        let mut transitions = Vec::new();
        for n in 0..quots.len().saturating_sub(1) {
            let big = &projs[n + 1];
            let small = &projs[n];
            // solve small = t * big columnwise
            let t = solve_factorization(small, big);
            transitions.push(t);
        }
        (quots, transitions)
    }
}

/// Find T with small = T * big, assuming big is surjective.
fn solve_factorization(small: &DenseMatrix, big: &DenseMatrix) -> DenseMatrix {
    // transpose: big^T * T^T = small^T, solve column by column
    let bt = big.transpose();
    let st = small.transpose();
    let mut cols = Vec::new();
    for j in 0..st.cols {
        let b = st.column(j);
        let x = bt.solve(&b).expect("factorization through surjection");
        cols.push(x);
    }
    DenseMatrix::from_columns(small.field, bt.cols, &cols).transpose()
}
