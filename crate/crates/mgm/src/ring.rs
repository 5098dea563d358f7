//! Positively graded monomial quotient rings k[x_1..x_v]/I with I generated
//! by monomials, together with homogeneous elements and the matrices of
//! multiplication maps between graded pieces.
//!
//! Because the ideal is monomial, a product of standard monomials is either
//! standard or zero, so exact arithmetic stays combinatorial.

use crate::linalg::{DenseMatrix, Field, Scalar};
use crate::{MgmError, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialQuotientRing {
    pub field: Field,
    pub var_names: Vec<String>,
    pub weights: Vec<u32>,
    pub relations: Vec<Monomial>,
}

impl MonomialQuotientRing {
    pub fn new(
        field: Field,
        var_names: Vec<String>,
        weights: Vec<u32>,
        relations: Vec<Monomial>,
    ) -> Result<Arc<Self>> {
        if var_names.is_empty() {
            return Err(MgmError::Invalid("ring needs at least one variable".into()));
        }
        if var_names.len() != weights.len() {
            return Err(MgmError::Invalid("one weight per variable".into()));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(MgmError::Invalid("weights must be positive".into()));
        }
        for r in &relations {
            if r.len() != var_names.len() {
                return Err(MgmError::Invalid("relation exponent length mismatch".into()));
            }
            if r.iter().all(|&e| e == 0) {
                return Err(MgmError::Invalid("relation 1 = 0 collapses the ring".into()));
            }
        }
        Ok(Arc::new(MonomialQuotientRing {
            field,
            var_names,
            weights,
            relations,
        }))
    }

    /// Polynomial ring with all weights 1.
    pub fn polynomial(field: Field, var_names: &[&str]) -> Arc<Self> {
        Self::new(
            field,
            var_names.iter().map(|s| s.to_string()).collect(),
            vec![1; var_names.len()],
            vec![],
        )
        .unwrap()
    }

    /// k[x_1..x_n, s] / (x_i x_j, s^i x_i): the ring whose element s fails
    /// weak proregularity, truncated to n polynomial variables.
    pub fn counterexample_ring(field: Field, num_vars: usize) -> Arc<Self> {
        let mut names: Vec<String> = (1..=num_vars).map(|i| format!("x{}", i)).collect();
        names.push("s".into());
        let v = num_vars + 1;
        let mut relations = Vec::new();
        for i in 0..num_vars {
            for j in i..num_vars {
                let mut m = vec![0u32; v];
                m[i] += 1;
                m[j] += 1;
                relations.push(m);
            }
        }
        for i in 0..num_vars {
            let mut m = vec![0u32; v];
            m[i] = 1;
            m[v - 1] = (i + 1) as u32;
            relations.push(m);
        }
        Self::new(field, names, vec![1; v], relations).unwrap()
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as i64 * w as i64)
            .sum()
    }

    fn relation_divides(&self, m: &Monomial) -> bool {
        self.relations
            .iter()
            .any(|r| r.iter().zip(m).all(|(&a, &b)| a <= b))
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.relation_divides(m)
    }

    /// Standard monomials of weighted degree d, in descending graded-lex
    /// order on exponent vectors.
    pub fn degree_basis(&self, d: i64) -> Vec<Monomial> {
        if d < 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let mut partial = vec![0u32; self.num_vars()];
        self.enumerate(0, d, &mut partial, &mut out);
        out
    }

    fn enumerate(&self, var: usize, remaining: i64, partial: &mut Monomial, out: &mut Vec<Monomial>) {
        if var == self.num_vars() {
            if remaining == 0 && !self.relation_divides(partial) {
                out.push(partial.clone());
            }
            return;
        }
        let w = self.weights[var] as i64;
        let max = remaining / w;
        for e in (0..=max).rev() {
            partial[var] = e as u32;
            // prune when the partial exponents already hit a relation
            // supported on the assigned variables
            let dead = self.relations.iter().any(|r| {
                r[var + 1..].iter().all(|&a| a == 0)
                    && r[..=var].iter().zip(partial[..=var].iter()).all(|(&a, &b)| a <= b)
            });
            if !dead {
                self.enumerate(var + 1, remaining - e as i64 * w, partial, out);
            }
        }
        partial[var] = 0;
    }

    pub fn dim_piece(&self, d: i64) -> usize {
        self.degree_basis(d).len()
    }

    /// Product of monomials in the quotient: None means it maps to zero.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let m: Monomial = a.iter().zip(b).map(|(&x, &y)| x + y).collect();
        if self.relation_divides(&m) {
            None
        } else {
            Some(m)
        }
    }

    pub fn one(self: &Arc<Self>) -> HomogeneousElement {
        HomogeneousElement::monomial(self, &vec![0; self.num_vars()])
    }

    pub fn var(self: &Arc<Self>, i: usize) -> HomogeneousElement {
        let mut m = vec![0u32; self.num_vars()];
        m[i] = 1;
        HomogeneousElement::monomial(self, &m)
    }

    pub fn var_by_name(self: &Arc<Self>, name: &str) -> Result<HomogeneousElement> {
        let i = self
            .var_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| MgmError::Invalid(format!("unknown variable {}", name)))?;
        Ok(self.var(i))
    }
}

/// Homogeneous element of known degree; the zero element carries its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousElement {
    pub ring: Arc<MonomialQuotientRing>,
    pub degree: i64,
    pub coeffs: BTreeMap<Monomial, Scalar>,
}

impl HomogeneousElement {
    pub fn zero(ring: &Arc<MonomialQuotientRing>, degree: i64) -> Self {
        HomogeneousElement {
            ring: ring.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(ring: &Arc<MonomialQuotientRing>, m: &Monomial) -> Self {
        let mut el = Self::zero(ring, ring.monomial_degree(m));
        if ring.is_standard(m) {
            el.coeffs.insert(m.clone(), ring.field.one());
        }
        el
    }

    pub fn term(ring: &Arc<MonomialQuotientRing>, c: Scalar, m: &Monomial) -> Self {
        let mut el = Self::zero(ring, ring.monomial_degree(m));
        if ring.is_standard(m) && !c.is_zero() {
            el.coeffs.insert(m.clone(), c);
        }
        el
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(MgmError::NotHomogeneous(format!(
                "adding degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            let v = match out.coeffs.get(m) {
                Some(old) => old.add(c),
                None => c.clone(),
            };
            if v.is_zero() {
                out.coeffs.remove(m);
            } else {
                out.coeffs.insert(m.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.ring, self.degree);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.coeffs {
            out.coeffs.insert(m.clone(), a.mul(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ring.field.one().neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring, self.degree + other.degree);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                if let Some(m) = self.ring.mul_monomials(m1, m2) {
                    let c = c1.mul(c2);
                    let v = match out.coeffs.get(&m) {
                        Some(old) => old.add(&c),
                        None => c,
                    };
                    if v.is_zero() {
                        out.coeffs.remove(&m);
                    } else {
                        out.coeffs.insert(m, v);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = self.ring.one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Matrix of multiplication by self: R_d -> R_{d + deg}, columns and rows
    /// indexed by degree_basis order.
    pub fn mult_map(&self, d: i64) -> DenseMatrix {
        let src = self.ring.degree_basis(d);
        let tgt = self.ring.degree_basis(d + self.degree);
        let index: BTreeMap<&Monomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = DenseMatrix::zero(self.ring.field, tgt.len(), src.len());
        for (j, m) in src.iter().enumerate() {
            for (mf, c) in &self.coeffs {
                if let Some(prod) = self.ring.mul_monomials(mf, m) {
                    let i = index[&prod];
                    let v = out.get(i, j).add(c);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl fmt::Display for HomogeneousElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // descending lex for display, matching degree_basis order
        for (m, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ring.var_names[i].clone()
                    } else {
                        format!("{}^{}", self.ring.var_names[i], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A finite sequence of homogeneous elements generating the ideal of
/// interest; weights are their degrees.
#[derive(Debug, Clone)]
pub struct GeneratingSequence {
    pub ring: Arc<MonomialQuotientRing>,
    pub elements: Vec<HomogeneousElement>,
}

impl GeneratingSequence {
    pub fn new(elements: Vec<HomogeneousElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(MgmError::Invalid("empty generating sequence".into()));
        }
        let ring = elements[0].ring.clone();
        for e in &elements {
            if e.ring != ring {
                return Err(MgmError::Invalid("sequence elements from different rings".into()));
            }
            if e.is_zero() {
                return Err(MgmError::Invalid("zero element in generating sequence".into()));
            }
            if e.degree <= 0 {
                return Err(MgmError::Invalid("sequence elements must have positive degree".into()));
            }
        }
        Ok(GeneratingSequence { ring, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.elements.iter().map(|e| e.degree).collect()
    }

    /// The n-th bracket power (s_1^n, ..., s_m^n).
    pub fn bracket_power_ideal(&self, n: u32) -> Vec<HomogeneousElement> {
        self.elements.iter().map(|e| e.pow(n)).collect()
    }

    /// Entrywise power as a new sequence.
    pub fn bracket_power(&self, n: u32) -> GeneratingSequence {
        GeneratingSequence {
            ring: self.ring.clone(),
            elements: self.bracket_power_ideal(n),
        }
    }
}
