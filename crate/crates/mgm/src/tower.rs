//! Towers (inverse systems) and cotowers (direct systems) of finite
//! dimensional vector spaces over a finite window of levels 1..N.
//!
//! All verdicts are window-qualified: a certification or refutation only
//! quantifies over the levels actually inspected.  Refutation of pro-zeroness
//! inside the window is still meaningful because transitions compose: if the
//! composite from level N down to level l is nonzero, then no intermediate
//! level can kill it.

use crate::complex::{VectChainMap, VectComplex};
use crate::linalg::{DenseMatrix, Field, Scalar};

/// Inverse system indexed by levels 1..=N; maps[k] is the transition from
/// level k+2 down to level k+1.
#[derive(Debug, Clone)]
pub struct VectTower {
    pub field: Field,
    pub dims: Vec<usize>,
    pub maps: Vec<DenseMatrix>,
}

/// Direct system indexed by levels 1..=N; maps[k] is the transition from
/// level k+1 up to level k+2.
#[derive(Debug, Clone)]
pub struct VectCoTower {
    pub field: Field,
    pub dims: Vec<usize>,
    pub maps: Vec<DenseMatrix>,
}

impl VectTower {
    pub fn new(field: Field, dims: Vec<usize>, maps: Vec<DenseMatrix>) -> Self {
        assert_eq!(maps.len() + 1, dims.len().max(1));
        for (k, m) in maps.iter().enumerate() {
            assert_eq!(m.rows, dims[k]);
            assert_eq!(m.cols, dims[k + 1]);
        }
        VectTower { field, dims, maps }
    }

    pub fn levels(&self) -> usize {
        self.dims.len()
    }

    /// Composite transition level n -> level l (1-indexed, l <= n).
    pub fn composite(&self, l: usize, n: usize) -> DenseMatrix {
        assert!(1 <= l && l <= n && n <= self.levels());
        let mut out = DenseMatrix::identity(self.field, self.dims[l - 1]);
        for k in l..n {
            // maps[k-1]: level k+1 -> level k
            out = out.mul(&self.maps[k - 1]);
        }
        out
    }
}

impl VectCoTower {
    pub fn new(field: Field, dims: Vec<usize>, maps: Vec<DenseMatrix>) -> Self {
        assert_eq!(maps.len() + 1, dims.len().max(1));
        for (k, m) in maps.iter().enumerate() {
            assert_eq!(m.cols, dims[k]);
            assert_eq!(m.rows, dims[k + 1]);
        }
        VectCoTower { field, dims, maps }
    }

    pub fn levels(&self) -> usize {
        self.dims.len()
    }

    /// Composite transition level l -> level n (1-indexed, l <= n).
    pub fn composite(&self, l: usize, n: usize) -> DenseMatrix {
        assert!(1 <= l && l <= n && n <= self.levels());
        let mut out = DenseMatrix::identity(self.field, self.dims[l - 1]);
        for k in l..n {
            out = self.maps[k - 1].mul(&out);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProZeroVerdict {
    /// For every level l in the window some higher level within the lag
    /// bound composes to zero; certificates[l-1] is that level.
    Certified { certificates: Vec<usize> },
    /// The composite from the top of the window to some level is nonzero on
    /// the witness vector, so no level inside the window helps.
    NotProZeroInWindow {
        level: usize,
        witness: Vec<Scalar>,
        image: Vec<Scalar>,
    },
    Inconclusive { reason: String },
}

impl ProZeroVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, ProZeroVerdict::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, ProZeroVerdict::NotProZeroInWindow { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ProZeroVerdict::Certified { .. } => "certified",
            ProZeroVerdict::NotProZeroInWindow { .. } => "not-pro-zero-in-window",
            ProZeroVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Check pro-zeroness of a tower over the window, with certificates required
/// within `lag` levels.
pub fn pro_zero_check(tower: &VectTower, lag: usize) -> ProZeroVerdict {
    let n_levels = tower.levels();
    if n_levels < 2 {
        return ProZeroVerdict::Inconclusive {
            reason: "window too small".into(),
        };
    }
    // only levels with a full lag's worth of transitions above them are
    // observable; levels near the top of the window are skipped rather than
    // counted against the tower
    let observable = n_levels.saturating_sub(lag);
    if observable < 1 {
        return ProZeroVerdict::Inconclusive {
            reason: format!("window of {} levels is too shallow for lag {}", n_levels, lag),
        };
    }
    let mut certificates = Vec::new();
    let mut failed = Vec::new();
    for l in 1..=observable {
        match (l + 1..=l + lag).find(|&n| tower.composite(l, n).is_zero()) {
            Some(n) => certificates.push(n),
            None => failed.push(l),
        }
    }
    if failed.is_empty() {
        return ProZeroVerdict::Certified { certificates };
    }
    // a level without a certificate refutes pro-zeroness in the window when
    // some top-level class survives all the way down to it
    for &l in &failed {
        let full = tower.composite(l, n_levels);
        if full.is_zero() {
            continue;
        }
        for j in 0..full.cols {
            let col = full.column(j);
            if col.iter().any(|s| !s.is_zero()) {
                let mut witness = vec![tower.field.zero(); full.cols];
                witness[j] = tower.field.one();
                return ProZeroVerdict::NotProZeroInWindow {
                    level: l,
                    witness,
                    image: col,
                };
            }
        }
    }
    ProZeroVerdict::Inconclusive {
        reason: format!(
            "level {} has no zero composite within lag {} but vanishes by level {}",
            failed[0], lag, n_levels
        ),
    }
}

/// Mittag-Leffler data of a tower: per-level dimensions of the eventual
/// (stable) images, computed from the top of the window.
#[derive(Debug, Clone, PartialEq)]
pub struct MLReport {
    pub eventual_dims: Vec<usize>,
    /// Per level, did dim im(level <- n) stop moving strictly inside the
    /// window?
    pub images_stabilized: Vec<bool>,
    /// The limit dimension when the eventual dims themselves are constant at
    /// the low end of the window.
    pub limit_dim: Option<usize>,
}

/// Inverse limit bookkeeping under the Mittag-Leffler condition.  For towers
/// of finite-dimensional spaces the condition holds automatically; what is
/// checked here is whether the window is deep enough to watch the images
/// stabilize, and whether the stable dimensions settle to a constant.
pub fn ml_limit(tower: &VectTower) -> MLReport {
    // the top level is excluded: no transitions into it are observed
    let n_levels = tower.levels();
    let mut eventual_dims = Vec::new();
    let mut images_stabilized = Vec::new();
    for l in 1..n_levels {
        let ranks: Vec<usize> = (l..=n_levels).map(|n| tower.composite(l, n).rank()).collect();
        let last = *ranks.last().unwrap();
        eventual_dims.push(last);
        // composite ranks only drop as more transitions are applied, so a
        // zero rank is final even when the previous rank was larger
        let settled = ranks.len() >= 2 && (ranks[ranks.len() - 2] == last || last == 0);
        images_stabilized.push(settled);
    }
    // the eventual images form a surjective subtower with non-decreasing
    // dimensions, so the limit dimension is read off at the top of the chain
    let limit_dim = if eventual_dims.is_empty() {
        None
    } else if images_stabilized.iter().all(|&b| b) {
        let k = eventual_dims.len();
        if k >= 2 && eventual_dims[k - 1] == eventual_dims[k - 2] {
            Some(eventual_dims[k - 1])
        } else if k == 1 {
            Some(eventual_dims[0])
        } else {
            None
        }
    } else {
        // towers with nilpotent transitions never settle near the top of the
        // window; when every settled level has zero eventual image the limit
        // is reported as zero, window-qualified like every other verdict
        let zeros = images_stabilized[0]
            && eventual_dims[0] == 0
            && images_stabilized
                .iter()
                .zip(&eventual_dims)
                .all(|(&s, &d)| !s || d == 0);
        if zeros { Some(0) } else { None }
    };
    MLReport {
        eventual_dims,
        images_stabilized,
        limit_dim,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColimMechanism {
    /// Transitions are isomorphisms from some level on.
    IsoRun,
    /// Every level's classes die within the lag bound, so the colimit
    /// vanishes even though no transition is an isomorphism.
    VanishCertified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColimReport {
    pub dims: Vec<usize>,
    /// First level from which every later transition in the window is an
    /// isomorphism (for the IsoRun mechanism).
    pub stab_level: Option<usize>,
    pub stable_dim: Option<usize>,
    pub mechanism: Option<ColimMechanism>,
}

/// Detect the colimit of a direct system over the window: either the
/// transitions become isomorphisms, or every class is certified to die
/// within `lag` steps and the colimit vanishes.
pub fn colim_stabilized(cotower: &VectCoTower, lag: usize) -> ColimReport {
    let n_levels = cotower.levels();
    let dims = cotower.dims.clone();
    if n_levels < 2 {
        return ColimReport { dims, stab_level: None, stable_dim: None, mechanism: None };
    }
    let mut stab = None;
    for l in (1..n_levels).rev() {
        let m = &cotower.maps[l - 1];
        let iso = m.rows == m.cols && m.rank() == m.rows;
        if iso {
            stab = Some(l);
        } else {
            break;
        }
    }
    if let Some(l) = stab {
        if l < n_levels {
            return ColimReport {
                stable_dim: Some(dims[l - 1]),
                stab_level: Some(l),
                dims,
                mechanism: Some(ColimMechanism::IsoRun),
            };
        }
    }
    // as with pro-zero checks, only levels with a full lag of transitions
    // above them can be asked to die; the top of the window is unobservable
    let observable = n_levels.saturating_sub(lag);
    let all_die = observable >= 1
        && (1..=observable).all(|l| {
            (l + 1..=l + lag).any(|n| cotower.composite(l, n).is_zero())
        });
    if all_die {
        return ColimReport {
            stable_dim: Some(0),
            stab_level: None,
            dims,
            mechanism: Some(ColimMechanism::VanishCertified),
        };
    }
    ColimReport { dims, stab_level: None, stable_dim: None, mechanism: None }
}

/// Three-valued aggregate verdict used by the top-level reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "not-pro-zero-in-window",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Tower of homology spaces H^i of an inverse system of complexes;
/// transitions[k] maps complexes[k+1] -> complexes[k].
pub fn homology_tower(
    complexes: &[VectComplex],
    transitions: &[VectChainMap],
    i: i64,
) -> VectTower {
    assert_eq!(transitions.len() + 1, complexes.len().max(1));
    let field = complexes[0].field;
    let bases: Vec<_> = complexes.iter().map(|c| c.homology_basis(i)).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.dim).collect();
    let maps: Vec<DenseMatrix> = transitions
        .iter()
        .enumerate()
        .map(|(k, t)| {
            t.induced_on_homology(i, &complexes[k + 1], &complexes[k], &bases[k + 1], &bases[k])
        })
        .collect();
    VectTower::new(field, dims, maps)
}

/// Cotower of homology spaces H^i of a direct system of complexes;
/// transitions[k] maps complexes[k] -> complexes[k+1].
pub fn homology_cotower(
    complexes: &[VectComplex],
    transitions: &[VectChainMap],
    i: i64,
) -> VectCoTower {
    assert_eq!(transitions.len() + 1, complexes.len().max(1));
    let field = complexes[0].field;
    let bases: Vec<_> = complexes.iter().map(|c| c.homology_basis(i)).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.dim).collect();
    let maps: Vec<DenseMatrix> = transitions
        .iter()
        .enumerate()
        .map(|(k, t)| {
            t.induced_on_homology(i, &complexes[k], &complexes[k + 1], &bases[k], &bases[k + 1])
        })
        .collect();
    VectCoTower::new(field, dims, maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Q
    }

    #[test]
    fn zero_maps_certify() {
        let t = VectTower::new(
            q(),
            vec![1; 5],
            vec![DenseMatrix::zero(q(), 1, 1); 4],
        );
        let v = pro_zero_check(&t, 3);
        assert!(v.is_certified());
        if let ProZeroVerdict::Certified { certificates } = v {
            // only levels 1 and 2 have a full lag of room above them
            assert_eq!(certificates, vec![2, 3]);
        }
    }

    #[test]
    fn identity_tower_refuted() {
        let t = VectTower::new(
            q(),
            vec![1; 5],
            vec![DenseMatrix::identity(q(), 1); 4],
        );
        let v = pro_zero_check(&t, 3);
        assert!(v.is_refuted());
        if let ProZeroVerdict::NotProZeroInWindow { level, witness, image } = v {
            assert_eq!(level, 1);
            assert!(witness[0].is_one());
            assert!(image[0].is_one());
        }
    }

    #[test]
    fn slow_vanishing_is_inconclusive_for_small_lag() {
        // level l killed only at level l+4: lag 3 cannot certify, but the
        // window shows it vanishes, so the verdict must stay inconclusive
        let dims = vec![1; 6];
        let maps: Vec<DenseMatrix> = (0..5)
            .map(|k| {
                if k == 4 {
                    DenseMatrix::zero(q(), 1, 1)
                } else {
                    DenseMatrix::identity(q(), 1)
                }
            })
            .collect();
        let t = VectTower::new(q(), dims, maps);
        let v = pro_zero_check(&t, 3);
        assert!(matches!(v, ProZeroVerdict::Inconclusive { .. }));
        let v = pro_zero_check(&t, 5);
        assert!(v.is_certified());
    }

    #[test]
    fn ml_limit_of_constant_tower() {
        let t = VectTower::new(
            q(),
            vec![2; 5],
            vec![DenseMatrix::identity(q(), 2); 4],
        );
        let r = ml_limit(&t);
        assert_eq!(r.limit_dim, Some(2));
        assert!(r.images_stabilized.iter().all(|&b| b));
    }

    #[test]
    fn ml_limit_flags_growing_tower() {
        // k^1 <- k^2 <- ... <- k^5 with projections onto the first coords
        let dims: Vec<usize> = (1..=5).collect();
        let maps: Vec<DenseMatrix> = (1..5)
            .map(|n| {
                DenseMatrix::from_fn(q(), n, n + 1, |i, j| {
                    if i == j { q().one() } else { q().zero() }
                })
            })
            .collect();
        let t = VectTower::new(q(), dims, maps);
        let r = ml_limit(&t);
        assert_eq!(r.eventual_dims, vec![1, 2, 3, 4]);
        assert_eq!(r.limit_dim, None);
    }

    #[test]
    fn colim_detects_stabilization() {
        // 0 -> k -> k -> k with isos from level 2 on
        let dims = vec![0, 1, 1, 1];
        let maps = vec![
            DenseMatrix::zero(q(), 1, 0),
            DenseMatrix::identity(q(), 1),
            DenseMatrix::identity(q(), 1),
        ];
        let c = VectCoTower::new(q(), dims, maps);
        let r = colim_stabilized(&c, 3);
        assert_eq!(r.stab_level, Some(2));
        assert_eq!(r.stable_dim, Some(1));
        assert_eq!(r.mechanism, Some(ColimMechanism::IsoRun));
    }

    #[test]
    fn colim_vanishing_certificate() {
        // each level is k but every class dies one step later
        let dims = vec![1, 1, 1, 1];
        let maps = vec![
            DenseMatrix::zero(q(), 1, 1),
            DenseMatrix::zero(q(), 1, 1),
            DenseMatrix::zero(q(), 1, 1),
        ];
        let c = VectCoTower::new(q(), dims, maps);
        let r = colim_stabilized(&c, 2);
        assert_eq!(r.stable_dim, Some(0));
        assert_eq!(r.mechanism, Some(ColimMechanism::VanishCertified));
    }

    #[test]
    fn colim_without_stabilization() {
        let dims: Vec<usize> = (1..=4).collect();
        let maps: Vec<DenseMatrix> = (1..4)
            .map(|n| {
                DenseMatrix::from_fn(q(), n + 1, n, |i, j| {
                    if i == j { q().one() } else { q().zero() }
                })
            })
            .collect();
        let c = VectCoTower::new(q(), dims, maps);
        let r = colim_stabilized(&c, 3);
        assert_eq!(r.stab_level, None);
        assert_eq!(r.stable_dim, None);
    }
}
