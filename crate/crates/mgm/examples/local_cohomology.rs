//! Degreewise local cohomology from the Koszul cotower, with the classical
//! answers for the line and the plane, and the Gamma cross-check on a
//! finite-dimensional module.

use mgm::duality::{local_cohomology_findim, local_cohomology_table};
use mgm::linalg::{DenseMatrix, Field};
use mgm::module::{FinDimModule, GradedFPModule};
use mgm::ring::{GeneratingSequence, MonomialQuotientRing};

fn main() {
    // H^1_(x)(Q[x]) is the shifted inverse powers module: one dimension in
    // each negative degree
    let line = MonomialQuotientRing::polynomial(Field::Q, &["x"]);
    let lseq = GeneratingSequence::new(vec![line.var(0)]).unwrap();
    let free = GradedFPModule::free(&line, vec![0]);
    let t = local_cohomology_table(&lseq, &free, (-5, 2), 6, 3).unwrap();
    println!("H^i_(x)(Q[x]) per degree:");
    for d in -5..=2i64 {
        let h0 = t.cells.get(&(0, d)).and_then(|c| c.stable_dim);
        let h1 = t.cells.get(&(1, d)).and_then(|c| c.stable_dim);
        println!("  d = {:>2}: H^0 {:?}  H^1 {:?}", d, h0, h1);
    }

    // the plane concentrates in H^2 with dims 0, 0, 1, 2, 3, ... going down
    let plane = MonomialQuotientRing::polynomial(Field::Q, &["x", "y"]);
    let pseq = GeneratingSequence::new(vec![plane.var(0), plane.var(1)]).unwrap();
    let pfree = GradedFPModule::free(&plane, vec![0]);
    let pt = local_cohomology_table(&pseq, &pfree, (-4, 0), 6, 3).unwrap();
    println!("\nH^2_(x,y)(Q[x,y]) per degree:");
    for d in -4..=0i64 {
        let h2 = pt.cells.get(&(2, d)).and_then(|c| c.stable_dim);
        println!("  d = {:>2}: H^2 {:?}", d, h2);
    }

    // on a torsion findim module local cohomology is the module itself in
    // degree 0, and the cycles match the ann-chain computation of Gamma
    let jordan = DenseMatrix::from_fn(Field::Q, 3, 3, |i, j| {
        if j > 0 && i == j - 1 { Field::Q.one() } else { Field::Q.zero() }
    });
    let m = FinDimModule::new(&line, vec![jordan]).unwrap();
    let rep = local_cohomology_findim(&lseq, &m, 5, 3).unwrap();
    println!("\nJordan block of size 3 over Q[x]:");
    for (i, cell) in &rep.cells {
        println!("  H^{} colim dim {:?}", i, cell.stable_dim);
    }
    println!("  degree-zero cycles match Gamma: {}", rep.h0_matches_gamma);
}
