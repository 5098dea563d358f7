//! Derived completion towers through telescope truncations, compared
//! degreewise against the bracket-power adic quotients.

use mgm::duality::{derived_completion_findim, derived_completion_graded};
use mgm::linalg::{DenseMatrix, Field};
use mgm::module::{FinDimModule, GradedFPModule};
use mgm::ring::{GeneratingSequence, MonomialQuotientRing};

fn main() {
    let ring = MonomialQuotientRing::polynomial(Field::Q, &["x"]);
    let seq = GeneratingSequence::new(vec![ring.var(0)]).unwrap();

    // the completion of Q[x] at (x) is Q[[x]]; degreewise nothing changes,
    // and the H_0 towers realize the truncations R/(x^n) level by level
    let free = GradedFPModule::free(&ring, vec![0]);
    let rep = derived_completion_graded(&seq, &free, (-2, 3), 7).unwrap();
    println!("derived completion of Q[x] at (x), degreewise:");
    println!("  H_0 matches R/(x^n) at every level: {}", rep.h0_matches_quotients);
    for d in -2..=3i64 {
        let (dims, ml) = rep.cells.get(&(0, d)).unwrap();
        println!("  d = {:>2}: tower dims {:?}, limit {:?}", d, dims, ml.limit_dim);
    }

    // a nilpotent module is already complete; the towers stabilize at dim M
    let jordan = DenseMatrix::from_fn(Field::Q, 3, 3, |i, j| {
        if j > 0 && i == j - 1 { Field::Q.one() } else { Field::Q.zero() }
    });
    let m = FinDimModule::new(&ring, vec![jordan]).unwrap();
    let frep = derived_completion_findim(&seq, &m, 5).unwrap();
    println!("\nJordan block of size 3:");
    for (i, (dims, ml)) in &frep.towers {
        println!("  H_{}: dims {:?}, limit {:?}", i, dims, ml.limit_dim);
    }

    // a module with invertible action has zero completion
    let unit = FinDimModule::new(&ring, vec![DenseMatrix::identity(Field::Q, 2)]).unwrap();
    let urep = derived_completion_findim(&seq, &unit, 4).unwrap();
    println!("\nmodule with x acting invertibly:");
    for (i, (_, ml)) in &urep.towers {
        println!("  H_{} limit {:?}", i, ml.limit_dim);
    }
}
