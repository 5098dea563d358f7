//! Certify weak proregularity of a regular sequence inside a finite window.
//!
//! The Koszul homology towers H_i for i > 0 are computed level by level in
//! each graded degree; the sequence is certified when every tower admits a
//! vanishing composite within the lag bound.

use mgm::duality::weak_proregularity_check;
use mgm::linalg::Field;
use mgm::ring::{GeneratingSequence, MonomialQuotientRing};

fn main() {
    let ring = MonomialQuotientRing::polynomial(Field::Q, &["x", "y"]);
    let seq = GeneratingSequence::new(vec![ring.var(0), ring.var(1)]).unwrap();

    let window = (-6, 6);
    let (levels, lag) = (5, 3);
    let rep = weak_proregularity_check(&seq, window, levels, lag).unwrap();

    println!(
        "weak proregularity of (x, y) in Q[x, y], window {}..{}, {} levels, lag {}",
        window.0, window.1, levels, lag
    );
    println!("verdict: {}", rep.verdict.label());

    // for a regular sequence the towers are not just pro-zero but zero
    let mut nonzero_cells = 0;
    for ((i, d), cell) in &rep.cells {
        if cell.level_dims.iter().any(|&n| n > 0) {
            nonzero_cells += 1;
            println!("  H_{} degree {}: dims {:?}", i, d, cell.level_dims);
        }
    }
    println!("cells with any nonzero level: {}", nonzero_cells);

    // an artinian quotient where the towers are nonzero but still pro-zero:
    // in k[x]/(x^2) the H_1 tower is ann(x^n) with transition maps x
    let art = MonomialQuotientRing::new(Field::Q, vec!["x".into()], vec![1], vec![vec![2]]).unwrap();
    let aseq = GeneratingSequence::new(vec![art.var(0)]).unwrap();
    let arep = weak_proregularity_check(&aseq, (-1, 4), 4, 2).unwrap();
    println!("\nweak proregularity of (x) in Q[x]/(x^2)");
    println!("verdict: {}", arep.verdict.label());
    for ((i, d), cell) in &arep.cells {
        if cell.level_dims.iter().any(|&n| n > 0) {
            println!(
                "  H_{} degree {}: dims {:?} ({})",
                i,
                d,
                cell.level_dims,
                cell.verdict.label()
            );
        }
    }
}
