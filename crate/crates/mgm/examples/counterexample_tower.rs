//! Refute weak proregularity on the standard counterexample ring
//! k[x_1..x_N, s] / (x_i x_j, s^i x_i).
//!
//! The element s kills each x_i only after i steps, so the H_1 Koszul towers
//! carry classes that survive arbitrarily many transition maps.  The check
//! stores a witness class and its nonzero image as a re-checkable
//! certificate.

use mgm::duality::{h1_pair_witnesses, weak_proregularity_check};
use mgm::linalg::Field;
use mgm::ring::{GeneratingSequence, MonomialQuotientRing};
use mgm::tower::ProZeroVerdict;

fn main() {
    let vars = 6;
    let ring = MonomialQuotientRing::counterexample_ring(Field::Q, vars);
    let s = ring.var_by_name("s").unwrap();
    let seq = GeneratingSequence::new(vec![s]).unwrap();

    let window = (0, 8);
    let (levels, lag) = (5, 2);
    let rep = weak_proregularity_check(&seq, window, levels, lag).unwrap();
    println!(
        "weak proregularity of (s) on the {}-variable counterexample ring",
        vars
    );
    println!("verdict: {}", rep.verdict.label());

    for ((i, d), cell) in &rep.cells {
        if let ProZeroVerdict::NotProZeroInWindow { level, witness, image } = &cell.verdict {
            println!(
                "  H_{} degree {}: class at level {} survives to the top of the window",
                i, d, level
            );
            println!("    witness {:?}", witness.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            println!("    image   {:?}", image.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            break;
        }
    }

    // every pair of levels l < n carries a class that the composite
    // transition (multiplication by s^{n-l}) fails to kill
    let ws = h1_pair_witnesses(&seq, window, levels);
    println!("\nsurviving classes per level pair:");
    for w in &ws {
        println!(
            "  level {} -> level {} in degree {}: image {:?}",
            w.from_level,
            w.to_level,
            w.degree,
            w.image.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        );
    }
    println!("{} of {} pairs refuted", ws.len(), (levels as usize) * (levels as usize - 1) / 2);
}
