//! Finite-dimensional coalgebra calculus: cotensor and contratensor
//! products, Cohom, and the contratensor / Cohom adjunction checked on
//! explicit bases.

use mgm::coalg::{
    adjunction_check, cohom, contratensor, cotensor, dual_algebra, FinDimBicomodule,
    FinDimCoalgebra, FinDimComodule, FinDimContramodule,
};
use mgm::linalg::Field;

fn main() {
    let f = Field::Fp(101);

    // the dual of k[t]/(t^3): conilpotent with coradical spanned by e_0
    let d = FinDimCoalgebra::divided_power_dual(f, 3);
    let a = dual_algebra(&d);
    println!("divided power dual of order 3: dim {}, dual algebra dim {}", d.dim, a.dim);

    // cofree comodules and free contramodules satisfy the expected
    // identities under cotensor and contratensor
    let n = FinDimComodule::cofree_right(&d, 2);
    let m = FinDimComodule::cofree_left(&d, 2);
    let p = FinDimContramodule::free(&d, 2);
    println!("N = (V2 (x) D) as a right comodule, dim {}", n.dim);
    println!("cotensor N [] (D (x) V2) = {}", cotensor(&n, &m).unwrap().dim);
    println!("contratensor N (.) Hom(D, V2) = {}", contratensor(&n, &p).unwrap().dim);
    println!("Cohom(D (x) V2, P) = {}", cohom(&m, &p).unwrap().dim);

    // the adjunction Hom_C(K (.) P, M) = Hom^D(P, Hom_C(K, M)), with K a
    // bicomodule over a noncocommutative C and the conilpotent D
    let c = FinDimCoalgebra::upper_triangular_dual(f);
    let k = FinDimBicomodule::cofree(&c, 1, &d);
    let m = FinDimComodule::cofree_left(&c, 2);
    let p = FinDimContramodule::free(&d, 1);
    let rep = adjunction_check(&k, &m, &p).unwrap();
    println!(
        "\nadjunction over (C, D) with dim K = {}: lhs {}, rhs {}, canonical map bijective: {}",
        k.dim, rep.lhs_dim, rep.rhs_dim, rep.canonical_bijective
    );
    println!("ok: {}", rep.ok);
}
