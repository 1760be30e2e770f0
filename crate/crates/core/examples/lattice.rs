//! Integer linear algebra behind every multiplicity.

use tropgw::lattice::{lattice_index, smith_normal_form, wedge_index, IntMatrix, IntVec3};

fn main() {
    let a = IntVec3::new(1, 1, 0);
    let b = IntVec3::new(0, 1, 1);
    println!("wedge index of {a} and {b}: {}", wedge_index(a, b));

    let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3);
    let snf = smith_normal_form(&m);
    println!("matrix:\n{m}\nSmith form:\n{}", snf.d);
    println!("index of the column lattice: {}", lattice_index(&m));

    let rank_deficient = IntMatrix::from_rows(&[[1, 2], [2, 4]], 2);
    println!("index of a rank-deficient lattice: {}", lattice_index(&rank_deficient));
}
