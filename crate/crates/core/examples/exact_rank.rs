//! Rank, kernel and preimages over the rationals.

use gfcohom::linalg::{ratio, rat, rational_to_string};
use gfcohom::SparseMatrix;

fn main() -> gfcohom::Result<()> {
    // A 3x4 matrix of rank 2 whose entries would lose exactness in floating point.
    let m = SparseMatrix::from_dense(&[
        vec![ratio(1, 3), rat(1), rat(0), ratio(-2, 7)],
        vec![ratio(2, 3), rat(2), rat(5), ratio(-4, 7)],
        vec![rat(0), rat(0), rat(5), rat(0)],
    ])?;
    let (rank, stats) = m.rank_with_stats();
    println!("rank {rank}, largest intermediate {} bits", stats.max_bits);
    for v in m.kernel_basis() {
        let v: Vec<String> = v.iter().map(rational_to_string).collect();
        println!("kernel vector [{}]", v.join(", "));
    }
    let b = vec![rat(1), rat(7), rat(5)];
    match m.solve_preimage(&b)? {
        Some(x) => {
            let x: Vec<String> = x.iter().map(rational_to_string).collect();
            println!("m x = (1, 7, 5) for x = [{}]", x.join(", "));
        }
        None => println!("(1, 7, 5) is not in the image"),
    }
    println!("(1, 0, 0) in the image: {}", m.solve_preimage(&[rat(1), rat(0), rat(0)])?.is_some());
    Ok(())
}
