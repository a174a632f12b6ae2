//! Category-path similarity: positionwise matches over the best pair of
//! padded paths.

use copurchase::features::category_similarity;

fn main() {
    let u = vec![vec![283155u32, 1000, 22, 12290], vec![283155, 1000, 75]];
    let v = vec![vec![283155u32, 1000, 22, 12291], vec![599858, 1000]];
    println!("sim(u, v) = {:?}", category_similarity(&u, &v, 8));
    println!("sim(v, u) = {:?}", category_similarity(&v, &u, 8));
    println!("sim(u, u) = {:?}", category_similarity(&u, &u, 8));
    let none: Vec<Vec<u32>> = Vec::new();
    println!("sim(u, none) = {:?}", category_similarity(&u, &none, 8));
}
