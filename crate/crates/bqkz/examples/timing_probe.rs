use bqkz::homogeneous::{components, Formula};
fn main() {
    let a: Vec<String> = std::env::args().collect();
    let n: usize = a[1].parse().unwrap();
    let f = Formula::from_name(&a[2]).unwrap();
    let t0 = std::time::Instant::now();
    let table = components(n, f).unwrap();
    println!("N={n} {:?}: {} comps in {:?}", f, table.components.len(), t0.elapsed());
}
