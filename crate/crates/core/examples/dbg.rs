use hermpair::matlin::*;
use hermpair::forms::*;
fn main() {
    let t = Tolerances::default_for(3);
    let h2 = block_h(2, cx(0.6, 0.0));
    let one = CMatrix::identity(1,1) * cx(1.5, 0.0);
    let a = -direct_sum(&[h2, one]);
    match form1(&a, &t) { Ok(f) => println!("blocks: {:?}", f.blocks), Err(e) => println!("ERR: {e}") }
}
