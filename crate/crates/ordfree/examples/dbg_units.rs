use ordfree::numberfield::*;
fn main() {
    for m in [5i64, 13, 17, 2, 3] {
        let f = NumberField::quadratic(m).unwrap();
        let u = totally_positive_units(&f, &[0,1], None).unwrap();
        println!("m={} eps={:?} norm={} index={}", m, u.fundamental_units[0], f.norm(&u.fundamental_units[0]), u.index_in_full);
    }
}
