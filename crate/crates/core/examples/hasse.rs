use stacky::curve::StackyCurveP1;
use stacky::diophantine::{hasse_form, hasse_integral_check, integral_box_search};

fn main() {
    println!("{}", hasse_form([(0, 1), (1, 0), (1, -1)]).unwrap());
    for desc in ["0:2,inf:2,-1:2", "0:2,inf:2,3:2", "1/5:2,inf:2,-2/5:2", "1:2,-2/5:2,-6:2"] {
        let curve: StackyCurveP1 = desc.parse().unwrap();
        let r = hasse_integral_check(&curve).unwrap();
        let found = integral_box_search(&curve, 2000).unwrap();
        println!("{desc}");
        println!("  form {:?} soluble {} witness {:?}", r.form, r.soluble, r.witness);
        println!("  integral point {:?}, box search {} points", r.integral_point, found.len());
    }
}
