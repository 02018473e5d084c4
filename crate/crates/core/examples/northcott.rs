use num_rational::Rational64;
use stacky::curve::StackyCurveP1;
use stacky::vojta::{conditional_count_table, northcott_gamma_probe};

fn main() {
    let deltas = [Rational64::new(1, 2), Rational64::new(0, 1), Rational64::new(1, 1)];
    let curve = StackyCurveP1::standard(2, 2, 2).unwrap();
    let table = northcott_gamma_probe(&curve, &deltas, 10, &[25, 50, 100, 200, 400]).unwrap();
    for r in &table.rows {
        println!("delta {:>3} B {:>4}: {:>6} {}", r.delta.to_string(), r.b, r.count, if r.exhaustive { "exhaustive" } else { "" });
    }
    println!("stabilized: {}", table.stabilized());
    let five: StackyCurveP1 = "0:2,inf:2,-1:2,1:2,2:2".parse().unwrap();
    for r in conditional_count_table(&five, &[2, 4, 8, 16, 32], 300).unwrap() {
        println!("T {:>3}: {:>5}  /T^(1/2) {:.2}  /T {:.2}", r.t, r.count, r.ratio_n3, r.ratio_n4);
    }
}
