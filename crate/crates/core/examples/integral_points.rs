use stacky::census::{integral_census_222, pythagorean_integral_points};
use stacky::curve::StackyCurveP1;
use stacky::diophantine::is_integral_point;

fn main() {
    let curve = StackyCurveP1::standard(2, 2, 2).unwrap();
    for t in ["9/16", "-9/25", "3/4", "-16/25"] {
        let t = t.parse().unwrap();
        println!("{t}: integral {}", is_integral_point(&curve, &t).unwrap());
    }
    for k in (4..=20).step_by(4) {
        let t = 1u64 << k;
        let c = integral_census_222(t).unwrap().count;
        let o = pythagorean_integral_points(t).len();
        println!("T = {t:>8}: {c:>5} points (triples {o}), count/sqrt T {:.3}", c as f64 / (t as f64).sqrt());
    }
}
