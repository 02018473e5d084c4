use stacky::curve::StackyCurveP1;
use stacky::vojta::{radical_inequality_report, radical_inequality_rows};

fn main() {
    let curve = StackyCurveP1::standard(2, 3, 7).unwrap();
    for r in radical_inequality_rows(&curve, 4).unwrap().iter().take(8) {
        println!("{:>5}: H_K H_-K = {:>3} <= rad = {:>3}", r.point.to_string(), r.product, r.radical);
    }
    for (a, b, c) in [(2, 2, 2), (2, 3, 7), (3, 3, 3)] {
        let curve = StackyCurveP1::standard(a, b, c).unwrap();
        let r = radical_inequality_report(&curve, 300, 0.1).unwrap();
        println!(
            "({a},{b},{c}): {} points, {} violations, min log rad/log max {:.3} at {}",
            r.points,
            r.violations,
            r.min_log_ratio.unwrap(),
            r.min_log_ratio_point.unwrap()
        );
    }
}
