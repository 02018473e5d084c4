use num_rational::BigRational;
use stacky::curve::StackyCurveP1;
use stacky::vojta::{dual_feasible_check, lp_build, point_exponent_vector};

fn main() {
    let eps = BigRational::new(1.into(), 100.into());
    for m in [vec![2, 2, 2], vec![2, 3, 7], vec![2, 2, 2, 2], vec![3, 3, 4, 5]] {
        let d = dual_feasible_check(&lp_build(&m, &eps).unwrap());
        println!("{m:?}: feasible {} tight {} b^T x = {}", d.feasible, d.tight, d.dual_value_coefficient);
    }
    let curve = StackyCurveP1::standard(2, 3, 7).unwrap();
    for t in ["3/4", "1/8", "-27/32", "343/169"] {
        let p = point_exponent_vector(&curve, &t.parse().unwrap()).unwrap();
        println!(
            "{t}: z {:?}  c^T y = {:.4} >= b^T x = {:.4}: {}",
            p.z_vectors(),
            p.primal_value().to_f64(),
            p.dual_value().to_f64(),
            p.weak_duality().unwrap()
        );
    }
}
