use num_rational::Rational64;
use stacky::curve::{LineBundle, StackyCurveP1};

fn main() {
    let curve: StackyCurveP1 = "0:2,inf:3,-1:7".parse().unwrap();
    println!("curve {curve}, chi = {}", curve.euler_char());
    let bundle = LineBundle::parse("1;1,2,3", &curve).unwrap();
    for t in ["3/4", "-8/9", "5/27", "inf"] {
        let t = t.parse().unwrap();
        let h = curve.height(&bundle, &t).unwrap();
        let anti = curve.anticanonical_height(&t).unwrap();
        let canon = curve.canonical_height(&t).unwrap();
        println!("t = {t}");
        println!("  H_L^{} = {}", h.lcm_power(), h.value());
        println!("  H_-K = {:.4}  H_K = {:.6}", anti.approx(), canon.approx());
        println!("  H_-K == perturbed(chi): {}", anti == curve.perturbed_height(&t, curve.euler_char()).unwrap());
        println!("  H_K H_-K = {}", curve.dual_product(&curve.anticanonical_bundle(), &t).unwrap());
        println!("  perturbed(1/2) ~ {:.4}", curve.perturbed_height(&t, Rational64::new(1, 2)).unwrap().approx());
    }
}
