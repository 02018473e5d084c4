use stacky::curve::{transport_bounds, Mobius, StackyCurveP1};

fn main() {
    let curve = StackyCurveP1::standard(2, 3, 7).unwrap();
    let maps = [Mobius::new(2, 1, 1, 1).unwrap(), Mobius::new(3, 1, 0, 2).unwrap(), Mobius::new(1, 0, 0, 4).unwrap()];
    for a in &maps {
        for t in ["3/4", "2", "-5/8"] {
            let r = transport_bounds(&curve, a, &t.parse().unwrap()).unwrap();
            println!(
                "[[{},{}],[{},{}]] at {t} -> {}: rad_m form {}, rad form {}",
                a.a, a.b, a.c, a.d, r.image, r.rad_m_bound_holds(), r.rad_bound_holds()
            );
        }
    }
    let four: StackyCurveP1 = "0:2,inf:2,-1:2,1/2:2".parse().unwrap();
    for t in ["3/4", "7/5", "-100/3"] {
        let q = four.cover_quotient(&[0, 1, 2], &t.parse().unwrap()).unwrap();
        println!("quotient^{} at {t} = {} <= {}: {}", q.power, q.quotient, q.bound, q.holds());
    }
}
