use stacky::arith::{factor, phi_m, power_free_decompose, r_m, rad_m};

fn main() {
    for n in [12u64, 72, 1000, 6436343, 999_999_999_989] {
        println!("{n} = {}", factor(n as i64).unwrap());
        for m in [2, 3, 5] {
            let d = power_free_decompose(n as i64, m).unwrap();
            println!(
                "  m={m}: phi={} r={} rad_m={} z={:?}",
                phi_m(n, m).unwrap(),
                r_m(n, m).unwrap(),
                rad_m(n, m).unwrap(),
                d.parts
            );
        }
    }
}
