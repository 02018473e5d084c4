use stacky::vojta::{abc_scan, top};

fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let hits = abc_scan(n).unwrap();
    println!("{} hits with c <= {n}", hits.len());
    for t in top(&hits, 15) {
        println!("{:>8} + {:>8} = {:>8}  rad {:>8}  q {:.4}", t.a, t.b, t.c, t.radical, t.quality);
    }
}
