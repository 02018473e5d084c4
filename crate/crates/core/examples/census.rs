use stacky::census::{
    band_width, gaussian_power_family, n2_ladder, nm_ladder, ratio_table, DEFAULT_CEILING,
};

fn main() {
    let ts: Vec<u64> = (6..=12).map(|k| 1 << k).collect();
    let rows = ratio_table(&n2_ladder(&ts, DEFAULT_CEILING).unwrap(), 0.5, 3);
    for r in &rows {
        println!("N_2({:>5}) = {:>5}   ratio {:.4}", r.t, r.count, r.ratio);
    }
    println!("band max/min {:.3}", band_width(&rows[2..]).unwrap());
    for m in [3, 4] {
        let recs = nm_ladder(&ts, m, DEFAULT_CEILING).unwrap();
        let fam = gaussian_power_family(4096, m).len();
        println!("m = {m}: N_m(4096) = {}, Gaussian family {fam}", recs.last().unwrap().count);
    }
}
