use stacky::diophantine::{
    f_s_indicator, holzer_search, legendre_solvable, s_x_sum, TernaryDiagonalForm, SEARCH_CEILING,
};

fn main() {
    for (a, b, c) in [(1, 1, 2), (1, 1, 3), (3, 5, 7), (2, 3, 5), (5, 7, 11)] {
        let f = TernaryDiagonalForm::new(a, b, -c).unwrap();
        let w = holzer_search(&f, SEARCH_CEILING).unwrap();
        println!(
            "{f}: f_S = {}, Legendre {}, witness {:?}",
            f_s_indicator(a as u64, b as u64, c as u64).unwrap(),
            legendre_solvable(&f).unwrap(),
            w.map(|w| w.original)
        );
    }
    for x in [10, 100, 1000] {
        let s = s_x_sum(x).unwrap();
        println!("S({x}) ~ {:.4}", stacky::diophantine::approx(&s));
    }
}
