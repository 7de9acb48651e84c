//! Prints depth ratios for grid Dicke circuits.
use dicke::synth::synth_grid;

fn main() {
    for n1 in [1usize, 2, 4, 8, 16] {
        for n2 in [2usize, 4, 8, 16, 32, 64] {
            if n1 > n2 {
                continue;
            }
            let n = n1 * n2;
            for k in [1usize, 2, 4, 8, 16, 32] {
                if 2 * k > n {
                    continue;
                }
                let (c, _) = synth_grid::<f64>(n1, n2, k).unwrap();
                let d = c.depth() as f64;
                let case1 = k * n1 >= n2;
                let bound = if case1 { k as f64 * (n as f64 / k as f64).log2() + n2 as f64 } else { n2 as f64 };
                println!("{n1}x{n2} k={k} case{} depth={d} ratio={:.2}", if case1 { 1 } else { 2 }, d / bound);
            }
        }
    }
}
