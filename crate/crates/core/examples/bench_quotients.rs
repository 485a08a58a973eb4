//! Timing probe for the normal-quotient search at census scale.

use atdcensus::fp::{
    normal_quotients_of_index, universal_catalogue, QuotientSearchOptions,
};
use std::time::Instant;

fn main() {
    let m: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(32);
    let s_max: usize = std::env::args()
        .nth(2)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    let cat = universal_catalogue(s_max).unwrap();
    let total = Instant::now();
    for (t, p) in &cat {
        let s = t.s;
        let bound = (1usize << s) * m;
        let start = Instant::now();
        let mut count = 0usize;
        for v in 1..=m {
            let n = (1usize << s) * v;
            if n > bound {
                break;
            }
            let opts = QuotientSearchOptions {
                node_budget: 1_000_000_000,
                shunt: Some((s, v as u64)),
                nontrivial_generators: (0..s).collect(),
            };
            count += normal_quotients_of_index(p, n, &opts).unwrap().len();
        }
        println!(
            "{}: quotients={} elapsed={:.2?}",
            t.name.as_deref().unwrap_or("?"),
            count,
            start.elapsed()
        );
    }
    println!("total: {:.2?}", total.elapsed());
}
