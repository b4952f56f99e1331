//! Timing probe for the random-fan certification pipeline.

use std::time::Instant;

use fanfold::classify::random_foldable_fan;
use fanfold::deform::weight_decomposition;
use fanfold::quotient::{build_quotient, singularity_report};

fn main() {
    for base in ["Y2", "Y3", "Y4"] {
        for seed in 0..6u64 {
            let fan = random_foldable_fan(seed, base, 4).unwrap();
            let w = weight_decomposition(&fan);
            let t0 = Instant::now();
            let q = build_quotient(&w).unwrap();
            let t1 = Instant::now();
            let rep = singularity_report(&q, &w).unwrap();
            let t2 = Instant::now();
            println!(
                "{base} seed {seed}: rays {} d {} rank {} cone_rays {} facets {} | build {:?} report {:?} | gor {} term {}",
                fan.ray_count(),
                w.total_dim(),
                q.nprime_rank,
                q.ray_generators.len(),
                q.facets.as_ref().map_or(0, |f| f.len()),
                t1 - t0,
                t2 - t1,
                rep.gorenstein,
                rep.terminal
            );
        }
    }
}
