use std::time::Instant;
use homreduce::pipeline::{verify_pipeline, PipelineConfig};
use homreduce::random::{random_graph, RandomSpec};

fn main() {
    for n in [5u32, 6, 7, 8] {
        for seed in 0..3u64 {
            let g = random_graph(&RandomSpec { n, max_deg: 4, seed: 7000 + seed }).unwrap();
            let config = PipelineConfig::relaxed(1, g.n() as u64, 4);
            let t = Instant::now();
            let report = verify_pipeline(&g, &config);
            eprintln!(
                "n={n} seed={seed}: verdict={:?} hom_sizes={:?} in {:?}",
                report.verdict, report.hom_sizes, t.elapsed()
            );
        }
    }
}
