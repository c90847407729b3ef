use permvec::analysis::analyze_embeddings;
use permvec::config::RunConfig;
use permvec::dataset::generate_dataset;
use permvec::rng::Rng;
use permvec::training::train_enhanced;
use std::time::Instant;

#[test]
#[ignore]
fn probe_alpha1_16k() {
    let cfg = RunConfig::desk();
    let splits = generate_dataset(&cfg.data, &mut Rng::new(cfg.data.seed)).unwrap();
    for (steps, seed) in [(16_000usize, 42u64), (16_000, 7)] {
        let mut tc = cfg.train.clone();
        tc.alpha = Some(1.0);
        tc.steps = steps;
        tc.seed = seed;
        tc.steady_window = (steps / 2, steps); // stats late in the run
        let t = Instant::now();
        let (p, _log) = train_enhanced(&splits, &cfg.model, &tc).unwrap();
        let (an, _) = analyze_embeddings(&p, &splits).unwrap();
        println!(
            "steps {steps} seed {seed}: {:.0}s, r95 = {:.4}, eps = {:.4}",
            t.elapsed().as_secs_f64(), an.r95.value, an.epsilon
        );
    }
}
