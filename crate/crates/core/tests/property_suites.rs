use nse_symmetry::properties::run_all;

#[test]
fn suites_pass_across_seeds() {
    for seed in [1, 2, 3] {
        for o in run_all(seed) {
            assert!(o.ok, "seed {seed}, {}: {:?}", o.name, o.failures);
        }
    }
}

#[test]
fn same_seed_same_outcomes() {
    let a: Vec<(String, usize)> = run_all(5).into_iter().map(|o| (o.name, o.passed)).collect();
    let b: Vec<(String, usize)> = run_all(5).into_iter().map(|o| (o.name, o.passed)).collect();
    assert_eq!(a, b);
}
