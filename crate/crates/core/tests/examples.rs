//! Every cargo example runs to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[path = $file]
        mod $name;
    };
}

example!(oracles, "../examples/oracles.rs");
example!(exact_counting, "../examples/exact_counting.rs");
example!(sparsification, "../examples/sparsification.rs");
example!(coarse_estimate, "../examples/coarse_estimate.rs");
example!(importance_sampling, "../examples/importance_sampling.rs");
example!(estimate, "../examples/estimate.rs");
example!(query_sweep, "../examples/query_sweep.rs");

#[test]
fn oracles_example() {
    oracles::run_example().unwrap();
}

#[test]
fn exact_counting_example() {
    exact_counting::run_example().unwrap();
}

#[test]
fn sparsification_example() {
    sparsification::run_example().unwrap();
}

#[test]
fn coarse_estimate_example() {
    coarse_estimate::run_example().unwrap();
}

#[test]
fn importance_sampling_example() {
    importance_sampling::run_example().unwrap();
}

#[test]
fn estimate_example() {
    estimate::run_example().unwrap();
}

#[test]
fn query_sweep_example() {
    query_sweep::run_example().unwrap();
}
