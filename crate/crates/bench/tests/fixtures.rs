use lossnet_bench::{uniform_params, window};

#[test]
fn fixtures_are_valid() {
    let p = uniform_params(0.5, 2);
    assert_eq!(p.capacity(), 2);
    assert_eq!(window(10.0).len(), 10.0);
}
