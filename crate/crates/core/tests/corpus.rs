use odeinv::compare::{check_weights, corpus, fixed_examples, fixed_maps, random_affine, verify_identities, CheckOptions};
use odeinv::report::IdentityReport;
use odeinv::sample::Sampler;

fn failures(r: &[IdentityReport]) -> Vec<&IdentityReport> {
    r.iter().filter(|r| !r.passed()).collect()
}

#[test]
fn identity_suite_on_random_corpus() {
    let opts = CheckOptions::default();
    for e in corpus(0, 4, 2) {
        let r = verify_identities(&e.ode, &opts);
        assert!(failures(&r).is_empty(), "{}: {:#?}", e.name, failures(&r));
    }
}

#[test]
fn weights_under_affine_maps() {
    let opts = CheckOptions { points: 10, ..Default::default() };
    let mut sampler = Sampler::new(1);
    for e in corpus(2, 3, 2) {
        let t = random_affine(&mut sampler);
        let r = check_weights(&e.ode, &t, &opts).unwrap();
        assert!(failures(&r).is_empty(), "{}: {:#?}", e.name, failures(&r));
    }
}

#[test]
fn weights_under_nonlinear_maps() {
    let opts = CheckOptions { points: 10, ..Default::default() };
    for e in fixed_examples().into_iter().chain(corpus(3, 2, 1)) {
        for (name, t) in fixed_maps() {
            let r = check_weights(&e.ode, &t, &opts).unwrap();
            assert!(failures(&r).is_empty(), "{} under {name}: {:#?}", e.name, failures(&r));
        }
    }
}
