use qshelf_core::verify::{run, Suite, SuiteConfig};

fn small(suite: Suite) -> SuiteConfig {
    let mut cfg = SuiteConfig::defaults(suite, 24, 16);
    cfg.ks.truncate(2);
    cfg.j_max = cfg.j_max.min(3);
    cfg.start_max = cfg.start_max.min(1);
    cfg
}

#[test]
fn every_suite_passes_at_small_scale() {
    for suite in Suite::ALL {
        let report = run(suite, &small(suite));
        assert!(report.pass, "{suite}: {:?}", report.first_failure());
        assert!(report.comparisons > 0, "{suite} compared nothing");
    }
}

#[test]
fn injected_fault_is_reported_at_its_exponent() {
    for suite in Suite::ALL {
        // a lower bound on divisibility is only falsified below the threshold
        let exponent = if suite == Suite::Eh { 0 } else { 3 };
        let mut cfg = small(suite);
        cfg.fault = Some(exponent);
        let report = run(suite, &cfg);
        assert!(!report.pass, "{suite} missed the fault");
        assert_eq!(report.first_failure().unwrap().exponent, exponent, "{suite}");
    }
}

#[test]
fn report_is_independent_of_thread_count() {
    let cfg = small(Suite::Recursion);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| serde_json::to_string(&run(Suite::Recursion, &cfg)).unwrap());
    let b = four.install(|| serde_json::to_string(&run(Suite::Recursion, &cfg)).unwrap());
    assert_eq!(a, b);
}
