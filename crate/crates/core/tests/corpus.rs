use cdsp_core::cmdeciders::BiDeg22Params;
use cdsp_core::corpus::{self, CorpusOptions, Instance};
use cdsp_core::netcore::{check_complete_monotone, reciprocal_net, CmMode, MultiIndex2};
use cdsp_core::rational;

#[test]
fn frozen_witnesses_reproduce() {
    let opts = CorpusOptions::default();
    let mut entries = corpus::bideg21_false();
    entries.extend(corpus::bideg22_false().into_iter().skip(1));
    for e in &entries {
        let out = corpus::run_entry(e, &opts).unwrap();
        assert!(out.passed, "{out:?}");
    }
}

#[test]
fn true_entries_pass_oracle() {
    let opts = CorpusOptions::default();
    let mut entries = corpus::bideg21_true();
    entries.extend(corpus::bideg22_true());
    for e in &entries {
        let out = corpus::run_entry(e, &opts).unwrap();
        assert!(out.passed, "{out:?}");
    }
}

// The boundary entry has no witness in the standard window; its first
// violation appears at order 18.
#[test]
fn boundary_entry_needs_order_18() {
    let e = &corpus::bideg22_false()[0];
    let out = corpus::run_entry(e, &CorpusOptions::default()).unwrap();
    assert!(!out.passed);
    assert!(out.detail.unwrap().contains("no witness"));

    let Instance::Bideg22(p) = &e.instance else { panic!() };
    assert_eq!(*p, BiDeg22Params::from_ints([(1, 1), (1, 1), (2, 1), (2, 1), (11, 10)]));
    let net = reciprocal_net(|m, n| p.eval_u64(m as u64, n as u64), 20, 20).unwrap();
    let r = check_complete_monotone(&net, 18, CmMode::Joint).unwrap();
    let w = r.witness.unwrap();
    assert_eq!((w.order, w.base), (MultiIndex2::new(0, 18), MultiIndex2::new(2, 0)));
    assert_eq!(rational::format(&w.value), "-11921429013914329/3069108197056621397920");
}
