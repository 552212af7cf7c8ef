use cdsp_core::cmdeciders::{BiDeg21Params, BiDeg22Params};
use cdsp_core::corpus::{self, Instance};
use cdsp_core::measures::{verify_line_density, verify_moment_integral, weight21_eval, DensitySource, LineDensity};
use cdsp_core::Error;

#[test]
fn bideg21_true_corpus_reproduces_moments() {
    for e in corpus::bideg21_true() {
        let Instance::Bideg21(p) = e.instance else { panic!() };
        let src = DensitySource::Bideg21(p);
        for m in 0..=4 {
            for n in 0..=4 {
                let r = verify_moment_integral(&src, m, n, 1e-6).unwrap();
                assert!(r.passed(1e-6), "{} ({m}, {n}): {r:?}", e.name);
            }
        }
    }
}

#[test]
fn line_densities_of_true_bideg22_corpus() {
    for e in corpus::bideg22_true() {
        let Instance::Bideg22(p) = e.instance else { panic!() };
        for m in 0..4 {
            match LineDensity::new(&p, m) {
                Ok(d) => {
                    for n in 0..=4 {
                        let r = verify_line_density(&d, n, 1e-6).unwrap();
                        assert!(r.passed(1e-6), "{} m = {m}: {r:?}", e.name);
                    }
                }
                Err(Error::DegenerateDensity { .. }) => {}
                Err(err) => panic!("{}: {err}", e.name),
            }
        }
    }
}

// With a1 outside [b1, b2] the kernel argument is positive somewhere and the
// candidate density dips below zero.
#[test]
fn false_instance_density_goes_negative() {
    let p = BiDeg21Params::from_ints([(1, 1), (1, 1), (2, 1), (1, 1), (4, 1)]);
    let mut neg = 0;
    for i in 1..50 {
        for j in 1..50 {
            let (s, t) = (f64::from(i) / 50.0, f64::from(j) / 50.0);
            if let Ok(v) = weight21_eval(&p, s, t) {
                if v < 0.0 {
                    neg += 1;
                }
            }
        }
    }
    assert!(neg > 0);
}

#[test]
fn line_density_requires_real_roots() {
    // b(0)^2 - 4 a(0) = 1 - 8 < 0
    let p = BiDeg22Params::from_ints([(1, 1), (1, 1), (2, 1), (1, 1), (1, 1)]);
    assert!(matches!(LineDensity::new(&p, 0), Err(Error::PreconditionViolated { .. })));
}
