//! Edge paths: structurally gappy streams, high multiplicities, contours
//! grazing zeros, and terminating-family corroboration.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use zeroscope::exact::RationalComplex;
use zeroscope::harness::{classify, corroborate, Classification, CorroborateOptions};
use zeroscope::mp::{Complex, Prec};
use zeroscope::series::{
    make_tail_certificate, radius_of_convergence, CoeffSource, CoefficientStream, RadiusClass,
};
use zeroscope::zeros::{count_zeros_in_disk, localize_zeros, Disk, SeriesFunction};

/// Every odd coefficient zero: the ratio test has no usable pairs and the
/// classifier must fall back to the root test alone.
#[test]
fn gappy_stream_radius_from_root_test() {
    struct EvenOnly;
    impl CoeffSource for EvenOnly {
        fn value(&self, n: usize, prec: Prec) -> Complex {
            self.exact_value(n).unwrap().to_complex(prec)
        }
        fn exact_value(&self, n: usize) -> Option<RationalComplex> {
            if n % 2 == 0 {
                // c_{2m} = 4^{-m} → |c_n|^{1/n} = 1/2 → radius 2
                Some(RationalComplex::from_rational(BigRational::new(
                    1.into(),
                    num_bigint::BigInt::from(4).pow(n as u32 / 2),
                )))
            } else {
                Some(RationalComplex::zero())
            }
        }
    }
    let s = CoefficientStream::new(Box::new(EvenOnly), "even-only", true, Prec(96));
    let prof = radius_of_convergence(&s, 64).unwrap();
    match prof.radius {
        RadiusClass::Finite { value, .. } => {
            assert!((value - 2.0).abs() / 2.0 < 0.05, "radius {value}");
        }
        other => panic!("expected finite, got {other:?}"),
    }
}

/// Quintuple zero at the origin: winding counts 5, localization stalls to a
/// single multiplicity-5 entry.
#[test]
fn quintuple_origin_zero() {
    let p = Prec(224);
    let mut coeffs = vec![RationalComplex::zero(); 5];
    coeffs.push(RationalComplex::from_int(1)); // z^5
    let s = CoefficientStream::from_exact_table(coeffs, "z5", p);
    let cert = make_tail_certificate(&s, 1.0, 32).unwrap();
    let f = SeriesFunction::new(s, cert);
    let count = count_zeros_in_disk(&f, Disk::centered(1.0)).unwrap();
    assert_eq!(count.count, 5);
    let report = localize_zeros(&f, Disk::centered(1.0), 1e-6).unwrap();
    assert_eq!(report.count, 5);
    assert_eq!(report.zeros.len(), 1);
    assert_eq!(report.zeros[0].multiplicity, 5);
    assert!(report.zeros[0].location.to_c64().norm() < 1e-5);
}

/// A root 10⁻⁴ off the contour: adaptive refinement still certifies the
/// circle (or the perturbation policy steps around it).
#[test]
fn root_grazing_the_contour() {
    let p = Prec(192);
    // root at 1 + 1e-4 (exactly 10001/10000), contour radius 1
    let root = RationalComplex::new(BigRational::new(10001.into(), 10000.into()), BigRational::zero());
    let s = CoefficientStream::from_exact_table(
        vec![root.neg(), RationalComplex::from_int(1)],
        "graze",
        p,
    );
    let cert = make_tail_certificate(&s, 1.0, 32).unwrap();
    let f = SeriesFunction::new(s, cert);
    let out = count_zeros_in_disk(&f, Disk::centered(1.0)).unwrap();
    // outside the disk for every radius the retry policy can pick
    assert_eq!(out.count, 0);
    // and a disk that actually contains it
    let out2 = count_zeros_in_disk(&f, Disk::centered(1.01)).unwrap();
    assert_eq!(out2.count, 1);
}

/// Terminating streams corroborate consistently: counts saturate at the
/// polynomial degree.
#[test]
fn terminating_family_corroboration() {
    let p = Prec(192);
    // (z − 1)(z − 2) = 2 − 3z + z²
    let s = CoefficientStream::from_exact_table(
        vec![
            RationalComplex::from_int(2),
            RationalComplex::from_int(-3),
            RationalComplex::from_int(1),
        ],
        "quadratic",
        p,
    );
    let v = classify(&s, 64);
    assert!(matches!(
        v.classification,
        Classification::AppearsTerminating { last_nonzero: Some(2) }
    ));
    let report = corroborate(&s, &v, &[1.5, 3.0, 10.0], &CorroborateOptions::default());
    assert_eq!(report.counts, vec![Some(1), Some(2), Some(2)], "{:?}", report.diagnostics);
    assert!(report.consistent, "{:?}", report.diagnostics);
    // localization at the largest counted radius found both roots
    assert_eq!(report.zeros.len(), 2);
}

/// Zeros straddling a disk that is off-center relative to the origin.
#[test]
fn off_center_pair_isolation() {
    let p = Prec(192);
    // roots at ±2i
    let s = CoefficientStream::from_exact_table(
        vec![
            RationalComplex::from_int(4),
            RationalComplex::zero(),
            RationalComplex::from_int(1),
        ],
        "pm2i",
        p,
    );
    let cert = make_tail_certificate(&s, 1.0, 32).unwrap();
    let f = SeriesFunction::new(s, cert);
    let upper = localize_zeros(&f, Disk::new(Complex64::new(0.0, 2.0), 1.0), 1e-9).unwrap();
    assert_eq!(upper.count, 1);
    assert!((upper.zeros[0].location.to_c64() - Complex64::new(0.0, 2.0)).norm() < 1e-9);
    let both = localize_zeros(&f, Disk::centered(3.0), 1e-9).unwrap();
    assert_eq!(both.count, 2);
    assert_eq!(both.zeros.len(), 2);
}
