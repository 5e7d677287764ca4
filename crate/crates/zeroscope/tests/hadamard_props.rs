//! Cross-module properties of the exact derivative-identity machinery.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zeroscope::exact::RationalComplex;
use zeroscope::hadamard::{q_polynomial, random_model, tail_radius};
use zeroscope::mp::{Complex, Prec};
use zeroscope::series::{radius_of_convergence, CoeffSource, CoefficientStream, RadiusClass};
use zeroscope::special::exp_poly_stream;

/// Stream with coefficients Q(n)·kⁿ built straight from an exact model.
struct QkStream {
    q: zeroscope::hadamard::QPolynomial,
    k: RationalComplex,
}

impl CoeffSource for QkStream {
    fn value(&self, n: usize, prec: Prec) -> Complex {
        self.exact_value(n).unwrap().to_complex(prec)
    }
    fn exact_value(&self, n: usize) -> Option<RationalComplex> {
        Some(self.q.eval_falling(n as i64).mul(&self.k.pow(n as i64)))
    }
}

#[test]
fn tail_radius_matches_numeric_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xABCD);
    let p = Prec(96);
    let mut done = 0;
    while done < 50 {
        let model = random_model(&mut rng, 6);
        let q = q_polynomial(&model);
        let want = tail_radius(&q, model.k());
        // keep the numeric window inside f64-friendly magnitudes
        if !(1e-3..=1e3).contains(&want) {
            continue;
        }
        done += 1;
        let s = CoefficientStream::new(
            Box::new(QkStream { q, k: model.k().clone() }),
            "Qk",
            true,
            p,
        );
        let prof = radius_of_convergence(&s, 256).unwrap();
        match prof.radius {
            RadiusClass::Finite { value, .. } => {
                assert!(
                    (value - want).abs() / want < 0.02,
                    "deg={} k={:?}: want {want}, got {value}",
                    model.degree(),
                    model.k()
                );
            }
            other => panic!("expected finite radius, got {other:?} (want {want})"),
        }
    }
}

/// Σ Q(n)(kz)ⁿ diverges past the tail radius: partial sums blow through
/// 10⁶ by n = 200 at |z| = 1.1/|k| for almost every phase.
#[test]
fn divergence_witness_past_tail_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let p = Prec(160);
    let mut hits = 0usize;
    let trials = 50usize;
    for _ in 0..trials {
        let model = random_model(&mut rng, 6);
        let q = q_polynomial(&model);
        let k_abs = model.k().abs_real(p);
        let radius = Complex::one(p).abs().div(&k_abs); // 1/|k|
        let r_out = radius.mul(&zeroscope::Real::from_f64(1.1, p));
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let z = Complex::from_f64(
            phase.cos(), phase.sin(), p,
        );
        let z = Complex::new(z.re.mul(&r_out), z.im.mul(&r_out));
        let kz = model.k().to_complex(p).mul(&z);
        let mut partial = Complex::zero(p);
        let mut pow = Complex::one(p);
        let mut max_log2: f64 = f64::NEG_INFINITY;
        for n in 0..=200i64 {
            if n > 0 {
                pow = pow.mul(&kz);
            }
            let qn = q.eval_falling(n).to_complex(p);
            partial = partial.add(&qn.mul(&pow));
            if let Some(l) = partial.norm_sqr().log2_abs() {
                max_log2 = max_log2.max(l / 2.0);
            }
        }
        if max_log2 > 6.0 * std::f64::consts::LOG2_10 {
            hits += 1;
        }
    }
    assert!(hits >= 45, "only {hits}/{trials} witnesses reached 1e6");
}

/// Weighted exp-poly coefficients reproduce kⁿ·Q(n) above the degree —
/// the stream and the exact machinery agree through independent routes.
#[test]
fn exp_poly_stream_matches_q_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let p = Prec(128);
    for _ in 0..25 {
        let model = random_model(&mut rng, 5);
        let s = exp_poly_stream(&model, p);
        let weighted = s.factorial_weight();
        let q = q_polynomial(&model);
        let n0 = model.degree() + 1;
        for n in n0..n0 + 12 {
            let lhs = weighted.coeff_exact(n).unwrap();
            let rhs = model.k().pow(n as i64).mul(&q.eval_falling(n as i64));
            assert_eq!(lhs, rhs, "n={n} deg={}", model.degree());
        }
    }
}

/// Degree law: deg Q = deg P for random models, exactly.
#[test]
fn degree_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for _ in 0..100 {
        let model = random_model(&mut rng, 6);
        assert_eq!(q_polynomial(&model).degree(), model.degree());
    }
}

/// The falling-factorial and monomial forms agree on 0..2N+2 (and further).
#[test]
fn basis_conversion_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    for _ in 0..50 {
        let model = random_model(&mut rng, 6);
        let q = q_polynomial(&model);
        let n = q.degree() as i64;
        for t in -(n + 1)..=(2 * n + 2) {
            assert_eq!(q.eval_falling(t), q.monomial().eval_int(t));
        }
    }
}

/// A terminating-but-long table round-trips the coefficient file format.
#[test]
fn exp_poly_stream_survives_file_round_trip() {
    let p = Prec(96);
    let model = zeroscope::special::ExpPolyModel::new(
        RationalComplex::from_ratio(3, 2),
        zeroscope::exact::Polynomial::new(vec![
            RationalComplex::from_int(-1),
            RationalComplex::new(BigRational::new(BigInt::from(1), BigInt::from(3)), BigRational::new(BigInt::from(2), BigInt::from(7))),
        ]),
    )
    .unwrap();
    let s = exp_poly_stream(&model, p);
    let mut buf = Vec::new();
    zeroscope::series::write_coefficient_file(&s, 40, &mut buf).unwrap();
    let dir = std::env::temp_dir().join("zeroscope-hadamard-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exppoly.jsonl");
    std::fs::write(&path, &buf).unwrap();
    let back = zeroscope::series::read_coefficient_file(&path, p).unwrap();
    for n in 0..=40 {
        assert_eq!(back.coeff_exact(n).unwrap(), s.coeff_exact(n).unwrap(), "n={n}");
    }
}
