//! The decision pipeline: classify a coefficient stream by the growth of
//! its factorial-weighted transform, then corroborate the verdict with
//! argument-principle zero counts over growing disks.

use serde::Serialize;

use crate::family::FamilySpec;
use crate::mp::format::to_decimal_string;
use crate::mp::{Complex, Prec, Real};
use crate::series::{
    is_nonterminating_up_to, make_tail_certificate, radius_of_convergence, CoefficientStream,
    GrowthProfile, RadiusClass, TerminationStatus,
};
use crate::special::{principal_sqrt, BesselEvaluator, BesselParams};
use crate::zeros::{
    refine_eval, zero_count_growth, Disk, LocatedZero, SeriesFunction, ZeroReport,
};

/// Classification of a stream under the factorial-weighting criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Classification {
    /// Weighted series entire + coefficients nonterminating to the horizon:
    /// the unweighted sum must have infinitely many zeros.
    GuaranteedInfiniteZeros,
    /// Weighted series has a finite positive radius: the criterion does not
    /// apply, zero-free sums are possible.
    CounterexampleRegime { radius_estimate: f64 },
    /// Weighted series has radius zero.
    RadiusZero,
    /// Coefficients stop appearing before the horizon: the sum is a
    /// polynomial as far as this horizon can tell.
    AppearsTerminating { last_nonzero: Option<usize> },
    /// Radius estimation failed; diagnostics carry the details.
    Indecisive,
}

/// Verdict with the evidence that produced it. The verdict is always
/// horizon-limited: entirety and non-termination are only checkable to
/// n_max.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub classification: Classification,
    pub horizon: usize,
    /// Growth profile of the factorial-weighted stream, when estimable.
    pub weighted_growth: Option<GrowthProfile>,
    pub termination: TerminationStatus,
    pub diagnostics: Vec<String>,
}

/// Classify a stream at horizon n_max.
pub fn classify(s: &CoefficientStream, n_max: usize) -> Verdict {
    assert!(n_max >= 16, "classification needs n_max >= 16");
    let termination = is_nonterminating_up_to(s, n_max);
    let weighted = s.factorial_weight();
    let mut diagnostics = Vec::new();
    let weighted_growth = match radius_of_convergence(&weighted, n_max) {
        Ok(p) => Some(p),
        Err(e) => {
            diagnostics.push(format!("radius estimation: {e}"));
            None
        }
    };
    let classification = match (&termination, &weighted_growth) {
        (TerminationStatus::AppearsTerminating { last_nonzero }, _) => {
            Classification::AppearsTerminating { last_nonzero: *last_nonzero }
        }
        (TerminationStatus::NonterminatingWitness { .. }, Some(p)) => match &p.radius {
            RadiusClass::Infinite => Classification::GuaranteedInfiniteZeros,
            RadiusClass::Finite { value, .. } => {
                Classification::CounterexampleRegime { radius_estimate: *value }
            }
            RadiusClass::Zero => Classification::RadiusZero,
        },
        (TerminationStatus::NonterminatingWitness { .. }, None) => Classification::Indecisive,
    };
    Verdict { classification, horizon: n_max, weighted_growth, termination, diagnostics }
}

/// One localized zero in report form; coordinates are round-trip-safe
/// decimal strings at the working precision.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroEntry {
    pub re: String,
    pub im: String,
    pub err: f64,
    pub mult: usize,
}

impl ZeroEntry {
    pub fn from_zero(z: &LocatedZero) -> ZeroEntry {
        ZeroEntry {
            re: to_decimal_string(&z.location.re),
            im: to_decimal_string(&z.location.im),
            err: z.error_radius,
            mult: z.multiplicity,
        }
    }
}

/// The machine-readable corroboration report.
#[derive(Debug, Clone, Serialize)]
pub struct CorroborationReport {
    pub family: String,
    pub verdict: Verdict,
    pub horizon: usize,
    pub radius_estimate: Option<f64>,
    pub radii: Vec<f64>,
    pub counts: Vec<Option<usize>>,
    pub zeros: Vec<ZeroEntry>,
    pub consistent: bool,
    pub diagnostics: Vec<String>,
}

/// Options for [`corroborate`].
#[derive(Debug, Clone)]
pub struct CorroborateOptions {
    /// Localize zeros at the largest counted radius when the count is in
    /// (0, max_localize]; 0 disables localization.
    pub max_localize: usize,
    pub localize_eps: f64,
}

impl Default for CorroborateOptions {
    fn default() -> Self {
        CorroborateOptions { max_localize: 12, localize_eps: 1e-9 }
    }
}

/// δ for tail certificates: a quarter of the estimated weighted radius in
/// the counterexample regime (capped at 1), 1 otherwise.
pub fn recommended_delta(verdict: &Verdict) -> f64 {
    match &verdict.classification {
        Classification::CounterexampleRegime { radius_estimate } => {
            (radius_estimate / 4.0).min(1.0).max(1e-6)
        }
        _ => 1.0,
    }
}

/// Closed-form zero-count expectations, per built-in family.
fn closed_form_counts(family: &str) -> Option<&'static str> {
    if family.starts_with("counterexample:") {
        // cₙ = 1/(n!Rⁿ) sums to e^{z/R}: no zeros anywhere.
        Some("zero-free")
    } else {
        None
    }
}

/// Run zero counts at each radius and judge consistency with the verdict.
/// Certification and contour failures mark individual radii (null counts)
/// without aborting the sweep.
pub fn corroborate(
    s: &CoefficientStream,
    verdict: &Verdict,
    radii: &[f64],
    opts: &CorroborateOptions,
) -> CorroborationReport {
    assert!(radii.windows(2).all(|w| w[0] < w[1]), "radii must strictly increase");
    let mut diagnostics = verdict.diagnostics.clone();
    let family = s.label().to_string();
    let radius_estimate =
        verdict.weighted_growth.as_ref().and_then(|p| p.radius.finite_value());

    // The unweighted sum is entire whenever the weighted radius is positive;
    // for RadiusZero verdicts counting is only meaningful strictly inside
    // the unweighted disk of convergence.
    let unweighted_limit: Option<f64> = match &verdict.classification {
        Classification::RadiusZero | Classification::Indecisive => {
            match radius_of_convergence(s, verdict.horizon) {
                Ok(p) => match p.radius {
                    RadiusClass::Infinite => None,
                    RadiusClass::Finite { value, .. } => Some(0.9 * value),
                    RadiusClass::Zero => Some(0.0),
                },
                Err(_) => Some(0.0),
            }
        }
        _ => None,
    };

    let delta = recommended_delta(verdict);
    let cert = match make_tail_certificate(s, delta, verdict.horizon.max(64)) {
        Ok(c) => c,
        Err(e) => {
            diagnostics.push(format!("tail certificate (delta={delta}): {e}"));
            return CorroborationReport {
                family,
                verdict: verdict.clone(),
                horizon: verdict.horizon,
                radius_estimate,
                radii: radii.to_vec(),
                counts: vec![None; radii.len()],
                zeros: Vec::new(),
                consistent: matches!(
                    verdict.classification,
                    Classification::RadiusZero | Classification::Indecisive
                ),
                diagnostics,
            };
        }
    };
    if !cert.is_rigorous() {
        diagnostics.push("tail certificate is heuristic (late maximum)".to_string());
    }
    diagnostics.push(format!("tail certificate delta={delta}"));
    let f = SeriesFunction::new(s.clone(), cert);

    let allowed: Vec<f64> = radii
        .iter()
        .copied()
        .filter(|r| unweighted_limit.map(|lim| *r < lim).unwrap_or(true))
        .collect();
    let results = zero_count_growth(&f, &allowed);
    let mut counts: Vec<Option<usize>> = Vec::with_capacity(radii.len());
    {
        let mut it = allowed.iter().zip(results.into_iter()).peekable();
        for &r in radii {
            match it.peek() {
                Some((ar, _)) if **ar == r => {
                    let (_, res) = it.next().unwrap();
                    match res {
                        Ok(c) => counts.push(Some(c.count)),
                        Err(e) => {
                            diagnostics.push(format!("radius {r}: {e}"));
                            counts.push(None);
                        }
                    }
                }
                _ => {
                    diagnostics.push(format!(
                        "radius {r}: outside the unweighted convergence disk; skipped"
                    ));
                    counts.push(None);
                }
            }
        }
    }

    // Consistency.
    let known: Vec<(f64, usize)> = radii
        .iter()
        .zip(counts.iter())
        .filter_map(|(r, c)| c.map(|c| (*r, c)))
        .collect();
    let monotone = known.windows(2).all(|w| w[0].1 <= w[1].1);
    if !monotone {
        diagnostics.push("zero counts decreased with radius".to_string());
    }
    let mut consistent = monotone;
    match &verdict.classification {
        Classification::GuaranteedInfiniteZeros => {
            let strictly_somewhere = known.windows(2).any(|w| w[1].1 > w[0].1);
            if !(strictly_somewhere && known.len() >= 2) {
                consistent = false;
                diagnostics.push(
                    "expected a strictly increasing zero count somewhere along the radii".into(),
                );
            }
        }
        Classification::CounterexampleRegime { .. } => {
            if closed_form_counts(&family) == Some("zero-free") {
                let all_zero = known.iter().all(|(_, c)| *c == 0);
                if !all_zero {
                    consistent = false;
                    diagnostics.push("closed form is zero-free but counts are nonzero".into());
                } else {
                    diagnostics.push("closed-form check: zero-free, counts all zero".into());
                }
            }
        }
        Classification::AppearsTerminating { last_nonzero } => {
            let bound = last_nonzero.unwrap_or(0);
            if !known.iter().all(|(_, c)| *c <= bound) {
                consistent = false;
                diagnostics.push(format!(
                    "terminating stream of degree {bound} cannot have more than {bound} zeros"
                ));
            }
        }
        Classification::RadiusZero | Classification::Indecisive => {}
    }

    // Localize at the largest radius with a small positive count.
    let mut zeros = Vec::new();
    if opts.max_localize > 0 {
        let target = radii
            .iter()
            .zip(counts.iter())
            .filter_map(|(r, c)| c.map(|c| (*r, c)))
            .filter(|(_, c)| *c > 0 && *c <= opts.max_localize)
            .last();
        if let Some((r, _)) = target {
            match crate::zeros::localize_zeros(&f, Disk::centered(r), opts.localize_eps) {
                Ok(rep) => {
                    zeros = rep.zeros.iter().map(ZeroEntry::from_zero).collect();
                    diagnostics.extend(rep.diagnostics);
                }
                Err(e) => diagnostics.push(format!("localization at radius {r}: {e}")),
            }
        }
    }

    CorroborationReport {
        family,
        verdict: verdict.clone(),
        horizon: verdict.horizon,
        radius_estimate,
        radii: radii.to_vec(),
        counts,
        zeros,
        consistent,
        diagnostics,
    }
}

/// A Bessel zero transferred from the reduced series by the principal
/// square root.
#[derive(Debug, Clone, Serialize)]
pub struct TransferredZero {
    pub re: String,
    pub im: String,
    /// |J_α| at the transferred point.
    pub residual: f64,
    /// 10× the propagated error bound the residual is checked against.
    pub bound: f64,
    pub verified: bool,
    /// Zero of g on the negative real axis with non-integer α: the
    /// principal branch is not verified there.
    pub on_branch_cut: bool,
}

/// Transfer localized zeros w of the reduced series g to candidate Bessel
/// zeros √w and verify |J_α(√w)| against the propagated bound.
pub fn bessel_zero_transfer(
    params: &BesselParams,
    report: &ZeroReport,
    prec: Prec,
) -> Result<Vec<TransferredZero>, crate::special::BesselError> {
    let ev = BesselEvaluator::new(*params, prec)?;
    let g_deriv =
        SeriesFunction::new(ev.reduced_stream().clone(), ev.certificate().clone()).derivative();
    let alpha_integer = params.alpha.fract() == 0.0;
    let mut out = Vec::with_capacity(report.zeros.len());
    for z in &report.zeros {
        let w = &z.location;
        let wz = w.to_c64();
        let on_cut = !alpha_integer && wz.re < 0.0 && wz.im.abs() <= z.error_radius.max(1e-300);
        let root = principal_sqrt(w);
        if on_cut {
            out.push(TransferredZero {
                re: to_decimal_string(&root.re),
                im: to_decimal_string(&root.im),
                residual: f64::NAN,
                bound: f64::NAN,
                verified: false,
                on_branch_cut: true,
            });
            continue;
        }
        let j = ev.eval(&root, 1e-30)?;
        let residual = j.value.abs().to_f64_clamped();
        // Propagate the w-localization error: the root moves by about
        // err_w/(2|√w|), and J moves by |(z/2)^α|·|g'(w)|·(2|√w|)·that.
        let root_abs = root.abs().to_f64_clamped().max(1e-30);
        let root_shift = z.error_radius / (2.0 * root_abs);
        let gp = refine_eval(&g_deriv, w, 1.0, 8)
            .ok()
            .flatten()
            .map(|d| d.value.abs().to_f64_clamped() + d.error_bound)
            .unwrap_or(1.0);
        let half_pow = {
            let half = Complex::new(root.re.mul_pow2(-1), root.im.mul_pow2(-1));
            half.pow_real(&Real::from_f64(params.alpha, prec)).abs().to_f64_clamped()
        };
        let propagated = j.error_bound + half_pow * gp * root_shift * 2.0 * root_abs;
        let bound = 10.0 * propagated.max(f64::MIN_POSITIVE);
        out.push(TransferredZero {
            re: to_decimal_string(&root.re),
            im: to_decimal_string(&root.im),
            residual,
            bound,
            verified: residual <= bound,
            on_branch_cut: false,
        });
    }
    Ok(out)
}

/// Default radii for a family specifier (fixed constants per family).
pub fn default_radii(spec: &FamilySpec) -> Vec<f64> {
    spec.default_radii()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalComplex;
    use crate::family::FamilySpec;
    use crate::special::{le_roy_coeffs, LeRoyParams};
    use num_rational::BigRational;

    #[test]
    fn classify_le_roy_two_guarantees_zeros() {
        let p = Prec(160);
        let s = le_roy_coeffs(&LeRoyParams::real(2), p);
        let v = classify(&s, 128);
        assert_eq!(v.classification, Classification::GuaranteedInfiniteZeros);
        assert!(matches!(v.termination, TerminationStatus::NonterminatingWitness { .. }));
    }

    #[test]
    fn classify_counterexample_estimates_radius() {
        let p = Prec(160);
        for r in [0.5f64, 1.0, 3.0] {
            let rq = BigRational::new(
                ((r * 2.0) as i64).into(),
                2.into(),
            );
            let s = crate::special::counterexample_coeffs(&rq, p);
            let v = classify(&s, 128);
            match v.classification {
                Classification::CounterexampleRegime { radius_estimate } => {
                    assert!(
                        (radius_estimate - r).abs() / r < 0.02,
                        "R={r} estimate={radius_estimate}"
                    );
                }
                other => panic!("R={r}: {other:?}"),
            }
        }
    }

    #[test]
    fn classify_terminating_short_circuits() {
        let p = Prec(96);
        let s = crate::series::CoefficientStream::from_exact_table(
            vec![RationalComplex::from_int(1), RationalComplex::from_int(-2)],
            "poly",
            p,
        );
        let v = classify(&s, 64);
        assert_eq!(
            v.classification,
            Classification::AppearsTerminating { last_nonzero: Some(1) }
        );
    }

    #[test]
    fn classification_stable_across_horizons() {
        let p = Prec(160);
        let families: Vec<crate::series::CoefficientStream> = vec![
            le_roy_coeffs(&LeRoyParams::real(2), p),
            le_roy_coeffs(&LeRoyParams::new(RationalComplex::from_ratio(3, 2)), p),
            crate::special::counterexample_coeffs(&BigRational::from_integer(1.into()), p),
            crate::special::bessel_reduced_coeffs(&crate::special::BesselParams::new(0.0), p),
            crate::special::bessel_reduced_coeffs(&crate::special::BesselParams::new(-1.0), p),
        ];
        for s in families {
            let v64 = classify(&s, 64);
            let v256 = classify(&s, 256);
            let same = match (&v64.classification, &v256.classification) {
                (
                    Classification::CounterexampleRegime { radius_estimate: a },
                    Classification::CounterexampleRegime { radius_estimate: b },
                ) => (a - b).abs() <= 0.02 * a.max(*b),
                (a, b) => a == b,
            };
            assert!(same, "{}: {:?} vs {:?}", s.label(), v64.classification, v256.classification);
        }
    }

    #[test]
    fn corroborate_counterexample_is_zero_free_consistent() {
        let p = Prec(192);
        let s = crate::special::counterexample_coeffs(&BigRational::from_integer(1.into()), p);
        let v = classify(&s, 128);
        let report = corroborate(&s, &v, &[1.0, 10.0, 50.0], &CorroborateOptions::default());
        assert!(report.consistent, "{:?}", report.diagnostics);
        assert_eq!(report.counts, vec![Some(0), Some(0), Some(0)]);
        assert!(report.zeros.is_empty());
    }

    #[test]
    fn corroborate_le_roy_two_counts_increase() {
        let p = Prec(256);
        let s = le_roy_coeffs(&LeRoyParams::real(2), p);
        let v = classify(&s, 128);
        let report = corroborate(&s, &v, &[2.0, 10.0, 20.0], &CorroborateOptions::default());
        assert_eq!(report.counts, vec![Some(1), Some(2), Some(3)], "{:?}", report.diagnostics);
        assert!(report.consistent);
        // localized zeros at radius 20 are the three negative-real roots
        assert_eq!(report.zeros.len(), 3);
        for z in &report.zeros {
            let re: f64 = crate::mp::format::parse_decimal(&z.re, Prec(64)).unwrap().to_f64();
            assert!(re < 0.0);
        }
    }

    #[test]
    fn default_radii_follow_family() {
        let spec = FamilySpec::parse("leroy:r=2").unwrap();
        assert_eq!(default_radii(&spec), vec![2.0, 10.0, 20.0]);
        let b = FamilySpec::parse("bessel:alpha=0").unwrap();
        assert_eq!(default_radii(&b), vec![10.0, 40.0, 100.0]);
    }
}
