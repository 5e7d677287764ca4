//! Family specifier strings: the CLI-facing way to name a coefficient
//! stream. Grammar:
//!
//! * `leroy:r=<complex>` — Le Roy stream 1/(n!)^r
//! * `bessel:alpha=<real>` — reduced Bessel stream
//! * `counterexample:R=<positive rational>` — cₙ = 1/(n!·Rⁿ)
//! * `exppoly:k=<complex>;P=<a0,a1,...>` — Maclaurin stream of e^{kz}P(z)
//! * `file:<path>` — exact JSONL coefficient file
//!
//! Scalars accept decimals or p/q rationals, complex values `a+bi`.

use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::Signed;

use crate::exact::{parse_rational, parse_rational_complex, Polynomial, RationalComplex};
use crate::mp::Prec;
use crate::series::{read_coefficient_file, CoefficientStream};
use crate::special::{
    bessel_reduced_coeffs, counterexample_coeffs, exp_poly_stream, le_roy_coeffs, BesselParams,
    ExpPolyModel, LeRoyParams,
};

#[derive(Debug, Clone)]
pub enum FamilySpec {
    LeRoy { r: RationalComplex },
    Bessel { alpha: f64 },
    Counterexample { r: BigRational },
    ExpPoly { k: RationalComplex, coeffs: Vec<RationalComplex> },
    File { path: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error("unknown family {0:?}; expected leroy:, bessel:, counterexample:, exppoly:, file:")]
    UnknownFamily(String),
    #[error("{family}: {msg}")]
    BadParameter { family: &'static str, msg: String },
    #[error(transparent)]
    File(#[from] crate::series::FileError),
    #[error(transparent)]
    Model(#[from] crate::special::ModelError),
}

fn expect_key<'a>(
    family: &'static str,
    part: &'a str,
    key: &str,
) -> Result<&'a str, FamilyError> {
    let prefix = format!("{key}=");
    part.strip_prefix(&prefix).ok_or_else(|| FamilyError::BadParameter {
        family,
        msg: format!("expected {key}=<value>, got {part:?}"),
    })
}

impl FamilySpec {
    pub fn parse(s: &str) -> Result<FamilySpec, FamilyError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("leroy:") {
            let v = expect_key("leroy", rest, "r")?;
            let r = parse_rational_complex(v).ok_or_else(|| FamilyError::BadParameter {
                family: "leroy",
                msg: format!("cannot parse r from {v:?}"),
            })?;
            return Ok(FamilySpec::LeRoy { r });
        }
        if let Some(rest) = s.strip_prefix("bessel:") {
            let v = expect_key("bessel", rest, "alpha")?;
            let alpha: f64 = v.parse().map_err(|_| FamilyError::BadParameter {
                family: "bessel",
                msg: format!("cannot parse alpha from {v:?}"),
            })?;
            if !alpha.is_finite() {
                return Err(FamilyError::BadParameter {
                    family: "bessel",
                    msg: "alpha must be finite".into(),
                });
            }
            return Ok(FamilySpec::Bessel { alpha });
        }
        if let Some(rest) = s.strip_prefix("counterexample:") {
            let v = expect_key("counterexample", rest, "R")?;
            let r = parse_rational(v).ok_or_else(|| FamilyError::BadParameter {
                family: "counterexample",
                msg: format!("cannot parse R from {v:?}"),
            })?;
            if !r.is_positive() {
                return Err(FamilyError::BadParameter {
                    family: "counterexample",
                    msg: "R must be positive".into(),
                });
            }
            return Ok(FamilySpec::Counterexample { r });
        }
        if let Some(rest) = s.strip_prefix("exppoly:") {
            let mut k = None;
            let mut coeffs = None;
            for part in rest.split(';') {
                if let Some(v) = part.strip_prefix("k=") {
                    k = Some(parse_rational_complex(v).ok_or_else(|| {
                        FamilyError::BadParameter {
                            family: "exppoly",
                            msg: format!("cannot parse k from {v:?}"),
                        }
                    })?);
                } else if let Some(v) = part.strip_prefix("P=") {
                    let mut list = Vec::new();
                    for item in v.split(',') {
                        list.push(parse_rational_complex(item).ok_or_else(|| {
                            FamilyError::BadParameter {
                                family: "exppoly",
                                msg: format!("cannot parse coefficient {item:?}"),
                            }
                        })?);
                    }
                    coeffs = Some(list);
                } else {
                    return Err(FamilyError::BadParameter {
                        family: "exppoly",
                        msg: format!("unknown field {part:?}"),
                    });
                }
            }
            let k = k.ok_or(FamilyError::BadParameter { family: "exppoly", msg: "missing k=".into() })?;
            let coeffs = coeffs
                .ok_or(FamilyError::BadParameter { family: "exppoly", msg: "missing P=".into() })?;
            return Ok(FamilySpec::ExpPoly { k, coeffs });
        }
        if let Some(rest) = s.strip_prefix("file:") {
            return Ok(FamilySpec::File { path: PathBuf::from(rest) });
        }
        Err(FamilyError::UnknownFamily(s.to_string()))
    }

    /// Instantiate the stream at a working precision.
    pub fn stream(&self, prec: Prec) -> Result<CoefficientStream, FamilyError> {
        match self {
            FamilySpec::LeRoy { r } => Ok(le_roy_coeffs(&LeRoyParams::new(r.clone()), prec)),
            FamilySpec::Bessel { alpha } => {
                Ok(bessel_reduced_coeffs(&BesselParams::new(*alpha), prec))
            }
            FamilySpec::Counterexample { r } => Ok(counterexample_coeffs(r, prec)),
            FamilySpec::ExpPoly { k, coeffs } => {
                let model = ExpPolyModel::new(k.clone(), Polynomial::new(coeffs.clone()))?;
                Ok(exp_poly_stream(&model, prec))
            }
            FamilySpec::File { path } => Ok(read_coefficient_file(path, prec)?),
        }
    }

    /// The exp-poly model, for the families that carry one.
    pub fn exp_poly_model(&self) -> Option<Result<ExpPolyModel, FamilyError>> {
        match self {
            FamilySpec::ExpPoly { k, coeffs } => Some(
                ExpPolyModel::new(k.clone(), Polynomial::new(coeffs.clone())).map_err(Into::into),
            ),
            _ => None,
        }
    }

    pub fn bessel_params(&self) -> Option<BesselParams> {
        match self {
            FamilySpec::Bessel { alpha } => Some(BesselParams::new(*alpha)),
            _ => None,
        }
    }

    /// Fixed default radii for corroboration sweeps, per family.
    pub fn default_radii(&self) -> Vec<f64> {
        match self {
            FamilySpec::LeRoy { .. } => vec![2.0, 10.0, 20.0],
            FamilySpec::Bessel { .. } => vec![10.0, 40.0, 100.0],
            FamilySpec::Counterexample { .. } => vec![1.0, 10.0, 50.0],
            FamilySpec::ExpPoly { .. } | FamilySpec::File { .. } => vec![1.0, 5.0, 25.0],
        }
    }

    /// Canonical display label.
    pub fn label(&self) -> String {
        match self {
            FamilySpec::LeRoy { r } => format!("leroy:r={:?}", r),
            FamilySpec::Bessel { alpha } => format!("bessel:alpha={alpha}"),
            FamilySpec::Counterexample { r } => {
                format!("counterexample:R={}", crate::exact::rational_to_string(r))
            }
            FamilySpec::ExpPoly { k, coeffs } => format!("exppoly:k={k:?};degP={}", coeffs.len() - 1),
            FamilySpec::File { path } => format!("file:{}", path.display()),
        }
    }
}
