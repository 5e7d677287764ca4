//! Zero localization by recursive disk-cover subdivision with damped Newton
//! polishing.
//!
//! A cell whose count exceeds one is covered by four child disks at 0.75×
//! the radius (so every cell query is itself a winding-number query);
//! count-1 cells are polished by Newton iteration using the differentiated
//! series, which shares the tail certificate. Children are processed until
//! the parent's count is accounted for; zeros outside the parent are
//! discarded (the cover of an ancestor finds them through their own branch).

use num_complex::Complex64;

use crate::mp::{Complex, Real};

use super::winding::{count_zeros_in_disk, refine_eval, Disk, SeriesFunction, ZeroCountError};

/// A localized zero with its uncertainty disk and multiplicity.
#[derive(Debug, Clone)]
pub struct LocatedZero {
    pub location: Complex,
    pub error_radius: f64,
    pub multiplicity: usize,
}

impl LocatedZero {
    fn c64(&self) -> Complex64 {
        self.location.to_c64()
    }
}

/// Zero count and localization evidence for one disk.
#[derive(Debug, Clone)]
pub struct ZeroReport {
    pub count: usize,
    pub zeros: Vec<LocatedZero>,
    /// Certified modulus lower bound on the outer contour.
    pub contour_min_modulus: f64,
    pub samples_used: usize,
    /// Outer contour radius actually certified (after perturbation).
    pub radius_used: f64,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum LocalizeError {
    #[error(transparent)]
    Count(#[from] ZeroCountError),
    #[error("subdivision found {found} zeros but the disk count is {expected}")]
    Inconsistent { expected: usize, found: usize },
}

struct LocalizeCtx<'a> {
    f: &'a SeriesFunction,
    fp: SeriesFunction,
    eps: f64,
    samples: usize,
    diagnostics: Vec<String>,
}

/// Localize all zeros of f in the disk to resolution eps.
pub fn localize_zeros(
    f: &SeriesFunction,
    disk: Disk,
    eps: f64,
) -> Result<ZeroReport, LocalizeError> {
    assert!(eps > 0.0 && eps.is_finite());
    let eps = eps.max(1e-12 * disk.radius.max(1.0));
    let root = count_zeros_in_disk(f, disk)?;
    let mut ctx = LocalizeCtx {
        f,
        fp: f.derivative(),
        eps,
        samples: root.samples_used,
        diagnostics: Vec::new(),
    };
    let outer = Disk::new(disk.center, root.radius_used);
    let mut zeros = if root.count == 0 {
        Vec::new()
    } else {
        locate_cell(&mut ctx, outer, root.count)?
    };
    let found: usize = zeros.iter().map(|z| z.multiplicity).sum();
    if found != root.count {
        return Err(LocalizeError::Inconsistent { expected: root.count, found });
    }
    zeros.sort_by(|a, b| {
        let (pa, pb) = (a.c64(), b.c64());
        pa.re.partial_cmp(&pb.re).unwrap().then(pa.im.partial_cmp(&pb.im).unwrap())
    });
    let mut diagnostics = std::mem::take(&mut ctx.diagnostics);
    validate_geometry(&zeros, &outer, &mut diagnostics);
    Ok(ZeroReport {
        count: root.count,
        zeros,
        contour_min_modulus: root.min_modulus,
        samples_used: ctx.samples,
        radius_used: root.radius_used,
        diagnostics,
    })
}

fn validate_geometry(zeros: &[LocatedZero], outer: &Disk, diagnostics: &mut Vec<String>) {
    for (i, a) in zeros.iter().enumerate() {
        let pa = a.c64();
        if (pa - outer.center).norm() + a.error_radius > outer.radius * (1.0 + 1e-6) {
            diagnostics.push(format!(
                "zero {i} error disk extends past the query boundary (stall cell at eps resolution)"
            ));
        }
        for (j, b) in zeros.iter().enumerate().skip(i + 1) {
            if (pa - b.c64()).norm() < a.error_radius + b.error_radius {
                diagnostics.push(format!("zeros {i} and {j} have overlapping error disks"));
            }
        }
    }
}

fn locate_cell(
    ctx: &mut LocalizeCtx<'_>,
    cell: Disk,
    known_count: usize,
) -> Result<Vec<LocatedZero>, LocalizeError> {
    let count = known_count;
    if count == 0 {
        return Ok(Vec::new());
    }
    if count == 1 {
        if let Some(z) = newton_polish(ctx, &cell)? {
            return Ok(vec![z]);
        }
        if cell.radius <= ctx.eps {
            ctx.diagnostics
                .push(format!("polishing stalled; reporting cell center at radius {:.3e}", cell.radius));
            return Ok(vec![LocatedZero {
                location: Complex::from_c64(cell.center, ctx.f.prec()),
                error_radius: cell.radius,
                multiplicity: 1,
            }]);
        }
    } else if cell.radius <= ctx.eps {
        // Unresolvable cluster tighter than eps: a single multiplicity-m
        // zero as far as this resolution can tell.
        ctx.diagnostics.push(format!(
            "subdivision stall: {count} zeros within radius {:.3e}",
            cell.radius
        ));
        return Ok(vec![LocatedZero {
            location: Complex::from_c64(cell.center, ctx.f.prec()),
            error_radius: cell.radius,
            multiplicity: count,
        }]);
    }

    // Four-disk cover: centers at cell.c + 0.35r(±1 ± i), radius 0.75r.
    let offsets = [(0.35, 0.35), (-0.35, 0.35), (-0.35, -0.35), (0.35, -0.35)];
    let mut acc: Vec<LocatedZero> = Vec::new();
    let mut acc_mult = 0usize;
    for (dx, dy) in offsets {
        if acc_mult >= count {
            break;
        }
        let child = Disk::new(
            cell.center + Complex64::new(dx * cell.radius, dy * cell.radius),
            0.75 * cell.radius,
        );
        let child_count = count_zeros_in_disk(ctx.f, child)?;
        ctx.samples += child_count.samples_used;
        let child_cell = Disk::new(child.center, child_count.radius_used);
        let found = locate_cell(ctx, child_cell, child_count.count)?;
        for z in found {
            // Keep only zeros inside the parent; the rest belong to sibling
            // covers of some ancestor.
            if (z.c64() - cell.center).norm() > cell.radius * (1.0 + 1e-9) {
                continue;
            }
            merge_zero(&mut acc, z, ctx.eps);
        }
        acc_mult = acc.iter().map(|z| z.multiplicity).sum();
    }
    if acc_mult != count {
        if cell.radius <= ctx.eps * 8.0 {
            ctx.diagnostics.push(format!(
                "cover accounting mismatch at radius {:.3e}; reporting stall cell",
                cell.radius
            ));
            return Ok(vec![LocatedZero {
                location: Complex::from_c64(cell.center, ctx.f.prec()),
                error_radius: cell.radius,
                multiplicity: count,
            }]);
        }
        return Err(LocalizeError::Inconsistent { expected: count, found: acc_mult });
    }
    Ok(acc)
}

/// Merge a found zero into the accumulator, deduplicating rediscoveries of
/// the same point through overlapping covers.
fn merge_zero(acc: &mut Vec<LocatedZero>, z: LocatedZero, eps: f64) {
    let zp = z.c64();
    for existing in acc.iter_mut() {
        let tol = (0.5 * eps).max(existing.error_radius + z.error_radius);
        if (existing.c64() - zp).norm() <= tol {
            // Same zero seen through an overlapping child; keep the tighter
            // localization.
            if z.error_radius < existing.error_radius {
                *existing = z;
            }
            return;
        }
    }
    acc.push(z);
}

/// Damped Newton from the cell center; succeeds when the residual falls to
/// the evaluation error scale inside (a slight inflation of) the cell.
fn newton_polish(
    ctx: &mut LocalizeCtx<'_>,
    cell: &Disk,
) -> Result<Option<LocatedZero>, LocalizeError> {
    let prec = ctx.f.prec();
    let scale = ctx.f.scale_hint();
    let mut z = Complex::from_c64(cell.center, prec);
    for _iter in 0..60 {
        let r = match refine_eval(ctx.f, &z, scale, 24).map_err(LocalizeError::Count)? {
            Some(r) => r,
            None => return Ok(None),
        };
        let v_abs = r.value.abs();
        let v_f = v_abs.to_f64_clamped();
        // Converged: value indistinguishable from zero at its own error
        // scale (localization soundness wants |f| ≤ 10·error bound).
        if v_f <= 8.0 * r.error_bound {
            let d = match refine_eval(&ctx.fp, &z, scale, 12).map_err(LocalizeError::Count)? {
                Some(d) => d,
                None => return Ok(None),
            };
            let d_lb = d.value.abs().sub(&Real::from_f64(d.error_bound, prec));
            if !d_lb.is_positive() {
                return Ok(None); // derivative uncertain: likely a multiple zero
            }
            let err_radius =
                (2.0 * v_f.max(r.error_bound) / d_lb.to_f64_clamped()).max(1e-290);
            // The cell certifiably contains exactly one zero; a residual
            // minimum outside it belongs to a different zero (overlapping
            // covers place them close by), so reject and subdivide.
            let dist = (z.to_c64() - cell.center).norm();
            if dist > cell.radius {
                return Ok(None);
            }
            return Ok(Some(LocatedZero {
                location: z,
                error_radius: err_radius,
                multiplicity: 1,
            }));
        }
        let d = match refine_eval(&ctx.fp, &z, scale, 16).map_err(LocalizeError::Count)? {
            Some(d) => d,
            None => return Ok(None),
        };
        let d_lb = d.value.abs().sub(&Real::from_f64(d.error_bound, prec));
        if !d_lb.is_positive() {
            return Ok(None);
        }
        let full_step = r.value.div(&d.value);
        // Damping: halve until the residual actually shrinks.
        let mut lambda = 1.0f64;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = z.sub(&full_step.mul_real(&Real::from_f64(lambda, prec)));
            let rc = match refine_eval(ctx.f, &cand, scale, 16).map_err(LocalizeError::Count)? {
                Some(rc) => rc,
                None => break,
            };
            if rc.value.abs().lt(&v_abs) {
                accepted = Some(cand);
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some(nz) => {
                z = nz;
                if (z.to_c64() - cell.center).norm() > cell.radius * 1.5 {
                    return Ok(None); // escaped the cell
                }
            }
            None => return Ok(None),
        }
    }
    Ok(None)
}
