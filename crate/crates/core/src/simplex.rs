//! Simplex boundary vectors `W^(g)(omega)`, large-omega limits, the
//! weighted-average curve `A(omega)`, shape scans, and CSV emission.
//!
//! With two-valued odds every tuplet sum collapses to a short closed form,
//! so the curves for `c = 48` cost microseconds per grid point. The generic
//! engine path remains available (and is asserted equal at rational omega).

use std::io::Write;
use std::path::Path;

use num_traits::One;

use crate::aplus::{rhs_constant, AplusInstance};
use crate::combinatorics::{binomial, IndexSet};
use crate::error::Error;
use crate::muirhead::OddsVector;
use crate::scalar::{format_float, ExactScalar, Scalar};
use crate::Result;

/// The boundary vector with `g` leading entries `omega` and the rest 1.
pub fn simplex_vector<S: Scalar>(g: usize, omega: S, c: usize) -> Result<OddsVector<S>> {
    if g == 0 || g > c - 1 {
        return Err(Error::OutOfRange(format!("g = {g} with c = {c}")));
    }
    if omega < S::one() {
        return Err(Error::OutOfRange("omega must be >= 1".into()));
    }
    let mut entries = vec![omega; g];
    entries.extend(std::iter::repeat_n(S::one(), c - g));
    OddsVector::new(entries)
}

/// Elementary symmetric polynomial of a two-valued multiset
/// (`n_omega` copies of `omega`, `n_ones` ones) at the given degree.
fn esym_two_valued<S: Scalar>(omega: &S, n_omega: usize, n_ones: usize, degree: usize) -> S {
    let mut acc = S::zero();
    let mut omega_pow = S::one();
    for t in 0..=degree.min(n_omega) {
        if degree - t <= n_ones {
            let count = binomial(n_omega, t as i64) * binomial(n_ones, (degree - t) as i64);
            acc = acc + S::from_rational(&count) * omega_pow.clone();
        }
        omega_pow = omega_pow * omega.clone();
    }
    acc
}

/// Large-omega limit of the average cross-product ratio in the `p = 2`,
/// `q = 1` boundary setting: `(1 - k/c)(1 - k/(c-1))` for `j2 <= g`, and
/// that value divided by `1 - k/(c-g)` for `j2 > g`.
pub fn limit_average_ratio(c: usize, k: usize, g: usize, j2: usize) -> Result<ExactScalar> {
    if j2 < 2 || j2 > c - 1 {
        return Err(Error::OutOfRange(format!("j2 = {j2} with c = {c}")));
    }
    if g == 0 || g >= c {
        return Err(Error::OutOfRange(format!("g = {g} with c = {c}")));
    }
    if c - g <= k {
        return Err(Error::OutOfRange("divisor 1 - k/(c-g) must stay positive".into()));
    }
    let one = ExactScalar::one();
    let head = (one.clone() - ExactScalar::new(k.into(), c.into()))
        * (one.clone() - ExactScalar::new(k.into(), (c - 1).into()));
    if j2 <= g {
        Ok(head)
    } else {
        let div = one - ExactScalar::new(k.into(), (c - g).into());
        Ok(head / div)
    }
}

/// The two per-class ingredients of the boundary average with `g = b`:
/// weight `u_J`, and `k_J` times the common average cross-product ratio.
struct BoundaryClasses<S: Scalar> {
    /// `J = {1, j2}` with `j2 <= b`.
    u_le: S,
    t_le: S,
    /// `J = {1, j2}` with `j2 > b`.
    u_gt: S,
    t_gt: S,
}

fn boundary_classes<S: Scalar>(omega: &S, c: usize, b: usize, k: usize) -> BoundaryClasses<S> {
    let p = 2usize;
    let q = 1usize;
    let d = b - q; // tuplet degree b-1
    let n4 = binomial(c, b as i64);
    let n2 = binomial(c - k, b as i64);
    let n1 = binomial(c - k - p, d as i64);
    let n3 = binomial(c - p, d as i64);
    let s4 = esym_two_valued(omega, b, c - b, b); // e_b over C
    let den2 = esym_two_valued(omega, b, c - b - k, b); // e_b over C \ K
    // Class j2 <= b: J removes two omegas; K removes k ones.
    let u_le = esym_two_valued(omega, b - 2, c - b, d);
    let num1_le = esym_two_valued(omega, b - 2, c - b - k, d);
    let r_le = (num1_le / S::from_rational(&n1)) * (s4.clone() / S::from_rational(&n4))
        / ((u_le.clone() / S::from_rational(&n3)) * (den2.clone() / S::from_rational(&n2)));
    let t_le = S::from_rational(&binomial(c - b, k as i64)) * r_le;
    // Class j2 > b: J removes one omega and one 1; K removes k ones.
    let u_gt = esym_two_valued(omega, b - 1, c - b - 1, d);
    let num1_gt = esym_two_valued(omega, b - 1, c - b - 1 - k, d);
    let r_gt = (num1_gt / S::from_rational(&n1)) * (s4 / S::from_rational(&n4))
        / ((u_gt.clone() / S::from_rational(&n3)) * (den2 / S::from_rational(&n2)));
    let t_gt = S::from_rational(&binomial(c - b - 1, k as i64)) * r_gt;
    BoundaryClasses { u_le, t_le, u_gt, t_gt }
}

fn check_boundary_ranges(c: usize, b: usize, k: usize, h2: usize) -> Result<()> {
    if b < 2 || b >= c {
        return Err(Error::OutOfRange(format!("b = {b} with c = {c} (need 2 <= b <= c-1)")));
    }
    if k == 0 || k > c - b - 1 {
        return Err(Error::OutOfRange(format!("k = {k} with c = {c}, b = {b}")));
    }
    if h2 < 2 || h2 > c - 1 {
        return Err(Error::OutOfRange(format!("h2 = {h2} with c = {c}")));
    }
    Ok(())
}

/// `A(omega)`: the `u_J`-weighted average of `k_J R_J.` over `J = {1, j2}`,
/// `j2 = 2..h2`, at the boundary vector with `g = b` leading omegas
/// (`p = 2`, `q = 1`, subscript `(1, h2)`).
pub fn weighted_average_a<S: Scalar>(omega: &S, c: usize, b: usize, k: usize, h2: usize) -> Result<S> {
    check_boundary_ranges(c, b, k, h2)?;
    if *omega < S::one() {
        return Err(Error::OutOfRange("omega must be >= 1".into()));
    }
    let cls = boundary_classes(omega, c, b, k);
    if h2 <= b {
        return Ok(cls.t_le);
    }
    let w_le = S::from_usize(b - 1) * cls.u_le;
    let w_gt = S::from_usize(h2 - b) * cls.u_gt;
    Ok((w_le.clone() * cls.t_le + w_gt.clone() * cls.t_gt) / (w_le + w_gt))
}

/// The two bracketing curves: `C(c-b,k) R_{{1,b}.}` and
/// `C(c-b-1,k) R_{{1,b+1}.}` at the boundary vector.
pub fn bracketing_curves<S: Scalar>(omega: &S, c: usize, b: usize, k: usize) -> Result<(S, S)> {
    check_boundary_ranges(c, b, k, c - 1)?;
    let cls = boundary_classes(omega, c, b, k);
    Ok((cls.t_le, cls.t_gt))
}

/// The same weighted average computed through the generic engine on an
/// explicit odds vector; used to pin the closed form and for the
/// boundary-vector search over arbitrary `w`.
pub fn general_weighted_average<S: Scalar>(
    w: &OddsVector<S>,
    c: usize,
    b: usize,
    k: usize,
    h2: usize,
) -> Result<S> {
    check_boundary_ranges(c, b, k, h2)?;
    let mut inst = AplusInstance::new(c, b, k, 2, 1, w.clone())?;
    let mut num = S::zero();
    let mut den = S::zero();
    for j2 in 2..=h2 {
        let j_set = IndexSet::new(vec![1, j2])?;
        let u = inst.u_j(&j_set);
        let t = inst.cross_product_sum(&j_set)?;
        num = num + u.clone() * t;
        den = den + u;
    }
    Ok(num / den)
}

/// Grid specification for scans and CSV emission.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub omega_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { omega_max: 1e6, points: 400 }
    }
}

impl GridSpec {
    /// Log-spaced grid starting exactly at 1.
    pub fn omegas(&self) -> Vec<f64> {
        let n = self.points.max(2);
        let span = self.omega_max.ln();
        (0..n)
            .map(|t| if t == 0 { 1.0 } else { (span * t as f64 / (n - 1) as f64).exp() })
            .collect()
    }
}

/// Scanned curves plus shape verdicts.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub omega_grid: Vec<f64>,
    pub top: Vec<f64>,
    pub bottom: Vec<f64>,
    pub middle: Vec<f64>,
    pub sign_changes: usize,
    pub limit_value: ExactScalar,
    pub initial_value: ExactScalar,
    /// Middle curve stays above the limit at every grid point.
    pub above_limit_everywhere: bool,
    /// Middle value at the early local minimum, when the derivative has two
    /// sign changes.
    pub initial_local_min: Option<f64>,
    /// Report-grade shape verdict: at most two sign changes, and any early
    /// local minimum exceeds the limiting value.
    pub quasi_unimodal: bool,
}

/// Relative dead-band below which a finite difference is treated as zero.
const SIGN_DEAD_BAND: f64 = 1e-12;

fn diff_signs(values: &[f64]) -> Vec<i8> {
    values
        .windows(2)
        .map(|p| {
            let scale = p[0].abs().max(p[1].abs()).max(1.0);
            let d = p[1] - p[0];
            if d.abs() <= SIGN_DEAD_BAND * scale {
                0
            } else if d > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Scans the two bracketing curves and the weighted average over a
/// log-spaced grid, counting derivative sign changes of the average.
pub fn scan_a(c: usize, b: usize, k: usize, h2: usize, grid: &GridSpec) -> Result<BoundaryCurve> {
    check_boundary_ranges(c, b, k, h2)?;
    let omegas = grid.omegas();
    let mut top = Vec::with_capacity(omegas.len());
    let mut bottom = Vec::with_capacity(omegas.len());
    let mut middle = Vec::with_capacity(omegas.len());
    for &om in &omegas {
        let (t, g) = bracketing_curves(&om, c, b, k)?;
        top.push(t);
        bottom.push(g);
        middle.push(weighted_average_a(&om, c, b, k, h2)?);
    }
    let limit_value = rhs_constant(c, b, k, 2);
    let one = ExactScalar::one();
    let initial_value = weighted_average_a(&one, c, b, k, h2)?;

    let signs: Vec<i8> = diff_signs(&middle).into_iter().filter(|&s| s != 0).collect();
    let sign_changes = signs.windows(2).filter(|p| p[0] != p[1]).count();

    let limit_f = f64::from_rational(&limit_value);
    let above_limit_everywhere = middle.iter().all(|&v| v > limit_f);

    // With two sign changes the shape is down-up-down; the early local
    // minimum sits where the first descent ends.
    let initial_local_min = if sign_changes == 2 {
        let all_signs = diff_signs(&middle);
        let mut idx = 0usize;
        while idx < all_signs.len() && all_signs[idx] != 1 {
            idx += 1;
        }
        Some(middle[idx])
    } else {
        None
    };
    let quasi_unimodal = sign_changes <= 2
        && initial_local_min.map(|m| m > limit_f).unwrap_or(true);

    Ok(BoundaryCurve {
        omega_grid: omegas,
        top,
        bottom,
        middle,
        sign_changes,
        limit_value,
        initial_value,
        above_limit_everywhere,
        initial_local_min,
        quasi_unimodal,
    })
}

/// Writes the scanned curves as CSV (`omega,top,bottom,middle`, 17
/// significant digits) and returns the curve.
pub fn emit_figure1(
    path: &Path,
    c: usize,
    b: usize,
    k: usize,
    h2: usize,
    grid: &GridSpec,
) -> Result<BoundaryCurve> {
    let curve = scan_a(c, b, k, h2, grid)?;
    let mut out = String::from("omega,top,bottom,middle\n");
    for i in 0..curve.omega_grid.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_float(curve.omega_grid[i]),
            format_float(curve.top[i]),
            format_float(curve.bottom[i]),
            format_float(curve.middle[i]),
        ));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(curve)
}

/// Result of searching for a boundary vector whose average undercuts the
/// weighted average of a given odds vector.
#[derive(Debug, Clone)]
pub struct OmegaStarSearch {
    pub wtd_avg: ExactScalar,
    /// `(doublings, omega_star, boundary_average)` for the first multiplier
    /// `m = 2^doublings` with `A(m w_1) <= WtdAvg(w)`.
    pub found: Option<(u32, ExactScalar, ExactScalar)>,
}

/// Searches `m = 1, 2, 4, ..., 2^10` for a boundary vector at `omega = m w_1`
/// whose average is at most the given vector's weighted average. A failed
/// search is a reported finding, not an error.
pub fn omega_star_search(
    w: &OddsVector<ExactScalar>,
    c: usize,
    b: usize,
    k: usize,
    h2: usize,
) -> Result<OmegaStarSearch> {
    let wtd_avg = general_weighted_average(w, c, b, k, h2)?;
    let w1 = w.get(1).clone();
    for doublings in 0..=10u32 {
        let m = ExactScalar::from_integer((1i64 << doublings).into());
        let omega = m * w1.clone();
        let a = weighted_average_a(&omega, c, b, k, h2)?;
        if a <= wtd_avg {
            return Ok(OmegaStarSearch { wtd_avg, found: Some((doublings, omega, a)) });
        }
    }
    Ok(OmegaStarSearch { wtd_avg, found: None })
}
