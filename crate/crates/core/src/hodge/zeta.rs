//! Scans of the family L_ζ over a grid of nonnegative rationals.

use crate::numeric::{Rational, Scalar};
use crate::soergel::Catalogue;

use super::datum::{hard_lefschetz_check, hodge_riemann_check, HardLefschetzReport, Inertia, SignConvention, SignatureReport};
use super::reduction::lefschetz_zeta;
use super::HodgeError;

/// Default grid {0, 1/2, 1, 2, 10}.
pub fn default_grid() -> Vec<Rational> {
    vec![Rational::zero(), Rational::new(1, 2), Rational::one(), Rational::from_int(2), Rational::from_int(10)]
}

/// Bound on endpoint doublings when HR fails only at the top of the grid.
pub const MAX_RETRIES: usize = 3;

#[derive(Clone, Debug)]
pub struct ZetaPoint {
    pub zeta: Rational,
    pub hl: HardLefschetzReport,
    pub signatures: Vec<(usize, Inertia)>,
    pub hr: SignatureReport,
}

#[derive(Clone, Debug)]
pub struct ZetaScan {
    pub x: usize,
    pub s: usize,
    pub ascent: bool,
    pub points: Vec<ZetaPoint>,
    /// Grid points left out: ζ = 0 for descents.
    pub excluded: Vec<Rational>,
    pub hl_pass: bool,
    pub constant_signatures: bool,
    /// HR at every scanned point (required for ascents only).
    pub hr_pass: bool,
    pub retries: usize,
    pub inconclusive: bool,
    pub pass: bool,
}

fn point(cat: &Catalogue, x: usize, s: usize, rho: &[Scalar], z: &Rational) -> Result<ZetaPoint, HodgeError> {
    let f = cat.sys().field();
    let d = lefschetz_zeta(cat, x, s, rho, &f.from_rational(z.clone()))?;
    let hl = hard_lefschetz_check(&d);
    let signatures = d.lefschetz_signatures();
    let hr = hodge_riemann_check(&d, SignConvention::Standard);
    Ok(ZetaPoint { zeta: z.clone(), hl, signatures, hr })
}

pub fn zeta_family_scan(cat: &Catalogue, x: usize, s: usize, rho: &[Scalar], grid: &[Rational]) -> Result<ZetaScan, HodgeError> {
    if grid.iter().any(|z| z.signum() < 0) {
        return Err(HodgeError::NegativeZeta);
    }
    let ascent = !cat.ideal().element(x).is_right_descent(s);
    let mut grid: Vec<Rational> = grid.to_vec();
    grid.sort();
    grid.dedup();
    let (used, excluded): (Vec<Rational>, Vec<Rational>) = grid.into_iter().partition(|z| ascent || z.signum() > 0);
    let mut points = used.iter().map(|z| point(cat, x, s, rho, z)).collect::<Result<Vec<_>, _>>()?;
    let hl_pass = points.iter().all(|p| p.hl.pass);
    let mut retries = 0;
    let mut inconclusive = false;
    if ascent && hl_pass {
        while points.last().is_some_and(|p| !p.hr.pass) && points.iter().any(|p| p.hr.pass) {
            if retries == MAX_RETRIES {
                inconclusive = true;
                break;
            }
            retries += 1;
            let z = &points.last().unwrap().zeta * &Rational::from_int(2);
            let p = point(cat, x, s, rho, &z)?;
            points.push(p);
        }
    }
    let constant_signatures = points.windows(2).all(|w| w[0].signatures == w[1].signatures);
    let hr_pass = points.iter().all(|p| p.hr.pass);
    let pass = hl_pass && constant_signatures && (!ascent || hr_pass) && !inconclusive;
    Ok(ZetaScan { x, s, ascent, points, excluded, hl_pass, constant_signatures, hr_pass, retries, inconclusive, pass })
}
