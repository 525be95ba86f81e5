//! Volumes by cone decomposition over facet orbits.

use super::adjacency::facet_orbits;
use super::dd::dd_full;
use super::triangulate::pulling_volume;
use super::{AffineFrame, VPolytope};
use crate::error::Result;
use crate::linalg::{barycenter, vsub, QMatrix, QVector};
use crate::rational::Rational;
use crate::symmetry::PermGroup;

/// Point sets up to this size are measured by a plain pulling recursion.
pub const SYMMETRIC_VOLUME_THRESHOLD: usize = 64;

/// Volume of a polytope invariant under `group`, zero unless full-dimensional.
/// Each facet orbit contributes its size times the cone from the barycenter,
/// and facets are measured recursively under their stabilizers.
pub fn symmetric_volume(p: &VPolytope, group: &PermGroup, cap: usize) -> Result<Rational> {
    if !p.is_full_dimensional() {
        return Ok(Rational::zero());
    }
    let frame = p.frame();
    let coords: Vec<QVector> = p.vertices().iter().map(|x| frame.coords(x)).collect();
    Ok(hull_volume_sym(&coords, group, cap)? * frame.dirs.determinant().abs())
}

/// Volume of full-dimensional `coords` in their own coordinates.
pub(crate) fn hull_volume_sym(coords: &[QVector], group: &PermGroup, cap: usize) -> Result<Rational> {
    let k = coords.first().map_or(0, |c| c.len());
    if k == 0 {
        return Ok(Rational::one());
    }
    if group.is_trivial() || coords.len() <= SYMMETRIC_VOLUME_THRESHOLD || k <= 2 {
        return Ok(pulling_volume(coords, &dd_full(coords)));
    }
    let c = barycenter(coords);
    let mut total = Rational::zero();
    for (f, size) in facet_orbits(coords, group, cap)? {
        let sub: Vec<QVector> = f.iter().map(|&i| coords[i as usize].clone()).collect();
        let ff = AffineFrame::of(&sub);
        let local: Vec<QVector> = sub.iter().map(|x| ff.coords(x)).collect();
        let (_, stab) = group.set_stabilizer(&f, cap)?;
        let vf = hull_volume_sym(&local, &stab.restrict(&f)?, cap)?;
        let mut cols: Vec<QVector> = (0..ff.dim()).map(|j| ff.dirs.column(j)).collect();
        cols.push(vsub(&c, &ff.origin));
        let cone = &QMatrix::from_columns(&cols).determinant().abs() * &vf;
        total += &(&cone * &Rational::from_integer(size as i64));
    }
    Ok(total / Rational::from_integer(k as i64))
}
