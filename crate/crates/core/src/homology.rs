//! Rational homology through the dual cell structure: dual edges are faces,
//! dual 2-cells are the loops around edges. Used to find the peripheral
//! class that bounds rationally (the homological longitude).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cusp::Tracks;
use crate::error::{Error, Result};
use crate::triangulation::VeeringTriangulation;

/// Face-crossing vector of a dual path given as (branch, triangle it leaves).
pub fn face_vector(tri: &VeeringTriangulation, tracks: &Tracks, crossings: &[(usize, usize)]) -> Vec<i64> {
    let mut out = vec![0; tri.faces.len()];
    for &(b, from) in crossings {
        let tr = &tracks.triangles[from];
        let i = tr.branches.iter().position(|&x| x == b).expect("branch not on triangle");
        let f = tr.faces[i];
        let face = tri.face_of_slot[tr.tet][f as usize];
        out[face] += i64::from(tri.coorientation[tr.tet][f as usize]);
    }
    out
}

/// Boundary of the dual 2-cell around each edge: up through fan A, down through fan B.
pub fn edge_boundaries(tri: &VeeringTriangulation) -> Vec<Vec<i64>> {
    tri.fans
        .iter()
        .map(|fan| {
            let mut row = vec![0; tri.faces.len()];
            for ff in &fan.fan_a {
                row[ff.face] += 1;
            }
            for ff in &fan.fan_b {
                row[ff.face] -= 1;
            }
            row
        })
        .collect()
}

/// Null space of the columns `cols` (each of length `rows`) over Q.
fn null_space(cols: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = cols.len();
    let rows = cols.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c].clone();
                for j in 0..n {
                    let d = &k * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][free].clone();
            }
            v
        })
        .collect()
}

/// The primitive chart class (h, v) of the cusp curve that is rationally
/// null-homologous in the manifold. Normalised so h > 0, or v > 0 when h = 0.
pub fn homological_longitude(tri: &VeeringTriangulation, tracks: &Tracks, cusp: usize) -> Result<(i64, i64)> {
    let track = &tracks.cusps[cusp];
    let horizontal: Vec<(usize, usize)> = track.chart.crossings.iter().map(|&(b, t, _)| (b, t)).collect();
    let ladder = &track.ladders[0];
    let vertical: Vec<(usize, usize)> = ladder.rungs.iter().zip(&ladder.triangles).map(|(&r, &t)| (r, t)).collect();

    let q = |v: Vec<i64>| v.into_iter().map(|x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
    let mut cols: Vec<Vec<BigRational>> = edge_boundaries(tri).into_iter().map(q).collect();
    cols.push(q(face_vector(tri, tracks, &horizontal)));
    cols.push(q(face_vector(tri, tracks, &vertical)));
    let k = cols.len();

    // the projection of the null space onto the last two coordinates
    let proj: Vec<(BigRational, BigRational)> = null_space(&cols)
        .into_iter()
        .map(|v| (v[k - 2].clone(), v[k - 1].clone()))
        .filter(|(a, b)| !a.is_zero() || !b.is_zero())
        .collect();
    let (a, b) = proj.first().cloned().ok_or(Error::ZeroClass)?;
    for (c, d) in &proj[1..] {
        if &a * d != &b * c {
            return Err(Error::Infeasible("peripheral map has rank zero".into()));
        }
    }
    let denom = a.denom().lcm(b.denom());
    let (mut x, mut y) = ((a * BigRational::from_integer(denom.clone())).to_integer(), (b * BigRational::from_integer(denom)).to_integer());
    let g = x.gcd(&y);
    x /= &g;
    y /= &g;
    if x.is_negative() || (x.is_zero() && y.is_negative()) {
        x = -x;
        y = -y;
    }
    let conv = |z: BigInt| z.to_i64().ok_or_else(|| Error::Infeasible("class too large".into()));
    Ok((conv(x)?, conv(y)?))
}
