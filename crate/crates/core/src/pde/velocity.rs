//! Prescribed divergence-free velocity fields.
//!
//! The field derives from the stream function
//! `psi(x, y) = strength * sin(pi x / lx) * sin(pi y / ly)`,
//! a single recirculating cell vanishing on the boundary. Face volume fluxes
//! are differences of psi sampled at the dual lattice (cell centers), so the
//! per-node flux divergence telescopes to zero exactly and no flux crosses a
//! domain or obstacle boundary. Variant `g2` is the negation of `g1`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::Grid;
use crate::scalar::{c, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VelocityVariant {
    G1,
    G2,
}

#[derive(Debug, Clone)]
pub struct VelocityField<S> {
    /// Nodal x-velocity (reporting and upstream-direction queries).
    pub vx: Vec<S>,
    /// Nodal y-velocity.
    pub vy: Vec<S>,
    /// Volume flux through the face between nodes (i,j) and (i+1,j),
    /// positive toward +x; length (nx-1) * ny.
    pub flux_x: Vec<S>,
    /// Volume flux through the face between (i,j) and (i,j+1),
    /// positive toward +y; length nx * (ny-1).
    pub flux_y: Vec<S>,
}

impl<S: Scalar> VelocityField<S> {
    pub fn zero(grid: &Grid) -> Self {
        VelocityField {
            vx: vec![S::zero(); grid.n_nodes()],
            vy: vec![S::zero(); grid.n_nodes()],
            flux_x: vec![S::zero(); (grid.nx - 1) * grid.ny],
            flux_y: vec![S::zero(); grid.nx * (grid.ny - 1)],
        }
    }

    pub fn negated(&self) -> Self {
        let neg = |v: &[S]| v.iter().map(|&x| -x).collect();
        VelocityField {
            vx: neg(&self.vx),
            vy: neg(&self.vy),
            flux_x: neg(&self.flux_x),
            flux_y: neg(&self.flux_y),
        }
    }

    /// Nodal velocity vector at a node index.
    pub fn at_node(&self, idx: usize) -> (S, S) {
        (self.vx[idx], self.vy[idx])
    }

    /// Discrete flux divergence at every node: signed sum of face fluxes
    /// around the node's control volume, divided by the cell area.
    pub fn divergence(&self, grid: &Grid) -> Vec<S> {
        let w: Vec<S> = grid.weights();
        let mut div = vec![S::zero(); grid.n_nodes()];
        let nx = grid.nx;
        for j in 0..grid.ny {
            for i in 0..nx {
                let idx = grid.idx(i, j);
                if grid.is_masked(idx) {
                    continue;
                }
                let mut net = S::zero();
                if i < nx - 1 {
                    net += self.flux_x[j * (nx - 1) + i];
                }
                if i > 0 {
                    net -= self.flux_x[j * (nx - 1) + i - 1];
                }
                if j < grid.ny - 1 {
                    net += self.flux_y[j * nx + i];
                }
                if j > 0 {
                    net -= self.flux_y[(j - 1) * nx + i];
                }
                if w[idx] > S::zero() {
                    div[idx] = net / w[idx];
                }
            }
        }
        div
    }
}

/// Build the prescribed recirculating field for the requested boundary-flow
/// variant and strength.
pub fn make_velocity<S: Scalar>(
    grid: &Grid,
    variant: VelocityVariant,
    strength: f64,
) -> Result<VelocityField<S>> {
    let sgn = match variant {
        VelocityVariant::G1 => 1.0,
        VelocityVariant::G2 => -1.0,
    };
    let s = sgn * strength;
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let psi = |x: f64, y: f64| -> f64 {
        s * (std::f64::consts::PI * x / grid.lx).sin() * (std::f64::consts::PI * y / grid.ly).sin()
    };

    // Dual-lattice stream function at cell centers, zeroed on every dual cell
    // touching a blocked node so obstacle faces carry no flux.
    let mut psi_dual = vec![0.0f64; (nx - 1) * (ny - 1)];
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let touches_mask = grid.is_masked(grid.idx(i, j))
                || grid.is_masked(grid.idx(i + 1, j))
                || grid.is_masked(grid.idx(i, j + 1))
                || grid.is_masked(grid.idx(i + 1, j + 1));
            if !touches_mask {
                psi_dual[j * (nx - 1) + i] = psi((i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy);
            }
        }
    }
    // psi extended by zero outside the domain (psi vanishes on the boundary).
    let dual = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i >= (nx - 1) as isize || j >= (ny - 1) as isize {
            0.0
        } else {
            psi_dual[j as usize * (nx - 1) + i as usize]
        }
    };

    let mut field = VelocityField::zero(grid);
    for j in 0..ny {
        for i in 0..nx - 1 {
            let a = grid.idx(i, j);
            let b = grid.idx(i + 1, j);
            if grid.is_masked(a) || grid.is_masked(b) {
                continue;
            }
            let top = dual(i as isize, j as isize);
            let bot = dual(i as isize, j as isize - 1);
            field.flux_x[j * (nx - 1) + i] = c::<S>(top - bot);
        }
    }
    for j in 0..ny - 1 {
        for i in 0..nx {
            let a = grid.idx(i, j);
            let b = grid.idx(i, j + 1);
            if grid.is_masked(a) || grid.is_masked(b) {
                continue;
            }
            let left = dual(i as isize - 1, j as isize);
            let right = dual(i as isize, j as isize);
            field.flux_y[j * nx + i] = c::<S>(left - right);
        }
    }

    // Nodal velocities: average of the two adjacent face velocities per
    // direction. On a wall perpendicular to the component the nodal value is
    // the wall value, exactly zero (no penetration).
    for j in 0..ny {
        let len_x = hy * if j == 0 || j == ny - 1 { 0.5 } else { 1.0 };
        for i in 1..nx - 1 {
            let idx = grid.idx(i, j);
            if grid.is_masked(idx) {
                continue;
            }
            let east = field.flux_x[j * (nx - 1) + i].as_f64();
            let west = field.flux_x[j * (nx - 1) + i - 1].as_f64();
            field.vx[idx] = c::<S>(0.5 * (east + west) / len_x);
        }
    }
    for i in 0..nx {
        let len_y = hx * if i == 0 || i == nx - 1 { 0.5 } else { 1.0 };
        for j in 1..ny - 1 {
            let idx = grid.idx(i, j);
            if grid.is_masked(idx) {
                continue;
            }
            let north = field.flux_y[j * nx + i].as_f64();
            let south = field.flux_y[(j - 1) * nx + i].as_f64();
            field.vy[idx] = c::<S>(0.5 * (north + south) / len_y);
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_strength_gives_zero_field() {
        let g = Grid::new(9, 9, 1.0, 1.0).unwrap();
        let v: VelocityField<f64> = make_velocity(&g, VelocityVariant::G1, 0.0).unwrap();
        assert!(v.vx.iter().chain(v.vy.iter()).all(|&x| x == 0.0));
        assert!(v.flux_x.iter().chain(v.flux_y.iter()).all(|&x| x == 0.0));
    }

    #[test]
    fn g2_is_negation_of_g1() {
        let g = Grid::new(17, 13, 1.0, 1.5).unwrap();
        let v1: VelocityField<f64> = make_velocity(&g, VelocityVariant::G1, 0.7).unwrap();
        let v2: VelocityField<f64> = make_velocity(&g, VelocityVariant::G2, 0.7).unwrap();
        for (a, b) in v1.vx.iter().zip(v2.vx.iter()) {
            assert_eq!(*a, -*b);
        }
        for (a, b) in v1.flux_y.iter().zip(v2.flux_y.iter()) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn divergence_vanishes_on_33x33() {
        let g = Grid::new(33, 33, 1.0, 1.0).unwrap();
        let v: VelocityField<f64> = make_velocity(&g, VelocityVariant::G1, 1.0).unwrap();
        let div = v.divergence(&g);
        let max_abs = div.iter().fold(0.0f64, |m, &d| m.max(d.abs()));
        assert!(max_abs <= 1e-12, "max |div| = {max_abs:e}");
    }

    #[test]
    fn no_normal_component_on_boundary() {
        let g = Grid::new(17, 17, 1.0, 1.0).unwrap();
        let v: VelocityField<f64> = make_velocity(&g, VelocityVariant::G1, 1.0).unwrap();
        for j in 0..g.ny {
            assert_eq!(v.vx[g.idx(0, j)], 0.0);
            assert_eq!(v.vx[g.idx(g.nx - 1, j)], 0.0);
        }
        for i in 0..g.nx {
            assert_eq!(v.vy[g.idx(i, 0)], 0.0);
            assert_eq!(v.vy[g.idx(i, g.ny - 1)], 0.0);
        }
    }

    #[test]
    fn divergence_vanishes_with_obstacle() {
        let g = Grid::with_obstacles(
            25,
            25,
            1.0,
            1.0,
            vec![crate::grid::ObstacleRect {
                x0: 0.3,
                y0: 0.4,
                x1: 0.5,
                y1: 0.6,
            }],
        )
        .unwrap();
        let v: VelocityField<f64> = make_velocity(&g, VelocityVariant::G1, 1.0).unwrap();
        let div = v.divergence(&g);
        let max_abs = div.iter().fold(0.0f64, |m, &d| m.max(d.abs()));
        assert!(max_abs <= 1e-12, "max |div| = {max_abs:e}");
    }
}
