//! Regular tensor-product grid, nodal scalar fields, quadrature weights and
//! bilinear interpolation.
//!
//! Nodes are laid out row-major: index `j * nx + i` for node `(i, j)` at
//! coordinates `(i * hx, j * hy)`. Each node owns a control volume (quarter,
//! half or full cell at corners, edges and interior), which makes the
//! trapezoid weights double as finite-volume cell areas. Those weights define
//! the discrete L2 inner product and the lumped mass matrix used everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SboedError};
use crate::scalar::{c, Scalar};

/// Nodal values of a field on a [`Grid`], row-major.
pub type ScalarField<S> = Vec<S>;

/// Axis-aligned rectangle of blocked (impenetrable) nodes, in physical
/// coordinates. Must be strictly interior to the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleRect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    #[serde(default)]
    pub obstacles: Vec<ObstacleRect>,
    /// Per-node blocked flag derived from `obstacles`.
    #[serde(skip)]
    mask: Vec<bool>,
    #[serde(skip)]
    any_masked: bool,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::with_obstacles(nx, ny, lx, ly, Vec::new())
    }

    pub fn with_obstacles(
        nx: usize,
        ny: usize,
        lx: f64,
        ly: f64,
        obstacles: Vec<ObstacleRect>,
    ) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(SboedError::contract(format!(
                "grid needs nx, ny >= 3, got {nx}x{ny}"
            )));
        }
        if lx <= 0.0 || ly <= 0.0 {
            return Err(SboedError::contract("grid extents must be positive"));
        }
        let mut grid = Grid {
            nx,
            ny,
            lx,
            ly,
            obstacles,
            mask: Vec::new(),
            any_masked: false,
        };
        grid.rebuild_mask()?;
        Ok(grid)
    }

    /// Recompute the blocked-node mask; required after deserialization.
    pub fn rebuild_mask(&mut self) -> Result<()> {
        let (hx, hy) = (self.hx(), self.hy());
        let mut mask = vec![false; self.nx * self.ny];
        for rect in &self.obstacles {
            if rect.x0 <= 0.0 || rect.y0 <= 0.0 || rect.x1 >= self.lx || rect.y1 >= self.ly {
                return Err(SboedError::contract(
                    "obstacle rectangles must be strictly interior to the domain",
                ));
            }
            if rect.x0 >= rect.x1 || rect.y0 >= rect.y1 {
                return Err(SboedError::contract("degenerate obstacle rectangle"));
            }
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let (x, y) = (i as f64 * hx, j as f64 * hy);
                    if x >= rect.x0 - 1e-12
                        && x <= rect.x1 + 1e-12
                        && y >= rect.y0 - 1e-12
                        && y <= rect.y1 + 1e-12
                    {
                        mask[j * self.nx + i] = true;
                    }
                }
            }
        }
        self.any_masked = mask.iter().any(|&b| b);
        self.mask = mask;
        Ok(())
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn hx(&self) -> f64 {
        self.lx / (self.nx - 1) as f64
    }

    #[inline]
    pub fn hy(&self) -> f64 {
        self.ly / (self.ny - 1) as f64
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn node_xy(&self, idx: usize) -> (f64, f64) {
        let i = idx % self.nx;
        let j = idx / self.nx;
        (i as f64 * self.hx(), j as f64 * self.hy())
    }

    #[inline]
    pub fn is_masked(&self, idx: usize) -> bool {
        self.any_masked && self.mask[idx]
    }

    pub fn has_obstacles(&self) -> bool {
        self.any_masked
    }

    /// Trapezoid quadrature weight (= control-volume area) per node.
    /// Blocked nodes get weight zero: they are not part of the fluid domain.
    pub fn weights<S: Scalar>(&self) -> Vec<S> {
        let cell = c::<S>(self.hx() * self.hy());
        let mut w = vec![S::zero(); self.n_nodes()];
        for j in 0..self.ny {
            for i in 0..self.nx {
                let idx = self.idx(i, j);
                if self.is_masked(idx) {
                    continue;
                }
                let fx = if i == 0 || i == self.nx - 1 { 0.5 } else { 1.0 };
                let fy = if j == 0 || j == self.ny - 1 { 0.5 } else { 1.0 };
                w[idx] = cell * c::<S>(fx * fy);
            }
        }
        w
    }

    /// Trapezoid weight of the boundary curve per node (arc length owned by
    /// the node); zero for interior nodes. Used by the Robin boundary term.
    pub fn boundary_weights<S: Scalar>(&self) -> Vec<S> {
        let (hx, hy) = (self.hx(), self.hy());
        let mut w = vec![S::zero(); self.n_nodes()];
        for j in 0..self.ny {
            for i in 0..self.nx {
                let idx = self.idx(i, j);
                if self.is_masked(idx) {
                    continue;
                }
                let mut arc = 0.0;
                if j == 0 || j == self.ny - 1 {
                    arc += if i == 0 || i == self.nx - 1 {
                        hx / 2.0
                    } else {
                        hx
                    };
                }
                if i == 0 || i == self.nx - 1 {
                    arc += if j == 0 || j == self.ny - 1 {
                        hy / 2.0
                    } else {
                        hy
                    };
                }
                w[idx] = c::<S>(arc);
            }
        }
        w
    }

    /// Weighted inner product sum_i w_i a_i b_i defining the discrete L2 pairing.
    pub fn inner<S: Scalar>(&self, weights: &[S], a: &[S], b: &[S]) -> S {
        weights
            .iter()
            .zip(a.iter().zip(b.iter()))
            .map(|(&w, (&x, &y))| w * x * y)
            .sum()
    }

    /// Bilinear interpolation stencil at physical point (x, y): up to four
    /// (node index, weight) pairs. Errors if outside the domain or on an
    /// obstacle node.
    pub fn interp_stencil<S: Scalar>(&self, x: f64, y: f64) -> Result<Vec<(usize, S)>> {
        let (hx, hy) = (self.hx(), self.hy());
        let eps = 1e-12 * self.lx.max(self.ly);
        if x < -eps || x > self.lx + eps || y < -eps || y > self.ly + eps {
            return Err(SboedError::contract(format!(
                "point ({x}, {y}) outside the domain"
            )));
        }
        let xc = x.clamp(0.0, self.lx);
        let yc = y.clamp(0.0, self.ly);
        let i0 = ((xc / hx).floor() as usize).min(self.nx - 2);
        let j0 = ((yc / hy).floor() as usize).min(self.ny - 2);
        let tx = (xc / hx - i0 as f64).clamp(0.0, 1.0);
        let ty = (yc / hy - j0 as f64).clamp(0.0, 1.0);
        let cells = [
            (self.idx(i0, j0), (1.0 - tx) * (1.0 - ty)),
            (self.idx(i0 + 1, j0), tx * (1.0 - ty)),
            (self.idx(i0, j0 + 1), (1.0 - tx) * ty),
            (self.idx(i0 + 1, j0 + 1), tx * ty),
        ];
        let mut stencil = Vec::with_capacity(4);
        for (idx, w) in cells {
            if w == 0.0 {
                continue;
            }
            if self.is_masked(idx) {
                return Err(SboedError::contract(format!(
                    "point ({x}, {y}) interpolates from an obstacle node"
                )));
            }
            stencil.push((idx, c::<S>(w)));
        }
        Ok(stencil)
    }

    /// Evaluate a nodal field at a physical point by bilinear interpolation.
    pub fn interp_value<S: Scalar>(&self, field: &[S], x: f64, y: f64) -> Result<S> {
        Ok(self
            .interp_stencil::<S>(x, y)?
            .into_iter()
            .map(|(idx, w)| field[idx] * w)
            .sum())
    }

    /// Stable content hash of the grid geometry, for artifact compatibility checks.
    pub fn geometry_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(self.nx.to_le_bytes());
        h.update(self.ny.to_le_bytes());
        h.update(self.lx.to_le_bytes());
        h.update(self.ly.to_le_bytes());
        for r in &self.obstacles {
            for v in [r.x0, r.y0, r.x1, r.y1] {
                h.update(v.to_le_bytes());
            }
        }
        hex::encode(&h.finalize()[..16])
    }
}
