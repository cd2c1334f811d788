//! Lattice domains `Omega ∩ eps Z^2`, spin fields on them, jump sets, and
//! piecewise-constant fields on coarse grids.

use std::sync::Arc;

use rayon::prelude::*;

use crate::circle::{geodesic_distance, project_to_discrete, DiscreteCircle, UnitVector};
use crate::error::{Error, Result};
use crate::geometry::{Point, Shape};
use crate::maps::SpinMap;

const NO_SITE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Sites of spacing `epsilon` inside a shape, ordered row-major (by `y`,
/// then `x`).
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDomain {
    epsilon: f64,
    shape: Shape,
    ix0: i64,
    iy0: i64,
    nx: usize,
    ny: usize,
    index: Vec<u32>,
    sites: Vec<[i64; 2]>,
    row_starts: Vec<usize>,
}

impl LatticeDomain {
    pub fn new(shape: Shape, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lattice spacing must be positive, got {epsilon}"
            )));
        }
        if shape.is_degenerate() {
            return Err(Error::InvalidParameter(format!("degenerate shape {shape:?}")));
        }
        let (lo, hi) = shape.bounds();
        let gx0 = (lo.x / epsilon).floor() as i64 - 1;
        let gx1 = (hi.x / epsilon).ceil() as i64 + 1;
        let gy0 = (lo.y / epsilon).floor() as i64 - 1;
        let gy1 = (hi.y / epsilon).ceil() as i64 + 1;
        let span = (gx1 - gx0 + 1) as u128 * (gy1 - gy0 + 1) as u128;
        if span > u32::MAX as u128 / 2 {
            return Err(Error::InvalidParameter(format!(
                "lattice with spacing {epsilon} is too large ({span} candidate sites)"
            )));
        }

        let mut sites = Vec::new();
        for iy in gy0..=gy1 {
            for ix in gx0..=gx1 {
                let p = Point::new(ix as f64 * epsilon, iy as f64 * epsilon);
                if shape.contains(&p) {
                    sites.push([ix, iy]);
                }
            }
        }
        if sites.is_empty() {
            return Err(Error::EmptyDomain { epsilon });
        }
        let ix0 = sites.iter().map(|s| s[0]).min().unwrap();
        let ix1 = sites.iter().map(|s| s[0]).max().unwrap();
        let iy0 = sites[0][1];
        let iy1 = sites[sites.len() - 1][1];
        let nx = (ix1 - ix0 + 1) as usize;
        let ny = (iy1 - iy0 + 1) as usize;
        let mut index = vec![NO_SITE; nx * ny];
        let mut row_starts = Vec::with_capacity(ny + 1);
        let mut current_row = iy0 - 1;
        for (k, s) in sites.iter().enumerate() {
            while current_row < s[1] {
                row_starts.push(k);
                current_row += 1;
            }
            index[(s[1] - iy0) as usize * nx + (s[0] - ix0) as usize] = k as u32;
        }
        row_starts.push(sites.len());
        Ok(Self {
            epsilon,
            shape,
            ix0,
            iy0,
            nx,
            ny,
            index,
            sites,
            row_starts,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Integer coordinates `i` of site number `k` (position `eps * i`).
    pub fn site(&self, k: usize) -> [i64; 2] {
        self.sites[k]
    }

    pub fn sites(&self) -> &[[i64; 2]] {
        &self.sites
    }

    pub fn position(&self, k: usize) -> Point {
        let [ix, iy] = self.sites[k];
        Point::new(ix as f64 * self.epsilon, iy as f64 * self.epsilon)
    }

    /// Lower-left integer corner and extent of the occupied index box.
    pub fn index_box(&self) -> ([i64; 2], [usize; 2]) {
        ([self.ix0, self.iy0], [self.nx, self.ny])
    }

    pub fn index_of(&self, ix: i64, iy: i64) -> Option<usize> {
        let cx = ix - self.ix0;
        let cy = iy - self.iy0;
        if cx < 0 || cy < 0 || cx as usize >= self.nx || cy as usize >= self.ny {
            return None;
        }
        match self.index[cy as usize * self.nx + cx as usize] {
            NO_SITE => None,
            k => Some(k as usize),
        }
    }

    /// Contiguous site ranges, one per lattice row.
    pub fn rows(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.row_starts.windows(2).map(|w| w[0]..w[1])
    }

    /// Neighbors of site `k` in the `+e1` and `+e2` directions.
    pub fn forward_neighbors(&self, k: usize) -> [Option<usize>; 2] {
        let [ix, iy] = self.sites[k];
        [self.index_of(ix + 1, iy), self.index_of(ix, iy + 1)]
    }

    /// Unordered nearest-neighbor bonds with both endpoints in the domain,
    /// each listed once as `(lower, upper, axis)`.
    pub fn bonds(&self) -> impl Iterator<Item = (usize, usize, Axis)> + '_ {
        (0..self.len()).flat_map(move |k| {
            let [r, u] = self.forward_neighbors(k);
            r.map(|j| (k, j, Axis::Horizontal))
                .into_iter()
                .chain(u.map(|j| (k, j, Axis::Vertical)))
        })
    }

    pub fn bond_count(&self) -> usize {
        (0..self.len())
            .map(|k| self.forward_neighbors(k).iter().flatten().count())
            .sum()
    }

    /// Corner sites `[i, i+e1, i+e1+e2, i+e2]` of the plaquette with lower
    /// left corner at site `k`, if all four are present.
    pub fn plaquette(&self, k: usize) -> Option<[usize; 4]> {
        let [ix, iy] = self.sites[k];
        Some([
            k,
            self.index_of(ix + 1, iy)?,
            self.index_of(ix + 1, iy + 1)?,
            self.index_of(ix, iy + 1)?,
        ])
    }
}

pub fn build_domain(shape: Shape, epsilon: f64) -> Result<LatticeDomain> {
    LatticeDomain::new(shape, epsilon)
}

/// Spin configuration stored as state indices, one per site.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinField {
    domain: Arc<LatticeDomain>,
    circle: DiscreteCircle,
    states: Vec<u32>,
}

impl SpinField {
    pub fn new(domain: Arc<LatticeDomain>, circle: DiscreteCircle, states: Vec<u32>) -> Result<Self> {
        if states.len() != domain.len() {
            return Err(Error::InvalidParameter(format!(
                "{} states for {} sites",
                states.len(),
                domain.len()
            )));
        }
        if let Some(bad) = states.iter().find(|&&s| s >= circle.n_states()) {
            return Err(Error::InvalidParameter(format!(
                "state {bad} out of range for {} states",
                circle.n_states()
            )));
        }
        Ok(Self {
            domain,
            circle,
            states,
        })
    }

    pub fn constant(domain: Arc<LatticeDomain>, circle: DiscreteCircle, state: u32) -> Self {
        let states = vec![state % circle.n_states(); domain.len()];
        Self {
            domain,
            circle,
            states,
        }
    }

    /// Field whose state at each site is computed from its index and
    /// position. Evaluated in parallel; the result does not depend on the
    /// thread count.
    pub fn try_from_fn<F>(domain: Arc<LatticeDomain>, circle: DiscreteCircle, f: F) -> Result<Self>
    where
        F: Fn([i64; 2], Point) -> Result<u32> + Sync,
    {
        let states = (0..domain.len())
            .into_par_iter()
            .map(|k| f(domain.site(k), domain.position(k)).map(|s| s % circle.n_states()))
            .collect::<Result<Vec<u32>>>()?;
        Ok(Self {
            domain,
            circle,
            states,
        })
    }

    pub fn domain(&self) -> &LatticeDomain {
        &self.domain
    }

    pub fn domain_arc(&self) -> &Arc<LatticeDomain> {
        &self.domain
    }

    pub fn circle(&self) -> &DiscreteCircle {
        &self.circle
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn epsilon(&self) -> f64 {
        self.domain.epsilon
    }

    pub fn state_at(&self, ix: i64, iy: i64) -> Option<u32> {
        self.domain.index_of(ix, iy).map(|k| self.states[k])
    }

    pub fn vector(&self, k: usize) -> UnitVector {
        self.circle.state_vector(self.states[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleMode {
    /// Sample at each lattice site.
    AtSite,
    /// Sample at the midpoint `lambda (z + (1/2, 1/2))` of the half-open
    /// `lambda`-cell `z` containing the site.
    CellMidpoint { lambda: f64 },
}

/// Index of the half-open cell `lambda [z, z+1)` containing `x`.
pub fn cell_index(x: f64, lambda: f64) -> i64 {
    (x / lambda).floor() as i64
}

/// Discretize a continuum map in domain and codomain.
pub fn sample_map<M: SpinMap + ?Sized>(
    map: &M,
    domain: Arc<LatticeDomain>,
    circle: DiscreteCircle,
    mode: SampleMode,
) -> Result<SpinField> {
    if let SampleMode::CellMidpoint { lambda } = mode {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("cell size must be positive, got {lambda}")));
        }
    }
    SpinField::try_from_fn(domain, circle, |_, p| {
        let q = match mode {
            SampleMode::AtSite => p,
            SampleMode::CellMidpoint { lambda } => Point::new(
                lambda * (cell_index(p.x, lambda) as f64 + 0.5),
                lambda * (cell_index(p.y, lambda) as f64 + 0.5),
            ),
        };
        let u = map.value(q).ok_or(Error::SingularSample { x: q.x, y: q.y })?;
        Ok(project_to_discrete(&u, &circle))
    })
}

/// One bond across which the field jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpRecord {
    pub bond: (usize, usize),
    pub traces: (UnitVector, UnitVector),
    pub jump_length: f64,
    /// Direction from the first to the second site, `e1` or `e2`.
    pub normal: [f64; 2],
    pub edge_measure: f64,
}

pub fn jump_set(field: &SpinField) -> Vec<JumpRecord> {
    let eps = field.epsilon();
    field
        .domain
        .bonds()
        .filter(|&(a, b, _)| field.states[a] != field.states[b])
        .map(|(a, b, axis)| {
            let ua = field.vector(a);
            let ub = field.vector(b);
            JumpRecord {
                bond: (a, b),
                traces: (ua, ub),
                jump_length: field.circle.state_distance(field.states[a], field.states[b]),
                normal: match axis {
                    Axis::Horizontal => [1.0, 0.0],
                    Axis::Vertical => [0.0, 1.0],
                },
                edge_measure: eps,
            }
        })
        .collect()
}

/// `|A|_{2,1}`: sum of the Euclidean norms of the columns of `A`.
pub fn norm_2_1(a: &[[f64; 2]; 2]) -> f64 {
    a[0][0].hypot(a[1][0]) + a[0][1].hypot(a[1][1])
}

pub fn norm_1(v: &[f64; 2]) -> f64 {
    v[0].abs() + v[1].abs()
}

/// Field constant on the half-open cells `lambda (z + [0,1)^2)` of a finite
/// block of cells. Lookups outside the block use the nearest stored cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PcField {
    lambda: f64,
    cell_min: [i64; 2],
    dims: [usize; 2],
    values: Vec<UnitVector>,
}

impl PcField {
    pub fn new(lambda: f64, cell_min: [i64; 2], dims: [usize; 2], values: Vec<UnitVector>) -> Result<Self> {
        if !(lambda > 0.0) || dims[0] == 0 || dims[1] == 0 || values.len() != dims[0] * dims[1] {
            return Err(Error::InvalidParameter(format!(
                "piecewise-constant field needs lambda > 0 and {}x{} values, got {}",
                dims[0],
                dims[1],
                values.len()
            )));
        }
        Ok(Self {
            lambda,
            cell_min,
            dims,
            values,
        })
    }

    /// Cells covering the bounding box of `cover`, each valued by `f` at its
    /// cell index.
    pub fn from_fn<F>(lambda: f64, cover: &Shape, f: F) -> Result<Self>
    where
        F: Fn([i64; 2]) -> Result<UnitVector>,
    {
        let (lo, hi) = cover.bounds();
        let cmin = [cell_index(lo.x, lambda), cell_index(lo.y, lambda)];
        let cmax = [cell_index(hi.x, lambda), cell_index(hi.y, lambda)];
        let dims = [(cmax[0] - cmin[0] + 1) as usize, (cmax[1] - cmin[1] + 1) as usize];
        let mut values = Vec::with_capacity(dims[0] * dims[1]);
        for cy in cmin[1]..=cmax[1] {
            for cx in cmin[0]..=cmax[0] {
                values.push(f([cx, cy])?);
            }
        }
        Self::new(lambda, cmin, dims, values)
    }

    /// Midpoint discretization `u(lambda (z + (1/2, 1/2)))` on the cells
    /// covering `cover`.
    pub fn sample_midpoints<M: SpinMap + ?Sized>(map: &M, lambda: f64, cover: &Shape) -> Result<Self> {
        Self::from_fn(lambda, cover, |[cx, cy]| {
            let q = Point::new(lambda * (cx as f64 + 0.5), lambda * (cy as f64 + 0.5));
            map.value(q).ok_or(Error::SingularSample { x: q.x, y: q.y })
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn cell_min(&self) -> [i64; 2] {
        self.cell_min
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn values(&self) -> &[UnitVector] {
        &self.values
    }

    /// Value of cell `(cx, cy)`, clamped into the stored block.
    pub fn cell(&self, cx: i64, cy: i64) -> UnitVector {
        let x = (cx - self.cell_min[0]).clamp(0, self.dims[0] as i64 - 1) as usize;
        let y = (cy - self.cell_min[1]).clamp(0, self.dims[1] as i64 - 1) as usize;
        self.values[y * self.dims[0] + x]
    }

    /// Value at a point (half-open cell convention).
    pub fn at(&self, p: Point) -> UnitVector {
        self.cell(cell_index(p.x, self.lambda), cell_index(p.y, self.lambda))
    }

    /// Largest geodesic distance between values of cells sharing a face.
    pub fn max_face_jump(&self) -> f64 {
        let [nx, ny] = self.dims;
        let mut worst: f64 = 0.0;
        for y in 0..ny {
            for x in 0..nx {
                let v = &self.values[y * nx + x];
                if x + 1 < nx {
                    worst = worst.max(geodesic_distance(v, &self.values[y * nx + x + 1]));
                }
                if y + 1 < ny {
                    worst = worst.max(geodesic_distance(v, &self.values[(y + 1) * nx + x]));
                }
            }
        }
        worst
    }
}
