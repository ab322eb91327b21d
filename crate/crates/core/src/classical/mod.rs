//! Classical boundary-driven lattice gases: simple exclusion and zero range.
//!
//! The Markov generator is realized three ways, each checkable against the
//! others: an event-rate catalogue driving exact continuous-time Monte Carlo
//! ([`simulate`]), an explicit generator matrix on enumerable configuration
//! spaces ([`generator`]), and closed-form stationary oracles
//! ([`oracle::sep_moment_oracle`], [`oracle::zrp_product_measure`]).

pub mod generator;
pub mod oracle;
pub mod simulate;
pub mod stats;

pub use generator::{build_generator_matrix, stationary_distribution, GeneratorMatrix};
pub use oracle::{sep_moment_oracle, sep_profile_oracle, zrp_product_measure};
pub use simulate::{simulate, simulate_observe, Trajectory, TrajectorySeed};
pub use stats::{batch_means, integrated_autocorr_time, replica_estimate, CovarianceEstimate};

use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;

/// Which lattice gas the specification describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModelKind {
    SimpleExclusion,
    ZeroRange,
}

/// Reservoir injection rate at the boundary, evaluated at the macroscopic
/// position of the boundary site.
///
/// The ramp variants express the rate through the macroscopic boundary data
/// they are meant to realize: a boundary site with exit multiplicity `r`
/// balances injection `h` against extraction `r·(local exit rate)`, so the
/// site's stationary fugacity approaches `h / r`. `FugacityRamp` injects
/// `r·φ(u)` to pin the fugacity at `φ(u)`; `DensityRamp` does the same for an
/// exclusion gas, whose fugacity at density `ρ` is `ρ/(1−ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Reservoir {
    Constant(f64),
    /// Rate interpolated linearly in the first macroscopic coordinate.
    Linear { left: f64, right: f64 },
    /// Rate `r_b · φ(u)` with `φ` linear in the first macroscopic coordinate.
    FugacityRamp { left: f64, right: f64 },
    /// Rate `r_b · ρ(u)/(1−ρ(u))` with `ρ` linear in the first coordinate.
    DensityRamp { left: f64, right: f64 },
}

impl Reservoir {
    /// Injection rate at macroscopic position `u` for a boundary site with
    /// the given exit multiplicity.
    pub fn rate(&self, u: &[f64], exit_multiplicity: u32) -> f64 {
        let r = exit_multiplicity as f64;
        match *self {
            Reservoir::Constant(c) => c,
            Reservoir::Linear { left, right } => left + (right - left) * u[0],
            Reservoir::FugacityRamp { left, right } => r * (left + (right - left) * u[0]),
            Reservoir::DensityRamp { left, right } => {
                let rho = left + (right - left) * u[0];
                r * rho / (1.0 - rho)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let check_pos = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::ModelSpec(format!("{what} must be positive, got {v}")))
            }
        };
        match *self {
            Reservoir::Constant(c) => check_pos(c, "constant reservoir rate"),
            Reservoir::Linear { left, right } => {
                check_pos(left, "left reservoir rate")?;
                check_pos(right, "right reservoir rate")
            }
            Reservoir::FugacityRamp { left, right } => {
                check_pos(left, "left boundary fugacity")?;
                check_pos(right, "right boundary fugacity")
            }
            Reservoir::DensityRamp { left, right } => {
                for (v, what) in [(left, "left boundary density"), (right, "right boundary density")]
                {
                    if !(v > 0.0 && v < 1.0) {
                        return Err(Error::ModelSpec(format!(
                            "{what} must lie in (0,1) for exclusion, got {v}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Full specification of a classical model: the variant, the reservoir
/// function, and (for zero range) the jump-rate table `g` with its
/// occupancy cap.
///
/// The zero-range alphabet is truncated at `cap`, with reservoir injection
/// suppressed on a capped site; the matching quantum model uses the same
/// convention, so classical/quantum comparisons are exact identities.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClassicalModelSpec {
    kind: ModelKind,
    reservoir: Reservoir,
    /// `g[k]` = jump rate out of a site holding `k` particles. For the
    /// exclusion model this is `[0, 1]`.
    jump_rate: Vec<f64>,
}

impl ClassicalModelSpec {
    /// Simple exclusion: occupancies in `{0,1}`, unit bulk hop rate onto
    /// empty neighbours.
    pub fn sep(reservoir: Reservoir) -> Result<Self> {
        reservoir.validate()?;
        Ok(ClassicalModelSpec {
            kind: ModelKind::SimpleExclusion,
            reservoir,
            jump_rate: vec![0.0, 1.0],
        })
    }

    /// Zero range with rate table `g` (indexed by occupancy, `g[0] = 0`);
    /// the occupancy cap is `g.len() - 1`.
    pub fn zrp(reservoir: Reservoir, jump_rate: Vec<f64>) -> Result<Self> {
        reservoir.validate()?;
        if jump_rate.len() < 2 {
            return Err(Error::ModelSpec(
                "zero-range rate table needs at least occupancies 0 and 1".into(),
            ));
        }
        if jump_rate[0] != 0.0 {
            return Err(Error::ModelSpec(format!(
                "g(0) must vanish, got {}",
                jump_rate[0]
            )));
        }
        for (k, &gk) in jump_rate.iter().enumerate().skip(1) {
            if !(gk > 0.0 && gk.is_finite()) {
                return Err(Error::ModelSpec(format!(
                    "g({k}) must be positive and finite, got {gk}"
                )));
            }
        }
        Ok(ClassicalModelSpec {
            kind: ModelKind::ZeroRange,
            reservoir,
            jump_rate,
        })
    }

    /// Zero range with `g(k) = 1` for `k ≥ 1` (geometric marginals).
    pub fn zrp_constant_rate(reservoir: Reservoir, cap: u32) -> Result<Self> {
        let mut g = vec![1.0; cap as usize + 1];
        g[0] = 0.0;
        Self::zrp(reservoir, g)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn reservoir(&self) -> &Reservoir {
        &self.reservoir
    }

    /// Occupancy cap: 1 for exclusion, `n_max` for truncated zero range.
    pub fn cap(&self) -> u32 {
        (self.jump_rate.len() - 1) as u32
    }

    /// Number of occupancy values per site.
    pub fn alphabet_size(&self) -> usize {
        self.jump_rate.len()
    }

    /// Jump rate `g(k)` out of a site holding `k` particles.
    pub fn g(&self, k: u32) -> f64 {
        self.jump_rate[k as usize]
    }

    pub fn jump_rate_table(&self) -> &[f64] {
        &self.jump_rate
    }

    /// Injection rate at boundary site `b` of the geometry.
    pub fn boundary_rate(&self, geom: &LatticeGeometry, b: usize) -> f64 {
        self.reservoir
            .rate(&geom.macro_coords(b), geom.exit_multiplicity(b))
    }

    /// Check the reservoir is strictly positive on every boundary site.
    pub fn validate_for(&self, geom: &LatticeGeometry) -> Result<()> {
        for &b in geom.boundary() {
            let h = self.boundary_rate(geom, b);
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::ModelSpec(format!(
                    "reservoir rate at boundary site {b} is {h}; must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// An occupancy configuration over the lattice sites.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Configuration {
    pub occ: Vec<u32>,
}

impl Configuration {
    pub fn empty(geom: &LatticeGeometry) -> Self {
        Configuration { occ: vec![0; geom.len()] }
    }

    pub fn from_occupancies(occ: Vec<u32>) -> Self {
        Configuration { occ }
    }

    pub fn total_particles(&self) -> u64 {
        self.occ.iter().map(|&n| n as u64).sum()
    }

    pub fn validate(&self, spec: &ClassicalModelSpec, geom: &LatticeGeometry) -> Result<()> {
        if self.occ.len() != geom.len() {
            return Err(Error::ModelSpec(format!(
                "configuration has {} sites, geometry has {}",
                self.occ.len(),
                geom.len()
            )));
        }
        let cap = spec.cap();
        if let Some((i, &n)) = self.occ.iter().enumerate().find(|&(_, &n)| n > cap) {
            return Err(Error::ModelSpec(format!(
                "occupancy {n} at site {i} exceeds the alphabet cap {cap}"
            )));
        }
        Ok(())
    }
}

/// A possible transition together with its rate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EventKind {
    /// Particle transfer along an ordered nearest-neighbour pair.
    BulkJump { from: usize, to: usize },
    /// Particle lost to the reservoirs at a boundary site.
    Exit { site: usize },
    /// Particle injected by the reservoirs at a boundary site.
    Entry { site: usize },
}

/// Enumerate the admissible transitions out of `c` with their rates, in
/// canonical order: bulk jumps by (source site, neighbour) ascending, then
/// exits over the boundary list, then entries. Events whose generator weight
/// vanishes (zero rate or kinematically inadmissible transfer) are omitted.
pub fn event_rates(
    c: &Configuration,
    spec: &ClassicalModelSpec,
    geom: &LatticeGeometry,
) -> Vec<Event> {
    let cap = spec.cap();
    let mut events = Vec::new();
    for from in 0..geom.len() {
        let n_from = c.occ[from];
        if n_from == 0 {
            continue;
        }
        let g_out = spec.g(n_from);
        for &to in geom.neighbors(from) {
            if c.occ[to] >= cap {
                continue;
            }
            let rate = match spec.kind {
                // n_x (1 − n_y) with n ∈ {0,1}
                ModelKind::SimpleExclusion => 1.0,
                ModelKind::ZeroRange => g_out,
            };
            if rate > 0.0 {
                events.push(Event { kind: EventKind::BulkJump { from, to }, rate });
            }
        }
    }
    for &b in geom.boundary() {
        let n_b = c.occ[b];
        if n_b == 0 {
            continue;
        }
        let r = geom.exit_multiplicity(b) as f64;
        let rate = match spec.kind {
            ModelKind::SimpleExclusion => r,
            ModelKind::ZeroRange => r * spec.g(n_b),
        };
        if rate > 0.0 {
            events.push(Event { kind: EventKind::Exit { site: b }, rate });
        }
    }
    for &b in geom.boundary() {
        if c.occ[b] >= cap {
            continue;
        }
        let rate = spec.boundary_rate(geom, b);
        if rate > 0.0 {
            events.push(Event { kind: EventKind::Entry { site: b }, rate });
        }
    }
    events
}

/// Apply an event to a configuration. Kinematically inadmissible transfers
/// leave the configuration unchanged.
pub fn apply_event(c: &Configuration, kind: EventKind, spec: &ClassicalModelSpec) -> Configuration {
    let mut out = c.clone();
    apply_event_in_place(&mut out.occ, kind, spec.cap());
    out
}

pub(crate) fn apply_event_in_place(occ: &mut [u32], kind: EventKind, cap: u32) {
    match kind {
        EventKind::BulkJump { from, to } => {
            if occ[from] >= 1 && occ[to] < cap {
                occ[from] -= 1;
                occ[to] += 1;
            }
        }
        EventKind::Exit { site } => {
            if occ[site] >= 1 {
                occ[site] -= 1;
            }
        }
        EventKind::Entry { site } => {
            if occ[site] < cap {
                occ[site] += 1;
            }
        }
    }
}
