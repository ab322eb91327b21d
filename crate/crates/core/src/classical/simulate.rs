//! Exact continuous-time Monte Carlo for the classical models.
//!
//! Waiting times are exponential in the total rate and the next event is
//! chosen proportionally to its rate, so trajectories realize the generator
//! exactly. Event selection is a single linear scan over a persistent rate
//! table; after each event only the slots touching the changed sites are
//! refreshed, while the total rate is re-summed over the whole table each
//! step so that trajectories do not depend on floating-point update order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{
    apply_event_in_place, ClassicalModelSpec, Configuration, EventKind, ModelKind,
};
use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;

/// Counter-based stream identity: `(master seed, trajectory index)` pairs
/// give reproducible, order-independent ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TrajectorySeed {
    pub master: u64,
    pub stream: u64,
}

impl TrajectorySeed {
    pub fn new(master: u64, stream: u64) -> Self {
        TrajectorySeed { master, stream }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// A recorded realization of the process: initial configuration, the ordered
/// jump times with their events, the terminal time, and the seed that
/// produced it.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Trajectory {
    pub initial: Configuration,
    pub events: Vec<(f64, EventKind)>,
    pub t_end: f64,
    pub seed: TrajectorySeed,
}

impl Trajectory {
    pub fn n_events(&self) -> usize {
        self.events.len()
    }

    /// Replay the events from the initial configuration, checking that every
    /// transfer is kinematically admissible, and return the final state.
    pub fn replay(&self, spec: &ClassicalModelSpec) -> Result<Configuration> {
        let cap = spec.cap();
        let mut occ = self.initial.occ.clone();
        let mut prev_t = 0.0;
        for &(t, kind) in &self.events {
            if t <= prev_t {
                return Err(Error::ModelSpec(format!(
                    "jump times not strictly increasing at t={t}"
                )));
            }
            prev_t = t;
            let admissible = match kind {
                EventKind::BulkJump { from, to } => occ[from] >= 1 && occ[to] < cap,
                EventKind::Exit { site } => occ[site] >= 1,
                EventKind::Entry { site } => occ[site] < cap,
            };
            if !admissible {
                return Err(Error::ModelSpec(format!(
                    "inadmissible event {kind:?} at t={t} during replay"
                )));
            }
            apply_event_in_place(&mut occ, kind, cap);
        }
        Ok(Configuration::from_occupancies(occ))
    }

    /// Time-weighted average of an observable over `[burn_in, t_end]`.
    pub fn time_average<F>(&self, spec: &ClassicalModelSpec, burn_in: f64, f: F) -> f64
    where
        F: Fn(&Configuration) -> f64,
    {
        let cap = spec.cap();
        let mut occ = self.initial.occ.clone();
        let mut t = 0.0f64;
        let mut acc = 0.0f64;
        let mut weight = 0.0f64;
        let mut push = |occ: &[u32], from: f64, to: f64, acc: &mut f64, w: &mut f64| {
            let lo = from.max(burn_in);
            if to > lo {
                let c = Configuration::from_occupancies(occ.to_vec());
                *acc += f(&c) * (to - lo);
                *w += to - lo;
            }
        };
        for &(te, kind) in &self.events {
            push(&occ, t, te.min(self.t_end), &mut acc, &mut weight);
            apply_event_in_place(&mut occ, kind, cap);
            t = te;
        }
        push(&occ, t, self.t_end, &mut acc, &mut weight);
        if weight > 0.0 {
            acc / weight
        } else {
            f(&Configuration::from_occupancies(occ))
        }
    }
}

/// Persistent event-rate table in canonical slot order: per-site bulk jumps
/// (one slot per in-region neighbour), then boundary exits, then entries.
struct Kinetics<'a> {
    spec: &'a ClassicalModelSpec,
    geom: &'a LatticeGeometry,
    occ: Vec<u32>,
    rates: Vec<f64>,
    slot_event: Vec<EventKind>,
    /// First bulk slot per source site.
    bulk_start: Vec<usize>,
    /// Exit/entry slot per site; usize::MAX for interior sites.
    exit_slot: Vec<usize>,
    entry_slot: Vec<usize>,
    /// Cached reservoir rates per boundary site.
    injection: Vec<f64>,
}

impl<'a> Kinetics<'a> {
    fn new(
        c0: &Configuration,
        spec: &'a ClassicalModelSpec,
        geom: &'a LatticeGeometry,
    ) -> Result<Self> {
        c0.validate(spec, geom)?;
        spec.validate_for(geom)?;
        let mut slot_event = Vec::new();
        let mut bulk_start = vec![0usize; geom.len()];
        for from in 0..geom.len() {
            bulk_start[from] = slot_event.len();
            for &to in geom.neighbors(from) {
                slot_event.push(EventKind::BulkJump { from, to });
            }
        }
        let mut exit_slot = vec![usize::MAX; geom.len()];
        for &b in geom.boundary() {
            exit_slot[b] = slot_event.len();
            slot_event.push(EventKind::Exit { site: b });
        }
        let mut entry_slot = vec![usize::MAX; geom.len()];
        for &b in geom.boundary() {
            entry_slot[b] = slot_event.len();
            slot_event.push(EventKind::Entry { site: b });
        }
        let mut injection = vec![0.0; geom.len()];
        for &b in geom.boundary() {
            injection[b] = spec.boundary_rate(geom, b);
        }
        let mut k = Kinetics {
            spec,
            geom,
            occ: c0.occ.clone(),
            rates: vec![0.0; slot_event.len()],
            slot_event,
            bulk_start,
            exit_slot,
            entry_slot,
            injection,
        };
        for s in 0..geom.len() {
            k.refresh_site(s);
        }
        Ok(k)
    }

    /// Recompute the slots whose rate depends on the occupancy of `site`:
    /// its own outgoing jumps, its exit/entry, and jumps targeting it.
    fn refresh_site(&mut self, site: usize) {
        self.refresh_outgoing(site);
        let neighbors: &[usize] = self.geom.neighbors(site);
        for idx in 0..neighbors.len() {
            let y = self.geom.neighbors(site)[idx];
            self.refresh_outgoing(y);
        }
        if self.exit_slot[site] != usize::MAX {
            let n = self.occ[site];
            let r = self.geom.exit_multiplicity(site) as f64;
            self.rates[self.exit_slot[site]] = match self.spec.kind() {
                ModelKind::SimpleExclusion => r * n as f64,
                ModelKind::ZeroRange => r * self.spec.g(n),
            };
            self.rates[self.entry_slot[site]] = if n < self.spec.cap() {
                self.injection[site]
            } else {
                0.0
            };
        }
    }

    fn refresh_outgoing(&mut self, from: usize) {
        let cap = self.spec.cap();
        let n_from = self.occ[from];
        let g_out = if n_from == 0 { 0.0 } else { self.spec.g(n_from) };
        let start = self.bulk_start[from];
        for (offset, &to) in self.geom.neighbors(from).iter().enumerate() {
            let admissible = n_from >= 1 && self.occ[to] < cap;
            self.rates[start + offset] = if admissible {
                match self.spec.kind() {
                    ModelKind::SimpleExclusion => 1.0,
                    ModelKind::ZeroRange => g_out,
                }
            } else {
                0.0
            };
        }
    }

    fn total_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    /// Select the slot at cumulative position `target`; `target` must lie in
    /// `[0, total)`.
    fn select(&self, target: f64) -> usize {
        let mut acc = 0.0;
        for (slot, &r) in self.rates.iter().enumerate() {
            acc += r;
            if target < acc {
                return slot;
            }
        }
        // Rounding pushed the target past the last positive slot.
        self.rates
            .iter()
            .rposition(|&r| r > 0.0)
            .expect("select called with zero total rate")
    }

    fn fire(&mut self, slot: usize) -> EventKind {
        let kind = self.slot_event[slot];
        apply_event_in_place(&mut self.occ, kind, self.spec.cap());
        match kind {
            EventKind::BulkJump { from, to } => {
                self.refresh_site(from);
                self.refresh_site(to);
            }
            EventKind::Exit { site } | EventKind::Entry { site } => {
                self.refresh_site(site);
            }
        }
        kind
    }
}

/// Run the process from `c0` up to `t_end`, recording every event.
///
/// Deterministic given the seed: repeated runs produce bit-identical event
/// lists. For long runs where the event list would not fit in memory, use
/// [`simulate_observe`].
pub fn simulate(
    c0: &Configuration,
    spec: &ClassicalModelSpec,
    geom: &LatticeGeometry,
    t_end: f64,
    seed: TrajectorySeed,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::ModelSpec(format!("t_end must be positive, got {t_end}")));
    }
    let mut kinetics = Kinetics::new(c0, spec, geom)?;
    let mut rng = seed.rng();
    let mut events = Vec::new();
    let mut t = 0.0f64;
    loop {
        let total = kinetics.total_rate();
        if total <= 0.0 {
            break;
        }
        let u: f64 = rng.random();
        t += -(1.0 - u).ln() / total;
        if t > t_end {
            break;
        }
        let target = rng.random::<f64>() * total;
        let kind = kinetics.fire(kinetics.select(target));
        events.push((t, kind));
    }
    Ok(Trajectory { initial: c0.clone(), events, t_end, seed })
}

/// Run the process, invoking `observe(t_k, occupancies)` at the regular
/// sample times `0, dt, 2·dt, …` up to `t_end`, without recording events.
/// Returns the final configuration.
pub fn simulate_observe<F>(
    c0: &Configuration,
    spec: &ClassicalModelSpec,
    geom: &LatticeGeometry,
    t_end: f64,
    sample_dt: f64,
    seed: TrajectorySeed,
    mut observe: F,
) -> Result<Configuration>
where
    F: FnMut(f64, &[u32]),
{
    if !(t_end > 0.0) || !(sample_dt > 0.0) {
        return Err(Error::ModelSpec(format!(
            "t_end and sample_dt must be positive, got {t_end}, {sample_dt}"
        )));
    }
    let mut kinetics = Kinetics::new(c0, spec, geom)?;
    let mut rng = seed.rng();
    let mut t = 0.0f64;
    let mut next_sample = 0u64;
    let sample_time = |k: u64| k as f64 * sample_dt;
    loop {
        let total = kinetics.total_rate();
        let t_next = if total > 0.0 {
            let u: f64 = rng.random();
            t + -(1.0 - u).ln() / total
        } else {
            f64::INFINITY
        };
        while sample_time(next_sample) <= t_next.min(t_end) && sample_time(next_sample) <= t_end {
            observe(sample_time(next_sample), &kinetics.occ);
            next_sample += 1;
        }
        if t_next > t_end {
            break;
        }
        t = t_next;
        let target = rng.random::<f64>() * total;
        kinetics.fire(kinetics.select(target));
    }
    Ok(Configuration::from_occupancies(kinetics.occ))
}
