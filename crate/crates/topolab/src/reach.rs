//! Desk-scale controlled systems and attainability.
//!
//! Two systems are simulated exactly enough to feed the topology machinery:
//! a trivial system whose first coordinate never moves (the attainable set
//! is a vertical line, so metric approximate controllability fails), and a
//! one-dimensional bilinear Schrödinger equation on [0,1] with Dirichlet
//! ends, advanced by Crank-Nicolson steps. Terminal states are sampled into
//! an attainable cloud, quantized onto a small cell universe, and handed to
//! the density-topology verdicts: the cells actually reached form a set
//! that is dense in its own density topology whenever the cloud is
//! nonempty, while epsilon-density in the metric can still fail.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::set::{Subset, Universe, MAX_UNIVERSE};
use crate::topology::{mu_topology, FiniteTopology};
use crate::{Error, Result};

pub mod defaults {
    pub const GRID_POINTS: usize = 63;
    pub const TIME_STEP: f64 = 1e-3;
    pub const HORIZON: f64 = 0.1;
    pub const SEGMENTS: usize = 4;
    pub const AMPLITUDE: f64 = 5.0;
    pub const SAMPLES: u32 = 50;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SystemKind {
    /// `x1' = 0`, `x2' = u`: the first coordinate is frozen at `c`.
    Trivial { c: f64 },
    /// `i φ_t = -φ_xx - u x φ` on (0,1), `grid_points` interior nodes,
    /// Dirichlet ends, Crank-Nicolson steps of length `dt`.
    Schrodinger { grid_points: usize, dt: f64 },
}

/// A system plus its admissible-control shape: piecewise-constant controls
/// with `segments` pieces, every value within `[-amplitude, amplitude]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlledSystem {
    #[serde(flatten)]
    pub kind: SystemKind,
    pub segments: usize,
    pub amplitude: f64,
}

impl ControlledSystem {
    pub fn trivial(c: f64, segments: usize, amplitude: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::BadParameter("c must be finite"));
        }
        Self::check_control_shape(segments, amplitude)?;
        Ok(ControlledSystem {
            kind: SystemKind::Trivial { c },
            segments,
            amplitude,
        })
    }

    pub fn schrodinger(grid_points: usize, dt: f64, segments: usize, amplitude: f64) -> Result<Self> {
        if grid_points < 3 {
            return Err(Error::BadParameter("grid must have at least 3 interior points"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::BadParameter("time step must be positive and finite"));
        }
        Self::check_control_shape(segments, amplitude)?;
        Ok(ControlledSystem {
            kind: SystemKind::Schrodinger { grid_points, dt },
            segments,
            amplitude,
        })
    }

    fn check_control_shape(segments: usize, amplitude: f64) -> Result<()> {
        if segments < 1 {
            return Err(Error::BadParameter("control needs at least one segment"));
        }
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::BadParameter("amplitude must be positive and finite"));
        }
        Ok(())
    }
}

/// State of a controlled system: a point of the plane or a wave sampled at
/// the interior grid nodes (boundary values are implicitly zero).
#[derive(Debug, Clone, PartialEq)]
pub enum StateVector {
    Point { x1: f64, x2: f64 },
    Wave(Vec<Complex64>),
}

impl StateVector {
    pub fn point(x1: f64, x2: f64) -> Self {
        StateVector::Point { x1, x2 }
    }

    pub fn wave(amplitudes: Vec<Complex64>) -> Self {
        StateVector::Wave(amplitudes)
    }
}

/// Waves serialize as arrays of `[re, im]` pairs, points as `[x1, x2]`.
impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        match self {
            StateVector::Point { x1, x2 } => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(x1)?;
                seq.serialize_element(x2)?;
                seq.end()
            }
            StateVector::Wave(amps) => {
                let mut seq = serializer.serialize_seq(Some(amps.len()))?;
                for z in amps {
                    seq.serialize_element(&[z.re, z.im])?;
                }
                seq.end()
            }
        }
    }
}

/// Zero initial wave on `n` interior nodes.
pub fn zero_wave(n: usize) -> StateVector {
    StateVector::Wave(vec![Complex64::new(0.0, 0.0); n])
}

/// `sin(πx)` sampled at the interior nodes and normalized in the discrete
/// L² norm.
pub fn sine_wave(n: usize) -> StateVector {
    let h = 1.0 / (n as f64 + 1.0);
    let raw: Vec<f64> = (0..n).map(|j| (std::f64::consts::PI * (j as f64 + 1.0) * h).sin()).collect();
    let norm = (h * raw.iter().map(|v| v * v).sum::<f64>()).sqrt();
    StateVector::Wave(raw.into_iter().map(|v| Complex64::new(v / norm, 0.0)).collect())
}

/// Discrete L² norm `sqrt(h Σ |φ_j|²)` with `h = 1/(n+1)`.
pub fn wave_norm(amplitudes: &[Complex64]) -> f64 {
    let h = 1.0 / (amplitudes.len() as f64 + 1.0);
    (h * amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// Metric used by the epsilon-density check: Euclidean for points,
/// discrete L² for waves.
pub fn state_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    match (a, b) {
        (StateVector::Point { x1: a1, x2: a2 }, StateVector::Point { x1: b1, x2: b2 }) => {
            Ok(((a1 - b1).powi(2) + (a2 - b2).powi(2)).sqrt())
        }
        (StateVector::Wave(wa), StateVector::Wave(wb)) if wa.len() == wb.len() => {
            let diff: Vec<Complex64> = wa.iter().zip(wb).map(|(x, y)| x - y).collect();
            Ok(wave_norm(&diff))
        }
        _ => Err(Error::InconsistentDimensions),
    }
}

fn check_horizon(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::BadParameter("horizon must be positive and finite"));
    }
    Ok(())
}

fn check_control(sys: &ControlledSystem, control: &[f64]) -> Result<()> {
    if control.len() != sys.segments {
        return Err(Error::InconsistentDimensions);
    }
    for &u in control {
        if !u.is_finite() || u.abs() > sys.amplitude * (1.0 + 1e-12) {
            return Err(Error::BadParameter("control value outside the amplitude bound"));
        }
    }
    Ok(())
}

/// Advances the system from `x0` to time `t_horizon` under a
/// piecewise-constant control, returning the state after every step (the
/// initial state first). The trivial system updates analytically once per
/// segment; the wave system takes Crank-Nicolson steps of length `dt`, the
/// horizon splitting into a whole number of steps per segment.
pub fn simulate(
    sys: &ControlledSystem,
    control: &[f64],
    x0: &StateVector,
    t_horizon: f64,
) -> Result<Vec<StateVector>> {
    check_horizon(t_horizon)?;
    check_control(sys, control)?;
    match (&sys.kind, x0) {
        (SystemKind::Trivial { .. }, StateVector::Point { x1, x2 }) => {
            let delta = t_horizon / sys.segments as f64;
            let mut states = Vec::with_capacity(sys.segments + 1);
            states.push(x0.clone());
            let mut acc = *x2;
            for &u in control {
                acc += u * delta;
                states.push(StateVector::Point { x1: *x1, x2: acc });
            }
            Ok(states)
        }
        (SystemKind::Schrodinger { grid_points, dt }, StateVector::Wave(amps)) => {
            if amps.len() != *grid_points {
                return Err(Error::InconsistentDimensions);
            }
            let per_segment = t_horizon / (sys.segments as f64 * dt);
            let rounded = per_segment.round();
            if rounded < 1.0 || (per_segment - rounded).abs() > 1e-9 * per_segment.max(1.0) {
                return Err(Error::SegmentMisaligned);
            }
            let steps_per_segment = rounded as usize;
            let mut phi = amps.clone();
            let mut states = Vec::with_capacity(sys.segments * steps_per_segment + 1);
            states.push(x0.clone());
            for &u in control {
                for _ in 0..steps_per_segment {
                    cn_step(&mut phi, *grid_points, *dt, u)?;
                    states.push(StateVector::Wave(phi.clone()));
                }
            }
            Ok(states)
        }
        _ => Err(Error::InconsistentDimensions),
    }
}

/// One Crank-Nicolson step for `i φ_t = -φ_xx - u x φ`. The spatial
/// operator is real symmetric, so the step is a Cayley transform and
/// preserves the discrete norm in exact arithmetic.
fn cn_step(phi: &mut [Complex64], n: usize, dt: f64, u: f64) -> Result<()> {
    let h = 1.0 / (n as f64 + 1.0);
    let inv_h2 = 1.0 / (h * h);
    let half = Complex64::new(0.0, dt / 2.0);

    // H diag: 2/h² - u x_j; off-diagonals: -1/h².
    let a_off = -half * inv_h2;
    let b_off = half * inv_h2;

    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut a_diag = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let x_j = (j as f64 + 1.0) * h;
        let h_diag = 2.0 * inv_h2 - u * x_j;
        a_diag[j] = Complex64::new(1.0, 0.0) + half * h_diag;
        let bd = Complex64::new(1.0, 0.0) - half * h_diag;
        let left = if j > 0 { phi[j - 1] } else { Complex64::new(0.0, 0.0) };
        let right = if j + 1 < n { phi[j + 1] } else { Complex64::new(0.0, 0.0) };
        rhs[j] = bd * phi[j] + b_off * (left + right);
    }

    // Thomas elimination; the matrix is strictly diagonally dominant for
    // the supported dt range, so no pivoting is needed.
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    c_prime[0] = a_off / a_diag[0];
    rhs[0] /= a_diag[0];
    for j in 1..n {
        let denom = a_diag[j] - a_off * c_prime[j - 1];
        if j + 1 < n {
            c_prime[j] = a_off / denom;
        }
        rhs[j] = (rhs[j] - a_off * rhs[j - 1]) / denom;
    }
    phi[n - 1] = rhs[n - 1];
    for j in (0..n - 1).rev() {
        phi[j] = rhs[j] - c_prime[j] * phi[j + 1];
    }

    for z in phi.iter() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonfiniteState);
        }
    }
    Ok(())
}

/// Trapezoidal integral of `|φ|²` over `[a, b] ⊆ [0, 1]`, on the piecewise
/// linear interpolant of the node values (boundary nodes are zero).
pub fn probability(state: &StateVector, a: f64, b: f64) -> Result<f64> {
    let amps = match state {
        StateVector::Wave(amps) => amps,
        StateVector::Point { .. } => return Err(Error::InconsistentDimensions),
    };
    if !(a.is_finite() && b.is_finite()) || a < 0.0 || b > 1.0 || a >= b {
        return Err(Error::BadInterval);
    }
    let n = amps.len();
    let h = 1.0 / (n as f64 + 1.0);
    // Node i at x = i·h for i in 0..=n+1, squared magnitude at each node.
    let density = |i: usize| -> f64 {
        if i == 0 || i == n + 1 {
            0.0
        } else {
            amps[i - 1].norm_sqr()
        }
    };
    let value_at = |x: f64| -> f64 {
        let cell = ((x / h).floor() as usize).min(n);
        let x0 = cell as f64 * h;
        let t = (x - x0) / h;
        density(cell) * (1.0 - t) + density(cell + 1) * t
    };
    let mut total = 0.0;
    let first_cell = ((a / h).floor() as usize).min(n);
    let last_cell = ((b / h).ceil() as usize).max(1).min(n + 1) - 1;
    for cell in first_cell..=last_cell {
        let lo = (cell as f64 * h).max(a);
        let hi = ((cell + 1) as f64 * h).min(b);
        if hi > lo {
            total += 0.5 * (value_at(lo) + value_at(hi)) * (hi - lo);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CloudSample {
    pub control: Vec<f64>,
    pub terminal: StateVector,
}

/// Terminal states reached from one initial state at one horizon, each
/// paired with the control that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct AttainableCloud {
    system: ControlledSystem,
    horizon: f64,
    seed: Option<u64>,
    samples: Vec<CloudSample>,
}

impl AttainableCloud {
    pub fn system(&self) -> &ControlledSystem {
        &self.system
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn samples(&self) -> &[CloudSample] {
        &self.samples
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

impl Serialize for AttainableCloud {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AttainableCloud", 5)?;
        s.serialize_field("system", &self.system)?;
        s.serialize_field("T", &self.horizon)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("K", &self.samples.len())?;
        s.serialize_field("samples", &self.samples)?;
        s.end()
    }
}

/// Draws `k` controls uniformly from the admissible box and collects the
/// terminal states. Sample `i` uses stream `i` of the seeded generator, so
/// the cloud is reproducible and samples are independent of each other.
pub fn attainable_cloud(
    sys: &ControlledSystem,
    x0: &StateVector,
    t_horizon: f64,
    k: u32,
    seed: u64,
) -> Result<AttainableCloud> {
    if k < 1 {
        return Err(Error::BadParameter("sample count must be at least 1"));
    }
    let mut samples = Vec::with_capacity(k as usize);
    for i in 0..k {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let control: Vec<f64> = (0..sys.segments)
            .map(|_| rng.gen_range(-sys.amplitude..=sys.amplitude))
            .collect();
        let trajectory = simulate(sys, &control, x0, t_horizon)?;
        let terminal = trajectory.last().expect("trajectory holds x0").clone();
        samples.push(CloudSample { control, terminal });
    }
    Ok(AttainableCloud {
        system: sys.clone(),
        horizon: t_horizon,
        seed: Some(seed),
        samples,
    })
}

/// Builds a cloud from explicitly given controls.
pub fn cloud_from_controls(
    sys: &ControlledSystem,
    x0: &StateVector,
    t_horizon: f64,
    controls: &[Vec<f64>],
) -> Result<AttainableCloud> {
    let mut samples = Vec::with_capacity(controls.len());
    for control in controls {
        let trajectory = simulate(sys, control, x0, t_horizon)?;
        let terminal = trajectory.last().expect("trajectory holds x0").clone();
        samples.push(CloudSample {
            control: control.clone(),
            terminal,
        });
    }
    Ok(AttainableCloud {
        system: sys.clone(),
        horizon: t_horizon,
        seed: None,
        samples,
    })
}

/// How terminal states are reduced to cells of a finite universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "feature", rename_all = "snake_case")]
pub enum FeatureSpec {
    /// Lattice `min, min+step, …, max` over the controlled coordinate;
    /// terminal `x2` snaps to the nearest lattice point, clamped to the
    /// range.
    TrivialGrid { min: f64, max: f64, step: f64 },
    /// One probability `P(a,b)` per interval, binned at the given width;
    /// cells are the product of the per-interval bins.
    ProbabilityBins {
        intervals: Vec<(f64, f64)>,
        width: f64,
    },
}

/// Quantizes a cloud onto a cell universe: the universe lists every cell of
/// the feature grid, and the returned subset holds exactly the cells hit by
/// at least one terminal state.
pub fn quantize(cloud: &AttainableCloud, features: &FeatureSpec) -> Result<(Universe, Subset)> {
    if cloud.samples.is_empty() {
        return Err(Error::EmptyCloud);
    }
    match features {
        FeatureSpec::TrivialGrid { min, max, step } => {
            if !(min.is_finite() && max.is_finite() && step.is_finite() && *step > 0.0 && min < max) {
                return Err(Error::BadParameter("grid needs min < max and a positive step"));
            }
            let span_steps = (max - min) / step;
            let rounded = span_steps.round();
            if (span_steps - rounded).abs() > 1e-9 * span_steps.max(1.0) {
                return Err(Error::BadParameter("grid span must be a whole number of steps"));
            }
            let cells = rounded as usize + 1;
            if cells > MAX_UNIVERSE {
                return Err(Error::TooManyCells { cells });
            }
            let labels: Vec<String> = (0..cells).map(|k| format!("{}", min + k as f64 * step)).collect();
            let universe = Universe::with_labels(cells, labels)?;
            let mut mask = 0u64;
            for sample in &cloud.samples {
                let x2 = match &sample.terminal {
                    StateVector::Point { x2, .. } => *x2,
                    StateVector::Wave(_) => return Err(Error::InconsistentDimensions),
                };
                let k = ((x2 - min) / step).round();
                let cell = if k < 0.0 {
                    0
                } else {
                    (k as usize).min(cells - 1)
                };
                mask |= 1u64 << cell;
            }
            Ok((universe.clone(), universe.subset_from_mask(mask)?))
        }
        FeatureSpec::ProbabilityBins { intervals, width } => {
            if intervals.is_empty() {
                return Err(Error::BadParameter("at least one probability interval is required"));
            }
            if !(width.is_finite() && *width > 0.0 && *width <= 1.0) {
                return Err(Error::BadParameter("bin width must lie in (0, 1]"));
            }
            for &(a, b) in intervals {
                if !(a.is_finite() && b.is_finite()) || a < 0.0 || b > 1.0 || a >= b {
                    return Err(Error::BadInterval);
                }
            }
            let bins = (1.0 / width).ceil() as usize;
            let mut cells: usize = 1;
            for _ in 0..intervals.len() {
                cells = cells.saturating_mul(bins);
                if cells > MAX_UNIVERSE {
                    return Err(Error::TooManyCells { cells });
                }
            }
            let labels: Vec<String> = (0..cells)
                .map(|cell| {
                    let mut rest = cell;
                    let mut parts = Vec::with_capacity(intervals.len());
                    for _ in 0..intervals.len() {
                        parts.push(format!("b{}", rest % bins));
                        rest /= bins;
                    }
                    parts.join(".")
                })
                .collect();
            let universe = Universe::with_labels(cells, labels)?;
            let mut mask = 0u64;
            for sample in &cloud.samples {
                let mut cell = 0usize;
                let mut radix = 1usize;
                for &(a, b) in intervals {
                    let p = probability(&sample.terminal, a, b)?;
                    let idx = ((p / width).floor() as usize).min(bins - 1);
                    cell += idx * radix;
                    radix *= bins;
                }
                mask |= 1u64 << cell;
            }
            Ok((universe.clone(), universe.subset_from_mask(mask)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetCheck {
    pub distance: f64,
    pub within: bool,
}

/// Metric density verdict: every target must be within `eps` of some
/// sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub eps: f64,
    pub targets: Vec<TargetCheck>,
    pub dense_at_eps: bool,
}

pub fn check_eps_density(
    cloud: &AttainableCloud,
    targets: &[StateVector],
    eps: f64,
) -> Result<DensityReport> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::BadParameter("eps must be positive and finite"));
    }
    if cloud.samples.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut checks = Vec::with_capacity(targets.len());
    let mut all_within = true;
    for target in targets {
        let mut best = f64::INFINITY;
        for sample in &cloud.samples {
            best = best.min(state_distance(target, &sample.terminal)?);
        }
        let within = best <= eps;
        all_within &= within;
        checks.push(TargetCheck {
            distance: best,
            within,
        });
    }
    Ok(DensityReport {
        eps,
        targets: checks,
        dense_at_eps: all_within,
    })
}

/// Density-topology verdict for the quantized cloud.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuReport {
    pub universe_size: usize,
    #[serde(rename = "F")]
    pub f: Subset,
    pub f_size: usize,
    pub dense: bool,
    pub hausdorff: bool,
}

/// Quantizes the cloud, builds the density topology of the cells actually
/// reached, and reports their density and the (always failing) Hausdorff
/// check. The reached cells must form a strict subset of the grid; a cloud
/// covering every cell leaves nothing for the construction to separate.
pub fn check_mu_controllability(cloud: &AttainableCloud, features: &FeatureSpec) -> Result<MuReport> {
    if cloud.samples.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let (universe, f) = quantize(cloud, features)?;
    let topology: FiniteTopology = mu_topology(&universe, f)?;
    let dense = topology.is_dense(f)?;
    let profile = topology.separation_profile();
    Ok(MuReport {
        universe_size: universe.size(),
        f,
        f_size: f.cardinality(),
        dense,
        hausdorff: profile.hausdorff,
    })
}
