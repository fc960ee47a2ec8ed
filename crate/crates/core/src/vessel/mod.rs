//! Kinematic ship model, line-of-sight guidance and the steering primitive.
//!
//! The state is `[x, y, χ, U]` with `x` north, `y` east and the course `χ`
//! measured from north towards east, so the ship moves along `(cos χ, sin χ)`.

use serde::{Deserialize, Serialize};

use crate::env::{angle_diff, polyline_length, wrap_angle, Point};
use crate::error::{Error, Result};

/// One knot in meters per second.
pub const KNOT: f64 = 1852.0 / 3600.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VesselState {
    pub x: f64,
    pub y: f64,
    /// Course over ground, radians in `(-π, π]`.
    pub chi: f64,
    /// Speed over ground, m/s.
    #[serde(rename = "U")]
    pub u: f64,
}

impl VesselState {
    pub fn new(x: f64, y: f64, chi: f64, u: f64) -> Self {
        VesselState {
            x,
            y,
            chi: wrap_angle(chi),
            u,
        }
    }

    pub fn at(p: Point, chi: f64, u: f64) -> Self {
        Self::new(p.x, p.y, chi, u)
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn velocity(&self) -> Point {
        Point::new(self.u * self.chi.cos(), self.u * self.chi.sin())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.chi.is_finite() && self.u.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutopilotReference {
    pub chi_d: f64,
    #[serde(rename = "U_d")]
    pub u_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShipParams {
    /// Course time constant, s.
    pub t_chi: f64,
    /// Speed time constant, s.
    pub t_u: f64,
    /// Maximum turn rate, rad/s.
    pub r_max: f64,
    pub u_min: f64,
    pub u_max: f64,
}

impl Default for ShipParams {
    fn default() -> Self {
        ShipParams {
            t_chi: 6.0,
            t_u: 6.0,
            r_max: 10f64.to_radians(),
            u_min: 0.0,
            u_max: 20.0 * KNOT,
        }
    }
}

impl ShipParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.t_chi > 0.0
            && self.t_u > 0.0
            && self.r_max > 0.0
            && self.u_min <= self.u_max
            && self.u_min >= 0.0
            && [self.t_chi, self.t_u, self.r_max, self.u_min, self.u_max]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid ship parameters {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuidanceParams {
    /// Look-ahead distance Δ, m.
    pub delta: f64,
    /// Distance to the target at which a steer stops, m.
    pub wp_switch_radius: f64,
}

impl Default for GuidanceParams {
    fn default() -> Self {
        GuidanceParams {
            delta: 30.0,
            wp_switch_radius: 10.0,
        }
    }
}

/// Arguments of the [`Steering::follow_segment`] call that produced a
/// trajectory; rerunning it from the trajectory's first state reproduces it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteerCommand {
    pub p1: Point,
    pub p2: Point,
    pub t_max: f64,
    pub stop_radius: f64,
}

/// Time-ordered states sampled every `dt` seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySegment {
    states: Vec<VesselState>,
    dt: f64,
    duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    command: Option<SteerCommand>,
}

impl TrajectorySegment {
    pub fn new(states: Vec<VesselState>, dt: f64) -> Self {
        let duration = states.len().saturating_sub(1) as f64 * dt;
        TrajectorySegment {
            states,
            dt,
            duration,
            command: None,
        }
    }

    /// The steer that produced this segment; `None` for hand-built or
    /// concatenated segments.
    pub fn command(&self) -> Option<&SteerCommand> {
        self.command.as_ref()
    }

    pub fn single(state: VesselState, dt: f64) -> Self {
        Self::new(vec![state], dt)
    }

    pub fn empty(dt: f64) -> Self {
        Self::new(Vec::new(), dt)
    }

    pub fn states(&self) -> &[VesselState] {
        &self.states
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> Option<&VesselState> {
        self.states.first()
    }

    pub fn last(&self) -> Option<&VesselState> {
        self.states.last()
    }

    pub fn positions(&self) -> Vec<Point> {
        self.states.iter().map(VesselState::position).collect()
    }

    /// Polyline length through all sampled positions.
    pub fn length(&self) -> f64 {
        polyline_length(self.states.iter().map(VesselState::position))
    }

    /// Straight-line distance between the first and last sample.
    pub fn endpoint_distance(&self) -> f64 {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => a.position().distance(b.position()),
            _ => 0.0,
        }
    }

    /// Appends `other`, dropping its first sample when it repeats our last one.
    pub fn extend(&mut self, other: &TrajectorySegment) {
        let skip = match (self.states.last(), other.states.first()) {
            (Some(a), Some(b)) => usize::from(a == b),
            _ => 0,
        };
        self.states.extend_from_slice(&other.states[skip..]);
        self.command = None;
        self.duration = self.states.len().saturating_sub(1) as f64 * self.dt;
    }
}

/// Along-track and cross-track error of `p` relative to the segment `p1 → p2`.
pub fn path_errors(p1: Point, p2: Point, p: Point) -> (f64, f64) {
    let theta = (p2.y - p1.y).atan2(p2.x - p1.x);
    let (s, c) = theta.sin_cos();
    let d = p - p1;
    (c * d.x + s * d.y, -s * d.x + c * d.y)
}

/// LOS course reference for following the segment `p1 → p2`.
pub fn los_reference(
    p1: Point,
    p2: Point,
    state: &VesselState,
    g: &GuidanceParams,
    u_d: f64,
) -> Result<AutopilotReference> {
    if p1 == p2 {
        return Err(Error::invalid("LOS segment endpoints coincide"));
    }
    let theta = (p2.y - p1.y).atan2(p2.x - p1.x);
    let (_, e) = path_errors(p1, p2, state.position());
    Ok(AutopilotReference {
        chi_d: wrap_angle(theta + (-e / g.delta).atan()),
        u_d,
    })
}

/// Saturated course rate commanded by the first-order course autopilot.
pub fn course_rate(state: &VesselState, reference: &AutopilotReference, p: &ShipParams) -> f64 {
    (angle_diff(reference.chi_d, state.chi) / p.t_chi).clamp(-p.r_max, p.r_max)
}

/// One explicit Euler step of the ship model.
pub fn step(state: &VesselState, reference: &AutopilotReference, p: &ShipParams, dt: f64) -> VesselState {
    let chi_dot = course_rate(state, reference, p);
    let u_dot = (reference.u_d - state.u) / p.t_u;
    VesselState {
        x: state.x + state.u * state.chi.cos() * dt,
        y: state.y + state.u * state.chi.sin() * dt,
        chi: wrap_angle(state.chi + chi_dot * dt),
        u: (state.u + u_dot * dt).clamp(p.u_min, p.u_max),
    }
}

/// Everything a planner needs to steer between states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Steering {
    pub ship: ShipParams,
    pub guidance: GuidanceParams,
    pub u_d: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub dt: f64,
}

impl Steering {
    pub fn validate(&self) -> Result<()> {
        self.ship.validate()?;
        if !(self.guidance.delta > 0.0) || !(self.guidance.wp_switch_radius >= 0.0) {
            return Err(Error::invalid("guidance requires delta > 0 and wp_switch_radius >= 0"));
        }
        if !(self.dt > 0.0) || !(self.t_min <= self.t_max) || !(self.dt <= self.t_min) || !self.t_max.is_finite() {
            return Err(Error::invalid("steering requires 0 < dt <= T_min <= T_max"));
        }
        if !(self.u_d >= self.ship.u_min && self.u_d <= self.ship.u_max) {
            return Err(Error::invalid("U_d must lie within [U_min, U_max]"));
        }
        Ok(())
    }

    fn min_steps(&self) -> usize {
        (self.t_min / self.dt - 1e-9).ceil().max(1.0) as usize
    }

    fn max_steps(&self, t_max: f64) -> usize {
        ((t_max / self.dt).round() as usize).max(self.min_steps())
    }

    /// Steers with the regular horizon `[T_min, T_max]`.
    pub fn steer(&self, from: &VesselState, target: Point) -> Result<TrajectorySegment> {
        self.steer_for(from, target, self.t_max)
    }

    /// Steers with the horizon `[T_min, t_max]`.
    ///
    /// Runs at least `T_min`, then stops as soon as the ship is within the
    /// switching radius of `target` or has passed it along the segment, and
    /// never runs longer than `t_max`.
    pub fn steer_for(&self, from: &VesselState, target: Point, t_max: f64) -> Result<TrajectorySegment> {
        self.follow_segment(from, from.position(), target, t_max, self.guidance.wp_switch_radius)
    }

    /// Follows the line `p1 → p2` from `from`, which need not lie on it.
    /// Termination is as in [`Steering::steer_for`] with `stop_radius` as the
    /// switching radius.
    pub fn follow_segment(
        &self,
        from: &VesselState,
        p1: Point,
        p2: Point,
        t_max: f64,
        stop_radius: f64,
    ) -> Result<TrajectorySegment> {
        if !p1.is_finite() || !p2.is_finite() {
            return Err(Error::invalid("steering target is not finite"));
        }
        if p1 == p2 {
            return Err(Error::invalid("steering target coincides with the segment start"));
        }
        let length = p1.distance(p2);
        let n_min = self.min_steps();
        let n_max = self.max_steps(t_max);
        let mut states = Vec::with_capacity(n_max.min(4096) + 1);
        states.push(*from);
        let mut x = *from;
        for k in 1..=n_max {
            let r = los_reference(p1, p2, &x, &self.guidance, self.u_d)?;
            x = step(&x, &r, &self.ship, self.dt);
            states.push(x);
            if k >= n_min {
                let p = x.position();
                let (s, _) = path_errors(p1, p2, p);
                if p.distance(p2) < stop_radius || s >= length {
                    break;
                }
            }
        }
        let mut traj = TrajectorySegment::new(states, self.dt);
        traj.command = Some(SteerCommand {
            p1,
            p2,
            t_max,
            stop_radius,
        });
        Ok(traj)
    }

    /// Reruns a recorded command from `from`.
    pub fn replay(&self, from: &VesselState, c: &SteerCommand) -> Result<TrajectorySegment> {
        self.follow_segment(from, c.p1, c.p2, c.t_max, c.stop_radius)
    }
}

/// Free function form of [`Steering::steer`].
#[allow(clippy::too_many_arguments)]
pub fn steer(
    from: &VesselState,
    target: Point,
    p: &ShipParams,
    g: &GuidanceParams,
    u_d: f64,
    t_min: f64,
    t_max: f64,
    dt: f64,
) -> Result<TrajectorySegment> {
    let s = Steering {
        ship: *p,
        guidance: *g,
        u_d,
        t_min,
        t_max,
        dt,
    };
    s.validate()?;
    s.steer(from, target)
}
