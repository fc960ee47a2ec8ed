//! Steers a ship heading north towards targets around it and prints where
//! each steer stops, how long it ran and the largest turn rate used.

use shiprrt::env::{angle_diff, Point};
use shiprrt::planners::PlannerConfig;
use shiprrt::vessel::VesselState;

fn main() -> Result<(), shiprrt::Error> {
    let cfg = PlannerConfig::small_case();
    let steering = cfg.steering();
    let from = VesselState::new(0.0, 0.0, 0.0, 4.0);
    println!("r_max = {:.2} deg/s, T_max = {} s", cfg.ship.r_max.to_degrees(), cfg.t_max);
    for deg in (0..360).step_by(45) {
        let a = f64::from(deg).to_radians();
        let target = Point::new(80.0 * a.cos(), 80.0 * a.sin());
        let traj = steering.steer(&from, target)?;
        let end = traj.last().expect("nonempty");
        let peak = traj
            .states()
            .windows(2)
            .map(|w| angle_diff(w[1].chi, w[0].chi).abs() / traj.dt())
            .fold(0.0, f64::max);
        println!(
            "target at {deg:3} deg: stop ({:7.2}, {:7.2}) after {:4.1} s, {:5.1} m from target, peak turn {:.2} deg/s",
            end.x,
            end.y,
            traj.duration(),
            end.position().distance(target),
            peak.to_degrees()
        );
    }
    Ok(())
}
