//! One-sided Welch tests of PQ-RRT* against the other planners from summary
//! statistics of 100 runs each, for the smaller and the larger planning case.

use shiprrt::stats::welch_one_sided;

fn main() -> Result<(), shiprrt::Error> {
    let cases = [
        ("smaller", (963.1, 32.0), [("IRRT*", 965.9, 31.0), ("RRT*", 968.3, 33.3), ("RRT", 1472.7, 163.7)]),
        ("larger", (6567.3, 407.7), [("IRRT*", 6836.6, 476.6), ("RRT*", 6744.6, 487.4), ("RRT", 8805.3, 620.8)]),
    ];
    for (name, (mean, std), rivals) in cases {
        println!("{name} case, PQ-RRT* d_sol = {mean} ± {std} m");
        println!("  {:<8}{:>10}{:>10}{:>6}{:>10}{:>8}", "vs", "t_s", "s_i", "dof", "t_0.95", "p");
        for (rival, m, s) in rivals {
            let w = welch_one_sided(mean, std, m, s, 100, 0.05)?;
            println!(
                "  {rival:<8}{:>10.4}{:>10.4}{:>6}{:>10.4}{:>8.4}",
                w.t_s, w.s_i, w.dof, w.t_threshold, w.p_value
            );
        }
    }
    Ok(())
}
