//! Self-contained SVG plots of trajectories over the scenario: arena
//! rectangle, peg circles, light marker, reach circle and one polyline per
//! run. Pure string assembly so identical inputs yield identical bytes.

use wormsim::scenario::Scenario;
use wormsim::simulator::TrajectorySample;
use wormsim::trajectory::format_sig6;

const MARGIN_MM: f64 = 30.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Render the plot. Trajectories draw in input order with a cycling palette.
pub fn render(scenario: &Scenario, trajectories: &[Vec<TrajectorySample>]) -> String {
    let w = scenario.arena.width;
    let h = scenario.arena.height;
    // world y points up; svg y points down
    let fy = |y: f64| h - y;
    let f = format_sig6;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        f(-MARGIN_MM),
        f(-MARGIN_MM),
        f(w + 2.0 * MARGIN_MM),
        f(h + 2.0 * MARGIN_MM),
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#fcfcfa\" stroke=\"#333333\" stroke-width=\"2\"/>\n",
        f(w),
        f(h),
    ));
    for peg in &scenario.pegs {
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#b0b0b0\" stroke=\"#606060\" stroke-width=\"1\"/>\n",
            f(peg.center.x),
            f(fy(peg.center.y)),
            f(peg.radius),
        ));
    }
    svg.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#d4a017\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n",
        f(scenario.light.position.x),
        f(fy(scenario.light.position.y)),
        f(scenario.reach_radius),
    ));
    svg.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"10\" fill=\"#ffd700\" stroke=\"#b8860b\" stroke-width=\"2\"/>\n",
        f(scenario.light.position.x),
        f(fy(scenario.light.position.y)),
    ));
    for (i, trajectory) in trajectories.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = trajectory
            .iter()
            .map(|s| format!("{},{}", f(s.pose.position.x), f(fy(s.pose.position.y))))
            .collect();
        svg.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            points.join(" "),
            color,
        ));
        if let Some(start) = trajectory.first() {
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>\n",
                f(start.pose.position.x),
                f(fy(start.pose.position.y)),
                color,
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}
