//! SVG rendering of a rank-2 summand table: lattice points colored by
//! summand, with segment and hull outlines for multi-point cells.
//! A pure function of the table; identical tables give identical bytes.

use num_traits::ToPrimitive;
use sodkit::ratlin::IntVec;
use sodkit::sod::SummandTable;

const PALETTE: [&str; 12] = [
    "#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377",
    "#bbbbbb", "#332288", "#ddcc77", "#117733", "#882255", "#44aa99",
];

/// Convex hull of integer points, counterclockwise, collinear points
/// dropped. Returns the input for fewer than three distinct points.
fn hull(points: &[IntVec]) -> Vec<IntVec> {
    let mut pts: Vec<IntVec> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &IntVec, a: &IntVec, b: &IntVec| -> i64 {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<IntVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<IntVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Render the character lattice with cells colored by summand. Coordinates
/// are in lattice units with the y axis pointing up.
pub fn render(table: &SummandTable) -> String {
    let bound = table.radius.floor().to_integer().to_i64().unwrap_or(4);
    let half = bound + 1;
    let size = 2 * half;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"480\" height=\"480\">\n",
        -half, -half, size, size
    ));
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        -half, -half, size, size
    ));
    for (i, s) in table.summands.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let cell = hull(&s.window.cell_points);
        match cell.len() {
            0 | 1 => {}
            2 => out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"0.08\"/>\n",
                cell[0][0], cell[0][1], cell[1][0], cell[1][1], color
            )),
            _ => {
                let pts: Vec<String> = cell
                    .iter()
                    .map(|p| format!("{},{}", p[0], p[1]))
                    .collect();
                out.push_str(&format!(
                    "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.25\" stroke=\"{}\" stroke-width=\"0.08\"/>\n",
                    pts.join(" "),
                    color,
                    color
                ));
            }
        }
    }
    for (i, s) in table.summands.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for p in &s.box_points {
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"0.14\" fill=\"{}\"/>\n",
                p[0], p[1], color
            ));
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
