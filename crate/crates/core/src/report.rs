//! Text output for solutions, convergence studies, and timing runs.
//!
//! CSV numbers are printed with 17 significant digits so reading them back
//! reproduces the original f64 bit for bit. JSON goes through serde_json,
//! whose float printing is shortest-round-trip and therefore also lossless.

use serde::Serialize;
use serde_json::json;

use crate::error::Result;
use crate::grid::{Layout, VariableRole};
use crate::solvers::Solution;
use crate::timing::{RatioReport, TimingSample};
use crate::verify::ConvergenceReport;

/// Render a float with 17 significant digits: enough that parsing the text
/// recovers the exact bit pattern.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV table of a convergence study, one row per resolution.
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("M,dx,E_p,E_u,E_v\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.m,
            fmt_f64(r.dx),
            fmt_f64(r.e_p),
            fmt_f64(r.e_u),
            fmt_f64(r.e_v)
        ));
    }
    out
}

/// JSON document of a convergence study: the rows plus fitted orders and
/// the scenario/method tags.
pub fn convergence_json(report: &ConvergenceReport) -> Result<String> {
    to_json(report)
}

/// CSV table of timing samples, one row per (method, M) pair.
pub fn timing_csv(samples: &[TimingSample]) -> String {
    let mut out = String::from("method,M,repeats,mean_s,min_s,stddev_s\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.method_tag,
            s.m,
            s.repeats,
            fmt_f64(s.mean_seconds),
            fmt_f64(s.min_seconds),
            fmt_f64(s.stddev_seconds)
        ));
    }
    out
}

/// JSON document of a timing run: the samples together with the
/// cost-ratio report.
pub fn timing_json(samples: &[TimingSample], ratios: &RatioReport) -> Result<String> {
    to_json(&json!({ "samples": samples, "ratios": ratios }))
}

/// CSV table of a solved field triple sampled on one shared lattice.
///
/// Rows run x-fastest over the velocity-node lattice of the solution's
/// layout. Fields that live elsewhere on the cell are interpolated by
/// averaging their in-lattice neighbours; a leading comment line records
/// which columns are interpolated.
pub fn solution_csv(sol: &Solution) -> String {
    let spec = sol.u.spec();
    let m = sol.u.m();
    let note = match spec.layout {
        Layout::Collocated => "# all fields stored at shared nodes",
        Layout::SaddleStaggered => {
            "# coordinates are u-velocity nodes; p and v interpolated by neighbour averaging"
        }
        Layout::ProjectionStaggered => {
            "# coordinates are velocity nodes; p interpolated by neighbour averaging"
        }
    };
    let mut out = format!("{note}\nx,y,p,u,v\n");
    for j in 0..m {
        for i in 0..m {
            let (x, y) = spec
                .node_coords(VariableRole::U, i, j)
                .expect("node indices in range");
            let (p, u, v) = sample_at_u_node(sol, i, j);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(p),
                fmt_f64(u),
                fmt_f64(v)
            ));
        }
    }
    out
}

/// JSON document of a solved field triple: the same lattice samples as the
/// CSV plus method metadata.
pub fn solution_json(sol: &Solution) -> Result<String> {
    let spec = sol.u.spec();
    let m = sol.u.m();
    let mut rows = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            let (x, y) = spec
                .node_coords(VariableRole::U, i, j)
                .expect("node indices in range");
            let (p, u, v) = sample_at_u_node(sol, i, j);
            rows.push(json!({ "x": x, "y": y, "p": p, "u": u, "v": v }));
        }
    }
    to_json(&json!({
        "method": sol.method_tag,
        "M": sol.m,
        "wall_time_seconds": sol.wall_time,
        "linear_residuals": sol.linear_residuals,
        "rows": rows,
    }))
}

/// Values of (p, u, v) at the u-velocity node (i, j), averaging whichever
/// staggered neighbours exist on the lattice for fields stored elsewhere.
fn sample_at_u_node(sol: &Solution, i: usize, j: usize) -> (f64, f64, f64) {
    let m = sol.u.m();
    let layout = sol.u.spec().layout;
    let u = sol.u.at(i, j);
    match layout {
        Layout::Collocated => (sol.p.at(i, j), u, sol.v.at(i, j)),
        Layout::SaddleStaggered => {
            // u node sits on the right cell face: p neighbours left/right,
            // v neighbours at the four surrounding face midpoints
            let p = in_lattice_mean(m, &[(i, j), (i + 1, j)], |a, b| sol.p.at(a, b));
            let jb = j.wrapping_sub(1); // wraps past m for j = 0, filtered below
            let v = in_lattice_mean(
                m,
                &[(i, jb), (i + 1, jb), (i, j), (i + 1, j)],
                |a, b| sol.v.at(a, b),
            );
            (p, u, v)
        }
        Layout::ProjectionStaggered => {
            // velocities share the cell-corner lattice; p sits at centers
            let p = in_lattice_mean(
                m,
                &[(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)],
                |a, b| sol.p.at(a, b),
            );
            (p, u, sol.v.at(i, j))
        }
    }
}

/// Mean of `get` over the subset of `candidates` with both indices < m.
fn in_lattice_mean(
    m: usize,
    candidates: &[(usize, usize)],
    get: impl Fn(usize, usize) -> f64,
) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for &(i, j) in candidates {
        if i < m && j < m {
            sum += get(i, j);
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
