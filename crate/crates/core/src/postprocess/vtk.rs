//! Legacy ASCII VTK export of a sampled solution.

use std::io::Write;

use super::{evaluate_solution, principal_moments, ShellSolution};
use crate::error::{Error, Result};

/// Writes a structured sampling grid with `samples` points per knot span and
/// direction: quads over the surface, point vectors `u` and `w` and scalar
/// principal moments `m1`, `m2` (layout version 1).
pub fn write_vtk<W: Write>(out: &mut W, sol: &ShellSolution, samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample per span".into()));
    }
    let ((r0, r1), (s0, s1)) = sol.basis.domain();
    let k = samples * sol.problem.mesh.elements;
    let nr = k + 1;
    let ns = k + 1;
    let mut pts = Vec::with_capacity(nr * ns);
    for j in 0..ns {
        let s = s0 + (s1 - s0) * j as f64 / k as f64;
        for i in 0..nr {
            let r = r0 + (r1 - r0) * i as f64 / k as f64;
            pts.push(evaluate_solution(sol, r, s)?);
        }
    }
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "tdc-shell solution layout 1")?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET POLYDATA")?;
    writeln!(out, "POINTS {} double", pts.len())?;
    for p in &pts {
        let x = p.frame.x;
        writeln!(out, "{:.12e} {:.12e} {:.12e}", x.x, x.y, x.z)?;
    }
    let quads = k * k;
    writeln!(out, "POLYGONS {} {}", quads, 5 * quads)?;
    for j in 0..k {
        for i in 0..k {
            let a = j * nr + i;
            writeln!(out, "4 {} {} {} {}", a, a + 1, a + 1 + nr, a + nr)?;
        }
    }
    writeln!(out, "POINT_DATA {}", pts.len())?;
    for (name, w) in [("u", false), ("w", true)] {
        writeln!(out, "VECTORS {name} double")?;
        for p in &pts {
            let v = if w { p.state.w } else { p.state.u };
            writeln!(out, "{:.12e} {:.12e} {:.12e}", v.x, v.y, v.z)?;
        }
    }
    let pm: Vec<_> = pts.iter().map(|p| principal_moments(&p.resultants)).collect();
    for (name, first) in [("m1", true), ("m2", false)] {
        writeln!(out, "SCALARS {name} double 1")?;
        writeln!(out, "LOOKUP_TABLE default")?;
        for m in &pm {
            writeln!(out, "{:.12e}", if first { m.m1 } else { m.m2 })?;
        }
    }
    Ok(())
}
