//! Figure data: one CSV per curve plus a gnuplot script per figure.
//!
//! Figure 1 compares the two bare-damping scenarios; figures 2 and 3 add
//! the protected variants at weak-measurement strength 0.1 for the single-
//! and double-damping scenarios respectively. Panels: (a) concurrence,
//! (b) teleportation fidelity, (c) classical correlation, (d) success
//! probability.

use rayon::prelude::*;
use std::collections::BTreeMap;

use telefid_core::wmrwm::{scenario_point, Scenario, Variant};
use telefid_core::ScenarioPoint;

use crate::sweep::{with_worker_pool, D_CLAMP};

/// Grid resolution of every figure curve.
pub const FIGURE_D_POINTS: usize = 201;
/// Weak-measurement strength used by the protected curves.
pub const FIGURE_P: f64 = 0.1;

const PANELS: [(char, &str); 4] = [
    ('a', "concurrence"),
    ('b', "teleportation fidelity"),
    ('c', "classical correlation"),
    ('d', "success probability"),
];

fn curve_points(scenario: Scenario, variant: Variant) -> Result<Vec<ScenarioPoint>, telefid_core::CoreError> {
    let protected = matches!(scenario, Scenario::SingleProtected | Scenario::BothProtected);
    let specs: Vec<f64> = (0..FIGURE_D_POINTS)
        .map(|i| {
            let d = i as f64 / (FIGURE_D_POINTS - 1) as f64;
            if protected {
                d.min(D_CLAMP)
            } else {
                d
            }
        })
        .collect();
    let p = if protected { FIGURE_P } else { 0.0 };
    specs
        .par_iter()
        .map(|&d| scenario_point(scenario, d, p, variant))
        .collect()
}

fn panel_value(pt: &ScenarioPoint, panel: char) -> f64 {
    match panel {
        'a' => pt.report.concurrence,
        'b' => pt.report.tf,
        'c' => pt.report.cc,
        _ => pt.success_prob,
    }
}

fn curve_csv(points: &[ScenarioPoint], panel: char) -> String {
    let mut out = String::from("d,value,q_star,success_prob\n");
    for pt in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            crate::fmt::sig12(pt.d),
            crate::fmt::sig12(panel_value(pt, panel)),
            crate::fmt::sig12(pt.q_star),
            crate::fmt::sig12(pt.success_prob),
        ));
    }
    out
}

/// The curves of one figure: (curve name, scenario, variant).
fn figure_curves(id: u8) -> Vec<(&'static str, Scenario, Variant)> {
    match id {
        1 => vec![
            ("single", Scenario::SingleBare, Variant::None),
            ("both", Scenario::BothBare, Variant::None),
        ],
        2 => vec![
            ("bare", Scenario::SingleBare, Variant::None),
            ("tfmax", Scenario::SingleProtected, Variant::TfMax),
            ("cmax", Scenario::SingleProtected, Variant::CMax),
        ],
        _ => vec![
            ("bare", Scenario::BothBare, Variant::None),
            ("tfmax", Scenario::BothProtected, Variant::TfMax),
            ("cmax", Scenario::BothProtected, Variant::CMax),
        ],
    }
}

fn figure_panels(id: u8) -> &'static [(char, &'static str)] {
    // Figure 1 has no success-probability panel; everything is
    // deterministic there.
    if id == 1 {
        &PANELS[..3]
    } else {
        &PANELS
    }
}

fn gnuplot_script(id: u8, files: &BTreeMap<(char, &'static str), String>) -> String {
    let mut s = String::new();
    s.push_str("# gnuplot script; run from this directory:  gnuplot fig");
    s.push_str(&id.to_string());
    s.push_str(".gp\n");
    s.push_str("set datafile separator \",\"\n");
    s.push_str(&format!("set terminal pngcairo size 1400,1000\nset output \"fig{id}.png\"\n"));
    let panels = figure_panels(id);
    let (rows, cols) = if panels.len() == 3 { (1, 3) } else { (2, 2) };
    s.push_str(&format!("set multiplot layout {rows},{cols}\n"));
    s.push_str("set xlabel \"D\"\nset key bottom left\n");
    for &(panel, label) in panels {
        s.push_str(&format!("set title \"({panel}) {label}\"\n"));
        let mut plots = Vec::new();
        for ((p, curve), file) in files {
            if *p == panel {
                plots.push(format!(
                    "\"{file}\" using 1:2 skip 1 with lines title \"{curve}\""
                ));
            }
        }
        if panel == 'b' {
            plots.push("2.0/3.0 with lines dashtype 3 title \"classical bound\"".into());
        }
        s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    }
    s.push_str("unset multiplot\n");
    s
}

/// All output files of one figure: (relative file name, content), in a
/// fixed deterministic order.
pub fn figure_files(id: u8) -> Result<Vec<(String, String)>, telefid_core::CoreError> {
    let curves = figure_curves(id);
    let points: Vec<Vec<ScenarioPoint>> = with_worker_pool(|| {
        curves
            .iter()
            .map(|&(_, sc, v)| curve_points(sc, v))
            .collect::<Result<_, _>>()
    })?;

    let mut names = BTreeMap::new();
    let mut files = Vec::new();
    for &(panel, _) in figure_panels(id) {
        for (&(name, _, _), pts) in curves.iter().zip(points.iter()) {
            let file = format!("fig{id}_{panel}_{name}.csv");
            files.push((file.clone(), curve_csv(pts, panel)));
            names.insert((panel, name), file);
        }
    }
    files.push((format!("fig{id}.gp"), gnuplot_script(id, &names)));
    Ok(files)
}
