//! Deterministic text formatting for CSV and report output.

use telefid_core::ScenarioPoint;

/// Column order of every sweep and figure CSV.
pub const CSV_HEADER: &str = "scenario,variant,d,p,q_star,concurrence,fef,tf,\
entropy_a,entropy_b,entropy_ab,mutual_info,cc,cc_theta,cc_phi,success_prob";

/// Twelve significant digits, scientific notation. Formatting is the only
/// serialization step, so identical inputs give byte-identical files.
pub fn sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

pub fn csv_row(pt: &ScenarioPoint) -> String {
    let r = &pt.report;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        pt.scenario,
        pt.variant,
        sig12(pt.d),
        sig12(pt.p),
        sig12(pt.q_star),
        sig12(r.concurrence),
        sig12(r.fef),
        sig12(r.tf),
        sig12(r.entropy_a),
        sig12(r.entropy_b),
        sig12(r.entropy_ab),
        sig12(r.mutual_info),
        sig12(r.cc),
        sig12(r.cc_argmax.theta),
        sig12(r.cc_argmax.phi),
        sig12(pt.success_prob),
    )
}
