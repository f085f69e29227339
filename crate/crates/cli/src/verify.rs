//! The verification suite: hard invariant checks plus the published-formula
//! audit.
//!
//! Hard checks must pass; they pin the implementation to its independent
//! oracles. The audit re-derives every quantity from the matrices and
//! compares against the published closed forms; expressions known to
//! disagree with their own source matrices are emitted as discrepancy
//! records and compared against a versioned allowlist. An unexpected record
//! means a regression; a missing one means the audit itself broke.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use telefid_core::cmatrix::{CMatrix, Qubit};
use telefid_core::qchannel::adc_kraus;
use telefid_core::qmeasure::{
    classical_correlation, concurrence, fef, fef_bruteforce, mutual_information,
    teleportation_fidelity, x_state_concurrence,
};
use telefid_core::qstate::{
    bell_phi_plus, build_pipeline, random_density_matrix, random_pure_product, rho_d, rho_dd,
    sigma_r, sigma_rr, wmrwm_steps_both, wmrwm_steps_single, DensityMatrix,
};
use telefid_core::teleportsim::{average_fidelity, optimal_prerotation, InputEnsemble};
use telefid_core::wmrwm::{
    cf_s1_cmax, cf_s1_tfmax, cf_s2, cf_s2_tfmax, cf_scenario1_bare, cf_scenario2_bare, optimize_q,
    protected_state, DampingScope, Objective,
};

/// The allowlist shipped with the binary; verification fails if the computed
/// discrepancy set differs from it in either direction.
pub const ALLOWLIST_JSON: &str = include_str!("../data/discrepancy_allowlist.json");

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PaperValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    #[serde(rename = "TYPO_SUSPECTED")]
    TypoSuspected,
    #[serde(rename = "CLAIM_CONFLICT")]
    ClaimConflict,
}

/// One published claim that the computation contradicts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub claim_id: String,
    pub paper_value: PaperValue,
    pub computed_value: f64,
    pub location: String,
    pub severity: Severity,
}

#[derive(Debug, Clone, Deserialize)]
struct AllowlistEntry {
    claim_id: String,
    severity: Severity,
}

#[derive(Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
    pub discrepancies: Vec<DiscrepancyRecord>,
    pub allowlist_ok: bool,
    pub allowlist_detail: String,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.allowlist_ok && self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, max_dev: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: max_dev <= tol,
        detail: format!("max deviation {max_dev:.3e} (tolerance {tol:.1e})"),
    }
}

fn grid(n: usize, top: f64) -> Vec<f64> {
    (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect()
}

fn adc_completeness() -> CheckOutcome {
    let mut worst = 0.0f64;
    for d in grid(101, 1.0) {
        let ch = adc_kraus(d, Qubit::One).expect("in range");
        let mut sum = CMatrix::zeros(2, 2);
        for k in ch.elements() {
            sum = sum.add(&k.op().dagger().mul(k.op()).unwrap()).unwrap();
        }
        worst = worst.max(sum.sub(&CMatrix::identity(2)).unwrap().max_abs());
    }
    check("kraus completeness (K'K order) on 101-point grid", worst, 1e-12)
}

fn pipeline_audit() -> CheckOutcome {
    let bell = bell_phi_plus();
    let mut worst = 0.0f64;
    for d in grid(21, 1.0) {
        let steps = vec![telefid_core::LocalOpStep::Channel(
            adc_kraus(d, Qubit::Two).unwrap(),
        )];
        let built = build_pipeline(&bell, &steps).unwrap();
        worst = worst.max(built.state.mat().sub(rho_d(d).unwrap().mat()).unwrap().max_abs());
    }
    for d1 in grid(11, 1.0) {
        for d2 in grid(11, 1.0) {
            let ab = vec![
                telefid_core::LocalOpStep::Channel(adc_kraus(d1, Qubit::One).unwrap()),
                telefid_core::LocalOpStep::Channel(adc_kraus(d2, Qubit::Two).unwrap()),
            ];
            let ba = vec![
                telefid_core::LocalOpStep::Channel(adc_kraus(d2, Qubit::Two).unwrap()),
                telefid_core::LocalOpStep::Channel(adc_kraus(d1, Qubit::One).unwrap()),
            ];
            let a = build_pipeline(&bell, &ab).unwrap();
            let b = build_pipeline(&bell, &ba).unwrap();
            let printed = rho_dd(d1, d2).unwrap();
            worst = worst.max(a.state.mat().sub(b.state.mat()).unwrap().max_abs());
            worst = worst.max(a.state.mat().sub(printed.mat()).unwrap().max_abs());
        }
    }
    let sub = grid(11, 0.9);
    for &d in &sub {
        for &p in &sub {
            for &q in &sub {
                let built = build_pipeline(&bell, &wmrwm_steps_single(d, p, q).unwrap()).unwrap();
                let printed = sigma_r(d, p, q).unwrap();
                worst = worst
                    .max(built.state.mat().sub(printed.state.mat()).unwrap().max_abs())
                    .max((built.probability - printed.probability).abs());

                let built = build_pipeline(&bell, &wmrwm_steps_both(d, p, q).unwrap()).unwrap();
                let printed = sigma_rr(d, p, q).unwrap();
                worst = worst
                    .max(built.state.mat().sub(printed.state.mat()).unwrap().max_abs())
                    .max((built.probability - printed.probability).abs());
            }
        }
    }
    check("pipeline builds match printed matrices", worst, 1e-12)
}

fn scenario1_closed_forms() -> CheckOutcome {
    let mut worst = 0.0f64;
    for d in grid(201, 1.0) {
        let rho = rho_d(d).unwrap();
        let (c_cf, tf_cf) = cf_scenario1_bare(d);
        worst = worst
            .max((concurrence(&rho) - c_cf).abs())
            .max((teleportation_fidelity(&rho) - tf_cf).abs());
    }
    check("single-damping concurrence and fidelity closed forms", worst, 1e-9)
}

/// Bisection for the damping strength where fidelity crosses the classical
/// bound 2/3; the analytic crossing is 2 sqrt(2) - 2.
pub fn classical_threshold() -> f64 {
    let f = |d: f64| teleportation_fidelity(&rho_d(d).unwrap()) - 2.0 / 3.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn threshold_check() -> CheckOutcome {
    let d_star = classical_threshold();
    let expected = 2.0 * 2.0f64.sqrt() - 2.0;
    check("classical-bound crossing at 2 sqrt(2) - 2", (d_star - expected).abs(), 1e-6)
}

fn scenario2_closed_forms() -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut activation_ok = true;
    for d in grid(201, 1.0) {
        let rho = rho_dd(d, d).unwrap();
        let (_, _, tf_cf) = cf_scenario2_bare(d);
        let tf = teleportation_fidelity(&rho);
        worst = worst.max((tf - tf_cf).abs());
        if d <= 1.0 - 1e-6 && tf <= 2.0 / 3.0 {
            activation_ok = false;
        }
    }
    let tf_edge = teleportation_fidelity(&rho_dd(1.0 - 1e-6, 1.0 - 1e-6).unwrap());
    activation_ok &= tf_edge > 2.0 / 3.0;
    let mut out = check("double-damping fidelity closed form and activation", worst, 1e-9);
    if !activation_ok {
        out.passed = false;
        out.detail.push_str("; fidelity fell to the classical bound before full damping");
    }
    out
}

fn concurrence_audit_check() -> CheckOutcome {
    let mut worst = 0.0f64;
    for d in grid(201, 1.0) {
        let rho = rho_dd(d, d).unwrap();
        let matrix_value = (1.0 - d) * (1.0 - d);
        worst = worst
            .max((concurrence(&rho) - matrix_value).abs())
            .max((x_state_concurrence(&rho) - matrix_value).abs());
    }
    check("double-damping concurrence equals (1-d)^2 on both routes", worst, 1e-9)
}

fn fef_oracle_check() -> CheckOutcome {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = random_density_matrix(&mut rng);
        worst = worst.max((fef(&rho) - fef_bruteforce(&rho, 8)).abs());
    }
    check("spectral FEF matches brute-force sweep on 100 random states", worst, 1e-4)
}

fn s1_optimizer_check() -> CheckOutcome {
    let mut worst_value = 0.0f64;
    let mut worst_q = 0.0f64;
    let mut worst_succ = 0.0f64;
    let mut ordering_ok = true;
    for d in grid(5, 0.8) {
        for p in grid(5, 0.8) {
            let cf = cf_s1_tfmax(d, p);
            let opt = optimize_q(DampingScope::Single, d, p, Objective::Tf).unwrap();
            worst_value = worst_value.max((opt.value - cf.tf_max).abs());
            worst_q = worst_q.max((opt.q_star - cf.q_star).abs());
            let built = protected_state(DampingScope::Single, d, p, cf.q_star).unwrap();
            worst_succ = worst_succ.max((built.probability - cf.success_prob).abs());

            let cf = cf_s1_cmax(d, p);
            let opt = optimize_q(DampingScope::Single, d, p, Objective::Concurrence).unwrap();
            worst_value = worst_value.max((opt.value - cf.c_max).abs());
            worst_q = worst_q.max((opt.q_star - cf.q_star).abs());
            let built = protected_state(DampingScope::Single, d, p, cf.q_star).unwrap();
            worst_succ = worst_succ.max((built.probability - cf.success_prob).abs());
        }
    }
    for d in grid(20, 0.95) {
        for p in grid(20, 0.95) {
            ordering_ok &=
                cf_s1_cmax(d, p).success_prob >= cf_s1_tfmax(d, p).success_prob - 1e-15;
        }
    }
    CheckOutcome {
        name: "single-qubit optimizer matches closed forms",
        passed: worst_value <= 1e-6 && worst_q <= 1e-4 && worst_succ <= 1e-9 && ordering_ok,
        detail: format!(
            "value dev {worst_value:.3e}, argmax dev {worst_q:.3e}, success dev {worst_succ:.3e}, ordering {ordering_ok}"
        ),
    }
}

fn s2_optimizer_check() -> CheckOutcome {
    let mut worst_q = 0.0f64;
    let mut worst_same = 0.0f64;
    let mut worst_value = 0.0f64;
    for d in grid(5, 0.8) {
        for p in grid(5, 0.8) {
            let cf = cf_s2_tfmax(d, p);
            let tf_opt = optimize_q(DampingScope::Both, d, p, Objective::Tf).unwrap();
            let c_opt = optimize_q(DampingScope::Both, d, p, Objective::Concurrence).unwrap();
            worst_q = worst_q.max((tf_opt.q_star - cf.q_star).abs());
            worst_same = worst_same.max((tf_opt.q_star - c_opt.q_star).abs());
            worst_value = worst_value
                .max((tf_opt.value - cf.tf_max).abs())
                .max((c_opt.value - cf.concurrence_at).abs());
        }
    }
    // At the shared optimum the classical correlation is variant-independent.
    let mut worst_cc = 0.0f64;
    for d in [0.2, 0.5, 0.8] {
        let tf_opt = optimize_q(DampingScope::Both, d, 0.1, Objective::Tf).unwrap();
        let c_opt = optimize_q(DampingScope::Both, d, 0.1, Objective::Concurrence).unwrap();
        let a = protected_state(DampingScope::Both, d, 0.1, tf_opt.q_star).unwrap();
        let b = protected_state(DampingScope::Both, d, 0.1, c_opt.q_star).unwrap();
        let (cc_a, _) = classical_correlation(&a.state);
        let (cc_b, _) = classical_correlation(&b.state);
        worst_cc = worst_cc.max((cc_a - cc_b).abs());
    }
    CheckOutcome {
        name: "double-qubit optimizer: shared argmax matches closed form",
        passed: worst_q <= 1e-4 && worst_same <= 1e-4 && worst_value <= 1e-6 && worst_cc <= 1e-6,
        detail: format!(
            "argmax dev {worst_q:.3e}, objectives argmax gap {worst_same:.3e}, value dev {worst_value:.3e}, cc gap {worst_cc:.3e}"
        ),
    }
}

fn fef_identity_check() -> CheckOutcome {
    let mut worst = 0.0f64;
    let sub = grid(11, 0.9);
    for &d in &sub {
        for &p in &sub {
            for &q in &sub {
                let cf = cf_s2(d, p, q).unwrap();
                let m = sigma_rr(d, p, q).unwrap();
                let mm = m.state.mat();
                let overlap = 0.5 * (mm[(0, 0)].re + mm[(3, 3)].re) + mm[(0, 3)].re;
                worst = worst.max((cf.fef - overlap).abs());
            }
        }
    }
    check("corrected FEF equals ideal-state overlap pointwise", worst, 1e-12)
}

fn cc_properties_check() -> CheckOutcome {
    let mut ok = true;
    let mut detail = Vec::new();

    let (cc_bell, _) = classical_correlation(&bell_phi_plus());
    if (cc_bell - 1.0).abs() > 1e-6 {
        ok = false;
        detail.push(format!("ideal state cc = {cc_bell}"));
    }

    let (cc_full, _) = classical_correlation(&rho_d(1.0).unwrap());
    if cc_full > 1e-9 {
        ok = false;
        detail.push(format!("fully damped cc = {cc_full:.3e}"));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(77);
    for _ in 0..3 {
        let (cc, _) = classical_correlation(&random_pure_product(&mut rng));
        if cc > 1e-9 {
            ok = false;
            detail.push(format!("product state cc = {cc:.3e}"));
        }
    }
    for _ in 0..10 {
        let rho = random_density_matrix(&mut rng);
        let (cc, _) = classical_correlation(&rho);
        if !(0.0..=mutual_information(&rho) + 1e-9).contains(&cc) {
            ok = false;
            detail.push(format!("cc {cc} outside [0, mutual information]"));
        }
    }
    CheckOutcome {
        name: "classical correlation bounds and limits",
        passed: ok,
        detail: if detail.is_empty() {
            "ideal = 1, product = 0, bounded by mutual information".into()
        } else {
            detail.join("; ")
        },
    }
}

fn teleport_law_check() -> CheckOutcome {
    let mut states: Vec<DensityMatrix> = vec![bell_phi_plus()];
    for d in [0.2, 0.5, 0.8284271247461903, 1.0] {
        states.push(rho_d(d).unwrap());
        states.push(rho_dd(d, d).unwrap());
    }
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    for _ in 0..5 {
        states.push(random_density_matrix(&mut rng));
    }
    let ensemble = InputEnsemble::six_cardinal();
    let mut worst = 0.0f64;
    for shared in &states {
        // Standard protocol law.
        let m = shared.mat();
        let overlap = 0.5 * (m[(0, 0)].re + m[(3, 3)].re) + m[(0, 3)].re;
        let plain = average_fidelity(shared, &ensemble).unwrap();
        worst = worst.max((plain.avg_fidelity - (2.0 * overlap + 1.0) / 3.0).abs());

        // Optimal pre-rotation reaches the FEF law.
        let u = optimal_prerotation(shared);
        let rotated = shared.apply_local_unitary(&u, Qubit::Two).unwrap();
        let best = average_fidelity(&rotated, &ensemble).unwrap();
        worst = worst.max((best.avg_fidelity - (2.0 * fef(shared) + 1.0) / 3.0).abs());
    }
    check("protocol-level fidelity law on exact ensemble", worst, 1e-9)
}

/// The audit: recompute every published closed form from the matrices and
/// record the ones that cannot be reconciled.
pub fn build_discrepancies() -> Vec<DiscrepancyRecord> {
    let mut records = Vec::new();

    // Concurrence closed form for the doubly damped state disagrees with
    // the concurrence of the printed matrix itself.
    let d = 0.5;
    let (published, _, _) = cf_scenario2_bare(d);
    let computed = concurrence(&rho_dd(d, d).unwrap());
    records.push(DiscrepancyRecord {
        claim_id: "eq-CTF_DD-concurrence".into(),
        paper_value: PaperValue::Number(published),
        computed_value: computed,
        location: "Eq. (CTF_DD): C = (1-D)(sqrt(1+D^2) - D), evaluated at D = 0.5 against Eq. (State_DD)".into(),
        severity: Severity::TypoSuspected,
    });

    // The published FEF normalization for the doubly protected state gives
    // 2 on the ideal state; the corrected form divides by 2 beta.
    let printed_at_identity = cf_s2(0.0, 0.0, 0.0).unwrap().fef_printed;
    records.push(DiscrepancyRecord {
        claim_id: "eq-f_WW-normalization".into(),
        paper_value: PaperValue::Number(printed_at_identity),
        computed_value: 1.0,
        location: "Eq. (f_WW): denominator beta yields f(0,0,0) = 2; corrected denominator 2*beta".into(),
        severity: Severity::TypoSuspected,
    });

    // Classical correlation of the fully damped two-sided state: claimed 1,
    // but the state at D = 1 is the pure product |00><00| with zero
    // correlation of any kind.
    let (cc_full, _) = classical_correlation(&rho_dd(1.0, 1.0).unwrap());
    records.push(DiscrepancyRecord {
        claim_id: "cc-at-D1-scenario2".into(),
        paper_value: PaperValue::Number(1.0),
        computed_value: cc_full,
        location: "discussion after Eq. (CTF_DD): \"At D=1 ... CC = 1\"; Eq. (State_DD) at D=1 is |00><00|".into(),
        severity: Severity::ClaimConflict,
    });

    // The completeness relation as printed has the adjoint on the right;
    // that order evaluates to diag(1+D, 1-D) instead of the identity.
    let ch = adc_kraus(0.5, Qubit::One).unwrap();
    let mut kkt = CMatrix::zeros(2, 2);
    for k in ch.elements() {
        kkt = kkt.add(&k.op().mul(&k.op().dagger()).unwrap()).unwrap();
    }
    let deviation = kkt.sub(&CMatrix::identity(2)).unwrap().max_abs();
    records.push(DiscrepancyRecord {
        claim_id: "eq-ADC-completeness-order".into(),
        paper_value: PaperValue::Text("sum_j W_{i,j} W_{i,j}^dagger = I".into()),
        computed_value: deviation,
        location: "Eq. (ADC) completeness relation; printed order deviates from I by D at D = 0.5".into(),
        severity: Severity::TypoSuspected,
    });

    // Claimed: protected concurrence falls below the bare value for
    // D > 0.33. At (d, p) = (0.5, 0.1) the protected optimum exceeds the
    // bare matrix concurrence, so the comparison claim fails.
    let protected = cf_s2_tfmax(0.5, 0.1).concurrence_at;
    let bare = concurrence(&rho_dd(0.5, 0.5).unwrap());
    records.push(DiscrepancyRecord {
        claim_id: "fig3-cmax-vs-bare-concurrence".into(),
        paper_value: PaperValue::Text("C_max(sigma_RR) < C(rho_DD) for D > 0.33".into()),
        computed_value: protected - bare,
        location: "Fig. 3 discussion; at (D, p) = (0.5, 0.1) the protected-minus-bare gap is positive".into(),
        severity: Severity::ClaimConflict,
    });

    records
}

fn match_allowlist(records: &[DiscrepancyRecord]) -> (bool, String) {
    let allow: Vec<AllowlistEntry> =
        serde_json::from_str(ALLOWLIST_JSON).expect("allowlist parses");
    let mut expected: Vec<(String, Severity)> = allow
        .into_iter()
        .map(|e| (e.claim_id, e.severity))
        .collect();
    let mut got: Vec<(String, Severity)> = records
        .iter()
        .map(|r| (r.claim_id.clone(), r.severity))
        .collect();
    expected.sort();
    got.sort();
    if expected == got {
        (true, format!("{} known records, no surprises", got.len()))
    } else {
        let missing: Vec<_> = expected.iter().filter(|e| !got.contains(e)).collect();
        let extra: Vec<_> = got.iter().filter(|g| !expected.contains(g)).collect();
        (false, format!("missing {missing:?}, unexpected {extra:?}"))
    }
}

pub fn run_verify() -> VerifyReport {
    let checks = vec![
        adc_completeness(),
        pipeline_audit(),
        scenario1_closed_forms(),
        threshold_check(),
        scenario2_closed_forms(),
        concurrence_audit_check(),
        fef_oracle_check(),
        s1_optimizer_check(),
        s2_optimizer_check(),
        fef_identity_check(),
        cc_properties_check(),
        teleport_law_check(),
    ];
    let discrepancies = build_discrepancies();
    let (allowlist_ok, allowlist_detail) = match_allowlist(&discrepancies);
    VerifyReport {
        checks,
        discrepancies,
        allowlist_ok,
        allowlist_detail,
    }
}
