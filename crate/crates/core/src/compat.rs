//! Compatibility report: every place where a published number or formula in
//! the source material disagrees with what the oracles here compute, stated
//! as a (published, computed) pair with enough detail to re-derive both
//! sides. Downstream checks only ever assert against the computed column;
//! the published column is documentation, never a test target.
//!
//! The report is deterministic: entries appear in a fixed order with values
//! recomputed from the library on every call, so any regression in the
//! computed column shows up as a changed report.

use crate::bell::{p_max_plane, MeasurementSetting, Plane};
use crate::states::{canonical_to_state, named_state, reduce_to_ab, Canonical3Q, NamedFamily};
use crate::strength::{k_quantity, q_upper_bound};
use crate::tripartite::{
    best_matching_roles, correlation_tensor, m_matrix, m_singular_values, svetlichny_max,
};
use crate::witness::{u_bound_at, w_chsh};
use crate::Result;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// One documented disagreement (or explicitly confirmed agreement) between a
/// published value and the value this library computes for the same object.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Discrepancy {
    /// Stable identifier used by tests and the command-line report.
    pub id: &'static str,
    pub title: &'static str,
    /// The value as quoted.
    pub published: f64,
    /// The value the library computes for the same quantity.
    pub computed: f64,
    pub details: String,
}

/// Entry identifiers that must appear in every report; the build is expected
/// to fail if one goes missing.
pub const REQUIRED_IDS: [&str; 5] = [
    "win-excess-normalization",
    "second-example-witness-trace",
    "x-family-k-closed-form",
    "unfolding-entry-layout",
    "type-two-singular-value",
];

/// The first quoted 3×9 unfolding (the λ₂ = 0.3 family), entries exactly as
/// printed: a = 2λ₀λ₃ at (1,3), c = 0.6λ₀ at (1,9), −a at (2,6), b = −0.6λ₃
/// at (3,3), and 0.82 at (3,9), all one-based.
pub fn type_one_template(lambda0: f64) -> [[f64; 9]; 3] {
    let l3 = (0.91 - lambda0 * lambda0).sqrt();
    let a = 2.0 * lambda0 * l3;
    let mut m = [[0.0; 9]; 3];
    m[0][2] = a;
    m[0][8] = 0.6 * lambda0;
    m[1][5] = -a;
    m[2][2] = -0.6 * l3;
    m[2][8] = 0.82;
    m
}

/// The second quoted 3×9 unfolding (the λ₁ = 0.7 family), entries exactly as
/// printed: a₁ = 2λ₀t at (1,3), b₁ = −1.4t at (1,7), −a₁ at (2,6), b₁ at
/// (2,8), c₁ = 1.4λ₀ at (3,1), −c₁ at (3,5), and 1 at (3,9), with
/// t = √(0.51 − λ₀²), all one-based.
pub fn type_two_template(lambda0: f64) -> [[f64; 9]; 3] {
    let t = (0.51 - lambda0 * lambda0).sqrt();
    let a1 = 2.0 * lambda0 * t;
    let b1 = -1.4 * t;
    let c1 = 1.4 * lambda0;
    let mut m = [[0.0; 9]; 3];
    m[0][2] = a1;
    m[0][6] = b1;
    m[1][5] = -a1;
    m[1][7] = b1;
    m[2][0] = c1;
    m[2][4] = -c1;
    m[2][8] = 1.0;
    m
}

/// Builds the full compatibility report. Every computed value comes from the
/// library's own pipelines at call time; nothing is hard-coded except the
/// published side of each comparison.
pub fn compat_report() -> Result<Vec<Discrepancy>> {
    let mut entries = Vec::new();

    // 1. The quoted win-probability excess for the x family omits the /8
    //    that ties it to the witness identity P − 3/4 = −Tr[Wρ]/8.
    let x = 0.25;
    let rho_x = named_state(NamedFamily::XFamily { x })?;
    let excess = p_max_plane(&rho_x, Plane::Xy)? - 0.75;
    entries.push(Discrepancy {
        id: "win-excess-normalization",
        title: "win-probability excess quoted without the /8 normalization",
        published: 4.0 * SQRT2 * x - 2.0,
        computed: excess,
        details: format!(
            "At x = {x} the quoted excess 4√2·x − 2 = {:.10} is eight times the actual \
             offset P − 3/4 = {excess:.10}; dividing the quoted form by 8 makes it exact \
             across the whole family.",
            4.0 * SQRT2 * x - 2.0
        ),
    });

    // 2. The second worked example quotes Tr[Wρ] = 1.9845; the witness
    //    reconstructed from the quoted directions gives a different trace.
    let rho2 = named_state(NamedFamily::Rho2)?;
    let setting2 = MeasurementSetting::normalized(
        [0.7, 0.5, 0.5099],
        [0.7, 0.5, 0.5099],
        [0.4, 0.4, 0.8246],
        [0.5, 0.3, 0.812404],
    )?;
    let trace = crate::bell::expectation(&w_chsh(&setting2)?, &rho2)?;
    entries.push(Discrepancy {
        id: "second-example-witness-trace",
        title: "witness expectation of the second worked example",
        published: 1.9845,
        computed: trace,
        details: format!(
            "Tr[Wρ] recomputed from the quoted measurement directions (renormalized to \
             unit length) is {trace:.10}; no sign or normalization variant of those \
             directions reproduces 1.9845. The verdict — non-detection, expectation \
             well above zero — is unaffected."
        ),
    });

    // 3. The x-family closed form for K: confirmed exact. The entry records
    //    the agreement so the constant check is visible, not silent.
    let root = (72.0 * x * x - 12.0 * x + 1.0).sqrt();
    let k_closed = (1.0 - 2.0 * (1.0 + SQRT2) * x + 6.0 * x * x) / (2.0 * (root - 1.0));
    let k_direct = k_quantity(&rho_x, &crate::witness::w_plane(Plane::Xy))?;
    entries.push(Discrepancy {
        id: "x-family-k-closed-form",
        title: "x-family K closed form: constants confirmed correct",
        published: k_closed,
        computed: k_direct,
        details: format!(
            "The quoted K = (1 − 2(1+√2)x + 6x²)/(2(√(72x² − 12x + 1) − 1)) matches the \
             partial-transpose pipeline to {:.1e} at x = {x}; all printed constants in \
             this formula check out.",
            (k_closed - k_direct).abs()
        ),
    });

    // 4. Neither quoted 3×9 unfolding matches any of the six row/column
    //    conventions; the clearest symptom is the (3,9) corner of the first
    //    layout, which holds a two-Pauli correlation where every convention
    //    puts the three-Pauli one.
    let t1 = canonical_to_state(&Canonical3Q::w_class_one(0.5)?)?;
    let t2 = canonical_to_state(&Canonical3Q::w_class_two(0.4)?)?;
    let (_, miss1) = best_matching_roles(&t1, &type_one_template(0.5), 1e-6)?;
    let (_, miss2) = best_matching_roles(&t2, &type_two_template(0.4), 1e-6)?;
    let corner = correlation_tensor(&t1)?[2][2][2];
    entries.push(Discrepancy {
        id: "unfolding-entry-layout",
        title: "quoted 3×9 unfolding layouts match no row/column convention",
        published: 0.82,
        computed: corner,
        details: format!(
            "Best of the six row/column conventions still leaves {miss1} of 27 entries \
             unmatched for the first quoted layout (λ₀ = 0.5) and {miss2} for the second \
             (λ₀ = 0.4) at tolerance 1e-6. The (3,3)/(zz) corner of the first layout is \
             quoted as 0.82 — the two-qubit σz⊗σz correlation — while the three-qubit \
             σz⊗σz⊗σz correlation there is {corner:.10} under every convention."
        ),
    });

    // 5. The quoted top singular value for the second family disagrees with
    //    the unfolding's actual spectrum.
    let sigma_07 = m_singular_values(&m_matrix(&canonical_to_state(
        &Canonical3Q::w_class_two(0.7)?,
    )?)?)?[0];
    let published_07 = (1.0 + 3.92 * 0.49f64).sqrt();
    let sigma_01 = m_singular_values(&m_matrix(&canonical_to_state(
        &Canonical3Q::w_class_two(0.1)?,
    )?)?)?[0];
    entries.push(Discrepancy {
        id: "type-two-singular-value",
        title: "quoted top singular value of the second family's unfolding",
        published: published_07,
        computed: sigma_07,
        details: format!(
            "Quoted √(1 + 3.92λ₀²) vs computed √(1 + 8λ₀²(0.51 − λ₀²)): at λ₀ = 0.7 the \
             quoted value is {published_07:.7} against {sigma_07:.7}; at λ₀ = 0.1 the two \
             happen to agree to three decimals ({:.7} vs {sigma_01:.7}), which hides the error.",
            (1.0 + 3.92 * 0.01f64).sqrt()
        ),
    });

    // 6. The quoted singular-value expression for the first family collapses
    //    to a constant: its discriminant is a perfect square.
    // The rounded 0.707107 is the constant exactly as printed, kept verbatim
    // because this entry compares against the printed formula.
    #[allow(clippy::approx_constant)]
    let mu1_quoted = |l0: f64| {
        let sq = l0 * l0;
        let j = 1.0 - 7.28 * sq + 21.2496 * sq * sq - 29.12 * sq.powi(3) + 16.0 * sq.powi(4);
        0.707107 * (1.0 + 3.64 * sq - 4.0 * sq * sq + j.sqrt()).sqrt()
    };
    let sigma_t1 = m_singular_values(&m_matrix(&t1)?)?[0];
    entries.push(Discrepancy {
        id: "type-one-singular-value",
        title: "quoted singular-value formula for the first family is constant",
        published: mu1_quoted(0.5),
        computed: sigma_t1,
        details: format!(
            "The radicand under the inner square root factors as a perfect square, so the \
             quoted expression equals 0.707107·√2 ≈ {:.7} for every λ₀. The computed top \
             singular value runs from {:.6} at λ₀ = 0.1 to {:.6} at λ₀ = 0.7 ({sigma_t1:.6} \
             at λ₀ = 0.5).",
            mu1_quoted(0.3),
            m_singular_values(&m_matrix(&canonical_to_state(&Canonical3Q::w_class_one(0.1)?)?)?)?
                [0],
            m_singular_values(&m_matrix(&canonical_to_state(&Canonical3Q::w_class_one(0.7)?)?)?)?
                [0],
        ),
    });

    // 7. Built on entry 6, the claim that the first family never exceeds the
    //    hybrid threshold 4 fails: direct maximization crosses it.
    let (seesaw_05, _) = svetlichny_max(&t1)?;
    let (seesaw_peak, _) = svetlichny_max(&canonical_to_state(&Canonical3Q::w_class_one(
        0.675,
    )?)?)?;
    entries.push(Discrepancy {
        id: "type-one-hybrid-bound-claim",
        title: "first family does exceed the hybrid threshold of 4",
        published: 4.0,
        computed: seesaw_05,
        details: format!(
            "The claim that this family satisfies the hybrid inequality rests on the \
             collapsed formula of the previous entry. Direct maximization reaches \
             {seesaw_05:.6} at λ₀ = 0.5 and {seesaw_peak:.6} at λ₀ = 0.675, both above 4."
        ),
    });

    // 8. The final row of the strength-cap table rounds a ~1.2e-7 value up
    //    to a 1e-4 placeholder.
    let u_final = u_bound_at(-0.28033);
    entries.push(Discrepancy {
        id: "strength-cap-table-final-row",
        title: "final strength-cap table row",
        published: 0.0001,
        computed: u_final,
        details: format!(
            "U(−0.28033) = {u_final:.6e}; the tabulated 0.0001 appears to be a display \
             floor rather than the formula value. Still inside the 5e-4 reproduction \
             tolerance, so the table check passes either way."
        ),
    });

    // 9. The yz-strength inversion's printed constants: divisor and additive
    //    constant are off; the subtracted constant is right.
    let q = 0.001;
    let divisor = q * SQRT2 / 2.0;
    let additive = 4.0 * (q * SQRT2) * ((1.0 - q) * (2.0 - SQRT2));
    entries.push(Discrepancy {
        id: "yz-inversion-constants",
        title: "printed constants of the yz-strength inversion",
        published: 0.007,
        computed: divisor,
        details: format!(
            "Inverting the q = 0.001 yz strength exactly gives \
             u = [−(8S − 1.41221356) + √((8S − 1.41221356)² + {additive:.8})]/{divisor:.9}. \
             The printed divisor 0.007 is an order of magnitude off, and the printed \
             additive constant 0.00330521 differs from {additive:.8} in the fourth digit; \
             the 1.41221 constant is correct at print precision. The library uses the \
             exact inversion."
        ),
    });

    // 10. The inversion beneath the first family's strength formula quotes a
    //     constant that disagrees with the formula right above it.
    let constant = 2.0 - 0.82 * SQRT2;
    entries.push(Discrepancy {
        id: "type-one-strength-constant",
        title: "inversion constant of the first family's strength formula",
        published: 0.840305,
        computed: constant,
        details: format!(
            "The strength formula quotes 0.840345, the correct rounding of \
             2 − 0.82√2 = {constant:.9}; the inversion immediately below it quotes \
             0.840305 for the same constant."
        ),
    });

    // 11. The quoted strength-to-cap companion for the second family matches
    //     neither the quoted singular-value formula nor the computed cap.
    let rho_ab_01 = reduce_to_ab(&Canonical3Q::w_class_two(0.1)?)?;
    let s_01 = crate::strength::s_nl_new(
        &rho_ab_01,
        &crate::witness::w_plane(Plane::Xy),
        0.6,
    )?;
    let companion = (16.0 + 33.1546 / s_01).sqrt();
    entries.push(Discrepancy {
        id: "type-two-companion-cap",
        title: "strength-to-cap companion for the second family",
        published: companion,
        computed: 4.0 * sigma_01,
        details: format!(
            "At λ₀ = 0.1 (strength {s_01:.6}) the quoted companion √(16 + 33.1546/S) \
             gives {companion:.6}, while four times the computed top singular value is \
             {:.6} and four times the quoted singular-value formula is {:.6}. The three \
             disagree pairwise; the curve datasets report the companion as printed and \
             assert nothing against it.",
            4.0 * sigma_01,
            4.0 * (1.0 + 3.92 * 0.01f64).sqrt()
        ),
    });

    // 12. The admissible mixing-weight range for the second family is quoted
    //     in an inverted form; the computed thresholds say q = 0.6 is legal
    //     everywhere.
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    for k in 0..7 {
        let l0 = 0.1 + 0.6 * (k as f64) / 6.0;
        let rho_ab = reduce_to_ab(&Canonical3Q::w_class_two(l0)?)?;
        let cap = q_upper_bound(&rho_ab, &crate::witness::w_plane(Plane::Xy))?;
        q_min = q_min.min(cap);
        q_max = q_max.max(cap);
    }
    entries.push(Discrepancy {
        id: "type-two-mixing-range",
        title: "admissible mixing-weight range for the second family",
        published: 0.73,
        computed: q_min,
        details: format!(
            "The quoted range reads as q < [0.73, 1], which parses as excluding the \
             chosen q = 0.6. Computed thresholds over λ₀ ∈ [0.1, 0.7] run from \
             {q_min:.4} to {q_max:.4}, so q = 0.6 sits safely below every threshold; \
             the quoted interval is the threshold's own range, not a constraint \
             violated by 0.6."
        ),
    });

    Ok(entries)
}
