//! Report types emitted by the subcommands. Every number is an exact
//! rational/cyclotomic string; JSON field order and text layout are fixed
//! so identical inputs produce byte-identical reports.

use serde::Serialize;

use ncdc_core::matrix::Vector;

pub fn render_vector(v: &[ncdc_core::scalar::Cyclotomic]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

pub fn render_rows(rows: impl Iterator<Item = Vector>) -> Vec<Vec<String>> {
    rows.map(|r| render_vector(&r)).collect()
}

pub trait Render: Serialize {
    fn text(&self) -> String;
}

pub fn emit<R: Render>(report: &R, json: bool) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    // A closed pipe (e.g. piping into head) is not an error worth a panic.
    let _ = if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        )
    } else {
        writeln!(out, "{}", report.text())
    };
}

fn basis_lines(prefix: &str, rows: &[Vec<String>], out: &mut String) {
    for (i, r) in rows.iter().enumerate() {
        out.push_str(&format!("{}[{}]: [{}]\n", prefix, i, r.join(", ")));
    }
}

#[derive(Serialize)]
pub struct ValidateReport {
    pub name: String,
    pub dim: usize,
    pub field_order: u64,
    pub labels: Vec<String>,
    pub valid: bool,
}

impl Render for ValidateReport {
    fn text(&self) -> String {
        format!(
            "algebra {}: valid (dim {} over Q(zeta_{}))\nlabels: {}\n",
            self.name,
            self.dim,
            self.field_order,
            self.labels.join(", ")
        )
    }
}

#[derive(Serialize)]
pub struct CenterReport {
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

impl Render for CenterReport {
    fn text(&self) -> String {
        let mut s = format!("center: dim {}\n", self.dim);
        basis_lines("  z", &self.basis, &mut s);
        s
    }
}

#[derive(Serialize)]
pub struct DerReport {
    pub dim_der: usize,
    pub dim_int: usize,
    pub dim_out: usize,
    pub der_basis: Vec<Vec<String>>,
    pub out_representatives: Vec<Vec<String>>,
}

impl Render for DerReport {
    fn text(&self) -> String {
        let mut s = format!(
            "derivations: dim {}, inner {}, out {}\n",
            self.dim_der, self.dim_int, self.dim_out
        );
        basis_lines("  der", &self.der_basis, &mut s);
        basis_lines("  out", &self.out_representatives, &mut s);
        s
    }
}

#[derive(Serialize)]
pub struct HochschildReport {
    pub degree: usize,
    pub variant: String,
    pub dim_h: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub representatives: Vec<Vec<String>>,
}

impl Render for HochschildReport {
    fn text(&self) -> String {
        let mut s = format!(
            "H^{} ({} variant): dim {} (cocycles {}, coboundaries {})\n",
            self.degree, self.variant, self.dim_h, self.dim_cocycles, self.dim_coboundaries
        );
        basis_lines("  rep", &self.representatives, &mut s);
        s
    }
}

#[derive(Serialize)]
pub struct SeccohomSection {
    pub hypothesis_holds: bool,
    pub dim_h1_a_c: usize,
    pub dim_h1_constrained: usize,
    pub dim_h1_q: usize,
    pub additive: bool,
}

#[derive(Serialize)]
pub struct TangentSection {
    pub dim: usize,
    pub representatives: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct SubmanifoldCliReport {
    pub verdict: bool,
    pub dim_der_a: usize,
    pub dim_g_c: usize,
    pub dim_g_a: usize,
    pub dim_der_q: usize,
    pub dim_int_q: usize,
    pub dim_image_pi: usize,
    pub inner_lemma: bool,
    pub sequence_dims_exact: bool,
    pub ideal_dim: usize,
    pub quotient_dim: usize,
    pub seccohom: Option<SeccohomSection>,
    pub tangent: Option<TangentSection>,
}

impl Render for SubmanifoldCliReport {
    fn text(&self) -> String {
        let mut s = format!(
            "submanifold verdict: {}\n",
            if self.verdict { "YES" } else { "NO" }
        );
        s.push_str(&format!(
            "dims: Der(A) {}, G_C {}, G_A {}, Der(Q) {}, Int(Q) {}, im(pi) {}\n",
            self.dim_der_a,
            self.dim_g_c,
            self.dim_g_a,
            self.dim_der_q,
            self.dim_int_q,
            self.dim_image_pi
        ));
        s.push_str(&format!(
            "ideal dim {}, quotient dim {}\n",
            self.ideal_dim, self.quotient_dim
        ));
        s.push_str(&format!(
            "inner-derivation lemma path: {}\n",
            if self.inner_lemma {
                "yes (Der(Q) = Int(Q))"
            } else {
                "no"
            }
        ));
        s.push_str(&format!(
            "sequence dims exact (G_C = G_A + im pi): {}\n",
            self.sequence_dims_exact
        ));
        if let Some(sec) = &self.seccohom {
            s.push_str(&format!(
                "cohomology sequence: hypothesis {}, H1(A;C) {}, H1_C(A;A) {}, H1(Q;Q) {}, additive {}\n",
                sec.hypothesis_holds,
                sec.dim_h1_a_c,
                sec.dim_h1_constrained,
                sec.dim_h1_q,
                sec.additive
            ));
        }
        if let Some(t) = &self.tangent {
            s.push_str(&format!("tangent space: dim {}\n", t.dim));
            basis_lines("  T", &t.representatives, &mut s);
        }
        s
    }
}

#[derive(Serialize)]
pub struct IsomDegreeSection {
    pub degree: usize,
    pub dim_basic_a: usize,
    pub dim_omega_bar_b: usize,
    pub bijective: bool,
}

#[derive(Serialize)]
pub struct IsomSection {
    pub hypothesis_zmodule_full: bool,
    pub degrees: Vec<IsomDegreeSection>,
}

#[derive(Serialize)]
pub struct QuotientManifoldCliReport {
    pub mode: String,
    pub verdict: bool,
    pub cond_center: bool,
    pub cond_der_iso: bool,
    pub cond_basic: bool,
    pub dim_g_hat: usize,
    pub dim_h: usize,
    pub dim_der_b: usize,
    pub dim_induced: usize,
    pub isom: Option<IsomSection>,
}

impl Render for QuotientManifoldCliReport {
    fn text(&self) -> String {
        let mut s = format!(
            "quotient manifold verdict ({} mode): {}\n",
            self.mode,
            if self.verdict { "YES" } else { "NO" }
        );
        s.push_str(&format!(
            "(i) Z(B) = B n Z(A): {}\n(ii) Der(B) = h/g-hat: {}\n(iii) B basic for g-hat: {}\n",
            self.cond_center, self.cond_der_iso, self.cond_basic
        ));
        s.push_str(&format!(
            "dims: g-hat {}, h {}, Der(B) {}, h/g-hat {}\n",
            self.dim_g_hat, self.dim_h, self.dim_der_b, self.dim_induced
        ));
        if let Some(isom) = &self.isom {
            s.push_str(&format!(
                "basic-forms comparison: hypothesis (Z(A)-span of h is Der(A)) {}\n",
                isom.hypothesis_zmodule_full
            ));
            for d in &isom.degrees {
                s.push_str(&format!(
                    "  degree {}: basic {} vs forms(B) {} bijective {}\n",
                    d.degree, d.dim_basic_a, d.dim_omega_bar_b, d.bijective
                ));
            }
        }
        s
    }
}

#[derive(Serialize)]
pub struct FormsDegreeSection {
    pub degree: usize,
    pub dim_generated: usize,
    pub dim_full: usize,
    pub generated_inside_full: bool,
}

#[derive(Serialize)]
pub struct FormsCliReport {
    pub cap: usize,
    pub der_rank: usize,
    pub degrees: Vec<FormsDegreeSection>,
}

impl Render for FormsCliReport {
    fn text(&self) -> String {
        let mut s = format!(
            "forms up to degree {}: Der(A) rank {}\n",
            self.cap, self.der_rank
        );
        for d in &self.degrees {
            s.push_str(&format!(
                "  degree {}: generated {} inside full {} ({})\n",
                d.degree, d.dim_generated, d.dim_full, d.generated_inside_full
            ));
        }
        s
    }
}

#[derive(Serialize)]
pub struct ConnectionCliReport {
    pub quotient_manifold_verdict: bool,
    pub dim_der_b: usize,
    pub splitting: Vec<Vec<String>>,
    pub flat: bool,
    pub nonzero_curvature_pairs: usize,
    pub projector_idempotent: bool,
    pub projector_image_vertical: bool,
    pub projection_roundtrip_identity: bool,
}

impl Render for ConnectionCliReport {
    fn text(&self) -> String {
        let mut s = format!(
            "connection from synthesized splitting: Der(B) dim {}, flat {}\n",
            self.dim_der_b, self.flat
        );
        s.push_str(&format!(
            "nonzero curvature pairs: {}\n",
            self.nonzero_curvature_pairs
        ));
        s.push_str(&format!(
            "covariant projection: idempotent {}, image = g-hat {}, roundtrip identity {}\n",
            self.projector_idempotent,
            self.projector_image_vertical,
            self.projection_roundtrip_identity
        ));
        basis_lines("  psi", &self.splitting, &mut s);
        s
    }
}

#[derive(Serialize)]
pub struct NfReport {
    pub presentation: String,
    pub input: String,
    pub normal_form: String,
    pub steps_cap: usize,
}

impl Render for NfReport {
    fn text(&self) -> String {
        format!(
            "presentation {}\ninput: {}\nnormal form: {}\n",
            self.presentation, self.input, self.normal_form
        )
    }
}

#[derive(Serialize)]
pub struct MemberReport {
    pub presentation: String,
    pub poly: String,
    pub confluence_bound: usize,
    pub confluent: bool,
    pub member: bool,
}

impl Render for MemberReport {
    fn text(&self) -> String {
        format!(
            "presentation {}\npoly: {}\nconfluent up to degree {}: {}\nideal member: {}\n",
            self.presentation, self.poly, self.confluence_bound, self.confluent, self.member
        )
    }
}

#[derive(Serialize)]
pub struct QuotientCliReport {
    pub presentation: String,
    pub confluence_bound: usize,
    pub dim: usize,
    pub basis_words: Vec<String>,
    pub center_dim: usize,
    pub der_dim: usize,
    pub int_dim: usize,
    pub out_dim: usize,
    pub submanifold_by_inner_lemma: bool,
    pub emitted: Option<String>,
}

impl Render for QuotientCliReport {
    fn text(&self) -> String {
        let mut s = format!(
            "finite quotient of {}: dim {} (confluence bound {})\n",
            self.presentation, self.dim, self.confluence_bound
        );
        s.push_str(&format!("basis words: {}\n", self.basis_words.join(", ")));
        s.push_str(&format!(
            "center {}, derivations {}, inner {}, out {}\n",
            self.center_dim, self.der_dim, self.int_dim, self.out_dim
        ));
        s.push_str(&format!(
            "submanifold of the free algebra via the inner-derivation lemma: {}\n",
            if self.submanifold_by_inner_lemma {
                "YES"
            } else {
                "not decided"
            }
        ));
        if let Some(path) = &self.emitted {
            s.push_str(&format!("algebra file written: {}\n", path));
        }
        s
    }
}

#[derive(Serialize)]
pub struct ReportAll {
    pub validate: ValidateReport,
    pub center: CenterReport,
    pub derivations: DerReport,
    pub submanifold: Option<SubmanifoldCliReport>,
    pub quotient_manifold: Option<QuotientManifoldCliReport>,
}

impl Render for ReportAll {
    fn text(&self) -> String {
        let mut s = self.validate.text();
        s.push_str(&self.center.text());
        s.push_str(&self.derivations.text());
        if let Some(sub) = &self.submanifold {
            s.push_str(&sub.text());
        }
        if let Some(qm) = &self.quotient_manifold {
            s.push_str(&qm.text());
        }
        s
    }
}

#[derive(Serialize)]
pub struct FixturesReport {
    pub written: Vec<String>,
}

impl Render for FixturesReport {
    fn text(&self) -> String {
        format!("fixtures written:\n{}\n", self.written.join("\n"))
    }
}
