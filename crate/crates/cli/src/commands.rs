//! Subcommand implementations: thin orchestration over the library,
//! producing the report structures.

use std::path::Path;

use ncdc_core::algebra::{FDAlgebra, Ideal};
use ncdc_core::bimodule::Bimodule;
use ncdc_core::derivation::{derivations, inner_derivations, out};
use ncdc_core::forms::{isom_check, FormContext};
use ncdc_core::freealg::{confluence_check, finite_quotient, ideal_member, nf};
use ncdc_core::geometry::{
    quotient_manifold_check, seccohom_check, submanifold_check, tangent_space, QmMode,
};
use ncdc_core::hochschild::{cohomology, ComplexVariant};
use ncdc_core::subspace::Subspace;
use ncdc_core::{Error, Result};

use crate::expr::{parse_element_list, parse_poly};
use crate::formats::{poly_to_string, read_presentation, write_algebra, Presentation};
use crate::reports::*;

#[derive(Clone, Copy)]
pub struct Session {
    pub hochschild_cap: usize,
    pub form_cap: usize,
    pub step_cap: usize,
    pub word_cap: usize,
}

impl Session {
    pub fn validate(&self) -> Result<()> {
        if self.hochschild_cap == 0 || self.form_cap == 0 {
            return Err(Error::Parse("degree caps must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn validate_report(name: &str, alg: &FDAlgebra) -> ValidateReport {
    ValidateReport {
        name: name.to_string(),
        dim: alg.dim(),
        field_order: alg.order(),
        labels: alg.labels().to_vec(),
        valid: true,
    }
}

pub fn center_report(alg: &FDAlgebra) -> CenterReport {
    let z = alg.center();
    CenterReport {
        dim: z.dim(),
        basis: render_rows(z.basis_rows()),
    }
}

pub fn der_report(alg: &FDAlgebra) -> DerReport {
    let der = derivations(alg);
    let int = inner_derivations(alg);
    let (dim_out, reps) = out(alg);
    DerReport {
        dim_der: der.dim(),
        dim_int: int.dim(),
        dim_out,
        der_basis: render_rows(der.space.basis_rows()),
        out_representatives: reps.iter().map(|d| render_vector(&d.to_vec())).collect(),
    }
}

pub fn hochschild_report(
    session: &Session,
    alg: &FDAlgebra,
    degree: usize,
    variant_name: &str,
    subalgebra_basis: Option<&str>,
    ideal_gens: Option<&str>,
) -> Result<HochschildReport> {
    let reg = Bimodule::regular(alg);
    let variant = match variant_name {
        "ordinary" => ComplexVariant::Ordinary,
        "relative" => {
            let s = match subalgebra_basis {
                Some(expr) => {
                    Subspace::from_vectors(alg.dim(), alg.order(), &parse_element_list(expr, alg)?)
                }
                None => alg.center(),
            };
            ComplexVariant::Relative(s)
        }
        "normalized" => {
            let s = match subalgebra_basis {
                Some(expr) => {
                    Subspace::from_vectors(alg.dim(), alg.order(), &parse_element_list(expr, alg)?)
                }
                None => alg.center(),
            };
            ComplexVariant::NormalizedRelative(s)
        }
        "constrained" => {
            let gens = ideal_gens
                .ok_or_else(|| Error::Parse("the constrained variant needs --ideal-gens".into()))?;
            let c = alg.ideal_closure(&parse_element_list(gens, alg)?);
            ComplexVariant::Constrained {
                c: c.space.clone(),
                n: c.space,
            }
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown variant '{}': expected ordinary|relative|normalized|constrained",
                other
            )))
        }
    };
    let h = cohomology(alg, &reg, degree, &variant, session.hochschild_cap)?;
    Ok(HochschildReport {
        degree,
        variant: variant_name.to_string(),
        dim_h: h.dim,
        dim_cocycles: h.cocycles.dim(),
        dim_coboundaries: h.coboundaries.dim(),
        representatives: h
            .representatives
            .iter()
            .map(|c| render_vector(&c.tensor))
            .collect(),
    })
}

pub fn submanifold_report(
    alg: &FDAlgebra,
    ideal_gens: &str,
    with_seccohom: bool,
    with_tangent: bool,
) -> Result<SubmanifoldCliReport> {
    let c = alg.ideal_closure(&parse_element_list(ideal_gens, alg)?);
    submanifold_report_for_ideal(alg, &c, with_seccohom, with_tangent)
}

pub fn submanifold_report_for_ideal(
    alg: &FDAlgebra,
    c: &Ideal,
    with_seccohom: bool,
    with_tangent: bool,
) -> Result<SubmanifoldCliReport> {
    let data = submanifold_check(alg, c)?;
    let r = &data.report;
    let seccohom = if with_seccohom && r.verdict {
        let s = seccohom_check(alg, c, &data)?;
        Some(SeccohomSection {
            hypothesis_holds: s.hypothesis_holds,
            dim_h1_a_c: s.dim_h1_a_c,
            dim_h1_constrained: s.dim_h1_constrained,
            dim_h1_q: s.dim_h1_q,
            additive: s.additive,
        })
    } else {
        None
    };
    let tangent = if with_tangent && r.verdict {
        let t = tangent_space(alg, c, &data)?;
        Some(TangentSection {
            dim: t.dim,
            representatives: t.reps.iter().map(|v| render_vector(v)).collect(),
        })
    } else {
        None
    };
    Ok(SubmanifoldCliReport {
        verdict: r.verdict,
        dim_der_a: r.dim_der_a,
        dim_g_c: r.dim_g_c,
        dim_g_a: r.dim_g_a,
        dim_der_q: r.dim_der_q,
        dim_int_q: r.dim_int_q,
        dim_image_pi: r.dim_image_pi,
        inner_lemma: r.inner_lemma,
        sequence_dims_exact: r.sequence_dims_exact,
        ideal_dim: c.dim(),
        quotient_dim: data.quotient.algebra.dim(),
        seccohom,
        tangent,
    })
}

pub fn quotient_manifold_report(
    session: &Session,
    alg: &FDAlgebra,
    subalgebra_basis: &str,
    relaxed: bool,
    isom_cap: Option<usize>,
) -> Result<QuotientManifoldCliReport> {
    let b = Subspace::from_vectors(
        alg.dim(),
        alg.order(),
        &parse_element_list(subalgebra_basis, alg)?,
    );
    let mode = if relaxed {
        QmMode::Relaxed
    } else {
        QmMode::Strict
    };
    let data = quotient_manifold_check(alg, &b, mode)?;
    let r = &data.report;
    let isom = match isom_cap {
        Some(cap) if r.verdict => {
            if cap > session.form_cap {
                return Err(Error::CapExceeded {
                    requested: cap,
                    cap: session.form_cap,
                });
            }
            let ctx = FormContext::new(alg);
            let rep = isom_check(&ctx, &data.subalgebra, &data.h, &data.g_hat, &data.rho, cap)?;
            Some(IsomSection {
                hypothesis_zmodule_full: rep.hypothesis_zmodule_full,
                degrees: rep
                    .degrees
                    .iter()
                    .map(|d| IsomDegreeSection {
                        degree: d.degree,
                        dim_basic_a: d.dim_basic_a,
                        dim_omega_bar_b: d.dim_omega_bar_b,
                        bijective: d.bijective,
                    })
                    .collect(),
            })
        }
        _ => None,
    };
    Ok(QuotientManifoldCliReport {
        mode: if relaxed {
            "relaxed".into()
        } else {
            "strict".into()
        },
        verdict: r.verdict,
        cond_center: r.cond_center,
        cond_der_iso: r.cond_der_iso,
        cond_basic: r.cond_basic,
        dim_g_hat: r.dim_g_hat,
        dim_h: r.dim_h,
        dim_der_b: r.dim_der_b,
        dim_induced: r.dim_induced,
        isom,
    })
}

pub fn forms_report(
    session: &Session,
    alg: &FDAlgebra,
    cap: Option<usize>,
) -> Result<FormsCliReport> {
    let cap = cap.unwrap_or(session.form_cap);
    if cap > session.form_cap {
        return Err(Error::CapExceeded {
            requested: cap,
            cap: session.form_cap,
        });
    }
    let ctx = FormContext::new(alg);
    let omega = ctx.omega_generated(cap)?;
    let mut degrees = Vec::new();
    for (n, gen) in omega.iter().enumerate() {
        let full = ctx.omega_bar(n, cap)?;
        degrees.push(FormsDegreeSection {
            degree: n,
            dim_generated: gen.dim(),
            dim_full: full.dim(),
            generated_inside_full: full.contains_subspace(gen),
        });
    }
    Ok(FormsCliReport {
        cap,
        der_rank: ctx.rank(),
        degrees,
    })
}

pub fn connection_report(alg: &FDAlgebra, subalgebra_basis: &str) -> Result<ConnectionCliReport> {
    let b = Subspace::from_vectors(
        alg.dim(),
        alg.order(),
        &crate::expr::parse_element_list(subalgebra_basis, alg)?,
    );
    let qm = quotient_manifold_check(alg, &b, QmMode::Strict)?;
    if !qm.report.verdict {
        return Err(Error::PredicateNotVerified(
            "connections are synthesized once the quotient manifold verdict holds".into(),
        ));
    }
    let psi = ncdc_core::connection::synthesize_splitting(alg, &qm)?;
    let data = ncdc_core::connection::connection_from_splitting(alg, &qm, &psi)?;
    let p = ncdc_core::connection::covariant_projection(alg, &qm, &psi)?;
    let psi2 = ncdc_core::connection::projection_to_splitting(alg, &qm, &p)?;
    let roundtrip = psi2.matrix == psi.matrix;
    let nonzero = data
        .curvature
        .iter()
        .filter(|(_, _, m)| !m.is_zero())
        .count();
    let rows = (0..psi.matrix.rows())
        .map(|i| psi.matrix.row_vec(i))
        .collect::<Vec<_>>();
    Ok(ConnectionCliReport {
        quotient_manifold_verdict: true,
        dim_der_b: qm.der_b.dim(),
        splitting: rows.iter().map(|r| render_vector(r)).collect(),
        flat: data.flat,
        nonzero_curvature_pairs: nonzero,
        projector_idempotent: true,
        projector_image_vertical: true,
        projection_roundtrip_identity: roundtrip,
    })
}

pub fn freealg_nf_report(session: &Session, pres: &Presentation, poly: &str) -> Result<NfReport> {
    let p = parse_poly(poly, &pres.system.generators, pres.system.order)?;
    let n = nf(&p, &pres.system, session.step_cap)?;
    Ok(NfReport {
        presentation: pres.name.clone(),
        input: poly_to_string(&p, &pres.system.generators),
        normal_form: poly_to_string(&n, &pres.system.generators),
        steps_cap: session.step_cap,
    })
}

pub fn freealg_member_report(
    session: &Session,
    pres: &Presentation,
    poly: &str,
    bound: Option<usize>,
) -> Result<MemberReport> {
    let p = parse_poly(poly, &pres.system.generators, pres.system.order)?;
    let bound = bound.unwrap_or_else(|| {
        let max_lhs = pres
            .system
            .rules
            .iter()
            .map(|r| r.lhs.len())
            .max()
            .unwrap_or(1);
        (2 * max_lhs).max(p.degree())
    });
    let rep = confluence_check(&pres.system, bound, session.step_cap)?;
    let member = ideal_member(&p, &pres.system, &rep, session.step_cap)?;
    Ok(MemberReport {
        presentation: pres.name.clone(),
        poly: poly_to_string(&p, &pres.system.generators),
        confluence_bound: bound,
        confluent: rep.ok(),
        member,
    })
}

pub fn freealg_quotient_report(
    session: &Session,
    pres: &Presentation,
    out_path: Option<&Path>,
    bound: Option<usize>,
) -> Result<QuotientCliReport> {
    let mut bound = bound.unwrap_or(16);
    let mut rep = confluence_check(&pres.system, bound, session.step_cap)?;
    let mut attempt = finite_quotient(&pres.system, &rep, session.word_cap, session.step_cap);
    // When the basis-word products outgrow the initial bound, re-check
    // confluence at the degree the quotient actually needs, once.
    if let Err(Error::ConfluenceNotEstablished { required, .. }) = &attempt {
        if *required > bound {
            bound = *required;
            rep = confluence_check(&pres.system, bound, session.step_cap)?;
            attempt = finite_quotient(&pres.system, &rep, session.word_cap, session.step_cap);
        }
    }
    let (alg, words) = attempt?;
    let der = derivations(&alg);
    let int = inner_derivations(&alg);
    let emitted = match out_path {
        Some(p) => {
            write_algebra(p, &format!("{}-quotient", pres.name), &alg)?;
            Some(p.display().to_string())
        }
        None => None,
    };
    Ok(QuotientCliReport {
        presentation: pres.name.clone(),
        confluence_bound: bound,
        dim: alg.dim(),
        basis_words: words
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.0.iter()
                        .map(|&g| pres.system.generators[g as usize].clone())
                        .collect::<Vec<_>>()
                        .join("")
                }
            })
            .collect(),
        center_dim: alg.center().dim(),
        der_dim: der.dim(),
        int_dim: int.dim(),
        out_dim: der.dim() - int.dim(),
        submanifold_by_inner_lemma: der.space == int.space,
        emitted,
    })
}

pub fn load_presentation(path: &Path) -> Result<Presentation> {
    read_presentation(path)
}

/// report-all chains validate, center, derivations and the requested
/// predicates; independent sections may be computed by parallel workers
/// while the assembly order stays fixed.
pub fn report_all(
    session: &Session,
    name: &str,
    alg: &FDAlgebra,
    ideal_gens: Option<&str>,
    subalgebra_basis: Option<&str>,
    pool: &rayon::ThreadPool,
) -> Result<ReportAll> {
    let (center, (ders, (sub, qm))) = pool.install(|| {
        rayon::join(
            || center_report(alg),
            || {
                rayon::join(
                    || der_report(alg),
                    || {
                        rayon::join(
                            || {
                                ideal_gens
                                    .map(|gens| submanifold_report(alg, gens, true, true))
                                    .transpose()
                            },
                            || {
                                subalgebra_basis
                                    .map(|b| quotient_manifold_report(session, alg, b, false, None))
                                    .transpose()
                            },
                        )
                    },
                )
            },
        )
    });
    Ok(ReportAll {
        validate: validate_report(name, alg),
        center,
        derivations: ders,
        submanifold: sub?,
        quotient_manifold: qm?,
    })
}
