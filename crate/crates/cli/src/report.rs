//! Report assembly and rendering: every run produces one report carrying the
//! echoed inputs, the standing assumptions, the verdict with its certificate,
//! and (when a curve profile is given) the genus-bound data. The JSON form
//! contains every number needed to recheck the certificate by hand:
//! epsilon as numerator/denominator, one shift witness per factor, and the
//! per-factor thresholds.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde_json::{json, Value};

use alghyp_core::criteria::Verdict;
use alghyp_core::curves::{GenusBound, MinGenusBound};
use alghyp_core::model::VarietyInstance;
use alghyp_core::CurveType;

/// One row of the per-type genus table.
pub struct GenusRow {
    pub ty: CurveType,
    pub direct: GenusBound,
    /// Scroll-route bound at an extremal type, when one exists.
    pub scroll: Option<(GenusBound, alghyp_core::MultiIndex)>,
}

pub struct GenusSection {
    pub profile: Vec<u32>,
    pub rows: Vec<GenusRow>,
    /// Present when the instance is certified hyperbolic.
    pub summary: Option<MinGenusBound>,
    pub certified: bool,
}

pub struct RunReport {
    pub instance: VarietyInstance,
    pub verdict: Verdict,
    pub genus: Option<GenusSection>,
}

fn rational_str(r: &BigRational) -> String {
    r.to_string()
}

fn rational_json(r: &BigRational) -> Value {
    json!({
        "numerator": r.numer().to_string(),
        "denominator": r.denom().to_string(),
        "display": rational_str(r),
    })
}

fn assumptions(inst: &VarietyInstance) -> Vec<String> {
    let mut list = vec![
        "the defining section of X is very general (never verified)".to_string(),
        "X is smooth and irreducible of codimension k in A (never verified)".to_string(),
    ];
    if inst.ambient().is_full_product() {
        list.push("ambient homogeneity: holds (full product of projective spaces)".to_string());
    } else if inst.ambient().homogeneous_asserted() {
        list.push("ambient homogeneity: asserted by the user (not verified)".to_string());
    } else {
        list.push(
            "ambient homogeneity: NOT asserted; every verdict is conditional on it".to_string(),
        );
    }
    list.push(format!(
        "section domination: {}",
        inst.domination().describe()
    ));
    list
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let inst = &self.instance;
        let amb = inst.ambient();
        let mut out = String::new();
        let shape: Vec<String> = amb.bounds().iter().map(|n| format!("P^{n}")).collect();
        let _ = writeln!(out, "== hyperbolicity report ==");
        let _ = writeln!(
            out,
            "ambient: {} ({}), dim A = {}",
            shape.join(" x "),
            if amb.is_full_product() {
                "full product"
            } else {
                "proper subvariety"
            },
            amb.dim()
        );
        let _ = writeln!(
            out,
            "canonical coefficients a = {:?}",
            amb.canonical_coefficients()
        );
        let _ = writeln!(out, "bundle rank k = {}", inst.rank());
        if let Some(split) = inst.split() {
            let _ = writeln!(out, "split degrees (rows are summands): {:?}", split.rows());
        }
        let _ = writeln!(out, "c1 coefficients d = {:?}", inst.chern().c1());
        let _ = writeln!(out, "class of X: {}", inst.class_of_x());
        let _ = writeln!(out, "K_X coefficients a + d = {:?}", inst.kx_coefficients());
        let _ = writeln!(out, "assumptions:");
        for a in assumptions(inst) {
            let _ = writeln!(out, "  - {a}");
        }
        let _ = writeln!(
            out,
            "thresholds per factor (lower = D-k-a_i-1, line = D-k-a_i-3):"
        );
        for i in 0..inst.factor_count() {
            let _ = writeln!(
                out,
                "  factor {}: d = {}, lower = {}, line = {}",
                i + 1,
                inst.d(i),
                inst.lower_threshold(i),
                inst.line_threshold(i)
            );
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.kind);
        if let Some(i) = self.verdict.witness_factor {
            let _ = writeln!(out, "witness factor: {}", i + 1);
        }
        if let Some(cert) = &self.verdict.certificate {
            let _ = writeln!(
                out,
                "epsilon = {} (path: {}; relative to H = H1 + ... + Hm)",
                rational_str(&cert.eps),
                cert.path
            );
            if !cert.witnesses.is_empty() {
                let _ = writeln!(out, "shift witnesses:");
                for (r, lambda) in &cert.witnesses {
                    let _ = writeln!(out, "  r = {}: lambda = {lambda}", r + 1);
                }
            }
            let _ = writeln!(out, "coefficient floors (epsilon is their minimum):");
            for (case, values) in &cert.coefficient_floors {
                let rendered: Vec<String> = values.iter().map(rational_str).collect();
                let _ = writeln!(out, "  {case}: [{}]", rendered.join(", "));
            }
        }
        if !self.verdict.reasons.is_empty() {
            let _ = writeln!(out, "notes:");
            for r in &self.verdict.reasons {
                let _ = writeln!(out, "  - {r}");
            }
        }
        if let Some(genus) = &self.genus {
            let _ = writeln!(out, "-- genus bounds for profile e = {:?} --", genus.profile);
            if !genus.certified {
                let _ = writeln!(
                    out,
                    "instance is not certified hyperbolic: no positive genus floor is claimed{}",
                    if genus.rows.is_empty() {
                        ""
                    } else {
                        "; the rows below are conditional bounds only"
                    }
                );
            }
            for row in &genus.rows {
                let mut line = format!(
                    "  type {:?}: 2g - 2 >= {}",
                    row.ty.entries(),
                    rational_str(&row.direct.two_g_minus_2_lb)
                );
                if let Some((scroll, lambda)) = &row.scroll {
                    let _ = write!(
                        line,
                        " ; scroll route {} with lambda = {lambda}",
                        rational_str(&scroll.two_g_minus_2_lb)
                    );
                }
                let _ = writeln!(out, "{line}");
            }
            if let Some(summary) = &genus.summary {
                let _ = writeln!(
                    out,
                    "summary: 2g - 2 >= {} (genus >= {}) for every integral curve of this \
                     profile; winning type {:?}{}",
                    rational_str(&summary.bound.two_g_minus_2_lb),
                    summary.bound.genus_lb,
                    summary.winning_type.entries(),
                    match (&summary.winning_factor, &summary.winning_lambda) {
                        (Some(r), Some(lambda)) =>
                            format!(", scroll route at factor {} with lambda = {lambda}", r + 1),
                        _ => String::new(),
                    }
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let inst = &self.instance;
        let amb = inst.ambient();
        let thresholds: Vec<Value> = (0..inst.factor_count())
            .map(|i| {
                json!({
                    "factor": i + 1,
                    "d": inst.d(i),
                    "lower": inst.lower_threshold(i),
                    "line": inst.line_threshold(i),
                })
            })
            .collect();
        let certificate = self.verdict.certificate.as_ref().map(|cert| {
            json!({
                "epsilon": rational_json(&cert.eps),
                "path": cert.path.to_string(),
                "witnesses": cert
                    .witnesses
                    .iter()
                    .map(|(r, lambda)| {
                        json!({ "factor": r + 1, "lambda": lambda.entries() })
                    })
                    .collect::<Vec<_>>(),
                "coefficient_floors": cert
                    .coefficient_floors
                    .iter()
                    .map(|(case, values)| {
                        json!({
                            "case": case.to_string(),
                            "values": values.iter().map(rational_json).collect::<Vec<_>>(),
                        })
                    })
                    .collect::<Vec<_>>(),
            })
        });
        let genus = self.genus.as_ref().map(|g| {
            json!({
                "profile": g.profile,
                "certified": g.certified,
                "rows": g
                    .rows
                    .iter()
                    .map(|row| {
                        json!({
                            "type": row.ty.entries(),
                            "two_g_minus_2": rational_json(&row.direct.two_g_minus_2_lb),
                            "genus_lb": row.direct.genus_lb.to_string(),
                            "scroll": row.scroll.as_ref().map(|(b, lambda)| {
                                json!({
                                    "two_g_minus_2": rational_json(&b.two_g_minus_2_lb),
                                    "lambda": lambda.entries(),
                                })
                            }),
                        })
                    })
                    .collect::<Vec<_>>(),
                "summary": g.summary.as_ref().map(|s| {
                    json!({
                        "two_g_minus_2": rational_json(&s.bound.two_g_minus_2_lb),
                        "genus_lb": s.bound.genus_lb.to_string(),
                        "winning_type": s.winning_type.entries(),
                        "winning_factor": s.winning_factor.map(|r| r + 1),
                        "winning_lambda": s.winning_lambda.as_ref().map(|l| l.entries().to_vec()),
                    })
                }),
            })
        });
        json!({
            "inputs": {
                "ambient": {
                    "m": amb.factor_count(),
                    "n": amb.bounds(),
                    "dim": amb.dim(),
                    "a": amb.canonical_coefficients(),
                    "full_product": amb.is_full_product(),
                    "homogeneous_asserted": amb.homogeneous_asserted(),
                },
                "bundle": {
                    "k": inst.rank(),
                    "split": inst.split().map(|s| s.rows().to_vec()),
                    "c1": inst.chern().c1(),
                    "class_of_x": inst.class_of_x().to_string(),
                    "d_alpha": inst
                        .chern()
                        .d_alpha()
                        .iter()
                        .map(|(a, c)| json!({ "alpha": a.entries(), "coefficient": c.to_string() }))
                        .collect::<Vec<_>>(),
                },
                "kx": inst.kx_coefficients(),
            },
            "assumptions": assumptions(inst),
            "thresholds": thresholds,
            "verdict": {
                "kind": self.verdict.kind.to_string(),
                "witness_factor": self.verdict.witness_factor.map(|i| i + 1),
                "reasons": self.verdict.reasons,
            },
            "certificate": certificate,
            "genus": genus,
            "warnings": inst.warnings(),
        })
    }
}
