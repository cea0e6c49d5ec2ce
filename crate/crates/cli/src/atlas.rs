//! Atlas sweep: classifies every complete intersection of hypersurfaces in
//! `P^n` over a parameter grid and emits one CSV row per degree multiset.
//! Output is byte-stable: rows are generated in sorted order (n, then k,
//! then the nondecreasing degree vector) and all numbers are exact.

use std::fmt::Write as _;

use thiserror::Error;

use alghyp_core::criteria::{
    classify, classify_pn_ci, known_hypersurface_status, KnownStatus, VerdictKind,
};
use alghyp_core::model::{build_instance, AmbientSpace, BundleInput, DominationFlag, SplitBundleSpec};

use crate::config::AtlasSection;

pub const ATLAS_HEADER: &str = "n,k,degrees,sum,verdict,epsilon,known_status,agreement";

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("atlas grid has {rows} rows, above the cap {cap}; raise --row-cap to proceed")]
    RowCap { rows: u128, cap: u64 },
    #[error("atlas failure: {0}")]
    Internal(String),
}

/// Number of multisets of size `k` drawn from `values` distinct degrees:
/// the binomial C(values + k - 1, k), computed with interleaved division so
/// every intermediate stays exact.
fn multiset_count(values: u128, k: u128) -> u128 {
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul(values + i) / (i + 1);
    }
    result
}

/// Total number of rows the grid will produce.
pub fn grid_size(atlas: &AtlasSection) -> u128 {
    let mut total: u128 = 0;
    for n in atlas.n_range.0..=atlas.n_range.1 {
        let k_hi = atlas.k_range.1.min(n.saturating_sub(2));
        for k in atlas.k_range.0..=k_hi {
            total = total.saturating_add(multiset_count(
                atlas.degree_max as u128,
                u128::from(k),
            ));
        }
    }
    total
}

fn verdicts_agree(kind: VerdictKind, known: KnownStatus) -> bool {
    !(kind == VerdictKind::Hyperbolic && known == KnownStatus::KnownNotHyperbolic)
        && !(kind == VerdictKind::NotHyperbolic && known == KnownStatus::KnownHyperbolic)
}

fn push_rows_for(
    n: u32,
    k: u32,
    degree_max: i64,
    out: &mut String,
) -> Result<(), AtlasError> {
    let ambient = AmbientSpace::projective(n);
    let mut degrees = vec![1i64; k as usize];
    loop {
        let rows: Vec<Vec<i64>> = degrees.iter().map(|&d| vec![d]).collect();
        let spec = SplitBundleSpec::new(rows)
            .map_err(|e| AtlasError::Internal(e.to_string()))?;
        let inst = build_instance(
            &ambient,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .map_err(|e| AtlasError::Internal(e.to_string()))?;
        let verdict = classify(&inst).map_err(|e| AtlasError::Internal(e.to_string()))?;
        let closed_form =
            classify_pn_ci(n, &degrees).map_err(|e| AtlasError::Internal(e.to_string()))?;

        let sum: i64 = degrees.iter().sum();
        let eps = verdict
            .certificate
            .as_ref()
            .map(|c| c.eps.to_string())
            .unwrap_or_default();
        let (known_str, known_ok) = if k == 1 {
            let known = known_hypersurface_status(n, degrees[0])
                .map_err(|e| AtlasError::Internal(e.to_string()))?;
            (known.to_string(), verdicts_agree(verdict.kind, known))
        } else {
            (String::new(), true)
        };
        let agreement = verdict.kind == closed_form.kind && known_ok;
        let degrees_str = degrees
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(
            out,
            "{n},{k},{degrees_str},{sum},{},{eps},{known_str},{agreement}",
            verdict.kind
        );

        // Next nondecreasing degree vector.
        let mut pos = degrees.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if degrees[pos] < degree_max {
                degrees[pos] += 1;
                for later in pos + 1..degrees.len() {
                    degrees[later] = degrees[pos];
                }
                break;
            }
        }
    }
}

/// Generates the full CSV document for an atlas section, enforcing the row
/// cap before any computation.
pub fn atlas_csv(atlas: &AtlasSection, row_cap: u64) -> Result<String, AtlasError> {
    let rows = grid_size(atlas);
    if rows > u128::from(row_cap) {
        return Err(AtlasError::RowCap {
            rows,
            cap: row_cap,
        });
    }
    let mut out = String::from(ATLAS_HEADER);
    out.push('\n');
    for n in atlas.n_range.0..=atlas.n_range.1 {
        let k_hi = atlas.k_range.1.min(n.saturating_sub(2));
        for k in atlas.k_range.0..=k_hi {
            push_rows_for(n, k, atlas.degree_max, &mut out)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypersurface_band_rows() {
        let atlas = AtlasSection {
            n_range: (4, 4),
            k_range: (1, 1),
            degree_max: 7,
        };
        let csv = atlas_csv(&atlas, 1000).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], ATLAS_HEADER);
        assert_eq!(lines.len(), 8);
        let find = |d: &str| {
            lines
                .iter()
                .find(|l| l.starts_with(&format!("4,1,{d},")))
                .copied()
                .unwrap()
        };
        assert_eq!(find("5"), "4,1,5,5,NotHyperbolic,,KnownNotHyperbolic,true");
        assert_eq!(find("6"), "4,1,6,6,Undetermined,,Open,true");
        assert_eq!(find("7"), "4,1,7,7,Hyperbolic,1/7,KnownHyperbolic,true");
    }

    #[test]
    fn band_between_thresholds() {
        let atlas = AtlasSection {
            n_range: (5, 5),
            k_range: (2, 2),
            degree_max: 5,
        };
        let csv = atlas_csv(&atlas, 1000).unwrap();
        assert!(csv.contains("5,2,3;4,7,Undetermined,,,true"));
        assert!(csv.contains("5,2,4;4,8,Hyperbolic,1/16,,true"));
        assert!(csv.contains("5,2,3;3,6,NotHyperbolic,,,true"));
    }

    #[test]
    fn empty_grid_yields_header_only() {
        // k range above every admissible k for these n.
        let atlas = AtlasSection {
            n_range: (3, 3),
            k_range: (2, 2),
            degree_max: 5,
        };
        let csv = atlas_csv(&atlas, 1000).unwrap();
        assert_eq!(csv, format!("{ATLAS_HEADER}\n"));
    }

    #[test]
    fn row_cap_is_enforced() {
        let atlas = AtlasSection {
            n_range: (3, 8),
            k_range: (1, 6),
            degree_max: 16,
        };
        assert!(matches!(
            atlas_csv(&atlas, 10),
            Err(AtlasError::RowCap { .. })
        ));
    }
}
