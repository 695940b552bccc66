//! Sweeps of the consistency report over the bundled group catalog.

use std::sync::Arc;

use rayon::prelude::*;

use crate::cohomology::{cohomology_classes, TwistedCochain};
use crate::error::{Error, Result};
use crate::groups::{enumerate_gradings, group_by_name, GradedGroup};
use crate::moduli::Surface;
use crate::tqft::{consistency_report, ConsistencyReport, ReportOptions};

pub const MANIFEST: &str = include_str!("../catalog/manifest.txt");

/// `(swept, extended)` group names from a manifest; `#` starts a comment and
/// a line `[extended]` starts the second list.
pub fn parse_manifest(text: &str) -> (Vec<String>, Vec<String>) {
    let mut swept = Vec::new();
    let mut extended = Vec::new();
    let mut target = &mut swept;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "[extended]" {
            target = &mut extended;
            continue;
        }
        target.push(line.to_string());
    }
    (swept, extended)
}

pub fn catalog() -> Vec<String> {
    parse_manifest(MANIFEST).0
}

pub fn extended_catalog() -> Vec<String> {
    parse_manifest(MANIFEST).1
}

/// The sign vector as a string of `+` and `-`.
pub fn grading_label(gg: &GradedGroup) -> String {
    gg.signs().iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

/// One (group, grading, class) tuple.
#[derive(Clone, Debug)]
pub struct SweepCase {
    pub group: String,
    pub grading_index: usize,
    pub grading: String,
    pub class: usize,
    pub lambda_hat: TwistedCochain,
}

/// The gradings of `group` (all, or the one selected), each with its H²
/// class representatives (all, or the one selected).
pub fn cases_for_group(name: &str, grading: Option<usize>, class: Option<usize>) -> Result<Vec<SweepCase>> {
    let g = group_by_name(name)?;
    let gradings = enumerate_gradings(&g);
    let chosen: Vec<(usize, GradedGroup)> = match grading {
        None => gradings.into_iter().enumerate().collect(),
        Some(i) => {
            let count = gradings.len();
            let gg = gradings
                .into_iter()
                .nth(i)
                .ok_or_else(|| Error::arg(format!("{name} has {count} gradings, index {i} is out of range")))?;
            vec![(i, gg)]
        }
    };
    let per_grading: Vec<Vec<SweepCase>> = chosen
        .into_par_iter()
        .map(|(gi, gg)| {
            let gg = Arc::new(gg);
            let label = grading_label(&gg);
            let reps = cohomology_classes(&gg, 2)?.representatives;
            let picked: Vec<(usize, TwistedCochain)> = match class {
                None => reps.into_iter().enumerate().collect(),
                Some(c) => {
                    let count = reps.len();
                    let lh = reps.into_iter().nth(c).ok_or_else(|| {
                        Error::arg(format!("H² has {count} classes, index {c} is out of range"))
                    })?;
                    vec![(c, lh)]
                }
            };
            Ok(picked
                .into_iter()
                .map(|(ci, lh)| SweepCase {
                    group: name.to_string(),
                    grading_index: gi,
                    grading: label.clone(),
                    class: ci,
                    lambda_hat: lh,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_grading.into_iter().flatten().collect())
}

pub fn sweep_cases(names: &[String]) -> Result<Vec<SweepCase>> {
    let nested: Vec<Vec<SweepCase>> = names
        .par_iter()
        .map(|n| cases_for_group(n, None, None))
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// Runs the consistency report on every case in parallel; results keep the
/// order of `cases`.
pub fn run_sweep(
    cases: &[SweepCase],
    surfaces: &[Surface],
    opts: &ReportOptions,
) -> Vec<Result<ConsistencyReport>> {
    cases
        .par_iter()
        .map(|c| consistency_report(&c.lambda_hat, surfaces, (&c.group, &c.grading, c.class), opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_sections() {
        let (swept, extended) = parse_manifest(MANIFEST);
        assert_eq!(swept.len(), 21);
        assert_eq!(extended, vec!["S4".to_string()]);
        for name in &swept {
            assert!(group_by_name(name).unwrap().order() <= 16, "{name}");
        }
    }

    #[test]
    fn selections() {
        assert!(cases_for_group("C3", None, None).unwrap().is_empty());
        let c4 = cases_for_group("C4", None, None).unwrap();
        assert_eq!(c4[0].grading, "+-+-");
        assert!(cases_for_group("C4", Some(1), None).is_err());
        assert!(cases_for_group("C2", Some(0), Some(5)).is_err());
        assert_eq!(cases_for_group("C2xC2", None, None).unwrap().len(), 3 * 4);
    }
}
