//! Holonomy models for moduli of orientation-twisted Ĝ-bundles on the circle,
//! the crosscap and closed surfaces.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groupoids::{real_commuting_pairs, ActionGroupoid};
use crate::groups::GradedGroup;

/// Default cap on `|Ĝ|^{#generators}` for holonomy enumeration.
pub const DEFAULT_BUDGET: u128 = 1 << 22;

/// Reads the enumeration budget from `DW_BUDGET`, falling back to the default.
pub fn budget_from_env() -> u128 {
    std::env::var("DW_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    Orientable(u32),
    Nonorientable(u32),
}

/// A letter of a relator word: generator index and exponent ±1.
pub type Letter = (usize, i8);

impl Surface {
    pub fn sphere() -> Self {
        Surface::Orientable(0)
    }

    pub fn torus() -> Self {
        Surface::Orientable(1)
    }

    pub fn projective_plane() -> Self {
        Surface::Nonorientable(1)
    }

    pub fn klein_bottle() -> Self {
        Surface::Nonorientable(2)
    }

    pub fn is_orientable(&self) -> bool {
        matches!(self, Surface::Orientable(_))
    }

    pub fn euler_characteristic(&self) -> i64 {
        match *self {
            Surface::Orientable(g) => 2 - 2 * g as i64,
            Surface::Nonorientable(k) => 2 - k as i64,
        }
    }

    pub fn generator_count(&self) -> usize {
        match *self {
            Surface::Orientable(g) => 2 * g as usize,
            Surface::Nonorientable(k) => k as usize,
        }
    }

    /// Orientation character of each generator.
    pub fn orientation_characters(&self) -> Vec<i8> {
        match *self {
            Surface::Orientable(g) => vec![1; 2 * g as usize],
            // ⟨a, b | a b a b⁻¹⟩ with a orientation preserving
            Surface::Nonorientable(2) => vec![1, -1],
            Surface::Nonorientable(k) => vec![-1; k as usize],
        }
    }

    /// The single relator of the presentation, read left to right.
    pub fn relator(&self) -> Vec<Letter> {
        match *self {
            Surface::Orientable(g) => (0..g as usize)
                .flat_map(|i| [(2 * i, 1), (2 * i + 1, 1), (2 * i, -1), (2 * i + 1, -1)])
                .collect(),
            Surface::Nonorientable(2) => vec![(0, 1), (1, 1), (0, 1), (1, -1)],
            Surface::Nonorientable(k) => (0..k as usize).flat_map(|i| [(i, 1), (i, 1)]).collect(),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Surface::Orientable(0) => "S2".into(),
            Surface::Orientable(1) => "T2".into(),
            Surface::Orientable(g) => format!("Sigma_g={g}"),
            Surface::Nonorientable(1) => "RP2".into(),
            Surface::Nonorientable(2) => "K".into(),
            Surface::Nonorientable(k) => format!("N_k={k}"),
        }
    }

    /// Parses a comma-separated surface list; the empty string gives no surfaces.
    pub fn parse_list(s: &str) -> Result<Vec<Surface>> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }

    /// Evaluates the relator on a holonomy tuple.
    pub fn evaluate_relator(&self, gg: &GradedGroup, holonomy: &[usize]) -> usize {
        let g = gg.group();
        self.relator().iter().fold(0, |acc, &(i, e)| {
            let x = if e > 0 { holonomy[i] } else { g.inv(holonomy[i]) };
            g.mul(acc, x)
        })
    }

    pub fn validate_holonomy(&self, gg: &GradedGroup, holonomy: &[usize]) -> Result<()> {
        if holonomy.len() != self.generator_count() {
            return Err(Error::arg(format!(
                "{} needs {} holonomies, got {}",
                self.name(),
                self.generator_count(),
                holonomy.len()
            )));
        }
        if let Some(&x) = holonomy.iter().find(|&&x| x >= gg.order()) {
            return Err(Error::arg(format!("holonomy {x} is not an element")));
        }
        for (i, (&x, &o)) in holonomy.iter().zip(&self.orientation_characters()).enumerate() {
            if gg.sign(x) != o {
                return Err(Error::arg(format!(
                    "holonomy of generator {i} has sign {} but orientation character {o}",
                    gg.sign(x)
                )));
            }
        }
        if self.evaluate_relator(gg, holonomy) != 0 {
            return Err(Error::arg(format!("holonomy {holonomy:?} violates the relator of {}", self.name())));
        }
        Ok(())
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Surface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Surface> {
        let number = |rest: &str| -> Result<u32> {
            rest.trim_start_matches('=')
                .parse()
                .map_err(|_| Error::parse(s, "expected a number"))
        };
        let s_trim = s.trim();
        match s_trim {
            "S2" => return Ok(Surface::Orientable(0)),
            "T2" => return Ok(Surface::Orientable(1)),
            "RP2" => return Ok(Surface::Nonorientable(1)),
            "K" => return Ok(Surface::Nonorientable(2)),
            _ => {}
        }
        if let Some(rest) = s_trim.strip_prefix("Sigma_g").or_else(|| s_trim.strip_prefix("Sigma")) {
            return Ok(Surface::Orientable(number(rest)?));
        }
        if let Some(rest) = s_trim.strip_prefix("N_k").or_else(|| s_trim.strip_prefix('N')) {
            let k = number(rest)?;
            if k == 0 {
                return Err(Error::parse(s, "a nonorientable surface needs at least one crosscap"));
            }
            return Ok(Surface::Nonorientable(k));
        }
        Err(Error::parse(s, "unknown surface (try S2, T2, RP2, K, Sigma_g=2, N_k=3)"))
    }
}

fn check_budget(what: String, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::Resource {
            what,
            needed,
            limit: budget,
        });
    }
    Ok(())
}

/// All holonomy tuples of `surface` in `gg`, in lexicographic order.
pub fn holonomies(surface: Surface, gg: &GradedGroup, budget: u128) -> Result<Vec<Vec<usize>>> {
    let n = surface.generator_count();
    let needed = (gg.order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    check_budget(format!("holonomy enumeration for {surface}"), needed, budget)?;
    if n == 0 {
        return Ok(vec![vec![]]);
    }
    let chars = surface.orientation_characters();
    let choices: Vec<&[usize]> = chars
        .iter()
        .map(|&o| if o > 0 { gg.even_part() } else { gg.odd_part() })
        .collect();
    Ok(choices[0]
        .par_iter()
        .flat_map_iter(|&first| {
            let mut found = Vec::new();
            let mut tuple = vec![first];
            extend(surface, gg, &choices, &mut tuple, &mut found);
            found
        })
        .collect())
}

fn extend(surface: Surface, gg: &GradedGroup, choices: &[&[usize]], tuple: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    if tuple.len() == choices.len() {
        if surface.evaluate_relator(gg, tuple) == 0 {
            found.push(tuple.clone());
        }
        return;
    }
    for &x in choices[tuple.len()] {
        tuple.push(x);
        extend(surface, gg, choices, tuple, found);
        tuple.pop();
    }
}

fn even_acting(gg: &GradedGroup) -> Arc<crate::groups::FiniteGroup> {
    Arc::new(gg.even_group().clone())
}

/// `Hom^{or}(π₁Σ, Ĝ) ⫽ G` by simultaneous conjugation; labels are Ĝ indices.
pub fn bundle_groupoid(surface: Surface, gg: &GradedGroup, budget: u128) -> Result<ActionGroupoid> {
    let points = holonomies(surface, gg, budget)?;
    let g = gg.group();
    ActionGroupoid::new(format!("Bun({surface})"), points, even_acting(gg), |k, p| {
        let k = gg.from_even(k);
        p.iter().map(|&x| g.conj(k, x)).collect()
    })
}

/// `G ⫽ G` by conjugation, labels are Ĝ indices.
pub fn circle_groupoid(gg: &GradedGroup) -> ActionGroupoid {
    let points = gg.even_part().iter().map(|&g| vec![g]).collect();
    let g = gg.group();
    ActionGroupoid::new("Bun(S1)", points, even_acting(gg), |k, p| vec![g.conj(gg.from_even(k), p[0])])
        .expect("conjugation is an action")
}

/// `(Ĝ∖G) ⫽ G` together with the boundary map `t(ς) = ς²` per carrier point.
pub fn crosscap_groupoid(gg: &GradedGroup) -> (ActionGroupoid, Vec<usize>) {
    let points: Vec<Vec<usize>> = gg.odd_part().iter().map(|&s| vec![s]).collect();
    let g = gg.group();
    let t = points.iter().map(|p| g.mul(p[0], p[0])).collect();
    let gpd = ActionGroupoid::new("Bun(M)", points, even_acting(gg), |k, p| vec![g.conj(gg.from_even(k), p[0])])
        .expect("conjugation is an action");
    (gpd, t)
}

/// Torus and Klein bottle moduli together as `Ĝ^{(2)} ⫽ G`; even `ω` is the
/// torus component, odd `ω` the Klein bottle component.
pub fn one_loop_groupoid(gg: &GradedGroup) -> ActionGroupoid {
    let g = gg.group();
    ActionGroupoid::new("Bun(T2 + K)", real_commuting_pairs(gg), even_acting(gg), |k, p| {
        let k = gg.from_even(k);
        vec![g.conj(k, p[0]), g.conj(k, p[1])]
    })
    .expect("conjugation is an action")
}
