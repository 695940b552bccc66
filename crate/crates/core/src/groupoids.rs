//! Finite action groupoids `X ⫽ H` and integration against groupoid cardinality.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use rayon::prelude::*;

use crate::cohomology::Phase;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GradedGroup};

/// `X ⫽ H`: points of `X` are labelled by index tuples, `action[h][x]` is the
/// index of `h·x`.
#[derive(Clone, Debug)]
pub struct ActionGroupoid {
    label: String,
    points: Vec<Vec<usize>>,
    acting: Arc<FiniteGroup>,
    action: Vec<usize>,
}

/// One isomorphism class of objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Smallest point index in the orbit.
    pub representative: usize,
    pub orbit_size: usize,
    /// `|Stab(representative)|`
    pub automorphisms: usize,
}

impl ActionGroupoid {
    /// Builds the groupoid from a point list and an action on labels; the
    /// action must map points to points and satisfy the action law.
    pub fn new<F>(label: impl Into<String>, points: Vec<Vec<usize>>, acting: Arc<FiniteGroup>, act: F) -> Result<Self>
    where
        F: Fn(usize, &[usize]) -> Vec<usize> + Sync,
    {
        let label = label.into();
        let index: HashMap<&[usize], usize> =
            points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        if index.len() != points.len() {
            return Err(Error::arg(format!("{label}: duplicate carrier points")));
        }
        let rows: Vec<Vec<usize>> = (0..acting.order())
            .into_par_iter()
            .map(|h| {
                points
                    .iter()
                    .map(|p| {
                        let q = act(h, p);
                        index.get(q.as_slice()).copied().ok_or_else(|| {
                            Error::arg(format!("{label}: action of {h} leaves the carrier at {p:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let action: Vec<usize> = rows.into_iter().flatten().collect();
        let gpd = ActionGroupoid {
            label,
            points,
            acting,
            action,
        };
        gpd.check_action_law()?;
        Ok(gpd)
    }

    fn check_action_law(&self) -> Result<()> {
        let h = &self.acting;
        for x in 0..self.len() {
            if self.act(0, x) != x {
                return Err(Error::arg(format!("{}: identity moves point {x}", self.label)));
            }
        }
        for a in h.elements() {
            for b in h.elements() {
                let ab = h.mul(a, b);
                for x in 0..self.len() {
                    if self.act(a, self.act(b, x)) != self.act(ab, x) {
                        return Err(Error::arg(format!(
                            "{}: action law fails for ({a}, {b}) at point {x}",
                            self.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `pt ⫽ H`
    pub fn point(acting: Arc<FiniteGroup>) -> Self {
        let order = acting.order();
        ActionGroupoid {
            label: format!("pt//{}", acting.name()),
            points: vec![vec![]],
            acting,
            action: vec![0; order],
        }
    }

    /// `H ⫽ H` by left translation.
    pub fn translation(acting: Arc<FiniteGroup>) -> Self {
        let n = acting.order();
        let action = (0..n).flat_map(|h| (0..n).map(move |x| (h, x))).map(|(h, x)| acting.mul(h, x)).collect();
        ActionGroupoid {
            label: format!("{0}//{0}", acting.name()),
            points: (0..n).map(|x| vec![x]).collect(),
            acting,
            action,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    pub fn point_label(&self, x: usize) -> &[usize] {
        &self.points[x]
    }

    pub fn index_of(&self, label: &[usize]) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn acting_group(&self) -> &Arc<FiniteGroup> {
        &self.acting
    }

    #[inline]
    pub fn act(&self, h: usize, x: usize) -> usize {
        self.action[h * self.points.len() + x]
    }

    pub fn components(&self) -> Vec<Component> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut orbit_size = 0;
            let mut automorphisms = 0;
            for h in self.acting.elements() {
                let y = self.act(h, x);
                if y == x {
                    automorphisms += 1;
                }
                if !seen[y] {
                    seen[y] = true;
                    orbit_size += 1;
                }
            }
            out.push(Component {
                representative: x,
                orbit_size,
                automorphisms,
            });
        }
        out
    }

    /// `Σ_{[x]} 1/|Aut x|`
    pub fn cardinality(&self) -> Rational64 {
        self.components()
            .iter()
            .map(|c| Rational64::new(1, c.automorphisms as i64))
            .sum()
    }

    /// Finds a pair `(x, h·x)` on which `differs` is true.
    fn invariance_witness(&self, differs: impl Fn(usize, usize) -> bool + Sync) -> Option<(usize, usize)> {
        (0..self.len()).into_par_iter().find_map_first(|x| {
            self.acting
                .elements()
                .map(|h| self.act(h, x))
                .find(|&y| differs(x, y))
                .map(|y| (x, y))
        })
    }

    /// Groupoid integral of an invariant complex function.
    pub fn integrate(&self, f: impl Fn(usize) -> Complex64 + Sync, tol: f64) -> Result<Complex64> {
        let values: Vec<Complex64> = (0..self.len()).map(&f).collect();
        if let Some((x, y)) = self.invariance_witness(|x, y| (values[x] - values[y]).norm() > tol) {
            return Err(Error::arg(format!(
                "{}: integrand not invariant: f({x}) = {} but f({y}) = {}",
                self.label, values[x], values[y]
            )));
        }
        Ok(self
            .components()
            .iter()
            .map(|c| values[c.representative] / c.automorphisms as f64)
            .sum())
    }

    /// Exact groupoid integral of `x ↦ exp(2πi·f(x))` for invariant `f`.
    pub fn integrate_phases(&self, f: impl Fn(usize) -> Phase + Sync) -> Result<Cyclotomic> {
        let values: Vec<Phase> = (0..self.len()).into_par_iter().map(&f).collect();
        if let Some((x, y)) = self.invariance_witness(|x, y| values[x] != values[y]) {
            return Err(Error::arg(format!(
                "{}: phase integrand not invariant: f({x}) = {} but f({y}) = {}",
                self.label, values[x], values[y]
            )));
        }
        let mut weights: BTreeMap<Phase, BigRational> = BTreeMap::new();
        for c in self.components() {
            *weights.entry(values[c.representative]).or_default() +=
                BigRational::new(1.into(), (c.automorphisms as i64).into());
        }
        Ok(Cyclotomic::from_phase_sum(weights))
    }
}

/// `ΛX ⫽ H`: pairs `(x, h)` with `h·x = x`, acted on by `k·(x,h) = (k·x, khk⁻¹)`.
/// The label of `(x, h)` is the label of `x` followed by `h`.
pub fn loop_groupoid(gpd: &ActionGroupoid) -> ActionGroupoid {
    let h = gpd.acting.clone();
    let mut points = Vec::new();
    let mut base = Vec::new();
    for x in 0..gpd.len() {
        for g in h.elements() {
            if gpd.act(g, x) == x {
                let mut p = gpd.points[x].clone();
                p.push(g);
                points.push(p);
                base.push((x, g));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = base.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let n = points.len();
    let mut action = vec![0; h.order() * n];
    for k in h.elements() {
        for (i, &(x, g)) in base.iter().enumerate() {
            action[k * n + i] = index[&(gpd.act(k, x), h.conj(k, g))];
        }
    }
    ActionGroupoid {
        label: format!("L({})", gpd.label),
        points,
        acting: h,
        action,
    }
}

/// `G ⫽ G` by conjugation.
pub fn conjugation_groupoid(group: Arc<FiniteGroup>) -> ActionGroupoid {
    loop_groupoid(&ActionGroupoid::point(group))
}

/// `Ĝ^{(2)} ⫽ Ĝ`: pairs `(g, ω)`, `g` even, with `ω g^{π(ω)} ω⁻¹ = g`, acted on
/// by `h·(g, ω) = (h g^{π(h)} h⁻¹, hωh⁻¹)`. Labels use Ĝ indices.
pub fn double_real_loop(gg: &GradedGroup) -> ActionGroupoid {
    let ghat = Arc::new(gg.group().clone());
    let points = real_commuting_pairs(gg);
    ActionGroupoid::new(
        format!("LLref({})", ghat.name()),
        points,
        ghat.clone(),
        |h, p| vec![gg.act(h, p[0]), ghat.conj(h, p[1])],
    )
    .expect("real conjugation is an action")
}

/// Carrier shared by the double real loop and the one-loop groupoid.
pub(crate) fn real_commuting_pairs(gg: &GradedGroup) -> Vec<Vec<usize>> {
    let mut points = Vec::new();
    for &g in gg.even_part() {
        for w in gg.group().elements() {
            if gg.act(w, g) == g {
                points.push(vec![g, w]);
            }
        }
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{enumerate_gradings, group_by_name};

    fn group(name: &str) -> Arc<FiniteGroup> {
        Arc::new(group_by_name(name).unwrap())
    }

    #[test]
    fn point_groupoid() {
        let g = group("S3");
        let pt = ActionGroupoid::point(g);
        let comps = pt.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].automorphisms, 6);
        assert_eq!(pt.cardinality(), Rational64::new(1, 6));
    }

    #[test]
    fn s3_conjugation_components() {
        let gpd = conjugation_groupoid(group("S3"));
        let mut autos: Vec<usize> = gpd.components().iter().map(|c| c.automorphisms).collect();
        autos.sort();
        assert_eq!(autos, vec![2, 3, 6]);
        let total = gpd.integrate(|_| Complex64::new(1.0, 0.0), 1e-12).unwrap();
        assert!((total.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_action_has_trivial_automorphisms() {
        let gpd = ActionGroupoid::translation(group("D8"));
        let comps = gpd.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].automorphisms, 1);
        let loops = loop_groupoid(&gpd);
        assert!(loops.points().iter().all(|p| p[1] == 0));
    }

    #[test]
    fn non_invariant_integrand_is_rejected() {
        let gpd = conjugation_groupoid(group("S3"));
        let err = gpd.integrate(|x| Complex64::new(x as f64, 0.0), 1e-9).unwrap_err();
        assert!(matches!(err, Error::Argument(_)));
    }

    #[test]
    fn double_real_loop_small_cases() {
        let c2 = &enumerate_gradings(&group_by_name("C2").unwrap())[0];
        assert_eq!(double_real_loop(c2).len(), 2);
        let split = crate::groups::GradedGroup::split(&group_by_name("C2").unwrap()).unwrap();
        assert_eq!(double_real_loop(&split).len(), 8);
    }
}
