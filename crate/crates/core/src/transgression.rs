//! Transgression of twisted 2-cocycles to loop groupoids, and pairings of
//! pulled-back cocycles with fundamental classes of closed surfaces.

use std::sync::Arc;

use crate::cohomology::{is_twisted_cocycle, Cochain, Phase, TwistedCochain};
use crate::error::{Error, Result};
use crate::groups::GradedGroup;
use crate::moduli::Surface;

/// A 1-cochain on the unoriented loop groupoid: the morphism `ω` out of the
/// object `g ∈ G` goes to `ω g^{π(ω)} ω⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopCocycle {
    gg: Arc<GradedGroup>,
    /// `values[ω·|Ĝ| + g]`, zero for odd `g`.
    values: Vec<Phase>,
}

impl LoopCocycle {
    pub fn graded_group(&self) -> &Arc<GradedGroup> {
        &self.gg
    }

    #[inline]
    pub fn value(&self, omega: usize, g: usize) -> Phase {
        self.values[omega * self.gg.order() + g]
    }

    /// First violation of `τ(ω₂ω₁, g) = τ(ω₂, ω₁·g) + τ(ω₁, g)`, as `(ω₂, ω₁, g)`.
    pub fn cocycle_violation(&self) -> Option<(usize, usize, usize)> {
        let gg = &self.gg;
        let ghat = gg.group();
        for &g in gg.even_part() {
            if !self.value(0, g).is_zero() {
                return Some((0, 0, g));
            }
            for w1 in ghat.elements() {
                let moved = gg.act(w1, g);
                let t1 = self.value(w1, g);
                for w2 in ghat.elements() {
                    if self.value(ghat.mul(w2, w1), g) != self.value(w2, moved) + t1 {
                        return Some((w2, w1, g));
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle_violation().is_none()
    }
}

/// The reflective loop transgression
/// `τ(ω, g) = ((π(ω)−1)/2)·λ̂(g⁻¹, g) + λ̂(ω g^{π(ω)} ω⁻¹, ω) − λ̂(ω, g^{π(ω)})`.
pub fn tau_ref(lambda_hat: &TwistedCochain) -> Result<LoopCocycle> {
    if lambda_hat.degree() != 2 {
        return Err(Error::arg("tau_ref expects a 2-cochain"));
    }
    if !is_twisted_cocycle(lambda_hat) {
        return Err(Error::arg("tau_ref expects a twisted 2-cocycle"));
    }
    let tau = tau_ref_formula(lambda_hat, false);
    if let Some(w) = tau.cocycle_violation() {
        return Err(Error::Internal(format!("transgression violates the cocycle law at {w:?}")));
    }
    Ok(tau)
}

/// The formula without input checks. With `flip_last` the sign of the last
/// term is reversed; this exists only to exercise failure paths.
pub fn tau_ref_formula(lambda_hat: &TwistedCochain, flip_last: bool) -> LoopCocycle {
    let gg = lambda_hat.graded_group().clone();
    let ghat = gg.group();
    let n = gg.order();
    let mut values = vec![Phase::ZERO; n * n];
    for w in ghat.elements() {
        for &g in gg.even_part() {
            let odd = !gg.is_even(w);
            let gs = if odd { ghat.inv(g) } else { g };
            let mut v = lambda_hat.at(ghat.conj(w, gs), w);
            if odd {
                v -= lambda_hat.at(ghat.inv(g), g);
            }
            let last = lambda_hat.at(w, gs);
            v = if flip_last { v + last } else { v - last };
            values[w * n + g] = v;
        }
    }
    LoopCocycle { gg, values }
}

/// Oriented loop transgression on G: `τ(h, g) = λ(hgh⁻¹, h) − λ(h, g)`.
pub fn tau_oriented(lambda: &Cochain, h: usize, g: usize) -> Phase {
    let grp = lambda.group();
    lambda.at(grp.conj(h, g), h) - lambda.at(h, g)
}

/// A 2-chain in the twisted bar complex: terms `coefficient · [a | b]`.
pub type BarChain = Vec<(i64, usize, usize)>;

/// Lift of the fundamental class of `surface` along a holonomy tuple.
///
/// With letters `x_1 … x_m` of the relator evaluated on the holonomy and
/// prefixes `y_j = x_1⋯x_j`, the chain is `Σ_{j<m} [y_j | x_{j+1}]` plus a term
/// `−π(y_{j−1})π(g)·[g | g⁻¹]` for every inverse letter `x_j = g⁻¹`. For
/// orientable surfaces the sign is reversed so that the torus gives
/// `λ(g₂,g₁) − λ(g₁,g₂)`.
pub fn fundamental_chain(surface: Surface, gg: &GradedGroup, holonomy: &[usize]) -> BarChain {
    let g = gg.group();
    let mut chain = BarChain::new();
    let mut prefix = 0usize;
    for (j, &(i, e)) in surface.relator().iter().enumerate() {
        let h = holonomy[i];
        let x = if e > 0 { h } else { g.inv(h) };
        if e < 0 {
            let w = gg.sign(prefix) as i64;
            chain.push((-w * gg.sign(h) as i64, h, x));
        }
        if j > 0 {
            chain.push((1, prefix, x));
        }
        prefix = g.mul(prefix, x);
    }
    if surface.is_orientable() {
        for term in chain.iter_mut() {
            term.0 = -term.0;
        }
    }
    chain
}

pub fn pair_chain(lambda_hat: &TwistedCochain, chain: &BarChain) -> Phase {
    chain.iter().map(|&(k, a, b)| lambda_hat.at(a, b).scale(k)).sum()
}

/// `⟨f*λ̂, [Σ]⟩` for a holonomy point of `surface`.
pub fn pair_surface(lambda_hat: &TwistedCochain, surface: Surface, holonomy: &[usize]) -> Result<Phase> {
    if lambda_hat.degree() != 2 {
        return Err(Error::arg("pair_surface expects a 2-cochain"));
    }
    let gg = lambda_hat.graded_group();
    surface.validate_holonomy(gg, holonomy)?;
    Ok(pair_chain(lambda_hat, &fundamental_chain(surface, gg, holonomy)))
}

/// Closed form on the torus with commuting holonomies `(g₁, g₂)`.
pub fn pair_torus_closed(lambda_hat: &TwistedCochain, g1: usize, g2: usize) -> Phase {
    lambda_hat.at(g2, g1) - lambda_hat.at(g1, g2)
}

/// Closed form on ℝP² with holonomy `ς`.
pub fn pair_projective_plane_closed(lambda_hat: &TwistedCochain, s: usize) -> Phase {
    lambda_hat.at(s, s)
}

/// Closed form on the Klein bottle `⟨a, b | abab⁻¹⟩` with holonomy `(g, ς)`.
pub fn pair_klein_closed(lambda_hat: &TwistedCochain, g: usize, s: usize) -> Phase {
    let ginv = lambda_hat.graded_group().group().inv(g);
    lambda_hat.at(g, s) - lambda_hat.at(g, ginv) - lambda_hat.at(s, ginv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology_classes, twisted_differential};
    use crate::groups::{enumerate_gradings, group_by_name, GradedGroup};
    use crate::moduli::{holonomies, DEFAULT_BUDGET};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_classes(name: &str) -> Vec<TwistedCochain> {
        let g = group_by_name(name).unwrap();
        enumerate_gradings(&g)
            .into_iter()
            .flat_map(|gg| cohomology_classes(&Arc::new(gg), 2).unwrap().representatives)
            .collect()
    }

    #[test]
    fn zero_cocycle_transgresses_to_zero() {
        let gg = Arc::new(GradedGroup::split(&group_by_name("S3").unwrap()).unwrap());
        let tau = tau_ref(&TwistedCochain::zero(gg, 2)).unwrap();
        assert!(tau.values.iter().all(Phase::is_zero));
    }

    #[test]
    fn cocycle_law_on_all_classes() {
        for name in ["C4", "C2xC2", "D8", "Q8", "C2xC4"] {
            for lh in all_classes(name) {
                let tau = tau_ref(&lh).unwrap();
                assert!(tau.is_cocycle());
            }
        }
    }

    #[test]
    fn flipped_formula_breaks_the_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gg = Arc::new(enumerate_gradings(&group_by_name("D8").unwrap()).swap_remove(0));
        let nu = TwistedCochain::random_normalized(gg, 1, 8, &mut rng);
        let lh = twisted_differential(&nu);
        assert!(tau_ref_formula(&lh, false).is_cocycle());
        assert!(tau_ref_formula(&lh, true).cocycle_violation().is_some());
    }

    #[test]
    fn chain_reproduces_closed_forms() {
        for name in ["C4", "D8", "Q8", "C2xC2xC2"] {
            for lh in all_classes(name) {
                let gg = lh.graded_group().clone();
                for h in holonomies(Surface::torus(), &gg, DEFAULT_BUDGET).unwrap() {
                    assert_eq!(pair_surface(&lh, Surface::torus(), &h).unwrap(), pair_torus_closed(&lh, h[0], h[1]));
                }
                for h in holonomies(Surface::klein_bottle(), &gg, DEFAULT_BUDGET).unwrap() {
                    assert_eq!(
                        pair_surface(&lh, Surface::klein_bottle(), &h).unwrap(),
                        pair_klein_closed(&lh, h[0], h[1])
                    );
                }
                for h in holonomies(Surface::projective_plane(), &gg, DEFAULT_BUDGET).unwrap() {
                    assert_eq!(
                        pair_surface(&lh, Surface::projective_plane(), &h).unwrap(),
                        pair_projective_plane_closed(&lh, h[0])
                    );
                }
            }
        }
    }

    #[test]
    fn pairing_ignores_coboundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for lh in all_classes("D8") {
            let gg = lh.graded_group().clone();
            let nu = TwistedCochain::random_normalized(gg.clone(), 1, 8, &mut rng);
            let shifted = lh.add(&twisted_differential(&nu)).unwrap();
            for s in [Surface::Orientable(2), Surface::Nonorientable(3), Surface::klein_bottle()] {
                for h in holonomies(s, &gg, DEFAULT_BUDGET).unwrap() {
                    assert_eq!(pair_surface(&lh, s, &h).unwrap(), pair_surface(&shifted, s, &h).unwrap());
                }
            }
        }
    }

    #[test]
    fn even_restriction_matches_oriented_formula() {
        for lh in all_classes("C2xC4") {
            let gg = lh.graded_group().clone();
            let lambda = crate::cohomology::restrict_to_even(&lh);
            let tau = tau_ref(&lh).unwrap();
            for &h in gg.even_part() {
                for &g in gg.even_part() {
                    let (hi, gi) = (gg.to_even(h).unwrap(), gg.to_even(g).unwrap());
                    assert_eq!(tau.value(h, g), tau_oriented(&lambda, hi, gi));
                }
            }
        }
    }
}
