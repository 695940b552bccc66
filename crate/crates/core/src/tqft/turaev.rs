use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use super::AxiomReport;
use crate::cohomology::{is_twisted_cocycle, restrict_to_even, Phase, TwistedCochain};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::GradedGroup;
use crate::transgression::{tau_ref, LoopCocycle};

/// `c·exp(2πi·θ)` with rational `c`, normalized so that `c ≥ 0` and `θ = 0`
/// when `c = 0`; equality is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScaledPhase {
    coeff: Rational64,
    phase: Phase,
}

impl ScaledPhase {
    pub fn new(coeff: Rational64, phase: Phase) -> Self {
        if coeff.is_zero() {
            ScaledPhase {
                coeff,
                phase: Phase::ZERO,
            }
        } else if coeff.is_negative() {
            ScaledPhase {
                coeff: -coeff,
                phase: phase + Phase::HALF,
            }
        } else {
            ScaledPhase { coeff, phase }
        }
    }

    pub fn unit(phase: Phase) -> Self {
        Self::new(Rational64::one(), phase)
    }

    pub fn one() -> Self {
        Self::unit(Phase::ZERO)
    }

    pub fn zero() -> Self {
        Self::new(Rational64::zero(), Phase::ZERO)
    }

    pub fn rational(q: Rational64) -> Self {
        Self::new(q, Phase::ZERO)
    }

    pub fn coeff(&self) -> Rational64 {
        self.coeff
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(self, other: Self) -> Self {
        Self::new(self.coeff * other.coeff, self.phase + other.phase)
    }

    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.coeff.recip(), -self.phase))
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let q = BigRational::new(BigInt::from(*self.coeff.numer()), BigInt::from(*self.coeff.denom()));
        Cyclotomic::root(self.phase).scale(&q)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.phase.to_complex() * (*self.coeff.numer() as f64 / *self.coeff.denom() as f64)
    }
}

impl fmt::Display for ScaledPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·e({})", self.coeff, self.phase)
    }
}

/// A homogeneous element `c·l_g` of a Turaev algebra with one dimensional
/// sectors; `g` indexes the even group.
pub type Monomial = (usize, ScaledPhase);

fn same(a: Monomial, b: Monomial) -> bool {
    (a.1.is_zero() && b.1.is_zero()) || a == b
}

/// Turaev algebra data with `A_g = ℂ·l_g` for every `g ∈ G`.
///
/// Sectors are indexed by the even group; `ω` ranges over Ĝ.
#[derive(Clone, Debug, PartialEq)]
pub struct TuraevAlgebraData {
    gg: Arc<GradedGroup>,
    /// `l_a l_b = mult[a·n + b]·l_{ab}`
    mult: Vec<ScaledPhase>,
    /// `⟨l_e⟩_e`
    trace: ScaledPhase,
    /// `â_ω(l_g) = action[ω·n + g]·l_{action_target[ω·n + g]}`
    action: Vec<ScaledPhase>,
    action_target: Vec<usize>,
    /// `Q_ς = crosscap[i]·l_{crosscap_target[i]}` for `ς = odd_part()[i]`
    crosscap: Vec<ScaledPhase>,
    crosscap_target: Vec<usize>,
}

/// `l_a l_b = e(λ(a,b)) l_{ab}`, `⟨l_e⟩ = 1`, `â_ω(l_g) = e(−τ(ω,g)) l_{ω·g}`
/// and `Q_ς = e(λ̂(ς,ς)) l_{ς²}`.
pub fn turaev_from_cocycle(lambda_hat: &TwistedCochain) -> Result<TuraevAlgebraData> {
    if lambda_hat.degree() != 2 || !is_twisted_cocycle(lambda_hat) || !lambda_hat.is_normalized() {
        return Err(Error::arg("turaev_from_cocycle expects a normalized twisted 2-cocycle"));
    }
    let tau = tau_ref(lambda_hat)?;
    let data = turaev_from_tau(lambda_hat, &tau);
    let report = check_turaev_axioms(&data);
    if let Some(c) = report.failures().first() {
        return Err(Error::Internal(format!(
            "Turaev condition {} fails: {}",
            c.name,
            c.witness.as_deref().unwrap_or("")
        )));
    }
    Ok(data)
}

/// The construction with a caller-supplied loop cocycle and no checks.
pub fn turaev_from_tau(lambda_hat: &TwistedCochain, tau: &LoopCocycle) -> TuraevAlgebraData {
    let gg = lambda_hat.graded_group().clone();
    let ghat = gg.group();
    let lambda = restrict_to_even(lambda_hat);
    let n = gg.even_group().order();
    let mult = (0..n * n)
        .map(|i| ScaledPhase::unit(lambda.at(i / n, i % n)))
        .collect();
    let mut action = Vec::with_capacity(ghat.order() * n);
    let mut action_target = Vec::with_capacity(ghat.order() * n);
    for w in ghat.elements() {
        for &g in gg.even_part() {
            action.push(ScaledPhase::unit(-tau.value(w, g)));
            action_target.push(gg.to_even(gg.act(w, g)).expect("real conjugation preserves G"));
        }
    }
    let crosscap = gg
        .odd_part()
        .iter()
        .map(|&s| ScaledPhase::unit(lambda_hat.at(s, s)))
        .collect();
    let crosscap_target = gg
        .odd_part()
        .iter()
        .map(|&s| gg.to_even(ghat.mul(s, s)).expect("odd squares are even"))
        .collect();
    TuraevAlgebraData {
        gg,
        mult,
        trace: ScaledPhase::one(),
        action,
        action_target,
        crosscap,
        crosscap_target,
    }
}

impl TuraevAlgebraData {
    pub fn graded_group(&self) -> &Arc<GradedGroup> {
        &self.gg
    }

    /// `|G|`
    pub fn rank(&self) -> usize {
        self.gg.even_group().order()
    }

    pub fn mul(&self, x: Monomial, y: Monomial) -> Monomial {
        let n = self.rank();
        let g = self.gg.even_group();
        (g.mul(x.0, y.0), x.1.mul(y.1).mul(self.mult[x.0 * n + y.0]))
    }

    /// `â_ω` for `ω ∈ Ĝ`.
    pub fn act(&self, omega: usize, x: Monomial) -> Monomial {
        let i = omega * self.rank() + x.0;
        (self.action_target[i], x.1.mul(self.action[i]))
    }

    pub fn trace_of(&self, x: Monomial) -> ScaledPhase {
        if x.0 == 0 {
            x.1.mul(self.trace)
        } else {
            ScaledPhase::zero()
        }
    }

    /// `Q_ς` for an odd `ς ∈ Ĝ`.
    pub fn crosscap(&self, sigma: usize) -> Monomial {
        let i = self.gg.odd_part().binary_search(&sigma).expect("odd element");
        (self.crosscap_target[i], self.crosscap[i])
    }

    pub fn basis(&self, g: usize) -> Monomial {
        (g, ScaledPhase::one())
    }

    /// The element of `A_{g⁻¹}` dual to `l_g` under `⟨xy⟩_e`.
    pub fn dual(&self, g: usize) -> Option<Monomial> {
        let gi = self.gg.even_group().inv(g);
        let pairing = self.trace_of(self.mul(self.basis(g), self.basis(gi)));
        pairing.inv().map(|c| (gi, c))
    }

    /// Number of structure constants that `mutate` can address.
    pub fn structure_constant_count(&self) -> usize {
        self.mult.len() + 1 + self.action.len() + self.crosscap.len()
    }

    /// Multiplies one structure constant by `factor`, or sets it to `factor`
    /// if it was zero.
    pub fn mutate(&mut self, index: usize, factor: ScaledPhase) {
        let apply = |c: &mut ScaledPhase| *c = if c.is_zero() { factor } else { c.mul(factor) };
        let (m, a) = (self.mult.len(), self.action.len());
        match index {
            i if i < m => apply(&mut self.mult[i]),
            i if i == m => apply(&mut self.trace),
            i if i <= m + a => apply(&mut self.action[i - m - 1]),
            i => apply(&mut self.crosscap[i - m - 1 - a]),
        }
    }

    /// Replaces `Q_ς` by zero.
    pub fn drop_crosscap(&mut self, sigma: usize) {
        let i = self.gg.odd_part().binary_search(&sigma).expect("odd element");
        self.crosscap[i] = ScaledPhase::zero();
    }
}

fn first<T>(mut it: impl Iterator<Item = T>, show: impl Fn(T) -> String) -> Option<String> {
    it.next().map(show)
}

/// Evaluates the algebra and action laws and conditions (i)–(x) on basis
/// elements.
pub fn check_turaev_axioms(t: &TuraevAlgebraData) -> AxiomReport {
    let gg = &t.gg;
    let ghat = gg.group();
    let g = gg.even_group();
    let n = t.rank();
    let b = |x: usize| t.basis(x);
    let elems = || 0..n;
    let pairs = || elems().flat_map(move |x| elems().map(move |y| (x, y)));
    let triples = || pairs().flat_map(move |(x, y)| elems().map(move |z| (x, y, z)));
    let even_hat = |w: usize| gg.is_even(w);
    let mut report = AxiomReport::default();

    let assoc = first(
        triples().filter(|&(x, y, z)| !same(t.mul(t.mul(b(x), b(y)), b(z)), t.mul(b(x), t.mul(b(y), b(z))))),
        |w| format!("(l_{} l_{}) l_{} ≠ l_{} (l_{} l_{})", w.0, w.1, w.2, w.0, w.1, w.2),
    )
    .or_else(|| {
        first(
            elems().filter(|&x| !same(t.mul(b(0), b(x)), b(x)) || !same(t.mul(b(x), b(0)), b(x))),
            |x| format!("l_e is not a unit for l_{x}"),
        )
    });
    report.record("algebra", assoc);

    let action = first(
        ghat.elements()
            .flat_map(|w2| ghat.elements().map(move |w1| (w2, w1)))
            .flat_map(|(w2, w1)| elems().map(move |x| (w2, w1, x)))
            .filter(|&(w2, w1, x)| !same(t.act(w2, t.act(w1, b(x))), t.act(ghat.mul(w2, w1), b(x)))),
        |w| format!("â_{} â_{} ≠ â_{} on l_{}", w.0, w.1, ghat.mul(w.0, w.1), w.2),
    )
    .or_else(|| {
        first(
            ghat.elements()
                .flat_map(|w| pairs().map(move |(x, y)| (w, x, y)))
                .filter(|&(w, x, y)| {
                    let lhs = t.act(w, t.mul(b(x), b(y)));
                    let rhs = if even_hat(w) {
                        t.mul(t.act(w, b(x)), t.act(w, b(y)))
                    } else {
                        t.mul(t.act(w, b(y)), t.act(w, b(x)))
                    };
                    !same(lhs, rhs)
                }),
            |w| format!("â_{} is not (anti-)multiplicative on (l_{}, l_{})", w.0, w.1, w.2),
        )
    });
    report.record("action", action);

    let sector = |w: usize, x: usize| gg.to_even(gg.act(w, gg.from_even(x))).expect("even");
    let lift = |k: usize| gg.from_even(k);
    report.record(
        "(i)",
        first(
            pairs().filter(|&(k, x)| t.act(lift(k), b(x)).0 != g.conj(k, x)),
            |w| format!("𝔞_{} maps A_{} to the wrong sector", w.0, w.1),
        ),
    );

    let invariant = first(
        elems().filter(|&k| t.trace_of(t.act(lift(k), b(0))) != t.trace_of(b(0))),
        |k| format!("trace not invariant under 𝔞_{k}"),
    );
    let nondeg = first(elems().filter(|&x| t.dual(x).is_none()), |x| {
        format!("pairing A_{x} ⊗ A_{} is degenerate", g.inv(x))
    });
    report.record("(ii)", invariant.or(nondeg));

    report.record(
        "(iii)",
        first(
            pairs().filter(|&(h, k)| !same(t.act(lift(k), t.mul(b(h), b(k))), t.mul(b(k), b(h)))),
            |w| format!("𝔞_{1}(l_{0} l_{1}) ≠ l_{1} l_{0}", w.0, w.1),
        ),
    );

    report.record(
        "(iv)",
        first(elems().filter(|&k| !same(t.act(lift(k), b(k)), b(k))), |k| {
            format!("𝔞_{k} is not the identity on A_{k}")
        }),
    );

    report.record(
        "(v)",
        first(
            pairs().filter(|&(x, h)| match (t.dual(x), t.dual(h)) {
                (Some(xd), Some(hd)) => {
                    let lhs = t.mul(t.act(lift(h), b(x)), xd);
                    let rhs = t.mul(b(h), t.act(lift(x), hd));
                    !same(lhs, rhs)
                }
                _ => true,
            }),
            |w| format!("twisted trace identity fails for g = {}, h = {}", w.0, w.1),
        ),
    );

    report.record(
        "(vi)",
        first(
            ghat.elements()
                .flat_map(|w| elems().map(move |x| (w, x)))
                .filter(|&(w, x)| t.act(w, b(x)).0 != sector(w, x)),
            |w| format!("â_{} maps A_{} to the wrong sector", w.0, w.1),
        ),
    );

    report.record(
        "(vii)",
        first(
            ghat.elements().filter(|&w| t.trace_of(t.act(w, b(0))) != t.trace_of(b(0))),
            |w| format!("trace not invariant under â_{w}"),
        ),
    );

    let odd = gg.odd_part();
    let sectors = first(
        odd.iter().filter(|&&s| t.crosscap(s).0 != gg.to_even(ghat.mul(s, s)).expect("even")),
        |s| format!("Q_{s} lies in the wrong sector"),
    );
    let viii = sectors.or_else(|| {
        first(
            ghat.elements()
                .flat_map(|w| odd.iter().map(move |&s| (w, s)))
                .filter(|&(w, s)| !same(t.act(w, t.crosscap(s)), t.crosscap(gg.act(w, s)))),
            |w| format!("â_{}(Q_{}) ≠ Q_{}", w.0, w.1, gg.act(w.0, w.1)),
        )
    });
    report.record("(viii)", viii);

    report.record(
        "(ix)",
        first(
            odd.iter().flat_map(|&s| elems().map(move |x| (s, x))).filter(|&(s, x)| {
                let lhs = t.mul(t.crosscap(s), b(x));
                let rhs = t.mul(t.act(s, b(x)), t.crosscap(ghat.mul(s, lift(x))));
                !same(lhs, rhs)
            }),
            |w| format!("Q_{0} l_{1} ≠ â_{0}(l_{1}) Q_{0}·{1}", w.0, w.1),
        ),
    );

    report.record(
        "(x)",
        first(
            odd.iter().flat_map(|&s1| odd.iter().map(move |&s2| (s1, s2))).filter(|&(s1, s2)| {
                let h = gg.to_even(ghat.inv(ghat.mul(s1, s2))).expect("even");
                match t.dual(h) {
                    Some(hd) => {
                        let lhs = t.mul(t.act(s1, b(h)), hd);
                        let rhs = t.mul(t.crosscap(s1), t.crosscap(s2));
                        !same(lhs, rhs)
                    }
                    None => true,
                }
            }),
            |w| format!("crosscap product identity fails for ({}, {})", w.0, w.1),
        ),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology_classes;
    use crate::groups::{enumerate_gradings, group_by_name};
    use crate::transgression::tau_ref_formula;

    fn classes(name: &str) -> Vec<TwistedCochain> {
        enumerate_gradings(&group_by_name(name).unwrap())
            .into_iter()
            .flat_map(|gg| cohomology_classes(&Arc::new(gg), 2).unwrap().representatives)
            .collect()
    }

    #[test]
    fn scaled_phase_normalizes_sign() {
        let a = ScaledPhase::new(Rational64::new(-2, 3), Phase::ZERO);
        assert_eq!(a, ScaledPhase::new(Rational64::new(2, 3), Phase::HALF));
        assert_eq!(a.mul(a.inv().unwrap()), ScaledPhase::one());
        assert!(ScaledPhase::zero().inv().is_none());
    }

    #[test]
    fn all_conditions_hold_on_small_groups() {
        for name in ["C2", "C4", "C2xC2", "D8", "Q8", "S3xC2"] {
            for lh in classes(name) {
                let t = turaev_from_cocycle(&lh).unwrap();
                let r = check_turaev_axioms(&t);
                assert!(r.all_passed(), "{name}: {:?}", r.failures());
                assert_eq!(r.checks.len(), 12);
            }
        }
    }

    #[test]
    fn nontrivial_class_on_c2_has_negative_crosscap() {
        let lh = classes("C2").pop().unwrap();
        let t = turaev_from_cocycle(&lh).unwrap();
        assert_eq!(t.crosscap(1), (0, ScaledPhase::unit(Phase::HALF)));
    }

    #[test]
    fn half_phase_perturbation_is_caught() {
        let lh = classes("D8").swap_remove(0);
        let t = turaev_from_cocycle(&lh).unwrap();
        for i in 0..t.structure_constant_count() {
            let mut m = t.clone();
            m.mutate(i, ScaledPhase::unit(Phase::HALF));
            assert!(!check_turaev_axioms(&m).all_passed(), "mutation {i} undetected");
        }
    }

    #[test]
    fn dropped_crosscap_breaks_viii_or_x() {
        let lh = classes("C2xC2").swap_remove(1);
        let mut t = turaev_from_cocycle(&lh).unwrap();
        let s = t.graded_group().odd_part()[0];
        t.drop_crosscap(s);
        let r = check_turaev_axioms(&t);
        assert!(!r.get("(viii)").unwrap().passed || !r.get("(x)").unwrap().passed);
    }

    #[test]
    fn shifted_cocycle_passes_and_flipped_transgression_fails() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let lh = classes("D8").swap_remove(0);
        let nu = TwistedCochain::random_normalized(lh.graded_group().clone(), 1, 8, &mut rng);
        let shifted = lh.add(&crate::cohomology::twisted_differential(&nu)).unwrap();
        let r = check_turaev_axioms(&turaev_from_tau(&shifted, &tau_ref_formula(&shifted, false)));
        assert!(r.all_passed(), "{:?}", r.failures());
        let flipped = tau_ref_formula(&shifted, true);
        assert!(!check_turaev_axioms(&turaev_from_tau(&shifted, &flipped)).all_passed());
    }
}
