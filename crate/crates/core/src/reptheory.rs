//! The twisted group algebra `ℂ^λ[G]` of the even part, its block
//! decomposition, twisted Frobenius–Schur indicators, and the phases of the
//! one- and two-dimensional Real structures.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cohomology::{is_twisted_cocycle, restrict_to_even, Cochain, Phase, TwistedCochain};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GradedGroup};
use crate::transgression::{tau_oriented, tau_ref};

/// Internal numerical tolerance.
pub const INTERNAL_TOL: f64 = 1e-9;
/// Tolerance for reported comparisons (indicator rounding, dimensions).
pub const REPORT_TOL: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// `Σ a_g l_g`, indexed by the elements of G.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub coeffs: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn basis(n: usize, g: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[g] = Complex64::new(1.0, 0.0);
        e
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Self {
        AlgebraElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Hermitian inner product `Σ conj(a_g) b_g`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `ℂ^λ[G]` with `l_g l_h = exp(2πi λ(g,h)) l_{gh}`.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    lambda: Cochain,
    /// λ-regular conjugacy class sums: `(element, phase)` with the class
    /// representative (smallest index) carrying phase 0.
    class_sums: Vec<Vec<(usize, Phase)>>,
}

impl TwistedAlgebra {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.lambda.group()
    }

    pub fn dim(&self) -> usize {
        self.group().order()
    }

    pub fn lambda(&self) -> &Cochain {
        &self.lambda
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement::basis(self.dim(), 0)
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let g = self.group();
        let mut out = AlgebraElement::zero(self.dim());
        for (a, &xa) in x.coeffs.iter().enumerate() {
            if xa == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (b, &yb) in y.coeffs.iter().enumerate() {
                if yb != Complex64::new(0.0, 0.0) {
                    out.coeffs[g.mul(a, b)] += xa * yb * self.lambda.at(a, b).to_complex();
                }
            }
        }
        out
    }

    /// Exact product of basis elements: `l_a l_b = e(phase)·l_target`.
    pub fn mul_basis(&self, a: usize, b: usize) -> (usize, Phase) {
        (self.group().mul(a, b), self.lambda.at(a, b))
    }

    /// The λ-regular class sums, a basis of the center.
    pub fn class_sums(&self) -> &[Vec<(usize, Phase)>] {
        &self.class_sums
    }

    pub fn center_dim(&self) -> usize {
        self.class_sums.len()
    }

    pub fn class_sum_element(&self, i: usize) -> AlgebraElement {
        let mut e = AlgebraElement::zero(self.dim());
        for &(g, p) in &self.class_sums[i] {
            e.coeffs[g] = p.to_complex();
        }
        e
    }

    pub fn is_central(&self, x: &AlgebraElement, tol: f64) -> bool {
        (0..self.dim()).all(|g| {
            let lg = AlgebraElement::basis(self.dim(), g);
            self.mul(&lg, x).sub(&self.mul(x, &lg)).norm_inf() < tol
        })
    }
}

/// Builds `ℂ^λ[G]` for a normalized 2-cocycle `λ` on the even part of `gg`.
pub fn twisted_algebra(gg: &GradedGroup, lambda: &Cochain) -> Result<TwistedAlgebra> {
    if lambda.degree() != 2 || !lambda.group().same_table(gg.even_group()) {
        return Err(Error::arg("lambda must be a 2-cochain on the even part"));
    }
    if !lambda.is_cocycle() || !lambda.is_normalized() {
        return Err(Error::arg("lambda must be a normalized 2-cocycle"));
    }
    let g = lambda.group();
    let mut seen = vec![false; g.order()];
    let mut class_sums = Vec::new();
    for rep in g.elements() {
        if seen[rep] {
            continue;
        }
        let centralizer: Vec<usize> = g.elements().filter(|&h| g.commute(h, rep)).collect();
        let regular = centralizer
            .iter()
            .all(|&h| lambda.at(rep, h) == lambda.at(h, rep));
        let mut sum: Vec<(usize, Phase)> = Vec::new();
        for k in g.elements() {
            let x = g.conj(k, rep);
            if !seen[x] {
                seen[x] = true;
                // l_k l_g l_k⁻¹ = e(−τ(k, g)) l_{kgk⁻¹}
                sum.push((x, -tau_oriented(lambda, k, rep)));
            }
        }
        if regular {
            sum.sort();
            class_sums.push(sum);
        }
    }
    Ok(TwistedAlgebra {
        lambda: lambda.clone(),
        class_sums,
    })
}

/// A primitive central idempotent with its dimension and indicator.
#[derive(Clone, Debug)]
pub struct BlockData {
    pub idempotent: AlgebraElement,
    pub dimension: usize,
    pub indicator: Option<i8>,
    /// The unrounded `c_V·dim V/|G|`, filled together with `indicator`.
    pub indicator_raw: Option<Complex64>,
    pub fingerprint: String,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub dim: usize,
    pub indicator: Option<i8>,
    pub idempotent_fingerprint: String,
}

impl BlockData {
    pub fn report(&self) -> BlockReport {
        BlockReport {
            dim: self.dimension,
            indicator: self.indicator,
            idempotent_fingerprint: self.fingerprint.clone(),
        }
    }
}

fn fingerprint(e: &AlgebraElement) -> String {
    let mut hasher = Sha256::new();
    for c in &e.coeffs {
        // rounding to 1e-6 and clearing negative zeros keeps this stable
        let r = |x: f64| {
            let v = (x * 1e6).round() as i64;
            v.to_le_bytes()
        };
        hasher.update(r(c.re));
        hasher.update(r(c.im));
    }
    hasher.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Primitive central idempotents from a simultaneous eigenbasis of the
/// multiplication operators on the center.
pub fn blocks(alg: &TwistedAlgebra, seed: u64) -> Result<Vec<BlockData>> {
    let n = alg.dim();
    let d = alg.center_dim();
    let basis: Vec<AlgebraElement> = (0..d)
        .map(|i| {
            let b = alg.class_sum_element(i);
            b.scale(Complex64::new(1.0 / (alg.class_sums[i].len() as f64).sqrt(), 0.0))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_residual = f64::INFINITY;
    for _attempt in 0..16 {
        let z = basis.iter().fold(AlgebraElement::zero(n), |acc, b| {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            acc.add(&b.scale(c))
        });
        // L_z in the orthonormal basis of the center
        let images: Vec<AlgebraElement> = basis.iter().map(|b| alg.mul(&z, b)).collect();
        let m = DMatrix::from_fn(d, d, |r, c| basis[r].dot(&images[c]));
        let h = &m + m.adjoint();
        let eig = h.symmetric_eigen();
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        let gap = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if gap < 1e-6 {
            continue;
        }
        let mut found = Vec::with_capacity(d);
        let mut residual: f64 = 0.0;
        for k in 0..d {
            let v = eig.eigenvectors.column(k);
            let e = basis
                .iter()
                .zip(v.iter())
                .fold(AlgebraElement::zero(n), |acc, (b, &c)| acc.add(&b.scale(c)));
            let e2 = alg.mul(&e, &e);
            let c = e.dot(&e2) / e.dot(&e);
            if c.norm() < INTERNAL_TOL {
                residual = f64::INFINITY;
                break;
            }
            let p = e.scale(c.inv());
            residual = residual.max(alg.mul(&p, &p).sub(&p).norm_inf());
            let pe = p.coeffs[0];
            let dim_sq = n as f64 * pe.re;
            let dim = dim_sq.max(0.0).sqrt().round() as usize;
            residual = residual.max((dim_sq - (dim * dim) as f64).abs() / n as f64).max(pe.im.abs());
            found.push(BlockData {
                fingerprint: fingerprint(&p),
                idempotent: p,
                dimension: dim,
                indicator: None,
                indicator_raw: None,
                residual: 0.0,
            });
        }
        last_residual = residual;
        if residual > INTERNAL_TOL.sqrt() * 1e-2 || found.len() != d {
            continue;
        }
        let total = found
            .iter()
            .fold(AlgebraElement::zero(n), |acc, b| acc.add(&b.idempotent));
        let unit_residual = total.sub(&alg.unit()).norm_inf();
        let dim_total: usize = found.iter().map(|b| b.dimension * b.dimension).sum();
        if unit_residual > REPORT_TOL || dim_total != n {
            last_residual = unit_residual.max(residual);
            continue;
        }
        for b in found.iter_mut() {
            b.residual = residual;
        }
        found.sort_by(|a, b| (a.dimension, &a.fingerprint).cmp(&(b.dimension, &b.fingerprint)));
        return Ok(found);
    }
    Err(Error::Numerical {
        message: format!("block decomposition of the twisted algebra of {} did not converge", alg.group().name()),
        residual: last_residual,
    })
}

/// `Q = Σ_{ς odd} e(λ̂(ς,ς)) l_{ς²}` as exact terms `(g ∈ G, phase)`.
pub fn crosscap_terms(lambda_hat: &TwistedCochain) -> Vec<(usize, Phase)> {
    let gg = lambda_hat.graded_group();
    gg.odd_part()
        .iter()
        .map(|&s| {
            let sq = gg.group().mul(s, s);
            (gg.to_even(sq).expect("squares are even"), lambda_hat.at(s, s))
        })
        .collect()
}

pub fn crosscap_element(lambda_hat: &TwistedCochain) -> AlgebraElement {
    let gg = lambda_hat.graded_group();
    let mut q = AlgebraElement::zero(gg.even_group().order());
    for (g, p) in crosscap_terms(lambda_hat) {
        q.coeffs[g] += p.to_complex();
    }
    q
}

/// Fills in `ν(V)` from the expansion `Q = Σ c_V p_V` as `c_V·dim V/|G|`.
pub fn fs_indicators(alg: &TwistedAlgebra, blocks: &[BlockData], q: &AlgebraElement) -> Result<Vec<BlockData>> {
    if !alg.is_central(q, REPORT_TOL) {
        return Err(Error::Numerical {
            message: "crosscap element is not central".into(),
            residual: f64::NAN,
        });
    }
    let n = alg.dim() as f64;
    blocks
        .iter()
        .map(|b| {
            let p = &b.idempotent;
            let qp = alg.mul(q, p);
            let c = p.dot(&qp) / p.dot(p);
            let res = qp.sub(&p.scale(c)).norm_inf();
            let nu = c * b.dimension as f64 / n;
            let rounded = nu.re.round().clamp(-1.0, 1.0);
            let err = (nu - Complex64::new(rounded, 0.0)).norm().max(res);
            if err > REPORT_TOL {
                return Err(Error::Numerical {
                    message: format!("indicator {nu} of a block of dimension {} is not in {{-1, 0, 1}}", b.dimension),
                    residual: err,
                });
            }
            let mut out = b.clone();
            out.indicator = Some(rounded as i8);
            out.indicator_raw = Some(nu);
            Ok(out)
        })
        .collect()
}

/// Blocks of `ℂ^λ[G]` for `λ = λ̂|_G` with indicators filled.
pub fn blocks_with_indicators(lambda_hat: &TwistedCochain, seed: u64) -> Result<(TwistedAlgebra, Vec<BlockData>)> {
    let gg = lambda_hat.graded_group();
    let alg = twisted_algebra(gg, &restrict_to_even(lambda_hat))?;
    let bl = blocks(&alg, seed)?;
    let q = crosscap_element(lambda_hat);
    let bl = fs_indicators(&alg, &bl, &q)?;
    Ok((alg, bl))
}

/// Duality data attached to an odd element `σ`, all indices in G.
#[derive(Clone, Debug)]
pub struct DualityPhases {
    pub sigma: usize,
    /// `p(l_g) = e(phase)·l_target`
    pub p_map: Vec<(usize, Phase)>,
    /// `Θ` is `e(theta.0)·l_{theta.1}`.
    pub theta: (Phase, usize),
    /// `F_g = λ̂(g, σ)` per `g ∈ G`.
    pub f_phases: Vec<Phase>,
    lambda: Cochain,
}

pub fn duality_phases(lambda_hat: &TwistedCochain, sigma: usize) -> Result<DualityPhases> {
    let gg = lambda_hat.graded_group();
    if sigma >= gg.order() || gg.is_even(sigma) {
        return Err(Error::arg(format!("duality_phases needs an odd element, got {sigma}")));
    }
    let tau = tau_ref(lambda_hat)?;
    let ghat = gg.group();
    let p_map = gg
        .even_part()
        .iter()
        .map(|&g| {
            let target = ghat.conj(sigma, ghat.inv(g));
            (gg.to_even(target).expect("even"), -tau.value(sigma, g))
        })
        .collect();
    let sq = ghat.mul(sigma, sigma);
    Ok(DualityPhases {
        sigma,
        p_map,
        theta: (lambda_hat.at(sigma, sigma), gg.to_even(sq).expect("even")),
        f_phases: gg.even_part().iter().map(|&g| lambda_hat.at(g, sigma)).collect(),
        lambda: restrict_to_even(lambda_hat),
    })
}

impl DualityPhases {
    fn mul(&self, a: (usize, Phase), b: (usize, Phase)) -> (usize, Phase) {
        let g = self.lambda.group();
        (g.mul(a.0, b.0), a.1 + b.1 + self.lambda.at(a.0, b.0))
    }

    fn p(&self, x: (usize, Phase)) -> (usize, Phase) {
        let (t, ph) = self.p_map[x.0];
        (t, ph + x.1)
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(x.coeffs.len());
        for (g, &c) in x.coeffs.iter().enumerate() {
            let (t, ph) = self.p_map[g];
            out.coeffs[t] += c * ph.to_complex();
        }
        out
    }

    /// First `(g, h)` with `p(l_g l_h) ≠ p(l_h) p(l_g)`.
    pub fn anti_homomorphism_violation(&self) -> Option<(usize, usize)> {
        let g = self.lambda.group();
        for a in g.elements() {
            for b in g.elements() {
                let lhs = self.p(self.mul((a, Phase::ZERO), (b, Phase::ZERO)));
                let rhs = self.mul(self.p((b, Phase::ZERO)), self.p((a, Phase::ZERO)));
                if lhs != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First `g` with `p(p(l_g)) ≠ l_{σ²} l_g l_{σ²}⁻¹`.
    pub fn square_violation(&self) -> Option<usize> {
        let g = self.lambda.group();
        let s2 = self.theta.1;
        g.elements().find(|&a| {
            let pp = self.p(self.p((a, Phase::ZERO)));
            let conj = (g.conj(s2, a), -tau_oriented(&self.lambda, s2, a));
            pp != conj
        })
    }
}

/// Exhaustive check of `λ̂(g₂, g₁σ) + λ̂(g₁, σ) = λ(g₂, g₁) + λ̂(g₂g₁, σ)`.
pub fn f_composition_violation(lambda_hat: &TwistedCochain, sigma: usize) -> Option<(usize, usize)> {
    let gg = lambda_hat.graded_group();
    let g = gg.group();
    for &g1 in gg.even_part() {
        for &g2 in gg.even_part() {
            let lhs = lambda_hat.at(g2, g.mul(g1, sigma)) + lambda_hat.at(g1, sigma);
            let rhs = lambda_hat.at(g2, g1) + lambda_hat.at(g.mul(g2, g1), sigma);
            if lhs != rhs {
                return Some((g1, g2));
            }
        }
    }
    None
}

/// Phase data of the Real 2-representation at the point: `ψ = λ` and
/// `β(g) = λ̂(g, ς⁻¹) − λ̂(ς⁻¹, ςgς⁻¹)`, indexed by Ĝ elements of G.
pub fn two_rep_beta(lambda_hat: &TwistedCochain, sigma: usize) -> Vec<(usize, Phase)> {
    let gg = lambda_hat.graded_group();
    let g = gg.group();
    let si = g.inv(sigma);
    gg.even_part()
        .iter()
        .map(|&x| (x, lambda_hat.at(x, si) - lambda_hat.at(si, g.conj(sigma, x))))
        .collect()
}

/// First `(g₁, g₂)` violating the Real 2-representation coherence
/// `β(g₁) + β(g₂) − β(g₂g₁) = ψ(g₂, g₁) + ψ(ςg₂ς⁻¹, ςg₁ς⁻¹)` with `ψ = λ`.
pub fn two_rep_coherence_violation(lambda_hat: &TwistedCochain, sigma: usize) -> Option<(usize, usize)> {
    let gg = lambda_hat.graded_group();
    let g = gg.group();
    let beta: Vec<(usize, Phase)> = two_rep_beta(lambda_hat, sigma);
    let b = |x: usize| beta[gg.to_even(x).expect("even")].1;
    for &g1 in gg.even_part() {
        for &g2 in gg.even_part() {
            let lhs = b(g1) + b(g2) - b(g.mul(g2, g1));
            let rhs = lambda_hat.at(g2, g1) + lambda_hat.at(g.conj(sigma, g2), g.conj(sigma, g1));
            if lhs != rhs {
                return Some((g1, g2));
            }
        }
    }
    None
}

/// Data of the one-dimensional theory built from a twisted 1-cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real1d {
    /// `ρ(g) = λ̂(g)` for `g ∈ G` (indexed by G).
    pub rep_phases: Vec<Phase>,
    pub sigma: usize,
    /// `ι = λ̂(ς⁻¹)`
    pub iota: Phase,
    pub invariants_dim: usize,
}

pub fn real_1d_phases(lambda_hat: &TwistedCochain) -> Result<Real1d> {
    let gg = lambda_hat.graded_group();
    if lambda_hat.degree() != 1 || !is_twisted_cocycle(lambda_hat) {
        return Err(Error::arg("real_1d_phases expects a twisted 1-cocycle"));
    }
    let g = gg.group();
    let sigma = gg.odd_part()[0];
    let rep_phases: Vec<Phase> = gg.even_part().iter().map(|&x| lambda_hat.value(&[x])).collect();
    // compatibility with the Real structure: ρ(ςgς⁻¹) = ρ(g)⁻¹
    for &x in gg.even_part() {
        if lambda_hat.value(&[g.conj(sigma, x)]) != -lambda_hat.value(&[x]) {
            return Err(Error::Internal(format!("Real compatibility fails at {x}")));
        }
    }
    let invariants_dim = rep_phases.iter().all(Phase::is_zero) as usize;
    Ok(Real1d {
        rep_phases,
        sigma,
        iota: lambda_hat.value(&[g.inv(sigma)]),
        invariants_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology_classes, untwisted_cohomology_classes};
    use crate::groups::group_by_name;

    fn split_zero(name: &str) -> TwistedCochain {
        let gg = Arc::new(GradedGroup::split(&group_by_name(name).unwrap()).unwrap());
        TwistedCochain::zero(gg, 2)
    }

    #[test]
    fn center_dimensions() {
        let c2 = split_zero("C2");
        let alg = twisted_algebra(c2.graded_group(), &restrict_to_even(&c2)).unwrap();
        assert_eq!(alg.center_dim(), 2);
        let s3 = split_zero("S3");
        let alg = twisted_algebra(s3.graded_group(), &restrict_to_even(&s3)).unwrap();
        assert_eq!(alg.center_dim(), 3);
        let v4 = Arc::new(group_by_name("C2xC2").unwrap());
        let h2 = untwisted_cohomology_classes(&v4, 2).unwrap();
        let gg = GradedGroup::split(&v4).unwrap();
        let alg = twisted_algebra(&gg, &h2.representatives[1]).unwrap();
        assert_eq!(alg.center_dim(), 1);
        let b = blocks(&alg, DEFAULT_SEED).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].dimension, 2);
    }

    #[test]
    fn quaternion_blocks() {
        let (_, b) = blocks_with_indicators(&split_zero("Q8"), DEFAULT_SEED).unwrap();
        let dims: Vec<usize> = b.iter().map(|x| x.dimension).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 2]);
        let nus: Vec<i8> = b.iter().map(|x| x.indicator.unwrap()).collect();
        assert_eq!(nus, vec![1, 1, 1, 1, -1]);
    }

    #[test]
    fn cyclic_three_indicators() {
        let (_, b) = blocks_with_indicators(&split_zero("C3"), DEFAULT_SEED).unwrap();
        let mut nus: Vec<i8> = b.iter().map(|x| x.indicator.unwrap()).collect();
        nus.sort();
        assert_eq!(nus, vec![0, 0, 1]);
    }

    #[test]
    fn nontrivial_class_on_c2_has_negative_indicator() {
        let gg = Arc::new(crate::groups::enumerate_gradings(&group_by_name("C2").unwrap()).swap_remove(0));
        let h2 = cohomology_classes(&gg, 2).unwrap();
        let lh = &h2.representatives[1];
        assert_eq!(lh.at(1, 1), Phase::HALF);
        let q = crosscap_element(lh);
        assert_eq!(q.coeffs, vec![Complex64::new(-1.0, 0.0)]);
        let (_, b) = blocks_with_indicators(lh, DEFAULT_SEED).unwrap();
        assert_eq!(b[0].indicator, Some(-1));
    }

    #[test]
    fn duality_on_abelian_untwisted() {
        let lh = split_zero("C4");
        let d = duality_phases(&lh, 1).unwrap();
        let g = lh.graded_group().even_group();
        for (x, &(t, ph)) in d.p_map.iter().enumerate() {
            assert_eq!(t, g.inv(x));
            assert!(ph.is_zero());
        }
        assert!(duality_phases(&lh, 0).is_err());
    }

    #[test]
    fn phase_identities_on_shifted_cocycles() {
        use crate::cohomology::twisted_differential;
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in ["D8", "C2xC4", "Q8", "C4"] {
            for gg in crate::groups::enumerate_gradings(&group_by_name(name).unwrap()) {
                let gg = Arc::new(gg);
                for lh in cohomology_classes(&gg, 2).unwrap().representatives {
                    let nu = TwistedCochain::random_normalized(gg.clone(), 1, 8, &mut rng);
                    let lh = lh.add(&twisted_differential(&nu)).unwrap();
                    for &s in gg.odd_part() {
                        assert_eq!(two_rep_coherence_violation(&lh, s), None);
                        assert_eq!(f_composition_violation(&lh, s), None);
                        let d = duality_phases(&lh, s).unwrap();
                        assert_eq!(d.anti_homomorphism_violation(), None);
                        assert_eq!(d.square_violation(), None);
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_one_cocycle() {
        let gg = Arc::new(crate::groups::enumerate_gradings(&group_by_name("C4").unwrap()).swap_remove(0));
        let r = real_1d_phases(&TwistedCochain::zero(gg, 1)).unwrap();
        assert_eq!(r.invariants_dim, 1);
        assert!(r.iota.is_zero());
    }
}

