use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::frobenius::{check_unoriented_frobenius, orbifold, UnorientedFrobeniusData};
use super::turaev::{check_turaev_axioms, turaev_from_tau};
use crate::cohomology::{Phase, TwistedCochain};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::groupoids::double_real_loop;
use crate::moduli::{bundle_groupoid, Surface, DEFAULT_BUDGET};
use crate::reptheory::{blocks_with_indicators, BlockData, DEFAULT_SEED};
use crate::transgression::{fundamental_chain, pair_chain, tau_ref, tau_ref_formula, LoopCocycle};

/// `(1/|G|)·Σ_ρ exp(2πi⟨ρ*λ̂, [Σ]⟩)` over holonomy tuples, checked against
/// the groupoid integral over the bundle groupoid.
pub fn partition_direct(lambda_hat: &TwistedCochain, surface: Surface, budget: u128) -> Result<Cyclotomic> {
    if lambda_hat.degree() != 2 {
        return Err(Error::arg("partition_direct expects a 2-cochain"));
    }
    let gg = lambda_hat.graded_group();
    let gpd = bundle_groupoid(surface, gg, budget)?;
    let pairing = |x: usize| pair_chain(lambda_hat, &fundamental_chain(surface, gg, gpd.point_label(x)));
    let mut counts: BTreeMap<Phase, i64> = BTreeMap::new();
    for x in 0..gpd.len() {
        *counts.entry(pairing(x)).or_default() += 1;
    }
    let by_count = Cyclotomic::from_phase_counts(counts, gg.even_group().order() as i64);
    let by_groupoid = gpd.integrate_phases(pairing)?;
    if by_count != by_groupoid {
        return Err(Error::Internal(format!(
            "{surface}: holonomy count {by_count} differs from groupoid integral {by_groupoid}"
        )));
    }
    Ok(by_count)
}

fn power(f: &UnorientedFrobeniusData, x: &[Cyclotomic], k: usize) -> Vec<Cyclotomic> {
    (0..k).fold(f.unit().to_vec(), |acc, _| f.mul(&acc, x))
}

/// Cut and paste: `ε(Handle^g(1))` for `Σ_g` and `ε(Q^k)` for `N_k`.
pub fn partition_tqft(f: &UnorientedFrobeniusData, surface: Surface) -> Result<Cyclotomic> {
    let state = match surface {
        Surface::Orientable(0) => f.unit().to_vec(),
        Surface::Orientable(g) => {
            let h = f
                .handle_element()
                .ok_or_else(|| Error::Internal("degenerate Frobenius pairing".into()))?;
            power(f, &h, g as usize)
        }
        Surface::Nonorientable(k) => power(f, f.crosscap(), k as usize),
    };
    Ok(f.counit_of(&state))
}

/// `|G|^{−χ}·Σ_V (ν(V)·dim V)^χ` for nonorientable surfaces, dropping blocks
/// with `ν = 0`, and `|G|^{−χ}·Σ_V (dim V)^χ` for orientable ones.
pub fn partition_verlinde(blocks: &[BlockData], group_order: usize, surface: Surface) -> Result<Complex64> {
    let chi = surface.euler_characteristic();
    let pow = |base: i64, e: i64| -> BigRational {
        let b = BigRational::from_integer(BigInt::from(base));
        if e >= 0 {
            num_traits::pow(b, e as usize)
        } else {
            num_traits::pow(b, (-e) as usize).recip()
        }
    };
    let mut sum = BigRational::zero();
    for b in blocks {
        let weight = if surface.is_orientable() {
            b.dimension as i64
        } else {
            let nu = b
                .indicator
                .ok_or_else(|| Error::arg("partition_verlinde needs indicators on every block"))?;
            nu as i64 * b.dimension as i64
        };
        if weight != 0 {
            sum += pow(weight, chi);
        }
    }
    let value = sum * pow(group_order as i64, -chi);
    Ok(Complex64::new(value.to_f64().unwrap_or(f64::NAN), 0.0))
}

/// `Σ_{ς odd, ς² = e} exp(2πi·λ̂(ς,ς))`
pub fn signed_square_root_count(lambda_hat: &TwistedCochain) -> Cyclotomic {
    let gg = lambda_hat.graded_group();
    let g = gg.group();
    let mut counts: BTreeMap<Phase, i64> = BTreeMap::new();
    for &s in gg.odd_part() {
        if g.mul(s, s) == 0 {
            *counts.entry(lambda_hat.at(s, s)).or_default() += 1;
        }
    }
    Cyclotomic::from_phase_counts(counts, 1)
}

/// Groupoid integral of `exp(2πi·τ(ω, g))` over the double real loop groupoid.
pub fn kr_rank(lambda_hat: &TwistedCochain) -> Result<Cyclotomic> {
    kr_rank_from(&tau_ref(lambda_hat)?)
}

pub fn kr_rank_from(tau: &LoopCocycle) -> Result<Cyclotomic> {
    let gpd = double_real_loop(tau.graded_group());
    gpd.integrate_phases(|x| {
        let p = gpd.point_label(x);
        tau.value(p[1], p[0])
    })
    .map_err(|e| Error::Internal(format!("transgressed integrand: {e}")))
}

/// `(Z(T²) + Z(K))/2`
pub fn one_loop(lambda_hat: &TwistedCochain, budget: u128) -> Result<Cyclotomic> {
    let sum = partition_direct(lambda_hat, Surface::torus(), budget)?
        + partition_direct(lambda_hat, Surface::klein_bottle(), budget)?;
    Ok(sum.scale(&BigRational::new(BigInt::one(), BigInt::from(2))))
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub seed: u64,
    pub budget: u128,
    /// Reverses the sign of the last term of the reflective transgression.
    pub flip_tau: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
            flip_tau: false,
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// One surface of one (group, grading, class) tuple.
#[derive(Clone, Debug, Serialize)]
pub struct RouteRecord {
    pub group: String,
    pub grading: String,
    pub class: usize,
    pub surface: String,
    pub direct: [f64; 2],
    pub tqft: [f64; 2],
    pub verlinde: Option<[f64; 2]>,
    pub max_delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub direct_exact: Cyclotomic,
    #[serde(skip)]
    pub tqft_exact: Cyclotomic,
}

/// Surface independent identities of one tuple.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryRecord {
    pub group: String,
    pub grading: String,
    pub class: usize,
    pub kr_rank: [f64; 2],
    pub one_loop: [f64; 2],
    pub crosscap_trace: [f64; 2],
    pub rp2: [f64; 2],
    pub max_delta: f64,
    #[serde(skip)]
    pub kr_exact: Cyclotomic,
    #[serde(skip)]
    pub one_loop_exact: Cyclotomic,
    #[serde(skip)]
    pub crosscap_trace_exact: Cyclotomic,
    #[serde(skip)]
    pub rp2_exact: Cyclotomic,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub records: Vec<RouteRecord>,
    pub summary: Option<SummaryRecord>,
}

impl ConsistencyReport {
    pub fn max_delta(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.max_delta)
            .chain(self.summary.iter().map(|s| s.max_delta))
            .fold(0.0, f64::max)
    }
}

/// All routes for each surface, plus the KR-rank and crosscap trace
/// identities. `labels` is `(group, grading, class)`.
pub fn consistency_report(
    lambda_hat: &TwistedCochain,
    surfaces: &[Surface],
    labels: (&str, &str, usize),
    opts: &ReportOptions,
) -> Result<ConsistencyReport> {
    let (group, grading, class) = labels;
    if surfaces.is_empty() {
        return Ok(ConsistencyReport {
            records: Vec::new(),
            summary: None,
        });
    }
    let tau = if opts.flip_tau {
        tau_ref_formula(lambda_hat, true)
    } else {
        tau_ref(lambda_hat)?
    };
    let turaev = turaev_from_tau(lambda_hat, &tau);
    if let Some(c) = check_turaev_axioms(&turaev).failures().first() {
        return Err(Error::Internal(format!(
            "Turaev condition {} fails: {}",
            c.name,
            c.witness.as_deref().unwrap_or("")
        )));
    }
    let frob = orbifold(&turaev)?;
    if let Some(c) = check_unoriented_frobenius(&frob).failures().first() {
        return Err(Error::Internal(format!(
            "orbifold condition {} fails: {}",
            c.name,
            c.witness.as_deref().unwrap_or("")
        )));
    }
    let (_, blocks) = blocks_with_indicators(lambda_hat, opts.seed)?;
    let order = lambda_hat.graded_group().even_group().order();
    let mut records = Vec::with_capacity(surfaces.len());
    for &s in surfaces {
        let direct = partition_direct(lambda_hat, s, opts.budget)?;
        let tqft = partition_tqft(&frob, s)?;
        let verlinde = partition_verlinde(&blocks, order, s)?;
        let dz = direct.to_complex();
        let max_delta = (&direct - &tqft).to_complex().norm().max((dz - verlinde).norm());
        records.push(RouteRecord {
            group: group.to_string(),
            grading: grading.to_string(),
            class,
            surface: s.name(),
            direct: pair(dz),
            tqft: pair(tqft.to_complex()),
            verlinde: Some(pair(verlinde)),
            max_delta,
            note: (s == Surface::sphere()).then(|| "convention-sensitive: groupoid cardinality gives 1/|G|, the stated value is 1".to_string()),
            direct_exact: direct,
            tqft_exact: tqft,
        });
    }
    let kr = kr_rank_from(&tau)?;
    let ol = one_loop(lambda_hat, opts.budget)?;
    let trace = frob.counit_of(frob.crosscap());
    let rp2 = partition_direct(lambda_hat, Surface::projective_plane(), opts.budget)?;
    let max_delta = (&kr - &ol).to_complex().norm().max((&trace - &rp2).to_complex().norm());
    Ok(ConsistencyReport {
        records,
        summary: Some(SummaryRecord {
            group: group.to_string(),
            grading: grading.to_string(),
            class,
            kr_rank: pair(kr.to_complex()),
            one_loop: pair(ol.to_complex()),
            crosscap_trace: pair(trace.to_complex()),
            rp2: pair(rp2.to_complex()),
            max_delta,
            kr_exact: kr,
            one_loop_exact: ol,
            crosscap_trace_exact: trace,
            rp2_exact: rp2,
        }),
    })
}
