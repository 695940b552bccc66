//! Group cochains with U(1) coefficients (written additively in ℚ/ℤ), twisted
//! by the grading on odd elements, and their cohomology in low degrees.

mod phase;
pub mod snf;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GradedGroup};

pub use phase::Phase;

/// Upper bound on the number of class representatives materialized at once.
pub const REPRESENTATIVE_LIMIT: u64 = 4096;
/// Upper bound on dense differential matrix entries.
pub const MATRIX_ENTRY_LIMIT: u128 = 1 << 23;

fn tuple_count(order: usize, degree: usize) -> usize {
    order.pow(degree as u32)
}

fn encode(tuple: &[usize], order: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * order + x)
}

fn decode(mut index: usize, order: usize, degree: usize, out: &mut [usize]) {
    for k in (0..degree).rev() {
        out[k] = index % order;
        index /= order;
    }
}

/// Coefficient list `(±1, tuple index)` of `(dc)(ω)` in terms of values of `c`.
fn differential_terms(
    group: &FiniteGroup,
    sign: Option<&[i8]>,
    omega: &[usize],
    out: &mut Vec<(i64, usize)>,
) {
    out.clear();
    let n = omega.len() - 1;
    let order = group.order();
    let s0 = sign.map_or(1, |s| s[omega[0]]) as i64;
    out.push((s0, encode(&omega[1..], order)));
    let mut face = Vec::with_capacity(n);
    for j in 1..=n {
        face.clear();
        face.extend_from_slice(&omega[..j - 1]);
        face.push(group.mul(omega[j - 1], omega[j]));
        face.extend_from_slice(&omega[j + 1..]);
        let coeff = if j % 2 == 0 { 1 } else { -1 };
        out.push((coeff, encode(&face, order)));
    }
    let coeff = if (n + 1) % 2 == 0 { 1 } else { -1 };
    out.push((coeff, encode(&omega[..n], order)));
}

fn differential_values(
    group: &FiniteGroup,
    sign: Option<&[i8]>,
    degree: usize,
    values: &[Phase],
) -> Vec<Phase> {
    let order = group.order();
    let mut omega = vec![0; degree + 1];
    let mut terms = Vec::new();
    (0..tuple_count(order, degree + 1))
        .map(|idx| {
            decode(idx, order, degree + 1, &mut omega);
            differential_terms(group, sign, &omega, &mut terms);
            terms.iter().map(|&(k, i)| values[i].scale(k)).sum()
        })
        .collect()
}

fn is_normalized_values(order: usize, degree: usize, values: &[Phase]) -> bool {
    if degree == 0 {
        return true;
    }
    let mut t = vec![0; degree];
    (0..values.len()).all(|idx| {
        decode(idx, order, degree, &mut t);
        !t.contains(&0) || values[idx].is_zero()
    })
}

/// Tuple indices spanning the (normalized) cochain group in one degree.
fn basis(order: usize, degree: usize, normalized: bool) -> Vec<usize> {
    let mut t = vec![0; degree];
    (0..tuple_count(order, degree))
        .filter(|&idx| {
            decode(idx, order, degree, &mut t);
            !normalized || !t.contains(&0)
        })
        .collect()
}

/// Integer matrix of `d: C^degree → C^{degree+1}` on the given bases.
fn differential_matrix(
    group: &FiniteGroup,
    sign: Option<&[i8]>,
    degree: usize,
    normalized: bool,
) -> Result<(Vec<Vec<i64>>, Vec<usize>, Vec<usize>)> {
    let order = group.order();
    let src = basis(order, degree, normalized);
    let dst = basis(order, degree + 1, normalized);
    let entries = src.len() as u128 * dst.len() as u128;
    if entries > MATRIX_ENTRY_LIMIT {
        return Err(Error::Resource {
            what: format!("differential matrix in degree {degree} for {}", group.name()),
            needed: entries,
            limit: MATRIX_ENTRY_LIMIT,
        });
    }
    let mut position = vec![usize::MAX; tuple_count(order, degree)];
    for (k, &idx) in src.iter().enumerate() {
        position[idx] = k;
    }
    let mut omega = vec![0; degree + 1];
    let mut terms = Vec::new();
    let rows = dst
        .iter()
        .map(|&idx| {
            decode(idx, order, degree + 1, &mut omega);
            differential_terms(group, sign, &omega, &mut terms);
            let mut row = vec![0i64; src.len()];
            for &(k, i) in &terms {
                if position[i] != usize::MAX {
                    row[position[i]] += k;
                }
            }
            row
        })
        .collect();
    Ok((rows, src, dst))
}

/// Solves `dν = c` in degree `degree - 1`; `None` when `c` is not a coboundary.
fn solve_coboundary(
    group: &FiniteGroup,
    sign: Option<&[i8]>,
    degree: usize,
    values: &[Phase],
) -> Result<Option<Vec<Phase>>> {
    if degree == 0 {
        return Err(Error::arg("degree-0 cochains have no coboundary witnesses"));
    }
    let order = group.order();
    let normalized = is_normalized_values(order, degree, values);
    let (matrix, src, dst) = differential_matrix(group, sign, degree - 1, normalized)?;
    let mut rhs = vec![dst.iter().map(|&i| values[i]).collect::<Vec<_>>()];
    let cols = src.len();
    let diag = snf::diagonalize(matrix, cols, &mut rhs)?;
    let rhs = &rhs[0];
    let rank = diag.diag.len();
    if rhs[rank..].iter().any(|p| !p.is_zero()) {
        return Ok(None);
    }
    let mut y = vec![Phase::ZERO; cols];
    for t in 0..rank {
        y[t] = rhs[t].div_int(diag.diag[t]);
    }
    let mut nu = vec![Phase::ZERO; tuple_count(order, degree - 1)];
    for (k, &idx) in src.iter().enumerate() {
        nu[idx] = diag.v[k].iter().zip(&y).map(|(&m, &p)| p.scale(m)).sum();
    }
    if differential_values(group, sign, degree - 1, &nu) != values {
        return Err(Error::Internal("coboundary solver produced a wrong witness".into()));
    }
    Ok(Some(nu))
}

/// Class representatives (sorted by value vector) and cyclic orders of `H^degree`.
fn cohomology_values(
    group: &FiniteGroup,
    sign: Option<&[i8]>,
    degree: usize,
) -> Result<(Vec<u64>, Vec<Vec<Phase>>)> {
    if degree == 0 {
        return Err(Error::arg("cohomology is computed in degrees >= 1"));
    }
    let order = group.order();
    let (matrix, src, _) = differential_matrix(group, sign, degree, true)?;
    let diag = snf::diagonalize(matrix, src.len(), &mut [])?;
    let torsion: Vec<(usize, i64)> = diag
        .diag
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1)
        .map(|(t, &d)| (t, d))
        .collect();
    let count = torsion
        .iter()
        .try_fold(1u64, |acc, &(_, d)| acc.checked_mul(d as u64))
        .unwrap_or(u64::MAX);
    if count > REPRESENTATIVE_LIMIT {
        return Err(Error::Resource {
            what: format!("cohomology representatives of {} in degree {degree}", group.name()),
            needed: count as u128,
            limit: REPRESENTATIVE_LIMIT as u128,
        });
    }
    // generator t: ν = V e_t / d_t
    let generators: Vec<Vec<Phase>> = torsion
        .iter()
        .map(|&(t, d)| {
            let mut dense = vec![Phase::ZERO; tuple_count(order, degree)];
            for (k, &idx) in src.iter().enumerate() {
                dense[idx] = Phase::new(diag.v[k][t], d);
            }
            dense
        })
        .collect();
    let mut reps = vec![vec![Phase::ZERO; tuple_count(order, degree)]];
    for (gen, &(_, d)) in generators.iter().zip(&torsion) {
        let mut next = Vec::with_capacity(reps.len() * d as usize);
        for rep in &reps {
            for k in 0..d {
                next.push(rep.iter().zip(gen).map(|(&a, &b)| a + b.scale(k)).collect());
            }
        }
        reps = next;
    }
    reps.sort();
    reps.dedup();
    if reps.len() as u64 != count {
        return Err(Error::Internal("cohomology representatives collided".into()));
    }
    Ok((torsion.iter().map(|&(_, d)| d as u64).collect(), reps))
}

/// A normalized or unnormalized map `Ĝⁿ → ℚ/ℤ` with π-twisted coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCochain {
    degree: usize,
    gg: Arc<GradedGroup>,
    values: Vec<Phase>,
}

impl TwistedCochain {
    pub fn new(gg: Arc<GradedGroup>, degree: usize, values: Vec<Phase>) -> Result<Self> {
        let expected = tuple_count(gg.order(), degree);
        if values.len() != expected {
            return Err(Error::arg(format!(
                "cochain of degree {degree} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(TwistedCochain { degree, gg, values })
    }

    pub fn zero(gg: Arc<GradedGroup>, degree: usize) -> Self {
        let n = tuple_count(gg.order(), degree);
        TwistedCochain {
            degree,
            gg,
            values: vec![Phase::ZERO; n],
        }
    }

    pub fn from_fn(gg: Arc<GradedGroup>, degree: usize, mut f: impl FnMut(&[usize]) -> Phase) -> Self {
        let order = gg.order();
        let mut t = vec![0; degree];
        let values = (0..tuple_count(order, degree))
            .map(|idx| {
                decode(idx, order, degree, &mut t);
                f(&t)
            })
            .collect();
        TwistedCochain { degree, gg, values }
    }

    /// Random normalized cochain with values in `(1/den)ℤ/ℤ`.
    pub fn random_normalized<R: Rng>(gg: Arc<GradedGroup>, degree: usize, den: i64, rng: &mut R) -> Self {
        Self::from_fn(gg, degree, |t| {
            if t.contains(&0) {
                Phase::ZERO
            } else {
                Phase::new(rng.gen_range(0..den), den)
            }
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn graded_group(&self) -> &Arc<GradedGroup> {
        &self.gg
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    #[inline]
    pub fn value(&self, tuple: &[usize]) -> Phase {
        debug_assert_eq!(tuple.len(), self.degree);
        self.values[encode(tuple, self.gg.order())]
    }

    /// Shorthand for degree-2 evaluation.
    #[inline]
    pub fn at(&self, a: usize, b: usize) -> Phase {
        debug_assert_eq!(self.degree, 2);
        self.values[a * self.gg.order() + b]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Phase::is_zero)
    }

    pub fn is_normalized(&self) -> bool {
        is_normalized_values(self.gg.order(), self.degree, &self.values)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::arg("cochain degrees differ"));
        }
        if !Arc::ptr_eq(&self.gg, &other.gg) && *self.gg != *other.gg {
            return Err(Error::arg("cochains live on different graded groups"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TwistedCochain {
            degree: self.degree,
            gg: self.gg.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TwistedCochain {
            degree: self.degree,
            gg: self.gg.clone(),
            values: self.values.iter().map(|&a| -a).collect(),
        }
    }

    /// For a twisted 2-cocycle, subtracts `dν` with `ν ≡ c(e,e)` so that all
    /// values with an identity argument vanish.
    pub fn normalized(&self) -> Result<Self> {
        match self.degree {
            0 | 1 => Ok(self.clone()),
            2 => {
                let a = self.at(0, 0);
                let nu = TwistedCochain::from_fn(self.gg.clone(), 1, |_| a);
                let out = self.sub(&twisted_differential(&nu))?;
                if !out.is_normalized() {
                    return Err(Error::arg("cochain is not a cocycle, cannot normalize"));
                }
                Ok(out)
            }
            _ => Err(Error::arg("normalization implemented for degrees <= 2")),
        }
    }

    /// Lifts an untwisted cochain on G to the split extension `G × ℤ₂` built by
    /// [`GradedGroup::split`], ignoring the ℤ₂ coordinate.
    pub fn pullback_split(gg: Arc<GradedGroup>, lambda: &Cochain) -> Result<Self> {
        let g = lambda.group();
        if gg.order() != 2 * g.order() {
            return Err(Error::arg("pullback_split expects the graded group G x C2"));
        }
        for a in 0..gg.order() {
            if gg.sign(a) != if a % 2 == 0 { 1 } else { -1 } {
                return Err(Error::arg("pullback_split expects the projection grading"));
            }
        }
        let degree = lambda.degree();
        let out = Self::from_fn(gg, degree, |t| {
            let proj: Vec<usize> = t.iter().map(|&x| x / 2).collect();
            lambda.value(&proj)
        });
        if degree > 0 && !is_twisted_cocycle(&out) {
            return Err(Error::arg(
                "pulled back cochain is not a twisted cocycle (lambda is not 2-torsion)",
            ));
        }
        Ok(out)
    }

    pub fn from_json(gg: Arc<GradedGroup>, json: &CocycleJson) -> Result<Self> {
        if json.denominator <= 0 {
            return Err(Error::parse("denominator", "must be positive"));
        }
        if !json.group.is_empty() && json.group != gg.group().name() {
            return Err(Error::arg(format!(
                "cocycle is for group {}, not {}",
                json.group,
                gg.group().name()
            )));
        }
        let order = gg.order();
        let mut values = vec![Phase::ZERO; tuple_count(order, json.degree)];
        for (key, &num) in &json.values {
            let tuple = key
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(key, e.to_string()))?;
            if tuple.len() != json.degree || tuple.iter().any(|&x| x >= order) {
                return Err(Error::parse(key, "wrong arity or element out of range"));
            }
            values[encode(&tuple, order)] = Phase::new(num, json.denominator);
        }
        TwistedCochain::new(gg, json.degree, values)
    }

    /// First 8 bytes of SHA-256 over the reduced value list, as hex.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for p in &self.values {
            hasher.update(p.numerator().to_le_bytes());
            hasher.update(p.denominator().to_le_bytes());
        }
        hasher.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> CocycleJson {
        let order = self.gg.order();
        let den = self
            .values
            .iter()
            .fold(1i64, |acc, p| num_integer::lcm(acc, p.denominator()));
        let mut t = vec![0; self.degree];
        let mut values = BTreeMap::new();
        for (idx, p) in self.values.iter().enumerate() {
            if !p.is_zero() {
                decode(idx, order, self.degree, &mut t);
                let key = t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                values.insert(key, p.numerator() * (den / p.denominator()));
            }
        }
        CocycleJson {
            degree: self.degree,
            group: self.gg.group().name().to_string(),
            denominator: den,
            values,
        }
    }
}

/// `{"degree": n, "group": name, "denominator": N, "values": {"g1,g2": k}}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CocycleJson {
    pub degree: usize,
    #[serde(default)]
    pub group: String,
    pub denominator: i64,
    #[serde(default)]
    pub values: BTreeMap<String, i64>,
}

pub fn twisted_differential(c: &TwistedCochain) -> TwistedCochain {
    let gg = c.gg.clone();
    let values = differential_values(gg.group(), Some(gg.signs()), c.degree, &c.values);
    TwistedCochain {
        degree: c.degree + 1,
        gg,
        values,
    }
}

pub fn is_twisted_cocycle(c: &TwistedCochain) -> bool {
    twisted_differential(c).is_zero()
}

/// Returns `ν` with `dν = c`, or `None` if `c` is not a coboundary.
pub fn is_twisted_coboundary(c: &TwistedCochain) -> Result<Option<TwistedCochain>> {
    let gg = c.gg.clone();
    Ok(
        solve_coboundary(gg.group(), Some(gg.signs()), c.degree, &c.values)?.map(|values| {
            TwistedCochain {
                degree: c.degree - 1,
                gg,
                values,
            }
        }),
    )
}

/// Restriction to tuples of even elements, re-indexed over `even_group()`.
pub fn restrict_to_even(c: &TwistedCochain) -> Cochain {
    let gg = &c.gg;
    let even = Arc::new(gg.even_group().clone());
    let degree = c.degree;
    Cochain::from_fn(even, degree, |t| {
        let lifted: Vec<usize> = t.iter().map(|&i| gg.from_even(i)).collect();
        c.value(&lifted)
    })
}

/// `Hⁿ` as an abstract abelian group plus one normalized cocycle per class.
#[derive(Clone, Debug)]
pub struct Cohomology<C> {
    pub degree: usize,
    /// Orders of the cyclic summands found by the diagonalization.
    pub cyclic_orders: Vec<u64>,
    pub invariant_factors: Vec<u64>,
    /// Sorted by value vector; index 0 is always the trivial class.
    pub representatives: Vec<C>,
}

impl<C> Cohomology<C> {
    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }
}

pub fn cohomology_classes(gg: &Arc<GradedGroup>, degree: usize) -> Result<Cohomology<TwistedCochain>> {
    let (orders, reps) = cohomology_values(gg.group(), Some(gg.signs()), degree)?;
    Ok(Cohomology {
        degree,
        invariant_factors: snf::invariant_factors(&orders),
        cyclic_orders: orders,
        representatives: reps
            .into_iter()
            .map(|values| TwistedCochain {
                degree,
                gg: gg.clone(),
                values,
            })
            .collect(),
    })
}

/// Ordinary `Hⁿ(BG; U(1))` with trivial action on coefficients.
pub fn untwisted_cohomology_classes(group: &Arc<FiniteGroup>, degree: usize) -> Result<Cohomology<Cochain>> {
    let (orders, reps) = cohomology_values(group, None, degree)?;
    Ok(Cohomology {
        degree,
        invariant_factors: snf::invariant_factors(&orders),
        cyclic_orders: orders,
        representatives: reps
            .into_iter()
            .map(|values| Cochain {
                degree,
                group: group.clone(),
                values,
            })
            .collect(),
    })
}

/// Cochain on an ungraded group with trivial coefficient action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    group: Arc<FiniteGroup>,
    values: Vec<Phase>,
}

impl Cochain {
    pub fn new(group: Arc<FiniteGroup>, degree: usize, values: Vec<Phase>) -> Result<Self> {
        let expected = tuple_count(group.order(), degree);
        if values.len() != expected {
            return Err(Error::arg(format!(
                "cochain of degree {degree} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Cochain { degree, group, values })
    }

    pub fn zero(group: Arc<FiniteGroup>, degree: usize) -> Self {
        let n = tuple_count(group.order(), degree);
        Cochain {
            degree,
            group,
            values: vec![Phase::ZERO; n],
        }
    }

    pub fn from_fn(group: Arc<FiniteGroup>, degree: usize, mut f: impl FnMut(&[usize]) -> Phase) -> Self {
        let order = group.order();
        let mut t = vec![0; degree];
        let values = (0..tuple_count(order, degree))
            .map(|idx| {
                decode(idx, order, degree, &mut t);
                f(&t)
            })
            .collect();
        Cochain { degree, group, values }
    }

    pub fn random_normalized<R: Rng>(group: Arc<FiniteGroup>, degree: usize, den: i64, rng: &mut R) -> Self {
        Self::from_fn(group, degree, |t| {
            if t.contains(&0) {
                Phase::ZERO
            } else {
                Phase::new(rng.gen_range(0..den), den)
            }
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    #[inline]
    pub fn value(&self, tuple: &[usize]) -> Phase {
        self.values[encode(tuple, self.group.order())]
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> Phase {
        debug_assert_eq!(self.degree, 2);
        self.values[a * self.group.order() + b]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Phase::is_zero)
    }

    pub fn is_normalized(&self) -> bool {
        is_normalized_values(self.group.order(), self.degree, &self.values)
    }

    pub fn differential(&self) -> Cochain {
        Cochain {
            degree: self.degree + 1,
            group: self.group.clone(),
            values: differential_values(&self.group, None, self.degree, &self.values),
        }
    }

    pub fn is_cocycle(&self) -> bool {
        self.differential().is_zero()
    }

    pub fn coboundary_witness(&self) -> Result<Option<Cochain>> {
        Ok(
            solve_coboundary(&self.group, None, self.degree, &self.values)?.map(|values| Cochain {
                degree: self.degree - 1,
                group: self.group.clone(),
                values,
            }),
        )
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree || *self.group != *other.group {
            return Err(Error::arg("cochains are not compatible"));
        }
        Ok(Cochain {
            degree: self.degree,
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect(),
        })
    }
}
