use num_rational::BigRational;

use super::turaev::TuraevAlgebraData;
use super::AxiomReport;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

type Vector = Vec<Cyclotomic>;
type Matrix = Vec<Vec<Cyclotomic>>;

/// A commutative Frobenius algebra with involution and crosscap, given by
/// exact structure constants in a basis `b_0 … b_{d−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnorientedFrobeniusData {
    dim: usize,
    /// `b_i b_j = Σ_k mult[(i·d + j)·d + k] b_k`
    mult: Vec<Cyclotomic>,
    unit: Vector,
    /// `ε(b_i)`
    counit: Vector,
    /// `p(b_j) = Σ_i p[i·d + j] b_i`
    p: Vec<Cyclotomic>,
    q: Vector,
    /// Representative element (index in G) of the class carrying each basis
    /// vector, when the data comes from an orbifold.
    labels: Vec<usize>,
}

impl UnorientedFrobeniusData {
    pub fn new(dim: usize, mult: Vec<Cyclotomic>, unit: Vector, counit: Vector, p: Vec<Cyclotomic>, q: Vector) -> Result<Self> {
        if mult.len() != dim * dim * dim || unit.len() != dim || counit.len() != dim || p.len() != dim * dim || q.len() != dim {
            return Err(Error::arg("inconsistent Frobenius data sizes"));
        }
        Ok(UnorientedFrobeniusData {
            dim,
            mult,
            unit,
            counit,
            p,
            q,
            labels: (0..dim).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn unit(&self) -> &[Cyclotomic] {
        &self.unit
    }

    pub fn crosscap(&self) -> &[Cyclotomic] {
        &self.q
    }

    pub fn basis(&self, i: usize) -> Vector {
        (0..self.dim)
            .map(|k| if k == i { Cyclotomic::one() } else { Cyclotomic::zero() })
            .collect()
    }

    fn c(&self, i: usize, j: usize, k: usize) -> &Cyclotomic {
        &self.mult[(i * self.dim + j) * self.dim + k]
    }

    pub fn mul(&self, x: &[Cyclotomic], y: &[Cyclotomic]) -> Vector {
        let d = self.dim;
        let mut out = vec![Cyclotomic::zero(); d];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let xy = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o = &*o + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    pub fn counit_of(&self, x: &[Cyclotomic]) -> Cyclotomic {
        x.iter().zip(&self.counit).map(|(a, b)| a * b).sum()
    }

    pub fn apply_p(&self, x: &[Cyclotomic]) -> Vector {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| &self.p[i * d + j] * &x[j]).sum())
            .collect()
    }

    /// `η_{ij} = ε(b_i b_j)`
    pub fn pairing(&self) -> Matrix {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| (0..self.dim).map(|k| self.c(i, j, k) * &self.counit[k]).sum())
                    .collect()
            })
            .collect()
    }

    /// `Δ(1) = Σ D_{ij} b_i ⊗ b_j` with `D = η⁻¹`; `None` if `η` is singular.
    pub fn copairing(&self) -> Option<Matrix> {
        invert(self.pairing())
    }

    /// `Δ(x)` as a coefficient matrix `T[a][c]` of `b_a ⊗ b_c`.
    fn comultiply(&self, copairing: &Matrix, x: &[Cyclotomic]) -> Matrix {
        let d = self.dim;
        let xb: Vec<Vector> = (0..d).map(|i| self.mul(x, &self.basis(i))).collect();
        (0..d)
            .map(|a| {
                (0..d)
                    .map(|c| (0..d).map(|i| &copairing[i][c] * &xb[i][a]).sum())
                    .collect()
            })
            .collect()
    }

    /// `m ∘ Δ (1)`, the handle element.
    pub fn handle_element(&self) -> Option<Vector> {
        let dmat = self.copairing()?;
        let d = self.dim;
        let mut out = vec![Cyclotomic::zero(); d];
        for i in 0..d {
            for j in 0..d {
                if dmat[i][j].is_zero() {
                    continue;
                }
                let prod = self.mul(&self.basis(i), &self.basis(j));
                for (o, v) in out.iter_mut().zip(prod) {
                    *o = &*o + &(&dmat[i][j] * &v);
                }
            }
        }
        Some(out)
    }

    /// Number of structure constants addressable by `mutate`.
    pub fn structure_constant_count(&self) -> usize {
        self.mult.len() + self.unit.len() + self.counit.len() + self.p.len() + self.q.len()
    }

    /// Multiplies one structure constant by `factor`, or sets it to `factor`
    /// if it was zero.
    pub fn mutate(&mut self, index: usize, factor: &Cyclotomic) {
        let apply = |c: &mut Cyclotomic| *c = if c.is_zero() { factor.clone() } else { &*c * factor };
        let mut i = index;
        for part in [&mut self.mult, &mut self.unit, &mut self.counit, &mut self.p, &mut self.q] {
            if i < part.len() {
                apply(&mut part[i]);
                return;
            }
            i -= part.len();
        }
        panic!("structure constant index {index} out of range");
    }

    /// Replaces the involution by `p'(b_j) = Σ_i m[i][j] b_i`.
    pub fn with_involution(&self, m: &[Cyclotomic]) -> Self {
        let mut out = self.clone();
        out.p = m.to_vec();
        out
    }

    pub fn with_crosscap(&self, q: Vector) -> Self {
        let mut out = self.clone();
        out.q = q;
        out
    }
}

fn invert(mut a: Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv()?;
        for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
            *x = &*x * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let s = &f * &a[col][c];
                a[r][c] = &a[r][c] - &s;
                let s = &f * &inv[col][c];
                inv[r][c] = &inv[r][c] - &s;
            }
        }
    }
    Some(inv)
}

fn transpose(m: &Matrix) -> Matrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

fn first_pair(d: usize, mut bad: impl FnMut(usize, usize) -> bool) -> Option<(usize, usize)> {
    (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).find(|&(i, j)| bad(i, j))
}

/// Commutative Frobenius axioms, the involution, and both crosscap
/// constraints, each evaluated on basis elements.
pub fn check_unoriented_frobenius(f: &UnorientedFrobeniusData) -> AxiomReport {
    let d = f.dim;
    let b = |i: usize| f.basis(i);
    let mut report = AxiomReport::default();

    let assoc = (0..d)
        .flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k))))
        .find(|&(i, j, k)| f.mul(&f.mul(&b(i), &b(j)), &b(k)) != f.mul(&b(i), &f.mul(&b(j), &b(k))));
    report.record("associativity", assoc.map(|w| format!("(b_{} b_{}) b_{} differs", w.0, w.1, w.2)));

    let commut = first_pair(d, |i, j| f.mul(&b(i), &b(j)) != f.mul(&b(j), &b(i)));
    report.record("commutativity", commut.map(|w| format!("b_{} b_{} ≠ b_{} b_{}", w.0, w.1, w.1, w.0)));

    let unit = (0..d).find(|&i| f.mul(&f.unit, &b(i)) != b(i) || f.mul(&b(i), &f.unit) != b(i));
    report.record("unit", unit.map(|i| format!("unit fails on b_{i}")));

    let copairing = f.copairing();
    report.record(
        "nondegenerate",
        copairing.is_none().then(|| "the pairing ε(xy) is singular".to_string()),
    );

    let frob = copairing.as_ref().map_or(Some("no comultiplication".to_string()), |dm| {
        let deltas: Vec<Matrix> = (0..d).map(|i| f.comultiply(dm, &b(i))).collect();
        let counit_law = (0..d).find(|&i| {
            (0..d).any(|c| (0..d).map(|a| &f.counit[a] * &deltas[i][a][c]).sum::<Cyclotomic>() != b(i)[c])
        });
        let compat = first_pair(d, |i, j| {
            // Δ(b_i b_j) = (1 ⊗ b_j) Δ(b_i)
            let lhs = f.comultiply(dm, &f.mul(&b(i), &b(j)));
            let rhs: Matrix = (0..d)
                .map(|a| {
                    let row: Vector = deltas[i][a].clone();
                    f.mul(&row, &b(j))
                })
                .collect();
            lhs != rhs
        });
        counit_law
            .map(|i| format!("counit law fails for Δ(b_{i})"))
            .or(compat.map(|w| format!("Δ(b_{0} b_{1}) ≠ (1 ⊗ b_{1}) Δ(b_{0})", w.0, w.1)))
    });
    report.record("frobenius", frob);

    let pb: Vec<Vector> = (0..d).map(|i| f.apply_p(&b(i))).collect();
    let anti = first_pair(d, |i, j| f.apply_p(&f.mul(&b(i), &b(j))) != f.mul(&pb[j], &pb[i]))
        .map(|w| format!("p(b_{0} b_{1}) ≠ p(b_{1}) p(b_{0})", w.0, w.1))
        .or_else(|| (f.apply_p(&f.unit) != f.unit).then(|| "p(1) ≠ 1".to_string()));
    report.record("p_antihomomorphism", anti);

    let coalg = (0..d)
        .find(|&i| f.counit_of(&pb[i]) != f.counit[i])
        .map(|i| format!("ε(p(b_{i})) ≠ ε(b_{i})"))
        .or_else(|| {
            let dm = copairing.as_ref()?;
            let pm: Matrix = (0..d).map(|i| (0..d).map(|j| f.p[i * d + j].clone()).collect()).collect();
            (0..d)
                .find(|&i| {
                    let t = f.comultiply(dm, &b(i));
                    let ptp = mat_mul(&mat_mul(&pm, &t), &transpose(&pm));
                    ptp != transpose(&f.comultiply(dm, &pb[i]))
                })
                .map(|i| format!("(p ⊗ p) Δ(b_{i}) ≠ Δ^cop(p b_{i})"))
        });
    report.record("p_coalgebra", coalg);

    let invol = (0..d).find(|&i| f.apply_p(&pb[i]) != b(i));
    report.record("p_involution", invol.map(|i| format!("p(p(b_{i})) ≠ b_{i}")));

    let lin = (0..d).find(|&i| {
        let qx = f.mul(&f.q, &b(i));
        f.apply_p(&qx) != qx
    });
    report.record("crosscap_linear", lin.map(|i| format!("p(Q b_{i}) ≠ Q b_{i}")));

    let quad = match &copairing {
        None => Some("no comultiplication".to_string()),
        Some(dm) => {
            let mut lhs = vec![Cyclotomic::zero(); d];
            for i in 0..d {
                for j in 0..d {
                    if dm[i][j].is_zero() {
                        continue;
                    }
                    let term = f.mul(&pb[i], &b(j));
                    for (o, v) in lhs.iter_mut().zip(term) {
                        *o = &*o + &(&dm[i][j] * &v);
                    }
                }
            }
            (lhs != f.mul(&f.q, &f.q)).then(|| "m(p ⊗ id)Δ(1) ≠ Q²".to_string())
        }
    };
    report.record("crosscap_quadratic", quad);
    report
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&k| !a[i][k].is_zero() && !b[k][j].is_zero())
                        .map(|k| &a[i][k] * &b[k][j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Elements of `A = ⊕ A_g` with exact coefficients, indexed by G.
struct Sections<'a> {
    t: &'a TuraevAlgebraData,
    mult: Vec<Cyclotomic>,
    reps: Vec<usize>,
    basis: Vec<Vector>,
}

impl Sections<'_> {
    fn mul(&self, x: &[Cyclotomic], y: &[Cyclotomic]) -> Vector {
        let n = x.len();
        let g = self.t.graded_group().even_group();
        let mut out = vec![Cyclotomic::zero(); n];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (c, yc) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let k = g.mul(a, c);
                out[k] = &out[k] + &(&(xa * yc) * &self.mult[a * n + c]);
            }
        }
        out
    }

    fn act(&self, omega: usize, x: &[Cyclotomic]) -> Vector {
        let mut out = vec![Cyclotomic::zero(); x.len()];
        for (g, xg) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let (target, c) = self.t.act(omega, self.t.basis(g));
            out[target] = &out[target] + &(xg * &c.to_cyclotomic());
        }
        out
    }

    /// Coordinates of a flat section in the class-sum basis.
    fn express(&self, x: &[Cyclotomic], what: &str) -> Result<Vector> {
        let coords: Vector = self.reps.iter().map(|&r| x[r].clone()).collect();
        let mut back = vec![Cyclotomic::zero(); x.len()];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, v) in back.iter_mut().zip(b) {
                *o = &*o + &(c * v);
            }
        }
        if back != x {
            return Err(Error::Internal(format!("{what} is not a flat section")));
        }
        Ok(coords)
    }
}

/// Flat sections over the loop groupoid with the involution induced by an
/// odd element and the crosscap section `g ↦ Σ_{ς² = g} Q_ς`.
///
/// The counit is `ε(s) = ⟨s(e)⟩_e/|G|`. The involution is computed for every
/// odd element and must not depend on the choice.
pub fn orbifold(t: &TuraevAlgebraData) -> Result<UnorientedFrobeniusData> {
    let gg = t.graded_group().clone();
    let g = gg.even_group();
    let n = g.order();
    let mult: Vec<Cyclotomic> = (0..n * n)
        .map(|i| t.mul(t.basis(i / n), t.basis(i % n)).1.to_cyclotomic())
        .collect();
    let mut sec = Sections {
        t,
        mult,
        reps: Vec::new(),
        basis: Vec::new(),
    };
    for class in g.conjugacy_classes() {
        let r = class[0];
        let mut s = vec![Cyclotomic::zero(); n];
        for k in g.elements() {
            let (target, c) = t.act(gg.from_even(k), t.basis(r));
            s[target] = &s[target] + &c.to_cyclotomic();
        }
        let Some(norm) = s[r].inv() else { continue };
        sec.reps.push(r);
        sec.basis.push(s.iter().map(|x| x * &norm).collect());
    }
    let d = sec.reps.len();
    let mut mult = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            mult.extend(sec.express(&sec.mul(&sec.basis[i], &sec.basis[j]), "a product of class sums")?);
        }
    }
    let unit = sec.express(
        &(0..n).map(|x| if x == 0 { Cyclotomic::one() } else { Cyclotomic::zero() }).collect::<Vector>(),
        "the unit",
    )?;
    let scale = t.trace_of(t.basis(0)).to_cyclotomic().scale(&BigRational::new(1.into(), (n as i64).into()));
    let counit = sec.basis.iter().map(|b| &b[0] * &scale).collect();

    let mut p: Option<Vec<Cyclotomic>> = None;
    for &s in gg.odd_part() {
        let mut m = vec![Cyclotomic::zero(); d * d];
        for j in 0..d {
            let col = sec.express(&sec.act(s, &sec.basis[j]), "an involuted class sum")?;
            for (i, v) in col.into_iter().enumerate() {
                m[i * d + j] = v;
            }
        }
        match &p {
            None => p = Some(m),
            Some(prev) if *prev != m => {
                return Err(Error::Internal(format!("the involution depends on the odd element {s}")));
            }
            _ => {}
        }
    }
    let p = p.ok_or_else(|| Error::arg("graded group has no odd elements"))?;

    let mut qs = vec![Cyclotomic::zero(); n];
    for &s in gg.odd_part() {
        let (target, c) = t.crosscap(s);
        qs[target] = &qs[target] + &c.to_cyclotomic();
    }
    let q = sec.express(&qs, "the crosscap")?;
    let mut out = UnorientedFrobeniusData::new(d, mult, unit, counit, p, q)?;
    out.labels = sec.reps;
    Ok(out)
}
