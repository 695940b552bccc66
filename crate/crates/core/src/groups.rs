//! Finite groups given by dense multiplication tables, their ℤ₂-gradings, and
//! a small catalog of named groups.
//!
//! Elements are always the indices `0..order`, and index 0 is the identity.
//! Every other module works with these indices only.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on group orders accepted by the constructors.
pub const DEFAULT_ORDER_CAP: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates `rows` as a group multiplication table with identity at index 0.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with_cap(name, rows, DEFAULT_ORDER_CAP)
    }

    pub fn from_table_with_cap(
        name: impl Into<String>,
        rows: Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::GroupAxiom {
                axiom: "nonempty",
                witness: vec![],
            });
        }
        if n > cap {
            return Err(Error::Resource {
                what: "group order".into(),
                needed: n as u128,
                limit: cap as u128,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::GroupAxiom {
                    axiom: "square table",
                    witness: vec![a],
                });
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(Error::GroupAxiom {
                        axiom: "closure",
                        witness: vec![a, b, c],
                    });
                }
            }
            table.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| table[a * n + b];
        for x in 0..n {
            if at(0, x) != x || at(x, 0) != x {
                return Err(Error::GroupAxiom {
                    axiom: "identity at index 0",
                    witness: vec![x],
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::GroupAxiom {
                            axiom: "associativity",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == 0) {
                Some(b) if at(b, a) == 0 => inverse[a] = b,
                _ => {
                    return Err(Error::GroupAxiom {
                        axiom: "inverses",
                        witness: vec![a],
                    })
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            order: n,
            table,
            inverse,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    /// `h g h⁻¹`
    #[inline]
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Same multiplication table, ignoring names.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.table == other.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.commute(a, b)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.commute(z, g)))
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = self.elements().map(|h| self.conj(h, g)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Smallest subgroup containing `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// A small generating set found greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![0usize];
        for g in self.elements() {
            if sub.binary_search(&g).is_err() {
                gens.push(g);
                sub = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    /// Builds the subgroup on `elements` (sorted, containing 0) with elements
    /// re-indexed by their position in the slice.
    pub fn subgroup(&self, name: impl Into<String>, elements: &[usize]) -> Result<FiniteGroup> {
        let pos = |x: usize| elements.binary_search(&x).ok();
        let rows = elements
            .iter()
            .map(|&a| {
                elements
                    .iter()
                    .map(|&b| {
                        pos(self.mul(a, b)).ok_or(Error::GroupAxiom {
                            axiom: "subgroup closure",
                            witness: vec![a, b],
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table_with_cap(name, rows, usize::MAX)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            name: self.name.clone(),
            order: self.order,
            table: self.rows(),
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

/// `{"name": .., "order": n, "table": [[..]]}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn into_group(self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::arg(format!(
                "declared order {} but table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        FiniteGroup::from_table(self.name, self.table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Dihedral group of the given order (`2n`).
    Dihedral(usize),
    Quaternion8,
    Symmetric(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    Table { name: String, rows: Vec<Vec<usize>> },
}

impl GroupSpec {
    /// Parses catalog names such as `C4`, `D8`, `Q8`, `S3`, `C2xC2`, `Q8xC2`.
    pub fn parse(name: &str) -> Result<GroupSpec> {
        let name = name.trim();
        let parts: Vec<&str> = name.split('x').collect();
        if parts.len() > 1 {
            let mut specs = parts.iter().map(|p| Self::parse_atom(p, name));
            let first = specs.next().expect("split yields one part")?;
            return specs.try_fold(first, |acc, s| {
                Ok(GroupSpec::DirectProduct(Box::new(acc), Box::new(s?)))
            });
        }
        Self::parse_atom(name, name)
    }

    fn parse_atom(atom: &str, whole: &str) -> Result<GroupSpec> {
        let unknown = || Error::UnknownGroup(whole.to_string());
        if atom == "Q8" {
            return Ok(GroupSpec::Quaternion8);
        }
        if atom == "1" {
            return Ok(GroupSpec::Cyclic(1));
        }
        let (head, digits) = atom.split_at(atom.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
        let n: usize = digits.parse().map_err(|_| unknown())?;
        match head {
            "C" | "Z" if n >= 1 => Ok(GroupSpec::Cyclic(n)),
            "D" if n >= 2 && n % 2 == 0 => Ok(GroupSpec::Dihedral(n)),
            "S" if (1..=4).contains(&n) => Ok(GroupSpec::Symmetric(n)),
            _ => Err(unknown()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::Cyclic(n) => format!("C{n}"),
            GroupSpec::Dihedral(n) => format!("D{n}"),
            GroupSpec::Quaternion8 => "Q8".into(),
            GroupSpec::Symmetric(n) => format!("S{n}"),
            GroupSpec::DirectProduct(a, b) => format!("{}x{}", a.name(), b.name()),
            GroupSpec::Table { name, .. } => name.clone(),
        }
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    build_group_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn build_group_with_cap(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    let name = spec.name();
    let rows = match spec {
        GroupSpec::Cyclic(n) => cyclic_rows(*n),
        GroupSpec::Dihedral(n) => dihedral_rows(*n / 2),
        GroupSpec::Quaternion8 => quaternion_rows(),
        GroupSpec::Symmetric(n) => {
            if *n > 4 {
                return Err(Error::arg("symmetric groups are limited to n <= 4"));
            }
            symmetric_rows(*n)
        }
        GroupSpec::DirectProduct(a, b) => {
            let a = build_group_with_cap(a, cap)?;
            let b = build_group_with_cap(b, cap)?;
            return direct_product(&a, &b, cap);
        }
        GroupSpec::Table { rows, .. } => rows.clone(),
    };
    if rows.len() > cap {
        return Err(Error::Resource {
            what: format!("order of {name}"),
            needed: rows.len() as u128,
            limit: cap as u128,
        });
    }
    FiniteGroup::from_table_with_cap(name, rows, cap)
}

/// Looks up a catalog name and builds the group.
pub fn group_by_name(name: &str) -> Result<FiniteGroup> {
    build_group(&GroupSpec::parse(name)?)
}

/// `(a, b) ↦ a·|B| + b`, so the identity stays at 0.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
    let (na, nb) = (a.order(), b.order());
    if na * nb > cap {
        return Err(Error::Resource {
            what: format!("order of {}x{}", a.name(), b.name()),
            needed: (na * nb) as u128,
            limit: cap as u128,
        });
    }
    let rows = (0..na * nb)
        .map(|x| {
            (0..na * nb)
                .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                .collect()
        })
        .collect();
    FiniteGroup::from_table_with_cap(format!("{}x{}", a.name(), b.name()), rows, cap)
}

fn cyclic_rows(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

// r^i s^j ↦ i + n j
fn dihedral_rows(n: usize) -> Vec<Vec<usize>> {
    let idx = |i: usize, j: usize| i + n * j;
    let mut rows = vec![vec![0; 2 * n]; 2 * n];
    for a in 0..n {
        for b in 0..2 {
            for c in 0..n {
                for d in 0..2 {
                    let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                    rows[idx(a, b)][idx(c, d)] = idx(rot, (b + d) % 2);
                }
            }
        }
    }
    rows
}

// index 2u + s for ±{1, i, j, k}, s = 1 meaning the negative sign
fn quaternion_rows() -> Vec<Vec<usize>> {
    // unit products: (unit, negated)
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, neg) = UNIT[x / 2][y / 2];
                    let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
                    2 * u + sign as usize
                })
                .collect()
        })
        .collect()
}

/// Permutations of `0..n` in lexicographic order (identity first).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

// (a∘b)(i) = a(b(i))
fn symmetric_rows(n: usize) -> Vec<Vec<usize>> {
    let perms = permutations(n);
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
    perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| index(&b.iter().map(|&i| a[i]).collect()))
                .collect()
        })
        .collect()
}

/// A finite group together with a surjective sign homomorphism to {±1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGroup {
    group: FiniteGroup,
    sign: Vec<i8>,
    even_part: Vec<usize>,
    odd_part: Vec<usize>,
    even_group: FiniteGroup,
    even_index: Vec<Option<usize>>,
}

impl GradedGroup {
    pub fn new(group: FiniteGroup, sign: Vec<i8>) -> Result<Self> {
        let n = group.order();
        if sign.len() != n {
            return Err(Error::arg(format!(
                "sign vector has length {}, group order is {n}",
                sign.len()
            )));
        }
        if let Some(x) = sign.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::GroupAxiom {
                axiom: "sign values in {+1,-1}",
                witness: vec![x],
            });
        }
        for a in 0..n {
            for b in 0..n {
                if sign[group.mul(a, b)] != sign[a] * sign[b] {
                    return Err(Error::GroupAxiom {
                        axiom: "sign is a homomorphism",
                        witness: vec![a, b],
                    });
                }
            }
        }
        let even_part: Vec<usize> = (0..n).filter(|&x| sign[x] == 1).collect();
        let odd_part: Vec<usize> = (0..n).filter(|&x| sign[x] == -1).collect();
        if odd_part.is_empty() {
            return Err(Error::GroupAxiom {
                axiom: "sign is surjective",
                witness: vec![],
            });
        }
        let even_group = group.subgroup(format!("ker({})", group.name()), &even_part)?;
        let mut even_index = vec![None; n];
        for (i, &g) in even_part.iter().enumerate() {
            even_index[g] = Some(i);
        }
        Ok(GradedGroup {
            group,
            sign,
            even_part,
            odd_part,
            even_group,
            even_index,
        })
    }

    /// `G × ℤ₂` graded by projection onto the second factor.
    pub fn split(g: &FiniteGroup) -> Result<Self> {
        let c2 = build_group(&GroupSpec::Cyclic(2))?;
        let prod = direct_product(g, &c2, DEFAULT_ORDER_CAP)?;
        let sign = (0..prod.order())
            .map(|x| if x % 2 == 0 { 1 } else { -1 })
            .collect();
        GradedGroup::new(prod, sign)
    }

    /// The whole group Ĝ.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn sign(&self, x: usize) -> i8 {
        self.sign[x]
    }

    pub fn signs(&self) -> &[i8] {
        &self.sign
    }

    #[inline]
    pub fn is_even(&self, x: usize) -> bool {
        self.sign[x] == 1
    }

    /// Sorted indices of G = ker π inside Ĝ.
    pub fn even_part(&self) -> &[usize] {
        &self.even_part
    }

    /// Sorted indices of Ĝ∖G.
    pub fn odd_part(&self) -> &[usize] {
        &self.odd_part
    }

    /// G as a group in its own right; element `i` is `even_part()[i]`.
    pub fn even_group(&self) -> &FiniteGroup {
        &self.even_group
    }

    /// Position of an even element of Ĝ inside `even_group()`.
    #[inline]
    pub fn to_even(&self, x: usize) -> Option<usize> {
        self.even_index[x]
    }

    #[inline]
    pub fn from_even(&self, i: usize) -> usize {
        self.even_part[i]
    }

    /// `h g^{π(h)} h⁻¹` without the parity check on `g`.
    #[inline]
    pub fn act(&self, h: usize, g: usize) -> usize {
        let gg = if self.sign[h] == 1 { g } else { self.group.inv(g) };
        self.group.conj(h, gg)
    }

    /// Real conjugation of an even element `g` by any `h ∈ Ĝ`.
    pub fn real_conjugate(&self, h: usize, g: usize) -> Result<usize> {
        if !self.is_even(g) {
            return Err(Error::arg(format!("real_conjugate: element {g} is odd")));
        }
        Ok(self.act(h, g))
    }

    /// `{ς ∈ Ĝ∖G : ς² = g}`
    pub fn odd_square_roots(&self, g: usize) -> Vec<usize> {
        self.odd_part
            .iter()
            .copied()
            .filter(|&s| self.group.mul(s, s) == g)
            .collect()
    }

    /// True when some odd element squares to the identity.
    pub fn is_split(&self) -> bool {
        !self.odd_square_roots(0).is_empty()
    }

    pub fn to_json(&self) -> GradingJson {
        GradingJson {
            group: self.group.name().to_string(),
            sign: self.sign.clone(),
        }
    }
}

/// `{"group": name, "sign": [±1; n]}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GradingJson {
    pub group: String,
    pub sign: Vec<i8>,
}

/// All surjective homomorphisms Ĝ → {±1}, ordered lexicographically by sign vector.
pub fn enumerate_gradings(group: &FiniteGroup) -> Vec<GradedGroup> {
    let gens = group.generators();
    let n = group.order();
    let mut signs: Vec<Vec<i8>> = Vec::new();
    for mask in 0u64..(1u64 << gens.len()) {
        let gen_sign: Vec<i8> = (0..gens.len())
            .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        if gen_sign.iter().all(|&s| s == 1) {
            continue;
        }
        // propagate along right multiplication by generators
        let mut sign = vec![0i8; n];
        sign[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        let mut consistent = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for (i, &g) in gens.iter().enumerate() {
                let y = group.mul(x, g);
                let s = sign[x] * gen_sign[i];
                if sign[y] == 0 {
                    sign[y] = s;
                    queue.push_back(y);
                } else if sign[y] != s {
                    consistent = false;
                    break 'bfs;
                }
            }
        }
        if !consistent {
            continue;
        }
        let is_hom = (0..n).all(|a| (0..n).all(|b| sign[group.mul(a, b)] == sign[a] * sign[b]));
        if is_hom {
            signs.push(sign);
        }
    }
    signs.sort();
    signs.dedup();
    signs
        .into_iter()
        .map(|s| GradedGroup::new(group.clone(), s).expect("validated homomorphism"))
        .collect()
}
