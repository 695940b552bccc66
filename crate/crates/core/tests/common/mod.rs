//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use realdw::groups::{group_by_name, FiniteGroup};
use realdw::moduli::Surface;

/// Number of tuples in G satisfying Π[aᵢ,bᵢ] = e or Π aᵢ² = e.
pub fn hom_count(g: &FiniteGroup, surface: Surface) -> usize {
    let n = g.order();
    let gens = surface.generator_count();
    let mut count = 0;
    let mut tuple = vec![0usize; gens];
    loop {
        let word = match surface {
            Surface::Orientable(_) => tuple.chunks(2).fold(0, |acc, ab| {
                let c = g.mul(g.mul(ab[0], ab[1]), g.mul(g.inv(ab[0]), g.inv(ab[1])));
                g.mul(acc, c)
            }),
            Surface::Nonorientable(_) => tuple.iter().fold(0, |acc, &a| g.mul(acc, g.mul(a, a))),
        };
        count += (word == 0) as usize;
        let mut i = 0;
        while i < gens {
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == gens {
            return count;
        }
    }
}

/// Linear characters as exponent vectors in ℤ/m, found by brute force.
pub fn linear_characters(g: &FiniteGroup) -> (usize, Vec<Vec<usize>>) {
    let n = g.order();
    let m = g.elements().map(|x| g.element_order(x)).fold(1, num_integer::lcm);
    let mut out = Vec::new();
    let mut chi = vec![0usize; n];
    loop {
        if g.elements().all(|a| g.elements().all(|b| chi[g.mul(a, b)] == (chi[a] + chi[b]) % m)) {
            out.push(chi.clone());
        }
        let mut i = 1;
        while i < n {
            chi[i] += 1;
            if chi[i] < m {
                break;
            }
            chi[i] = 0;
            i += 1;
        }
        if i == n {
            return (m, out);
        }
    }
}

/// Classical (dim, ν) for every irreducible character. Besides the linear
/// characters, S₃ has the 2-dim character (2, 0, -1) by element order and the
/// order 8 nonabelian groups have (2 at e, -2 at the central involution, 0 else).
pub fn classical_indicators(name: &str) -> Vec<(usize, i8)> {
    let g = group_by_name(name).unwrap();
    let n = g.order();
    let (m, linear) = linear_characters(&g);
    let mut chars: Vec<(usize, Vec<Complex64>)> = linear
        .iter()
        .map(|chi| {
            let vals = chi
                .iter()
                .map(|&k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
                .collect();
            (1, vals)
        })
        .collect();
    match name {
        "S3" => chars.push((
            2,
            g.elements()
                .map(|x| match g.element_order(x) {
                    1 => 2.0,
                    2 => 0.0,
                    _ => -1.0,
                })
                .map(|v| Complex64::new(v, 0.0))
                .collect(),
        )),
        "Q8" | "D8" => {
            let z = g.center()[1];
            chars.push((
                2,
                g.elements()
                    .map(|x| Complex64::new(if x == 0 { 2.0 } else if x == z { -2.0 } else { 0.0 }, 0.0))
                    .collect(),
            ));
        }
        _ => {}
    }
    assert_eq!(chars.iter().map(|(d, _)| d * d).sum::<usize>(), n, "{name} table incomplete");
    let mut out: Vec<(usize, i8)> = chars
        .iter()
        .map(|(d, chi)| {
            let s: Complex64 = g.elements().map(|x| chi[g.mul(x, x)]).sum::<Complex64>() / n as f64;
            assert!(s.im.abs() < 1e-9 && (s.re - s.re.round()).abs() < 1e-9);
            (*d, s.re.round() as i8)
        })
        .collect();
    out.sort();
    out
}
