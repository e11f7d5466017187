//! Two small groups whose coprime automorphisms leave a complemented normal
//! subgroup without any invariant complement.
//!
//! Elements use bespoke encodings that follow the textbook constructions
//! rather than permutation representations.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use std::ops::{Mul, Neg};

use crate::oracle::{bfs_closure, GroupOps, IndexedGroup, OracleError, Sub};

/// `±1, ±i, ±j, ±k` as `sign·4 + unit`, units ordered `1, i, j, k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quaternion(u8);

impl Quaternion {
    pub const ONE: Quaternion = Quaternion(0);

    pub fn new(negative: bool, unit: u8) -> Quaternion {
        debug_assert!(unit < 4);
        Quaternion(negative as u8 * 4 + unit)
    }

    pub fn negative(self) -> bool {
        self.0 >= 4
    }

    pub fn unit(self) -> u8 {
        self.0 % 4
    }

    /// `i ↦ j ↦ k ↦ i`.
    pub fn rotate(self) -> Quaternion {
        let unit = match self.unit() {
            0 => 0,
            u => u % 3 + 1,
        };
        Quaternion::new(self.negative(), unit)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion((self.0 + 4) % 8)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, other: Quaternion) -> Quaternion {
        let (a, b) = (self.unit(), other.unit());
        let (flip, unit) = match (a, b) {
            (0, u) | (u, 0) => (false, u),
            _ if a == b => (true, 0),
            // i·j = k, j·k = i, k·i = j; reversed order negates.
            _ => {
                let third = 6 - a - b;
                (b != a % 3 + 1, third)
            }
        };
        Quaternion::new(self.negative() ^ other.negative() ^ flip, unit)
    }
}

/// An element `q·x^f` of `Q_8 * C_4`, with `x` central and `x² = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q8C4Elem {
    pub q: Quaternion,
    pub x: bool,
}

impl Q8C4Elem {
    pub fn label(&self) -> String {
        let sign = if self.q.negative() { "-" } else { "" };
        let unit = ["1", "i", "j", "k"][self.q.unit() as usize];
        match (self.x, self.q.unit()) {
            (true, 0) => format!("{sign}x"),
            (true, _) => format!("{sign}{unit}x"),
            (false, _) => format!("{sign}{unit}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Q8C4;

impl GroupOps for Q8C4 {
    type Elem = Q8C4Elem;

    fn identity(&self) -> Q8C4Elem {
        Q8C4Elem {
            q: Quaternion::ONE,
            x: false,
        }
    }

    fn mul(&self, a: &Q8C4Elem, b: &Q8C4Elem) -> Q8C4Elem {
        let q = a.q.mul(b.q);
        Q8C4Elem {
            q: if a.x && b.x { q.neg() } else { q },
            x: a.x ^ b.x,
        }
    }

    fn inv(&self, a: &Q8C4Elem) -> Q8C4Elem {
        let q = if a.q.unit() == 0 { a.q } else { a.q.neg() };
        Q8C4Elem {
            q: if a.x { q.neg() } else { q },
            x: a.x,
        }
    }
}

/// `φ`: the 3-cycle `(i j k)` on the generators, fixing `x`.
pub fn phi(a: &Q8C4Elem) -> Q8C4Elem {
    Q8C4Elem {
        q: a.q.rotate(),
        x: a.x,
    }
}

/// An element `(v, x^t)` of `(Z/9)² ⋊ C_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mod9Elem {
    pub v: [u8; 2],
    pub t: u8,
}

/// `(Z/9)² ⋊ ⟨x⟩` with `x` acting by `[[1, −3], [1, −2]]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Mod9;

const A: [[u8; 2]; 2] = [[1, 6], [1, 7]];

fn mat_mul(a: [[u8; 2]; 2], b: [[u8; 2]; 2]) -> [[u8; 2]; 2] {
    let mut out = [[0u8; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = ((a[r][0] as u32 * b[0][c] as u32 + a[r][1] as u32 * b[1][c] as u32) % 9) as u8;
        }
    }
    out
}

fn a_power(s: u8) -> [[u8; 2]; 2] {
    (0..s % 3).fold([[1, 0], [0, 1]], |acc, _| mat_mul(acc, A))
}

fn act(m: [[u8; 2]; 2], v: [u8; 2]) -> [u8; 2] {
    [
        ((m[0][0] as u32 * v[0] as u32 + m[0][1] as u32 * v[1] as u32) % 9) as u8,
        ((m[1][0] as u32 * v[0] as u32 + m[1][1] as u32 * v[1] as u32) % 9) as u8,
    ]
}

fn neg9(v: [u8; 2]) -> [u8; 2] {
    [(9 - v[0]) % 9, (9 - v[1]) % 9]
}

impl GroupOps for Mod9 {
    type Elem = Mod9Elem;

    fn identity(&self) -> Mod9Elem {
        Mod9Elem { v: [0, 0], t: 0 }
    }

    fn mul(&self, a: &Mod9Elem, b: &Mod9Elem) -> Mod9Elem {
        let w = act(a_power(a.t), b.v);
        Mod9Elem {
            v: [(a.v[0] + w[0]) % 9, (a.v[1] + w[1]) % 9],
            t: (a.t + b.t) % 3,
        }
    }

    fn inv(&self, a: &Mod9Elem) -> Mod9Elem {
        let t = (3 - a.t) % 3;
        Mod9Elem {
            v: neg9(act(a_power(t), a.v)),
            t,
        }
    }
}

/// `α(v, x^t) = (−v, x^t)`.
pub fn alpha(a: &Mod9Elem) -> Mod9Elem {
    Mod9Elem {
        v: neg9(a.v),
        t: a.t,
    }
}

fn is_automorphism<G: GroupOps>(g: &IndexedGroup<G>, f: &dyn Fn(&G::Elem) -> G::Elem) -> bool {
    let image: Vec<Option<usize>> = (0..g.order())
        .map(|i| g.index_of(&f(g.element(i))))
        .collect();
    if image.iter().any(Option::is_none) {
        return false;
    }
    let image: Vec<usize> = image.into_iter().map(Option::unwrap).collect();
    let mut hit = FixedBitSet::with_capacity(g.order());
    image.iter().for_each(|&i| hit.insert(i));
    hit.count_ones(..) == g.order()
        && (0..g.order())
            .all(|a| (0..g.order()).all(|b| image[g.mul(a, b)] == g.mul(image[a], image[b])))
}

fn map_sub<G: GroupOps>(
    g: &IndexedGroup<G>,
    h: &Sub,
    f: &dyn Fn(&G::Elem) -> G::Elem,
) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(g.order());
    for i in h.iter() {
        bits.insert(g.index_of(&f(g.element(i))).expect("automorphism"));
    }
    bits
}

/// Cycle lengths, sorted, of the permutation `f` induces on `subs`.
fn orbit_type<G: GroupOps>(
    g: &IndexedGroup<G>,
    subs: &[Sub],
    f: &dyn Fn(&G::Elem) -> G::Elem,
) -> Vec<usize> {
    let targets: Vec<Option<usize>> = subs
        .iter()
        .map(|s| {
            let img = map_sub(g, s, f);
            subs.iter().position(|t| t.bits == img)
        })
        .collect();
    let mut seen = vec![false; subs.len()];
    let mut lengths = Vec::new();
    for start in 0..subs.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            len += 1;
            match targets[k] {
                Some(next) => k = next,
                None => break,
            }
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Q8C4Report {
    pub order: usize,
    pub n_order: usize,
    pub n_normal: bool,
    pub n_phi_invariant: bool,
    pub phi_is_automorphism: bool,
    pub phi_order: usize,
    pub complement_count: usize,
    /// The involution generating each complement.
    pub complement_generators: Vec<String>,
    pub orbit_type: Vec<usize>,
    pub invariant_complements: usize,
    pub maschke_fails: bool,
}

pub fn gallery_q8c4() -> Result<Q8C4Report, OracleError> {
    let ops = Q8C4;
    let gens = [
        Q8C4Elem {
            q: Quaternion::new(false, 1),
            x: false,
        },
        Q8C4Elem {
            q: Quaternion::new(false, 2),
            x: false,
        },
        Q8C4Elem {
            q: Quaternion::new(false, 3),
            x: false,
        },
        Q8C4Elem {
            q: Quaternion::ONE,
            x: true,
        },
    ];
    let set = bfs_closure(&ops, &gens, 64)?;
    let g = IndexedGroup::new(ops, &set)?;
    let n_gens: Vec<usize> = gens[..3].iter().map(|e| g.index_of(e).unwrap()).collect();
    let n = g.closure(&n_gens);
    let phi_order = (1..=6)
        .find(|&k| {
            (0..g.order()).all(|i| {
                let e = *g.element(i);
                (0..k).fold(e, |acc, _| phi(&acc)) == e
            })
        })
        .unwrap_or(0);
    let complements = g.complements(&n);
    let complement_generators = complements
        .iter()
        .map(|c| {
            let gen = c.iter().find(|&i| i != g.identity()).expect("order two");
            g.element(gen).label()
        })
        .collect();
    let invariant_complements = complements
        .iter()
        .filter(|c| map_sub(&g, c, &phi) == c.bits)
        .count();
    Ok(Q8C4Report {
        order: g.order(),
        n_order: n.order(),
        n_normal: g.is_normal(&n),
        n_phi_invariant: map_sub(&g, &n, &phi) == n.bits,
        phi_is_automorphism: is_automorphism(&g, &phi),
        phi_order,
        complement_count: complements.len(),
        complement_generators,
        orbit_type: orbit_type(&g, &complements, &phi),
        invariant_complements,
        maschke_fails: !complements.is_empty() && invariant_complements == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod9Report {
    pub order: usize,
    pub a_cubed_is_identity: bool,
    /// The derived subgroup is `{(v, 1) : v_1 ∈ 3Z/9Z}`.
    pub derived_matches: bool,
    pub derived_order: usize,
    pub n_order: usize,
    pub n_normal: bool,
    pub n_alpha_invariant: bool,
    pub alpha_is_automorphism: bool,
    pub all_vx_order_three: bool,
    pub complement_count: usize,
    /// Every complement is `C_v = ⟨(v, x)⟩` with `v ∉ V'`.
    pub all_complements_are_cv: bool,
    /// `α(C_v) = C_{−v}` for every complement.
    pub alpha_negates: bool,
    pub alpha_invariant_complements: usize,
    pub maschke_fails: bool,
}

pub fn gallery_mod9() -> Result<Mod9Report, OracleError> {
    let ops = Mod9;
    let gens = [
        Mod9Elem { v: [1, 0], t: 0 },
        Mod9Elem { v: [0, 1], t: 0 },
        Mod9Elem { v: [0, 0], t: 1 },
    ];
    let set = bfs_closure(&ops, &gens, 1024)?;
    let g = IndexedGroup::new(ops, &set)?;
    let derived = g.derived_subgroup();
    let in_vprime = |e: &Mod9Elem| e.t == 0 && e.v[0].is_multiple_of(3);
    let derived_matches = (0..g.order()).all(|i| derived.contains(i) == in_vprime(g.element(i)));
    let x = g.index_of(&gens[2]).unwrap();
    let mut n_seeds = derived.gens.clone();
    n_seeds.push(x);
    let n = g.closure(&n_seeds);
    let all_vx_order_three = (0..g.order())
        .filter(|&i| g.element(i).t == 1)
        .all(|i| g.elem_order(i) == 3);
    let complements = g.complements(&n);
    // The unique element with t = 1 in each complement.
    let reps: Vec<Option<Mod9Elem>> = complements
        .iter()
        .map(|c| {
            let ones: Vec<Mod9Elem> = c
                .iter()
                .map(|i| *g.element(i))
                .filter(|e| e.t == 1)
                .collect();
            (ones.len() == 1).then(|| ones[0])
        })
        .collect();
    let all_complements_are_cv = reps.iter().all(|r| matches!(r, Some(e) if e.v[0] % 3 != 0));
    let alpha_negates = complements.iter().zip(&reps).all(|(c, r)| {
        let Some(e) = r else { return false };
        let image = map_sub(&g, c, &alpha);
        let target = Mod9Elem { v: neg9(e.v), t: 1 };
        image.contains(g.index_of(&target).unwrap())
    });
    let alpha_invariant_complements = complements
        .iter()
        .filter(|c| map_sub(&g, c, &alpha) == c.bits)
        .count();
    Ok(Mod9Report {
        order: g.order(),
        a_cubed_is_identity: a_power(3) == [[1, 0], [0, 1]]
            && mat_mul(mat_mul(A, A), A) == [[1, 0], [0, 1]],
        derived_matches,
        derived_order: derived.order(),
        n_order: n.order(),
        n_normal: g.is_normal(&n),
        n_alpha_invariant: map_sub(&g, &n, &alpha) == n.bits,
        alpha_is_automorphism: is_automorphism(&g, &alpha),
        all_vx_order_three,
        complement_count: complements.len(),
        all_complements_are_cv,
        alpha_negates,
        alpha_invariant_complements,
        maschke_fails: !complements.is_empty() && alpha_invariant_complements == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_rules() {
        let i = Quaternion::new(false, 1);
        let j = Quaternion::new(false, 2);
        let k = Quaternion::new(false, 3);
        assert_eq!(i.mul(j), k);
        assert_eq!(j.mul(k), i);
        assert_eq!(k.mul(i), j);
        assert_eq!(j.mul(i), k.neg());
        assert_eq!(i.mul(i), Quaternion::ONE.neg());
        assert_eq!(i.mul(j).mul(k), Quaternion::ONE.neg());
        assert_eq!(i.rotate(), j);
        assert_eq!(k.neg().rotate(), i.neg());
    }

    #[test]
    fn q8c4() {
        let rep = gallery_q8c4().unwrap();
        assert_eq!(rep.order, 16);
        assert_eq!(rep.n_order, 8);
        assert!(rep.n_normal && rep.n_phi_invariant && rep.phi_is_automorphism);
        assert_eq!(rep.phi_order, 3);
        assert_eq!(rep.complement_count, 6);
        let mut labels = rep.complement_generators.clone();
        labels.sort();
        assert_eq!(labels, ["-ix", "-jx", "-kx", "ix", "jx", "kx"]);
        assert_eq!(rep.orbit_type, [3, 3]);
        assert_eq!(rep.invariant_complements, 0);
        assert!(rep.maschke_fails);
    }

    #[test]
    fn mod9() {
        let rep = gallery_mod9().unwrap();
        assert_eq!(rep.order, 243);
        assert!(rep.a_cubed_is_identity);
        assert!(rep.derived_matches);
        assert_eq!(rep.derived_order, 27);
        assert_eq!(rep.n_order, 81);
        assert!(rep.n_normal && rep.n_alpha_invariant && rep.alpha_is_automorphism);
        assert!(rep.all_vx_order_three);
        assert_eq!(rep.complement_count, 54);
        assert!(rep.all_complements_are_cv && rep.alpha_negates);
        assert_eq!(rep.alpha_invariant_complements, 0);
        assert!(rep.maschke_fails);
    }
}
