use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use fixedbitset::FixedBitSet;

use super::OracleError;
use crate::perm::Perm;

/// Multiplication, inversion and identity for some element encoding.
pub trait GroupOps {
    type Elem: Clone + Eq + Hash + Ord + Debug;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// Permutations of a fixed degree, composed right to left.
#[derive(Debug, Clone, Copy)]
pub struct SymOps {
    pub degree: usize,
}

impl GroupOps for SymOps {
    type Elem = Perm;

    fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a.mul(b)
    }

    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }
}

/// A finite group stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSet<E> {
    elements: Vec<E>,
    generators: Vec<E>,
}

impl<E: Ord> GroupSet<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn contains(&self, x: &E) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

pub fn bfs_closure<G: GroupOps>(
    ops: &G,
    generators: &[G::Elem],
    cap: usize,
) -> Result<GroupSet<G::Elem>, OracleError> {
    let id = ops.identity();
    let mut seen: HashSet<G::Elem> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = ops.mul(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(OracleError::CapExceeded { cap });
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<G::Elem> = seen.into_iter().collect();
    elements.sort();
    Ok(GroupSet {
        elements,
        generators: generators.to_vec(),
    })
}

/// A subgroup of an [`IndexedGroup`]: membership bits plus generators.
#[derive(Debug, Clone)]
pub struct Sub {
    pub bits: FixedBitSet,
    pub gens: Vec<usize>,
}

impl Sub {
    pub fn order(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn is_subset(&self, other: &Sub) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }
}

impl PartialEq for Sub {
    fn eq(&self, other: &Sub) -> bool {
        self.bits == other.bits
    }
}

impl Eq for Sub {}

pub const MAX_TABLE: usize = 4096;

/// A group small enough for a full Cayley table.
pub struct IndexedGroup<G: GroupOps> {
    ops: G,
    elements: Vec<G::Elem>,
    index: HashMap<G::Elem, usize>,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
}

impl<G: GroupOps> IndexedGroup<G> {
    pub fn new(ops: G, set: &GroupSet<G::Elem>) -> Result<IndexedGroup<G>, OracleError> {
        let n = set.len();
        if n > MAX_TABLE {
            return Err(OracleError::CapExceeded { cap: MAX_TABLE });
        }
        let elements = set.elements.clone();
        let index: HashMap<G::Elem, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&ops.mul(a, b)] as u32);
            }
        }
        let inverse = elements.iter().map(|a| index[&ops.inv(a)] as u32).collect();
        let identity = index[&ops.identity()];
        let generators = set.generators.iter().map(|g| index[g]).collect();
        Ok(IndexedGroup {
            ops,
            elements,
            index,
            table,
            inverse,
            identity,
            generators,
        })
    }

    pub fn ops(&self) -> &G {
        &self.ops
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &G::Elem {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &G::Elem) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Sub {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert_range(..);
        Sub {
            bits,
            gens: self.generators.clone(),
        }
    }

    pub fn trivial(&self) -> Sub {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(self.identity);
        Sub {
            bits,
            gens: Vec::new(),
        }
    }

    pub fn closure(&self, gens: &[usize]) -> Sub {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(self.identity);
        let mut queue = VecDeque::from([self.identity]);
        let gens: Vec<usize> = gens
            .iter()
            .copied()
            .filter(|&g| g != self.identity)
            .collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !bits.put(y) {
                    queue.push_back(y);
                }
            }
        }
        Sub { bits, gens }
    }

    /// `⟨H, x⟩`.
    pub fn extend(&self, h: &Sub, x: usize) -> Sub {
        if h.contains(x) {
            return h.clone();
        }
        let mut gens = h.gens.clone();
        gens.push(x);
        self.closure(&gens)
    }

    pub fn from_predicate(&self, keep: impl Fn(&G::Elem) -> bool) -> Option<Sub> {
        let members: Vec<usize> = (0..self.order())
            .filter(|&i| keep(&self.elements[i]))
            .collect();
        let sub = self.closure(&self.generating_subset(&members));
        (sub.order() == members.len()).then_some(sub)
    }

    /// A generating set of the subgroup `members`, chosen greedily in the
    /// given order.
    pub fn generating_subset(&self, members: &[usize]) -> Vec<usize> {
        let mut sub = self.trivial();
        let mut gens = Vec::new();
        for &m in members {
            if !sub.contains(m) {
                gens.push(m);
                sub = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_normal(&self, h: &Sub) -> bool {
        self.generators
            .iter()
            .all(|&g| h.gens.iter().all(|&x| h.contains(self.conj(x, g))))
    }

    pub fn normal_closure(&self, seeds: &[usize]) -> Sub {
        let mut h = self.closure(seeds);
        loop {
            let missing = self.generators.iter().find_map(|&g| {
                h.gens
                    .iter()
                    .map(|&x| self.conj(x, g))
                    .find(|&c| !h.contains(c))
            });
            match missing {
                Some(c) => h = self.extend(&h, c),
                None => return h,
            }
        }
    }

    /// `[H, K]`, generated by all commutators of elements.
    pub fn commutator(&self, h: &Sub, k: &Sub) -> Sub {
        let mut out = self.trivial();
        for a in h.iter() {
            for b in k.iter() {
                let c = self.comm(a, b);
                if !out.contains(c) {
                    out = self.extend(&out, c);
                }
            }
        }
        out
    }

    pub fn derived_subgroup(&self) -> Sub {
        let g = self.whole();
        self.commutator(&g, &g)
    }

    /// `C_G(H)`.
    pub fn centralizer(&self, h: &Sub) -> Sub {
        let members: Vec<usize> = (0..self.order())
            .filter(|&x| h.gens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
            .collect();
        self.closure(&self.generating_subset(&members))
    }

    pub fn center(&self) -> Sub {
        self.centralizer(&self.whole())
    }

    pub fn intersection(&self, a: &Sub, b: &Sub) -> Sub {
        let mut bits = a.bits.clone();
        bits.intersect_with(&b.bits);
        let members: Vec<usize> = bits.ones().collect();
        Sub {
            gens: self.generating_subset(&members),
            bits,
        }
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.order());
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if seen.contains(x) {
                continue;
            }
            let mut class = vec![x];
            seen.insert(x);
            let mut k = 0;
            while k < class.len() {
                let y = class[k];
                for &g in &self.generators {
                    let c = self.conj(y, g);
                    if !seen.put(c) {
                        class.push(c);
                    }
                }
                k += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Every normal subgroup, sorted by order and then by membership bits.
    pub fn normal_subgroups(&self) -> Vec<Sub> {
        let reps: Vec<usize> = self.conjugacy_classes().iter().map(|c| c[0]).collect();
        let start = self.trivial();
        let mut seen: HashSet<FixedBitSet> = HashSet::from([start.bits.clone()]);
        let mut found = vec![start];
        let mut k = 0;
        while k < found.len() {
            let n = found[k].clone();
            for &r in &reps {
                if n.contains(r) {
                    continue;
                }
                let mut seeds = n.gens.clone();
                seeds.push(r);
                let m = self.normal_closure(&seeds);
                if seen.insert(m.bits.clone()) {
                    found.push(m);
                }
            }
            k += 1;
        }
        found.sort_by(|a, b| (a.order(), &a.bits).cmp(&(b.order(), &b.bits)));
        found
    }

    fn product_bits(&self, s: &Sub, n: &Sub) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for a in s.iter() {
            for b in n.iter() {
                bits.insert(self.mul(a, b));
            }
        }
        bits
    }

    fn meets_trivially(&self, a: &Sub, b: &Sub) -> bool {
        a.bits.intersection(&b.bits).count() == 1
    }

    fn complement_search(
        &self,
        n: &Sub,
        s: Sub,
        target: usize,
        visited: &mut HashSet<FixedBitSet>,
        found: &mut Vec<Sub>,
        first_only: bool,
    ) {
        if s.order() == target {
            found.push(s);
            return;
        }
        let covered = self.product_bits(&s, n);
        let Some(x) = (0..self.order()).find(|&x| !covered.contains(x)) else {
            return;
        };
        for m in n.iter() {
            if first_only && !found.is_empty() {
                return;
            }
            let next = self.extend(&s, self.mul(x, m));
            if !target.is_multiple_of(next.order()) || !self.meets_trivially(&next, n) {
                continue;
            }
            if visited.insert(next.bits.clone()) {
                self.complement_search(n, next, target, visited, found, first_only);
            }
        }
    }

    fn complements_impl(&self, n: &Sub, first_only: bool) -> Vec<Sub> {
        let target = self.order() / n.order();
        let mut found = Vec::new();
        let mut visited = HashSet::new();
        self.complement_search(
            n,
            self.trivial(),
            target,
            &mut visited,
            &mut found,
            first_only,
        );
        found.sort_by(|a, b| a.bits.cmp(&b.bits));
        found
    }

    /// All `C` with `C ∩ N = 1` and `|C|·|N| = |G|`.
    pub fn complements(&self, n: &Sub) -> Vec<Sub> {
        self.complements_impl(n, false)
    }

    pub fn has_complement(&self, n: &Sub) -> bool {
        !self.complements_impl(n, true).is_empty()
    }

    pub fn is_abelian(&self, h: &Sub) -> bool {
        h.gens.iter().enumerate().all(|(i, &a)| {
            h.gens[i + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// Largest order of an abelian subgroup and every abelian subgroup of
    /// that order.
    pub fn max_abelian_subgroups(&self) -> (usize, Vec<Sub>) {
        let mut best = 0;
        let mut winners: Vec<Sub> = Vec::new();
        let mut visited: HashSet<FixedBitSet> = HashSet::new();
        let mut stack = vec![self.trivial()];
        while let Some(a) = stack.pop() {
            let cent = self.centralizer(&a);
            if cent.order() < best {
                continue;
            }
            if a.order() > best {
                best = a.order();
                winners.clear();
            }
            if a.order() == best {
                winners.push(a.clone());
            }
            for x in cent.iter() {
                if a.contains(x) {
                    continue;
                }
                let next = self.extend(&a, x);
                if visited.insert(next.bits.clone()) {
                    stack.push(next);
                }
            }
        }
        winners.retain(|w| w.order() == best);
        winners.sort_by(|a, b| a.bits.cmp(&b.bits));
        winners.dedup();
        (best, winners)
    }
}
