use std::collections::HashMap;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use num_integer::Integer;

use super::perm::Permutation;
use crate::error::GroupError;

/// Subsets of a group are bitsets over element indices.
pub type ElementSet = FixedBitSet;

pub const DEFAULT_MAX_ORDER: usize = 720;
pub const DEFAULT_MAX_DEGREE: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct BuildLimits {
    pub max_order: usize,
    pub max_degree: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

/// A finite permutation group materialized as a full multiplication table.
///
/// Index 0 is always the identity. The table is immutable once built.
#[derive(Clone, Debug)]
pub struct GroupTable {
    name: String,
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<usize>,
    labels: Vec<String>,
    exponent: usize,
    fingerprint: u64,
}

/// Closure of `generators` under composition.
pub fn build_group(generators: &[Permutation]) -> Result<GroupTable, GroupError> {
    build_group_with(generators, BuildLimits::default())
}

pub fn build_group_with(
    generators: &[Permutation],
    limits: BuildLimits,
) -> Result<GroupTable, GroupError> {
    let degree = generators.first().map_or(1, Permutation::degree);
    for g in generators {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch(degree, g.degree()));
        }
    }
    if degree > limits.max_degree {
        return Err(GroupError::DegreeTooLarge {
            degree,
            max: limits.max_degree,
        });
    }

    let identity = Permutation::identity(degree);
    let mut index: HashMap<Permutation, u32> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let p = elements[i].then(g);
            if !index.contains_key(&p) {
                if elements.len() == limits.max_order {
                    return Err(GroupError::OrderExceeded(limits.max_order));
                }
                index.insert(p.clone(), elements.len() as u32);
                queue.push_back(elements.len());
                elements.push(p);
            }
        }
    }

    let n = elements.len();
    let mut mul = vec![0u32; n * n];
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            mul[i * n + j] = index[&x.then(y)];
        }
    }
    let inv = elements
        .iter()
        .map(|x| index[&x.inverse()])
        .collect::<Vec<_>>();

    let mut orders = vec![1usize; n];
    for (g, order) in orders.iter_mut().enumerate() {
        let mut p = g;
        while p != 0 {
            p = mul[p * n + g] as usize;
            *order += 1;
        }
    }
    let exponent = orders.iter().fold(1usize, |acc, &o| acc.lcm(&o));
    let labels = elements.iter().map(ToString::to_string).collect();

    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    degree.hash(&mut hasher);
    mul.hash(&mut hasher);
    elements.hash(&mut hasher);
    let fingerprint = hasher.finish();

    Ok(GroupTable {
        name: String::new(),
        degree,
        elements,
        generators: generators.to_vec(),
        mul,
        inv,
        orders,
        labels,
        exponent,
        fingerprint,
    })
}

impl GroupTable {
    pub const IDENTITY: usize = 0;

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> usize {
        Self::IDENTITY
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element(&self, g: usize) -> &Permutation {
        &self.elements[g]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order() + h] as usize
    }

    /// Row `g` of the multiplication table: `row[h] = g·h`.
    #[inline]
    pub fn mul_row(&self, g: usize) -> &[u32] {
        let n = self.order();
        &self.mul[g * n..(g + 1) * n]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g] as usize
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.orders[g]
    }

    /// `g^e` for any integer exponent.
    pub fn pow(&self, g: usize, e: i64) -> usize {
        let order = self.orders[g] as i64;
        let e = e.rem_euclid(order);
        (0..e).fold(Self::IDENTITY, |acc, _| self.mul(acc, g))
    }

    /// `g·h·g⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    /// Looks up an element given in 1-based cycle notation.
    pub fn find(&self, cycles: &str) -> Result<usize, GroupError> {
        let p = Permutation::parse_cycles(cycles, self.degree)?;
        self.elements
            .iter()
            .position(|e| *e == p)
            .ok_or_else(|| GroupError::Parse(format!("{cycles} is not an element of the group")))
    }

    pub fn empty_set(&self) -> ElementSet {
        FixedBitSet::with_capacity(self.order())
    }

    pub fn whole(&self) -> ElementSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// `⟨g⟩` by explicit powering.
    pub fn cyclic_subgroup(&self, g: usize) -> ElementSet {
        let mut s = self.empty_set();
        let mut p = Self::IDENTITY;
        loop {
            s.insert(p);
            p = self.mul(p, g);
            if p == Self::IDENTITY {
                return s;
            }
        }
    }

    pub fn is_subgroup(&self, h: &ElementSet) -> bool {
        if h.len() != self.order() || !h.contains(Self::IDENTITY) {
            return false;
        }
        h.ones()
            .all(|x| h.contains(self.inv(x)) && h.ones().all(|y| h.contains(self.mul(x, y))))
    }

    /// Whether `g·H·g⁻¹ = H`. Finiteness makes inclusion sufficient.
    pub fn normalizes(&self, g: usize, h: &ElementSet) -> bool {
        h.ones().all(|x| h.contains(self.conjugate(g, x)))
    }

    /// Whether `g` normalizes the cyclic group `⟨c⟩`; a single conjugate decides it.
    pub fn normalizes_cyclic(&self, g: usize, c: usize, cyclic: &ElementSet) -> bool {
        cyclic.contains(self.conjugate(g, c))
    }

    /// `N_G(H) = {g : gHg⁻¹ = H}`.
    pub fn normalizer(&self, h: &ElementSet) -> Result<ElementSet, GroupError> {
        if !self.is_subgroup(h) {
            return Err(GroupError::NotSubgroup);
        }
        let mut out = self.empty_set();
        for g in 0..self.order() {
            if self.normalizes(g, h) {
                out.insert(g);
            }
        }
        Ok(out)
    }

    pub fn is_normal(&self, h: &ElementSet) -> Result<bool, GroupError> {
        Ok(self.normalizer(h)?.count_ones(..) == self.order())
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, x)| {
            self.generators[i + 1..]
                .iter()
                .all(|y| x.then(y) == y.then(x))
        })
    }

    /// Checks associativity of the table on every triple; callers bound the order.
    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.mul(x, y);
                (0..n).all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }
}
