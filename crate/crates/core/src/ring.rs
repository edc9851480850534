//! Exact arithmetic in the group ring 𝕂G, 𝕂 = ℤ or a prime field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::RingError;
use crate::group::GroupTable;

/// Coefficient domain. Both choices are integral domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CoeffRing {
    Integers,
    PrimeField(u64),
}

impl CoeffRing {
    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if is_prime {
            Ok(CoeffRing::PrimeField(p))
        } else {
            Err(RingError::NotPrime(p))
        }
    }

    pub fn is_integers(self) -> bool {
        self == CoeffRing::Integers
    }

    /// Canonical representative: unchanged over ℤ, in `[0, p)` over 𝔽_p.
    pub fn reduce(self, c: BigInt) -> BigInt {
        match self {
            CoeffRing::Integers => c,
            CoeffRing::PrimeField(p) => {
                let p = BigInt::from(p);
                let r = c % &p;
                if r.is_negative() {
                    r + p
                } else {
                    r
                }
            }
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => f.write_str("int"),
            CoeffRing::PrimeField(p) => write!(f, "gf:{p}"),
        }
    }
}

impl FromStr for CoeffRing {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "int" | "Z" | "integers" => Ok(CoeffRing::Integers),
            other => {
                let p = other
                    .strip_prefix("gf:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| RingError::BadCoefficient(other.to_string()))?;
                CoeffRing::prime_field(p)
            }
        }
    }
}

impl From<CoeffRing> for String {
    fn from(c: CoeffRing) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for CoeffRing {
    type Error = RingError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A sparse element `Σ α_g g` with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    coeffs: CoeffRing,
    group: u64,
    terms: BTreeMap<usize, BigInt>,
}

impl RingElement {
    pub fn coeff_ring(&self) -> CoeffRing {
        self.coeffs
    }

    pub fn terms(&self) -> &BTreeMap<usize, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, g: usize) -> BigInt {
        self.terms.get(&g).cloned().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The terms, if every coefficient is below 2^48 in absolute value.
    fn small_coeffs(&self) -> Option<Vec<(usize, i64)>> {
        const LIMIT: i64 = 1 << 48;
        self.terms
            .iter()
            .map(|(&g, c)| c.to_i64().filter(|c| c.abs() < LIMIT).map(|c| (g, c)))
            .collect()
    }
}

/// One `(element, coefficient)` pair in the JSON form of a ring element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTerm {
    pub element: String,
    pub coefficient: String,
}

/// Result of testing `x` against the left annihilator of `{h − 1 : h ∈ ⟨a⟩}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnnihilatorCheck {
    pub annihilates: bool,
    pub is_hat_multiple: bool,
}

/// The group ring of a fixed table over a fixed coefficient domain.
#[derive(Clone, Copy, Debug)]
pub struct GroupRing<'g> {
    group: &'g GroupTable,
    coeffs: CoeffRing,
}

impl<'g> GroupRing<'g> {
    pub fn new(group: &'g GroupTable, coeffs: CoeffRing) -> Self {
        Self { group, coeffs }
    }

    pub fn integral(group: &'g GroupTable) -> Self {
        Self::new(group, CoeffRing::Integers)
    }

    pub fn group(&self) -> &'g GroupTable {
        self.group
    }

    pub fn coeffs(&self) -> CoeffRing {
        self.coeffs
    }

    fn check(&self, x: &RingElement) -> Result<(), RingError> {
        if x.coeffs != self.coeffs {
            return Err(RingError::CoeffMismatch);
        }
        if x.group != self.group.fingerprint() {
            return Err(RingError::GroupMismatch);
        }
        Ok(())
    }

    /// Builds an element from terms, combining repeats and dropping zeros.
    pub fn element<I, C>(&self, terms: I) -> RingElement
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (g, c) in terms {
            assert!(g < self.group.order(), "element index {g} out of range");
            *map.entry(g).or_default() += c.into();
        }
        self.normalize(map)
    }

    fn normalize(&self, map: BTreeMap<usize, BigInt>) -> RingElement {
        let terms = map
            .into_iter()
            .filter_map(|(g, c)| {
                let c = self.coeffs.reduce(c);
                (!c.is_zero()).then_some((g, c))
            })
            .collect();
        RingElement {
            coeffs: self.coeffs,
            group: self.group.fingerprint(),
            terms,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.element(std::iter::empty::<(usize, BigInt)>())
    }

    pub fn one(&self) -> RingElement {
        self.basis(GroupTable::IDENTITY)
    }

    pub fn basis(&self, g: usize) -> RingElement {
        self.element([(g, 1)])
    }

    pub fn scalar(&self, c: impl Into<BigInt>) -> RingElement {
        self.element([(GroupTable::IDENTITY, c)])
    }

    pub fn is_one(&self, x: &RingElement) -> bool {
        x.terms.len() == 1 && x.terms.get(&GroupTable::IDENTITY).is_some_and(One::is_one)
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        self.check(y)?;
        let mut map = x.terms.clone();
        for (&g, c) in &y.terms {
            *map.entry(g).or_default() += c;
        }
        Ok(self.normalize(map))
    }

    pub fn neg(&self, x: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        Ok(self.normalize(x.terms.iter().map(|(&g, c)| (g, -c)).collect()))
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.add(x, &self.neg(y)?)
    }

    pub fn scale(&self, x: &RingElement, c: &BigInt) -> Result<RingElement, RingError> {
        self.check(x)?;
        Ok(self.normalize(x.terms.iter().map(|(&g, v)| (g, v * c)).collect()))
    }

    /// Convolution over the multiplication table.
    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        self.check(y)?;
        let n = self.group.order();
        if let (Some(xs), Some(ys)) = (x.small_coeffs(), y.small_coeffs()) {
            // products stay below 2^96 and a bucket receives at most n terms
            let mut acc = vec![0i128; n];
            for &(g, c) in &xs {
                let row = self.group.mul_row(g);
                for &(h, d) in &ys {
                    acc[row[h] as usize] += c as i128 * d as i128;
                }
            }
            return Ok(self.normalize(
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, c)| *c != 0)
                    .map(|(g, c)| (g, BigInt::from(c)))
                    .collect(),
            ));
        }
        let mut acc = vec![BigInt::zero(); n];
        for (&g, c) in &x.terms {
            let row = self.group.mul_row(g);
            for (&h, d) in &y.terms {
                acc[row[h] as usize] += c * d;
            }
        }
        Ok(self.normalize(
            acc.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        ))
    }

    /// `x^e` by square-and-multiply.
    pub fn pow(&self, x: &RingElement, mut e: u64) -> Result<RingElement, RingError> {
        self.check(x)?;
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Sum of coefficients.
    pub fn augmentation(&self, x: &RingElement) -> BigInt {
        self.coeffs.reduce(x.terms.values().sum())
    }

    /// Coefficient of the identity.
    pub fn trace(&self, x: &RingElement) -> BigInt {
        x.coeff(GroupTable::IDENTITY)
    }

    /// `â = a + a² + … + a^|a|`.
    pub fn hat(&self, a: usize) -> RingElement {
        self.element(self.group.cyclic_subgroup(a).ones().map(|g| (g, 1)))
    }

    /// Compares `x·(h − 1) = 0 for all h ∈ ⟨a⟩` with membership in `𝕂G·â`.
    ///
    /// Membership is decided by coefficient constancy on each left coset `g⟨a⟩`.
    pub fn check_annihilator(
        &self,
        a: usize,
        x: &RingElement,
    ) -> Result<AnnihilatorCheck, RingError> {
        self.check(x)?;
        let one = self.one();
        let mut annihilates = true;
        for h in self.group.cyclic_subgroup(a).ones() {
            let diff = self.sub(&self.basis(h), &one)?;
            if !self.mul(x, &diff)?.is_zero() {
                annihilates = false;
                break;
            }
        }

        let n = self.group.order();
        let mut visited = vec![false; n];
        let mut is_hat_multiple = true;
        'cosets: for g in 0..n {
            if visited[g] {
                continue;
            }
            let c = x.coeff(g);
            let mut p = g;
            loop {
                visited[p] = true;
                if x.coeff(p) != c {
                    is_hat_multiple = false;
                    break 'cosets;
                }
                p = self.group.mul(p, a);
                if p == g {
                    break;
                }
            }
        }
        Ok(AnnihilatorCheck {
            annihilates,
            is_hat_multiple,
        })
    }

    /// JSON-friendly form sorted by element index.
    pub fn to_labeled(&self, x: &RingElement) -> Vec<LabeledTerm> {
        x.terms
            .iter()
            .map(|(&g, c)| LabeledTerm {
                element: self.group.label(g).to_string(),
                coefficient: c.to_string(),
            })
            .collect()
    }

    pub fn from_labeled(&self, terms: &[LabeledTerm]) -> Result<RingElement, RingError> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let g = self
                .group
                .labels()
                .iter()
                .position(|l| *l == t.element)
                .ok_or_else(|| RingError::UnknownLabel(t.element.clone()))?;
            let c: BigInt = t
                .coefficient
                .parse()
                .map_err(|_| RingError::BadCoefficient(t.coefficient.clone()))?;
            out.push((g, c));
        }
        Ok(self.element(out))
    }

    /// Human-readable form such as `2·() - 1·(1 2)`.
    pub fn display(&self, x: &RingElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (&g, c)) in x.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            s.push_str(&format!("{}·{}", c.abs(), self.group.label(g)));
        }
        s
    }
}
