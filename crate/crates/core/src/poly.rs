//! Integer polynomials, the quotient ℤ[x]/(xⁿ − 1), and the Δ / F families.
//!
//! `Δ_k(x) = 1 + x + … + x^{k−1}` and `Δ_{−k}(x) = 1 + x + … + x^{n−k−1}`.
//! `F_{m,k}(x) = Σ_{i=1}^{m} C(m,i) Δ_k(x)^{i−1} (x−1)^{i−1}`, which satisfies
//! `1 + F_{m,k}(x)·Δ_k(x)·(x−1) = x^{km}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::PolyError;
use crate::ring::{GroupRing, RingElement};

/// Dense polynomial, lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `1 + x + … + x^{len−1}`.
    pub fn geometric(len: usize) -> Self {
        Self::new(vec![BigInt::one(); len])
    }

    /// `x − 1`.
    pub fn x_minus_one() -> Self {
        Self::from_i64(&[-1, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        // outer loop over the sparser factor; Δ·(x−1) has two terms
        let (sparse, dense) = if self.nonzeros() <= other.nonzeros() {
            (self, other)
        } else {
            (other, self)
        };
        for (i, c) in sparse.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, d) in dense.coeffs.iter().enumerate() {
                out[i + j] += c * d;
            }
        }
        Poly::new(out)
    }

    fn nonzeros(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Product in ℤ[x]/(xⁿ − 1) of two polynomials, reduced.
    pub fn mul_mod(&self, other: &Poly, n: usize) -> Poly {
        let a = reduce_mod_cyclic(self, n);
        let b = reduce_mod_cyclic(other, n);
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, d) in b.coeffs.iter().enumerate() {
                out[(i + j) % n] += c * d;
            }
        }
        Poly::new(out)
    }

    /// Evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, _) => write!(f, " {sign} ")?,
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}")?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Length of `Δ_k` for a signed step: `k` if positive, `n − |k|` if negative.
pub fn step_len(n: usize, k: i64) -> Result<usize, PolyError> {
    let mag = k.unsigned_abs() as usize;
    if k == 0 || mag >= n {
        return Err(PolyError::StepOutOfRange { n, k });
    }
    Ok(if k > 0 { mag } else { n - mag })
}

/// `Δ_k` for `1 ≤ k < n`, or `Δ_{−k}` for a negative step.
pub fn delta(n: usize, k: i64) -> Result<Poly, PolyError> {
    Ok(Poly::geometric(step_len(n, k)?))
}

fn binomial_row(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..m {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row
}

/// `F_{m,k}` from the binomial sum, unreduced.
pub fn big_f(n: usize, m: usize, k: i64) -> Result<Poly, PolyError> {
    if m == 0 {
        return Err(PolyError::BadExponent(m));
    }
    let d = delta(n, k)?.mul(&Poly::x_minus_one());
    let binom = binomial_row(m);
    let mut power = Poly::one();
    let mut out = Poly::zero();
    for c in binom.iter().take(m + 1).skip(1) {
        out = out.add(&power.scale(c));
        power = power.mul(&d);
    }
    Ok(out)
}

/// `F_{m,k}` as the geometric sum `Σ_{i<m} x^{ik}` (with `k` replaced by `n − |k|`
/// for negative steps). Independent of the binomial route.
pub fn big_f_geometric(n: usize, m: usize, k: i64) -> Result<Poly, PolyError> {
    if m == 0 {
        return Err(PolyError::BadExponent(m));
    }
    let step = step_len(n, k)?;
    let mut coeffs = vec![BigInt::zero(); step * (m - 1) + 1];
    for i in 0..m {
        coeffs[i * step] += 1;
    }
    Ok(Poly::new(coeffs))
}

/// Folds `x^i ↦ x^{i mod n}`.
pub fn reduce_mod_cyclic(p: &Poly, n: usize) -> Poly {
    assert!(n >= 1, "modulus must be positive");
    let mut out = vec![BigInt::zero(); n.min(p.coeffs.len())];
    for (i, c) in p.coeffs.iter().enumerate() {
        out[i % n] += c;
    }
    Poly::new(out)
}

/// Whether a reduced polynomial is `β·(1 + x + … + x^{n−1})` for some integer β.
pub fn is_hat_multiple(reduced: &Poly, n: usize) -> bool {
    if reduced.is_zero() {
        return true;
    }
    reduced.coeffs.len() == n && reduced.coeffs.iter().all(|c| *c == reduced.coeffs[0])
}

/// `ψ(p)`: substitute `a` for `x` in the reduction modulo `x^{|a|} − 1`.
pub fn psi(p: &Poly, ring: &GroupRing<'_>, a: usize) -> RingElement {
    let g = ring.group();
    let n = g.element_order(a);
    let reduced = reduce_mod_cyclic(p, n);
    let mut power = 0;
    let mut terms = Vec::with_capacity(n);
    for c in reduced.coeffs() {
        terms.push((power, c.clone()));
        power = g.mul(power, a);
    }
    ring.element(terms)
}

/// Which Δ carries the first exponent in `Δ_{∓k}^j Δ_{±k}^l (x−1)^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignPattern {
    /// `Δ_{−k}^j · Δ_k^l`
    MinusPlus,
    /// `Δ_k^j · Δ_{−k}^l`
    PlusMinus,
}

impl SignPattern {
    pub const BOTH: [SignPattern; 2] = [SignPattern::MinusPlus, SignPattern::PlusMinus];
}

/// True iff `Δ_{∓k}^j Δ_{±k}^l (x−1)^s` reduces to something nonzero that is
/// also not a constant multiple of `1 + x + … + x^{n−1}`.
pub fn nonvanishing_check(
    n: usize,
    k: usize,
    j: usize,
    l: usize,
    s: usize,
    pattern: SignPattern,
) -> Result<bool, PolyError> {
    if n < 2 {
        return Err(PolyError::BadModulus { n, min: 2 });
    }
    let plus = delta(n, k as i64)?;
    let minus = delta(n, -(k as i64))?;
    let (first, second) = match pattern {
        SignPattern::MinusPlus => (minus, plus),
        SignPattern::PlusMinus => (plus, minus),
    };
    let x1 = Poly::x_minus_one();
    let factors = std::iter::repeat_n(&first, j)
        .chain(std::iter::repeat_n(&second, l))
        .chain(std::iter::repeat_n(&x1, s));
    let product = factors.fold(Poly::one(), |acc, f| acc.mul_mod(f, n));
    Ok(!is_hat_multiple(&product, n))
}

/// Checks `1 + F·Δ_{τk}·(x−1) ≡ x^{τk·m}` modulo `xⁿ − 1` for a supplied `F`.
pub fn power_identity_holds(n: usize, m: usize, k: i64, f: &Poly) -> Result<bool, PolyError> {
    let step = step_len(n, k)?;
    let lhs = Poly::one().add(&f.mul(&delta(n, k)?).mul(&Poly::x_minus_one()));
    let rhs = Poly::monomial(BigInt::one(), step * m);
    Ok(reduce_mod_cyclic(&lhs, n) == reduce_mod_cyclic(&rhs, n))
}

/// Outcome of a parameter sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }
}

/// Signature of an `F_{m,k}` builder, so sweeps can be pointed at a faulty one.
pub type BigFFn = fn(usize, usize, i64) -> Result<Poly, PolyError>;

/// The power identity over `2 ≤ n ≤ n_max`, `1 ≤ k < n`, `1 ≤ m ≤ n`, both signs of the step.
/// Each `F` is also compared with the geometric-sum route.
pub fn sweep_power_identity(n_max: usize, builder: BigFFn) -> SweepSummary {
    let tuples: Vec<(usize, usize, i64)> = (2..=n_max)
        .flat_map(|n| {
            (1..n as i64).flat_map(move |k| (1..=n).flat_map(move |m| [(n, m, k), (n, m, -k)]))
        })
        .collect();
    let mut summary = tuples
        .par_iter()
        .map(|&(n, m, k)| {
            let mut s = SweepSummary {
                checked: 1,
                failures: vec![],
            };
            let ok = builder(n, m, k).and_then(|f| {
                Ok(power_identity_holds(n, m, k, &f)? && f == big_f_geometric(n, m, k)?)
            });
            if !matches!(ok, Ok(true)) {
                s.failures
                    .push(format!("power identity n={n} m={m} k={k}: {ok:?}"));
            }
            s
        })
        .reduce(SweepSummary::default, SweepSummary::merge);
    summary.failures.sort();
    summary
}

/// Non-vanishing sweep over `2 ≤ n ≤ n_max`, `1 ≤ k < n`, `j, l, s ≤ jls_max`.
pub fn sweep_nonvanishing(n_max: usize, jls_max: usize) -> SweepSummary {
    let tuples: Vec<(usize, usize)> = (2..=n_max)
        .flat_map(|n| (1..n).map(move |k| (n, k)))
        .collect();
    let mut summary = tuples
        .par_iter()
        .map(|&(n, k)| {
            let mut s = SweepSummary::default();
            for j in 0..=jls_max {
                for l in 0..=jls_max {
                    for e in 0..=jls_max {
                        for pattern in SignPattern::BOTH {
                            s.checked += 1;
                            let ok = nonvanishing_check(n, k, j, l, e, pattern);
                            if ok != Ok(true) {
                                s.failures.push(format!(
                                    "nonvanishing n={n} k={k} j={j} l={l} s={e} {pattern:?}: {ok:?}"
                                ));
                            }
                        }
                    }
                }
            }
            s
        })
        .reduce(SweepSummary::default, SweepSummary::merge);
    summary.failures.sort();
    summary
}
