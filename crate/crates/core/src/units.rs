//! The units `w = 1 + (a−1)bâ`, `u_k = a^k + (a−1)bâ` and `z_k = w⁻¹u_k w`.
//!
//! Orders of `u_k` are predicted from `(|a|, k, M)` alone by [`classify_order`]
//! and measured independently by [`order_oracle`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::UnitError;
use crate::group::Witness;
use crate::poly::{big_f, delta, psi};
use crate::ring::{GroupRing, RingElement};

/// All elements of one `(witness, k)` instance, inverses from closed forms.
#[derive(Clone, Debug)]
pub struct UnitFamily<'g> {
    pub ring: GroupRing<'g>,
    pub witness: Witness,
    pub k: usize,
    /// `(a−1)bâ`, which squares to zero.
    pub nilpotent: RingElement,
    pub w: RingElement,
    pub w_inv: RingElement,
    pub u: RingElement,
    pub u_inv: RingElement,
    pub z: RingElement,
    pub z_inv: RingElement,
}

/// Builds `w`, `u_k`, `z_k` and their inverses and checks the inverses by multiplication.
pub fn make_family<'g>(
    ring: GroupRing<'g>,
    witness: &Witness,
    k: usize,
) -> Result<UnitFamily<'g>, UnitError> {
    let order = witness.order_a;
    if k == 0 || k > order {
        return Err(UnitError::KOutOfRange { k, order });
    }
    let g = ring.group();
    let a = witness.a;
    let one = ring.one();
    let a_minus_1 = ring.sub(&ring.basis(a), &one)?;
    let nilpotent = ring.mul(&ring.mul(&a_minus_1, &ring.basis(witness.b))?, &ring.hat(a))?;

    let w = ring.add(&one, &nilpotent)?;
    let w_inv = ring.sub(&one, &nilpotent)?;
    let a_k = ring.basis(g.pow(a, k as i64));
    let a_neg_k = ring.basis(g.pow(a, -(k as i64)));
    let u = ring.add(&a_k, &nilpotent)?;
    let u_inv = ring.sub(&a_neg_k, &ring.mul(&a_neg_k, &nilpotent)?)?;
    let z = ring.mul(&ring.mul(&w_inv, &u)?, &w)?;
    let z_inv = ring.sub(&a_neg_k, &nilpotent)?;

    for (name, x, y) in [("w", &w, &w_inv), ("u_k", &u, &u_inv), ("z_k", &z, &z_inv)] {
        if !ring.is_one(&ring.mul(x, y)?) || !ring.is_one(&ring.mul(y, x)?) {
            return Err(UnitError::Verification(format!("{name} · {name}⁻¹ ≠ 1")));
        }
    }

    Ok(UnitFamily {
        ring,
        witness: witness.clone(),
        k,
        nilpotent,
        w,
        w_inv,
        u,
        u_inv,
        z,
        z_inv,
    })
}

impl UnitFamily<'_> {
    pub fn order_a(&self) -> usize {
        self.witness.order_a
    }

    /// `u_k^i = a^{ik} + (Σ_{j<i} a^{jk})(a−1)bâ`.
    pub fn pow_u_closed(&self, i: u64) -> Result<RingElement, UnitError> {
        let g = self.ring.group();
        let step = g.pow(self.witness.a, self.k as i64);
        let mut power = 0;
        let mut partial = Vec::with_capacity(i as usize);
        for _ in 0..i {
            partial.push((power, 1));
            power = g.mul(power, step);
        }
        let sum = self.ring.element(partial);
        Ok(self.ring.add(
            &self.ring.basis(power),
            &self.ring.mul(&sum, &self.nilpotent)?,
        )?)
    }

    /// `ψ(p)` at this family's `a`.
    pub fn psi(&self, p: &crate::poly::Poly) -> RingElement {
        psi(p, &self.ring, self.witness.a)
    }

    /// Whether `b` still fails to normalize `⟨a^k⟩`.
    pub fn hypotheses_hold(&self) -> bool {
        self.witness.is_valid_k(self.k)
    }
}

/// Which clause of the order classification applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderCase {
    /// `gcd(k, |a|) = 1`: the order equals `|a|`.
    CoprimeStep,
    /// `gcd(k, |a|) ≠ 1`, `gcd(k, M) = 1`, `M ≠ |a|`: the order is `s_k`.
    SubgroupStep,
    /// Every other case: infinite order.
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum PredictedOrder {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderClassification {
    pub order: PredictedOrder,
    pub s_k: usize,
    pub t_k: Ratio<usize>,
    pub case: OrderCase,
}

impl OrderClassification {
    /// `t_k` is integral whenever `M` divides `|a|`, which holds for every real witness.
    pub fn t_k_integral(&self) -> bool {
        self.t_k.is_integer()
    }
}

/// Order of `u_k` as a function of `(|a|, k, M)`.
pub fn classify_order(
    order_a: usize,
    k: usize,
    m: usize,
) -> Result<OrderClassification, UnitError> {
    if k == 0 || k > order_a {
        return Err(UnitError::KOutOfRange { k, order: order_a });
    }
    if m < 2 || m > order_a {
        return Err(UnitError::MOutOfRange { m, order: order_a });
    }
    let s_k = order_a / k.gcd(&order_a);
    let t_k = Ratio::new(s_k * m.gcd(&k), m);
    let (order, case) = if k.gcd(&order_a) == 1 {
        (PredictedOrder::Finite(order_a), OrderCase::CoprimeStep)
    } else if k.gcd(&m) == 1 && m != order_a {
        (PredictedOrder::Finite(s_k), OrderCase::SubgroupStep)
    } else {
        (PredictedOrder::Infinite, OrderCase::Unbounded)
    };
    Ok(OrderClassification {
        order,
        s_k,
        t_k,
        case,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum OracleVerdict {
    Finite(usize),
    /// No power up to the group exponent is 1, over ℤ. Torsion units of ℤG
    /// have order dividing the exponent of G, so the order is infinite.
    CertifiedInfinite,
    /// No power up to the bound is 1 and no certificate applies.
    ExceedsBound,
}

impl OracleVerdict {
    pub fn agrees_with(self, predicted: PredictedOrder) -> bool {
        match (self, predicted) {
            (OracleVerdict::Finite(d), PredictedOrder::Finite(e)) => d == e,
            (OracleVerdict::CertifiedInfinite, PredictedOrder::Infinite) => true,
            _ => false,
        }
    }
}

/// Least `d ≤ bound` with `x^d = 1`, by repeated multiplication.
pub fn unit_order(
    ring: &GroupRing<'_>,
    x: &RingElement,
    bound: usize,
) -> Result<OracleVerdict, UnitError> {
    let mut power = x.clone();
    for d in 1..=bound {
        if ring.is_one(&power) {
            return Ok(OracleVerdict::Finite(d));
        }
        power = ring.mul(&power, x)?;
    }
    Ok(if ring.coeffs().is_integers() {
        OracleVerdict::CertifiedInfinite
    } else {
        OracleVerdict::ExceedsBound
    })
}

/// Order of `u_k`, iterating powers up to the exponent of G.
pub fn order_oracle(fam: &UnitFamily<'_>) -> Result<OracleVerdict, UnitError> {
    unit_order(&fam.ring, &fam.u, fam.ring.group().exponent())
}

/// `trace(u_k^{s_k})`; equals 1 in every infinite-order case.
pub fn trace_certificate(fam: &UnitFamily<'_>) -> Result<BigInt, UnitError> {
    let s_k = fam.order_a() / fam.k.gcd(&fam.order_a());
    Ok(fam.ring.trace(&fam.ring.pow(&fam.u, s_k as u64)?))
}

/// The elements `x_±`, `y_±` with `u_k^{±1} = 1 + x_±` and `z_k^{±1} = 1 + y_±`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syllables {
    pub x_plus: RingElement,
    pub x_minus: RingElement,
    pub y_plus: RingElement,
    pub y_minus: RingElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SyllableName {
    XPlus,
    XMinus,
    YPlus,
    YMinus,
}

impl SyllableName {
    pub const ALL: [SyllableName; 4] = [
        SyllableName::XPlus,
        SyllableName::XMinus,
        SyllableName::YPlus,
        SyllableName::YMinus,
    ];

    pub fn is_plus(self) -> bool {
        matches!(self, SyllableName::XPlus | SyllableName::YPlus)
    }
}

impl Syllables {
    pub fn get(&self, name: SyllableName) -> &RingElement {
        match name {
            SyllableName::XPlus => &self.x_plus,
            SyllableName::XMinus => &self.x_minus,
            SyllableName::YPlus => &self.y_plus,
            SyllableName::YMinus => &self.y_minus,
        }
    }
}

/// Builds the four syllable elements and checks them against `u_k^{±1}`, `z_k^{±1}`.
pub fn make_syllables(fam: &UnitFamily<'_>) -> Result<Syllables, UnitError> {
    let ring = &fam.ring;
    let n = fam.order_a();
    let k = fam.k;
    if k >= n {
        return Err(UnitError::KOutOfRange { k, order: n - 1 });
    }
    let g = ring.group();
    let a = fam.witness.a;
    let one = ring.one();
    let a_minus_1 = ring.sub(&ring.basis(a), &one)?;
    let b_hat = ring.mul(&ring.basis(fam.witness.b), &ring.hat(a))?;
    let d_plus = fam.psi(&delta(n, k as i64)?);
    let d_minus = fam.psi(&delta(n, -(k as i64))?);
    let a_k = ring.basis(g.pow(a, k as i64));
    let a_neg_k = ring.basis(g.pow(a, -(k as i64)));

    let build = |d: &RingElement, shift: &RingElement, negate: bool| -> Result<_, UnitError> {
        let mut tail = ring.mul(shift, &b_hat)?;
        if negate {
            tail = ring.neg(&tail)?;
        }
        Ok(ring.mul(&a_minus_1, &ring.add(d, &tail)?)?)
    };
    let syl = Syllables {
        x_plus: build(&d_plus, &one, false)?,
        x_minus: build(&d_minus, &a_neg_k, true)?,
        y_plus: build(&d_plus, &a_k, false)?,
        y_minus: build(&d_minus, &one, true)?,
    };

    let checks = [
        ("u_k = 1 + x₊", &fam.u, &syl.x_plus),
        ("u_k⁻¹ = 1 + x₋", &fam.u_inv, &syl.x_minus),
        ("z_k = 1 + y₊", &fam.z, &syl.y_plus),
        ("z_k⁻¹ = 1 + y₋", &fam.z_inv, &syl.y_minus),
    ];
    for (what, unit, s) in checks {
        if ring.add(&one, s)? != *unit {
            return Err(UnitError::Verification(what.to_string()));
        }
    }
    Ok(syl)
}

/// `ψ(Δ_{±k})` for the sign of the syllable.
pub fn syllable_delta(fam: &UnitFamily<'_>, name: SyllableName) -> Result<RingElement, UnitError> {
    let k = fam.k as i64;
    let step = if name.is_plus() { k } else { -k };
    Ok(fam.psi(&delta(fam.order_a(), step)?))
}

/// Checks `z_α z_β = Δ_{αk}(a)(a−1) z_β ≠ 0` for all 16 ordered pairs.
/// Returns the pairs that fail.
pub fn check_syllable_products(
    fam: &UnitFamily<'_>,
    syl: &Syllables,
) -> Result<Vec<(SyllableName, SyllableName)>, UnitError> {
    let ring = &fam.ring;
    let a_minus_1 = ring.sub(&ring.basis(fam.witness.a), &ring.one())?;
    let mut failures = Vec::new();
    for alpha in SyllableName::ALL {
        let left = ring.mul(&syllable_delta(fam, alpha)?, &a_minus_1)?;
        for beta in SyllableName::ALL {
            let product = ring.mul(syl.get(alpha), syl.get(beta))?;
            let expected = ring.mul(&left, syl.get(beta))?;
            if product != expected || product.is_zero() {
                failures.push((alpha, beta));
            }
        }
    }
    Ok(failures)
}

/// Checks `(1 + z)^m = 1 + ψ(F_{m,τk})·z` for a syllable `z`, where `τk` is
/// `k` for plus syllables and `|a| − k` for minus syllables.
pub fn check_power_identity(
    fam: &UnitFamily<'_>,
    syl: &Syllables,
    name: SyllableName,
    m: usize,
) -> Result<bool, UnitError> {
    let ring = &fam.ring;
    let k = fam.k as i64;
    let step = if name.is_plus() { k } else { -k };
    let z = syl.get(name);
    let base = ring.add(&ring.one(), z)?;
    let lhs = ring.pow(&base, m as u64)?;
    let f = fam.psi(&big_f(fam.order_a(), m, step)?);
    let rhs = ring.add(&ring.one(), &ring.mul(&f, z)?)?;
    Ok(lhs == rhs)
}

/// `(x, y) = x⁻¹y⁻¹xy`, after checking the supplied inverses.
pub fn commutator(
    ring: &GroupRing<'_>,
    x: &RingElement,
    y: &RingElement,
    x_inv: &RingElement,
    y_inv: &RingElement,
) -> Result<RingElement, UnitError> {
    for (v, v_inv) in [(x, x_inv), (y, y_inv)] {
        if !ring.is_one(&ring.mul(v, v_inv)?) {
            return Err(UnitError::Verification("supplied inverse is wrong".into()));
        }
    }
    let left = ring.mul(x_inv, y_inv)?;
    let right = ring.mul(x, y)?;
    Ok(ring.mul(&left, &right)?)
}

/// `1 + (a^{−k} − a^{1−k} + a − 1)bâ`, the expanded form of `(u_k, w)`.
pub fn commutator_closed_form(fam: &UnitFamily<'_>) -> Result<RingElement, UnitError> {
    let ring = &fam.ring;
    let g = ring.group();
    let a = fam.witness.a;
    let k = fam.k as i64;
    let coeff = ring.element([(g.pow(a, -k), 1), (g.pow(a, 1 - k), -1), (a, 1), (0, -1)]);
    let b_hat = ring.mul(&ring.basis(fam.witness.b), &ring.hat(a))?;
    Ok(ring.add(&ring.one(), &ring.mul(&coeff, &b_hat)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{witness_for, GroupSpec, GroupTable};
    use crate::ring::CoeffRing;

    fn setup(name: &str, a: &str, b: &str) -> (GroupTable, Witness) {
        let g = GroupSpec::parse(name).unwrap().build().unwrap();
        let w = witness_for(&g, g.find(a).unwrap(), g.find(b).unwrap()).unwrap();
        (g, w)
    }

    #[test]
    fn classify_examples() {
        let c = classify_order(3, 2, 3).unwrap();
        assert_eq!(
            (c.order, c.case),
            (PredictedOrder::Finite(3), OrderCase::CoprimeStep)
        );
        let c = classify_order(4, 2, 4).unwrap();
        assert_eq!(
            (c.order, c.case),
            (PredictedOrder::Infinite, OrderCase::Unbounded)
        );
        let c = classify_order(6, 3, 2).unwrap();
        assert_eq!(c.order, PredictedOrder::Finite(2));
        assert_eq!(c.case, OrderCase::SubgroupStep);
        assert_eq!(c.s_k, 2);
        assert_eq!(c.t_k, Ratio::from_integer(1));
        assert!(classify_order(4, 0, 2).is_err());
        assert!(classify_order(4, 5, 2).is_err());
        assert!(classify_order(4, 1, 1).is_err());
        assert!(classify_order(4, 1, 5).is_err());
    }

    #[test]
    fn s3_family() {
        let (g, w) = setup("S3", "(1 2)", "(1 2 3)");
        let fam = make_family(GroupRing::integral(&g), &w, 1).unwrap();
        assert_eq!(fam.u.support_len(), 5);
        assert_eq!(order_oracle(&fam).unwrap(), OracleVerdict::Finite(2));
        assert!(make_family(GroupRing::integral(&g), &w, 3).is_err());
        assert!(make_family(GroupRing::integral(&g), &w, 0).is_err());
    }

    #[test]
    fn s4_infinite_with_trace_certificate() {
        let (g, w) = setup("S4", "(1 2 3 4)", "(1 2)");
        let fam = make_family(GroupRing::integral(&g), &w, 2).unwrap();
        assert_eq!(
            order_oracle(&fam).unwrap(),
            OracleVerdict::CertifiedInfinite
        );
        assert_eq!(trace_certificate(&fam).unwrap(), BigInt::from(1));
    }

    #[test]
    fn s3xs3_subgroup_step() {
        let (g, w) = setup("S3xS3", "(1 2 3)(4 5)", "(1 2)(4 6)");
        let fam = make_family(GroupRing::integral(&g), &w, 3).unwrap();
        assert_eq!(order_oracle(&fam).unwrap(), OracleVerdict::Finite(2));
        assert!(OracleVerdict::Finite(2).agrees_with(classify_order(6, 3, 2).unwrap().order));
    }

    #[test]
    fn nilpotent_part_squares_to_zero() {
        let (g, w) = setup("A4", "(1 2 3)", "(1 2)(3 4)");
        let ring = GroupRing::integral(&g);
        let fam = make_family(ring, &w, 1).unwrap();
        assert!(ring.mul(&fam.nilpotent, &fam.nilpotent).unwrap().is_zero());
        assert_eq!(ring.augmentation(&fam.w), BigInt::from(1));
        assert!(!ring.is_one(&fam.w));
        let wak = ring.mul(&fam.w, &ring.basis(g.pow(w.a, 1))).unwrap();
        assert_eq!(wak, fam.u);
    }

    #[test]
    fn closed_powers_match_repeated_multiplication() {
        let (g, w) = setup("S4", "(1 2 3 4)", "(1 2)");
        let ring = GroupRing::integral(&g);
        for k in 1..=4 {
            let fam = make_family(ring, &w, k).unwrap();
            let mut acc = ring.one();
            for i in 0..=(2 * g.exponent() as u64) {
                assert_eq!(fam.pow_u_closed(i).unwrap(), acc, "k={k} i={i}");
                acc = ring.mul(&acc, &fam.u).unwrap();
            }
        }
    }

    #[test]
    fn syllables_and_products() {
        let (g, w) = setup("S4", "(1 2 3 4)", "(1 2)");
        for k in [1, 2, 3] {
            let fam = make_family(GroupRing::integral(&g), &w, k).unwrap();
            let syl = make_syllables(&fam).unwrap();
            assert!(check_syllable_products(&fam, &syl).unwrap().is_empty());
            for name in SyllableName::ALL {
                for m in 1..=8 {
                    assert!(check_power_identity(&fam, &syl, name, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn commutator_identities() {
        let (g, w) = setup("D5", "(2 5)(3 4)", "(1 2 3 4 5)");
        let ring = GroupRing::integral(&g);
        let fam = make_family(ring, &w, 1).unwrap();
        let c = commutator(&ring, &fam.u, &fam.w, &fam.u_inv, &fam.w_inv).unwrap();
        assert_eq!(c, commutator_closed_form(&fam).unwrap());
        assert!(!ring.is_one(&c));
        let same = commutator(&ring, &fam.u, &fam.u, &fam.u_inv, &fam.u_inv).unwrap();
        assert!(ring.is_one(&same));
        assert!(commutator(&ring, &fam.u, &fam.w, &fam.u_inv, &fam.w).is_err());
    }

    #[test]
    fn prime_field_truncates_infinite_order() {
        // u^2 = 1 + N with N^2 = 0, so u^10 = 1 + 5N vanishes over GF(5)
        let (g, w) = setup("S4", "(1 2 3 4)", "(1 2)");
        let ring = GroupRing::new(&g, CoeffRing::prime_field(5).unwrap());
        let fam = make_family(ring, &w, 2).unwrap();
        let verdict = order_oracle(&fam).unwrap();
        assert_eq!(verdict, OracleVerdict::Finite(10));
        assert!(!verdict.agrees_with(PredictedOrder::Infinite));
        let ring7 = GroupRing::new(&g, CoeffRing::prime_field(7).unwrap());
        let fam7 = make_family(ring7, &w, 2).unwrap();
        assert_eq!(order_oracle(&fam7).unwrap(), OracleVerdict::ExceedsBound);
    }
}
