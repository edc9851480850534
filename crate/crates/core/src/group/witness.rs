use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::table::{ElementSet, GroupTable};
use crate::error::GroupError;

/// A pair `(a, b)` with `⟨a⟩` non-normal and `b ∉ N_G(⟨a⟩)`, plus the derived
/// parameter `M` and the steps `k` for which `b` also fails to normalize `⟨a^k⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: usize,
    pub order_a: usize,
    pub b: usize,
    pub m: usize,
    pub valid_k: Vec<usize>,
}

impl Witness {
    pub fn is_valid_k(&self, k: usize) -> bool {
        self.valid_k.binary_search(&k).is_ok()
    }
}

/// Whether `b` normalizes `⟨a^e⟩`.
fn normalizes_power(g: &GroupTable, a: usize, b: usize, e: usize) -> bool {
    let c = g.pow(a, e as i64);
    g.normalizes_cyclic(b, c, &g.cyclic_subgroup(c))
}

/// Least `M ∈ [2, |a|]` with `b ∈ N_G(⟨a^M⟩)`.
pub fn compute_m(g: &GroupTable, a: usize, b: usize) -> Result<usize, GroupError> {
    let cyc = g.cyclic_subgroup(a);
    if g.normalizes_cyclic(b, a, &cyc) {
        return Err(not_witness(g, a, b, "b normalizes <a>"));
    }
    let order = g.element_order(a);
    Ok((2..=order)
        .find(|&m| normalizes_power(g, a, b, m))
        .unwrap_or(order))
}

fn not_witness(g: &GroupTable, a: usize, b: usize, why: &str) -> GroupError {
    GroupError::NotAWitness {
        a: g.label(a).to_string(),
        b: g.label(b).to_string(),
        why: why.to_string(),
    }
}

/// Builds the witness for a specific pair, rejecting pairs that fail the hypotheses.
pub fn witness_for(g: &GroupTable, a: usize, b: usize) -> Result<Witness, GroupError> {
    if a >= g.order() {
        return Err(GroupError::BadElement(a));
    }
    if b >= g.order() {
        return Err(GroupError::BadElement(b));
    }
    let m = compute_m(g, a, b)?;
    let order_a = g.element_order(a);
    let valid_k = (1..order_a)
        .filter(|&k| !normalizes_power(g, a, b, k))
        .collect();
    Ok(Witness {
        a,
        order_a,
        b,
        m,
        valid_k,
    })
}

/// All witnesses of `g`, ordered by `(a, b)`.
///
/// With `dedup`, only one `a` is kept per conjugacy class of the subgroup
/// `⟨a⟩`: the smallest-index generator of the class's first member.
pub fn find_witnesses(g: &GroupTable, dedup: bool) -> Vec<Witness> {
    let n = g.order();
    let cyclic: Vec<ElementSet> = (0..n).map(|x| g.cyclic_subgroup(x)).collect();
    let mut seen_classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for a in 1..n {
        let outside: Vec<usize> = (0..n)
            .filter(|&b| !g.normalizes_cyclic(b, a, &cyclic[a]))
            .collect();
        if outside.is_empty() {
            continue;
        }
        if dedup {
            let class_key = (0..n)
                .map(|x| {
                    let mut members: Vec<usize> =
                        cyclic[a].ones().map(|h| g.conjugate(x, h)).collect();
                    members.sort_unstable();
                    members
                })
                .min()
                .expect("group is nonempty");
            if !seen_classes.insert(class_key) {
                continue;
            }
        }
        for b in outside {
            out.push(witness_for(g, a, b).expect("b lies outside the normalizer"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn group(name: &str) -> GroupTable {
        GroupSpec::parse(name).unwrap().build().unwrap()
    }

    #[test]
    fn dedekind_and_abelian_have_no_witnesses() {
        assert!(find_witnesses(&group("Q8"), false).is_empty());
        assert!(find_witnesses(&group("C6"), false).is_empty());
        assert!(find_witnesses(&group("C12"), false).is_empty());
    }

    #[test]
    fn s3_witness() {
        let g = group("S3");
        let a = g.find("(1 2)").unwrap();
        let b = g.find("(1 2 3)").unwrap();
        let ws = find_witnesses(&g, false);
        let w = ws.iter().find(|w| w.a == a && w.b == b).unwrap();
        assert_eq!((w.order_a, w.m, w.valid_k.clone()), (2, 2, vec![1]));
        // 3 transpositions, each with 4 non-normalizing b
        assert_eq!(ws.len(), 12);
        assert_eq!(find_witnesses(&g, true).len(), 4);
    }

    #[test]
    fn m_examples() {
        let s4 = group("S4");
        let a = s4.find("(1 2 3 4)").unwrap();
        let b = s4.find("(1 2)").unwrap();
        assert_eq!(compute_m(&s4, a, b).unwrap(), 4);

        let g = group("S3xS3");
        let a = g.find("(1 2 3)(4 5)").unwrap();
        let b = g.find("(1 2)(4 6)").unwrap();
        assert_eq!(compute_m(&g, a, b).unwrap(), 2);
        let w = witness_for(&g, a, b).unwrap();
        assert_eq!(w.valid_k, vec![1, 3, 5]);
    }

    #[test]
    fn compute_m_rejects_normalizing_b() {
        let g = group("S3");
        let a = g.find("(1 2)").unwrap();
        assert!(matches!(
            compute_m(&g, a, a),
            Err(GroupError::NotAWitness { .. })
        ));
        let r = g.find("(1 2 3)").unwrap();
        assert!(compute_m(&g, r, a).is_err());
    }
}
