//! Named group constructors and the group input format.
//!
//! A group spec is either a name (`S4`, `D6`, `Q8`, `C12`, `A4`, products such
//! as `S3xS3`), or JSON:
//!
//! ```json
//! {"family": "S4"}
//! {"product": [{"family": "S3"}, {"family": "S3"}]}
//! {"degree": 3, "generators": ["(1 2 3)", "(1 2)"]}
//! ```

use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use super::table::{build_group, GroupTable};
use crate::error::GroupError;

/// The default catalog scanned by `--group catalog`.
pub const CATALOG: [&str; 9] = ["C12", "Q8", "S3", "D4", "D5", "D6", "A4", "S4", "S3xS3"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Family {
        family: String,
    },
    Product {
        product: Vec<GroupSpec>,
    },
    Generators {
        degree: usize,
        generators: Vec<String>,
    },
}

impl GroupSpec {
    /// Parses a name like `S3xS3` or a JSON document.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| GroupError::Parse(e.to_string()));
        }
        let parts: Vec<&str> = text.split(['x', '×', '*']).map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(GroupError::Parse(format!("{text:?}")));
        }
        if parts.len() == 1 {
            return Ok(GroupSpec::Family {
                family: parts[0].to_string(),
            });
        }
        Ok(GroupSpec::Product {
            product: parts
                .into_iter()
                .map(|p| GroupSpec::Family {
                    family: p.to_string(),
                })
                .collect(),
        })
    }

    pub fn display_name(&self) -> String {
        match self {
            GroupSpec::Family { family } => family.clone(),
            GroupSpec::Product { product } => product
                .iter()
                .map(GroupSpec::display_name)
                .collect::<Vec<_>>()
                .join("x"),
            GroupSpec::Generators { generators, .. } => format!("<{}>", generators.join(", ")),
        }
    }

    pub fn generators(&self) -> Result<Vec<Permutation>, GroupError> {
        match self {
            GroupSpec::Family { family } => family_generators(family),
            GroupSpec::Product { product } => {
                let factors = product
                    .iter()
                    .map(GroupSpec::generators)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(direct_product(&factors))
            }
            GroupSpec::Generators { degree, generators } => generators
                .iter()
                .map(|g| Permutation::parse_cycles(g, *degree))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<GroupTable, GroupError> {
        Ok(build_group(&self.generators()?)?.named(self.display_name()))
    }
}

fn degree_of(gens: &[Permutation]) -> usize {
    gens.first().map_or(1, Permutation::degree)
}

/// Generators of a direct product acting on disjoint point sets.
pub fn direct_product(factors: &[Vec<Permutation>]) -> Vec<Permutation> {
    let total: usize = factors.iter().map(|f| degree_of(f)).sum();
    let mut offset = 0;
    let mut out = Vec::new();
    for f in factors {
        out.extend(f.iter().map(|g| g.shifted(offset, total)));
        offset += degree_of(f);
    }
    out
}

fn cycle_on(points: impl IntoIterator<Item = usize>, degree: usize) -> Permutation {
    let pts: Vec<usize> = points.into_iter().collect();
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for (i, &p) in pts.iter().enumerate() {
        images[p] = pts[(i + 1) % pts.len()] as u32;
    }
    Permutation::from_images(images).expect("a cycle is a permutation")
}

pub fn cyclic(n: usize) -> Vec<Permutation> {
    vec![cycle_on(0..n.max(1), n.max(1))]
}

/// Dihedral group of order `2n` acting on the vertices of an n-gon.
pub fn dihedral(n: usize) -> Vec<Permutation> {
    let n = n.max(1);
    let reflection = Permutation::from_images((0..n).map(|i| ((n - i) % n) as u32).collect())
        .expect("reflection is a permutation");
    vec![cycle_on(0..n, n), reflection]
}

pub fn symmetric(n: usize) -> Vec<Permutation> {
    if n < 2 {
        return vec![];
    }
    vec![cycle_on([0, 1], n), cycle_on(0..n, n)]
}

pub fn alternating(n: usize) -> Vec<Permutation> {
    (2..n).map(|i| cycle_on([0, 1, i], n)).collect()
}

/// Q8 through its left regular representation on 8 points.
pub fn quaternion() -> Vec<Permutation> {
    // element index = 2·unit + sign, units 1, i, j, k
    fn mul_units(x: usize, y: usize) -> (usize, bool) {
        const TABLE: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        TABLE[x][y]
    }
    let left = |unit: usize| {
        let images = (0..8)
            .map(|e| {
                let (u, neg) = mul_units(unit, e / 2);
                (2 * u + ((e % 2 == 1) ^ neg) as usize) as u32
            })
            .collect();
        Permutation::from_images(images).expect("regular action is a permutation")
    };
    vec![left(1), left(2)]
}

fn family_generators(name: &str) -> Result<Vec<Permutation>, GroupError> {
    let unknown = || GroupError::UnknownFamily(name.to_string());
    if name.eq_ignore_ascii_case("Q8") {
        return Ok(quaternion());
    }
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
    if n == 0 {
        return Err(unknown());
    }
    match head {
        'C' => Ok(cyclic(n)),
        'D' => Ok(dihedral(n)),
        'S' => Ok(symmetric(n)),
        'A' => Ok(alternating(n)),
        _ => Err(unknown()),
    }
}
