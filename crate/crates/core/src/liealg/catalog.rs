//! Named Lie algebras.
//!
//! Identifiers are stable CLI names:
//!
//! | name          | algebra                                              |
//! |---------------|------------------------------------------------------|
//! | `h<2m+1>`     | Heisenberg algebra, `[x_i, y_i] = z`                  |
//! | `n<n>`        | model filiform algebra, `[x_1, x_i] = x_{i+1}`        |
//! | `a<n>`        | abelian algebra                                      |
//! | `g_6_14`      | `[x_1, x_i] = x_{i+1}` (2 ≤ i ≤ 4), `[x_2, x_3] = x_6` |
//! | `F_<g>_<c>`   | free-nilpotent algebra on the Lyndon basis           |
//! | `F_2_3_hall`, `F_3_2_hall`, `F_3_3_hall` | classical Hall-basis tables |

use num_traits::One;

use super::{default_names, LieAlgebraTable, LieError};
use crate::exact::{Rational, SparseRow};
use crate::freelie::{build_free_nilpotent_with_budget, BuildBudget};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub table: LieAlgebraTable,
    /// `(g, c)` when the entry is a presentation of F_{g,c}.
    pub free_nilpotent: Option<(usize, usize)>,
}

fn unit(k: usize) -> SparseRow {
    vec![(k, Rational::one())]
}

fn table(names: Vec<String>, brackets: Vec<(usize, usize, SparseRow)>) -> LieAlgebraTable {
    LieAlgebraTable::new(names, brackets).expect("catalog tables are valid")
}

/// Heisenberg algebra of dimension 2m+1 on x_1..x_m, y_1..y_m, z.
pub fn heisenberg(m: usize) -> LieAlgebraTable {
    let mut names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    names.extend((1..=m).map(|i| format!("y{i}")));
    names.push("z".into());
    let brackets = (0..m).map(|i| (i, m + i, unit(2 * m))).collect();
    table(names, brackets)
}

/// Filiform algebra with `[x_1, x_i] = x_{i+1}` for 2 ≤ i ≤ n−1.
pub fn filiform(n: usize) -> LieAlgebraTable {
    let brackets = (1..n.saturating_sub(1)).map(|i| (0, i, unit(i + 1))).collect();
    table(default_names("x", n), brackets)
}

pub fn g_6_14() -> LieAlgebraTable {
    let mut brackets: Vec<(usize, usize, SparseRow)> = (1..4).map(|i| (0, i, unit(i + 1))).collect();
    brackets.push((1, 2, unit(5)));
    table(default_names("x", 6), brackets)
}

/// F_{2,3}: `[e1,e2]=e3, [e1,e3]=e4, [e2,e3]=e5`.
pub fn free_2_3_hall() -> LieAlgebraTable {
    table(
        default_names("e", 5),
        vec![(0, 1, unit(2)), (0, 2, unit(3)), (1, 2, unit(4))],
    )
}

/// F_{3,2}: `[e1,e2]=e4, [e1,e3]=e5, [e2,e3]=e6`.
pub fn free_3_2_hall() -> LieAlgebraTable {
    table(
        default_names("e", 6),
        vec![(0, 1, unit(3)), (0, 2, unit(4)), (1, 2, unit(5))],
    )
}

/// F_{3,3} on the Hall basis x1..x14, including `[x3,x4] = x11 - x9`.
pub fn free_3_3_hall() -> LieAlgebraTable {
    let x = |k: usize| k - 1;
    let e = |k: usize| unit(k - 1);
    let brackets = vec![
        (x(1), x(2), e(4)),
        (x(1), x(3), e(5)),
        (x(1), x(4), e(7)),
        (x(1), x(5), e(8)),
        (x(1), x(6), e(9)),
        (x(2), x(3), e(6)),
        (x(2), x(4), e(10)),
        (x(2), x(5), e(11)),
        (x(2), x(6), e(12)),
        (x(3), x(4), vec![(x(9), -Rational::one()), (x(11), Rational::one())]),
        (x(3), x(5), e(13)),
        (x(3), x(6), e(14)),
    ];
    table(default_names("x", 14), brackets)
}

fn parse_suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

fn entry(name: &str, description: String, table: LieAlgebraTable, free: Option<(usize, usize)>) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        description,
        table,
        free_nilpotent: free,
    }
}

/// Looks up a catalog name.
pub fn catalog(name: &str) -> Result<CatalogEntry, LieError> {
    let unknown = || LieError::UnknownName(name.to_string());
    match name {
        "g_6_14" => {
            return Ok(entry(
                name,
                "6-dim stem algebra [x1,xi]=x(i+1) (2<=i<=4), [x2,x3]=x6".into(),
                g_6_14(),
                None,
            ))
        }
        "F_2_3_hall" => {
            return Ok(entry(name, "F(2,3) on the Hall basis".into(), free_2_3_hall(), Some((2, 3))))
        }
        "F_3_2_hall" => {
            return Ok(entry(name, "F(3,2) on the Hall basis".into(), free_3_2_hall(), Some((3, 2))))
        }
        "F_3_3_hall" => {
            return Ok(entry(name, "F(3,3) on the Hall basis".into(), free_3_3_hall(), Some((3, 3))))
        }
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("F_") {
        let (g, c) = rest.split_once('_').ok_or_else(unknown)?;
        let (g, c): (usize, usize) = (g.parse().map_err(|_| unknown())?, c.parse().map_err(|_| unknown())?);
        let p = build_free_nilpotent_with_budget(g, c, BuildBudget::default()).map_err(|e| LieError::Build {
            name: name.to_string(),
            reason: e.to_string(),
        })?;
        return Ok(entry(
            name,
            format!("free-nilpotent F({g},{c}) on the Lyndon basis"),
            p.table,
            Some((g, c)),
        ));
    }
    if let Some(n) = parse_suffix(name, "h") {
        if n >= 3 && n % 2 == 1 {
            let m = (n - 1) / 2;
            let free = (m == 1).then_some((2, 2));
            return Ok(entry(name, format!("Heisenberg algebra of dimension {n}"), heisenberg(m), free));
        }
        return Err(unknown());
    }
    if let Some(n) = parse_suffix(name, "n") {
        if n >= 3 {
            let free = (n == 3).then_some((2, 2));
            return Ok(entry(name, format!("filiform algebra of dimension {n}"), filiform(n), free));
        }
        return Err(unknown());
    }
    if let Some(n) = parse_suffix(name, "a") {
        let free = (n >= 1).then_some((n, 1));
        return Ok(entry(name, format!("abelian algebra of dimension {n}"), LieAlgebraTable::abelian(n), free));
    }
    Err(unknown())
}

/// Name patterns accepted by [`catalog`], with descriptions.
pub fn catalog_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("h<2m+1>", "Heisenberg algebra, e.g. h3, h5"),
        ("n<n>", "model filiform algebra [x1,xi]=x(i+1), e.g. n4, n5, n6"),
        ("a<n>", "abelian algebra, e.g. a2"),
        ("g_6_14", "6-dim stem algebra with 2 generators and 2-dim center"),
        ("F_<g>_<c>", "free-nilpotent algebra on the Lyndon basis, e.g. F_2_10"),
        ("F_2_3_hall", "F(2,3) on the Hall basis"),
        ("F_3_2_hall", "F(3,2) on the Hall basis"),
        ("F_3_3_hall", "F(3,3) on the Hall basis (14-dim)"),
    ]
}
