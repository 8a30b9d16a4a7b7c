//! Built-in families of relation identities.
//!
//! Each family produces a [`Statement`] characterizing a Maltsev-style
//! property at the relation level: the tolerance identity whose validity
//! forces 2-distributivity, the identities valid in 3-distributive
//! varieties and in varieties with 2 Gumm terms, their transitive-closure
//! corollaries, the identities equivalent to congruence n-permutability
//! (also in combination with distributivity or modularity), and the
//! multi-pair bounds. Parametric families take a level (the `n`, `k`, or
//! number of relation pairs); fixed families take none.

use thiserror::Error;

use crate::rel::Sort;

use super::ast::{Connective, Expr, Statement};

/// Failures constructing a family member.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown identity family `{0}`")]
    Unknown(String),
    #[error("family `{id}` needs a level (at least {min})")]
    LevelRequired { id: String, min: usize },
    #[error("family `{id}` needs a level of at least {min}, got {got}")]
    LevelTooSmall { id: String, min: usize, got: usize },
    #[error("family `{id}` is a single identity and takes no level")]
    LevelNotAccepted { id: String },
}

/// Canonical ids of every built-in family, parametric ones first.
pub fn family_ids() -> &'static [&'static str] {
    &[
        "jonsson",
        "distrib-jr",
        "nperm-ne",
        "nperm-nra",
        "nperm-nr",
        "nperm-nrr",
        "nperm-nrrr",
        "nperm-nrrrr",
        "nperm-nrup",
        "nperm-nrupp",
        "cd-np-anrr",
        "cd-np-anrrr",
        "cd-np-anrrrrtol",
        "cd-np-anrrrrcon",
        "cd-np-anrupp",
        "cm-np-nram",
        "cm-np-nrm",
        "cm-np-nrrm",
        "cm-np-nrrrm",
        "cm-np-nruppm",
        "amm-1",
        "amm-2",
        "amm-3",
        "id",
        "dist3-3a",
        "dist3-3b",
        "dist3-3c",
        "gumm-3ga",
        "gumm-3gb",
        "gumm-3gc",
        "cor3-3aa",
        "cor3-3bb",
        "cor3-3cc",
        "cor3-3ccb",
        "cor3-3dd",
    ]
}

/// Splits a CLI-style spec like `jonsson(3)` or `dist3(3a)` into a family
/// id and an optional numeric level: a numeric argument is the level, any
/// other argument is folded into the id with a dash.
pub fn parse_family_spec(spec: &str) -> (String, Option<usize>) {
    let spec = spec.trim();
    if let Some(open) = spec.find('(') {
        if let Some(stripped) = spec[open + 1..].strip_suffix(')') {
            let base = spec[..open].trim();
            let arg = stripped.trim();
            if let Ok(level) = arg.parse::<usize>() {
                return (base.to_string(), Some(level));
            }
            return (format!("{base}-{arg}"), None);
        }
    }
    (spec.to_string(), None)
}

fn v(name: &str) -> Expr {
    Expr::var(name)
}

fn m2(a: Expr, b: Expr) -> Expr {
    Expr::meet(vec![a, b])
}

/// `m` alternating factors `a, b, a, b, ..`.
fn alt(m: usize, a: &Expr, b: &Expr) -> Expr {
    assert!(m >= 1);
    Expr::compose(
        (0..m)
            .map(|i| if i % 2 == 0 { a.clone() } else { b.clone() })
            .collect(),
    )
}

/// `m` factors in the doubled pattern `a, b, b, a, a, b, b, ..`.
fn dbl(m: usize, a: &Expr, b: &Expr) -> Expr {
    assert!(m >= 1);
    Expr::compose(
        (0..m)
            .map(|i| {
                if i == 0 {
                    a.clone()
                } else if ((i - 1) / 2) % 2 == 0 {
                    b.clone()
                } else {
                    a.clone()
                }
            })
            .collect(),
    )
}

/// `k`-fold composition of `e` with itself.
fn pow(e: &Expr, k: usize) -> Expr {
    assert!(k >= 1);
    Expr::compose(vec![e.clone(); k])
}

fn stmt(decls: &[(&str, Sort)], lhs: Expr, connective: Connective, rhs: Expr) -> Statement {
    Statement {
        decls: decls
            .iter()
            .map(|(name, sort)| (name.to_string(), *sort))
            .collect(),
        lhs,
        connective,
        rhs,
    }
}

fn need_level(id: &str, level: Option<usize>, min: usize) -> Result<usize, FamilyError> {
    match level {
        None => Err(FamilyError::LevelRequired {
            id: id.to_string(),
            min,
        }),
        Some(l) if l < min => Err(FamilyError::LevelTooSmall {
            id: id.to_string(),
            min,
            got: l,
        }),
        Some(l) => Ok(l),
    }
}

fn no_level(id: &str, level: Option<usize>) -> Result<(), FamilyError> {
    if level.is_some() {
        Err(FamilyError::LevelNotAccepted { id: id.to_string() })
    } else {
        Ok(())
    }
}

/// Builds the statement of family `id` at the given level.
pub fn gen_identity(id: &str, level: Option<usize>) -> Result<Statement, FamilyError> {
    use Connective::{Equal, Subset};
    use Sort::{Admissible as Rel, Congruence as Cong, Tolerance as Tol};

    let pair_decls = |l: usize, lead: &[(&str, Sort)]| -> Vec<(String, Sort)> {
        let mut decls: Vec<(String, Sort)> = lead
            .iter()
            .map(|(name, sort)| (name.to_string(), *sort))
            .collect();
        for i in 1..=l {
            decls.push((format!("S{i}"), Rel));
            decls.push((format!("T{i}"), Rel));
        }
        decls
    };

    match id {
        "jonsson" => {
            let n = need_level(id, level, 2)?;
            let (a, b, c) = (v("a"), v("b"), v("c"));
            Ok(stmt(
                &[("a", Cong), ("b", Cong), ("c", Cong)],
                m2(a.clone(), Expr::compose(vec![b.clone(), c.clone()])),
                Subset,
                alt(n, &m2(a.clone(), b), &m2(a, c)),
            ))
        }
        "distrib-jr" => {
            let k = need_level(id, level, 2)?;
            let (a, s, t) = (v("a"), v("S"), v("T"));
            Ok(stmt(
                &[("a", Cong), ("S", Rel), ("T", Rel)],
                m2(a.clone(), Expr::compose(vec![s.clone(), t.clone()])),
                Subset,
                alt(k, &m2(a.clone(), s), &m2(a, t)),
            ))
        }
        "nperm-ne" => {
            let n = need_level(id, level, 2)?;
            let names: Vec<String> = (1..=n).map(|i| format!("R{i}")).collect();
            let decls: Vec<(String, Sort)> =
                names.iter().map(|name| (name.clone(), Rel)).collect();
            let lhs = Expr::compose(names.iter().map(|name| v(name)).collect());
            let rhs = Expr::compose(
                (0..n - 1)
                    .map(|i| Expr::gen(vec![v(&names[i]), v(&names[i + 1])]))
                    .collect(),
            );
            Ok(Statement {
                decls,
                lhs,
                connective: Subset,
                rhs,
            })
        }
        "nperm-nra" => {
            let n = need_level(id, level, 2)?;
            let r = v("R");
            Ok(stmt(&[("R", Rel)], pow(&r, n), Subset, pow(&r, n - 1)))
        }
        "nperm-nr" => {
            let n = need_level(id, level, 2)?;
            let r = v("R");
            Ok(stmt(&[("R", Rel)], r.clone().star(), Equal, pow(&r, n - 1)))
        }
        "nperm-nrr" => {
            let n = need_level(id, level, 2)?;
            let (s, t) = (v("S"), v("T"));
            Ok(stmt(
                &[("S", Rel), ("T", Rel)],
                Expr::compose(vec![s.clone(), t.clone()]).star(),
                Equal,
                alt(2 * n - 2, &s, &t),
            ))
        }
        "nperm-nrrr" => {
            let n = need_level(id, level, 2)?;
            let (s, t) = (v("S"), v("T"));
            Ok(stmt(
                &[("S", Rel), ("T", Rel)],
                Expr::compose(vec![s.clone(), t.clone()]).star(),
                Equal,
                dbl(2 * n - 2, &s, &t),
            ))
        }
        "nperm-nrrrr" => {
            let n = need_level(id, level, 2)?;
            let (s, t) = (v("S"), v("T"));
            Ok(stmt(
                &[("S", Rel), ("T", Rel)],
                dbl(2 * n - 2, &s, &t),
                Equal,
                dbl(2 * n - 2, &t, &s),
            ))
        }
        "nperm-nrup" => {
            let n = need_level(id, level, 2)?;
            let (s, t) = (v("S"), v("T"));
            Ok(stmt(
                &[("S", Rel), ("T", Rel)],
                alt(2 * n - 1, &s, &t),
                Subset,
                alt(2 * n - 2, &t, &s),
            ))
        }
        "nperm-nrupp" => {
            let n = need_level(id, level, 2)?;
            let (s, t) = (v("S"), v("T"));
            Ok(stmt(
                &[("S", Rel), ("T", Rel)],
                alt(2 * n - 1, &s, &t),
                Equal,
                alt(2 * n - 1, &t, &s),
            ))
        }
        "cd-np-anrr" | "cd-np-anrrr" => {
            let n = need_level(id, level, 2)?;
            let (h, s, t) = (v("H"), v("S"), v("T"));
            let lhs = m2(
                h.clone(),
                Expr::compose(vec![s.clone(), t.clone()]).star(),
            )
            .star();
            let (hs, ht) = (m2(h.clone(), s), m2(h, t));
            let rhs = if id == "cd-np-anrr" {
                alt(2 * n - 2, &hs, &ht)
            } else {
                dbl(2 * n - 2, &hs, &ht)
            };
            Ok(stmt(&[("H", Tol), ("S", Rel), ("T", Rel)], lhs, Equal, rhs))
        }
        "cd-np-anrrrrtol" => {
            let n = need_level(id, level, 2)?;
            let (h, s, t) = (v("H"), v("S"), v("T"));
            Ok(stmt(
                &[("H", Tol), ("S", Rel), ("T", Rel)],
                m2(h.clone(), dbl(2 * n - 2, &s, &t)),
                Subset,
                dbl(2 * n - 2, &m2(h.clone(), t), &m2(h, s)),
            ))
        }
        "cd-np-anrrrrcon" => {
            let n = need_level(id, level, 2)?;
            let (a, s, t) = (v("a"), v("S"), v("T"));
            Ok(stmt(
                &[("a", Cong), ("S", Rel), ("T", Rel)],
                m2(a.clone(), dbl(2 * n - 2, &s, &t)),
                Equal,
                dbl(2 * n - 2, &m2(a.clone(), t), &m2(a, s)),
            ))
        }
        "cd-np-anrupp" => {
            let n = need_level(id, level, 2)?;
            let (a, s, t) = (v("a"), v("S"), v("T"));
            Ok(stmt(
                &[("a", Cong), ("S", Rel), ("T", Rel)],
                m2(a.clone(), alt(2 * n - 1, &s, &t)),
                Equal,
                alt(2 * n - 1, &m2(a.clone(), t), &m2(a, s)),
            ))
        }
        "cm-np-nram" => {
            let n = need_level(id, level, 2)?;
            let (h, r) = (v("H"), v("R"));
            Ok(stmt(
                &[("H", Tol), ("R", Rel)],
                m2(h.clone(), pow(&r, n)),
                Subset,
                pow(&m2(h, r), n - 1),
            ))
        }
        "cm-np-nrm" => {
            let n = need_level(id, level, 2)?;
            let (a, r) = (v("a"), v("R"));
            Ok(stmt(
                &[("a", Cong), ("R", Rel)],
                m2(a.clone(), r.clone().star()),
                Equal,
                pow(&m2(a, r), n - 1),
            ))
        }
        "cm-np-nrrm" | "cm-np-nrrrm" => {
            let n = need_level(id, level, 2)?;
            let (a, s, t) = (v("a"), v("S"), v("T"));
            let lhs = m2(
                a.clone(),
                Expr::compose(vec![s.clone(), m2(a.clone(), t.clone())]).star(),
            );
            let (als, alt_) = (m2(a.clone(), s), m2(a, t));
            let rhs = if id == "cm-np-nrrm" {
                alt(2 * n - 2, &als, &alt_)
            } else {
                dbl(2 * n - 2, &als, &alt_)
            };
            Ok(stmt(&[("a", Cong), ("S", Rel), ("T", Rel)], lhs, Equal, rhs))
        }
        "cm-np-nruppm" => {
            let n = need_level(id, level, 2)?;
            let (a, s, t) = (v("a"), v("S"), v("T"));
            Ok(stmt(
                &[("a", Cong), ("S", Rel), ("T", Rel)],
                m2(a.clone(), alt(2 * n - 1, &s, &m2(a.clone(), t.clone()))),
                Equal,
                alt(2 * n - 1, &m2(a.clone(), t), &m2(a, s)),
            ))
        }
        "amm-1" | "amm-2" => {
            let l = need_level(id, level, 1)?;
            let decls = pair_decls(l, &[("R", Rel)]);
            let r = v("R");
            let si = |i: usize| v(&format!("S{i}"));
            let ti = |i: usize| v(&format!("T{i}"));
            let mut lhs_parts = vec![r.clone()];
            let mut f1_parts = vec![r.clone()];
            for i in 1..=l {
                lhs_parts.push(Expr::compose(vec![si(i), ti(i)]));
                f1_parts.push(Expr::compose(vec![
                    m2(r.clone(), si(i)),
                    m2(r.clone(), ti(i)),
                ]));
            }
            let f1 = Expr::meet(f1_parts);
            let f2 = if id == "amm-1" {
                let mut parts = vec![r.clone()];
                for i in 1..=l {
                    parts.push(Expr::compose(vec![
                        m2(r.clone(), si(i)),
                        m2(r.clone(), ti(i)),
                    ]));
                    parts.push(Expr::compose(vec![
                        m2(r.clone(), ti(i)),
                        m2(r.clone(), si(i)),
                    ]));
                }
                for i in 1..=l {
                    parts.push(Expr::gen(vec![si(i), ti(i)]));
                }
                Expr::meet(parts)
            } else {
                let mut parts = vec![r.clone()];
                for i in 1..=l {
                    parts.push(Expr::gen(vec![si(i), ti(i)]));
                }
                Expr::meet(parts)
            };
            Ok(Statement {
                decls,
                lhs: Expr::meet(lhs_parts),
                connective: Subset,
                rhs: Expr::compose(vec![f1, f2]),
            })
        }
        "amm-3" => {
            // The two-directed-terms instance: the outer power is fixed at 2.
            let l = need_level(id, level, 1)?;
            let decls = pair_decls(l, &[("H", Tol)]);
            let h = v("H");
            let mut lhs_parts = vec![h.clone()];
            let mut inner_parts = vec![h.clone()];
            for i in 1..=l {
                let (s, t) = (v(&format!("S{i}")), v(&format!("T{i}")));
                lhs_parts.push(Expr::compose(vec![s.clone(), t.clone()]));
                inner_parts.push(Expr::compose(vec![m2(h.clone(), s), m2(h.clone(), t)]));
            }
            let inner = Expr::meet(inner_parts);
            Ok(Statement {
                decls,
                lhs: Expr::meet(lhs_parts),
                connective: Subset,
                rhs: pow(&inner, 2),
            })
        }
        "id" => {
            no_level(id, level)?;
            let (a, b, h) = (v("a"), v("b"), v("H"));
            Ok(stmt(
                &[("a", Cong), ("b", Cong), ("H", Tol)],
                m2(a.clone(), Expr::compose(vec![b.clone(), h.clone()])),
                Subset,
                Expr::compose(vec![
                    m2(a.clone(), b.clone()),
                    m2(a.clone(), h),
                    m2(a, b),
                ]),
            ))
        }
        "dist3-3a" | "dist3-3b" => {
            no_level(id, level)?;
            let (r, s, t) = (v("R"), v("S"), v("T"));
            let lhs = m2(r.clone(), Expr::compose(vec![s.clone(), t.clone()]));
            let (rs, rt) = (m2(r.clone(), s), m2(r, t));
            let rhs = if id == "dist3-3a" {
                alt(4, &rs, &rt)
            } else {
                dbl(4, &rs, &rt)
            };
            Ok(stmt(&[("R", Rel), ("S", Rel), ("T", Rel)], lhs, Subset, rhs))
        }
        "dist3-3c" => {
            no_level(id, level)?;
            let (r, s, c) = (v("R"), v("S"), v("c"));
            Ok(stmt(
                &[("R", Rel), ("S", Rel), ("c", Cong)],
                m2(r.clone(), Expr::compose(vec![s.clone(), c.clone()])),
                Subset,
                Expr::compose(vec![
                    m2(r.clone(), s.clone()),
                    m2(r.clone(), c),
                    m2(r, s),
                ]),
            ))
        }
        "gumm-3ga" | "gumm-3gb" | "gumm-3gc" => {
            no_level(id, level)?;
            let (r, s, t, w) = (v("R"), v("S"), v("T"), v("W"));
            let decls = [("R", Rel), ("S", Rel), ("T", Rel), ("W", Rel)];
            let (rs, rt, rw) = (
                m2(r.clone(), s.clone()),
                m2(r.clone(), t.clone()),
                m2(r.clone(), w.clone()),
            );
            let (lhs_mid, rhs) = match id {
                "gumm-3ga" => (
                    Expr::compose(vec![s.clone(), t.clone()]),
                    Expr::compose(vec![
                        rs.clone(),
                        rt.clone(),
                        m2(r.clone(), Expr::gen(vec![s, t, w])),
                    ]),
                ),
                "gumm-3gb" => (
                    Expr::compose(vec![s.clone(), rt.clone()]),
                    Expr::compose(vec![
                        rs.clone(),
                        rt.clone(),
                        rt.clone(),
                        m2(r.clone(), Expr::gen(vec![s, w])),
                    ]),
                ),
                _ => (
                    Expr::compose(vec![rs.clone(), t.clone()]),
                    Expr::compose(vec![
                        rs.clone(),
                        rt.clone(),
                        rs.clone(),
                        m2(r.clone(), Expr::gen(vec![t, w])),
                    ]),
                ),
            };
            Ok(stmt(
                &decls,
                Expr::compose(vec![m2(r, lhs_mid), rw]),
                Subset,
                rhs,
            ))
        }
        "cor3-3aa" => {
            no_level(id, level)?;
            let (r, s, t) = (v("R"), v("S"), v("T"));
            Ok(stmt(
                &[("R", Rel), ("S", Rel), ("T", Rel)],
                m2(
                    r.clone().star(),
                    Expr::compose(vec![s.clone(), t.clone()]).star(),
                ),
                Equal,
                Expr::compose(vec![m2(r.clone(), s), m2(r, t)]).star(),
            ))
        }
        "cor3-3bb" => {
            no_level(id, level)?;
            let (r, vv, s, t) = (v("R"), v("V"), v("S"), v("T"));
            Ok(stmt(
                &[("R", Rel), ("V", Rel), ("S", Rel), ("T", Rel)],
                m2(
                    Expr::compose(vec![r.clone(), vv.clone()]).star(),
                    Expr::compose(vec![s.clone(), t.clone()]).star(),
                ),
                Equal,
                Expr::compose(vec![
                    m2(r.clone(), s.clone()),
                    m2(r, t.clone()),
                    m2(vv.clone(), s),
                    m2(vv, t),
                ])
                .star(),
            ))
        }
        "cor3-3cc" => {
            no_level(id, level)?;
            let (r, s, t) = (v("R"), v("S"), v("T"));
            Ok(stmt(
                &[("R", Rel), ("S", Rel), ("T", Rel)],
                m2(
                    r.clone().star(),
                    Expr::compose(vec![s.clone(), t.clone()]).star(),
                ),
                Equal,
                Expr::compose(vec![
                    Expr::compose(vec![m2(r.clone(), s.clone()), m2(r.clone(), t.clone())])
                        .star(),
                    m2(r, Expr::gen(vec![s, t])),
                ]),
            ))
        }
        "cor3-3ccb" => {
            no_level(id, level)?;
            let (r, s, t) = (v("R"), v("S"), v("T"));
            Ok(stmt(
                &[("R", Rel), ("S", Rel), ("T", Rel)],
                m2(
                    r.clone().star(),
                    Expr::compose(vec![m2(r.clone(), s.clone()), t.clone()]).star(),
                ),
                Equal,
                Expr::compose(vec![m2(r.clone(), s), m2(r, t)]).star(),
            ))
        }
        "cor3-3dd" => {
            no_level(id, level)?;
            let (r, s) = (v("R"), v("S"));
            Ok(stmt(
                &[("R", Rel), ("S", Rel)],
                m2(r.clone().star(), s.clone().star()),
                Equal,
                m2(r, s).star(),
            ))
        }
        other => Err(FamilyError::Unknown(other.to_string())),
    }
}
