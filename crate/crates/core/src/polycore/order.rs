use std::cmp::Ordering;

use super::monomial::{check_arity, Monomial};
use crate::error::{Error, Result};

/// Order used inside a single block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Lex,
    Grevlex,
}

/// A block of variables (by ring index, largest first) with its own order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderBlock {
    pub vars: Vec<usize>,
    pub kind: BlockKind,
}

/// A monomial order. Variable 0 is the largest variable.
///
/// `Block` compares monomials block by block, earlier blocks dominating; it is
/// an elimination order for the variables of the first block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    Block(Vec<OrderBlock>),
}

#[inline]
fn lex_on(a: &[u32], b: &[u32], vars: impl Iterator<Item = usize>) -> Ordering {
    for i in vars {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[inline]
fn grevlex_full(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    let (ea, eb) = (a.exps(), b.exps());
    for i in (0..ea.len()).rev() {
        match ea[i].cmp(&eb[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

fn block_cmp(block: &OrderBlock, a: &[u32], b: &[u32]) -> Ordering {
    match block.kind {
        BlockKind::Lex => lex_on(a, b, block.vars.iter().copied()),
        BlockKind::Grevlex => {
            let da: u64 = block.vars.iter().map(|&i| a[i] as u64).sum();
            let db: u64 = block.vars.iter().map(|&i| b[i] as u64).sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                o => return o,
            }
            for &i in block.vars.iter().rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                }
            }
            Ordering::Equal
        }
    }
}

impl MonomialOrder {
    /// Checked comparison.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        check_arity(a, b)?;
        Ok(self.cmp(a, b))
    }

    /// Comparison for monomials of equal arity.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => lex_on(a.exps(), b.exps(), 0..a.arity()),
            MonomialOrder::Grevlex => grevlex_full(a, b),
            MonomialOrder::Block(blocks) => {
                for block in blocks {
                    match block_cmp(block, a.exps(), b.exps()) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Checks that a block order partitions `0..nvars`.
    pub fn validate(&self, nvars: usize) -> Result<()> {
        if let MonomialOrder::Block(blocks) = self {
            let mut seen = vec![false; nvars];
            for b in blocks {
                if b.vars.is_empty() {
                    return Err(Error::InvalidRing("empty order block".into()));
                }
                for &v in &b.vars {
                    if v >= nvars || seen[v] {
                        return Err(Error::InvalidRing(format!(
                            "order blocks do not partition the variables (index {v})"
                        )));
                    }
                    seen[v] = true;
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::InvalidRing("order blocks miss a variable".into()));
            }
        }
        Ok(())
    }

    /// Blocks describing this order restricted to the variables in `keep`
    /// (given in ring order).
    pub fn restricted_blocks(&self, keep: &[usize]) -> Vec<OrderBlock> {
        let mut out = Vec::new();
        match self {
            MonomialOrder::Lex | MonomialOrder::Grevlex => {
                if !keep.is_empty() {
                    out.push(OrderBlock {
                        vars: keep.to_vec(),
                        kind: if *self == MonomialOrder::Lex {
                            BlockKind::Lex
                        } else {
                            BlockKind::Grevlex
                        },
                    });
                }
            }
            MonomialOrder::Block(blocks) => {
                for b in blocks {
                    let vars: Vec<usize> = b.vars.iter().copied().filter(|v| keep.contains(v)).collect();
                    if !vars.is_empty() {
                        out.push(OrderBlock { vars, kind: b.kind });
                    }
                }
            }
        }
        out
    }

    /// Elimination order for `drop` (compared first, grevlex), then the
    /// remaining variables ordered by `self` restricted to them. On monomials
    /// free of `drop` it agrees with `self`.
    pub fn elimination(&self, drop: &[usize], nvars: usize) -> MonomialOrder {
        let keep: Vec<usize> = (0..nvars).filter(|v| !drop.contains(v)).collect();
        let mut blocks = Vec::new();
        if !drop.is_empty() {
            let mut d = drop.to_vec();
            d.sort_unstable();
            blocks.push(OrderBlock {
                vars: d,
                kind: BlockKind::Grevlex,
            });
        }
        blocks.extend(self.restricted_blocks(&keep));
        MonomialOrder::Block(blocks)
    }

    /// A block order built from consecutive groups of variable indices.
    pub fn blocks(groups: &[(&[usize], BlockKind)]) -> MonomialOrder {
        MonomialOrder::Block(
            groups
                .iter()
                .filter(|(v, _)| !v.is_empty())
                .map(|(v, k)| OrderBlock {
                    vars: v.to_vec(),
                    kind: *k,
                })
                .collect(),
        )
    }

    /// Remaps variable indices (used when a ring gains variables at the end).
    pub fn extended(&self, nvars_old: usize, extra: &[usize]) -> MonomialOrder {
        match self {
            MonomialOrder::Lex | MonomialOrder::Grevlex => {
                let mut blocks = self.restricted_blocks(&(0..nvars_old).collect::<Vec<_>>());
                if !extra.is_empty() {
                    blocks.push(OrderBlock {
                        vars: extra.to_vec(),
                        kind: BlockKind::Grevlex,
                    });
                }
                MonomialOrder::Block(blocks)
            }
            MonomialOrder::Block(b) => {
                let mut blocks = b.clone();
                if !extra.is_empty() {
                    blocks.push(OrderBlock {
                        vars: extra.to_vec(),
                        kind: BlockKind::Grevlex,
                    });
                }
                MonomialOrder::Block(blocks)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn spec_examples() {
        // x*y^2 vs x^2 under lex x>y
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 2]), &m(&[2, 0])), Ordering::Less);
        assert_eq!(MonomialOrder::Grevlex.cmp(&m(&[3, 1]), &m(&[3, 1])), Ordering::Equal);
        // x*z vs y^2 under grevlex x>y>z
        assert_eq!(MonomialOrder::Grevlex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn arity_mismatch_is_error() {
        assert!(MonomialOrder::Lex.compare(&m(&[1]), &m(&[1, 0])).is_err());
    }

    #[test]
    fn block_validation() {
        let ok = MonomialOrder::blocks(&[(&[2], BlockKind::Grevlex), (&[0, 1], BlockKind::Lex)]);
        assert!(ok.validate(3).is_ok());
        assert!(ok.validate(4).is_err());
        let dup = MonomialOrder::blocks(&[(&[0], BlockKind::Lex), (&[0, 1], BlockKind::Lex)]);
        assert!(dup.validate(2).is_err());
    }

    #[test]
    fn elimination_agrees_on_remaining_vars() {
        let elim = MonomialOrder::Grevlex.elimination(&[1], 3);
        // x*z vs x^2 without y: grevlex says x^2 > x*z
        assert_eq!(elim.cmp(&m(&[2, 0, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        // anything with y beats anything without
        assert_eq!(elim.cmp(&m(&[0, 1, 0]), &m(&[5, 0, 5])), Ordering::Greater);
    }

    fn orders() -> Vec<MonomialOrder> {
        vec![
            MonomialOrder::Lex,
            MonomialOrder::Grevlex,
            MonomialOrder::blocks(&[(&[1], BlockKind::Grevlex), (&[0, 2], BlockKind::Lex)]),
            MonomialOrder::blocks(&[(&[2, 0], BlockKind::Grevlex), (&[1], BlockKind::Grevlex)]),
        ]
    }

    proptest! {
        #[test]
        fn order_axioms(a in prop::collection::vec(0u32..4, 3),
                        b in prop::collection::vec(0u32..4, 3),
                        c in prop::collection::vec(0u32..4, 3)) {
            let (a, b, c) = (m(&a), m(&b), m(&c));
            let one = Monomial::one(3);
            for ord in orders() {
                prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
                prop_assert_eq!(ord.cmp(&a, &b) == Ordering::Equal, a == b);
                if ord.cmp(&a, &b) != Ordering::Greater && ord.cmp(&b, &c) != Ordering::Greater {
                    prop_assert_ne!(ord.cmp(&a, &c), Ordering::Greater);
                }
                prop_assert_eq!(ord.cmp(&a.mul(&c), &b.mul(&c)), ord.cmp(&a, &b));
                prop_assert_ne!(ord.cmp(&one, &a), Ordering::Greater);
            }
        }
    }
}
