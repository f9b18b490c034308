use std::sync::Arc;

use super::order::MonomialOrder;
use crate::error::{Error, Result};
use crate::field::Field;

/// Variables, coefficient field and active monomial order of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring<F: Field> {
    field: F,
    vars: Vec<String>,
    order: MonomialOrder,
}

pub type RingRef<F> = Arc<Ring<F>>;

impl<F: Field> Ring<F> {
    pub fn new(field: F, vars: Vec<String>, order: MonomialOrder) -> Result<RingRef<F>> {
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidRing("empty variable name".into()));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable {v}")));
            }
        }
        if vars.len() > 64 {
            return Err(Error::InvalidRing("at most 64 variables are supported".into()));
        }
        order.validate(vars.len())?;
        Ok(Arc::new(Ring { field, vars, order }))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<RingRef<F>> {
        Ring::new(self.field.clone(), self.vars.clone(), order)
    }

    /// Same variables and order over another field.
    pub fn with_field<G: Field>(&self, field: G) -> RingRef<G> {
        Arc::new(Ring {
            field,
            vars: self.vars.clone(),
            order: self.order.clone(),
        })
    }

    /// A fresh variable name not clashing with existing ones.
    pub fn fresh_name(&self, stem: &str) -> String {
        let mut k = 0;
        loop {
            let cand = format!("_{stem}{k}");
            if self.var_index(&cand).is_none() {
                return cand;
            }
            k += 1;
        }
    }

    /// Ring with `extra` fresh variables appended (indices `nvars..`) and the
    /// given order over the enlarged variable set.
    pub fn extend(&self, stems: &[&str], order: MonomialOrder) -> Result<RingRef<F>> {
        let mut vars = self.vars.clone();
        for stem in stems {
            let tmp = Ring {
                field: self.field.clone(),
                vars: vars.clone(),
                order: MonomialOrder::Lex,
            };
            vars.push(tmp.fresh_name(stem));
        }
        Ring::new(self.field.clone(), vars, order)
    }

    /// Bitmask of variable indices.
    pub fn mask(vars: &[usize]) -> u64 {
        vars.iter().fold(0u64, |m, &v| m | (1 << v))
    }

    pub fn var_names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.vars[i].clone()).collect()
    }
}

/// Pointer-or-structural ring equality.
pub fn same_ring<F: Field>(a: &RingRef<F>, b: &RingRef<F>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
