use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::catalog::{self, CatalogError};
use crate::series::{GradedSeries, UNITS_PER_Q};

type Slot = OnceLock<Result<GradedSeries, CatalogError>>;

/// Name bindings for expression evaluation.
///
/// Catalog entries are built on first use and cached, so an environment can be
/// shared across threads. Explicit bindings shadow catalog entries.
#[derive(Debug, Clone)]
pub struct Environment {
    order: u32,
    catalog: BTreeMap<&'static str, Slot>,
    bound: BTreeMap<String, GradedSeries>,
}

impl Environment {
    /// Every catalog form, built at `order` on demand.
    pub fn catalog(order: u32) -> Self {
        Self {
            order,
            catalog: catalog::descriptors()
                .iter()
                .map(|d| (d.name, Slot::new()))
                .collect(),
            bound: BTreeMap::new(),
        }
    }

    /// No bindings at all.
    pub fn empty(order: u32) -> Self {
        Self {
            order,
            catalog: BTreeMap::new(),
            bound: BTreeMap::new(),
        }
    }

    /// Same environment with `name` bound to `value`.
    pub fn with_binding(mut self, name: impl Into<String>, value: GradedSeries) -> Self {
        self.bound.insert(name.into(), value);
        self
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Lowest precision of any binding, in 1/24 units.
    pub fn precision_floor(&self) -> i64 {
        let base = if self.catalog.is_empty() {
            crate::series::EXACT
        } else {
            self.order as i64 * UNITS_PER_Q
        };
        self.bound
            .values()
            .map(|s| s.precision())
            .fold(base, i64::min)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bound.contains_key(name) || self.catalog.contains_key(name)
    }

    pub fn names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.catalog.keys().copied().collect();
        v.extend(self.bound.keys().map(|s| s.as_str()));
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `None` if unbound.
    pub fn get(&self, name: &str) -> Option<Result<&GradedSeries, CatalogError>> {
        if let Some(v) = self.bound.get(name) {
            return Some(Ok(v));
        }
        let slot = self.catalog.get(name)?;
        let built = slot.get_or_init(|| catalog::build(name, self.order, None));
        Some(built.as_ref().map_err(Clone::clone))
    }
}
