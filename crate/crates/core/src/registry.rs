//! Name-keyed registries of interchangeable strategies.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A strategy that can be looked up by name.
pub trait Named {
    fn name(&self) -> &'static str;

    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }
}

/// Maps names (and aliases) to boxed trait objects.
pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
    index: BTreeMap<&'static str, usize>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    /// Registers `item`; a later registration under the same name wins.
    pub fn register(&mut self, item: Box<T>) -> &mut Self {
        let pos = self.entries.len();
        self.index.insert(item.name(), pos);
        for alias in item.aliases() {
            self.index.insert(alias, pos);
        }
        self.entries.push(item);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.index
            .get(name)
            .map(|&i| self.entries[i].as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    /// Primary names, in registration order.
    pub fn names(&self) -> Vec<&'static str> {
        let mut seen = Vec::new();
        for e in &self.entries {
            let n = e.name();
            if self.index.get(n).is_some_and(|&i| std::ptr::eq(self.entries[i].as_ref(), e.as_ref()))
                && !seen.contains(&n)
            {
                seen.push(n);
            }
        }
        seen
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| e.as_ref())
    }
}
