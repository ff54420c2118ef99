use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{QhatmError, Result};

/// Named coordinate values, e.g. `x=1.5, t=0.01`.
///
/// Insertion order is preserved; later insertions of an existing name
/// overwrite the earlier value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Coords {
    entries: Vec<(String, f64)>,
}

impl Coords {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((name.to_string(), value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn require(&self, name: &str) -> Result<f64> {
        self.get(name)
            .ok_or_else(|| QhatmError::MissingCoordinate(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<'a> FromIterator<(&'a str, f64)> for Coords {
    fn from_iter<I: IntoIterator<Item = (&'a str, f64)>>(iter: I) -> Self {
        let mut c = Coords::new();
        for (n, v) in iter {
            c.set(n, v);
        }
        c
    }
}
