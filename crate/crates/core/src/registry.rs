//! Name-keyed registries for the interchangeable strategies of this crate
//! (frequency profiles, transition formulas, unitary steppers), plus the
//! string-keyed parameter bag their constructors consume.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single parameter value together with where it came from, so that
/// validation messages can point at a config line or a flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub value: String,
    pub origin: String,
}

/// Flat key/value parameters for one section of a run configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    section: String,
    entries: BTreeMap<String, Param>,
}

impl Params {
    pub fn new(section: impl Into<String>) -> Self {
        Params {
            section: section.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn section(&self) -> &str {
        &self.section
    }

    /// Inserts or overrides a value. Keys are normalized so that `omega-minus`
    /// and `omega_minus` name the same entry.
    pub fn set(&mut self, key: &str, value: impl Into<String>, origin: impl Into<String>) {
        self.entries.insert(
            normalize_key(key),
            Param {
                value: value.into(),
                origin: origin.into(),
            },
        );
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.set(key, value.to_string(), "<code>");
        self
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(&normalize_key(key))
    }

    pub fn raw(&self, key: &str) -> Option<&Param> {
        self.entries.get(&normalize_key(key))
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.raw(key).map(|p| p.value.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Parses an optional value; a present but malformed value is an error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(p) => p.value.trim().parse::<T>().map(Some).map_err(|_| {
                Error::InvalidArgument(format!(
                    "[{}] {} ({}): cannot parse '{}'",
                    self.section, key, p.origin, p.value
                ))
            }),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| {
            Error::InvalidArgument(format!(
                "[{}] {}: missing required value",
                self.section, key
            ))
        })
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        match self.raw(key) {
            None => Ok(false),
            Some(p) => match p.value.trim().to_ascii_lowercase().as_str() {
                "" | "1" | "true" | "yes" | "on" => Ok(true),
                "0" | "false" | "no" | "off" => Ok(false),
                _ => Err(Error::InvalidArgument(format!(
                    "[{}] {} ({}): expected a boolean, got '{}'",
                    self.section, key, p.origin, p.value
                ))),
            },
        }
    }

    /// Message prefix naming the key and its origin.
    pub fn locate(&self, key: &str) -> String {
        match self.raw(key) {
            Some(p) => format!("[{}] {} ({})", self.section, key, p.origin),
            None => format!("[{}] {}", self.section, key),
        }
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Constructor stored in a [`Registry`].
pub type Factory<T> = fn(&Params) -> Result<Box<T>>;

/// Maps strategy names to constructors for one trait-object family.
pub struct Registry<T: ?Sized> {
    family: &'static str,
    factories: BTreeMap<&'static str, Factory<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(family: &'static str) -> Self {
        Registry {
            family,
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: Factory<T>) -> &mut Self {
        self.factories.insert(name, factory);
        self
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn create(&self, name: &str, params: &Params) -> Result<Box<T>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy {
                family: self.family,
                name: name.to_string(),
                available: self.names().join(", "),
            })?;
        factory(params)
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("family", &self.family)
            .field("names", &self.names())
            .finish()
    }
}
