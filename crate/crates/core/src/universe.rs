//! Finite universes: a declared attribute list with a finite value domain
//! per attribute. Every relation, and every operation that needs the full
//! tuple space (`R11`, complement, outer union), is interpreted against one.

use std::fmt;

use crate::error::{Error, Result};

/// Default bound on the size of the full tuple space.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// Upper bound on the number of declared attributes (headers are bitsets).
pub const MAX_ATTRIBUTES: usize = 64;

/// A set of attributes, stored as a bitset over universe attribute indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrSet(u64);

impl AttrSet {
    pub const EMPTY: AttrSet = AttrSet(0);

    pub fn from_bits(bits: u64) -> Self {
        AttrSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(attr: usize) -> Self {
        AttrSet(1 << attr)
    }

    /// The first `n` attributes.
    pub fn first(n: usize) -> Self {
        if n >= 64 {
            AttrSet(u64::MAX)
        } else {
            AttrSet((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, attr: usize) -> bool {
        attr < 64 && self.0 & (1 << attr) != 0
    }

    pub fn union(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & other.0)
    }

    pub fn difference(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AttrSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Position of `attr` within a tuple over this header.
    pub fn position(self, attr: usize) -> usize {
        (self.0 & ((1u64 << attr) - 1)).count_ones() as usize
    }

    /// Attribute indices in ascending (universe) order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let a = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(a)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    attributes: Vec<String>,
    domains: Vec<Vec<String>>,
    cap: u64,
}

impl Universe {
    pub fn new<A, V>(attributes: impl IntoIterator<Item = (A, Vec<V>)>) -> Result<Self>
    where
        A: Into<String>,
        V: Into<String>,
    {
        Self::with_cap(attributes, DEFAULT_CAP)
    }

    pub fn with_cap<A, V>(attributes: impl IntoIterator<Item = (A, Vec<V>)>, cap: u64) -> Result<Self>
    where
        A: Into<String>,
        V: Into<String>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut domains: Vec<Vec<String>> = Vec::new();
        for (name, values) in attributes {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::InvalidUniverse("empty attribute name".into()));
            }
            if names.contains(&name) {
                return Err(Error::InvalidUniverse(format!("attribute `{name}` declared twice")));
            }
            let values: Vec<String> = values.into_iter().map(Into::into).collect();
            if values.is_empty() {
                return Err(Error::InvalidUniverse(format!("attribute `{name}` has an empty domain")));
            }
            for (i, v) in values.iter().enumerate() {
                if v.is_empty() {
                    return Err(Error::InvalidUniverse(format!("attribute `{name}` has an empty value")));
                }
                if values[..i].contains(v) {
                    return Err(Error::InvalidUniverse(format!(
                        "value `{v}` repeated in the domain of `{name}`"
                    )));
                }
            }
            names.push(name);
            domains.push(values);
        }
        if names.len() > MAX_ATTRIBUTES {
            return Err(Error::InvalidUniverse(format!(
                "{} attributes declared, at most {MAX_ATTRIBUTES} supported",
                names.len()
            )));
        }
        let size = domains.iter().map(|d| d.len() as u128).product::<u128>();
        if size > cap as u128 {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(Universe { attributes: names, domains, cap })
    }

    /// Parses the universe file format: one `name : value, value, ...` line
    /// per attribute. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_cap(text, DEFAULT_CAP)
    }

    pub fn parse_with_cap(text: &str, cap: u64) -> Result<Self> {
        let mut attrs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: &str| Error::UniverseSyntax { line: i + 1, message: message.into() };
            let (name, values) = line.split_once(':').ok_or_else(|| syntax("expected `name : values`"))?;
            let name = name.trim();
            if !is_word(name) {
                return Err(syntax("attribute name must be a word of letters, digits or `_`"));
            }
            let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
            if values.iter().any(|v| !is_word(v)) {
                return Err(syntax("values must be non-empty words separated by commas"));
            }
            attrs.push((name.to_string(), values));
        }
        Self::with_cap(attrs, cap)
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn domain(&self, attr: usize) -> &[String] {
        &self.domains[attr]
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn attr_index(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn value_index(&self, attr: usize, value: &str) -> Result<u32> {
        self.domains[attr]
            .iter()
            .position(|v| v == value)
            .map(|i| i as u32)
            .ok_or_else(|| Error::ValueOutOfDomain {
                attribute: self.attributes[attr].clone(),
                value: value.to_string(),
            })
    }

    pub fn value_name(&self, attr: usize, value: u32) -> &str {
        &self.domains[attr][value as usize]
    }

    /// The header containing every attribute.
    pub fn all_attrs(&self) -> AttrSet {
        AttrSet::first(self.attributes.len())
    }

    pub fn header_of<S: AsRef<str>>(&self, names: &[S]) -> Result<AttrSet> {
        let mut h = AttrSet::EMPTY;
        for n in names {
            h = h.union(AttrSet::singleton(self.attr_index(n.as_ref())?));
        }
        Ok(h)
    }

    /// Number of tuples over header `h`.
    pub fn tuple_space(&self, h: AttrSet) -> u64 {
        h.iter().map(|a| self.domains[a].len() as u64).product()
    }

    /// All tuples over `h` in lexicographic order of value indices.
    pub fn tuples_over(&self, h: AttrSet) -> TupleSpace {
        let radix: Vec<u32> = h.iter().map(|a| self.domains[a].len() as u32).collect();
        TupleSpace { current: Some(vec![0; radix.len()]), radix }
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, values) in self.attributes.iter().zip(&self.domains) {
            writeln!(f, "{name} : {}", values.join(", "))?;
        }
        Ok(())
    }
}

/// Mixed-radix odometer over a tuple space.
pub struct TupleSpace {
    radix: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl Iterator for TupleSpace {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.radix[i] {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

pub(crate) fn is_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}
