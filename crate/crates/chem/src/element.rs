//! Chemical elements with valence variants.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error("unknown element {0:?}")]
    Unknown(String),
    #[error("element {symbol} has no valence {valence} (allowed: {allowed})")]
    BadVariant { symbol: String, valence: String, allowed: String },
}

/// Allowed valences per element symbol; the first entry is the default variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValenceTable {
    entries: BTreeMap<String, Vec<u8>>,
}

impl Default for ValenceTable {
    fn default() -> Self {
        let mut t = ValenceTable::empty();
        for (s, v) in [
            ("H", &[1][..]),
            ("C", &[4]),
            ("N", &[3]),
            ("O", &[2]),
            ("F", &[1]),
            ("Cl", &[1]),
            ("Br", &[1]),
            ("P", &[3, 5]),
            ("S", &[2, 4, 6]),
            ("Pb", &[2]),
        ] {
            t.insert(s, v.to_vec());
        }
        t
    }
}

impl ValenceTable {
    pub fn empty() -> Self {
        ValenceTable { entries: BTreeMap::new() }
    }

    /// Registers `symbol`; the first valence becomes its default variant.
    pub fn insert(&mut self, symbol: &str, valences: Vec<u8>) {
        assert!(!valences.is_empty(), "element {symbol} needs at least one valence");
        self.entries.insert(symbol.to_string(), valences);
    }

    pub fn valences(&self, symbol: &str) -> Option<&[u8]> {
        self.entries.get(symbol).map(|v| v.as_slice())
    }

    pub fn default_valence(&self, symbol: &str) -> Option<u8> {
        self.valences(symbol).map(|v| v[0])
    }
}

/// An element symbol with an optional non-default valence variant.
///
/// Written `S` for the default variant and `S_6` otherwise. A suffix equal to
/// the default valence is dropped on parsing, so `S_2` and `S` are the same.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    symbol: String,
    variant: Option<u8>,
}

impl Element {
    pub fn parse(token: &str, table: &ValenceTable) -> Result<Element, ElementError> {
        let (symbol, suffix) = match token.split_once('_') {
            Some((s, v)) => (s, Some(v)),
            None => (token, None),
        };
        let allowed = table.valences(symbol).ok_or_else(|| ElementError::Unknown(token.to_string()))?;
        let variant = match suffix {
            None => None,
            Some(v) => {
                let bad = || ElementError::BadVariant {
                    symbol: symbol.to_string(),
                    valence: v.to_string(),
                    allowed: allowed.iter().map(u8::to_string).collect::<Vec<_>>().join("/"),
                };
                let val: u8 = v.parse().map_err(|_| bad())?;
                if !allowed.contains(&val) {
                    return Err(bad());
                }
                (val != allowed[0]).then_some(val)
            }
        };
        Ok(Element { symbol: symbol.to_string(), variant })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn valence(&self, table: &ValenceTable) -> Option<u8> {
        self.variant.or_else(|| table.default_valence(&self.symbol))
    }

    pub fn is_hydrogen(&self) -> bool {
        self.symbol == "H"
    }

    pub fn is_carbon(&self) -> bool {
        self.symbol == "C"
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Some(v) => write!(f, "{}_{}", self.symbol, v),
            None => f.write_str(&self.symbol),
        }
    }
}
