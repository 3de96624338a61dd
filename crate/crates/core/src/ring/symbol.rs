//! Interned generator symbols of the coefficient ring.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A polynomial generator. The derived order is the canonical monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// π².
    Q,
    /// Squared boundary length `L_i²`, `i ≥ 1`.
    B(u16),
    /// Raw moment `M_k`.
    M(u16),
    /// `1 / M_0`.
    InvM0,
    /// Normalized moment `m_k = M_k / M_0`, `k ≥ 1`.
    SmallM(u16),
    /// Reverse moment `β_m`.
    Beta(u16),
}

impl Symbol {
    pub fn name(&self) -> String {
        match self {
            Symbol::Q => "pi2".into(),
            Symbol::B(i) => format!("b{i}"),
            Symbol::M(k) => format!("M{k}"),
            Symbol::InvM0 => "invM0".into(),
            Symbol::SmallM(k) => format!("m{k}"),
            Symbol::Beta(m) => format!("beta{m}"),
        }
    }

    pub fn latex(&self) -> String {
        match self {
            Symbol::Q => "\\pi^2".into(),
            Symbol::B(i) => format!("L_{{{i}}}^2"),
            Symbol::M(k) => format!("M_{{{k}}}"),
            Symbol::InvM0 => "M_0^{-1}".into(),
            Symbol::SmallM(k) => format!("m_{{{k}}}"),
            Symbol::Beta(m) => format!("\\beta_{{{m}}}"),
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Symbol::B(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let unknown = || Error::UnknownSymbol(s.to_string());
        let index = |rest: &str| -> Result<u16, Error> {
            if rest.is_empty() || (rest.len() > 1 && rest.starts_with('0')) {
                return Err(unknown());
            }
            rest.parse::<u16>().map_err(|_| unknown())
        };
        match s {
            "pi2" => return Ok(Symbol::Q),
            "invM0" => return Ok(Symbol::InvM0),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("beta") {
            return index(rest).map(Symbol::Beta);
        }
        if let Some(rest) = s.strip_prefix('b') {
            let i = index(rest)?;
            return if i >= 1 { Ok(Symbol::B(i)) } else { Err(unknown()) };
        }
        if let Some(rest) = s.strip_prefix('M') {
            return index(rest).map(Symbol::M);
        }
        if let Some(rest) = s.strip_prefix('m') {
            let k = index(rest)?;
            return if k >= 1 { Ok(Symbol::SmallM(k)) } else { Err(unknown()) };
        }
        Err(unknown())
    }
}
