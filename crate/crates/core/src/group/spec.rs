use std::fmt;
use std::str::FromStr;

use super::LampOrder;
use crate::error::{Error, Result};

/// Cocycle descriptor of an extension 1 → H → Γ → G → 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cocycle {
    /// Γ = G × H with the ℓ¹ product length.
    Trivial,
    /// Γ = H₃ with G = ℤ², H = ℤ (center), c((a,b),(a',b')) = a·b'.
    Heisenberg,
}

/// Declarative description of a group model.
///
/// The [`fmt::Display`] form is canonical and round-trips through
/// [`FromStr`]; it is what cache headers and reports record.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    FreeAbelian { rank: usize },
    FreeGroup { rank: usize },
    Heisenberg,
    /// `orders[i]` is the order of the cyclic factor F_i; `orders[0]` must be 1.
    DirectSumFinite { orders: Vec<u64> },
    Lamplighter { lamp_order: LampOrder },
    Extension {
        quotient: Box<GroupSpec>,
        kernel: Box<GroupSpec>,
        cocycle: Cocycle,
    },
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::FreeAbelian { rank } if *rank == 0 => {
                Err(Error::InvalidParameter("free_abelian rank must be >= 1".into()))
            }
            GroupSpec::FreeGroup { rank } if *rank == 0 => {
                Err(Error::InvalidParameter("free_group rank must be >= 1".into()))
            }
            GroupSpec::FreeGroup { rank } if *rank > 26 => Err(Error::InvalidParameter(
                "free_group rank must be <= 26 (one letter per generator)".into(),
            )),
            GroupSpec::DirectSumFinite { orders } => {
                if orders.is_empty() {
                    return Err(Error::InvalidParameter("direct_sum_finite needs at least one order".into()));
                }
                if orders[0] != 1 {
                    return Err(Error::InvalidParameter(format!(
                        "direct_sum_finite: F0 must be trivial (order 1), got {}",
                        orders[0]
                    )));
                }
                if let Some(pos) = orders.iter().position(|&m| m == 0) {
                    return Err(Error::InvalidParameter(format!(
                        "direct_sum_finite: order at index {pos} must be >= 1"
                    )));
                }
                Ok(())
            }
            GroupSpec::Lamplighter {
                lamp_order: LampOrder::Finite(0),
            } => Err(Error::InvalidParameter("lamplighter lamp order must be >= 1".into())),
            GroupSpec::Extension {
                quotient,
                kernel,
                cocycle,
            } => {
                quotient.validate()?;
                kernel.validate()?;
                if *cocycle == Cocycle::Heisenberg
                    && (**quotient != GroupSpec::FreeAbelian { rank: 2 } || **kernel != GroupSpec::FreeAbelian { rank: 1 })
                {
                    return Err(Error::InvalidParameter(
                        "heisenberg cocycle requires quotient free_abelian(2) and kernel free_abelian(1)".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The Heisenberg group presented as the central extension 1 → ℤ → H₃ → ℤ² → 1.
    pub fn heisenberg_extension() -> Self {
        GroupSpec::Extension {
            quotient: Box::new(GroupSpec::FreeAbelian { rank: 2 }),
            kernel: Box::new(GroupSpec::FreeAbelian { rank: 1 }),
            cocycle: Cocycle::Heisenberg,
        }
    }

    pub fn product(quotient: GroupSpec, kernel: GroupSpec) -> Self {
        GroupSpec::Extension {
            quotient: Box::new(quotient),
            kernel: Box::new(kernel),
            cocycle: Cocycle::Trivial,
        }
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cocycle::Trivial => write!(f, "trivial"),
            Cocycle::Heisenberg => write!(f, "heisenberg"),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian { rank } => write!(f, "free_abelian({rank})"),
            GroupSpec::FreeGroup { rank } => write!(f, "free_group({rank})"),
            GroupSpec::Heisenberg => write!(f, "heisenberg"),
            GroupSpec::DirectSumFinite { orders } => {
                let list: Vec<String> = orders.iter().map(u64::to_string).collect();
                write!(f, "direct_sum_finite({})", list.join(","))
            }
            GroupSpec::Lamplighter { lamp_order } => write!(f, "lamplighter({lamp_order})"),
            GroupSpec::Extension {
                quotient,
                kernel,
                cocycle,
            } => write!(f, "extension({quotient},{kernel},{cocycle})"),
        }
    }
}

/// Splits on commas at parenthesis depth zero.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                if !s.ends_with(')') {
                    return Err(Error::parse("group spec", input, "missing closing parenthesis"));
                }
                (s[..open].trim(), Some(&s[open + 1..s.len() - 1]))
            }
            None => (s, None),
        };
        let int_arg = |args: Option<&str>| -> Result<usize> {
            let a = args.ok_or_else(|| Error::parse("group spec", input, "missing argument"))?;
            a.trim()
                .parse::<usize>()
                .map_err(|e| Error::parse("group spec", input, e.to_string()))
        };
        let spec = match name {
            "free_abelian" | "Z" => GroupSpec::FreeAbelian { rank: int_arg(args)? },
            "free_group" | "F" => GroupSpec::FreeGroup { rank: int_arg(args)? },
            "heisenberg" | "H3" => {
                if args.is_some_and(|a| !a.trim().is_empty()) {
                    return Err(Error::parse("group spec", input, "heisenberg takes no arguments"));
                }
                GroupSpec::Heisenberg
            }
            "direct_sum_finite" => {
                let a = args.ok_or_else(|| Error::parse("group spec", input, "missing orders"))?;
                let orders = a
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| t.trim().parse::<u64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::parse("group spec", input, e.to_string()))?;
                GroupSpec::DirectSumFinite { orders }
            }
            "lamplighter" => {
                let a = args.ok_or_else(|| Error::parse("group spec", input, "missing lamp order"))?;
                GroupSpec::Lamplighter {
                    lamp_order: a.trim().parse()?,
                }
            }
            "extension" => {
                let a = args.ok_or_else(|| Error::parse("group spec", input, "missing arguments"))?;
                let parts = split_top_level(a);
                if parts.len() != 3 {
                    return Err(Error::parse(
                        "group spec",
                        input,
                        "extension expects (quotient, kernel, cocycle)",
                    ));
                }
                let cocycle = match parts[2] {
                    "trivial" => Cocycle::Trivial,
                    "heisenberg" => Cocycle::Heisenberg,
                    other => {
                        return Err(Error::parse("group spec", input, format!("unknown cocycle {other:?}")))
                    }
                };
                GroupSpec::Extension {
                    quotient: Box::new(parts[0].parse()?),
                    kernel: Box::new(parts[1].parse()?),
                    cocycle,
                }
            }
            other => return Err(Error::parse("group spec", input, format!("unknown group {other:?}"))),
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        for s in [
            "free_abelian(2)",
            "free_group(3)",
            "heisenberg",
            "direct_sum_finite(1,2,2,2)",
            "lamplighter(2)",
            "lamplighter(inf)",
            "extension(free_abelian(1),direct_sum_finite(1,2,2),trivial)",
            "extension(free_abelian(2),free_abelian(1),heisenberg)",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        for s in [
            "free_abelian(0)",
            "free_group(0)",
            "direct_sum_finite(2,2)",
            "direct_sum_finite(1,0)",
            "lamplighter(0)",
            "extension(free_abelian(1),free_abelian(1),heisenberg)",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert!(spec.validate().is_err(), "{s} should be rejected");
        }
        assert!("direct_sum_finite()".parse::<GroupSpec>().unwrap().validate().is_err());
        assert!("klein_bottle".parse::<GroupSpec>().is_err());
        assert!("free_abelian(2".parse::<GroupSpec>().is_err());
    }
}
