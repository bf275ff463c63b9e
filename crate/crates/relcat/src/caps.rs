use crate::error::{Error, Result};

/// Size quotas for constructed categories.
///
/// The n-arrow and nerve constructions grow combinatorially; any constructor
/// that would exceed these caps aborts with [`Error::Quota`] instead of
/// thrashing. The caps can be overridden programmatically or, in the CLI,
/// via `--caps` / the `RELCAT_CAPS` environment variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_objects: usize,
    pub max_morphisms: usize,
    /// total cell budget for one truncated (multi)simplicial set
    pub max_cells: usize,
}

pub const DEFAULT_MAX_OBJECTS: usize = 10_000;
pub const DEFAULT_MAX_MORPHISMS: usize = 100_000;
pub const DEFAULT_MAX_CELLS: usize = 500_000;

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: DEFAULT_MAX_OBJECTS,
            max_morphisms: DEFAULT_MAX_MORPHISMS,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

impl Caps {
    pub fn new(max_objects: usize, max_morphisms: usize) -> Self {
        Caps {
            max_objects,
            max_morphisms,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }

    pub fn check_cells(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.max_cells {
            return Err(Error::Quota {
                what,
                attempted: n,
                cap: self.max_cells,
            });
        }
        Ok(())
    }

    pub fn check_objects(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.max_objects {
            return Err(Error::Quota {
                what,
                attempted: n,
                cap: self.max_objects,
            });
        }
        Ok(())
    }

    pub fn check_morphisms(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.max_morphisms {
            return Err(Error::Quota {
                what,
                attempted: n,
                cap: self.max_morphisms,
            });
        }
        Ok(())
    }

    /// Parse a `objects:morphisms[:cells]` cap spec, e.g. `"10000:100000"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(Error::invalid(format!(
                "cap spec `{spec}` is not OBJECTS:MORPHISMS[:CELLS]"
            )));
        }
        let field = |s: &str, what: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::invalid(format!("bad {what} cap `{s}`: {e}")))
        };
        let mut caps = Caps::new(field(parts[0], "object")?, field(parts[1], "morphism")?);
        if parts.len() == 3 {
            caps.max_cells = field(parts[2], "cell")?;
        }
        Ok(caps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let c = Caps::parse("100:2000").unwrap();
        assert_eq!(c, Caps::new(100, 2000));
        assert!(Caps::parse("100").is_err());
        assert!(Caps::parse("a:b").is_err());
    }

    #[test]
    fn quota_error_carries_context() {
        let c = Caps::new(1, 1);
        let err = c.check_objects("test", 2).unwrap_err();
        assert_eq!(
            err,
            Error::Quota {
                what: "test",
                attempted: 2,
                cap: 1
            }
        );
    }
}
