//! Resource-state selection: named presets or a matrix file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qtele_core::matrix_io::{load_matrix, LoadError};
use qtele_core::resource::{bell_resource, isotropic, maximally_mixed_resource, random_density};
use qtele_core::{DensityMatrix, Tolerances};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum ResourceSpec {
    Bell,
    MaximallyMixed,
    Isotropic(f64),
    RandomDensity(u64),
    File(PathBuf),
}

/// Splits `name(arg)` or `name:arg` into its parts.
fn split_call(s: &str) -> Option<(&str, &str)> {
    if let Some(open) = s.find('(') {
        let inner = s[open + 1..].strip_suffix(')')?;
        return Some((&s[..open], inner.trim()));
    }
    s.split_once(':')
}

impl FromStr for ResourceSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "bell" => return Ok(Self::Bell),
            "maximally_mixed" => return Ok(Self::MaximallyMixed),
            _ => {}
        }
        if let Some((name, arg)) = split_call(s) {
            match name {
                "isotropic" => {
                    let p = arg
                        .parse::<f64>()
                        .map_err(|e| format!("isotropic weight {arg:?}: {e}"))?;
                    return Ok(Self::Isotropic(p));
                }
                "random_density" => {
                    let seed = arg
                        .parse::<u64>()
                        .map_err(|e| format!("random_density seed {arg:?}: {e}"))?;
                    return Ok(Self::RandomDensity(seed));
                }
                _ => {}
            }
        }
        if s.is_empty() {
            return Err("empty resource".into());
        }
        Ok(Self::File(PathBuf::from(s)))
    }
}

impl fmt::Display for ResourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bell => write!(f, "bell"),
            Self::MaximallyMixed => write!(f, "maximally_mixed"),
            Self::Isotropic(p) => write!(f, "isotropic({p})"),
            Self::RandomDensity(s) => write!(f, "random_density({s})"),
            Self::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl ResourceSpec {
    /// Builds the resource on `d ⊗ d`.
    ///
    /// Presets need `dim` (default 2). A file fixes its own dimension; if
    /// `dim` is given as well it must agree.
    pub fn resolve(&self, dim: Option<usize>, tol: &Tolerances) -> Result<DensityMatrix, CliError> {
        let d = dim.unwrap_or(2);
        let chi = match self {
            Self::Bell => bell_resource(d)?,
            Self::MaximallyMixed => maximally_mixed_resource(d)?,
            Self::Isotropic(p) => isotropic(d, *p)?,
            Self::RandomDensity(seed) => random_density(d, *seed)?,
            Self::File(path) => {
                let m = load_matrix(path).map_err(|e| match e {
                    LoadError::Io(e) => CliError::Io(format!("{}: {e}", path.display())),
                    LoadError::Parse(e) => CliError::Parse(format!("{}: {e}", path.display())),
                })?;
                let n = m.rows();
                let q = (n as f64).sqrt().round() as usize;
                if q * q != n || q < 2 {
                    return Err(CliError::Validation(format!(
                        "resource matrix is {n}×{n}; expected d²×d² with d ≥ 2"
                    )));
                }
                if let Some(d) = dim {
                    if d != q {
                        return Err(CliError::Validation(format!(
                            "--dim {d} does not match resource file dimension {q}"
                        )));
                    }
                }
                DensityMatrix::new_with(m, tol)?
            }
        };
        Ok(chi)
    }
}
