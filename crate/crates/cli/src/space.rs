use clap::{Args, ValueEnum};
use mapgrowth::cw_spaces::{
    build_space, derive_constraints, preset, solve_parameters, ComplexSpec, ConstraintSystem,
    Family,
};
use mapgrowth::rational::parse_rational;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceKind {
    Example1,
    Example2,
    Theorem32,
    /// Only the box `|a| ≤ L^ℓ, |b| ≤ L^m`, no top cell.
    Box,
}

/// Which space to work with: a preset, explicit parameters, or a target
/// exponent for the parametric family.
#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    #[arg(long, value_enum)]
    pub space: SpaceKind,
    /// ℓ, the dimension of the first sphere.
    #[arg(long = "l")]
    pub ell: Option<u32>,
    /// m, the dimension of the second sphere.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    /// Target growth exponent, e.g. `13/2`; picks (ℓ, m, p, q) for theorem32.
    #[arg(long)]
    pub r: Option<String>,
}

impl SpaceArgs {
    fn given(&self) -> Vec<&'static str> {
        [
            ("--l", self.ell.is_some()),
            ("--m", self.m.is_some()),
            ("--p", self.p.is_some()),
            ("--q", self.q.is_some()),
            ("--r", self.r.is_some()),
        ]
        .into_iter()
        .filter_map(|(name, set)| set.then_some(name))
        .collect()
    }

    pub fn resolve(&self) -> Result<ConstraintSystem, CliError> {
        let given = self.given();
        let with_spec = |spec: ComplexSpec| derive_constraints(&spec);
        match self.space {
            SpaceKind::Example1 | SpaceKind::Example2 => {
                if !given.is_empty() {
                    return Err(CliError::Usage(format!(
                        "the presets take no parameters, got {}",
                        given.join(", ")
                    )));
                }
                let family = if self.space == SpaceKind::Example1 {
                    Family::Example1
                } else {
                    Family::Example2
                };
                Ok(with_spec(preset(family)))
            }
            SpaceKind::Theorem32 => match (&self.r, self.ell, self.m, self.p, self.q) {
                (Some(r), None, None, None, None) => {
                    let r = parse_rational(r).map_err(|e| CliError::Usage(e.to_string()))?;
                    Ok(with_spec(solve_parameters(r).map_err(usage)?))
                }
                (None, Some(ell), Some(m), Some(p), Some(q)) => {
                    Ok(with_spec(build_space(ell, m, p, q).map_err(usage)?))
                }
                _ => Err(CliError::Usage(
                    "theorem32 needs either --r or all of --l, --m, --p, --q".into(),
                )),
            },
            SpaceKind::Box => match (self.ell, self.m, given.len()) {
                (Some(ell), Some(m), 2) => ConstraintSystem::boxed(ell, m).map_err(usage),
                _ => Err(CliError::Usage("box needs exactly --l and --m".into())),
            },
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}
