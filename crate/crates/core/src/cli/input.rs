use std::path::Path;

use serde::Deserialize;

use super::CliError;
use crate::forms::VOAAutomorphism;
use crate::voa::literal::parse_element;
use crate::voa::{EvenLattice, GradedVector, LatticeJson};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{} ({what}): {e}", path.display())))
}

pub fn load_lattice(path: &Path) -> Result<EvenLattice, CliError> {
    let j: LatticeJson = parse_json(path, "lattice")?;
    if j.rank != j.gram.len() {
        return Err(CliError::Input(format!("lattice: rank {} but gram has {} rows", j.rank, j.gram.len())));
    }
    EvenLattice::from_json(&j).map_err(|e| CliError::Input(format!("lattice: {e}")))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorFile {
    List(Vec<String>),
    Object { generators: Vec<String> },
}

pub fn parse_generators(literals: &[String], rank: usize) -> Result<Vec<GradedVector>, CliError> {
    literals
        .iter()
        .enumerate()
        .map(|(i, s)| parse_element(s, rank).map_err(|e| CliError::Input(format!("generators[{i}]: {e}"))))
        .collect()
}

pub fn load_generators(path: &Path, rank: usize) -> Result<Vec<GradedVector>, CliError> {
    let literals = match parse_json::<GeneratorFile>(path, "generators")? {
        GeneratorFile::List(v) | GeneratorFile::Object { generators: v } => v,
    };
    parse_generators(&literals, rank)
}

#[derive(Clone, Debug, Deserialize)]
pub struct AutomorphismJson {
    /// `sigma[i][j]` is the `γ_i` coordinate of `σγ_j`.
    pub sigma: Vec<Vec<i64>>,
    pub character: Option<Vec<i8>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ActionFile {
    pub automorphisms: Vec<AutomorphismJson>,
}

pub fn load_actions(path: &Path, lattice: &EvenLattice) -> Result<Vec<VOAAutomorphism>, CliError> {
    let f: ActionFile = parse_json(path, "action")?;
    f.automorphisms
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            let r = lattice.rank();
            VOAAutomorphism::lift_with_character(lattice, a.sigma, a.character.unwrap_or_else(|| vec![1; r]))
                .map_err(|e| CliError::Input(format!("automorphisms[{i}]: {e}")))
        })
        .collect()
}
