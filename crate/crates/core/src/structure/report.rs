use serde::Serialize;

use super::irreducibility::{
    exterior_mats, irreducibility_of, strong_irreducibility_of, IrreducibilityVerdict,
    StrongIrreducibilityVerdict,
};
use super::proximality::{proximality, ProximalityOptions, ProximalityVerdict};
use super::triangular::{triangularize, TriangularVerdict};
use crate::error::Result;
use crate::tuple::MatrixTuple;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureOptions {
    /// Largest number of parts in a searched invariant union.
    pub max_parts: usize,
    /// Word length bound for the strong-irreducibility search.
    pub union_max_len: usize,
    pub proximality: ProximalityOptions,
}

impl Default for StructureOptions {
    fn default() -> Self {
        Self { max_parts: 6, union_max_len: 4, proximality: ProximalityOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub k: usize,
    pub irreducible: IrreducibilityVerdict,
    pub strongly_irreducible: StrongIrreducibilityVerdict,
    pub proximal: ProximalityVerdict,
    /// Triangularisability of `𝖠^∧k` itself, for `k ≥ 2`; it is reported
    /// alongside the level-1 verdict, not used to infer it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exterior_triangularizable: Option<TriangularVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub d: usize,
    pub levels: Vec<LevelReport>,
    pub triangularizable: TriangularVerdict,
}

/// All structural verdicts for `k = 1..d-1`.
pub fn structure_report(t: &MatrixTuple, opts: &StructureOptions) -> Result<StructureReport> {
    let d = t.dim();
    let levels = (1..d)
        .map(|k| {
            let mats = exterior_mats(t, k)?;
            Ok(LevelReport {
                k,
                irreducible: irreducibility_of(&mats)?,
                strongly_irreducible: strong_irreducibility_of(&mats, opts.max_parts, opts.union_max_len)?,
                proximal: proximality(t, k, &opts.proximality)?,
                exterior_triangularizable: if k >= 2 { Some(triangularize(&mats)?) } else { None },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StructureReport { d, levels, triangularizable: triangularize(t.matrices())? })
}
