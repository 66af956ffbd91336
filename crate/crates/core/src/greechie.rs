//! Orthogonality (Greechie) diagrams of interlinked contexts and their
//! two-valued states.
//!
//! Atoms are rays, blocks are maximal contexts. Atoms are kept in canonical
//! order: by the first block they appear in, then by position inside it.
//!
//! The exchange format is a JSON document:
//!
//! ```json
//! {
//!   "atoms": [ { "id": "C_KS:0", "ray": [[0, 0], [1, 0], [0, 0]] }, { "id": "x" } ],
//!   "blocks": [ ["C_KS:0", "C_KS:1", "C_KS:2"], ["C_KS:0", "C'_KS:1", "C'_KS:2"] ]
//! }
//! ```
//!
//! `ray` is optional and lists one `[re, im]` pair per component.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c, ComplexVector};
use crate::observables::ContextOperator;

/// Rays closer than this to each other (as `1 − |⟨u,v⟩|/‖u‖‖v‖`) are one atom.
pub const DEFAULT_RAY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub id: String,
    pub ray: Option<ComplexVector>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreechieDiagram {
    atoms: Vec<Atom>,
    blocks: Vec<Vec<usize>>,
    dim: usize,
    warnings: Vec<String>,
}

impl GreechieDiagram {
    /// Validates and canonicalizes a diagram given as atoms plus blocks of atom ids.
    pub fn new(atoms: Vec<Atom>, blocks: Vec<Vec<String>>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidDiagram(msg));
        if blocks.is_empty() {
            return invalid("a diagram needs at least one block".into());
        }
        let dim = blocks[0].len();
        if dim == 0 {
            return invalid("blocks must not be empty".into());
        }

        let mut index = HashMap::new();
        for (k, atom) in atoms.iter().enumerate() {
            if index.insert(atom.id.as_str(), k).is_some() {
                return invalid(format!("duplicate atom id {:?}", atom.id));
            }
        }
        let mut raw_blocks = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.iter().enumerate() {
            if block.len() != dim {
                return invalid(format!("block {b} has {} atoms, expected {dim}", block.len()));
            }
            let mut members = Vec::with_capacity(dim);
            for id in block {
                let Some(&k) = index.get(id.as_str()) else {
                    return invalid(format!("block {b} names unknown atom {id:?}"));
                };
                if members.contains(&k) {
                    return invalid(format!("block {b} repeats atom {id:?}"));
                }
                members.push(k);
            }
            raw_blocks.push(members);
        }

        // canonical order: first appearance scanning blocks in order
        let mut order = Vec::with_capacity(atoms.len());
        let mut new_index = vec![usize::MAX; atoms.len()];
        for block in &raw_blocks {
            for &k in block {
                if new_index[k] == usize::MAX {
                    new_index[k] = order.len();
                    order.push(k);
                }
            }
        }
        if let Some(orphan) = atoms.iter().enumerate().find(|(k, _)| new_index[*k] == usize::MAX) {
            return invalid(format!("atom {:?} belongs to no block", orphan.1.id));
        }
        let atoms: Vec<Atom> = order.iter().map(|&k| atoms[k].clone()).collect();
        let blocks: Vec<Vec<usize>> = raw_blocks
            .into_iter()
            .map(|b| b.into_iter().map(|k| new_index[k]).collect())
            .collect();

        let mut warnings = Vec::new();
        if dim <= 2 {
            warnings.push(format!(
                "blocks of size {dim} cannot share atoms nontrivially; contexts stay isolated Boolean blocks"
            ));
        }
        Ok(Self { atoms, blocks, dim, warnings })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn atom_id(&self, atom: usize) -> &str {
        &self.atoms[atom].id
    }

    pub fn block_ids(&self) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&k| self.atoms[k].id.clone()).collect())
            .collect()
    }

    pub fn to_document(&self) -> DiagramDocument {
        DiagramDocument {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomDocument {
                    id: a.id.clone(),
                    ray: a.ray.as_ref().map(|v| v.entries().iter().map(|z| [z.re, z.im]).collect()),
                })
                .collect(),
            blocks: self.block_ids(),
        }
    }

    pub fn from_document(doc: &DiagramDocument) -> Result<Self> {
        let atoms = doc
            .atoms
            .iter()
            .map(|a| {
                let ray = match &a.ray {
                    Some(pairs) => Some(ComplexVector::new(pairs.iter().map(|p| c(p[0], p[1])).collect())?),
                    None => None,
                };
                Ok(Atom { id: a.id.clone(), ray })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms, doc.blocks.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DiagramDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidDiagram(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// Serialized form of a [`GreechieDiagram`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub atoms: Vec<AtomDocument>,
    pub blocks: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomDocument {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<[f64; 2]>>,
}

/// One block per context; rays that agree up to phase within `tol` become
/// the same atom. Atom ids are `label:slot` of their first occurrence.
pub fn diagram_from_contexts(contexts: &[ContextOperator], tol: f64) -> Result<GreechieDiagram> {
    let Some(first) = contexts.first() else {
        return Err(Error::InvalidDiagram("no contexts given".into()));
    };
    let dim = first.dim();
    let mut atoms: Vec<Atom> = Vec::new();
    let mut blocks = Vec::with_capacity(contexts.len());
    for (b, ctx) in contexts.iter().enumerate() {
        if ctx.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: ctx.dim() });
        }
        let mut block = Vec::with_capacity(dim);
        for (slot, ray) in ctx.basis().iter().enumerate() {
            let existing = atoms
                .iter()
                .find(|a| a.ray.as_ref().is_some_and(|r| r.ray_distance(ray) <= tol));
            let id = match existing {
                Some(atom) => atom.id.clone(),
                None => {
                    let mut id = format!("{}:{slot}", ctx.label());
                    if atoms.iter().any(|a| a.id == id) {
                        id = format!("{}@{b}:{slot}", ctx.label());
                    }
                    atoms.push(Atom { id: id.clone(), ray: Some(ray.clone()) });
                    id
                }
            };
            block.push(id);
        }
        blocks.push(block);
    }
    GreechieDiagram::new(atoms, blocks)
}

/// Atoms contained in two or more distinct blocks, in canonical order.
///
/// Identical blocks (the same context listed twice) are counted once.
pub fn link_atoms(g: &GreechieDiagram) -> Vec<usize> {
    let mut distinct: Vec<Vec<usize>> = Vec::new();
    for b in &g.blocks {
        let mut sorted = b.clone();
        sorted.sort_unstable();
        if !distinct.contains(&sorted) {
            distinct.push(sorted);
        }
    }
    (0..g.atoms.len())
        .filter(|k| distinct.iter().filter(|b| b.contains(k)).count() >= 2)
        .collect()
}

/// A {0,1} assignment over atoms, in the diagram's canonical atom order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoValuedState {
    values: Vec<bool>,
}

impl TwoValuedState {
    pub fn from_values(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, atom: usize) -> bool {
        self.values[atom]
    }

    /// Exactly one true atom per block.
    pub fn is_valid_for(&self, g: &GreechieDiagram) -> bool {
        self.values.len() == g.atoms.len()
            && g.blocks.iter().all(|b| b.iter().filter(|&&k| self.values[k]).count() == 1)
    }

    pub fn assignment(&self, g: &GreechieDiagram) -> BTreeMap<String, u8> {
        g.atoms
            .iter()
            .zip(&self.values)
            .map(|(a, &v)| (a.id.clone(), u8::from(v)))
            .collect()
    }

    pub fn true_atoms(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&k| self.values[k]).collect()
    }
}

struct Search<'a> {
    g: &'a GreechieDiagram,
    blocks_of: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Sets `atom` true and every atom sharing a block with it false.
    /// Returns `false` if some block is left without any possible true atom.
    fn assign_true(&self, values: &mut [Option<bool>], atom: usize) -> bool {
        values[atom] = Some(true);
        for &b in &self.blocks_of[atom] {
            for &other in &self.g.blocks[b] {
                if other != atom {
                    match values[other] {
                        Some(true) => return false,
                        Some(false) => {}
                        None => values[other] = Some(false),
                    }
                }
            }
        }
        self.g.blocks.iter().all(|b| b.iter().any(|&k| values[k] != Some(false)))
    }

    fn open_block(&self, values: &[Option<bool>]) -> Option<usize> {
        self.g.blocks.iter().position(|b| !b.iter().any(|&k| values[k] == Some(true)))
    }

    fn extend(&self, values: &mut [Option<bool>], out: &mut Vec<TwoValuedState>) {
        let Some(b) = self.open_block(values) else {
            out.push(TwoValuedState { values: values.iter().map(|v| v.unwrap_or(false)).collect() });
            return;
        };
        for &atom in &self.g.blocks[b] {
            if values[atom].is_some() {
                continue;
            }
            let mut next = values.to_vec();
            if self.assign_true(&mut next, atom) {
                self.extend(&mut next, out);
            }
            // later branches of this block exclude the atom just tried
            values[atom] = Some(false);
        }
    }
}

/// All two-valued states of `g`, by backtracking with block propagation.
///
/// The choices for the first block are explored in parallel; the result
/// order is the sequential depth-first order regardless.
pub fn two_valued_states(g: &GreechieDiagram) -> Vec<TwoValuedState> {
    let mut blocks_of = vec![Vec::new(); g.atoms.len()];
    for (b, block) in g.blocks.iter().enumerate() {
        for &k in block {
            blocks_of[k].push(b);
        }
    }
    let search = Search { g, blocks_of };
    let first = &g.blocks[0];
    first
        .par_iter()
        .enumerate()
        .map(|(pos, &atom)| {
            let mut values = vec![None; g.atoms.len()];
            for &earlier in &first[..pos] {
                values[earlier] = Some(false);
            }
            let mut out = Vec::new();
            if search.assign_true(&mut values, atom) {
                search.extend(&mut values, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub separating: bool,
    /// First atom pair no state tells apart, in canonical order.
    pub witness: Option<(usize, usize)>,
}

/// Whether every pair of distinct atoms receives different values in some state.
pub fn is_separating(states: &[TwoValuedState], g: &GreechieDiagram) -> Separation {
    let n = g.atoms.len();
    for x in 0..n {
        for y in (x + 1)..n {
            if !states.iter().any(|s| s.get(x) != s.get(y)) {
                return Separation { separating: false, witness: Some((x, y)) };
            }
        }
    }
    Separation { separating: true, witness: None }
}
