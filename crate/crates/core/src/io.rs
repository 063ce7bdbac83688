//! JSON formats shared by the library and the command line.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::carvefill::{BallInComplex, CompatibleFamily, FillManifest};
use crate::cell::{FreeSumCell, PolyComplex};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::{LiftedConfiguration, Subdivision};
use crate::simplex::Simplex;
use crate::vertex::VertexId;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t")]
enum CellRepr {
    #[serde(rename = "s")]
    Simplex { v: Simplex },
    #[serde(rename = "fs")]
    FreeSum { f: Simplex, g: Simplex },
}

/// `{"dim": d, "cells": [{"t":"s","v":[..]}, {"t":"fs","f":[..],"g":[..]}]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ComplexRepr {
    dim: isize,
    cells: Vec<CellRepr>,
}

impl ComplexRepr {
    fn of(p: &PolyComplex) -> Self {
        let s = p.simplex_cells().iter().map(|v| CellRepr::Simplex { v: v.clone() });
        let fs = p.free_cells().iter().map(|c| CellRepr::FreeSum { f: c.f_part().clone(), g: c.g_part().clone() });
        ComplexRepr { dim: p.dim(), cells: s.chain(fs).collect() }
    }

    fn into_poly(self) -> Result<PolyComplex> {
        let mut simplices = BTreeSet::new();
        let mut free = BTreeSet::new();
        for c in self.cells {
            match c {
                CellRepr::Simplex { v } => {
                    simplices.insert(v);
                }
                CellRepr::FreeSum { f, g } => {
                    free.insert(FreeSumCell::new(f, g)?);
                }
            }
        }
        let p = PolyComplex::new(simplices, free)?;
        if p.dim() != self.dim {
            return Err(Error::InputParseError(format!("declared dim {} but cells have dim {}", self.dim, p.dim())));
        }
        Ok(p)
    }
}

fn to_line<S: Serialize>(x: &S) -> String {
    let mut s = serde_json::to_string(x).expect("serializable");
    s.push('\n');
    s
}

pub fn poly_to_json(p: &PolyComplex) -> String {
    to_line(&ComplexRepr::of(p))
}

pub fn simplicial_to_json(x: &SimplicialComplex) -> String {
    poly_to_json(&PolyComplex::from_simplicial(x))
}

pub fn poly_from_json(s: &str) -> Result<PolyComplex> {
    serde_json::from_str::<ComplexRepr>(s)?.into_poly()
}

/// Parses a complex that must not contain free sum cells.
pub fn simplicial_from_json(s: &str) -> Result<SimplicialComplex> {
    let p = poly_from_json(s)?;
    if !p.free_cells().is_empty() {
        return Err(Error::InputParseError("expected a simplicial complex, found free sum cells".into()));
    }
    SimplicialComplex::new(p.simplex_cells().iter().cloned())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct HoleRecord {
    key: u64,
    apex: VertexId,
    free_cells: Vec<FreeSumCell>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ManifestRepr {
    #[serde(flatten)]
    complex: ComplexRepr,
    holes: Vec<HoleRecord>,
}

/// The filled complex plus its free cells per hole, in realization order.
pub fn manifest_to_json(m: &FillManifest) -> String {
    let holes = m
        .free_cells_by_ball
        .iter()
        .map(|(k, cells)| HoleRecord { key: *k, apex: m.apex_of_ball[k], free_cells: cells.clone() })
        .collect();
    to_line(&ManifestRepr { complex: ComplexRepr::of(&m.result), holes })
}

pub fn manifest_from_json(s: &str) -> Result<FillManifest> {
    let r: ManifestRepr = serde_json::from_str(s)?;
    let result = r.complex.into_poly()?;
    let mut listed = BTreeSet::new();
    let mut free_cells_by_ball = BTreeMap::new();
    let mut apex_of_ball = BTreeMap::new();
    for h in r.holes {
        if free_cells_by_ball.contains_key(&h.key) {
            return Err(Error::InputParseError(format!("hole {} listed twice", h.key)));
        }
        listed.extend(h.free_cells.iter().cloned());
        apex_of_ball.insert(h.key, h.apex);
        free_cells_by_ball.insert(h.key, h.free_cells);
    }
    if &listed != result.free_cells() {
        return Err(Error::InputParseError("hole records do not match the free cells of the complex".into()));
    }
    Ok(FillManifest { result, free_cells_by_ball, apex_of_ball })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct HoleEntry {
    key: u64,
    ball: Vec<Simplex>,
    members: Vec<Simplex>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct HolesRepr {
    holes: Vec<HoleEntry>,
}

/// Parses `{"holes":[{"key":k,"ball":[..],"members":[..]}]}` against `host`.
pub fn holes_from_json(host: &Arc<SimplicialComplex>, s: &str) -> Result<Vec<(u64, CompatibleFamily)>> {
    let r: HolesRepr = serde_json::from_str(s)?;
    r.holes
        .into_iter()
        .map(|h| {
            let ball = BallInComplex::new(host.clone(), h.ball.into_iter().collect())?;
            Ok((h.key, CompatibleFamily::new(ball, h.members.into_iter().collect())?))
        })
        .collect()
}

pub fn holes_to_json(holes: &[(u64, CompatibleFamily)]) -> String {
    let holes = holes
        .iter()
        .map(|(k, f)| HoleEntry { key: *k, ball: f.ball.facets().iter().cloned().collect(), members: f.members.iter().cloned().collect() })
        .collect();
    to_line(&HolesRepr { holes })
}

/// Hex bitstring with bit `i` (least significant first) choosing the
/// triangulation of free cell `i`. Missing high bits are zero.
pub fn parse_choices(s: &str, len: usize) -> Result<Vec<bool>> {
    let hex = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    if hex.is_empty() {
        return Err(Error::InputParseError("empty choice string".into()));
    }
    let mut bits = vec![false; len];
    for (pos, ch) in hex.chars().rev().enumerate() {
        let v = ch.to_digit(16).ok_or_else(|| Error::InputParseError(format!("bad hex digit {ch:?}")))?;
        for b in 0..4 {
            if v >> b & 1 == 1 {
                let i = 4 * pos + b;
                if i >= len {
                    return Err(Error::ChoiceLengthMismatch { expected: len, got: i + 1 });
                }
                bits[i] = true;
            }
        }
    }
    Ok(bits)
}

pub fn format_choices(bits: &[bool]) -> String {
    let digits: String = bits
        .chunks(4)
        .rev()
        .map(|c| {
            let v = c.iter().enumerate().fold(0u32, |a, (i, &b)| a | (b as u32) << i);
            char::from_digit(v, 16).expect("nibble")
        })
        .collect();
    format!("0x{}", if digits.is_empty() { "0" } else { &digits })
}

/// A certified lift of an Aztec instance: configuration, heights and the
/// cells they induce.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftFile {
    pub k: u32,
    pub l: u32,
    /// Perturbation exponent: `ε = 2^{-t}`.
    pub t: u32,
    #[serde(flatten)]
    pub lifted: LiftedConfiguration<VertexId, Rational>,
    pub centers: Vec<VertexId>,
    pub cells: Subdivision<VertexId>,
}

pub fn lift_to_json(f: &LiftFile) -> String {
    to_line(f)
}

pub fn lift_from_json(s: &str) -> Result<LiftFile> {
    Ok(serde_json::from_str(s)?)
}
