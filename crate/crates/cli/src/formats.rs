//! On-disk formats: structure-constant algebra files and free-algebra
//! presentation files. Cyclotomic scalars are stored as lists of
//! [power, numerator, denominator] triples.

use std::path::Path;

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};

use ncdc_core::algebra::FDAlgebra;
use ncdc_core::freealg::{NCPoly, RewriteSystem, Word};
use ncdc_core::scalar::Cyclotomic;
use ncdc_core::{Error, Result};

pub type CoeffList = Vec<(i64, i64, i64)>;

pub fn cyclo_from_triples(order: u64, triples: &[(i64, i64, i64)]) -> Result<Cyclotomic> {
    let mut acc = Cyclotomic::zero(order);
    for &(p, n, d) in triples {
        if d == 0 {
            return Err(Error::Parse("zero denominator in coefficient".into()));
        }
        let t = Cyclotomic::from_ratio(n, d, order).mul_ref(&Cyclotomic::root_of_unity(order, p));
        acc = acc.add_ref(&t);
    }
    Ok(acc)
}

pub fn cyclo_to_triples(c: &Cyclotomic) -> Result<CoeffList> {
    let mut out = Vec::new();
    let to_i64 = |b: &BigInt| -> Result<i64> {
        i64::try_from(b.clone())
            .map_err(|_| Error::Parse("coefficient too large for the file format".into()))
    };
    for (p, r) in c.coeffs().iter().enumerate() {
        if !num::Zero::is_zero(r) {
            out.push((p as i64, to_i64(r.numer())?, to_i64(r.denom())?));
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
pub struct ScEntry(pub usize, pub usize, pub usize, pub CoeffList);

#[derive(Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub field_order: u64,
    pub labels: Vec<String>,
    pub unit: Vec<CoeffList>,
    pub sc: Vec<ScEntry>,
}

impl AlgebraFile {
    pub fn from_algebra(name: &str, alg: &FDAlgebra) -> Result<AlgebraFile> {
        let d = alg.dim();
        let mut unit = Vec::with_capacity(d);
        for c in alg.unit() {
            unit.push(cyclo_to_triples(c)?);
        }
        let mut sc = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = alg.sc(i, j, k);
                    if !c.is_zero() {
                        sc.push(ScEntry(i, j, k, cyclo_to_triples(c)?));
                    }
                }
            }
        }
        Ok(AlgebraFile {
            name: name.to_string(),
            dim: d,
            field_order: alg.order(),
            labels: alg.labels().to_vec(),
            unit,
            sc,
        })
    }

    pub fn to_algebra(&self) -> Result<FDAlgebra> {
        if self.labels.len() != self.dim || self.unit.len() != self.dim {
            return Err(Error::Parse(format!(
                "algebra file declares dim {} but has {} labels and {} unit entries",
                self.dim,
                self.labels.len(),
                self.unit.len()
            )));
        }
        let d = self.dim;
        let order = self.field_order.max(1);
        let mut unit = Vec::with_capacity(d);
        for triples in &self.unit {
            unit.push(cyclo_from_triples(order, triples)?);
        }
        let mut sc = vec![Cyclotomic::zero(order); d * d * d];
        for ScEntry(i, j, k, triples) in &self.sc {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::Parse(format!(
                    "structure constant index ({},{},{}) out of range for dim {}",
                    i, j, k, d
                )));
            }
            sc[(i * d + j) * d + k] = cyclo_from_triples(order, triples)?;
        }
        FDAlgebra::new(self.labels.clone(), unit, sc)
    }
}

pub fn read_algebra(path: &Path) -> Result<FDAlgebra> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    let file: AlgebraFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    file.to_algebra()
}

pub fn write_algebra(path: &Path, name: &str, alg: &FDAlgebra) -> Result<()> {
    let file = AlgebraFile::from_algebra(name, alg)?;
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Internal(format!("serialization: {}", e)))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| Error::Parse(format!("cannot write {}: {}", path.display(), e)))
}

#[derive(Serialize, Deserialize)]
pub struct RelTerm(pub CoeffList, pub Vec<String>);

#[derive(Serialize, Deserialize)]
pub struct PresentationFile {
    pub name: String,
    pub field_order: u64,
    pub generators: Vec<String>,
    /// Generator names in decreasing precedence (the orientation of the
    /// term order); defaults to `generators`.
    #[serde(default, alias = "orientation", skip_serializing_if = "Option::is_none")]
    pub precedence: Option<Vec<String>>,
    pub relations: Vec<Vec<RelTerm>>,
}

pub struct Presentation {
    pub name: String,
    pub system: RewriteSystem,
}

impl PresentationFile {
    pub fn to_presentation(&self) -> Result<Presentation> {
        let order = self.field_order.max(1);
        let prec: Vec<String> = self
            .precedence
            .clone()
            .unwrap_or_else(|| self.generators.clone());
        if prec.len() != self.generators.len() {
            return Err(Error::Parse(
                "precedence list must mention every generator exactly once".into(),
            ));
        }
        let index_of = |name: &str| -> Result<u32> {
            prec.iter()
                .position(|g| g == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::Parse(format!("unknown generator '{}'", name)))
        };
        for g in &self.generators {
            index_of(g)?;
        }
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut p = NCPoly::zero();
            for RelTerm(coeff, word) in rel {
                let c = cyclo_from_triples(order, coeff)?;
                let mut w = Vec::with_capacity(word.len());
                for g in word {
                    w.push(index_of(g)?);
                }
                p.add_term(Word(w), &c);
            }
            relations.push(p);
        }
        let system = RewriteSystem::from_relations(prec, order, &relations)?;
        Ok(Presentation {
            name: self.name.clone(),
            system,
        })
    }
}

pub fn read_presentation(path: &Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    let file: PresentationFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    file.to_presentation()
}

/// Canonical string of a polynomial: terms in decreasing order.
pub fn poly_to_string(p: &NCPoly, generators: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    let mut terms: Vec<(&Word, &Cyclotomic)> = p.terms().collect();
    terms.reverse();
    for (w, c) in terms {
        let word = if w.is_empty() {
            "1".to_string()
        } else {
            w.0.iter()
                .map(|&g| generators[g as usize].clone())
                .collect::<Vec<_>>()
                .join("*")
        };
        let coeff = c.to_string();
        if coeff == "1" && !w.is_empty() {
            parts.push(word);
        } else if w.is_empty() {
            parts.push(format!("({})", coeff));
        } else {
            parts.push(format!("({})*{}", coeff, word));
        }
    }
    parts.join(" + ")
}
