use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::measure::BernoulliMeasure;
use super::pressure::check_contractions;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::tuple::MatrixTuple;

/// Affine maps `T_i x = A_i x + v_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineIFS {
    tuple: MatrixTuple,
    translations: Vec<Vector>,
    strict: bool,
}

impl AffineIFS {
    /// With `strict`, every `‖A_i‖` must be below 1.
    pub fn new(tuple: MatrixTuple, translations: Vec<Vec<f64>>, strict: bool) -> Result<Self> {
        if translations.len() != tuple.len() {
            return Err(Error::input(
                "translations",
                format!("{} translations for {} maps", translations.len(), tuple.len()),
            ));
        }
        let d = tuple.dim();
        let translations = translations
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if v.len() != d {
                    return Err(Error::input(
                        format!("translations[{i}]"),
                        format!("expected {d} entries, got {}", v.len()),
                    ));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::input(format!("translations[{i}]"), "non-finite entry"));
                }
                Ok(Vector::from_vec(v))
            })
            .collect::<Result<Vec<_>>>()?;
        if strict {
            check_contractions(&tuple)?;
        }
        Ok(Self { tuple, translations, strict })
    }

    pub fn tuple(&self) -> &MatrixTuple {
        &self.tuple
    }

    pub fn translations(&self) -> &[Vector] {
        &self.translations
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn apply(&self, i: usize, x: &Vector) -> Vector {
        self.tuple.get(i) * x + &self.translations[i]
    }

    /// Fixed point of `T_i`.
    pub fn fixed_point(&self, i: usize) -> Result<Vector> {
        let d = self.tuple.dim();
        let m = crate::linalg::Matrix::identity(d, d) - self.tuple.get(i);
        m.lu()
            .solve(&self.translations[i])
            .ok_or_else(|| Error::Degenerate(format!("map {} has no unique fixed point", i + 1)))
    }
}

/// Point cloud sampled by the chaos game; it is distributed approximately
/// as the self-affine measure `π_* μ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

pub fn sample_self_affine(
    ifs: &AffineIFS,
    mu: &BernoulliMeasure,
    points: usize,
    burn: usize,
    seed: u64,
) -> Result<PointCloud> {
    check_contractions(&ifs.tuple)?;
    mu.check_alphabet(ifs.tuple.len())?;
    let dist = WeightedIndex::new(mu.probabilities())
        .map_err(|e| Error::input("weights", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vector::zeros(ifs.tuple.dim());
    let mut out = Vec::with_capacity(points);
    for step in 0..burn + points {
        x = ifs.apply(dist.sample(&mut rng), &x);
        if step >= burn {
            out.push(x.iter().copied().collect());
        }
    }
    Ok(PointCloud { dim: ifs.tuple.dim(), points: out })
}

impl PointCloud {
    /// CSV with header `x1,…,xd`, one point per line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        wr.write_record((1..=self.dim).map(|j| format!("x{j}"))).map_err(io)?;
        for p in &self.points {
            wr.write_record(p.iter().map(|x| x.to_string())).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Io(e.to_string()))
    }
}
