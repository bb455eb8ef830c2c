use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SinrParams;
use crate::{Error, Label, Result};

/// Planar position in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub label: Label,
    pub x: f64,
    pub y: f64,
}

impl Station {
    pub fn new(label: u32, x: f64, y: f64) -> Self {
        Station {
            label: Label(label),
            x,
            y,
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Ground-truth deployment: positions, labels and SINR parameters.
///
/// Stations are kept sorted by label, so station index order and label order agree.
#[derive(Clone, Debug)]
pub struct PhysicalInstance {
    stations: Vec<Station>,
    params: SinrParams,
    n_labels: u32,
    index: HashMap<Label, usize>,
}

/// On-disk layout of an instance file.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    alpha: f64,
    beta: f64,
    noise: f64,
    epsilon: f64,
    power: f64,
    n_labels: u32,
    stations: Vec<Station>,
}

impl PhysicalInstance {
    pub fn new(mut stations: Vec<Station>, params: SinrParams, n_labels: u32) -> Result<Self> {
        params.validate()?;
        if stations.is_empty() {
            return Err(Error::InvalidInstance("no stations".into()));
        }
        stations.sort_by_key(|s| s.label);
        let mut index = HashMap::with_capacity(stations.len());
        for (i, s) in stations.iter().enumerate() {
            if s.label.0 == 0 || s.label.0 > n_labels {
                return Err(Error::InvalidInstance(format!(
                    "label {} outside [1..{n_labels}]",
                    s.label
                )));
            }
            if !s.x.is_finite() || !s.y.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "station {} has a non-finite coordinate",
                    s.label
                )));
            }
            if index.insert(s.label, i).is_some() {
                return Err(Error::InvalidInstance(format!(
                    "duplicate label {}",
                    s.label
                )));
            }
        }
        Ok(PhysicalInstance {
            stations,
            params,
            n_labels,
            index,
        })
    }

    pub fn stations(&self) -> &[Station] {
        &self.stations
    }

    pub fn params(&self) -> &SinrParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.stations.len()
    }

    pub fn n_labels(&self) -> u32 {
        self.n_labels
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.stations.iter().map(|s| s.label)
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn position(&self, label: Label) -> Option<Point> {
        self.index_of(label).map(|i| self.stations[i].position())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = InstanceFile {
            alpha: self.params.alpha,
            beta: self.params.beta,
            noise: self.params.noise,
            epsilon: self.params.epsilon,
            power: self.params.power,
            n_labels: self.n_labels,
            stations: self.stations.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text)?;
        let params = SinrParams {
            alpha: f.alpha,
            beta: f.beta,
            noise: f.noise,
            epsilon: f.epsilon,
            power: f.power,
        };
        PhysicalInstance::new(f.stations, params, f.n_labels)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        PhysicalInstance::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

impl PartialEq for PhysicalInstance {
    fn eq(&self, other: &Self) -> bool {
        self.stations == other.stations
            && self.params == other.params
            && self.n_labels == other.n_labels
    }
}
