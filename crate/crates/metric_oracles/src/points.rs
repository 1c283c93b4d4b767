//! Point sets: Euclidean coordinates or an explicit distance matrix.

use serde::{Deserialize, Serialize};

use graph_core::families::euclid;
use graph_core::{tol, TerminalMetric};

use crate::error::OracleError;

#[derive(Debug, Clone, PartialEq)]
pub enum PointSet {
    Coords { dim: usize, points: Vec<Vec<f64>> },
    Matrix { dist: Vec<Vec<f64>> },
}

/// `{"n": N, "dist": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricJson {
    pub n: usize,
    pub dist: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn from_coords(points: Vec<Vec<f64>>) -> Result<Self, OracleError> {
        let dim = points.first().map_or(0, |p| p.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(OracleError::InvalidPoints(format!(
                    "point {i} has dimension {} but point 0 has {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(OracleError::InvalidPoints(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(PointSet::Coords { dim, points })
    }

    /// Validates symmetry, zero diagonal, non-negativity and the triangle
    /// inequality (up to the relative tolerance).
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self, OracleError> {
        let n = dist.len();
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(OracleError::InvalidPoints(format!("row {i} has length {}", row.len())));
            }
            if row[i] != 0.0 {
                return Err(OracleError::InvalidPoints(format!("diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                if !(row[j] >= 0.0 && row[j].is_finite()) || row[j] != dist[j][i] {
                    return Err(OracleError::InvalidPoints(format!("entry ({i}, {j}) is negative or asymmetric")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !tol::within(dist[i][k], dist[i][j] + dist[j][k]) {
                        return Err(OracleError::InvalidPoints(format!(
                            "triangle inequality fails for ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(PointSet::Matrix { dist })
    }

    /// Matrix mode from a terminal metric; ids are terminal indices.
    pub fn from_metric(metric: &TerminalMetric) -> Self {
        PointSet::Matrix { dist: metric.dist.clone() }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Coords { points, .. } => points.len(),
            PointSet::Matrix { dist } => dist.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        match self {
            PointSet::Coords { points, .. } => euclid(&points[a], &points[b]),
            PointSet::Matrix { dist } => dist[a][b],
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            PointSet::Coords { dim, .. } => Some(*dim),
            PointSet::Matrix { .. } => None,
        }
    }

    /// One point per line, comma-separated coordinates.
    pub fn parse_csv(text: &str) -> Result<Self, OracleError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p: Result<Vec<f64>, _> = line.split(',').map(|x| x.trim().parse::<f64>()).collect();
            points.push(p.map_err(|_| OracleError::InvalidPoints(format!("line {}: bad coordinate", lineno + 1)))?);
        }
        Self::from_coords(points)
    }

    pub fn to_csv(&self) -> Option<String> {
        match self {
            PointSet::Coords { points, .. } => Some(
                points
                    .iter()
                    .map(|p| p.iter().map(|x| graph_core::io::fmt9(*x)).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join("\n")
                    + "\n",
            ),
            PointSet::Matrix { .. } => None,
        }
    }

    pub fn parse_metric_json(text: &str) -> Result<Self, OracleError> {
        let m: MetricJson =
            serde_json::from_str(text).map_err(|e| OracleError::InvalidPoints(format!("metric json: {e}")))?;
        if m.dist.len() != m.n {
            return Err(OracleError::InvalidPoints(format!("n = {} but {} rows", m.n, m.dist.len())));
        }
        Self::from_matrix(m.dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_mismatch() {
        assert!(PointSet::from_coords(vec![vec![0.0, 0.0], vec![1.0]]).is_err());
    }

    #[test]
    fn matrix_checks() {
        assert!(PointSet::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_ok());
        assert!(PointSet::from_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        let bad = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(PointSet::from_matrix(bad).is_err());
    }

    #[test]
    fn csv_and_json() {
        let p = PointSet::parse_csv("0,0\n3,4\n").unwrap();
        assert_eq!(p.dist(0, 1), 5.0);
        assert_eq!(p.to_csv().unwrap(), "0,0\n3,4\n");
        let m = PointSet::parse_metric_json(r#"{"n":2,"dist":[[0,2],[2,0]]}"#).unwrap();
        assert_eq!(m.dist(1, 0), 2.0);
        assert!(PointSet::parse_metric_json(r#"{"n":3,"dist":[[0]]}"#).is_err());
    }
}
