//! Sparse rows and labelled datasets.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Learning task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    /// Binary classification, labels in {+1, -1}.
    Cls,
    /// ε-insensitive regression, real targets.
    Svr,
    /// Crammer–Singer multiclass, labels in 1..=M.
    Mlt,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Cls => "cls",
            Task::Svr => "svr",
            Task::Mlt => "mlt",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cls" => Some(Task::Cls),
            "svr" => Some(Task::Svr),
            "mlt" => Some(Task::Mlt),
            _ => None,
        }
    }
}

/// A sparse feature vector with strictly ascending 0-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    indices: Vec<usize>,
    values: Vec<f64>,
    dim: usize,
}

impl SparseRow {
    /// Validates and builds a row. Zero values are rejected; use
    /// [`SparseRow::from_pairs`] to drop them instead.
    pub fn new(indices: Vec<usize>, values: Vec<f64>, dim: usize) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::InvalidRow(format!(
                "{} indices but {} values",
                indices.len(),
                values.len()
            )));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidRow(format!(
                    "indices not strictly ascending at {}",
                    w[1]
                )));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::InvalidRow(format!("index {last} out of range for dim {dim}")));
            }
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidRow(format!("non-finite value {v}")));
            }
            if v == 0.0 {
                return Err(Error::InvalidRow("stored zero value".into()));
            }
        }
        Ok(Self { indices, values, dim })
    }

    /// Builds a row from ascending `(index, value)` pairs, skipping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, f64)>>(pairs: I, dim: usize) -> Result<Self> {
        let (indices, values): (Vec<usize>, Vec<f64>) =
            pairs.into_iter().filter(|&(_, v)| v != 0.0).unzip();
        Self::new(indices, values, dim)
    }

    pub fn from_dense(x: &[f64]) -> Self {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for (i, &v) in x.iter().enumerate() {
            if v != 0.0 {
                indices.push(i);
                values.push(v);
            }
        }
        Self {
            indices,
            values,
            dim: x.len(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    /// Sparse-dense dot product; `w` must have length `dim`.
    #[inline]
    pub fn dot(&self, w: &[f64]) -> f64 {
        let mut s = 0.0;
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            s += v * w[i];
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Appends a unit feature at index `dim`.
    pub fn with_bias(mut self) -> Self {
        self.indices.push(self.dim);
        self.values.push(1.0);
        self.dim += 1;
        self
    }

    /// Removes a trailing bias column at `dim - 1`.
    pub fn without_last_column(mut self) -> Self {
        if self.indices.last() == Some(&(self.dim - 1)) {
            self.indices.pop();
            self.values.pop();
        }
        self.dim -= 1;
        self
    }

    /// Changes the declared dimension; fails if a stored index would fall out of range.
    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        if let Some(&last) = self.indices.last() {
            if last >= dim {
                return Err(Error::InvalidRow(format!("index {last} out of range for dim {dim}")));
            }
        }
        self.dim = dim;
        Ok(self)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut x = alloc::vec![0.0; self.dim];
        for (i, v) in self.iter() {
            x[i] = v;
        }
        x
    }
}

/// An immutable labelled design matrix.
///
/// Labels are stored as `f64` for every task: ±1 for [`Task::Cls`], the
/// target for [`Task::Svr`] and the 1-based class for [`Task::Mlt`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<SparseRow>,
    labels: Vec<f64>,
    task: Task,
    num_classes: usize,
    dim: usize,
    bias: bool,
}

impl Dataset {
    /// `num_classes` is required for [`Task::Mlt`] and ignored otherwise.
    /// `bias` records whether the last column is a synthetic unit feature.
    pub fn new(
        rows: Vec<SparseRow>,
        labels: Vec<f64>,
        task: Task,
        num_classes: Option<usize>,
        bias: bool,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if rows.len() != labels.len() {
            return Err(Error::InvalidLabels(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let dim = rows[0].dim();
        if let Some(r) = rows.iter().find(|r| r.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.dim(),
            });
        }
        let num_classes = match task {
            Task::Cls => {
                if let Some(y) = labels.iter().find(|&&y| y != 1.0 && y != -1.0) {
                    return Err(Error::InvalidLabels(format!("binary label {y} not in {{+1, -1}}")));
                }
                2
            }
            Task::Svr => {
                if labels.iter().any(|y| !y.is_finite()) {
                    return Err(Error::InvalidLabels("non-finite regression target".into()));
                }
                0
            }
            Task::Mlt => {
                let m = num_classes
                    .ok_or_else(|| Error::InvalidLabels("multiclass dataset needs a class count".into()))?;
                let mut seen = alloc::vec![false; m];
                for &y in &labels {
                    if libm::trunc(y) != y || y < 1.0 || y > m as f64 {
                        return Err(Error::InvalidLabels(format!("class label {y} outside 1..={m}")));
                    }
                    seen[y as usize - 1] = true;
                }
                if let Some(c) = seen.iter().position(|s| !s) {
                    return Err(Error::InvalidLabels(format!("class {} has no rows", c + 1)));
                }
                m
            }
        };
        Ok(Self {
            rows,
            labels,
            task,
            num_classes,
            dim,
            bias,
        })
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn task(&self) -> Task {
        self.task
    }

    /// Number of classes (`M`) for multiclass data, 2 for binary, 0 for regression.
    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Feature count including the bias column.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_bias(&self) -> bool {
        self.bias
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// 0-based class of datum `d` (multiclass only).
    #[inline]
    pub fn class_of(&self, d: usize) -> usize {
        self.labels[d] as usize - 1
    }

    /// Reorders rows; used to check order invariance.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: order.len(),
            });
        }
        let rows = order.iter().map(|&i| self.rows[i].clone()).collect();
        let labels = order.iter().map(|&i| self.labels[i]).collect();
        Ok(Self {
            rows,
            labels,
            ..self.clone()
        })
    }

    pub fn into_parts(self) -> (Vec<SparseRow>, Vec<f64>) {
        (self.rows, self.labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn row_invariants_enforced() {
        assert!(SparseRow::new(vec![1, 1], vec![1.0, 2.0], 3).is_err());
        assert!(SparseRow::new(vec![2, 1], vec![1.0, 2.0], 3).is_err());
        assert!(SparseRow::new(vec![3], vec![1.0], 3).is_err());
        assert!(SparseRow::new(vec![0], vec![0.0], 3).is_err());
        assert!(SparseRow::new(vec![0], vec![f64::NAN], 3).is_err());
        assert!(SparseRow::new(vec![0, 2], vec![1.0, 2.0], 3).is_ok());
    }

    #[test]
    fn bias_appends_unit_feature() {
        let r = SparseRow::new(vec![0, 2], vec![0.5, 2.0], 3).unwrap().with_bias();
        assert_eq!(r.indices(), &[0, 2, 3]);
        assert_eq!(r.values(), &[0.5, 2.0, 1.0]);
        assert_eq!(r.dim(), 4);
        assert_eq!(r.clone().without_last_column().dim(), 3);
    }

    #[test]
    fn multiclass_coverage_checked() {
        let rows = vec![SparseRow::from_dense(&[1.0]), SparseRow::from_dense(&[2.0])];
        assert!(Dataset::new(rows.clone(), vec![1.0, 3.0], Task::Mlt, Some(3), false).is_err());
        assert!(Dataset::new(rows.clone(), vec![1.0, 2.0], Task::Mlt, Some(2), false).is_ok());
        assert!(Dataset::new(rows, vec![1.0, 0.5], Task::Cls, None, false).is_err());
    }

    #[test]
    fn empty_dataset_rejected() {
        assert_eq!(
            Dataset::new(vec![], vec![], Task::Cls, None, false),
            Err(Error::EmptyDataset)
        );
    }
}
