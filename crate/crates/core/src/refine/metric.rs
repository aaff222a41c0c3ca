use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lfcore::LengthOracle;
use crate::scalar::{common_denominator, Scalar};
use crate::words::Word;

/// Distances `d(i, j) = P(x_j x_i⁻¹)` between the orbit points of a sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMetric<S> {
    pub sample: Vec<Word>,
    pub d: Vec<Vec<S>>,
}

/// The first failure found by [`OrbitMetric::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricViolation<S> {
    Diagonal { i: usize, value: S },
    Asymmetric { i: usize, j: usize, dij: S, dji: S },
    Negative { i: usize, j: usize, value: S },
    Triangle { i: usize, j: usize, k: usize },
    FourPoint { quad: [usize; 4], sums: [S; 3] },
}

impl<S: Scalar> fmt::Display for MetricViolation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::Diagonal { i, value } => {
                write!(f, "d({i},{i}) = {} ≠ 0", value.to_fraction())
            }
            MetricViolation::Asymmetric { i, j, dij, dji } => write!(
                f,
                "d({i},{j}) = {} ≠ d({j},{i}) = {}",
                dij.to_fraction(),
                dji.to_fraction()
            ),
            MetricViolation::Negative { i, j, value } => {
                write!(f, "d({i},{j}) = {} < 0", value.to_fraction())
            }
            MetricViolation::Triangle { i, j, k } => {
                write!(f, "triangle inequality fails for d({i},{k}) via {j}")
            }
            MetricViolation::FourPoint { quad, sums } => write!(
                f,
                "four-point condition fails on {quad:?}: sums {}, {}, {}",
                sums[0].to_fraction(),
                sums[1].to_fraction(),
                sums[2].to_fraction()
            ),
        }
    }
}

impl<S: Scalar> OrbitMetric<S> {
    /// Computes the matrix without validating it. The sample must contain
    /// the identity; duplicates are removed, order is otherwise kept.
    pub fn compute<O: LengthOracle<S> + ?Sized>(p: &O, sample: &[Word]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let sample: Vec<Word> = sample.iter().filter(|w| seen.insert((*w).clone())).cloned().collect();
        for w in &sample {
            p.alphabet().check(w)?;
        }
        if !sample.iter().any(Word::is_identity) {
            return Err(Error::Precondition("the sample must contain the identity".into()));
        }
        let n = sample.len();
        let inverses: Vec<Word> = sample.iter().map(Word::inverse).collect();
        let upper: Vec<Vec<(S, S)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| {
                        (
                            p.eval(&sample[j].concat(&inverses[i])),
                            p.eval(&sample[i].concat(&inverses[j])),
                        )
                    })
                    .collect()
            })
            .collect();
        let diag: Vec<S> = sample.iter().map(|_| p.eval(&Word::identity())).collect();
        let mut d = vec![vec![S::zero(); n]; n];
        for (i, row) in upper.into_iter().enumerate() {
            d[i][i] = diag[i].clone();
            for (k, (dij, dji)) in row.into_iter().enumerate() {
                let j = i + 1 + k;
                d[i][j] = dij;
                d[j][i] = dji;
            }
        }
        Ok(OrbitMetric { sample, d })
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    /// Matrix rescaled to integers over a common denominator, when it fits.
    pub(crate) fn integer_matrix(&self) -> Option<Vec<Vec<i64>>> {
        integer_matrix(&self.d)
    }

    /// Symmetry, zero diagonal, nonnegativity, triangle and four-point checks.
    pub fn validate(&self) -> std::result::Result<(), MetricViolation<S>> {
        let n = self.len();
        let d = &self.d;
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(MetricViolation::Diagonal {
                    i,
                    value: d[i][i].clone(),
                });
            }
            for j in 0..n {
                if d[i][j] != d[j][i] {
                    return Err(MetricViolation::Asymmetric {
                        i,
                        j,
                        dij: d[i][j].clone(),
                        dji: d[j][i].clone(),
                    });
                }
                if d[i][j] < S::zero() {
                    return Err(MetricViolation::Negative {
                        i,
                        j,
                        value: d[i][j].clone(),
                    });
                }
            }
        }
        match self.integer_matrix() {
            Some(m) => check_integer(&m).map_err(|v| match v {
                IntViolation::Triangle(i, j, k) => MetricViolation::Triangle { i, j, k },
                IntViolation::FourPoint(q) => MetricViolation::FourPoint {
                    quad: q,
                    sums: self.sums(q),
                },
            }),
            None => self.check_generic(),
        }
    }

    fn sums(&self, [i, j, k, l]: [usize; 4]) -> [S; 3] {
        let d = &self.d;
        [
            d[i][j].clone() + d[k][l].clone(),
            d[i][k].clone() + d[j][l].clone(),
            d[i][l].clone() + d[j][k].clone(),
        ]
    }

    fn check_generic(&self) -> std::result::Result<(), MetricViolation<S>> {
        let n = self.len();
        let d = &self.d;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > d[i][j].clone() + d[j][k].clone() {
                        return Err(MetricViolation::Triangle { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let mut s = self.sums([i, j, k, l]);
                        s.sort_by(|a, b| b.partial_cmp(a).expect("ordered"));
                        if s[0] != s[1] {
                            return Err(MetricViolation::FourPoint {
                                quad: [i, j, k, l],
                                sums: self.sums([i, j, k, l]),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rescales a square matrix to integers over a common denominator.
pub(crate) fn integer_matrix<S: Scalar>(d: &[Vec<S>]) -> Option<Vec<Vec<i64>>> {
    let n = d.len();
    let flat: Vec<S> = d.iter().flatten().cloned().collect();
    let ints = common_denominator(&flat)?;
    let bound = i64::MAX as i128 / 4;
    if ints.iter().any(|x| x.abs() > bound) {
        return None;
    }
    Some(
        (0..n)
            .map(|i| ints[i * n..(i + 1) * n].iter().map(|&x| x as i64).collect())
            .collect(),
    )
}

enum IntViolation {
    Triangle(usize, usize, usize),
    FourPoint([usize; 4]),
}

fn check_integer(m: &[Vec<i64>]) -> std::result::Result<(), IntViolation> {
    let n = m.len();
    let tri = (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            for k in 0..n {
                if m[i][k] > m[i][j] + m[j][k] {
                    return Some(IntViolation::Triangle(i, j, k));
                }
            }
        }
        None
    });
    if let Some(v) = tri {
        return Err(v);
    }
    let quad = (0..n).into_par_iter().find_map_first(|i| {
        let mi = &m[i];
        for j in i + 1..n {
            let (mj, dij) = (&m[j], mi[j]);
            for k in j + 1..n {
                let (mk, dik, djk) = (&m[k], mi[k], mj[k]);
                for l in k + 1..n {
                    let a = dij + mk[l];
                    let b = dik + mj[l];
                    let c = mi[l] + djk;
                    let top = a.max(b).max(c);
                    let second = if a == top {
                        b.max(c)
                    } else if b == top {
                        a.max(c)
                    } else {
                        a.max(b)
                    };
                    if top != second {
                        return Some(IntViolation::FourPoint([i, j, k, l]));
                    }
                }
            }
        }
        None
    });
    match quad {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// [`OrbitMetric::compute`] followed by [`OrbitMetric::validate`].
pub fn orbit_metric<S: Scalar, O: LengthOracle<S> + ?Sized>(
    p: &O,
    sample: &[Word],
) -> Result<OrbitMetric<S>> {
    let om = OrbitMetric::compute(p, sample)?;
    om.validate().map_err(|v| Error::NotTreeMetric(v.to_string()))?;
    Ok(om)
}
