//! Labeled training sets and their CSV form.

use std::io::{BufRead, Write};

use crate::cube::{CubePoint, MAX_TABLE_DIM};
use crate::dist::JointDistribution;
use crate::error::{Error, Result};

/// `n` labeled samples `(x(i), y(i))` of one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    dim: usize,
    samples: Vec<(CubePoint, i8)>,
}

impl Dataset {
    pub fn new(dim: usize, samples: Vec<(CubePoint, i8)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for &(x, y) in &samples {
            if x.dim() != dim {
                return Err(Error::DimMismatch {
                    left: x.dim(),
                    right: dim,
                });
            }
            if y != 1 && y != -1 {
                return Err(Error::BadLabel(y as i32));
            }
        }
        Ok(Dataset { dim, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[(CubePoint, i8)] {
        &self.samples
    }

    /// The uniform distribution on the training set: cell mass =
    /// (occurrence count) / n.
    pub fn empirical_distribution(&self) -> Result<JointDistribution> {
        if self.dim > MAX_TABLE_DIM {
            return Err(Error::BadDim {
                dim: self.dim,
                max: MAX_TABLE_DIM,
            });
        }
        let mut counts = vec![0u64; 1 << (self.dim + 1)];
        for &(x, y) in &self.samples {
            let idx = ((x.bits() as usize) << 1) | usize::from(y == -1);
            counts[idx] += 1;
        }
        let n = self.n() as f64;
        let table = counts.into_iter().map(|c| c as f64 / n).collect();
        JointDistribution::new(self.dim, table)
    }

    /// CSV with header `x1,...,xd,y`; every value is the literal `1` or
    /// `-1`; LF line endings.
    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for j in 1..=self.dim {
            write!(w, "x{j},")?;
        }
        writeln!(w, "y")?;
        for &(x, y) in &self.samples {
            for j in 0..self.dim {
                write!(w, "{},", x.coord(j))?;
            }
            writeln!(w, "{y}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.to_csv(&mut buf).expect("write to vec");
        String::from_utf8(buf).expect("utf-8")
    }

    /// Parse the CSV form; errors name the offending line (the header is
    /// line 1).
    pub fn from_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Csv {
            line: 1,
            msg: "missing header".into(),
        })?;
        let header = header?;
        let cols: Vec<&str> = header.trim_end().split(',').collect();
        if cols.len() < 2 || cols[cols.len() - 1] != "y" {
            return Err(Error::Csv {
                line: 1,
                msg: format!("expected header `x1,...,xd,y`, got `{header}`"),
            });
        }
        let dim = cols.len() - 1;
        for (j, col) in cols[..dim].iter().enumerate() {
            if *col != format!("x{}", j + 1) {
                return Err(Error::Csv {
                    line: 1,
                    msg: format!("expected column `x{}`, got `{col}`", j + 1),
                });
            }
        }
        let mut samples = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            let line = line?;
            let t = line.trim_end();
            if t.is_empty() {
                continue;
            }
            let fields: Vec<&str> = t.split(',').collect();
            if fields.len() != dim + 1 {
                return Err(Error::Csv {
                    line: line_no,
                    msg: format!("expected {} fields, got {}", dim + 1, fields.len()),
                });
            }
            let mut coords = Vec::with_capacity(dim);
            for f in &fields {
                match f.trim() {
                    "1" => coords.push(1i8),
                    "-1" => coords.push(-1i8),
                    other => {
                        return Err(Error::Csv {
                            line: line_no,
                            msg: format!("value `{other}` is not 1 or -1"),
                        })
                    }
                }
            }
            let y = coords.pop().expect("dim+1 fields");
            let x = CubePoint::from_coords(&coords).map_err(|e| Error::Csv {
                line: line_no,
                msg: e.to_string(),
            })?;
            samples.push((x, y));
        }
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Dataset::new(dim, samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;

    #[test]
    fn empirical_point_mass_is_exact() {
        let x = CubePoint::new(0b10, 2).unwrap();
        let data = Dataset::new(2, vec![(x, 1)]).unwrap();
        let emp = data.empirical_distribution().unwrap();
        assert_eq!(emp, JointDistribution::point_mass(x, 1).unwrap());
    }

    #[test]
    fn empirical_two_distinct_samples() {
        let a = CubePoint::new(0, 2).unwrap();
        let b = CubePoint::new(3, 2).unwrap();
        let data = Dataset::new(2, vec![(a, 1), (b, -1)]).unwrap();
        let emp = data.empirical_distribution().unwrap();
        assert_eq!(emp.prob(a, 1), 0.5);
        assert_eq!(emp.prob(b, -1), 0.5);
        assert_eq!(emp.prob(a, -1), 0.0);
    }

    #[test]
    fn empirical_of_sampled_point_mass_is_that_point_mass() {
        let x = CubePoint::new(5, 3).unwrap();
        let d = JointDistribution::point_mass(x, -1).unwrap();
        let data = d.sample(37, RngSeed::new(0, 0)).unwrap();
        assert_eq!(data.empirical_distribution().unwrap(), d);
    }

    #[test]
    fn empirical_tv_shrinks_with_n() {
        let j = crate::cube::SubsetMask::from_one_based(&[1, 3], 4).unwrap();
        let d = JointDistribution::planted_junta(
            4,
            j,
            &crate::dist::TruthTable::parity(2).unwrap(),
            &JointDistribution::uniform_marginal(4),
            0.25,
        )
        .unwrap();
        let seed = RngSeed::new(77, 0);
        let tv_small = d
            .sample(1_000, seed)
            .unwrap()
            .empirical_distribution()
            .unwrap()
            .total_variation(&d)
            .unwrap();
        let tv_large = d
            .sample(100_000, seed.with_stream(1))
            .unwrap()
            .empirical_distribution()
            .unwrap()
            .total_variation(&d)
            .unwrap();
        assert!(tv_large < tv_small, "tv {tv_large} !< {tv_small}");
        assert!(tv_large < 0.02, "tv at n=1e5 still {tv_large}");
    }

    #[test]
    fn csv_roundtrip() {
        let d = JointDistribution::uniform_x_fair_label(3).unwrap();
        let data = d.sample(50, RngSeed::new(5, 5)).unwrap();
        let s = data.to_csv_string();
        assert!(s.starts_with("x1,x2,x3,y\n"));
        let back = Dataset::from_csv(s.as_bytes()).unwrap();
        assert_eq!(data, back);
    }

    #[test]
    fn csv_errors_name_lines() {
        let bad_header = "a,b,y\n1,1,1\n";
        match Dataset::from_csv(bad_header.as_bytes()) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected csv error, got {other:?}"),
        }
        let bad_value = "x1,x2,y\n1,1,1\n1,2,-1\n";
        match Dataset::from_csv(bad_value.as_bytes()) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected csv error, got {other:?}"),
        }
        let bad_arity = "x1,x2,y\n1,1\n";
        match Dataset::from_csv(bad_arity.as_bytes()) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        assert!(Dataset::new(3, vec![]).is_err());
        let x = CubePoint::new(0, 2).unwrap();
        assert!(Dataset::new(3, vec![(x, 1)]).is_err());
        assert!(Dataset::new(2, vec![(x, 2)]).is_err());
    }
}
