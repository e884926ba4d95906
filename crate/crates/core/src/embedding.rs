//! Dense vertex embeddings and their CSV form.
//!
//! The CSV has a header `id,x_0,...,x_{d-1}` followed by one row per vertex,
//! keyed by the vertex's original label, values with 6 significant digits.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    dim: usize,
    data: Vec<f64>,
}

impl Embedding {
    /// `data` is row-major with `dim` columns.
    pub fn from_rows(dim: usize, data: Vec<f64>) -> Embedding {
        assert!(dim > 0 && data.len().is_multiple_of(dim), "ragged embedding");
        Embedding { dim, data }
    }

    pub fn from_points(points: &[Vec<f64>]) -> Embedding {
        let dim = points.first().map_or(1, Vec::len);
        assert!(points.iter().all(|p| p.len() == dim), "ragged embedding");
        Embedding::from_rows(dim, points.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, v: VertexId) -> &[f64] {
        &self.data[v * self.dim..(v + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> f64 {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Embedding {
        Embedding {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        write!(out, "id")?;
        for i in 0..self.dim {
            write!(out, ",x_{i}")?;
        }
        writeln!(out)?;
        for (v, row) in self.rows().enumerate() {
            write!(out, "{}", g.label(v))?;
            for &x in row {
                write!(out, ",{}", format_significant(x, 6))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Reads an embedding CSV, aligning rows to `g`'s vertex ids by label.
    pub fn read_csv(g: &Graph, text: &str) -> Result<Embedding> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let dim = header.split(',').count().saturating_sub(1);
        if !header.starts_with("id") || dim == 0 {
            return Err(Error::Parse {
                line: 1,
                message: "expected header `id,x_0,...`".into(),
            });
        }

        let n = g.vertex_count();
        let mut data = vec![0.0; n * dim];
        let mut seen = vec![false; n];
        for (lineno, line) in lines {
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let mut fields = line.split(',');
            let label = fields.next().unwrap_or_default().trim();
            let v = g.id_of(label).ok_or_else(|| Error::UnknownLabel(label.to_owned()))?;
            let values = fields
                .map(|f| f.trim().parse::<f64>().map_err(|e| parse_err(format!("{e}: `{f}`"))))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != dim {
                return Err(parse_err(format!("expected {dim} values, found {}", values.len())));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(parse_err(format!("duplicate row for `{label}`")));
            }
            data[v * dim..(v + 1) * dim].copy_from_slice(&values);
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::MissingEmbedding(g.label(v).to_owned()));
        }
        Ok(Embedding { dim, data })
    }
}

/// Shortest decimal rendering of `x` rounded to `digits` significant digits,
/// switching to exponent notation outside `1e-5 <= |x| < 1e{digits}`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(1.0, 6), "1");
        assert_eq!(format_significant(-0.001234567, 6), "-0.00123457");
        assert_eq!(format_significant(123456.7, 6), "123457");
        assert_eq!(format_significant(1234567.0, 6), "1.23457e6");
        assert_eq!(format_significant(0.000001, 6), "1e-6");
        assert_eq!(format_significant(9.9999999, 6), "10");
        assert_eq!(format_significant(3.25, 6), "3.25");
    }

    #[test]
    fn csv_roundtrip_by_label() {
        let g = Graph::from_edge_list("p q\nq r").unwrap();
        let e = Embedding::from_points(&[vec![1.5, -2.0], vec![0.25, 0.0], vec![1e-7, 3.0]]);
        let mut buf = Vec::new();
        e.write_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("id,x_0,x_1\np,1.5,-2\n"));
        let back = Embedding::read_csv(&g, &text).unwrap();
        assert_eq!(back, e);

        // rows may come in any order
        let shuffled = "id,x_0\nr,3\np,1\nq,2\n";
        let e = Embedding::read_csv(&g, shuffled).unwrap();
        assert_eq!(e.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn csv_errors() {
        let g = Graph::from_edge_list("p q\nq r").unwrap();
        let missing = "id,x_0\np,1\nq,2\n";
        assert!(matches!(Embedding::read_csv(&g, missing), Err(Error::MissingEmbedding(l)) if l == "r"));
        let unknown = "id,x_0\np,1\nz,2\n";
        assert!(matches!(Embedding::read_csv(&g, unknown), Err(Error::UnknownLabel(l)) if l == "z"));
        let ragged = "id,x_0\np,1,2\n";
        assert!(matches!(Embedding::read_csv(&g, ragged), Err(Error::Parse { line: 2, .. })));
        assert!(Embedding::read_csv(&g, "").is_err());
    }

    #[test]
    fn distances() {
        let e = Embedding::from_points(&[vec![0.0, 0.0], vec![3.0, 4.0]]);
        assert_eq!(e.distance(0, 1), 5.0);
        assert_eq!(e.scaled(2.0).distance(0, 1), 10.0);
    }
}
