//! Maps from integer matrices: rows give linear forms, columns give the
//! exponent split of each pair `(f_i, g_i)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::koszul::{KoszulError, MapSpec, Mode};
use crate::poly::{MPoly, Rat, RingSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaleError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is empty")]
    Empty,
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("row {0} is zero")]
    ZeroRow(usize),
    #[error("column {col} sums to {sum}, not zero")]
    ColumnSum { col: usize, sum: i64 },
    #[error("matrix has rank {rank}, expected full column rank {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("rows have {got} entries but the ring has {expected} t-variables")]
    WidthMismatch { expected: usize, got: usize },
    #[error("transform must be {expected}x{expected}")]
    TransformShape { expected: usize },
    #[error("transform has determinant {0}, not ±1")]
    NotUnimodular(BigInt),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
}

/// Integer matrix with zero column sums, full column rank and no zero row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleMatrix {
    entries: Vec<Vec<i64>>,
}

fn check_rect(entries: &[Vec<i64>]) -> Result<usize, GaleError> {
    let cols = entries.first().map(Vec::len).ok_or(GaleError::Empty)?;
    if cols == 0 {
        return Err(GaleError::Empty);
    }
    for (row, r) in entries.iter().enumerate() {
        if r.len() != cols {
            return Err(GaleError::Ragged { row, expected: cols, got: r.len() });
        }
    }
    Ok(cols)
}

fn rank(entries: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rat>> = entries
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
        .collect();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let t = &f * &m[rank][k];
                    m[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn int_det(m: &[Vec<i64>]) -> BigInt {
    let rows: Vec<Vec<Rat>> =
        m.iter().map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()).collect();
    crate::detcx::rat_det(rows).to_integer()
}

impl GaleMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, GaleError> {
        let cols = check_rect(&entries)?;
        if let Some(row) = entries.iter().position(|r| r.iter().all(|&x| x == 0)) {
            return Err(GaleError::ZeroRow(row));
        }
        for col in 0..cols {
            let sum: i64 = entries.iter().map(|r| r[col]).sum();
            if sum != 0 {
                return Err(GaleError::ColumnSum { col, sum });
            }
        }
        let rank = rank(&entries);
        if rank != cols {
            return Err(GaleError::RankDeficient { rank, cols });
        }
        Ok(Self { entries })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }
}

impl FromStr for GaleMatrix {
    type Err = GaleError;

    /// One row per line, whitespace-separated integers; blank lines and
    /// `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_int_matrix(s)?)
    }
}

impl fmt::Display for GaleMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

pub fn parse_int_matrix(s: &str) -> Result<Vec<Vec<i64>>, GaleError> {
    let mut rows = Vec::new();
    for (i, line) in s.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| GaleError::Parse { line: i + 1, msg: format!("bad integer `{tok}`") })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(GaleError::Empty);
    }
    Ok(rows)
}

/// `l_i = Σ_j B[i][j]·t_j`.
pub fn gale_linear_forms(b: &GaleMatrix, ring: &Arc<RingSpec>) -> Result<Vec<MPoly>, GaleError> {
    if b.cols() != ring.t_count() {
        return Err(GaleError::WidthMismatch { expected: ring.t_count(), got: b.cols() });
    }
    Ok(b.entries
        .iter()
        .map(|row| {
            row.iter().enumerate().fold(MPoly::zero(ring), |acc, (j, &c)| {
                acc + MPoly::var(ring, j).scale(&Rat::from_integer(BigInt::from(c)))
            })
        })
        .collect())
}

/// `f_i = Π_j l_j^{max(B[j][i],0)}`, `g_i = Π_j l_j^{max(−B[j][i],0)}`.
pub fn gale_map(b: &GaleMatrix, ring: &Arc<RingSpec>, mode: Mode) -> Result<MapSpec, GaleError> {
    let forms = gale_linear_forms(b, ring)?;
    let pairs = (0..b.cols())
        .map(|i| {
            let mut f = MPoly::one(ring);
            let mut g = MPoly::one(ring);
            for (j, l) in forms.iter().enumerate() {
                let e = b.entries[j][i];
                if e > 0 {
                    f = &f * &l.pow(e as u32);
                } else if e < 0 {
                    g = &g * &l.pow(e.unsigned_abs() as u32);
                }
            }
            (f, g)
        })
        .collect();
    Ok(MapSpec::new(ring, pairs, mode)?)
}

/// `B·M` for a unimodular `M`.
pub fn column_transform(b: &GaleMatrix, m: &[Vec<i64>]) -> Result<GaleMatrix, GaleError> {
    let n = b.cols();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(GaleError::TransformShape { expected: n });
    }
    let det = int_det(m);
    if det.abs() != BigInt::from(1) {
        return Err(GaleError::NotUnimodular(det));
    }
    let product = b
        .entries
        .iter()
        .map(|row| (0..n).map(|j| (0..n).map(|k| row[k] * m[k][j]).sum()).collect())
        .collect();
    GaleMatrix::new(product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    const B: &str = "1 0 0\n-2 1 0\n1 -2 1\n0 1 -2\n0 0 1\n";
    const C: &str = "1 -7 -6\n-1 4 3\n1 0 4\n0 1 -1\n-1 2 0\n";

    fn ring() -> Arc<RingSpec> {
        RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap()
    }

    fn p(s: &str) -> MPoly {
        parse_poly(s, &ring()).unwrap()
    }

    #[test]
    fn quartic_forms_and_pairs() {
        let b: GaleMatrix = B.parse().unwrap();
        let forms = gale_linear_forms(&b, &ring()).unwrap();
        let want = ["u", "-2*u + v", "u - 2*v + w", "v - 2*w", "w"];
        for (f, w) in forms.iter().zip(want) {
            assert_eq!(f, &p(w));
        }
        let spec = gale_map(&b, &ring(), Mode::Strict).unwrap();
        let pairs = [
            ("u*(u - 2*v + w)", "(-2*u + v)^2"),
            ("(-2*u + v)*(v - 2*w)", "(u - 2*v + w)^2"),
            ("(u - 2*v + w)*w", "(v - 2*w)^2"),
        ];
        for (pair, (f, g)) in spec.pairs().iter().zip(pairs) {
            assert_eq!(pair.f, p(f));
            assert_eq!(pair.g, p(g));
            assert_eq!(pair.degree, 2);
        }
    }

    #[test]
    fn c_matrix_pairs() {
        let c: GaleMatrix = C.parse().unwrap();
        let spec = gale_map(&c, &ring(), Mode::Strict).unwrap();
        assert_eq!(spec.pairs()[1].f, p("(-u + 4*v + 3*w)^4*(v - w)*(-u + 2*v)^2"));
        assert_eq!(spec.pairs()[1].g, p("(u - 7*v - 6*w)^7"));
        assert_eq!(spec.degrees(), vec![2, 7, 7]);
    }

    #[test]
    fn invariant_violations() {
        assert!(matches!("1 0\n0 1\n".parse::<GaleMatrix>(), Err(GaleError::ColumnSum { col: 0, sum: 1 })));
        assert!(matches!("1 -1\n0 0\n-1 1\n".parse::<GaleMatrix>(), Err(GaleError::ZeroRow(1))));
        assert!(matches!("1 1\n-1 -1\n".parse::<GaleMatrix>(), Err(GaleError::RankDeficient { rank: 1, cols: 2 })));
        assert!(matches!("1 x\n".parse::<GaleMatrix>(), Err(GaleError::Parse { line: 1, .. })));
        assert!(matches!("1 2\n3\n".parse::<GaleMatrix>(), Err(GaleError::Ragged { row: 1, .. })));
    }

    #[test]
    fn transforms() {
        let c: GaleMatrix = C.parse().unwrap();
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(column_transform(&c, &id).unwrap(), c);
        let shear = vec![vec![1, 2, 0], vec![0, 1, 0], vec![0, -3, 1]];
        let t = column_transform(&c, &shear).unwrap();
        assert_eq!(t.entries()[0], vec![1, 13, -6]);
        let printed_m = vec![vec![1, 12, -1], vec![0, 6, -1], vec![0, 5, 1]];
        assert!(matches!(column_transform(&c, &printed_m), Err(GaleError::NotUnimodular(d)) if d == BigInt::from(11)));
    }

    #[test]
    fn display_round_trips() {
        let b: GaleMatrix = B.parse().unwrap();
        assert_eq!(b.to_string().parse::<GaleMatrix>().unwrap(), b);
    }
}
