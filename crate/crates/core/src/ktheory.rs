//! Integer Smith normal form, kernels and cokernels, and the Katsura
//! construction with its K-groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::automaton::{Automaton, AutomatonError, GeneratorSpec};
use crate::graph::{Graph, GraphError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KTheoryError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("a[{i}][{j}] = 0 but b[{i}][{j}] != 0")]
    ZeroBlockDivision { i: usize, j: usize },
    #[error("a[{i}][{j}] is negative")]
    NegativeEntry { i: usize, j: usize },
    #[error("bad matrix: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<IntMatrix, KTheoryError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(KTheoryError::ShapeMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Accepts `[[2,1],[2,2]]` or `2 1; 2 2`.
impl FromStr for IntMatrix {
    type Err = KTheoryError;

    fn from_str(s: &str) -> Result<IntMatrix, KTheoryError> {
        let s = s.trim();
        let rows: Vec<&str> = if s.starts_with('[') {
            let inner = s
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| KTheoryError::Parse("unbalanced brackets".into()))?
                .trim();
            if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(']')
                    .map(|r| r.trim().trim_start_matches(',').trim().trim_start_matches('['))
                    .filter(|r| !r.trim().is_empty())
                    .collect()
            }
        } else {
            s.split(';').filter(|r| !r.trim().is_empty()).collect()
        };
        let parsed = rows
            .iter()
            .map(|r| {
                r.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<BigInt>().map_err(|_| KTheoryError::Parse(format!("`{t}` is not an integer"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(&parsed)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// `U · M · V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Recomputes every postcondition.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let diag = self.d.diagonal();
        let nonneg = diag.iter().all(|x| !x.is_negative());
        let chain = diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        self.u.mul(m).mul(&self.v) == self.d
            && self.d.is_diagonal()
            && nonneg
            && chain
            && self.u.determinant().abs().is_one()
            && self.v.determinant().abs().is_one()
    }
}

/// Smith normal form; pivots are the smallest nonzero absolute value,
/// first in row-major order.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d[(i, j)];
                    if !x.is_zero() && pivot.is_none_or(|(pi, pj)| x.abs() < d[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                let q = -d[(i, t)].div_floor(&p);
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = -d[(t, j)].div_floor(&p);
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&d[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix) -> Snf {
    Snf { u, d, v }
}

/// `ℤ^rank ⊕ ⊕ ℤ/t_i` with `1 < t_1 | t_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> AbelianGroup {
        AbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> AbelianGroup {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, with the torsion part brought back to invariant factors.
    pub fn sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let factors: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let n = factors.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, f) in factors.into_iter().enumerate() {
            m[(i, i)] = f;
        }
        let coker = cokernel(&m);
        AbelianGroup {
            rank: self.rank + other.rank + coker.rank,
            torsion: coker.torsion,
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|t| match t.to_i64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::from(t.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("AbelianGroup", 2)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// `ℤ^rows / im M`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    let diag = snf.d.diagonal();
    let zeros = diag.iter().filter(|x| x.is_zero()).count();
    AbelianGroup {
        rank: m.rows - diag.len() + zeros,
        torsion: diag.into_iter().filter(|x| *x > BigInt::one()).collect(),
    }
}

/// `ker M ⊆ ℤ^cols`, which is free.
pub fn kernel(m: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    let nonzero = snf.d.diagonal().iter().filter(|x| !x.is_zero()).count();
    AbelianGroup::free(m.cols - nonzero)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KGroups {
    #[serde(rename = "K0")]
    pub k0: AbelianGroup,
    #[serde(rename = "K1")]
    pub k1: AbelianGroup,
}

fn check_pair(a: &IntMatrix, b: &IntMatrix) -> Result<(), KTheoryError> {
    if !a.is_square() || (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(KTheoryError::ShapeMismatch(format!(
            "A is {}x{}, B is {}x{}; both must be the same square shape",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// `K_0 = coker(I - A) ⊕ ker(I - B)`, `K_1 = coker(I - B) ⊕ ker(I - A)`.
pub fn katsura_ktheory(a: &IntMatrix, b: &IntMatrix) -> Result<KGroups, KTheoryError> {
    check_pair(a, b)?;
    let id = IntMatrix::identity(a.rows);
    let ia = id.sub(a);
    let ib = id.sub(b);
    Ok(KGroups {
        k0: cokernel(&ia).sum(&kernel(&ib)),
        k1: cokernel(&ib).sum(&kernel(&ia)),
    })
}

/// Names for an `n`-vertex Katsura system: `(vertices, generators)`.
pub fn katsura_names(n: usize) -> (Vec<String>, Vec<String>) {
    match n {
        1 => (vec!["v".into()], vec!["a".into()]),
        2 => (vec!["v".into(), "w".into()], vec!["a".into(), "b".into()]),
        _ => (
            (1..=n).map(|i| format!("v{i}")).collect(),
            (1..=n).map(|i| format!("a{i}")).collect(),
        ),
    }
}

/// The graph and generators of the Katsura action of `(A, B)`.
///
/// Edges `e_{i,j,m}` (`0 <= m < a_ij`) run from `j` to `i` and are named
/// `0, 1, …` in `(i, j, m)` order. `a_i · e_{i,j,m} = e_{i,j,n}` with
/// restriction `a_j^l`, where `b_ij + m = l·a_ij + n`, `0 <= n < a_ij`.
pub fn katsura_system(a: &IntMatrix, b: &IntMatrix) -> Result<(Graph, Vec<GeneratorSpec>), KTheoryError> {
    check_pair(a, b)?;
    let n = a.rows;
    let (vs, gs) = katsura_names(n);
    let mut index = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if a[(i, j)].is_negative() {
                return Err(KTheoryError::NegativeEntry { i: i + 1, j: j + 1 });
            }
            if a[(i, j)].is_zero() && !b[(i, j)].is_zero() {
                return Err(KTheoryError::ZeroBlockDivision { i: i + 1, j: j + 1 });
            }
            let count = a[(i, j)]
                .to_usize()
                .ok_or_else(|| KTheoryError::ShapeMismatch(format!("a[{}][{}] is too large", i + 1, j + 1)))?;
            for m in 0..count {
                index.push((i, j, m));
            }
        }
    }
    let name = |i: usize, j: usize, m: usize| {
        index
            .iter()
            .position(|&t| t == (i, j, m))
            .expect("edge exists")
            .to_string()
    };
    let edges: Vec<(String, String, String)> = index
        .iter()
        .map(|&(i, j, m)| (name(i, j, m), vs[j].clone(), vs[i].clone()))
        .collect();
    let graph = Graph::new(vs.clone(), edges)?;
    let mut gens = Vec::new();
    for i in 0..n {
        let mut spec = GeneratorSpec::new(&gs[i], &vs[i], &vs[i]);
        for &(ii, j, m) in index.iter().filter(|t| t.0 == i) {
            let aij = &a[(ii, j)];
            let (l, nn) = (&b[(ii, j)] + BigInt::from(m)).div_mod_floor(aij);
            let nn = nn.to_usize().expect("remainder below a_ij");
            let reps = l.abs().to_usize().ok_or_else(|| KTheoryError::ShapeMismatch("restriction too long".into()))?;
            let symbol = if l.is_negative() {
                format!("{}^-1", gs[j])
            } else {
                gs[j].clone()
            };
            let word = if reps == 0 {
                vs[j].clone()
            } else {
                vec![symbol; reps].join(" ")
            };
            spec = spec.rule(&name(ii, j, m), &name(ii, j, nn), &word);
        }
        gens.push(spec);
    }
    Ok((graph, gens))
}

pub fn katsura_automaton(a: &IntMatrix, b: &IntMatrix) -> Result<Automaton, KTheoryError> {
    let (graph, gens) = katsura_system(a, b)?;
    Ok(Automaton::new(graph, gens)?)
}
