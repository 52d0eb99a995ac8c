//! Exact sparse linear algebra over Q(zeta).

use rustc_hash::FxHashMap;

use crate::cyclo::CycNum;

/// Sparse row `Σ coeffs[i].1 * x_{coeffs[i].0} = rhs`, entries sorted by variable.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Equation {
    pub coeffs: Vec<(usize, CycNum)>,
    pub rhs: CycNum,
}

impl Equation {
    pub fn new<I: IntoIterator<Item = (usize, CycNum)>>(coeffs: I, rhs: CycNum) -> Self {
        let mut m: FxHashMap<usize, CycNum> = FxHashMap::default();
        for (v, c) in coeffs {
            *m.entry(v).or_default() += &c;
        }
        let mut coeffs: Vec<_> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        coeffs.sort_unstable_by_key(|t| t.0);
        Equation { coeffs, rhs }
    }

    pub fn coeff(&self, var: usize) -> Option<&CycNum> {
        self.coeffs
            .binary_search_by_key(&var, |t| t.0)
            .ok()
            .map(|i| &self.coeffs[i].1)
    }

    /// `self - c * other`.
    fn sub_scaled(&self, c: &CycNum, other: &Equation) -> Equation {
        let mut out = Vec::with_capacity(self.coeffs.len() + other.coeffs.len());
        let (a, b) = (&self.coeffs, &other.coeffs);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                out.push((b[j].0, -(c * &b[j].1)));
                j += 1;
            } else {
                let v = &a[i].1 - &(c * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        Equation { coeffs: out, rhs: &self.rhs - &(c * &other.rhs) }
    }

    fn scale(&mut self, c: &CycNum) {
        for (_, x) in &mut self.coeffs {
            *x = &*x * c;
        }
        self.rhs = &self.rhs * c;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AddOutcome {
    /// The equation introduced a new pivot variable.
    Pivot(usize),
    /// The equation follows from the previous ones.
    Redundant,
    /// The equation reduces to `0 = residual` with a nonzero residual.
    Inconsistent(CycNum),
}

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct EchelonSystem {
    rows: Vec<Equation>,
    pivot_row: FxHashMap<usize, usize>,
}

/// Solution set `x = particular + Σ_f t_f * direction_f`, one parameter per free variable.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFamily {
    pub nvars: usize,
    pub particular: Vec<CycNum>,
    pub free_vars: Vec<usize>,
    pub directions: Vec<Vec<(usize, CycNum)>>,
}

impl EchelonSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Equation] {
        &self.rows
    }

    pub fn is_pivot(&self, var: usize) -> bool {
        self.pivot_row.contains_key(&var)
    }

    /// Reduces an equation against the current pivots without inserting it.
    pub fn reduce(&self, eq: &Equation) -> Equation {
        let present: Vec<(usize, CycNum)> = eq
            .coeffs
            .iter()
            .filter(|(v, _)| self.pivot_row.contains_key(v))
            .cloned()
            .collect();
        let mut row = eq.clone();
        for (v, _) in present {
            if let Some(c) = row.coeff(v).cloned() {
                row = row.sub_scaled(&c, &self.rows[self.pivot_row[&v]]);
            }
        }
        row
    }

    pub fn add(&mut self, eq: Equation) -> AddOutcome {
        let mut row = self.reduce(&eq);
        if row.coeffs.is_empty() {
            return if row.rhs.is_zero() {
                AddOutcome::Redundant
            } else {
                AddOutcome::Inconsistent(row.rhs)
            };
        }
        let (pivot, lead) = row.coeffs[0].clone();
        row.scale(&lead.inv().expect("nonzero leading coefficient"));
        for r in &mut self.rows {
            if let Some(c) = r.coeff(pivot).cloned() {
                *r = r.sub_scaled(&c, &row);
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(row);
        AddOutcome::Pivot(pivot)
    }

    /// Parametrized solution over variables `0..nvars` (assumes consistency).
    pub fn solution(&self, nvars: usize) -> AffineFamily {
        let mut particular = vec![CycNum::zero(); nvars];
        for r in &self.rows {
            particular[r.coeffs[0].0] = r.rhs.clone();
        }
        let free_vars: Vec<usize> = (0..nvars).filter(|v| !self.pivot_row.contains_key(v)).collect();
        let mut dirs: FxHashMap<usize, Vec<(usize, CycNum)>> =
            free_vars.iter().map(|&f| (f, vec![(f, CycNum::one())])).collect();
        for r in &self.rows {
            let p = r.coeffs[0].0;
            for (v, c) in &r.coeffs[1..] {
                if let Some(d) = dirs.get_mut(v) {
                    d.push((p, -c));
                }
            }
        }
        let directions = free_vars
            .iter()
            .map(|f| {
                let mut d = dirs.remove(f).unwrap_or_default();
                d.sort_unstable_by_key(|t| t.0);
                d
            })
            .collect();
        AffineFamily { nvars, particular, free_vars, directions }
    }
}

impl AffineFamily {
    pub fn dimension(&self) -> usize {
        self.free_vars.len()
    }

    /// Point of the family for the given parameter values.
    pub fn evaluate(&self, params: &[CycNum]) -> Vec<CycNum> {
        let mut x = self.particular.clone();
        for (t, d) in params.iter().zip(&self.directions) {
            for (v, c) in d {
                x[*v] += &(t * c);
            }
        }
        x
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(vectors: &[Vec<(usize, CycNum)>]) -> usize {
    let mut sys = EchelonSystem::new();
    for v in vectors {
        sys.add(Equation::new(v.iter().cloned(), CycNum::zero()));
    }
    sys.rank()
}

/// Finds the first linear dependency in a sequence of sparse vectors.
///
/// Vectors are fed one at a time; `push` returns the coefficients
/// `a_0..a_k` of a relation `Σ a_j v_j = 0` as soon as one exists.
#[derive(Default)]
pub struct DependencyFinder {
    sys: EchelonSystem,
    count: usize,
}

const TAG_OFFSET: usize = 1 << 48;

impl DependencyFinder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: &[(usize, CycNum)]) -> Option<Vec<CycNum>> {
        assert!(v.iter().all(|(i, _)| *i < TAG_OFFSET));
        let k = self.count;
        self.count += 1;
        let mut coeffs = v.to_vec();
        coeffs.push((TAG_OFFSET + k, CycNum::one()));
        match self.sys.add(Equation { coeffs, rhs: CycNum::zero() }) {
            AddOutcome::Pivot(p) if p >= TAG_OFFSET => {
                let row = self.sys.rows.last().expect("just pushed");
                let mut rel = vec![CycNum::zero(); self.count];
                for (var, c) in &row.coeffs {
                    rel[var - TAG_OFFSET] = c.clone();
                }
                Some(rel)
            }
            AddOutcome::Pivot(_) => None,
            other => unreachable!("tagged vectors are independent: {other:?}"),
        }
    }
}

/// Sparse matrix stored by columns: `columns[j]` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub columns: Vec<Vec<(usize, CycNum)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, columns: (0..n).map(|i| vec![(i, CycNum::one())]).collect() }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Builds from `(row, col, value)` triples.
    pub fn from_entries<I: IntoIterator<Item = (usize, usize, CycNum)>>(
        rows: usize,
        cols: usize,
        entries: I,
    ) -> Self {
        let mut m = vec![FxHashMap::<usize, CycNum>::default(); cols];
        for (r, c, v) in entries {
            *m[c].entry(r).or_default() += &v;
        }
        let columns = m
            .into_iter()
            .map(|col| {
                let mut v: Vec<_> = col.into_iter().filter(|(_, x)| !x.is_zero()).collect();
                v.sort_unstable_by_key(|t| t.0);
                v
            })
            .collect();
        SparseMatrix { rows, columns }
    }

    pub fn get(&self, r: usize, c: usize) -> CycNum {
        self.columns[c]
            .binary_search_by_key(&r, |t| t.0)
            .map(|i| self.columns[c][i].1.clone())
            .unwrap_or_default()
    }

    pub fn apply(&self, v: &[(usize, CycNum)]) -> Vec<(usize, CycNum)> {
        let mut acc: FxHashMap<usize, CycNum> = FxHashMap::default();
        for (j, x) in v {
            for (i, m) in &self.columns[*j] {
                *acc.entry(*i).or_default() += &(m * x);
            }
        }
        let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_unstable_by_key(|t| t.0);
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn scale(&self, c: &CycNum) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(i, x)| (*i, x * c))
                        .filter(|(_, x)| !x.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        let entries = self
            .columns
            .iter()
            .chain(other.columns.iter())
            .enumerate()
            .flat_map(|(j, col)| {
                let j = j % self.cols();
                col.iter().map(move |(i, x)| (*i, j, x.clone()))
            });
        SparseMatrix::from_entries(self.rows, self.cols(), entries)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<SparseMatrix> {
        let n = self.rows;
        if self.cols() != n {
            return None;
        }
        // Solve A X = I column by column with one shared elimination: unknowns are
        // x_{ij} = X[i][j] laid out as i*n + j.
        let mut rows_of_a: Vec<Vec<(usize, CycNum)>> = vec![Vec::new(); n];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                rows_of_a[*i].push((j, v.clone()));
            }
        }
        let mut sys = EchelonSystem::new();
        for (r, row) in rows_of_a.iter().enumerate() {
            for c in 0..n {
                let eq = Equation::new(
                    row.iter().map(|(k, v)| (k * n + c, v.clone())),
                    if r == c { CycNum::one() } else { CycNum::zero() },
                );
                if let AddOutcome::Inconsistent(_) = sys.add(eq) {
                    return None;
                }
            }
        }
        if sys.rank() != n * n {
            return None;
        }
        let x = sys.solution(n * n).particular;
        Some(SparseMatrix::from_entries(
            n,
            n,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, x[i * n + j].clone())),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: i64) -> CycNum {
        CycNum::from_int(x)
    }

    #[test]
    fn solves_small_system_with_free_variable() {
        let mut s = EchelonSystem::new();
        // x0 + x1 = 3, x1 - x2 = 1
        assert_eq!(s.add(Equation::new([(0, n(1)), (1, n(1))], n(3))), AddOutcome::Pivot(0));
        assert_eq!(s.add(Equation::new([(1, n(1)), (2, n(-1))], n(1))), AddOutcome::Pivot(1));
        assert_eq!(s.add(Equation::new([(0, n(1)), (2, n(1))], n(2))), AddOutcome::Redundant);
        assert!(matches!(
            s.add(Equation::new([(0, n(1)), (2, n(1))], n(5))),
            AddOutcome::Inconsistent(_)
        ));
        let fam = s.solution(3);
        assert_eq!(fam.free_vars, vec![2]);
        let x = fam.evaluate(&[n(7)]);
        assert_eq!(x, vec![n(-5), n(8), n(7)]);
    }

    #[test]
    fn dependency_finder_reports_relation() {
        let mut d = DependencyFinder::new();
        assert!(d.push(&[(0, n(1))]).is_none());
        assert!(d.push(&[(1, n(2))]).is_none());
        let rel = d.push(&[(0, n(3)), (1, n(4))]).unwrap();
        // 3 v0 + 2 v1 - v2 = 0 up to scale
        let s = &rel[2];
        assert_eq!(&rel[0] * &n(-1), s * &n(3));
        assert_eq!(&rel[1] * &n(-1), s * &n(2));
    }

    #[test]
    fn matrix_inverse() {
        let z = CycNum::zeta();
        let m = SparseMatrix::from_entries(2, 2, [(0, 0, n(1)), (0, 1, z.clone()), (1, 1, n(2))]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SparseMatrix::identity(2));
        let singular = SparseMatrix::from_entries(2, 2, [(0, 0, n(1)), (0, 1, n(1))]);
        assert!(singular.inverse().is_none());
    }
}
