//! The h-polynomials `{}^J_i h^{(j)}_l` and the transfer matrices between
//! consecutive shelves.
//!
//! Rows and columns are 1-based in every public signature, matching the
//! indices `i` and `l`; storage is 0-based.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::HMatrixError;
use crate::series::{DivMode, Mismatch, TruncatedSeries};
use crate::shelves::ShelfTable;

pub type Grid = Vec<Vec<TruncatedSeries>>;

/// A disagreement located in a matrix or vector (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMismatch {
    pub row: usize,
    pub col: usize,
    pub mismatch: Mismatch,
}

fn unit_vector(k: u32, pos: u32, order: i64) -> Vec<TruncatedSeries> {
    (1..=k)
        .map(|c| {
            if c == pos {
                TruncatedSeries::one(order)
            } else {
                TruncatedSeries::zero(order)
            }
        })
        .collect()
}

fn identity_grid(k: u32, order: i64) -> Grid {
    (1..=k).map(|i| unit_vector(k, i, order)).collect()
}

fn add_vec(a: &[TruncatedSeries], b: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[TruncatedSeries], b: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale_vec(s: &TruncatedSeries, v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    v.iter().map(|x| s * x).collect()
}

/// Product of two grids; the inner dimensions must agree.
pub fn grid_mul(a: &Grid, b: &Grid) -> Grid {
    let inner = b.len();
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "inner dimensions differ");
            (0..b[0].len())
                .map(|c| {
                    row.iter()
                        .zip(b)
                        .map(|(x, br)| x * &br[c])
                        .reduce(|acc, t| &acc + &t)
                        .expect("nonempty row")
                })
                .collect()
        })
        .collect()
}

/// Matrix times column vector.
pub fn grid_apply(a: &Grid, v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    let column: Grid = v.iter().map(|x| vec![x.clone()]).collect();
    grid_mul(a, &column)
        .into_iter()
        .map(|mut r| r.remove(0))
        .collect()
}

/// First differing cell, compared to the smaller order of each pair.
pub fn grid_mismatch(a: &Grid, b: &Grid) -> Option<CellMismatch> {
    for (r, (ra, rb)) in a.iter().zip(b).enumerate() {
        if let Some(cell) = vec_mismatch(ra, rb) {
            return Some(CellMismatch { row: r + 1, ..cell });
        }
    }
    None
}

/// First differing entry of two vectors, reported in `col`.
pub fn vec_mismatch(a: &[TruncatedSeries], b: &[TruncatedSeries]) -> Option<CellMismatch> {
    a.iter().zip(b).enumerate().find_map(|(c, (x, y))| {
        x.first_mismatch(y).map(|mismatch| CellMismatch {
            row: 1,
            col: c + 1,
            mismatch,
        })
    })
}

fn truncate_grid(g: &Grid, order: i64) -> Grid {
    g.iter()
        .map(|row| row.iter().map(|s| s.truncate(order)).collect())
        .collect()
}

/// The matrix `{}^J h^{(j)}`; entry `(i, l)` is `{}^J_i h^{(j)}_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct HMatrix {
    k: u32,
    start: u32,
    j: u32,
    order: i64,
    entries: Grid,
}

impl HMatrix {
    /// `{}^J h^{(J)}`, the identity.
    pub fn identity(k: u32, start: u32, order: i64) -> Self {
        assert!(k >= 2);
        Self {
            k,
            start,
            j: start,
            order,
            entries: identity_grid(k, order),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The starting shelf `J`.
    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn entries(&self) -> &Grid {
        &self.entries
    }

    /// `{}^J_i h^{(j)}_l`.
    pub fn entry(&self, i: u32, l: u32) -> &TruncatedSeries {
        &self.entries[i as usize - 1][l as usize - 1]
    }

    pub fn row(&self, i: u32) -> &[TruncatedSeries] {
        &self.entries[i as usize - 1]
    }

    /// Entries that must vanish identically, as `(i, l)` pairs.
    pub fn parity_zero_cells(&self) -> Vec<(u32, u32)> {
        let mut cells = Vec::new();
        for i in 1..=self.k {
            for l in 1..=self.k {
                if entry_vanishes(self.k, self.start, self.j, i, l) {
                    cells.push((i, l));
                }
            }
        }
        cells
    }

    /// First cell violating the parity-vanishing pattern.
    pub fn parity_violation(&self) -> Option<(u32, u32)> {
        self.parity_zero_cells()
            .into_iter()
            .find(|&(i, l)| !self.entry(i, l).is_zero())
    }

    /// First cell with a negative coefficient.
    pub fn negative_cell(&self) -> Option<(u32, u32)> {
        (1..=self.k)
            .flat_map(|i| (1..=self.k).map(move |l| (i, l)))
            .find(|&(i, l)| !self.entry(i, l).has_nonnegative_coeffs())
    }
}

impl fmt::Display for HMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.k {
            for l in 1..=self.k {
                writeln!(f, "h[{i},{l}] = {}", self.entry(i, l))?;
            }
        }
        Ok(())
    }
}

impl Serialize for HMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("HMatrix", 6)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("J", &self.start)?;
        s.serialize_field("j", &self.j)?;
        s.serialize_field("kind", "h")?;
        s.serialize_field("order", &self.order)?;
        s.serialize_field("entries", &self.entries)?;
        s.end()
    }
}

/// Whether `{}^J_i h^{(j)}_l` vanishes by parity.
pub fn entry_vanishes(k: u32, start: u32, j: u32, i: u32, l: u32) -> bool {
    if k % 2 == 1 {
        l % 2 != i % 2
    } else {
        (j - start + l) % 2 != i % 2
    }
}

/// `1` for `l = 1`, else `(1 + q^m) q^{(l-2)m}`.
fn step_factor(l: u32, m: i64, order: i64) -> TruncatedSeries {
    if l == 1 {
        TruncatedSeries::one(order)
    } else {
        TruncatedSeries::binomial(1, m, order)
            .shift((l as i64 - 2) * m)
            .truncate(order)
    }
}

/// One step of the h-recursion on a single row vector, from shelf `j` to `j + 1`.
pub fn h_step_row(k: u32, j: u32, row: &[TruncatedSeries], order: i64) -> Vec<TruncatedSeries> {
    let m = j as i64 + 1;
    (1..=k)
        .map(|l| {
            let top = k - l + 1;
            let mut sum = TruncatedSeries::zero(order);
            for t in (1..=top).filter(|t| t % 2 == top % 2) {
                sum = &sum + &row[t as usize - 1];
            }
            &step_factor(l, m, order) * &sum
        })
        .collect()
}

/// `{}^J h^{(j+1)}` from `{}^J h^{(j)}` via the scalar h-recursions.
pub fn h_step(h: &HMatrix) -> HMatrix {
    let entries = h
        .entries
        .iter()
        .map(|row| h_step_row(h.k, h.j, row, h.order))
        .collect();
    HMatrix {
        entries,
        j: h.j + 1,
        ..h.clone()
    }
}

/// `{}^J h^{(j)}` by repeated [`h_step`].
pub fn h_iterate(k: u32, start: u32, j: u32, order: i64) -> HMatrix {
    assert!(j >= start, "need j >= J");
    let mut h = HMatrix::identity(k, start, order);
    while h.j < j {
        h = h_step(&h);
    }
    h
}

/// `{}^J h^{(j)} = A_{(J+1)} ... A_{(j)}` as an explicit matrix product.
pub fn h_build(k: u32, start: u32, j: u32, order: i64) -> HMatrix {
    assert!(j >= start, "need j >= J");
    let mut entries = identity_grid(k, order);
    for m in start + 1..=j {
        let a = build_transfer(k, m, TransferKind::A, order);
        entries = truncate_grid(&grid_mul(&entries, &a.entries), order);
    }
    HMatrix {
        k,
        start,
        j,
        order,
        entries,
    }
}

/// `{}^J_i h^{(J+1)}` written out: `1` in column 1, and
/// `q^{(l-2)(J+1)} + q^{(l-1)(J+1)}` in columns `l <= k-i+1` of the same
/// parity as `k-i+1`.
pub fn initial_vector(k: u32, start: u32, i: u32, order: i64) -> Vec<TruncatedSeries> {
    let m = start as i64 + 1;
    let top = k - i + 1;
    (1..=k)
        .map(|l| {
            if l > top || l % 2 != top % 2 {
                TruncatedSeries::zero(order)
            } else if l == 1 {
                TruncatedSeries::one(order)
            } else {
                let lo = (l as i64 - 2) * m;
                let terms = [(lo, 1.into()), (lo + m, 1.into())];
                TruncatedSeries::from_terms(terms, order)
            }
        })
        .collect()
}

/// Degree bound for entries of `{}^J h^{(j)}`.
pub fn h_degree_bound(k: u32, start: u32, j: u32) -> i64 {
    (k as i64 - 1) * (start + 1..=j).map(|m| m as i64).sum::<i64>()
}

/// Which column of row `i` carries the limit at shelf `j`.
pub fn tracked_column(k: u32, start: u32, j: u32, i: u32) -> u32 {
    let target = if k % 2 == 1 { i } else { j - start + i };
    if target % 2 == 1 {
        1
    } else {
        2
    }
}

/// `{}^J_i h^{(∞)}` to order `N`, by iterating until the tracked column
/// settles.
pub fn h_limit(k: u32, start: u32, i: u32, order: i64) -> Result<TruncatedSeries, HMatrixError> {
    assert!((1..=k).contains(&i));
    let floor = start as i64 + order + 2;
    let cap = (start as i64 + 4 * order + 16) as u32;
    let mut row = unit_vector(k, i, order);
    let mut j = start;
    let mut prev = row[tracked_column(k, start, j, i) as usize - 1].clone();
    let mut agreements = 0;
    loop {
        if j >= cap {
            return Err(HMatrixError::NoStabilization { i, steps: j - start });
        }
        row = h_step_row(k, j, &row, order);
        j += 1;
        let col = tracked_column(k, start, j, i);
        let other = 3 - col;
        if !row[other as usize - 1].is_zero() {
            return Err(HMatrixError::OffParityNonzero { column: other, j });
        }
        let cur = row[col as usize - 1].clone();
        match cur.first_mismatch(&prev) {
            None => agreements += 1,
            Some(first) => {
                agreements = 0;
                for t in first.exponent..=order {
                    if cur.coeff(t) != prev.coeff(t) && j as i64 > start as i64 + t + 2 {
                        return Err(HMatrixError::UnstableCoefficient { exponent: t, j });
                    }
                }
            }
        }
        prev = cur;
        if agreements >= 2 && j as i64 >= floor {
            return Ok(prev);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TransferKind {
    A,
    B,
    Btilde,
}

impl fmt::Display for TransferKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A => "A",
            Self::B => "B",
            Self::Btilde => "Btilde",
        })
    }
}

/// One of the shelf transfer matrices at index `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    k: u32,
    j: u32,
    kind: TransferKind,
    order: i64,
    entries: Grid,
}

impl TransferMatrix {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn kind(&self) -> TransferKind {
        self.kind
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn entries(&self) -> &Grid {
        &self.entries
    }

    pub fn entry(&self, row: u32, col: u32) -> &TruncatedSeries {
        &self.entries[row as usize - 1][col as usize - 1]
    }

    pub fn mul(&self, other: &TransferMatrix) -> Grid {
        grid_mul(&self.entries, &other.entries)
    }

    pub fn apply(&self, v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
        grid_apply(&self.entries, v)
    }
}

impl Serialize for TransferMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TransferMatrix", 5)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("j", &self.j)?;
        s.serialize_field("kind", &self.kind)?;
        s.serialize_field("order", &self.order)?;
        s.serialize_field("entries", &self.entries)?;
        s.end()
    }
}

/// Rows of the ghost matrix at shelf `j`: row `i - 1` expresses `~B_{(k-1)j+i}`
/// (`i = 2..k`) in the officials of shelf `j`.
fn ghost_rows(k: u32, j: u32, order: i64) -> Grid {
    let m = j as i64 + 1;
    let denom = TruncatedSeries::binomial(1, m, order);
    let inv = TruncatedSeries::one(order)
        .div_unit(&denom)
        .expect("1 + q^m is a unit");
    (2..=k)
        .map(|i| {
            let mut v = unit_vector(k, i - 1, order);
            if i < k {
                let up = unit_vector(k, i + 1, order);
                v = add_vec(&v, &scale_vec(&TruncatedSeries::monomial(m, 1, order), &up));
            }
            scale_vec(&inv, &v)
        })
        .collect()
}

/// Rows of `A_{(j)}` from the scalar recursions that express shelf `j - 1`
/// through shelf `j`.
fn a_rows(k: u32, j: u32, order: i64) -> Grid {
    let m = j as i64;
    let mut rows: Grid = vec![Vec::new(); k as usize];
    let unit = TruncatedSeries::binomial(1, m, order);
    rows[k as usize - 1] = unit_vector(k, 1, order);
    if k >= 2 {
        rows[k as usize - 2] = scale_vec(&unit, &unit_vector(k, 2, order));
    }
    for i in (1..=k.saturating_sub(2)).rev() {
        let factor = unit.shift(m * (k - i - 1) as i64).truncate(order);
        let lead = scale_vec(&factor, &unit_vector(k, k - i + 1, order));
        rows[i as usize - 1] = add_vec(&lead, &rows[i as usize + 1]);
    }
    rows
}

/// Rows of `B_{(j)}` from the official recursions, composed with the ghost
/// rows of shelf `j - 1`. Entries are Laurent.
fn b_rows(k: u32, j: u32, order: i64) -> Grid {
    let m = j as i64;
    let work = order + m * (k as i64 - 1);
    let ghosts = ghost_rows(k, j - 1, work);
    (1..=k)
        .map(|i| match i {
            1 => unit_vector(k, k, order),
            2 => ghosts[k as usize - 2].iter().map(|s| s.truncate(order)).collect(),
            _ => {
                let official = unit_vector(k, k - i + 1, work);
                let ghost = &ghosts[(k - i + 2) as usize - 2];
                sub_vec(&official, ghost)
                    .iter()
                    .map(|s| {
                        s.div_qpow(m * (i as i64 - 1), DivMode::Laurent)
                            .expect("Laurent division never fails")
                            .truncate(order)
                    })
                    .collect()
            }
        })
        .collect()
}

/// The literal transfer matrix of the given kind.
pub fn build_transfer(k: u32, j: u32, kind: TransferKind, order: i64) -> TransferMatrix {
    assert!(k >= 2);
    let entries = match kind {
        TransferKind::A => {
            assert!(j >= 1, "A is defined for j >= 1");
            a_rows(k, j, order)
        }
        TransferKind::B => {
            assert!(j >= 1, "B is defined for j >= 1");
            b_rows(k, j, order)
        }
        TransferKind::Btilde => ghost_rows(k, j, order),
    };
    TransferMatrix {
        k,
        j,
        kind,
        order,
        entries,
    }
}

/// `A_{(j)} B_{(j)}` compared with the identity to order `N`.
pub fn ab_product(k: u32, j: u32, order: i64) -> Grid {
    let a = build_transfer(k, j, TransferKind::A, order + (k as i64 - 1) * j as i64);
    let b = build_transfer(k, j, TransferKind::B, order);
    truncate_grid(&a.mul(&b), order)
}

pub fn identity(k: u32, order: i64) -> Grid {
    identity_grid(k, order)
}

/// Official vector `B_{(j)}` read from a table.
pub fn official_vector(table: &ShelfTable, j: u32) -> Option<Vec<TruncatedSeries>> {
    table.official_shelf(j)
}

/// Ghost vector `~B_{(j)}` read from a table.
pub fn ghost_vector(table: &ShelfTable, j: u32) -> Option<Vec<TruncatedSeries>> {
    table.ghost_shelf(j)
}

/// `sum_l h(i, l) B_{(k-1)j+l}` for every `i`.
pub fn reconstruct(h: &HMatrix, shelf: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    grid_apply(&h.entries, shelf)
}
