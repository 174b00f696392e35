//! Official and ghost series on every shelf.
//!
//! Shelf `j` holds the official series `B_r` for `r = (k-1)j + i`,
//! `1 <= i <= k`, and the ghost series `~B_r` for `2 <= i <= k`. The last
//! official series of shelf `j` is the first one of shelf `j + 1`, so the
//! table is keyed by `r` alone.
//!
//! Two independent routes produce the same table: [`build_by_recursion`]
//! starts from the product sides and climbs shelf by shelf with exact
//! q-power divisions, while [`closed_form_official`] and
//! [`closed_form_ghost`] evaluate alternating sums directly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{RecursionDetail, ShelfError};
use crate::series::{
    euler_infty, product_one_minus, product_one_plus, product_side, DivMode, Mismatch, TruncatedSeries,
};

/// Position `(j, i)` on the shelves for modulus parameter `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShelfIndex {
    pub k: u32,
    pub j: u32,
    pub i: u32,
}

impl ShelfIndex {
    pub fn new(k: u32, j: u32, i: u32) -> Self {
        assert!(k >= 2, "k must be at least 2, got {k}");
        assert!((1..=k).contains(&i), "i must lie in 1..={k}, got {i}");
        Self { k, j, i }
    }

    /// `r = (k-1)j + i`.
    pub fn r(&self) -> u32 {
        (self.k - 1) * self.j + self.i
    }

    /// Canonical decomposition of an official index, with `1 <= i <= k-1`.
    pub fn official(k: u32, r: u32) -> Self {
        assert!(r >= 1, "series indices start at 1");
        Self::new(k, (r - 1) / (k - 1), (r - 1) % (k - 1) + 1)
    }

    /// Decomposition of a ghost index with `2 <= i <= k`. `r = 1` has no
    /// such decomposition (see [`ghost_extension_b1`]).
    pub fn ghost(k: u32, r: u32) -> Option<Self> {
        (r >= 2).then(|| Self::new(k, (r - 2) / (k - 1), (r - 2) % (k - 1) + 2))
    }

    /// The other name of an edge series: `(j, k)` and `(j + 1, 1)` share `r`.
    pub fn edge_partner(&self) -> Option<Self> {
        if self.i == self.k {
            Some(Self::new(self.k, self.j + 1, 1))
        } else if self.i == 1 && self.j >= 1 {
            Some(Self::new(self.k, self.j - 1, self.k))
        } else {
            None
        }
    }

    /// Exponent threshold of the Empirical Hypothesis: `j+1`, or `j+2` at the edge.
    pub fn eh_threshold(&self) -> i64 {
        if self.i == self.k {
            self.j as i64 + 2
        } else {
            self.j as i64 + 1
        }
    }
}

impl fmt::Display for ShelfIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} j={} i={} (r={})", self.k, self.j, self.i, self.r())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Official,
    Ghost,
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Official => "official",
            SeriesKind::Ghost => "ghost",
        })
    }
}

/// Which route produced a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ProductSide,
    Recursion,
    ClosedForm,
}

#[derive(Clone, Debug)]
pub struct ShelfEntry {
    pub series: TruncatedSeries,
    pub provenance: Provenance,
}

/// All official and ghost series of shelves `0..=j_max` for one `k`.
#[derive(Clone, Debug)]
pub struct ShelfTable {
    k: u32,
    j_max: u32,
    order: i64,
    officials: BTreeMap<u32, ShelfEntry>,
    ghosts: BTreeMap<u32, ShelfEntry>,
}

impl ShelfTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn official(&self, r: u32) -> Option<&TruncatedSeries> {
        self.officials.get(&r).map(|e| &e.series)
    }

    pub fn ghost(&self, r: u32) -> Option<&TruncatedSeries> {
        self.ghosts.get(&r).map(|e| &e.series)
    }

    pub fn get(&self, kind: SeriesKind, r: u32) -> Option<&TruncatedSeries> {
        match kind {
            SeriesKind::Official => self.official(r),
            SeriesKind::Ghost => self.ghost(r),
        }
    }

    pub fn provenance(&self, kind: SeriesKind, r: u32) -> Option<Provenance> {
        let map = match kind {
            SeriesKind::Official => &self.officials,
            SeriesKind::Ghost => &self.ghosts,
        };
        map.get(&r).map(|e| e.provenance)
    }

    pub fn officials(&self) -> impl Iterator<Item = (u32, &TruncatedSeries)> {
        self.officials.iter().map(|(r, e)| (*r, &e.series))
    }

    pub fn ghosts(&self) -> impl Iterator<Item = (u32, &TruncatedSeries)> {
        self.ghosts.iter().map(|(r, e)| (*r, &e.series))
    }

    /// `[B_{(k-1)j+1}, ..., B_{(k-1)j+k}]`.
    pub fn official_shelf(&self, j: u32) -> Option<Vec<TruncatedSeries>> {
        (1..=self.k)
            .map(|i| self.official(ShelfIndex::new(self.k, j, i).r()).cloned())
            .collect()
    }

    /// `[~B_{(k-1)j+2}, ..., ~B_{(k-1)j+k}]`.
    pub fn ghost_shelf(&self, j: u32) -> Option<Vec<TruncatedSeries>> {
        (2..=self.k)
            .map(|i| self.ghost(ShelfIndex::new(self.k, j, i).r()).cloned())
            .collect()
    }

    /// The same table truncated to a lower order.
    pub fn truncated(&self, order: i64) -> Self {
        let cut = |m: &BTreeMap<u32, ShelfEntry>| {
            m.iter()
                .map(|(r, e)| {
                    let entry = ShelfEntry {
                        series: e.series.truncate(order),
                        provenance: e.provenance,
                    };
                    (*r, entry)
                })
                .collect()
        };
        Self {
            k: self.k,
            j_max: self.j_max,
            order: order.min(self.order),
            officials: cut(&self.officials),
            ghosts: cut(&self.ghosts),
        }
    }

    /// Every series evaluated from the closed forms.
    pub fn from_closed_forms(k: u32, j_max: u32, order: i64) -> Self {
        let mut officials = BTreeMap::new();
        let mut ghosts = BTreeMap::new();
        for j in 0..=j_max {
            for i in 1..=k {
                let idx = ShelfIndex::new(k, j, i);
                officials.entry(idx.r()).or_insert_with(|| ShelfEntry {
                    series: closed_form_official(k, j, i, order),
                    provenance: Provenance::ClosedForm,
                });
                if i >= 2 {
                    ghosts.insert(
                        idx.r(),
                        ShelfEntry {
                            series: closed_form_ghost(k, j, i, order),
                            provenance: Provenance::ClosedForm,
                        },
                    );
                }
            }
        }
        Self {
            k,
            j_max,
            order,
            officials,
            ghosts,
        }
    }
}

impl Serialize for ShelfTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let officials: BTreeMap<u32, &TruncatedSeries> = self.officials().collect();
        let ghosts: BTreeMap<u32, &TruncatedSeries> = self.ghosts().collect();
        let mut st = serializer.serialize_struct("ShelfTable", 4)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("officials", &officials)?;
        st.serialize_field("ghosts", &ghosts)?;
        st.end()
    }
}

/// Order at which shelves `0..=j_max` are reported: never too low for the
/// Empirical Hypothesis checks on the top shelf.
pub fn effective_order(order: i64, j_max: u32) -> i64 {
    order.max(2 * (j_max as i64 + 2))
}

fn mismatch_detail(left: &TruncatedSeries, right: &TruncatedSeries) -> Option<RecursionDetail> {
    left.first_mismatch(right).map(|m| RecursionDetail::Mismatch {
        exponent: m.exponent,
        left: m.left,
        right: m.right,
    })
}

/// Climb the shelves from the product sides.
///
/// On shelf `j` the ghosts are defined first,
/// `~B_{(k-1)j+i} = (B_{(k-1)j+i-1} + q^{j+1} B_{(k-1)j+i+1}) / (1 + q^{j+1})`
/// and `~B_{(k-1)j+k} = B_{(k-1)j+k-1} / (1 + q^{j+1})`; then shelf `j + 1`
/// follows from
/// `B_{(k-1)(j+1)+i} = (B_{(k-1)j+k-i+1} - ~B_{(k-1)j+k-i+2}) / q^{(j+1)(i-1)}`
/// with strict divisions. The companion equalities (the ghost at the edge,
/// and the second quotient for `i >= 3`) are checked on the way.
///
/// Shelf 0 is computed at a raised working order so that every entry still
/// has the requested order after the q-power divisions.
pub fn build_by_recursion(k: u32, j_max: u32, order: i64) -> Result<ShelfTable, ShelfError> {
    assert!(k >= 2, "k must be at least 2, got {k}");
    assert!(order >= 0, "order must be nonnegative");
    let order = effective_order(order, j_max);
    let (kk, jm) = (k as i64, j_max as i64);
    let working = order + (kk - 1) * jm * (jm + 1) / 2;

    let mut officials: BTreeMap<u32, ShelfEntry> = BTreeMap::new();
    let mut ghosts: BTreeMap<u32, ShelfEntry> = BTreeMap::new();
    for i in 1..=k {
        officials.insert(
            i,
            ShelfEntry {
                series: product_side(k, i, working),
                provenance: Provenance::ProductSide,
            },
        );
    }

    let b = |m: &BTreeMap<u32, ShelfEntry>, j: u32, i: u32| -> TruncatedSeries {
        m[&ShelfIndex::new(k, j, i).r()].series.clone()
    };

    for j in 0..=j_max {
        let step = j as i64 + 1;
        let unit = TruncatedSeries::binomial(1, step, working);
        for i in 2..=k {
            let numer = if i < k {
                let upper = b(&officials, j, i + 1).shift(step);
                &b(&officials, j, i - 1) + &upper
            } else {
                b(&officials, j, k - 1)
            };
            let series = numer.div_unit(&unit).expect("1 + q^(j+1) is a unit");
            ghosts.insert(
                ShelfIndex::new(k, j, i).r(),
                ShelfEntry {
                    series,
                    provenance: Provenance::Recursion,
                },
            );
        }
        if j == j_max {
            break;
        }

        for i in 2..=k {
            let target = ShelfIndex::new(k, j + 1, i);
            let fail = |detail: RecursionDetail| ShelfError::RecursionFailed {
                index: target,
                detail,
            };
            let ghost = b(&ghosts, j, k - i + 2);
            let left = (&b(&officials, j, k - i + 1) - &ghost)
                .div_qpow(step * (i as i64 - 1), DivMode::Strict)
                .map_err(|e| fail(e.into()))?;
            let right = if i == 2 {
                ghost
            } else {
                (&ghost - &b(&officials, j, k - i + 3))
                    .div_qpow(step * (i as i64 - 2), DivMode::Strict)
                    .map_err(|e| fail(e.into()))?
            };
            if let Some(detail) = mismatch_detail(&left, &right) {
                return Err(fail(detail));
            }
            officials.insert(
                target.r(),
                ShelfEntry {
                    series: left,
                    provenance: Provenance::Recursion,
                },
            );
        }
    }

    let table = ShelfTable {
        k,
        j_max,
        order: working,
        officials,
        ghosts,
    };
    debug_assert!(table
        .officials()
        .chain(table.ghosts())
        .all(|(_, s)| s.order() >= order));
    Ok(table.truncated(order))
}

/// Numerator terms shared by both closed forms:
/// `sum_n (-1)^n q^{base(n)} * prod_{s=1}^{j} (1 - q^{2(n+s)}) * extra(n)`.
fn alternating_sum<B, X>(j: u32, order: i64, k: i64, base: B, extra: X) -> TruncatedSeries
where
    B: Fn(i64) -> i64,
    X: Fn(i64, i64) -> TruncatedSeries,
{
    let mut total = TruncatedSeries::zero(order);
    // base(n) >= k n^2, so once it passes the order every later term does too
    for n in (0..).take_while(|&n| k * n * n <= order) {
        let e0 = base(n);
        if e0 > order {
            break;
        }
        let rest = order - e0;
        let evens = product_one_minus((1..=j as i64).map(|s| 2 * (n + s)), rest);
        let mut term = evens.mul(&extra(n, rest)).shift(e0);
        if n % 2 == 1 {
            term = -&term;
        }
        total = &total + &term;
    }
    total.truncate(order)
}

/// Closed form of `B_{(k-1)j+i}`:
/// `sum_n (-1)^n q^{kn^2+((k-1)j+i-1)n} (1-q^{(2n+j+1)(k-i+1)})
///  (1-q^{2(n+1)})...(1-q^{2(n+j)}) / ((q)_inf (1+q)...(1+q^j))`.
pub fn closed_form_official(k: u32, j: u32, i: u32, order: i64) -> TruncatedSeries {
    let _ = ShelfIndex::new(k, j, i);
    let (kk, jj, ii) = (k as i64, j as i64, i as i64);
    let numer = alternating_sum(
        j,
        order,
        kk,
        |n| kk * n * n + ((kk - 1) * jj + ii - 1) * n,
        |n, rest| TruncatedSeries::binomial(-1, (2 * n + jj + 1) * (kk - ii + 1), rest),
    );
    let denom = euler_infty(order).mul(&product_one_plus(1..=jj, order));
    numer.div_unit(&denom).expect("denominator is a unit")
}

/// Closed form of `~B_{(k-1)j+i}`, `2 <= i <= k`:
/// `sum_n (-1)^n q^{kn^2+((k-1)j+i-2)n} (1-q^{2(n+1)})...(1-q^{2(n+j)})
///  (1+q^{2n+j+1}) (1-q^{(2n+j+1)(k-i+1)}) / ((q)_inf (1+q)...(1+q^{j+1}))`.
pub fn closed_form_ghost(k: u32, j: u32, i: u32, order: i64) -> TruncatedSeries {
    assert!(i >= 2, "ghost series exist for 2 <= i <= k, got i = {i}");
    let _ = ShelfIndex::new(k, j, i);
    let (kk, jj, ii) = (k as i64, j as i64, i as i64);
    let numer = alternating_sum(
        j,
        order,
        kk,
        |n| kk * n * n + ((kk - 1) * jj + ii - 2) * n,
        |n, rest| {
            TruncatedSeries::binomial(1, 2 * n + jj + 1, rest).mul(&TruncatedSeries::binomial(
                -1,
                (2 * n + jj + 1) * (kk - ii + 1),
                rest,
            ))
        },
    );
    let denom = euler_infty(order).mul(&product_one_plus(1..=jj + 1, order));
    numer.div_unit(&denom).expect("denominator is a unit")
}

/// The two closed forms for the edge series agree:
/// `RHS_{j-1,k} = RHS_{j,1}` for `j >= 1`.
pub fn edge_match_check(k: u32, j: u32, order: i64) -> Result<(), Mismatch> {
    assert!(j >= 1, "edge matching starts at shelf 1");
    let lower = closed_form_official(k, j - 1, k, order);
    let upper = closed_form_official(k, j, 1, order);
    lower.first_mismatch(&upper).map_or(Ok(()), Err)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Weak,
    Standard,
    Strong,
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::Weak => "weak",
            Strength::Standard => "standard",
            Strength::Strong => "strong",
        })
    }
}

/// Outcome of one Empirical Hypothesis check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EHReport {
    pub index: ShelfIndex,
    pub kind: SeriesKind,
    pub strength: Strength,
    /// Required exponent: `j + 1`, or `j + 2` when `i = k`.
    pub threshold: i64,
    /// Largest `f` with `B - 1` divisible by `q^f`; `order + 1` when `B - 1`
    /// vanishes to the known order.
    pub divisibility_exponent: i64,
    /// Coefficient of `q^f` in `B - 1` (zero if none is known).
    #[serde(serialize_with = "bigint_as_string")]
    pub leading_coefficient: BigInt,
    pub pass: bool,
}

fn bigint_as_string<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Check `B_r` (or `~B_r`) against `1 + q^f (...)`.
///
/// `Weak` passes when some `f >= 1` exists, `Standard` when `f` reaches the
/// threshold, and `Strong` when in addition the first nonzero coefficient
/// after the constant term equals 1.
pub fn eh_check(
    table: &ShelfTable,
    kind: SeriesKind,
    j: u32,
    i: u32,
    strength: Strength,
) -> Result<EHReport, ShelfError> {
    let index = ShelfIndex::new(table.k, j, i);
    if kind == SeriesKind::Ghost {
        assert!(i >= 2, "ghost series exist for 2 <= i <= k, got i = {i}");
    }
    let needed = j as i64 + 2;
    if table.order < needed {
        return Err(ShelfError::OrderTooLow {
            order: table.order,
            j,
            needed,
        });
    }
    let series = table
        .get(kind, index.r())
        .ok_or(ShelfError::Missing { r: index.r() })?;
    Ok(eh_report(index, kind, series, strength))
}

/// Evaluate the Empirical Hypothesis on a bare series.
pub fn eh_report(
    index: ShelfIndex,
    kind: SeriesKind,
    series: &TruncatedSeries,
    strength: Strength,
) -> EHReport {
    let remainder = series - &TruncatedSeries::one(series.order());
    let f = remainder.valuation();
    let leading = if remainder.is_zero() {
        BigInt::zero()
    } else {
        remainder.coeff(f)
    };
    let threshold = index.eh_threshold();
    let pass = match strength {
        Strength::Weak => f >= 1,
        Strength::Standard => f >= threshold,
        Strength::Strong => f >= threshold && leading.is_one(),
    };
    EHReport {
        index,
        kind,
        strength,
        threshold,
        divisibility_exponent: f,
        leading_coefficient: leading,
        pass,
    }
}

/// `~B_1 := B_2`, the ghost of index 1 that the interpretation of ghosts
/// assigns retroactively.
pub fn ghost_extension_b1(table: &ShelfTable) -> Result<TruncatedSeries, ShelfError> {
    table.official(2).cloned().ok_or(ShelfError::Missing { r: 2 })
}

/// Check `~B_{(k-1)J+k} = B_{(k-1)(J+1)+2}` and, for `2 <= i <= k-1`,
/// `~B_{(k-1)J+i} = q^{(J+1)(k-i)} B_{(k-1)(J+1)+k-i+2} + B_{(k-1)J+i+1}`,
/// with both sides taken from the closed forms.
pub fn ghost_decomposition_check(k: u32, shelf: u32, i: u32, order: i64) -> Result<(), Mismatch> {
    let lhs = closed_form_ghost(k, shelf, i, order);
    let rhs = if i == k {
        closed_form_official(k, shelf + 1, 2, order)
    } else {
        let shift = (shelf as i64 + 1) * (k - i) as i64;
        let upper = closed_form_official(k, shelf + 1, k - i + 2, order).shift(shift);
        &upper + &closed_form_official(k, shelf, i + 1, order)
    };
    lhs.first_mismatch(&rhs).map_or(Ok(()), Err)
}
