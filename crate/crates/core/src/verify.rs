//! Verification suites. Each suite splits into independent cells; cells run
//! in parallel and their results are gathered in a fixed order, so the
//! report does not depend on the number of threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HMatrixError, RecursionDetail, SeriesError, ShelfError};
use crate::hmatrix::{self, build_transfer, h_build, h_limit, h_step, initial_vector, HMatrix, TransferKind};
use crate::partitions::{ghost_count_series, h_count_series, official_count_series};
use crate::series::{product_side, theta_quotient, TruncatedSeries};
use crate::shelves::{
    build_by_recursion, closed_form_ghost, closed_form_official, eh_report, ghost_extension_b1, EHReport,
    SeriesKind, ShelfIndex, Strength,
};
use crate::xq::{
    factorization_sides, gap_filling_forms, jtilde, jtilde_via_htilde, jtildetilde, jtildetilde_from_jtilde,
    BivariateSeries,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    AndrewsBressoud,
    Shelves,
    Ghosts,
    Recursion,
    EdgeMatch,
    Eh,
    Matrix,
    HLimit,
    Hcomb,
    Jacobi,
    Dictionary,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::AndrewsBressoud,
        Suite::Shelves,
        Suite::Ghosts,
        Suite::Recursion,
        Suite::EdgeMatch,
        Suite::Eh,
        Suite::Matrix,
        Suite::HLimit,
        Suite::Hcomb,
        Suite::Jacobi,
        Suite::Dictionary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AndrewsBressoud => "andrews-bressoud",
            Suite::Shelves => "shelves",
            Suite::Ghosts => "ghosts",
            Suite::Recursion => "recursion",
            Suite::EdgeMatch => "edge-match",
            Suite::Eh => "eh",
            Suite::Matrix => "matrix",
            Suite::HLimit => "h-limit",
            Suite::Hcomb => "hcomb",
            Suite::Jacobi => "jacobi",
            Suite::Dictionary => "dictionary",
        }
    }

    /// Default range of `k`.
    pub fn default_ks(self) -> Vec<u32> {
        match self {
            Suite::AndrewsBressoud | Suite::EdgeMatch | Suite::Jacobi => (2..=6).collect(),
            Suite::Shelves | Suite::Ghosts => (2..=4).collect(),
            Suite::Recursion | Suite::Eh | Suite::HLimit | Suite::Dictionary => (2..=5).collect(),
            Suite::Matrix => (3..=5).collect(),
            Suite::Hcomb => (3..=4).collect(),
        }
    }

    /// Default largest shelf `j`.
    pub fn default_j_max(self) -> u32 {
        match self {
            Suite::Eh => 12,
            Suite::Recursion | Suite::EdgeMatch => 8,
            Suite::Matrix => 6,
            Suite::Dictionary => 5,
            Suite::Hcomb => 4,
            _ => 0,
        }
    }

    /// Default largest starting shelf `J`.
    pub fn default_start_max(self) -> u32 {
        match self {
            Suite::HLimit => 3,
            Suite::Shelves | Suite::Ghosts | Suite::Hcomb | Suite::Matrix => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Parameters of one suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub ks: Vec<u32>,
    /// Truncation order for series comparisons.
    pub order: i64,
    /// Largest `n` for partition counts.
    pub n_max: u32,
    /// Largest shelf `j` (for `hcomb`, the number of steps past `J`).
    pub j_max: u32,
    /// Largest starting shelf `J`.
    pub start_max: u32,
    pub strength: Strength,
    /// Add 1 to the coefficient of `q^e` of every subject series before
    /// it is compared.
    pub fault: Option<i64>,
}

impl SuiteConfig {
    pub fn defaults(suite: Suite, order: i64, n_max: u32) -> Self {
        Self {
            ks: suite.default_ks(),
            order,
            n_max,
            j_max: suite.default_j_max(),
            start_max: suite.default_start_max(),
            strength: Strength::Strong,
            fault: None,
        }
    }
}

/// Evidence that a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub suite: Suite,
    pub check: String,
    pub cell: BTreeMap<String, i64>,
    /// First exponent of `q` at which the check fails.
    pub exponent: i64,
    pub expected: String,
    pub actual: String,
    pub detail: String,
}

/// Outcome of a suite run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub pass: bool,
    pub cells: usize,
    pub comparisons: usize,
    pub failures: Vec<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eh: Vec<EHReport>,
}

impl Report {
    pub fn first_failure(&self) -> Option<&Certificate> {
        self.failures.first()
    }
}

type Cell = Vec<(&'static str, i64)>;

/// Collects comparisons for one cell.
struct Checker<'a> {
    suite: Suite,
    cell: &'a Cell,
    fault: Option<i64>,
    comparisons: usize,
    failures: Vec<Certificate>,
    eh: Vec<EHReport>,
}

impl<'a> Checker<'a> {
    fn new(suite: Suite, cell: &'a Cell, fault: Option<i64>) -> Self {
        Self {
            suite,
            cell,
            fault,
            comparisons: 0,
            failures: Vec::new(),
            eh: Vec::new(),
        }
    }

    fn inject(&self, s: &TruncatedSeries) -> TruncatedSeries {
        match self.fault {
            Some(e) => s.with_coeff_added(e, 1),
            None => s.clone(),
        }
    }

    fn fail(&mut self, check: &str, exponent: i64, expected: String, actual: String, detail: String) {
        let cell = self.cell.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self.failures.push(Certificate {
            suite: self.suite,
            check: check.to_string(),
            cell,
            exponent,
            expected,
            actual,
            detail,
        });
    }

    /// Compare `actual` against `expected` through exponent `order`.
    fn series(&mut self, check: &str, actual: &TruncatedSeries, expected: &TruncatedSeries, order: i64) {
        self.comparisons += 1;
        let actual = self.inject(actual);
        let known = actual.order().min(expected.order());
        if known < order {
            self.fail(
                check,
                known + 1,
                format!("order >= {order}"),
                format!("order {known}"),
                "series not known to the required order".into(),
            );
            return;
        }
        let (a, e) = (actual.truncate(order), expected.truncate(order));
        if let Some(m) = a.first_mismatch(&e) {
            self.fail(
                check,
                m.exponent,
                m.right.to_string(),
                m.left.to_string(),
                String::new(),
            );
        }
    }

    fn series_vec(
        &mut self,
        check: &str,
        actual: &[TruncatedSeries],
        expected: &[TruncatedSeries],
        order: i64,
    ) {
        for (t, (a, e)) in actual.iter().zip(expected).enumerate() {
            let before = self.failures.len();
            self.series(check, a, e, order);
            if let Some(f) = self.failures.get_mut(before) {
                f.detail = format!("entry {}", t + 1);
            }
        }
    }

    fn grid(&mut self, check: &str, actual: &hmatrix::Grid, expected: &hmatrix::Grid, order: i64) {
        for (r, (ra, re)) in actual.iter().zip(expected).enumerate() {
            for (c, (a, e)) in ra.iter().zip(re).enumerate() {
                let before = self.failures.len();
                self.series(check, a, e, order);
                if let Some(f) = self.failures.get_mut(before) {
                    f.detail = format!("entry ({}, {})", r + 1, c + 1);
                }
            }
        }
    }

    fn bivariate(&mut self, check: &str, actual: &BivariateSeries, expected: &BivariateSeries) {
        self.comparisons += 1;
        let actual = match self.fault {
            Some(e) if e >= 0 && e <= actual.order() => {
                actual.add(&BivariateSeries::monomial(1, 0, e as u32, actual.order()))
            }
            _ => actual.clone(),
        };
        let order = actual.order().min(expected.order());
        for b in 0..=order as u32 {
            for a in 0..=b {
                let (x, y) = (actual.coeff(a, b), expected.coeff(a, b));
                if x != y {
                    self.fail(
                        check,
                        b as i64,
                        y.to_string(),
                        x.to_string(),
                        format!("coefficient of x^{a} q^{b}"),
                    );
                    return;
                }
            }
        }
    }

    fn nonnegative(&mut self, check: &str, s: &TruncatedSeries) {
        self.comparisons += 1;
        if let Some((e, c)) = s.terms().find(|(_, c)| c.sign() == num_bigint::Sign::Minus) {
            self.fail(check, e, ">= 0".into(), c.to_string(), String::new());
        }
    }

    fn eh(&mut self, index: ShelfIndex, kind: SeriesKind, s: &TruncatedSeries, strength: Strength) {
        self.comparisons += 1;
        let report = eh_report(index, kind, &self.inject(s), strength);
        if !report.pass {
            let f = report.divisibility_exponent;
            let exponent = if f < report.threshold { f } else { report.threshold };
            self.fail(
                &format!("eh-{strength}"),
                exponent,
                format!("1 + q^{} + ...", report.threshold),
                s.to_string(),
                format!(
                    "{kind} divisibility exponent {f}, leading coefficient {}",
                    report.leading_coefficient
                ),
            );
        }
        self.eh.push(report);
    }

    fn shelf_error(&mut self, check: &str, e: &ShelfError) {
        let exponent = match e {
            ShelfError::RecursionFailed { detail, .. } => match detail {
                RecursionDetail::Division(SeriesError::NotDivisible { exponent, .. }) => *exponent,
                RecursionDetail::Division(SeriesError::InsufficientOrder { order, .. }) => order + 1,
                RecursionDetail::Division(SeriesError::NotAUnit { .. }) => 0,
                RecursionDetail::Mismatch { exponent, .. } => *exponent,
            },
            ShelfError::OrderTooLow { order, .. } => order + 1,
            ShelfError::Missing { .. } => -1,
        };
        self.fail(check, exponent, String::new(), String::new(), e.to_string());
    }

    fn hmatrix_error(&mut self, check: &str, e: &HMatrixError) {
        let exponent = match e {
            HMatrixError::UnstableCoefficient { exponent, .. } => *exponent,
            _ => -1,
        };
        self.fail(check, exponent, String::new(), String::new(), e.to_string());
    }
}

struct CellOutcome {
    comparisons: usize,
    failures: Vec<Certificate>,
    eh: Vec<EHReport>,
}

fn run_cells<F>(suite: Suite, cells: Vec<Cell>, fault: Option<i64>, f: F) -> Report
where
    F: Fn(&mut Checker<'_>, &Cell) + Sync,
{
    let outcomes: Vec<CellOutcome> = cells
        .par_iter()
        .map(|cell| {
            let mut checker = Checker::new(suite, cell, fault);
            f(&mut checker, cell);
            CellOutcome {
                comparisons: checker.comparisons,
                failures: checker.failures,
                eh: checker.eh,
            }
        })
        .collect();
    let mut report = Report {
        suite,
        pass: true,
        cells: cells.len(),
        comparisons: 0,
        failures: Vec::new(),
        eh: Vec::new(),
    };
    for o in outcomes {
        report.comparisons += o.comparisons;
        report.failures.extend(o.failures);
        report.eh.extend(o.eh);
    }
    report.pass = report.failures.is_empty();
    report
}

fn get(cell: &Cell, key: &str) -> u32 {
    cell.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v as u32)
        .expect("cell key")
}

/// Run one suite.
pub fn run(suite: Suite, cfg: &SuiteConfig) -> Report {
    let ks = cfg.ks.clone();
    let order = cfg.order;
    let n = cfg.n_max;
    let fault = cfg.fault;
    match suite {
        Suite::AndrewsBressoud => {
            let cells = ks
                .iter()
                .flat_map(|&k| (1..=k).map(move |i| vec![("k", k as i64), ("i", i as i64)]))
                .collect();
            run_cells(suite, cells, fault, |c, cell| {
                let (k, i) = (get(cell, "k"), get(cell, "i"));
                match official_count_series(k, i, n) {
                    Ok(counts) => c.series(
                        "product-vs-count",
                        &product_side(k, i, n as i64),
                        &counts,
                        n as i64,
                    ),
                    Err(e) => c.fail("count", -1, String::new(), String::new(), e.to_string()),
                }
            })
        }
        Suite::Shelves => {
            let cells = shelf_cells(&ks, cfg.start_max, 1);
            run_cells(suite, cells, fault, |c, cell| {
                let (k, start, i) = (get(cell, "k"), get(cell, "J"), get(cell, "i"));
                let r = ShelfIndex::new(k, start, i).r();
                match official_count_series(k, r, n) {
                    Ok(counts) => c.series(
                        "closed-form-vs-count",
                        &closed_form_official(k, start, i, n as i64),
                        &counts,
                        n as i64,
                    ),
                    Err(e) => c.fail("count", -1, String::new(), String::new(), e.to_string()),
                }
            })
        }
        Suite::Ghosts => {
            let mut cells = shelf_cells(&ks, cfg.start_max, 2);
            cells.extend(ks.iter().map(|&k| vec![("k", k as i64), ("r", 1)]));
            run_cells(suite, cells, fault, |c, cell| {
                let k = get(cell, "k");
                let n_order = n as i64;
                if cell.iter().any(|(key, _)| *key == "r") {
                    match build_by_recursion(k, 0, n_order) {
                        Ok(table) => {
                            let b1 = ghost_extension_b1(&table).expect("B_2 on shelf 0");
                            c.series("first-ghost-vs-count", &b1, &ghost_count_series(k, 1, n), n_order);
                        }
                        Err(e) => c.shelf_error("build", &e),
                    }
                    return;
                }
                let (start, i) = (get(cell, "J"), get(cell, "i"));
                let r = ShelfIndex::new(k, start, i).r();
                let ghost = closed_form_ghost(k, start, i, n_order);
                c.series(
                    "closed-form-vs-count",
                    &ghost,
                    &ghost_count_series(k, r, n),
                    n_order,
                );
                let rhs = if i == k {
                    closed_form_official(k, start + 1, 2, n_order)
                } else {
                    let shift = (start as i64 + 1) * (k - i) as i64;
                    let upper = closed_form_official(k, start + 1, k - i + 2, n_order).shift(shift);
                    &upper + &closed_form_official(k, start, i + 1, n_order)
                };
                c.series("decomposition", &ghost, &rhs, n_order);
            })
        }
        Suite::Recursion => {
            let j_max = cfg.j_max;
            let cells = ks.iter().map(|&k| vec![("k", k as i64)]).collect();
            run_cells(suite, cells, fault, |c, cell| {
                let k = get(cell, "k");
                let table = match build_by_recursion(k, j_max, order) {
                    Ok(t) => t,
                    Err(e) => return c.shelf_error("build", &e),
                };
                for j in 0..=j_max {
                    for i in 1..=k {
                        let r = ShelfIndex::new(k, j, i).r();
                        let built = table.official(r).expect("built official");
                        c.series("official", built, &closed_form_official(k, j, i, order), order);
                        c.nonnegative("official-nonnegative", built);
                        if i >= 2 {
                            let ghost = table.ghost(r).expect("built ghost");
                            c.series("ghost", ghost, &closed_form_ghost(k, j, i, order), order);
                            c.nonnegative("ghost-nonnegative", ghost);
                        }
                    }
                }
            })
        }
        Suite::EdgeMatch => {
            let cells = ks
                .iter()
                .flat_map(|&k| (1..=cfg.j_max).map(move |j| vec![("k", k as i64), ("j", j as i64)]))
                .collect();
            run_cells(suite, cells, fault, |c, cell| {
                let (k, j) = (get(cell, "k"), get(cell, "j"));
                c.series(
                    "edge",
                    &closed_form_official(k, j, 1, order),
                    &closed_form_official(k, j - 1, k, order),
                    order,
                );
            })
        }
        Suite::Eh => {
            let j_max = cfg.j_max;
            let strength = cfg.strength;
            let cells = ks.iter().map(|&k| vec![("k", k as i64)]).collect();
            run_cells(suite, cells, fault, |c, cell| {
                let k = get(cell, "k");
                let table = match build_by_recursion(k, j_max, 2 * (j_max as i64 + 2)) {
                    Ok(t) => t,
                    Err(e) => return c.shelf_error("build", &e),
                };
                for j in 0..=j_max {
                    let eh_order = 2 * (j as i64 + 2);
                    for i in 1..=k {
                        let index = ShelfIndex::new(k, j, i);
                        let official = table.official(index.r()).expect("official").truncate(eh_order);
                        c.eh(index, SeriesKind::Official, &official, strength);
                    }
                    for i in 2..=k {
                        let index = ShelfIndex::new(k, j, i);
                        let ghost = table.ghost(index.r()).expect("ghost").truncate(eh_order);
                        c.eh(index, SeriesKind::Ghost, &ghost, strength);
                    }
                }
            })
        }
        Suite::Matrix => matrix_suite(cfg),
        Suite::HLimit => {
            let cells = ks
                .iter()
                .flat_map(|&k| {
                    (0..=cfg.start_max).flat_map(move |start| {
                        (1..=k).map(move |i| vec![("k", k as i64), ("J", start as i64), ("i", i as i64)])
                    })
                })
                .collect();
            run_cells(suite, cells, fault, |c, cell| {
                let (k, start, i) = (get(cell, "k"), get(cell, "J"), get(cell, "i"));
                match h_limit(k, start, i, order) {
                    Ok(lim) => c.series("limit", &lim, &closed_form_official(k, start, i, order), order),
                    Err(e) => c.hmatrix_error("limit", &e),
                }
            })
        }
        Suite::Hcomb => {
            let steps = cfg.j_max;
            let cells = ks
                .iter()
                .flat_map(|&k| {
                    (0..=cfg.start_max).flat_map(move |start| {
                        (start + 1..=start + steps)
                            .map(move |j| vec![("k", k as i64), ("J", start as i64), ("j", j as i64)])
                    })
                })
                .collect();
            run_cells(suite, cells, fault, |c, cell| {
                let (k, start, j) = (get(cell, "k"), get(cell, "J"), get(cell, "j"));
                let h = h_build(k, start, j, n as i64);
                for i in 1..=k {
                    for l in 1..=k {
                        let counts = h_count_series(k, start, j, l, i, n);
                        let before = c.failures.len();
                        c.series("entry-vs-count", h.entry(i, l), &counts, n as i64);
                        if let Some(f) = c.failures.get_mut(before) {
                            f.detail = format!("entry ({i}, {l})");
                        }
                    }
                    if j == start + 1 {
                        c.series_vec(
                            "initial-vector",
                            h.row(i),
                            &initial_vector(k, start, i, n as i64),
                            n as i64,
                        );
                    }
                }
            })
        }
        Suite::Jacobi => {
            let cells = ks
                .iter()
                .flat_map(|&k| (1..=k).map(move |i| vec![("k", k as i64), ("i", i as i64)]))
                .collect();
            run_cells(suite, cells, fault, |c, cell| {
                let (k, i) = (get(cell, "k"), get(cell, "i"));
                c.series(
                    "product-vs-theta",
                    &product_side(k, i, order),
                    &theta_quotient(k, i, order),
                    order,
                );
            })
        }
        Suite::Dictionary => dictionary_suite(cfg),
    }
}

fn shelf_cells(ks: &[u32], start_max: u32, i_min: u32) -> Vec<Cell> {
    ks.iter()
        .flat_map(|&k| {
            (0..=start_max).flat_map(move |start| {
                (i_min..=k).map(move |i| vec![("k", k as i64), ("J", start as i64), ("i", i as i64)])
            })
        })
        .collect()
}

fn matrix_suite(cfg: &SuiteConfig) -> Report {
    let suite = Suite::Matrix;
    let order = cfg.order;
    let j_max = cfg.j_max;
    let mut cells: Vec<Cell> = cfg
        .ks
        .iter()
        .flat_map(|&k| (0..=j_max).map(move |j| vec![("k", k as i64), ("j", j as i64)]))
        .collect();
    cells.extend(
        cfg.ks
            .iter()
            .flat_map(|&k| (0..=cfg.start_max).map(move |s| vec![("k", k as i64), ("J", s as i64)])),
    );
    run_cells(suite, cells, cfg.fault, |c, cell| {
        let k = get(cell, "k");
        if cell.iter().any(|(key, _)| *key == "J") {
            let start = get(cell, "J");
            let table = match build_by_recursion(k, start + j_max, order) {
                Ok(t) => t,
                Err(e) => return c.shelf_error("build", &e),
            };
            let base = table.official_shelf(start).expect("shelf J");
            let mut h = HMatrix::identity(k, start, order);
            c.grid("identity-at-J", h.entries(), &hmatrix::identity(k, order), order);
            for _ in 0..=j_max {
                let j = h.j();
                let product = h_build(k, start, j, order);
                c.grid("step-vs-product", h.entries(), product.entries(), order);
                let zero = TruncatedSeries::zero(order);
                for (i, l) in h.parity_zero_cells() {
                    let before = c.failures.len();
                    c.series("parity-vanishing", h.entry(i, l), &zero, order);
                    if let Some(f) = c.failures.get_mut(before) {
                        f.detail = format!("entry ({i}, {l}) at j = {j}");
                    }
                }
                for s in h.entries().iter().flatten() {
                    c.nonnegative("h-nonnegative", s);
                }
                let shelf = table.official_shelf(j).expect("shelf j");
                c.series_vec("reconstruction", &hmatrix::reconstruct(&h, &shelf), &base, order);
                h = h_step(&h);
            }
            return;
        }
        let j = get(cell, "j");
        let table = match build_by_recursion(k, j, order) {
            Ok(t) => t,
            Err(e) => return c.shelf_error("build", &e),
        };
        let officials = table.official_shelf(j).expect("shelf j");
        let ghosts = table.ghost_shelf(j).expect("shelf j ghosts");
        let bt = build_transfer(k, j, TransferKind::Btilde, order);
        c.series_vec("btilde", &bt.apply(&officials), &ghosts, order);
        if j >= 1 {
            c.grid(
                "a-times-b",
                &hmatrix::ab_product(k, j, order),
                &hmatrix::identity(k, order),
                order,
            );
            let prev = table.official_shelf(j - 1).expect("shelf j-1");
            let a = build_transfer(k, j, TransferKind::A, order);
            c.series_vec("a-lowers-shelf", &a.apply(&officials), &prev, order);
        }
    })
}

fn dictionary_suite(cfg: &SuiteConfig) -> Report {
    let suite = Suite::Dictionary;
    let order = cfg.order;
    let mut cells: Vec<Cell> = cfg
        .ks
        .iter()
        .flat_map(|&k| (0..=cfg.j_max).map(move |j| vec![("k", k as i64), ("j", j as i64)]))
        .collect();
    cells.extend(cfg.ks.iter().map(|&k| vec![("k", k as i64)]));
    cells.push(vec![("gap", 1)]);
    run_cells(suite, cells, cfg.fault, |c, cell| {
        if cell[0].0 == "gap" {
            for n in 0..=5 {
                for j in 0..=cfg.j_max {
                    let [spec, filled, reduced] = gap_filling_forms(n, j, order);
                    c.series("gap-filled", &filled, &spec, order);
                    c.series("gap-reduced", &reduced, &spec, order);
                }
                for i in 1..=6 {
                    let (left, right) = factorization_sides(n, i);
                    c.bivariate("factorization", &left, &right);
                }
            }
            return;
        }
        let k = get(cell, "k");
        if cell.len() == 1 {
            for i in 1..=k {
                c.bivariate(
                    "substitution",
                    &jtilde_via_htilde(k, i, order),
                    &jtilde(k, i, order),
                );
            }
            for i in 1..k {
                c.bivariate(
                    "ghost-construction",
                    &jtildetilde(k, i, order),
                    &jtildetilde_from_jtilde(k, i, order),
                );
            }
            return;
        }
        let j = get(cell, "j");
        for i in 1..=k {
            let spec = jtilde(k, k - i + 1, order).specialize(j);
            c.series("official", &spec, &closed_form_official(k, j, i, order), order);
        }
        for i in 2..=k {
            let spec = jtildetilde(k, k - i + 1, order).specialize(j);
            c.series("ghost", &spec, &closed_form_ghost(k, j, i, order), order);
        }
    })
}
