//! Two-variable series in `x` and `q`, the `J~` and `J~~` expressions, and
//! their specializations `x -> q^j`.
//!
//! Every summand in these expressions is a signed monomial times a product
//! of binomials `1 + c x^a q^b`, divided by further binomials and by
//! infinite families of them. [`Summand`] keeps that factored shape, which
//! lets substitutions act on exponents before anything is expanded.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::series::TruncatedSeries;

/// Exact series in `q` to order `N` whose `q^b` coefficient is a polynomial
/// in `x` of degree at most `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    order: i64,
    /// `rows[b][a]` is the coefficient of `x^a q^b`.
    rows: Vec<Vec<BigInt>>,
}

impl BivariateSeries {
    pub fn zero(order: i64) -> Self {
        assert!(order >= 0);
        let rows = (0..=order as usize)
            .map(|b| vec![BigInt::zero(); b + 1])
            .collect();
        Self { order, rows }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(1, 0, 0, order)
    }

    /// `c x^a q^b`; zero when `b > N`.
    pub fn monomial(c: i64, a: u32, b: u32, order: i64) -> Self {
        assert!(a <= b, "support requires a <= b, got x^{a} q^{b}");
        let mut s = Self::zero(order);
        if (b as i64) <= order {
            s.rows[b as usize][a as usize] = c.into();
        }
        s
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficient of `x^a q^b`; zero outside the support.
    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        assert!((b as i64) <= self.order, "q^{b} is beyond order {}", self.order);
        self.rows[b as usize].get(a as usize).cloned().unwrap_or_default()
    }

    /// Nonzero terms `(a, b, c)` sorted by `(b, a)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> + '_ {
        self.rows.iter().enumerate().flat_map(|(b, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(a, c)| (a as u32, b as u32, c))
        })
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self {
            order,
            rows: self.rows[..=order as usize].to_vec(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let order = self.order.min(other.order);
        let rows = (0..=order as usize)
            .map(|b| {
                self.rows[b]
                    .iter()
                    .zip(&other.rows[b])
                    .map(|(x, y)| f(x, y))
                    .collect()
            })
            .collect();
        Self { order, rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn scale(&self, factor: i64) -> Self {
        let factor = BigInt::from(factor);
        Self {
            order: self.order,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|c| c * &factor).collect())
                .collect(),
        }
    }

    /// Multiply by `x^a q^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        assert!(a <= b, "support requires a <= b");
        let mut out = Self::zero(self.order);
        for (ta, tb, c) in self.terms() {
            let (na, nb) = (ta + a, tb + b);
            if (nb as i64) <= self.order {
                out.rows[nb as usize][na as usize] = c.clone();
            }
        }
        out
    }

    /// Full product; the order is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in other.terms() {
                let b = b1 + b2;
                if b as i64 > order {
                    continue;
                }
                out.rows[b as usize][(a1 + a2) as usize] += c1 * c2;
            }
        }
        out
    }

    /// Multiply by `1 + c x^a q^b` with `1 <= b`.
    pub fn mul_binomial(&self, factor: Binomial) -> Self {
        let Binomial { c, a, b } = factor;
        assert!(b >= 1 && a <= b, "binomial must carry a positive q-power");
        let mut out = self.clone();
        for row in (b as usize..=self.order as usize).rev() {
            for col in a as usize..=row {
                let src = &self.rows[row - b as usize];
                if let Some(v) = src.get(col - a as usize) {
                    if !v.is_zero() {
                        out.rows[row][col] += v * c;
                    }
                }
            }
        }
        out
    }

    /// Divide by the unit `1 + c x^a q^b` with `1 <= b`.
    pub fn div_binomial(&self, factor: Binomial) -> Self {
        let Binomial { c, a, b } = factor;
        assert!(b >= 1 && a <= b, "binomial must carry a positive q-power");
        let mut out = self.clone();
        for row in b as usize..=self.order as usize {
            for col in a as usize..=row {
                let prev = out.rows[row - b as usize]
                    .get(col - a as usize)
                    .cloned()
                    .unwrap_or_default();
                if !prev.is_zero() {
                    out.rows[row][col] -= prev * c;
                }
            }
        }
        out
    }

    /// Quotient by a series whose `q^0` column is the constant 1, by
    /// induction on the q-degree.
    pub fn div_unit(&self, divisor: &Self) -> Self {
        assert!(
            divisor.rows[0][0] == BigInt::from(1),
            "leading q-column of the divisor must be 1"
        );
        let order = self.order.min(divisor.order);
        let mut out = Self::zero(order);
        for b in 0..=order as usize {
            let mut row = self.rows[b].clone();
            for s in 1..=b {
                for (da, dc) in divisor.rows[s].iter().enumerate() {
                    if dc.is_zero() {
                        continue;
                    }
                    for (qa, qc) in out.rows[b - s].iter().enumerate() {
                        if !qc.is_zero() {
                            row[da + qa] -= dc * qc;
                        }
                    }
                }
            }
            out.rows[b] = row;
        }
        out
    }

    /// Image under `x -> q^j`.
    pub fn specialize(&self, j: u32) -> TruncatedSeries {
        let terms = self.terms().filter_map(|(a, b, c)| {
            let e = a as i64 * j as i64 + b as i64;
            (e <= self.order).then(|| (e, c.clone()))
        });
        TruncatedSeries::from_terms(terms, self.order)
    }
}

impl Serialize for BivariateSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            a: u32,
            b: u32,
            c: String,
        }
        let terms: Vec<_> = self.terms().collect();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (a, b, c) in terms {
            seq.serialize_element(&Term {
                a,
                b,
                c: c.to_string(),
            })?;
        }
        seq.end()
    }
}

/// The factor `1 + c x^a q^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Binomial {
    pub c: i64,
    pub a: u32,
    pub b: u32,
}

impl Binomial {
    pub fn new(c: i64, a: u32, b: u32) -> Self {
        Self { c, a, b }
    }

    fn substitute_xq(self) -> Self {
        Self {
            b: self.b + self.a,
            ..self
        }
    }

    /// Image under `x -> q^j` as a one-variable series.
    fn specialize(self, j: u32, order: i64) -> TruncatedSeries {
        TruncatedSeries::binomial(self.c, (self.a * j + self.b) as i64, order)
    }
}

/// The infinite product `prod_{s >= 0} (1 + c x^a q^{b+s})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Family {
    pub c: i64,
    pub a: u32,
    pub b: u32,
}

impl Family {
    /// Members that can touch exponents up to `order`.
    fn members(self, order: i64) -> impl Iterator<Item = Binomial> {
        (self.b..=order.max(0) as u32).map(move |b| Binomial::new(self.c, self.a, b))
    }
}

/// `sign x^x_exp q^q_exp prod(numer) / (prod(denom) prod(families))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub sign: i64,
    pub x_exp: u32,
    pub q_exp: i64,
    pub numer: Vec<Binomial>,
    pub denom: Vec<Binomial>,
    pub families: Vec<Family>,
}

impl Summand {
    /// The same summand after `x -> xq`.
    pub fn substitute_xq(&self) -> Self {
        Self {
            sign: self.sign,
            x_exp: self.x_exp,
            q_exp: self.q_exp + self.x_exp as i64,
            numer: self.numer.iter().map(|f| f.substitute_xq()).collect(),
            denom: self.denom.iter().map(|f| f.substitute_xq()).collect(),
            families: self
                .families
                .iter()
                .map(|f| Family { b: f.b + f.a, ..*f })
                .collect(),
        }
    }

    /// Factor lists sorted, for structural comparison.
    pub fn canonical(&self) -> Self {
        let mut s = self.clone();
        s.numer.sort();
        s.denom.sort();
        s.families.sort();
        s
    }

    /// Expand to a bivariate series of order `N`. Every factor must carry a
    /// positive power of `q`.
    pub fn expand(&self, order: i64) -> BivariateSeries {
        if self.q_exp > order {
            return BivariateSeries::zero(order);
        }
        assert!(self.q_exp >= 0, "negative q-power in summand");
        let mut s = BivariateSeries::monomial(self.sign, self.x_exp, self.q_exp as u32, order);
        for f in self.numer.iter().filter(|f| f.b as i64 <= order) {
            s = s.mul_binomial(*f);
        }
        for f in self
            .denom
            .iter()
            .copied()
            .chain(self.families.iter().flat_map(|fam| fam.members(order)))
        {
            if f.b as i64 <= order {
                s = s.div_binomial(f);
            }
        }
        s
    }

    /// Image under `x -> q^j`, computed in one variable.
    pub fn specialize(&self, j: u32, order: i64) -> TruncatedSeries {
        let lead = self.q_exp + (self.x_exp * j) as i64;
        if lead > order {
            return TruncatedSeries::zero(order);
        }
        let mut s = TruncatedSeries::monomial(lead, self.sign, order);
        for f in &self.numer {
            s = &s * &f.specialize(j, order);
        }
        let denoms = self
            .denom
            .iter()
            .copied()
            .chain(self.families.iter().flat_map(|fam| {
                fam.members(order)
                    .take_while(move |m| (m.a * j + m.b) as i64 <= order)
            }));
        for f in denoms {
            s = s.div_unit(&f.specialize(j, order)).expect("unit factor");
        }
        s
    }
}

fn sum_expanded(summands: &[Summand], order: i64) -> BivariateSeries {
    summands
        .iter()
        .fold(BivariateSeries::zero(order), |acc, s| acc.add(&s.expand(order)))
}

/// Summation range: `n` with `k n^2 <= N`.
fn n_range(k: u32, order: i64) -> impl Iterator<Item = u32> {
    (0u32..).take_while(move |&n| (k as i64) * (n as i64).pow(2) <= order)
}

fn pure_q_denominators(n: u32) -> Vec<Binomial> {
    (1..=n)
        .flat_map(|s| [Binomial::new(1, 0, s), Binomial::new(-1, 0, s)])
        .collect()
}

fn sign(n: u32) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Summands of `H~_{k,i}(x, q)`. Their `n = 0` term contains `1/(1 - x)`,
/// so they are only expanded after a substitution that adds a `q`.
pub fn htilde_summands(k: u32, i: u32, order: i64) -> Vec<Summand> {
    assert!(k >= 2 && (1..=k).contains(&i));
    n_range(k, order)
        .map(|n| {
            let mut numer = vec![Binomial::new(-1, i, 2 * n * i)];
            numer.extend((0..n).map(|s| Binomial::new(1, 1, s)));
            Summand {
                sign: sign(n),
                x_exp: (k - 1) * n,
                q_exp: (k as i64) * (n as i64).pow(2) + n as i64 - (i * n) as i64,
                numer,
                denom: pure_q_denominators(n),
                families: vec![Family { c: -1, a: 1, b: n }],
            }
        })
        .collect()
}

/// Summands of `J~_{k,i}(x, q)` written directly.
pub fn jtilde_summands(k: u32, i: u32, order: i64) -> Vec<Summand> {
    assert!(k >= 2 && (1..=k).contains(&i));
    n_range(k, order)
        .map(|n| {
            let mut numer = vec![Binomial::new(-1, i, (2 * n + 1) * i)];
            numer.extend((1..=n).map(|s| Binomial::new(1, 1, s)));
            Summand {
                sign: sign(n),
                x_exp: (k - 1) * n,
                q_exp: (k as i64) * (n as i64).pow(2) + ((k - i) * n) as i64,
                numer,
                denom: pure_q_denominators(n),
                families: vec![Family {
                    c: -1,
                    a: 1,
                    b: n + 1,
                }],
            }
        })
        .collect()
}

/// Summands of `J~~_{k,i}(x, q)` in closed form.
pub fn jtildetilde_summands(k: u32, i: u32, order: i64) -> Vec<Summand> {
    assert!(k >= 2 && (1..k).contains(&i), "J~~ needs 1 <= i <= k-1");
    n_range(k, order)
        .map(|n| {
            let mut numer = vec![Binomial::new(-1, i, (2 * n + 1) * i)];
            numer.extend((1..=n).map(|s| Binomial::new(1, 1, s)));
            numer.push(Binomial::new(1, 1, 2 * n + 1));
            let mut denom = pure_q_denominators(n);
            denom.push(Binomial::new(1, 1, 1));
            Summand {
                sign: sign(n),
                x_exp: (k - 1) * n,
                q_exp: (k as i64) * (n as i64).pow(2) + ((k - i - 1) * n) as i64,
                numer,
                denom,
                families: vec![Family {
                    c: -1,
                    a: 1,
                    b: n + 1,
                }],
            }
        })
        .collect()
}

/// `J~_{k,i}(x, q)` to q-order `N`.
pub fn jtilde(k: u32, i: u32, order: i64) -> BivariateSeries {
    sum_expanded(&jtilde_summands(k, i, order), order)
}

/// `J~_{k,i}(x, q)` obtained as `H~_{k,i}(xq, q)`.
pub fn jtilde_via_htilde(k: u32, i: u32, order: i64) -> BivariateSeries {
    let substituted: Vec<_> = htilde_summands(k, i, order)
        .iter()
        .map(Summand::substitute_xq)
        .collect();
    sum_expanded(&substituted, order)
}

/// `J~~_{k,i}(x, q)` to q-order `N`.
pub fn jtildetilde(k: u32, i: u32, order: i64) -> BivariateSeries {
    sum_expanded(&jtildetilde_summands(k, i, order), order)
}

/// `J~~_{k,i}` from its defining combination of `J~` series.
pub fn jtildetilde_from_jtilde(k: u32, i: u32, order: i64) -> BivariateSeries {
    assert!((1..k).contains(&i));
    let mut num = jtilde(k, i + 1, order);
    if i >= 2 {
        num = num.add(&jtilde(k, i - 1, order).shift(1, 1));
    }
    num.div_binomial(Binomial::new(1, 1, 1))
}

/// Sum of the specialized summands, computed entirely in one variable.
pub fn specialize_summands(summands: &[Summand], j: u32, order: i64) -> TruncatedSeries {
    summands.iter().fold(TruncatedSeries::zero(order), |acc, s| {
        &acc + &s.specialize(j, order)
    })
}

/// The three forms of the `n`-th summand's q-factor at `x = q^j`:
/// the specialized quotient, the gap-filled quotient, and the reduced
/// product over `(1+q)...(1+q^j)(q)_inf`.
pub fn gap_filling_forms(n: u32, j: u32, order: i64) -> [TruncatedSeries; 3] {
    use crate::series::{euler_infty, pochhammer, Sign};
    let euler = euler_infty(order);

    let piece = Summand {
        sign: 1,
        x_exp: 0,
        q_exp: 0,
        numer: (1..=n).map(|s| Binomial::new(1, 1, s)).collect(),
        denom: pure_q_denominators(n),
        families: vec![Family {
            c: -1,
            a: 1,
            b: n + 1,
        }],
    };
    let specialized = piece.specialize(j, order);

    // (-q^{j+1})_n (q^{n+1})_j / ((-q)_n (q)_inf)
    let filled_num =
        &pochhammer(j as i64 + 1, Sign::Minus, n, order) * &pochhammer(n as i64 + 1, Sign::Plus, j, order);
    let filled_den = &pochhammer(1, Sign::Minus, n, order) * &euler;
    let filled = filled_num.div_unit(&filled_den).expect("unit");

    // (q^{2(n+1)}; q^2)_j / ((-q)_j (q)_inf)
    let mut reduced_num = TruncatedSeries::one(order);
    for s in 1..=j {
        reduced_num = &reduced_num * &TruncatedSeries::binomial(-1, 2 * (n + s) as i64, order);
    }
    let reduced_den = &pochhammer(1, Sign::Minus, j, order) * &euler;
    let reduced = reduced_num.div_unit(&reduced_den).expect("unit");

    [specialized, filled, reduced]
}

/// Both sides of the factorization
/// `(1 - x^{i+1} q^{(2n+1)(i+1)}) + x q^{2n+1} (1 - x^{i-1} q^{(2n+1)(i-1)})
///  = (1 - x^i q^{(2n+1)i}) (1 + x q^{2n+1})`, as exact polynomials.
pub fn factorization_sides(n: u32, i: u32) -> (BivariateSeries, BivariateSeries) {
    assert!(i >= 1);
    let m = 2 * n + 1;
    let order = (m * (i + 1)) as i64;
    let one = BivariateSeries::one(order);
    let left = one
        .sub(&BivariateSeries::monomial(1, i + 1, m * (i + 1), order))
        .add(&BivariateSeries::monomial(1, 1, m, order))
        .sub(&BivariateSeries::monomial(1, i, m * i, order));
    let right = one
        .mul_binomial(Binomial::new(-1, i, m * i))
        .mul_binomial(Binomial::new(1, 1, m));
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::product_side;
    use crate::shelves::{closed_form_ghost, closed_form_official};

    fn dense(order: i64, terms: &[(u32, u32, i64)]) -> BivariateSeries {
        terms
            .iter()
            .fold(BivariateSeries::zero(order), |acc, &(a, b, c)| {
                acc.add(&BivariateSeries::monomial(c, a, b, order))
            })
    }

    #[test]
    fn binomial_ops_agree_with_general_ops() {
        let s = dense(12, &[(0, 0, 1), (1, 2, -3), (2, 5, 4), (0, 7, 2)]);
        let f = Binomial::new(-1, 1, 3);
        let as_series = dense(12, &[(0, 0, 1), (1, 3, -1)]);
        assert_eq!(s.mul_binomial(f), s.mul(&as_series));
        assert_eq!(s.div_binomial(f), s.div_unit(&as_series));
        assert_eq!(s.mul_binomial(f).div_binomial(f), s);
    }

    #[test]
    fn support_is_respected() {
        let s = jtilde(3, 2, 25);
        assert!(s.terms().all(|(a, b, _)| a <= b));
        assert_eq!(s.coeff(0, 0), 1.into());
    }

    #[test]
    #[should_panic(expected = "support")]
    fn monomial_outside_support_panics() {
        BivariateSeries::monomial(1, 3, 2, 10);
    }

    #[test]
    fn substitution_matches_direct_summands() {
        for k in 2..=5 {
            for i in 1..=k {
                let via: Vec<_> = htilde_summands(k, i, 40)
                    .iter()
                    .map(|s| s.substitute_xq().canonical())
                    .collect();
                let direct: Vec<_> = jtilde_summands(k, i, 40).iter().map(Summand::canonical).collect();
                assert_eq!(via, direct, "k={k} i={i}");
                assert_eq!(jtilde_via_htilde(k, i, 30), jtilde(k, i, 30));
            }
        }
    }

    #[test]
    fn specialize_at_zero_gives_product_side() {
        for k in 2..=5 {
            for i in 1..=k {
                let spec = jtilde(k, k - i + 1, 40).specialize(0);
                assert_eq!(spec, product_side(k, i, 40), "k={k} i={i}");
            }
        }
    }

    #[test]
    fn dictionary_small() {
        for k in 2..=4 {
            for j in 0..=3 {
                for i in 1..=k {
                    let spec = jtilde(k, k - i + 1, 30).specialize(j);
                    assert_eq!(spec, closed_form_official(k, j, i, 30), "k={k} j={j} i={i}");
                }
                for i in 2..=k {
                    let spec = jtildetilde(k, k - i + 1, 30).specialize(j);
                    assert_eq!(spec, closed_form_ghost(k, j, i, 30), "k={k} j={j} i={i}");
                }
            }
        }
    }

    #[test]
    fn one_variable_path_agrees() {
        for k in 2..=4 {
            for i in 1..=k {
                for j in 0..=3 {
                    let bivariate = jtilde(k, i, 30).specialize(j);
                    let univariate = specialize_summands(&jtilde_summands(k, i, 30), j, 30);
                    assert_eq!(bivariate, univariate);
                }
            }
        }
    }

    #[test]
    fn ghost_construction_identities() {
        for k in 2..=5 {
            for i in 1..k {
                assert_eq!(
                    jtildetilde(k, i, 30),
                    jtildetilde_from_jtilde(k, i, 30),
                    "k={k} i={i}"
                );
            }
        }
    }

    #[test]
    fn gap_filling() {
        for n in 0..=5 {
            for j in 0..=5 {
                let [a, b, c] = gap_filling_forms(n, j, 40);
                assert_eq!(a, b, "n={n} j={j}");
                assert_eq!(b, c, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn factorization() {
        for n in 0..=4 {
            for i in 1..=6 {
                let (l, r) = factorization_sides(n, i);
                assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn sparse_json_sorted_by_b_then_a() {
        let s = dense(5, &[(1, 3, 2), (0, 3, -1), (0, 0, 1)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"[{"a":0,"b":0,"c":"1"},{"a":0,"b":3,"c":"-1"},{"a":1,"b":3,"c":"2"}]"#
        );
    }
}
