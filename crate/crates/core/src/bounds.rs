//! Closed-form numerics for the counting argument: log-factorials, the
//! Stirling interval, the rate functions `f(x, k)` and `h(x, k)`, exact
//! per-vertex log ratios of the pairing counts `q` and `r` to `(3n-1)!!`, the
//! density constants `b_j`, and the budget certificate showing that the
//! largest possible colour classes cannot cover all `n` vertices.
//!
//! Everything factorial-sized lives in natural-log space. Densities that must
//! add up exactly are kept as [`Decimal`].

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Almost every cubic graph has independence ratio at most this value.
pub const INDEPENDENCE_RATIO: &str = "0.45537";
/// Independence-ratio hypothesis of the joint `c_{1,2,4}` bound.
pub const JOINT_BOUND_C1_THRESHOLD: &str = "0.456";
/// Density cap for `c_{1,2,4}`.
pub const B124: &str = "0.7174";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Even colour classes `2k`, governed by `f(x, k)`.
    Even,
    /// Odd colour classes `2k + 1`, governed by `h(x, k)`.
    Odd,
}

impl Parity {
    pub fn function_name(self) -> &'static str {
        match self {
            Parity::Even => "f",
            Parity::Odd => "h",
        }
    }

    pub fn color(self, k: u32) -> u32 {
        match self {
            Parity::Even => 2 * k,
            Parity::Odd => 2 * k + 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.function_name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("double factorial expects an odd argument, got {0}")]
    EvenArgument(u64),
    #[error("{function}({x}, {k}) is undefined: {factor} must be positive")]
    OutOfDomain { function: &'static str, x: f64, k: u32, factor: &'static str },
    #[error("tree depth k must be at least 1")]
    ZeroDepth,
    #[error("vertex count must be even and at least 2, got {0}")]
    BadVertexCount(u64),
    #[error("x * n = {product} is not an integer (x = {x}, n = {n})")]
    NonIntegral { n: u64, x: f64, product: f64 },
    #[error("budget certificate needs k >= 12, got {0}")]
    TargetTooSmall(u32),
    #[error("{function}({x}, {k}) = {value} is not in (0, {cap})")]
    ConstantFailed { function: &'static str, x: f64, k: u32, value: f64, cap: f64 },
    #[error("{which} tail sum {sum} is not below its cap {cap}")]
    TailExceedsCap { which: &'static str, sum: f64, cap: f64 },
    #[error("budget total {0} is not below 1")]
    BudgetExceeded(f64),
    #[error("cap must lie in (0, 1], got {0}")]
    BadCap(f64),
    #[error("{function}(., {k}) never crosses below {cap} inside its admissible interval")]
    NoCrossing { function: &'static str, k: u32, cap: f64 },
}

/// Non-negative decimal with six fractional digits; exact under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Decimal(u64);

impl Decimal {
    const SCALE: u64 = 1_000_000;

    /// Parses `"0.1394"`-style literals with at most six fractional digits.
    pub fn parse(s: &str) -> Option<Decimal> {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() || frac.len() > 6 || !(int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())) {
            return None;
        }
        let whole: u64 = int.parse().ok()?;
        let mut frac_units = 0u64;
        for (i, b) in frac.bytes().enumerate() {
            frac_units += (b - b'0') as u64 * 10u64.pow(5 - i as u32);
        }
        Some(Decimal(whole * Self::SCALE + frac_units))
    }

    fn lit(s: &str) -> Decimal {
        Decimal::parse(s).expect("valid decimal literal")
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / Self::SCALE as f64
    }
}

impl std::ops::Add for Decimal {
    type Output = Decimal;
    fn add(self, rhs: Decimal) -> Decimal {
        Decimal(self.0 + rhs.0)
    }
}

impl std::iter::Sum for Decimal {
    fn sum<I: Iterator<Item = Decimal>>(iter: I) -> Decimal {
        iter.fold(Decimal::default(), |a, b| a + b)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / Self::SCALE;
        let frac = format!("{:06}", self.0 % Self::SCALE);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            write!(f, "{whole}")
        } else {
            write!(f, "{whole}.{frac}")
        }
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn independence_ratio() -> f64 {
    Decimal::lit(INDEPENDENCE_RATIO).to_f64()
}

pub fn joint_bound_c1_threshold() -> f64 {
    Decimal::lit(JOINT_BOUND_C1_THRESHOLD).to_f64()
}

pub fn b124() -> f64 {
    Decimal::lit(B124).to_f64()
}

/// `ln(m!)`.
pub fn log_factorial(m: u64) -> f64 {
    libm::lgamma(m as f64 + 1.0)
}

fn log_binomial(a: u64, b: u64) -> f64 {
    debug_assert!(b <= a);
    log_factorial(a) - log_factorial(b) - log_factorial(a - b)
}

/// `ln(m!!)` for odd `m`, via `(2t-1)!! = (2t)! / (2^t t!)`.
pub fn log_double_factorial_odd(m: u64) -> Result<f64, BoundsError> {
    if m.is_multiple_of(2) {
        return Err(BoundsError::EvenArgument(m));
    }
    let t = m.div_ceil(2);
    Ok(log_factorial(2 * t) - t as f64 * std::f64::consts::LN_2 - log_factorial(t))
}

/// `ln((2t-1)!!)` with the empty product `(-1)!! = 1` at `t = 0`.
fn log_perfect_matchings(points: u64) -> f64 {
    debug_assert!(points.is_multiple_of(2));
    if points == 0 {
        0.0
    } else {
        log_double_factorial_odd(points - 1).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StirlingInterval {
    pub lower: f64,
    pub upper: f64,
}

impl StirlingInterval {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// Bounds on `ln(n!)`: `ln(sqrt(2 pi n) (n/e)^n)` and that plus `1/(12n)`.
pub fn stirling_interval(n: u64) -> StirlingInterval {
    assert!(n >= 1, "Stirling interval needs n >= 1");
    let nf = n as f64;
    let lower = 0.5 * (2.0 * std::f64::consts::PI * nf).ln() + nf * nf.ln() - nf;
    StirlingInterval { lower, upper: lower + 1.0 / (12.0 * nf) }
}

fn pow2(k: u32) -> f64 {
    (1u64 << k) as f64
}

/// `x ln x`, with the limit value 0 at `x = 0`.
fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Admissible upper end of the density interval.
pub fn admissible_upper(parity: Parity, k: u32) -> f64 {
    match parity {
        Parity::Even => 1.0 / (3.0 * pow2(k) - 2.0),
        Parity::Odd => 1.0 / (4.0 * pow2(k) - 2.0),
    }
}

/// Log rate without domain checks; `x = 0` evaluates to the limit 0.
fn log_rate_raw(parity: Parity, x: f64, k: u32) -> f64 {
    let p = pow2(k);
    match parity {
        Parity::Even => {
            let outer = 1.0 - (3.0 * p - 2.0) * x;
            (1.5 - (3.0 * p - 3.0) * x) * (1.0 - (2.0 * p - 2.0) * x).ln() - x_ln_x(x) - outer * outer.ln()
        }
        Parity::Odd => {
            let inner = 1.0 - (3.0 * p - 2.0) * x;
            let outer = 1.0 - (4.0 * p - 2.0) * x;
            (2.0 - (6.0 * p - 4.0) * x) * inner.ln() - x_ln_x(x) - (1.5 - (6.0 * p - 3.0) * x) * outer.ln()
        }
    }
}

fn check_rate_domain(parity: Parity, x: f64, k: u32) -> Result<(), BoundsError> {
    let function = parity.function_name();
    if k == 0 {
        return Err(BoundsError::ZeroDepth);
    }
    let factor = if x.is_nan() || x <= 0.0 {
        Some("x")
    } else if x >= admissible_upper(parity, k) {
        Some(match parity {
            Parity::Even => "1 - (3*2^k - 2)x",
            Parity::Odd => "1 - (4*2^k - 2)x",
        })
    } else {
        None
    };
    match factor {
        Some(factor) => Err(BoundsError::OutOfDomain { function, x, k, factor }),
        None => Ok(()),
    }
}

/// `ln f(x, k)` on `0 < x < 1/(3*2^k - 2)`.
pub fn log_f_even(x: f64, k: u32) -> Result<f64, BoundsError> {
    check_rate_domain(Parity::Even, x, k)?;
    Ok(log_rate_raw(Parity::Even, x, k))
}

pub fn f_even(x: f64, k: u32) -> Result<f64, BoundsError> {
    log_f_even(x, k).map(f64::exp)
}

/// `ln h(x, k)` on `0 < x < 1/(4*2^k - 2)`.
pub fn log_h_odd(x: f64, k: u32) -> Result<f64, BoundsError> {
    check_rate_domain(Parity::Odd, x, k)?;
    Ok(log_rate_raw(Parity::Odd, x, k))
}

pub fn h_odd(x: f64, k: u32) -> Result<f64, BoundsError> {
    log_h_odd(x, k).map(f64::exp)
}

pub fn rate(parity: Parity, x: f64, k: u32) -> Result<f64, BoundsError> {
    match parity {
        Parity::Even => f_even(x, k),
        Parity::Odd => h_odd(x, k),
    }
}

/// Integer set size `m = x n`, rejecting non-integral products.
pub fn integral_count(n: u64, x: f64) -> Result<u64, BoundsError> {
    let product = x * n as f64;
    let m = product.round();
    if (product - m).abs() > 1e-9 * product.abs().max(1.0) || m < 0.0 {
        return Err(BoundsError::NonIntegral { n, x, product });
    }
    Ok(m as u64)
}

/// Nearest integral count to `x n` and the density shift `m/n - x` it causes.
pub fn rounded_count(n: u64, x: f64) -> (u64, f64) {
    let m = (x * n as f64).round().max(0.0) as u64;
    (m, m as f64 / n as f64 - x)
}

/// Validated integer shape shared by the `q` and `r` evaluators.
struct CountShape {
    n: u64,
    k: u32,
    m: u64,
}

impl CountShape {
    fn new(parity: Parity, n: u64, k: u32, x: f64) -> Result<Self, BoundsError> {
        if n < 2 || n % 2 == 1 {
            return Err(BoundsError::BadVertexCount(n));
        }
        if k == 0 {
            return Err(BoundsError::ZeroDepth);
        }
        let m = integral_count(n, x)?;
        let reach = match parity {
            Parity::Even => 3 * (1u64 << k) - 2,
            Parity::Odd => 4 * (1u64 << k) - 2,
        };
        if m == 0 || reach * m >= n {
            // Same diagnostic as the rate function at the offending end.
            let probe = if m == 0 { 0.0 } else { admissible_upper(parity, k) };
            check_rate_domain(parity, probe, k)?;
        }
        Ok(CountShape { n, k, m })
    }

    /// `sum_{i<k} ln[ C((1-(3*2^i-2)x)n, 3*2^i xn) (3*2^i xn)! 3^(3*2^i xn) ]`.
    fn log_tree_layers(&self) -> f64 {
        (0..self.k)
            .map(|i| {
                let layer = 3 * (1u64 << i) * self.m;
                let remaining = self.n - (3 * (1u64 << i) - 2) * self.m;
                log_binomial(remaining, layer) + log_factorial(layer) + layer as f64 * 3f64.ln()
            })
            .sum()
    }

    fn inside(&self) -> u64 {
        (3 * (1u64 << self.k) - 2) * self.m
    }

    fn per_vertex(&self, log_count: f64) -> f64 {
        (log_count - log_perfect_matchings(3 * self.n)) / self.n as f64
    }
}

/// `(1/n) ln(q(n,k,x) / (3n-1)!!)`, with `q` evaluated term by term from its
/// defining product of binomials, factorials and the final pairing count.
pub fn log_q_ratio_per_vertex(n: u64, k: u32, x: f64) -> Result<f64, BoundsError> {
    let s = CountShape::new(Parity::Even, n, k, x)?;
    let leftover = 3 * n - (6 * (1u64 << k) - 6) * s.m;
    let log_q = log_binomial(n, s.m) + log_perfect_matchings(leftover) + s.log_tree_layers();
    Ok(s.per_vertex(log_q))
}

/// `(1/n) ln(r(n,k,x) / (3n-1)!!)`, term by term from the definition of `r`.
pub fn log_r_ratio_per_vertex(n: u64, k: u32, x: f64) -> Result<f64, BoundsError> {
    let s = CountShape::new(Parity::Odd, n, k, x)?;
    let free_outside = 3 * (n - s.inside());
    let leftover = 3 * (n - (4 * (1u64 << k) - 2) * s.m);
    let log_r = log_binomial(n, s.m) + log_factorial(free_outside) - log_factorial(leftover)
        + log_perfect_matchings(leftover)
        + s.log_tree_layers();
    Ok(s.per_vertex(log_r))
}

/// Per-vertex log of the upper bound obtained from
/// `(3n-1)!! >= sqrt((3n)!)/(3n)` and `(2t-1)!! <= sqrt((2t)!)`.
pub fn log_q_upper_bound_per_vertex(n: u64, k: u32, x: f64) -> Result<f64, BoundsError> {
    let s = CountShape::new(Parity::Even, n, k, x)?;
    let leftover = 3 * n - (6 * (1u64 << k) - 6) * s.m;
    let v = (3.0 * n as f64).ln() + 0.5 * (log_factorial(leftover) - log_factorial(3 * n)) + closed_core(&s);
    Ok(v / n as f64)
}

pub fn log_r_upper_bound_per_vertex(n: u64, k: u32, x: f64) -> Result<f64, BoundsError> {
    let s = CountShape::new(Parity::Odd, n, k, x)?;
    let free_outside = 3 * (n - s.inside());
    let leftover = 3 * (n - (4 * (1u64 << k) - 2) * s.m);
    let v = (3.0 * n as f64).ln()
        + 0.5 * (log_factorial(leftover) - log_factorial(3 * n))
        + log_factorial(free_outside)
        - log_factorial(leftover)
        + closed_core(&s);
    Ok(v / n as f64)
}

/// `ln[ n! / ((xn)! ((1-(3*2^k-2)x)n)!) * 3^((3*2^k-3)xn) ]`.
fn closed_core(s: &CountShape) -> f64 {
    log_factorial(s.n) - log_factorial(s.m) - log_factorial(s.n - s.inside())
        + ((3 * (1u64 << s.k) - 3) * s.m) as f64 * 3f64.ln()
}

/// Density bound `1/(3*2^j - 2)` on `2j`-independent sets at girth >= 2j+2.
pub fn trivial_even_bound(j: u32) -> f64 {
    assert!(j >= 1);
    1.0 / (3.0 * pow2(j) - 2.0)
}

/// Threshold `0.45537/(2^(j+1) - 1)` for `(2j+1)`-independent sets.
pub fn trivial_odd_bound(j: u32) -> f64 {
    assert!(j >= 1);
    independence_ratio() / (pow2(j + 1) - 1.0)
}

/// One density constant `b_color`: its parity, tree depth, density and the
/// cap the rate function must stay under.
#[derive(Debug, Clone, Copy)]
pub struct DensityConstant {
    pub parity: Parity,
    pub k: u32,
    pub density: &'static str,
    pub cap: &'static str,
}

impl DensityConstant {
    pub fn color(&self) -> u32 {
        self.parity.color(self.k)
    }

    pub fn density(&self) -> Decimal {
        Decimal::lit(self.density)
    }
}

const fn dc(parity: Parity, k: u32, density: &'static str, cap: &'static str) -> DensityConstant {
    DensityConstant { parity, k, density, cap }
}

/// `b_2, b_4, ..., b_10` and `b_3, b_5, ..., b_11`.
pub const DENSITY_CONSTANTS: [DensityConstant; 10] = [
    dc(Parity::Even, 1, "0.236", "0.9964"),
    dc(Parity::Even, 2, "0.082", "0.9977"),
    dc(Parity::Even, 3, "0.03", "0.9981"),
    dc(Parity::Even, 4, "0.011", "0.996"),
    dc(Parity::Even, 5, "0.004", "0.995"),
    dc(Parity::Odd, 1, "0.1394", "0.9974"),
    dc(Parity::Odd, 2, "0.05", "0.9985"),
    dc(Parity::Odd, 3, "0.0182", "0.9973"),
    dc(Parity::Odd, 4, "0.0063", "0.9986"),
    dc(Parity::Odd, 5, "0.0022", "0.9979"),
];

/// Colour classes whose densities are summed individually next to `b_{1,2,4}`.
pub const SEPARATE_CLASSES: [u32; 8] = [3, 5, 6, 7, 8, 9, 10, 11];

pub fn density_constant(color: u32) -> Option<&'static DensityConstant> {
    DENSITY_CONSTANTS.iter().find(|c| c.color() == color)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub family: Parity,
    pub color: u32,
    pub k: u32,
    pub x: f64,
    pub value: f64,
    pub paper_cap: f64,
    pub pass: bool,
}

/// Evaluates every density constant against its cap.
pub fn verify_paper_constants() -> Vec<BoundReport> {
    DENSITY_CONSTANTS
        .iter()
        .map(|c| {
            let x = c.density().to_f64();
            let cap = Decimal::lit(c.cap).to_f64();
            let value = rate(c.parity, x, c.k).unwrap_or(f64::NAN);
            BoundReport {
                family: c.parity,
                color: c.color(),
                k: c.k,
                x,
                value,
                paper_cap: cap,
                pass: value > 0.0 && value < cap,
            }
        })
        .collect()
}

/// Errors on the first row of [`verify_paper_constants`] that fails.
pub fn assert_paper_constants() -> Result<Vec<BoundReport>, BoundsError> {
    let rows = verify_paper_constants();
    if let Some(r) = rows.iter().find(|r| !r.pass) {
        return Err(BoundsError::ConstantFailed {
            function: r.family.function_name(),
            x: r.x,
            k: r.k,
            value: r.value,
            cap: r.paper_cap,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassBudget {
    pub color: u32,
    pub density: Decimal,
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetCertificate {
    pub k: u32,
    pub b124: Decimal,
    pub odd_b: Vec<ClassBudget>,
    /// Kept for reference; `b_2` and `b_4` are subsumed by `b124`.
    pub even_b: Vec<ClassBudget>,
    pub separate_classes: Vec<u32>,
    pub head_sum: Decimal,
    pub odd_tail_colors: Vec<u32>,
    pub odd_tail_sum: f64,
    pub odd_tail_cap: f64,
    pub even_tail_colors: Vec<u32>,
    pub even_tail_sum: f64,
    pub even_tail_cap: f64,
    pub total: f64,
    /// Colours in `1..=k` not accounted for by any term (expected empty).
    pub uncovered_colors: Vec<u32>,
}

impl BudgetCertificate {
    pub fn margin(&self) -> f64 {
        1.0 - self.total
    }
}

/// Density ledger for `k >= 12` colours: `b124 + sum_{j in J} b_j`, the odd
/// tail `sum_{j=6}^{ceil(k/2)-1} c_{2j+1}` and the even tail
/// `sum_{j=6}^{floor(k/2)} c_{2j}`, each checked against its geometric cap.
pub fn budget_certificate(k: u32) -> Result<BudgetCertificate, BoundsError> {
    if k < 12 {
        return Err(BoundsError::TargetTooSmall(k));
    }
    let budget = |color: u32| ClassBudget { color, density: density_constant(color).unwrap().density() };
    let odd_b: Vec<_> = [3, 5, 7, 9, 11].into_iter().map(budget).collect();
    let even_b: Vec<_> = [2, 4, 6, 8, 10].into_iter().map(budget).collect();
    let b124 = Decimal::lit(B124);
    let head_sum = b124 + SEPARATE_CLASSES.iter().map(|&c| budget(c).density).sum::<Decimal>();

    let odd_js: Vec<u32> = (6..k.div_ceil(2)).collect();
    let even_js: Vec<u32> = (6..=k / 2).collect();
    let odd_tail_sum: f64 = odd_js.iter().map(|&j| trivial_odd_bound(j)).sum();
    let even_tail_sum: f64 = even_js.iter().map(|&j| trivial_even_bound(j)).sum();
    // Geometric majorants: first term times sum 2^-i.
    let odd_tail_cap = 2.0 * trivial_odd_bound(6);
    let even_tail_cap = 2.0 * trivial_even_bound(6);
    if odd_tail_sum >= odd_tail_cap {
        return Err(BoundsError::TailExceedsCap { which: "odd", sum: odd_tail_sum, cap: odd_tail_cap });
    }
    if even_tail_sum >= even_tail_cap {
        return Err(BoundsError::TailExceedsCap { which: "even", sum: even_tail_sum, cap: even_tail_cap });
    }
    let total = head_sum.to_f64() + odd_tail_cap + even_tail_cap;
    if total >= 1.0 {
        return Err(BoundsError::BudgetExceeded(total));
    }

    let odd_tail_colors: Vec<u32> = odd_js.iter().map(|j| 2 * j + 1).collect();
    let even_tail_colors: Vec<u32> = even_js.iter().map(|j| 2 * j).collect();
    let covered: Vec<u32> = [1, 2, 4]
        .into_iter()
        .chain(SEPARATE_CLASSES)
        .chain(odd_tail_colors.iter().copied())
        .chain(even_tail_colors.iter().copied())
        .collect();
    let uncovered_colors = (1..=k).filter(|c| !covered.contains(c)).collect();

    Ok(BudgetCertificate {
        k,
        b124,
        odd_b,
        even_b,
        separate_classes: SEPARATE_CLASSES.to_vec(),
        head_sum,
        odd_tail_colors,
        odd_tail_sum,
        odd_tail_cap,
        even_tail_colors,
        even_tail_sum,
        even_tail_cap,
        total,
        uncovered_colors,
    })
}

const BISECTION_TOLERANCE: f64 = 1e-12;
const BISECTION_MAX_ITERS: usize = 200;
const PROBE_POINTS: usize = 4096;

/// Smallest density `x*` such that the rate function stays below `cap` on
/// `(x*, upper)`. The rate functions rise above 1 just right of 0 and fall
/// below it near the upper end of their domain; the search samples the
/// interval to locate the last crossing, then bisects it.
pub fn threshold_search(k: u32, parity: Parity, cap: f64) -> Result<f64, BoundsError> {
    if !(cap > 0.0 && cap <= 1.0) {
        return Err(BoundsError::BadCap(cap));
    }
    if k == 0 {
        return Err(BoundsError::ZeroDepth);
    }
    let upper = admissible_upper(parity, k);
    let log_cap = cap.ln();
    let no_crossing = || BoundsError::NoCrossing { function: parity.function_name(), k, cap };
    let probe = |x: f64| log_rate_raw(parity, x, k);
    let grid: Vec<f64> = (0..PROBE_POINTS).map(|i| upper * i as f64 / PROBE_POINTS as f64).collect();
    let last_above = grid.iter().rposition(|&x| probe(x) >= log_cap).ok_or_else(no_crossing)?;
    if last_above + 1 >= grid.len() {
        return Err(no_crossing());
    }
    let (mut lo, mut hi) = (grid[last_above], grid[last_above + 1]);
    for _ in 0..BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if probe(mid) >= log_cap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value = probe(hi).exp();
    if (value - cap).abs() > BISECTION_TOLERANCE {
        return Err(no_crossing());
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact `ln(m!!)` for odd `m` by summing logs of the factors.
    fn log_df_by_product(m: u64) -> f64 {
        (1..=m).step_by(2).map(|v| (v as f64).ln()).sum()
    }

    #[test]
    fn double_factorial_matches_products() {
        assert!((log_double_factorial_odd(5).unwrap() - 15f64.ln()).abs() < 1e-13);
        assert!(log_double_factorial_odd(1).unwrap().abs() < 1e-14);
        assert!((log_double_factorial_odd(11).unwrap() - 10395f64.ln()).abs() < 1e-12);
        for m in (3..=39).step_by(2) {
            let exact = log_df_by_product(m);
            let got = log_double_factorial_odd(m).unwrap();
            assert!(((got - exact) / exact).abs() <= 1e-12, "m = {m}");
        }
        assert_eq!(log_double_factorial_odd(4), Err(BoundsError::EvenArgument(4)));
    }

    #[test]
    fn stirling_examples() {
        let one = stirling_interval(1);
        assert!((one.lower - -0.081061).abs() < 1e-5 && (one.upper - 0.002272).abs() < 1e-5);
        assert!(one.contains(0.0));
        let ten = stirling_interval(10);
        assert!(ten.contains(3_628_800f64.ln()));
        assert!((ten.upper - ten.lower - 1.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn stirling_sandwich_up_to_170() {
        let mut exact = 0.0;
        for n in 1..=170u64 {
            exact += (n as f64).ln();
            let s = stirling_interval(n);
            assert!(s.lower <= exact + 1e-12 && exact <= s.upper + 1e-12, "n = {n}");
        }
    }

    #[test]
    fn rate_function_examples() {
        let f = f_even(0.236, 1).unwrap();
        assert!(f > 0.0 && f < 0.9964);
        let f5 = f_even(0.004, 5).unwrap();
        assert!(f5 > 0.0 && f5 < 0.995);
        let h = h_odd(0.1394, 1).unwrap();
        assert!(h > 0.0 && h < 0.9974);
        let h5 = h_odd(0.0022, 5).unwrap();
        assert!(h5 > 0.0 && h5 < 0.9979);
        for k in 1..=5 {
            assert!((f_even(1e-12, k).unwrap() - 1.0).abs() < 1e-9);
            assert!((h_odd(1e-12, k).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rate_function_domain() {
        assert!(matches!(f_even(0.0, 1), Err(BoundsError::OutOfDomain { factor: "x", .. })));
        assert!(matches!(f_even(0.25, 1), Err(BoundsError::OutOfDomain { factor: "1 - (3*2^k - 2)x", .. })));
        assert!(matches!(h_odd(1.0 / 6.0, 1), Err(BoundsError::OutOfDomain { .. })));
        assert!(h_odd(1.0 / 6.0 - 1e-9, 1).unwrap().is_finite());
        assert_eq!(f_even(0.1, 0), Err(BoundsError::ZeroDepth));
    }

    #[test]
    fn trivial_bounds() {
        assert_eq!(trivial_even_bound(1), 0.25);
        assert_eq!(trivial_even_bound(2), 0.1);
        assert_eq!(trivial_even_bound(6), 1.0 / 190.0);
        assert!((trivial_odd_bound(1) - 0.15179).abs() < 1e-5);
        assert_eq!(trivial_odd_bound(6), 0.45537 / 127.0);
        assert!((1..20).all(|j| trivial_odd_bound(j + 1) < trivial_odd_bound(j)));
    }

    #[test]
    fn paper_constants_all_pass() {
        let rows = assert_paper_constants().unwrap();
        assert_eq!(rows.len(), 10);
        let h9 = rows.iter().find(|r| r.color == 9).unwrap();
        assert!(h9.value < 0.9986);
    }

    #[test]
    fn decimal_arithmetic_is_exact() {
        let d = Decimal::parse("0.1394").unwrap() + Decimal::parse("0.05").unwrap();
        assert_eq!(d.to_string(), "0.1894");
        assert_eq!(Decimal::parse("1").unwrap().to_string(), "1");
        assert!(Decimal::parse("0.1234567").is_none());
        assert!(Decimal::parse("-1").is_none());
    }

    #[test]
    fn budget_certificate_k12() {
        let c = budget_certificate(12).unwrap();
        assert_eq!(c.head_sum.to_string(), "0.9785");
        assert_eq!(c.even_tail_colors, vec![12]);
        assert!(c.odd_tail_colors.is_empty());
        assert!((c.even_tail_sum - 1.0 / 190.0).abs() < 1e-15);
        assert!((c.total - 0.996197).abs() < 1e-6);
        assert!(c.uncovered_colors.is_empty());
        assert_eq!(budget_certificate(11).unwrap_err(), BoundsError::TargetTooSmall(11));
    }

    #[test]
    fn budget_tails_cover_every_colour() {
        for k in 12..=40 {
            let c = budget_certificate(k).unwrap();
            assert!(c.uncovered_colors.is_empty(), "k = {k}");
            assert!(c.odd_tail_sum < c.odd_tail_cap && c.even_tail_sum < c.even_tail_cap);
        }
    }

    #[test]
    fn q_and_r_need_integral_counts() {
        assert!(log_q_ratio_per_vertex(1000, 1, 0.236).is_ok());
        assert!(matches!(log_r_ratio_per_vertex(1000, 1, 0.1394), Err(BoundsError::NonIntegral { .. })));
        assert_eq!(log_r_ratio_per_vertex(1000, 0, 0.1), Err(BoundsError::ZeroDepth));
        assert_eq!(log_q_ratio_per_vertex(999, 1, 0.1), Err(BoundsError::BadVertexCount(999)));
        assert!(matches!(log_q_ratio_per_vertex(1000, 1, 0.25), Err(BoundsError::OutOfDomain { .. })));
        assert_eq!(rounded_count(1000, 0.1394), (139, 0.139 - 0.1394));
    }

    #[test]
    fn q_ratio_tracks_rate_function() {
        let at = |n| (log_q_ratio_per_vertex(n, 1, 0.236).unwrap() - log_f_even(0.236, 1).unwrap()).abs();
        assert!(at(10_000) < 0.01);
        assert!(at(100_000) < at(10_000));
        let r_at = |n| (log_r_ratio_per_vertex(n, 1, 0.1394).unwrap() - log_h_odd(0.1394, 1).unwrap()).abs();
        assert!(r_at(10_000) < 0.01);
        assert!(r_at(100_000) < r_at(10_000));
    }

    #[test]
    fn upper_bound_forms_dominate() {
        for &(n, k, x) in &[(1000, 1, 0.236), (10_000, 2, 0.082), (2000, 3, 0.03), (100_000, 1, 0.1)] {
            assert!(log_q_upper_bound_per_vertex(n, k, x).unwrap() >= log_q_ratio_per_vertex(n, k, x).unwrap());
        }
        for &(n, k, x) in &[(10_000, 1, 0.1394), (1000, 2, 0.05), (10_000, 3, 0.0182)] {
            assert!(log_r_upper_bound_per_vertex(n, k, x).unwrap() >= log_r_ratio_per_vertex(n, k, x).unwrap());
        }
    }

    #[test]
    fn threshold_search_examples() {
        let even = threshold_search(1, Parity::Even, 1.0).unwrap();
        assert!(even <= 0.236 && f_even(0.236, 1).unwrap() < 1.0);
        let odd = threshold_search(1, Parity::Odd, 1.0).unwrap();
        assert!(odd <= 0.1394);
        for c in DENSITY_CONSTANTS {
            let x = c.density().to_f64();
            let cap = rate(c.parity, x, c.k).unwrap();
            let found = threshold_search(c.k, c.parity, cap).unwrap();
            assert!((found - x).abs() < 1e-9, "{:?}: {found}", c);
        }
        assert!(matches!(threshold_search(1, Parity::Even, 1e-9), Err(BoundsError::NoCrossing { .. })));
        assert_eq!(threshold_search(1, Parity::Even, 1.5), Err(BoundsError::BadCap(1.5)));
    }
}
