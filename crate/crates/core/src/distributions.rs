//! Generating polynomials of statistics over `S_m` and the identities they
//! satisfy.
//!
//! All statistics of a permutation are computed during a single sweep of
//! the group. Class-by-class comparisons bucket permutations by a key (for
//! instance `(Des_q(p^-1), Del_q(p^-1))`) in that same sweep.

use std::cell::OnceCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::covering::{f_q, fiber_size, image_counts};
use crate::error::{Error, Result};
use crate::numbers::{bell_q, c_q, factorial, h_q_count, stirling2};
use crate::patterns::{avoids_by_descent_sets, contains_pat_q};
use crate::perm::{Permutation, PositionSet};
use crate::poly::{Exponent, Polynomial};
use crate::qstats::{del_set_q, des_set_q, ell_q, inv_q, Q};
use crate::sweep::{all_permutations, sweep, SweepConfig};

/// Statistics a distribution can track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    InvQ,
    EllQ,
    RmajQ,
    MajQ,
    DesQ,
    DelQ,
    DesQOfInverse,
    RmajQOfInverse,
}

impl Statistic {
    pub const ALL: [Statistic; 8] = [
        Statistic::InvQ,
        Statistic::EllQ,
        Statistic::RmajQ,
        Statistic::MajQ,
        Statistic::DesQ,
        Statistic::DelQ,
        Statistic::DesQOfInverse,
        Statistic::RmajQOfInverse,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statistic::InvQ => "inv_q",
            Statistic::EllQ => "ell_q",
            Statistic::RmajQ => "rmaj_q",
            Statistic::MajQ => "maj_q",
            Statistic::DesQ => "des_q",
            Statistic::DelQ => "del_q",
            Statistic::DesQOfInverse => "des_q_of_inverse",
            Statistic::RmajQOfInverse => "rmaj_q_of_inverse",
        }
    }

    fn value(self, view: &PermView<'_>) -> u32 {
        let v = match self {
            Statistic::InvQ => inv_q(view.perm, view.q),
            Statistic::EllQ => ell_q(view.perm, view.q),
            Statistic::RmajQ => rmaj(view.des(), view.perm.degree()),
            Statistic::MajQ => view.des().iter().map(|&i| i as u64).sum(),
            Statistic::DesQ => view.des().len() as u64,
            Statistic::DelQ => view.del().len() as u64,
            Statistic::DesQOfInverse => view.inv_des().len() as u64,
            Statistic::RmajQOfInverse => rmaj(view.inv_des(), view.perm.degree()),
        };
        v as u32
    }
}

fn rmaj(des: &PositionSet, m: usize) -> u64 {
    des.iter().map(|&i| (m - i) as u64).sum()
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.id() == s.trim())
            .ok_or_else(|| Error::UnknownStatistic(s.to_string()))
    }
}

/// Parses a comma-separated list of statistic ids.
pub fn parse_statistics(s: &str) -> Result<Vec<Statistic>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// A permutation with its q-descent data computed on demand.
struct PermView<'a> {
    perm: &'a Permutation,
    q: Q,
    inverse: OnceCell<Permutation>,
    del: OnceCell<PositionSet>,
    des: OnceCell<PositionSet>,
    inv_del: OnceCell<PositionSet>,
    inv_des: OnceCell<PositionSet>,
}

impl<'a> PermView<'a> {
    fn new(perm: &'a Permutation, q: Q) -> Self {
        PermView {
            perm,
            q,
            inverse: OnceCell::new(),
            del: OnceCell::new(),
            des: OnceCell::new(),
            inv_del: OnceCell::new(),
            inv_des: OnceCell::new(),
        }
    }

    fn inverse(&self) -> &Permutation {
        self.inverse.get_or_init(|| self.perm.inverse())
    }

    fn del(&self) -> &PositionSet {
        self.del.get_or_init(|| del_set_q(self.perm, self.q))
    }

    fn des(&self) -> &PositionSet {
        self.des.get_or_init(|| des_set_q(self.perm, self.q))
    }

    fn inv_del(&self) -> &PositionSet {
        self.inv_del.get_or_init(|| del_set_q(self.inverse(), self.q))
    }

    fn inv_des(&self) -> &PositionSet {
        self.inv_des.get_or_init(|| des_set_q(self.inverse(), self.q))
    }

    fn inverse_avoids(&self) -> bool {
        shifted_down(self.inv_del()) == *self.inv_des()
    }

    fn exponent(&self, stats: &[Statistic]) -> Exponent {
        stats.iter().map(|s| s.value(self)).collect()
    }
}

fn shifted_down(set: &PositionSet) -> PositionSet {
    set.iter().map(|i| i - 1).collect()
}

/// Which permutations a distribution sums over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterSpec {
    All,
    /// `p` avoids `Pat(q)`.
    AvoidQ,
    /// `p^-1` avoids `Pat(q)`.
    InverseAvoidQ,
    /// `Des_q(p^-1) = B`.
    InvDesEquals(PositionSet),
    /// `Des_q(p^-1) = B1` and `Del_q(p^-1) = B2`.
    InvDesDelEquals(PositionSet, PositionSet),
}

impl FilterSpec {
    pub fn validate(&self, m: usize, q: Q) -> Result<()> {
        let q = q.get();
        let check = |set: &PositionSet, lo: usize, hi: usize, name: &str| {
            if set.iter().all(|&i| i >= lo && i <= hi) {
                Ok(())
            } else {
                Err(Error::InvalidFilter(format!(
                    "{name} = {} must lie in [{lo}, {hi}]",
                    fmt_set(set)
                )))
            }
        };
        match self {
            FilterSpec::InvDesEquals(b) => check(b, q, m.saturating_sub(1), "B"),
            FilterSpec::InvDesDelEquals(b1, b2) => {
                check(b1, q, m.saturating_sub(1), "B1")?;
                check(b2, q + 1, m, "B2")
            }
            _ => Ok(()),
        }
    }

    fn accepts(&self, view: &PermView<'_>) -> bool {
        match self {
            FilterSpec::All => true,
            FilterSpec::AvoidQ => shifted_down(view.del()) == *view.des(),
            FilterSpec::InverseAvoidQ => view.inverse_avoids(),
            FilterSpec::InvDesEquals(b) => view.inv_des() == b,
            FilterSpec::InvDesDelEquals(b1, b2) => view.inv_des() == b1 && view.inv_del() == b2,
        }
    }
}

pub fn fmt_set(set: &PositionSet) -> String {
    format!(
        "{{{}}}",
        set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    )
}

fn parse_set(s: &str) -> Result<PositionSet> {
    s.trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidFilter(format!("bad position `{t}`")))
        })
        .collect()
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plain = |s: &PositionSet| s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        match self {
            FilterSpec::All => f.write_str("all"),
            FilterSpec::AvoidQ => f.write_str("avoid"),
            FilterSpec::InverseAvoidQ => f.write_str("inverse-avoid"),
            FilterSpec::InvDesEquals(b) => write!(f, "inv-des:{}", plain(b)),
            FilterSpec::InvDesDelEquals(b1, b2) => write!(f, "inv-des-del:{}:{}", plain(b1), plain(b2)),
        }
    }
}

impl FromStr for FilterSpec {
    type Err = Error;

    /// `all`, `avoid`, `inverse-avoid`, `inv-des:<B>` or
    /// `inv-des-del:<B1>:<B2>`, sets written as comma lists (possibly empty).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match (head, rest.as_slice()) {
            ("all", []) => Ok(FilterSpec::All),
            ("avoid", []) => Ok(FilterSpec::AvoidQ),
            ("inverse-avoid", []) => Ok(FilterSpec::InverseAvoidQ),
            ("inv-des", [b]) => Ok(FilterSpec::InvDesEquals(parse_set(b)?)),
            ("inv-des-del", [b1, b2]) => {
                Ok(FilterSpec::InvDesDelEquals(parse_set(b1)?, parse_set(b2)?))
            }
            _ => Err(Error::InvalidFilter(s.to_string())),
        }
    }
}

type Counts = HashMap<Exponent, u64>;

fn merge_counts(mut a: Counts, b: Counts) -> Counts {
    for (e, c) in b {
        *a.entry(e).or_insert(0) += c;
    }
    a
}

/// `sum_{p in S_m, filter(p)} prod_i t_i^{stat_i(p)}`.
pub fn distribution(
    m: usize,
    q: Q,
    stats: &[Statistic],
    filter: &FilterSpec,
    config: SweepConfig,
) -> Result<Polynomial> {
    distribution_over(m, q, stats, filter, false, config)
}

/// As [`distribution`], summing over the even permutations only.
pub fn distribution_even(
    m: usize,
    q: Q,
    stats: &[Statistic],
    filter: &FilterSpec,
    config: SweepConfig,
) -> Result<Polynomial> {
    distribution_over(m, q, stats, filter, true, config)
}

fn distribution_over(
    m: usize,
    q: Q,
    stats: &[Statistic],
    filter: &FilterSpec,
    even_only: bool,
    config: SweepConfig,
) -> Result<Polynomial> {
    if m == 0 {
        return Err(Error::OutOfRange("degree must be at least 1".into()));
    }
    filter.validate(m, q)?;
    let counts = sweep(
        m,
        config,
        Counts::new,
        |acc, p| {
            if even_only && !p.is_even() {
                return;
            }
            let view = PermView::new(p, q);
            if filter.accepts(&view) {
                *acc.entry(view.exponent(stats)).or_insert(0) += 1;
            }
        },
        merge_counts,
    );
    Ok(Polynomial::from_counts(stats.len(), counts))
}

/// `q! prod_{i=1}^{n-1} (1 + t1 + ... + t1^{i-1} + q t1^i t2)`.
pub fn qmac2_product(n: usize, q: Q) -> Polynomial {
    assert!(n >= 1);
    let mut acc = Polynomial::constant(2, factorial(q.get()));
    for i in 1..n {
        let mut factor = Polynomial::zero(2);
        for r in 0..i {
            factor.add_term(vec![r as u32, 0], BigUint::one());
        }
        factor.add_term(vec![i as u32, 1], BigUint::from(q.get()));
        acc = acc.mul(&factor);
    }
    acc
}

/// The univariate product `q! (1 + qt)(1 + t + qt^2) ...`.
pub fn qmac_product(n: usize, q: Q) -> Polynomial {
    qmac2_product(n, q).set_one(1)
}

/// One class of a two-sided comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub size: u64,
    pub left: Polynomial,
    pub right: Polynomial,
}

impl ClassRow {
    pub fn equal(&self) -> bool {
        self.left == self.right
    }
}

/// Bucket key: a list of position sets.
pub type ClassKey = Vec<PositionSet>;

/// Which class (if any) a permutation is counted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classify {
    Single,
    InverseAvoiders,
    ByInvDes,
    ByInvDesDel,
    InverseAvoidersByInvDes,
}

impl Classify {
    fn key(self, view: &PermView<'_>) -> Option<ClassKey> {
        match self {
            Classify::Single => Some(vec![]),
            Classify::InverseAvoiders => view.inverse_avoids().then(Vec::new),
            Classify::ByInvDes => Some(vec![view.inv_des().clone()]),
            Classify::ByInvDesDel => Some(vec![view.inv_des().clone(), view.inv_del().clone()]),
            Classify::InverseAvoidersByInvDes => view
                .inverse_avoids()
                .then(|| vec![view.inv_des().clone()]),
        }
    }
}

/// Buckets `S_m` by `classify` and accumulates the `left` and `right`
/// statistic polynomials per bucket.
pub fn compare_classes(
    m: usize,
    q: Q,
    classify: Classify,
    left: &[Statistic],
    right: &[Statistic],
    config: SweepConfig,
) -> BTreeMap<ClassKey, ClassRow> {
    type Acc = HashMap<ClassKey, (u64, Counts, Counts)>;
    let buckets: Acc = sweep(
        m,
        config,
        Acc::new,
        |acc, p| {
            let view = PermView::new(p, q);
            if let Some(key) = classify.key(&view) {
                let entry = acc.entry(key).or_default();
                entry.0 += 1;
                *entry.1.entry(view.exponent(left)).or_insert(0) += 1;
                *entry.2.entry(view.exponent(right)).or_insert(0) += 1;
            }
        },
        |mut a, b| {
            for (k, (n, l, r)) in b {
                let e = a.entry(k).or_default();
                e.0 += n;
                e.1 = merge_counts(std::mem::take(&mut e.1), l);
                e.2 = merge_counts(std::mem::take(&mut e.2), r);
            }
            a
        },
    );
    buckets
        .into_iter()
        .map(|(k, (size, l, r))| {
            (
                k,
                ClassRow {
                    size,
                    left: Polynomial::from_counts(left.len(), l),
                    right: Polynomial::from_counts(right.len(), r),
                },
            )
        })
        .collect()
}

/// Per-class table for the `(Des_q(p^-1), Del_q(p^-1))` equidistribution of
/// `inv_q` (left) and `rmaj_q` (right).
pub fn inverse_class_table(m: usize, q: Q, config: SweepConfig) -> BTreeMap<ClassKey, ClassRow> {
    compare_classes(
        m,
        q,
        Classify::ByInvDesDel,
        &[Statistic::InvQ],
        &[Statistic::RmajQ],
        config,
    )
}

/// Identities the verifier knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    Qmac,
    Qmac2,
    FsQ2,
    FsQ,
    Q6,
    Qs5,
    Q5,
    QRosel1,
    QRosel2,
    Fiber,
    Nu1,
    Qpro,
    Qc3,
    QAvoid,
    Cover1,
    FPairs,
}

impl Theorem {
    pub const ALL: [Theorem; 16] = [
        Theorem::Qmac,
        Theorem::Qmac2,
        Theorem::FsQ2,
        Theorem::FsQ,
        Theorem::Q6,
        Theorem::Qs5,
        Theorem::Q5,
        Theorem::QRosel1,
        Theorem::QRosel2,
        Theorem::Fiber,
        Theorem::Nu1,
        Theorem::Qpro,
        Theorem::Qc3,
        Theorem::QAvoid,
        Theorem::Cover1,
        Theorem::FPairs,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Qmac => "qmac",
            Theorem::Qmac2 => "qmac2",
            Theorem::FsQ2 => "fs_q2",
            Theorem::FsQ => "fs_q",
            Theorem::Q6 => "q6",
            Theorem::Qs5 => "qs5",
            Theorem::Q5 => "q5",
            Theorem::QRosel1 => "q_rosel_1",
            Theorem::QRosel2 => "q_rosel_2",
            Theorem::Fiber => "fiber",
            Theorem::Nu1 => "nu1",
            Theorem::Qpro => "qpro",
            Theorem::Qc3 => "qc3",
            Theorem::QAvoid => "q_avoid",
            Theorem::Cover1 => "cover1",
            Theorem::FPairs => "f_pairs",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('-', "_");
        Theorem::ALL
            .into_iter()
            .find(|t| t.id() == norm)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First offending class or permutation of a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Permutation>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub n: usize,
    pub q: Q,
    pub m: usize,
    pub status: Status,
    /// Classes, permutations or values compared.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest degree `m = n + q - 1` that may be enumerated.
    pub budget: usize,
    pub sweep: SweepConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: 9,
            sweep: SweepConfig::default(),
        }
    }
}

/// Outcome of a single check: how much was compared and the first failure.
struct Outcome {
    checked: u64,
    witness: Option<Witness>,
}

impl Outcome {
    fn pass(checked: u64) -> Self {
        Outcome { checked, witness: None }
    }
}

fn poly_witness(class: Option<String>, detail: &str, left: &Polynomial, right: &Polynomial) -> Witness {
    Witness {
        class,
        permutation: None,
        detail: detail.to_string(),
        left: Some(left.to_string()),
        right: Some(right.to_string()),
    }
}

fn perm_witness(p: &Permutation, detail: String) -> Witness {
    Witness {
        class: None,
        permutation: Some(p.clone()),
        detail,
        left: None,
        right: None,
    }
}

fn value_witness(class: String, detail: &str, left: impl fmt::Display, right: impl fmt::Display) -> Witness {
    Witness {
        class: Some(class),
        permutation: None,
        detail: detail.to_string(),
        left: Some(left.to_string()),
        right: Some(right.to_string()),
    }
}

fn fmt_key(key: &ClassKey, names: &[&str]) -> String {
    key.iter()
        .zip(names)
        .map(|(s, n)| format!("{n}={}", fmt_set(s)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Exhaustively checks one identity at `m = n + q - 1`.
pub fn verify(theorem: Theorem, n: usize, q: Q, config: &VerifyConfig) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let m = n + q.get() - 1;
    if m > config.budget {
        return Err(Error::BudgetExceeded { m, budget: config.budget });
    }
    let cfg = config.sweep;
    let outcome = match theorem {
        Theorem::Qmac => check_product(m, n, q, false, cfg),
        Theorem::Qmac2 => check_product(m, n, q, true, cfg),
        Theorem::FsQ2 => check_classes(
            m,
            q,
            Classify::ByInvDesDel,
            &[Statistic::InvQ],
            &[Statistic::RmajQ],
            &["B1", "B2"],
            cfg,
        ),
        Theorem::FsQ => check_classes(
            m,
            q,
            Classify::ByInvDes,
            &[Statistic::InvQ],
            &[Statistic::RmajQ],
            &["B"],
            cfg,
        ),
        Theorem::Q6 => check_classes(
            m,
            q,
            Classify::InverseAvoidersByInvDes,
            &[Statistic::RmajQ],
            &[Statistic::InvQ],
            &["B"],
            cfg,
        ),
        Theorem::Qs5 => check_classes(
            m,
            q,
            Classify::InverseAvoiders,
            &[Statistic::RmajQ, Statistic::DesQOfInverse],
            &[Statistic::InvQ, Statistic::DesQOfInverse],
            &[],
            cfg,
        ),
        Theorem::Q5 => check_classes(
            m,
            q,
            Classify::InverseAvoiders,
            &[Statistic::RmajQ],
            &[Statistic::InvQ],
            &[],
            cfg,
        ),
        Theorem::QRosel1 => check_classes(
            m,
            q,
            Classify::Single,
            &[Statistic::InvQ, Statistic::DesQOfInverse],
            &[Statistic::RmajQ, Statistic::DesQOfInverse],
            &[],
            cfg,
        ),
        Theorem::QRosel2 => check_classes(
            m,
            q,
            Classify::Single,
            &[Statistic::InvQ, Statistic::RmajQOfInverse],
            &[Statistic::RmajQ, Statistic::RmajQOfInverse],
            &[],
            cfg,
        ),
        Theorem::Fiber => check_fibers(m, n, q, cfg),
        Theorem::Nu1 => check_nu1(m, n, q, cfg),
        Theorem::Qpro => check_qpro(m, n, q, cfg),
        Theorem::Qc3 => check_qc3(m, n, q, cfg),
        Theorem::QAvoid => check_per_permutation(m, cfg, |p| {
            let by_pattern = contains_pat_q(p, q).is_none();
            let by_sets = avoids_by_descent_sets(p, q);
            (by_pattern != by_sets).then(|| {
                format!("pattern criterion says avoids={by_pattern}, Del_q - 1 == Des_q is {by_sets}")
            })
        }),
        Theorem::Cover1 => check_per_permutation(m, cfg, |p| cover1_failure(p, q)),
        Theorem::FPairs => check_f_pairs(n, q, cfg),
    };
    Ok(VerificationReport {
        theorem,
        n,
        q,
        m,
        status: if outcome.witness.is_none() { Status::Pass } else { Status::Fail },
        checked: outcome.checked,
        witness: outcome.witness,
    })
}

fn check_product(m: usize, n: usize, q: Q, bivariate: bool, cfg: SweepConfig) -> Outcome {
    let (left, right, product) = if bivariate {
        (
            vec![Statistic::RmajQ, Statistic::DelQ],
            vec![Statistic::InvQ, Statistic::DelQ],
            qmac2_product(n, q),
        )
    } else {
        (vec![Statistic::RmajQ], vec![Statistic::InvQ], qmac_product(n, q))
    };
    let rows = compare_classes(m, q, Classify::Single, &left, &right, cfg);
    let row = &rows[&Vec::new()];
    if row.left != row.right {
        return Outcome {
            checked: 1,
            witness: Some(poly_witness(None, "rmaj_q and inv_q distributions differ", &row.left, &row.right)),
        };
    }
    if row.right != product {
        return Outcome {
            checked: 2,
            witness: Some(poly_witness(None, "inv_q distribution differs from the product formula", &row.right, &product)),
        };
    }
    Outcome::pass(2)
}

fn check_classes(
    m: usize,
    q: Q,
    classify: Classify,
    left: &[Statistic],
    right: &[Statistic],
    key_names: &[&str],
    cfg: SweepConfig,
) -> Outcome {
    let rows = compare_classes(m, q, classify, left, right, cfg);
    for (key, row) in &rows {
        if !row.equal() {
            let detail = format!(
                "[{}] vs [{}] differ",
                left.iter().map(|s| s.id()).collect::<Vec<_>>().join(","),
                right.iter().map(|s| s.id()).collect::<Vec<_>>().join(",")
            );
            let class = (!key.is_empty()).then(|| fmt_key(key, key_names));
            return Outcome {
                checked: rows.len() as u64,
                witness: Some(poly_witness(class, &detail, &row.left, &row.right)),
            };
        }
    }
    Outcome::pass(rows.len() as u64)
}

fn check_per_permutation<F>(m: usize, cfg: SweepConfig, failure: F) -> Outcome
where
    F: Fn(&Permutation) -> Option<String> + Sync,
{
    // first failure per shard, shards merged in lexicographic order
    let (checked, first) = sweep(
        m,
        cfg,
        || (0u64, None::<Witness>),
        |acc, p| {
            acc.0 += 1;
            if acc.1.is_none() {
                if let Some(detail) = failure(p) {
                    acc.1 = Some(perm_witness(p, detail));
                }
            }
        },
        |a, b| (a.0 + b.0, a.1.or(b.1)),
    );
    Outcome { checked, witness: first }
}

fn cover1_failure(p: &Permutation, q: Q) -> Option<String> {
    let shift = q.get() - 1;
    let image = f_q(p, q).expect("degree >= q");
    let down = |s: PositionSet| -> PositionSet { s.into_iter().map(|i| i - shift).collect() };
    if down(del_set_q(p, q)) != del_set_q(&image, Q::ONE) {
        return Some("Del_q(p) - (q-1) != Del_1(f_q(p))".into());
    }
    let des = des_set_q(p, q);
    let image_des = des_set_q(&image, Q::ONE);
    if down(des.clone()) != image_des {
        return Some("Des_q(p) - (q-1) != Des_1(f_q(p))".into());
    }
    let iq = inv_q(p, q);
    if iq != inv_q(&image, Q::ONE) || iq != ell_q(p, q) || iq != image.inversion_count() {
        return Some("inv_q(p), ell_q(p) and inv_1(f_q(p)) disagree".into());
    }
    if rmaj(&des, p.degree()) != rmaj(&image_des, image.degree()) {
        return Some("rmaj_q(p) != rmaj_1(f_q(p))".into());
    }
    None
}

fn check_fibers(m: usize, n: usize, q: Q, cfg: SweepConfig) -> Outcome {
    let counts = image_counts(m, q, cfg).expect("m >= q");
    let mut checked = 0;
    for base in all_permutations(n) {
        checked += 1;
        let got = counts.get(&base).copied().unwrap_or(0);
        let want = fiber_size(&base, q);
        if got != want {
            return Outcome {
                checked,
                witness: Some(Witness {
                    class: None,
                    permutation: Some(base),
                    detail: "fiber size differs from q! q^del_1".into(),
                    left: Some(got.to_string()),
                    right: Some(want.to_string()),
                }),
            };
        }
    }
    Outcome::pass(checked)
}

fn count_avoiders(m: usize, q: Q, cfg: SweepConfig) -> BTreeMap<u64, u64> {
    sweep(
        m,
        cfg,
        BTreeMap::new,
        |acc: &mut BTreeMap<u64, u64>, p| {
            let del = del_set_q(p, q);
            if shifted_down(&del) == des_set_q(p, q) {
                *acc.entry(del.len() as u64).or_insert(0) += 1;
            }
        },
        crate::covering::merge_counts,
    )
}

fn check_nu1(m: usize, n: usize, q: Q, cfg: SweepConfig) -> Outcome {
    let brute: u64 = count_avoiders(m, q, cfg).values().sum();
    let brute = BigUint::from(brute);
    let formula = factorial(q.get() - 1) * bell_q(n, q);
    let recurrence = h_q_count(m, q);
    let class = format!("h_{q}({m})");
    if brute != formula {
        return Outcome {
            checked: 1,
            witness: Some(value_witness(class, "enumerated avoiders != (q-1)! b_q(n)", brute, formula)),
        };
    }
    if recurrence != formula {
        return Outcome {
            checked: 2,
            witness: Some(value_witness(class, "h_q recurrence != (q-1)! b_q(n)", recurrence, formula)),
        };
    }
    Outcome::pass(2)
}

fn check_qpro(m: usize, n: usize, q: Q, cfg: SweepConfig) -> Outcome {
    let by_del = count_avoiders(m, q, cfg);
    let qq = q.get();
    let qf = factorial(qq - 1);
    let mut checked = 0;
    // refined counts; an avoider with del_q >= n would show up as an unmatched key
    for k in 1..=n.max(by_del.keys().map(|&d| d as usize + 1).max().unwrap_or(0)) {
        checked += 1;
        let got = BigUint::from(by_del.get(&(k as u64 - 1)).copied().unwrap_or(0));
        let want = &qf * num_traits::pow(BigUint::from(qq), k) * stirling2(n, k);
        if got != want {
            return Outcome {
                checked,
                witness: Some(value_witness(format!("k={k}"), "#avoiders with del_q = k-1 != (q-1)! q^k S(n,k)", got, want)),
            };
        }
    }
    // q * sum_{avoiders} q^{del_q} = (q-1)! b_{q^2}(n)
    checked += 1;
    let weighted: BigUint = by_del
        .iter()
        .map(|(&d, &c)| BigUint::from(c) * num_traits::pow(BigUint::from(qq), d as usize))
        .sum();
    let lhs = &weighted * BigUint::from(qq);
    let rhs = &qf * bell_q(n, Q::new(qq * qq).expect("q^2 >= 1"));
    if lhs != rhs {
        return Outcome {
            checked,
            witness: Some(value_witness("weighted".into(), "q * sum q^del_q != (q-1)! b_{q^2}(n)", lhs, rhs)),
        };
    }
    // q * sum_{p in S_n avoiding Pat(1)} q^{del_1(p)} = b_q(n)
    checked += 1;
    let base: BigUint = count_avoiders(n, Q::ONE, cfg)
        .iter()
        .map(|(&d, &c)| BigUint::from(c) * num_traits::pow(BigUint::from(qq), d as usize))
        .sum();
    let lhs = base * BigUint::from(qq);
    let rhs = bell_q(n, q);
    if lhs != rhs {
        return Outcome {
            checked,
            witness: Some(value_witness("weighted q=1".into(), "q * sum q^del_1 != b_q(n)", lhs, rhs)),
        };
    }
    Outcome::pass(checked)
}

fn check_qc3(m: usize, n: usize, q: Q, cfg: SweepConfig) -> Outcome {
    let by_del = sweep(
        m,
        cfg,
        BTreeMap::new,
        |acc: &mut BTreeMap<u64, u64>, p| {
            *acc.entry(del_set_q(p, q).len() as u64).or_insert(0) += 1;
        },
        crate::covering::merge_counts,
    );
    let top = n.max(by_del.keys().map(|&d| d as usize + 1).max().unwrap_or(0));
    for k in 1..=top {
        let got = BigUint::from(by_del.get(&(k as u64 - 1)).copied().unwrap_or(0));
        let want = if k <= n { c_q(n, k, q).expect("1 <= k <= n") } else { BigUint::default() };
        if got != want {
            return Outcome {
                checked: k as u64,
                witness: Some(value_witness(format!("k={k}"), "#{del_q = k-1} != c_q(n,k)", got, want)),
            };
        }
    }
    Outcome::pass(top as u64)
}

/// Pairs `(m_q, del_q)` summed over `S_{n+q-1}` against `q!` times the
/// `S_n` sum with `t2 -> q t2`; each fiber of `f_q` has `q! q^{del_1}` members.
pub fn f_pair_sides(n: usize, q: Q, stat: Statistic, cfg: SweepConfig) -> (Polynomial, Polynomial) {
    let m = n + q.get() - 1;
    let pair = [stat, Statistic::DelQ];
    let upstairs = distribution(m, q, &pair, &FilterSpec::All, cfg).expect("m >= 1");
    let downstairs = distribution(n, Q::ONE, &pair, &FilterSpec::All, cfg)
        .expect("n >= 1")
        .scale_variable(1, &BigUint::from(q.get()))
        .scale(&factorial(q.get()));
    (upstairs, downstairs)
}

/// The alternating analogue: the sum over `A_{n+q-1}` against `q!/2` times
/// the weighted `S_n` sum. Needs `q >= 2`.
pub fn alternating_f_pair_sides(
    n: usize,
    q: Q,
    stat: Statistic,
    cfg: SweepConfig,
) -> Result<(Polynomial, Polynomial)> {
    if q.get() < 2 {
        return Err(Error::InvalidQ(q.get()));
    }
    let m = n + q.get() - 1;
    let pair = [stat, Statistic::DelQ];
    let upstairs = distribution_even(m, q, &pair, &FilterSpec::All, cfg)?;
    let downstairs = distribution(n, Q::ONE, &pair, &FilterSpec::All, cfg)?
        .scale_variable(1, &BigUint::from(q.get()))
        .scale(&(factorial(q.get()) / 2u8));
    Ok((upstairs, downstairs))
}

pub const F_PAIR_STATISTICS: [Statistic; 5] = [
    Statistic::InvQ,
    Statistic::EllQ,
    Statistic::DesQ,
    Statistic::RmajQ,
    Statistic::DelQ,
];

fn check_f_pairs(n: usize, q: Q, cfg: SweepConfig) -> Outcome {
    for (i, &s) in F_PAIR_STATISTICS.iter().enumerate() {
        let (upstairs, downstairs) = f_pair_sides(n, q, s, cfg);
        if upstairs != downstairs {
            return Outcome {
                checked: i as u64 + 1,
                witness: Some(poly_witness(
                    Some(format!("pair ({s}, del_q)")),
                    "sum over S_{n+q-1} != q! * (sum over S_n with t2 -> q t2)",
                    &upstairs,
                    &downstairs,
                )),
            };
        }
    }
    Outcome::pass(F_PAIR_STATISTICS.len() as u64)
}
