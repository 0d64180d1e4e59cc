//! Two-component degenerations, their case analyses, and the numeric
//! inequality chains behind smoothness and non-existence.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::counts::{CountError, DJProblem};
use crate::graph::{chain_curve, GraphError};
use crate::llseries::{
    eh_sum, ramification_from_vanishing, refined_compatible, Compatibility, SequenceError, VanishingSequence,
};
use crate::twists::{self, BalanceConvention, EndTwists, TwistError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenError {
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

fn range(ok: bool, msg: impl FnOnce() -> String) -> Result<(), DegenError> {
    if ok {
        Ok(())
    } else {
        Err(DegenError::Range(msg()))
    }
}

/// `g - (r+1)(g-d+r)` on signed inputs.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenerationKind {
    RhoZero,
    RhoStep,
}

/// One component: a general curve of genus `genus` with a `g^r_{degree}`,
/// whose aspect is that series twisted by `base_points` times the node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentData {
    pub genus: i64,
    pub degree: i64,
    pub base_points: i64,
    pub vanishing: VanishingSequence,
    pub rho: i64,
    pub speciality: i64,
    /// `sum (alpha_i + g_j - d + r)_+` for the aspect at the node.
    pub eh_sum: i64,
}

impl ComponentData {
    fn new(genus: i64, degree: i64, base_points: i64, r: i64, d: i64, vanishing_start: i64) -> Result<Self, DegenError> {
        let vanishing = VanishingSequence::consecutive(vanishing_start, r as u32, d)?;
        let alpha = ramification_from_vanishing(&vanishing);
        Ok(Self {
            genus,
            degree,
            base_points,
            eh_sum: eh_sum(genus, d, r, &alpha),
            vanishing,
            rho: rho(genus, r, degree),
            speciality: genus - degree + r,
        })
    }

    pub fn eh_holds(&self) -> bool {
        self.eh_sum <= self.genus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationData {
    pub kind: DegenerationKind,
    pub g: i64,
    pub r: i64,
    pub d: i64,
    pub node: String,
    pub components: [ComponentData; 2],
    pub compatibility: Compatibility,
}

impl DegenerationData {
    pub fn speciality(&self) -> i64 {
        self.g - self.d + self.r
    }

    pub fn rho(&self) -> i64 {
        rho(self.g, self.r, self.d)
    }

    /// Admissible values of `sum a_i d_{i,C_1}`: the node order on each side
    /// must be at least its base-point multiplicity.
    pub fn weight_range(&self) -> (i64, i64) {
        (self.components[1].base_points, self.d - self.components[0].base_points)
    }

    pub fn check(&self) -> Result<(), DegenError> {
        let [c1, c2] = &self.components;
        let fail = |m: String| Err(DegenError::Invariant(m));
        if c1.genus + c2.genus != self.g {
            return fail(format!("genera {} + {} != {}", c1.genus, c2.genus, self.g));
        }
        for c in &self.components {
            if c.degree + c.base_points != self.d {
                return fail(format!("aspect degree {} + {} != {}", c.degree, c.base_points, self.d));
            }
            if !c.eh_holds() {
                return fail(format!("ramification sum {} exceeds genus {}", c.eh_sum, c.genus));
            }
        }
        if self.compatibility != Compatibility::Refined {
            return fail(format!("aspects are {:?} at the node", self.compatibility));
        }
        let s = self.speciality();
        match self.kind {
            DegenerationKind::RhoZero => {
                if c1.rho != 0 || c2.rho != 0 || c1.speciality != s - 1 || c2.speciality != 1 {
                    return fail("rho-zero components must have rho 0 and specialities s-1, 1".into());
                }
                if c1.eh_sum != c1.genus || c2.eh_sum != c2.genus {
                    return fail("ramification sums must be equalities".into());
                }
            }
            DegenerationKind::RhoStep => {
                if c1.rho != self.rho() - 1 || c1.speciality != s {
                    return fail("step must lower rho by one and keep the speciality".into());
                }
            }
        }
        Ok(())
    }
}

fn assemble(kind: DegenerationKind, g: i64, r: i64, d: i64, c1: ComponentData, c2: ComponentData) -> Result<DegenerationData, DegenError> {
    let compatibility = refined_compatible(&c1.vanishing, &c2.vanishing, d)?;
    let data = DegenerationData {
        kind,
        g,
        r,
        d,
        node: "p".into(),
        components: [c1, c2],
        compatibility,
    };
    data.check()?;
    Ok(data)
}

/// `C_1` of genus `(s-1)(r+1)` with a general `g^r_{g-s}` and aspect
/// `l_1(rp)`, glued to a genus `r+1` curve with its canonical series and
/// aspect `l_2((d-2r)p)`.
pub fn build_rho_zero_degeneration(r: i64, s: i64) -> Result<DegenerationData, DegenError> {
    range(r >= 1 && s >= 2, || format!("need r >= 1 and s >= 2, got r={r} s={s}"))?;
    let g = s * (r + 1);
    let d = g + r - s;
    let c1 = ComponentData::new((s - 1) * (r + 1), g - s, r, r, d, r)?;
    let c2 = ComponentData::new(r + 1, 2 * r, d - 2 * r, r, d, d - 2 * r)?;
    assemble(DegenerationKind::RhoZero, g, r, d, c1, c2)
}

/// `C_1` of genus `g-1` with a general `g^r_{d-1}` and aspect `l_1(p)`,
/// glued to an elliptic normal curve of degree `r+1`.
pub fn build_rho_step_degeneration(g: i64, r: i64, d: i64) -> Result<DegenerationData, DegenError> {
    range(r >= 1 && d > r && g >= 1, || format!("need r >= 1, d > r, g >= 1, got g={g} r={r} d={d}"))?;
    range(rho(g, r, d) >= 1, || format!("rho({g},{r},{d}) = {} < 1", rho(g, r, d)))?;
    let c1 = ComponentData::new(g - 1, d - 1, 1, r, d, 1)?;
    let c2 = ComponentData::new(1, r + 1, d - r - 1, r, d, d - r - 1)?;
    assemble(DegenerationKind::RhoStep, g, r, d, c1, c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    /// `sum a_i d_{i,C_1} = d - b_1`: no node part on `C_1`.
    BoundaryHigh,
    /// `sum a_i d_{i,C_1} = b_2`: no node part on `C_2`.
    BoundaryLow,
    Interior,
    /// Outside the admissible range, so the node order on one side is
    /// below the base-point multiplicity there.
    Rejected,
}

/// The de Jonquières problem induced on one component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubProblem {
    pub genus: i64,
    pub degree: i64,
    pub mu1: Vec<u32>,
    pub mu2: Vec<u32>,
    pub length: i64,
    pub node_coefficient: i64,
    pub dimension: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    pub weight: [i64; 2],
    pub lengths: [i64; 2],
    /// `(a_i, d_{i,C_1}, d_{i,C_2})` for every part.
    pub split: Vec<(u32, u32, u32)>,
    pub label: CaseLabel,
    pub subproblems: Option<[SubProblem; 2]>,
    /// One for each component whose divisor must pass through the node.
    pub corrections: i64,
    pub total: Option<i64>,
    pub realizable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseAnalysis {
    pub kind: DegenerationKind,
    pub g: i64,
    pub r: i64,
    pub d: i64,
    pub n: i64,
    pub expected: i64,
    pub weight_range: (i64, i64),
    pub cases: Vec<Case>,
    pub max_bound: Option<i64>,
}

impl CaseAnalysis {
    pub fn attains_expected(&self) -> bool {
        self.max_bound == Some(self.expected)
    }

    pub fn labels_by_weight(&self) -> Vec<(i64, CaseLabel)> {
        let set: BTreeSet<(i64, CaseLabel)> = self
            .cases
            .iter()
            .map(|c| (c.weight[0], c.label))
            .collect();
        set.into_iter().collect()
    }
}

fn splits(parts: &[(u32, u32)]) -> Vec<Vec<(u32, u32, u32)>> {
    let mut out: Vec<Vec<(u32, u32, u32)>> = vec![vec![]];
    for &(a, delta) in parts {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=delta).map(move |x| {
                    let mut v = prefix.clone();
                    v.push((a, x, delta - x));
                    v
                })
            })
            .collect();
    }
    let unique: BTreeSet<Vec<(u32, u32, u32)>> = out
        .into_iter()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect();
    unique.into_iter().collect()
}

fn subproblem(genus: i64, degree: i64, r: i64, pieces: &[(u32, u32)]) -> SubProblem {
    let weight: i64 = pieces.iter().map(|&(a, x)| i64::from(a) * i64::from(x)).sum();
    let mut mu: Vec<(u32, u32)> = pieces.iter().copied().filter(|&(_, x)| x > 0).collect();
    let node = degree - weight;
    if node > 0 {
        mu.push((node as u32, 1));
    }
    mu.sort_unstable_by(|x, y| y.cmp(x));
    let length: i64 = mu.iter().map(|&(_, x)| i64::from(x)).sum();
    let (mu1, mu2) = mu.into_iter().unzip();
    SubProblem {
        genus,
        degree,
        mu1,
        mu2,
        length,
        node_coefficient: node,
        dimension: length - degree + r,
    }
}

/// Every way the divisors `D_i` can distribute over the two components,
/// with the dimension count of each. On component `j` the series has degree
/// `d_j`, and the node enters the divisor with coefficient `d_j - w_j`. When
/// that coefficient is positive the divisor must pass through a fixed
/// general point, which costs one dimension.
pub fn enumerate_case_analysis(degen: &DegenerationData, p: &DJProblem) -> Result<CaseAnalysis, DegenError> {
    p.validate()?;
    range(
        (i64::from(p.g), i64::from(p.r), i64::from(p.d)) == (degen.g, degen.r, degen.d),
        || format!("problem has (g,r,d)=({},{},{}) but the degeneration targets ({},{},{})", p.g, p.r, p.d, degen.g, degen.r, degen.d),
    )?;
    let (r, d) = (degen.r, degen.d);
    let n = i64::from(p.n());
    let expected = n - d + r;
    let (lo, hi) = degen.weight_range();
    let [c1, c2] = &degen.components;
    let parts: Vec<(u32, u32)> = p.parts().collect();

    let mut cases = Vec::new();
    for split in splits(&parts) {
        let w1: i64 = split.iter().map(|&(a, x, _)| i64::from(a) * i64::from(x)).sum();
        let n1: i64 = split.iter().map(|&(_, x, _)| i64::from(x)).sum();
        let weight = [w1, d - w1];
        let lengths = [n1, n - n1];
        if w1 < lo || w1 > hi {
            cases.push(Case {
                weight,
                lengths,
                split,
                label: CaseLabel::Rejected,
                subproblems: None,
                corrections: 0,
                total: None,
                realizable: false,
            });
            continue;
        }
        let label = if w1 == hi {
            CaseLabel::BoundaryHigh
        } else if w1 == lo {
            CaseLabel::BoundaryLow
        } else {
            CaseLabel::Interior
        };
        let left: Vec<(u32, u32)> = split.iter().map(|&(a, x, _)| (a, x)).collect();
        let right: Vec<(u32, u32)> = split.iter().map(|&(a, _, y)| (a, y)).collect();
        let s1 = subproblem(c1.genus, c1.degree, r, &left);
        let s2 = subproblem(c2.genus, c2.degree, r, &right);
        let corrections = i64::from(s1.node_coefficient > 0) + i64::from(s2.node_coefficient > 0);
        let total = s1.dimension + s2.dimension - corrections;
        if total > expected {
            return Err(DegenError::Invariant(format!(
                "case with weight {w1} on C_1 bounds the dimension by {total} > {expected}"
            )));
        }
        let realizable = s1.dimension >= 0 && s2.dimension >= 0;
        cases.push(Case {
            weight,
            lengths,
            split,
            label,
            subproblems: Some([s1, s2]),
            corrections,
            total: Some(total),
            realizable,
        });
    }
    let max_bound = cases.iter().filter(|c| c.realizable).filter_map(|c| c.total).max();
    Ok(CaseAnalysis {
        kind: degen.kind,
        g: degen.g,
        r,
        d,
        n,
        expected,
        weight_range: (lo, hi),
        cases,
        max_bound,
    })
}

/// Constant term of the quadratic `N^2 - (2s+r+1)N + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantTerm {
    /// `c = s(s+1)`, as in the displayed quadratic.
    SPlusOne,
    /// `c = s(s+r)`, as in the discriminant of the root formula.
    SPlusR,
}

impl ConstantTerm {
    pub fn value(self, r: i64, s: i64) -> i64 {
        match self {
            ConstantTerm::SPlusOne => s * (s + 1),
            ConstantTerm::SPlusR => s * (s + r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticVerdict {
    pub constant_term: ConstantTerm,
    pub constant: i64,
    pub value_at_n: i64,
    pub discriminant: i64,
    /// `(B + sqrt(disc)) / 2 < d - r + 1` with `B = 2s+r+1`.
    pub upper_root_below_threshold: bool,
    /// `disc <= (B-4)^2` with `B >= 4`.
    pub sqrt_step_holds: bool,
    /// Integers `N >= d-r+1` with a negative quadratic; empty means the
    /// contradiction is achieved.
    pub witnesses: Vec<i64>,
    pub contradiction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub g: i64,
    pub r: i64,
    pub d: i64,
    pub n: i64,
    pub s: i64,
    pub linear_coefficient: i64,
    pub variants: [QuadraticVerdict; 2],
    /// `g >= (r+1)s >= 2s+r+1`.
    pub genus_chain_holds: bool,
    /// `(2-r)(s-1)`; the chain closes when it is negative.
    pub sufficient_value: i64,
    pub sufficient_holds: bool,
    /// `(d-r)(g-r-1) <= g`, necessary in the second case; false means that
    /// case is contradictory.
    pub case_two_gate: bool,
}

impl SmoothnessReport {
    pub fn variant(&self, c: ConstantTerm) -> &QuadraticVerdict {
        &self.variants[match c {
            ConstantTerm::SPlusOne => 0,
            ConstantTerm::SPlusR => 1,
        }]
    }
}

fn quadratic_verdict(c: ConstantTerm, r: i64, s: i64, d: i64, n: i64) -> QuadraticVerdict {
    let b = 2 * s + r + 1;
    let constant = c.value(r, s);
    let q = |x: i64| x * x - b * x + constant;
    let discriminant = b * b - 4 * constant;
    let threshold = d - r + 1;
    let rhs = 2 * threshold - b;
    let upper_root_below_threshold = discriminant < 0 || (rhs > 0 && discriminant < rhs * rhs);
    let sqrt_step_holds = b >= 4 && discriminant <= (b - 4) * (b - 4);
    // q is increasing past its vertex, so checking up to the vertex suffices
    let last = threshold.max((b + 1) / 2 + 1);
    let witnesses: Vec<i64> = (threshold..=last).filter(|&x| q(x) < 0).collect();
    QuadraticVerdict {
        constant_term: c,
        constant,
        value_at_n: q(n),
        discriminant,
        upper_root_below_threshold,
        sqrt_step_holds,
        contradiction: witnesses.is_empty(),
        witnesses,
    }
}

pub fn smoothness_inequality_check(g: i64, r: i64, d: i64, n: i64) -> Result<SmoothnessReport, DegenError> {
    let s = g - d + r;
    range(r >= 3 && s >= 2, || format!("need r >= 3 and s >= 2, got r={r} s={s}"))?;
    range(n > d - r, || format!("need N > d - r, got N={n}, d-r={}", d - r))?;
    let sufficient_value = (2 - r) * (s - 1);
    Ok(SmoothnessReport {
        g,
        r,
        d,
        n,
        s,
        linear_coefficient: 2 * s + r + 1,
        variants: [
            quadratic_verdict(ConstantTerm::SPlusOne, r, s, d, n),
            quadratic_verdict(ConstantTerm::SPlusR, r, s, d, n),
        ],
        genus_chain_holds: g >= (r + 1) * s && (r + 1) * s > 2 * s + r,
        sufficient_value,
        sufficient_holds: sufficient_value < 0,
        case_two_gate: (d - r) * (g - r - 1) <= g,
    })
}

/// Reports on `g = (r+1)s`, `d = g+r-s` and the smallest `N = d-r+1`.
pub fn smoothness_grid(rs: std::ops::RangeInclusive<i64>, ss: std::ops::RangeInclusive<i64>) -> Vec<SmoothnessReport> {
    let mut out = Vec::new();
    for r in rs {
        for s in ss.clone() {
            let g = (r + 1) * s;
            let d = g + r - s;
            out.push(smoothness_inequality_check(g, r, d, d - r + 1).expect("grid stays in range"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Transversality {
    /// Deformations of the map to `P^1`.
    RankOne,
    /// Collinear cycles: a family of dimension `N + 2` cut by `conditions`.
    RankTwo { conditions: i64 },
    NonSpecial,
    Canonical,
    /// Residual is an isolated divisor of degree `2g-2-d`.
    IndexOne { residual_degree: i64 },
    RequiresDegeneration,
    /// `r = 0` is not treated.
    Unaddressed,
}

impl Transversality {
    pub fn holds_without_degeneration(&self) -> bool {
        !matches!(self, Transversality::RequiresDegeneration | Transversality::Unaddressed)
    }
}

pub fn transversality_special_cases(g: i64, r: i64, d: i64) -> Transversality {
    let s = g - d + r;
    match r {
        0 => Transversality::Unaddressed,
        1 => Transversality::RankOne,
        2 => Transversality::RankTwo { conditions: d },
        _ if s <= 0 => Transversality::NonSpecial,
        _ if d == 2 * g - 2 && r == g - 1 => Transversality::Canonical,
        _ if s == 1 => Transversality::IndexOne {
            residual_degree: 2 * g - 2 - d,
        },
        _ => Transversality::RequiresDegeneration,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H0Case {
    Canonical,
    DegreeCanonicalNotCanonical,
    AboveCanonical,
    BelowCanonical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeExtension {
    pub n1: i64,
    pub n2: i64,
    pub d_prime: i64,
    pub h0: i64,
    pub r_prime: i64,
    pub case: H0Case,
    /// `n - d' + r'`
    pub expected_dimension: i64,
    /// `n_1 - d' + r'`, the lower bound for the positive part.
    pub lower_bound: i64,
    /// The theorem needs the lower bound to be non-negative.
    pub applicable: bool,
}

/// Moves the negative part `-sum b_i q_i` into the series. `canonical`
/// says whether `L' = K_C`, which only makes sense when `d' = 2g-2`.
pub fn negative_partition_extend(g: i64, r: i64, d: i64, mu: &[i64], canonical: bool) -> Result<NegativeExtension, DegenError> {
    range(mu.iter().all(|&m| m != 0), || "partition entries must be nonzero".into())?;
    range(mu.iter().sum::<i64>() == d, || format!("entries of {mu:?} must sum to {d}"))?;
    range(mu.iter().any(|&m| m > 0), || "need at least one positive entry".into())?;
    range(g >= 0 && r >= 0, || "need g, r >= 0".into())?;
    let n1 = mu.iter().filter(|&&m| m > 0).count() as i64;
    let n2 = mu.len() as i64 - n1;
    let b: i64 = mu.iter().filter(|&&m| m < 0).map(|m| -m).sum();
    let d_prime = d + b;
    let k = 2 * g - 2;
    range(!canonical || d_prime == k, || format!("canonical needs d' = 2g-2 = {k}, got {d_prime}"))?;
    let (case, h0) = if d_prime == k && canonical {
        (H0Case::Canonical, g)
    } else if d_prime == k {
        (H0Case::DegreeCanonicalNotCanonical, g - 1)
    } else if d_prime > k {
        (H0Case::AboveCanonical, d_prime - g + 1)
    } else {
        (H0Case::BelowCanonical, r + b + 1)
    };
    let r_prime = h0 - 1;
    let lower_bound = n1 - d_prime + r_prime;
    Ok(NegativeExtension {
        n1,
        n2,
        d_prime,
        h0,
        r_prime,
        case,
        expected_dimension: n1 + n2 - d_prime + r_prime,
        lower_bound,
        applicable: lower_bound >= 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseCase {
    /// Every line bundle is in the image of a map from a space of smaller
    /// dimension, so the general one admits no divisor.
    CertifiedEmpty,
    /// `g - d + r < 0` with `N >= g`: handled by the chain induction.
    RequiresChainInduction,
    /// Special series: this is the dimension theorem, not the base case.
    RequiresDimensionTheorem,
}

pub fn nonexistence_base_case(g: i64, r: i64, d: i64, n: i64) -> Result<BaseCase, DegenError> {
    range(n - d + r < 0, || format!("need N - d + r < 0, got {}", n - d + r))?;
    let s = g - d + r;
    Ok(if s == 0 || (s < 0 && n < g) {
        BaseCase::CertifiedEmpty
    } else if s < 0 {
        BaseCase::RequiresChainInduction
    } else {
        BaseCase::RequiresDimensionTheorem
    })
}

/// A divisor `T(q_1,C) q_1 + T(q_{n+2},C) q_{n+2}` of length `length` on `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSubCase {
    pub length: i64,
    pub occurs: bool,
    /// `length - (d-1) + r`
    pub expected_dimension: i64,
    pub below_genus: bool,
    /// Ruled out by induction on `C` with its `g^r_{d-1}`.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainAnalysis {
    pub g: i64,
    pub r: i64,
    pub d: i64,
    pub n: i64,
    pub exceptional: usize,
    pub quasi_stable: bool,
    pub balanced_literal: bool,
    pub balanced_dualizing: bool,
    pub solution_dimension: usize,
    pub ends: EndTwists,
    pub subcases: Vec<ChainSubCase>,
    pub nonexistence: bool,
}

/// The genus `g-1` curve `C` with a rational bridge of `n+1` components,
/// one exceptional, carrying the points `p_i` with coefficients `mu`.
pub fn chain_analysis(g: u32, r: u32, mu: &[u32], exceptional: usize) -> Result<ChainAnalysis, DegenError> {
    let n = mu.len() as i64;
    let d: i64 = mu.iter().map(|&a| i64::from(a)).sum();
    let (gi, ri) = (i64::from(g), i64::from(r));
    range(g >= 4, || format!("need g >= 4, got {g}"))?;
    range(n >= gi, || format!("need n >= g, got n={n}"))?;
    range(gi - d + ri < 0 && n - d + ri < 0, || "need g - d + r < 0 and n - d + r < 0".into())?;
    let graph = chain_curve(g, mu, exceptional)?;
    let solution = twists::solve_twists(&graph)?;
    let last = format!("q{}", n + 2);
    let ends = twists::classify_end_twists(&solution, "C", "q1", &last)
        .ok_or_else(|| DegenError::Invariant("chain twist family is not one-dimensional".into()))?;
    let subcase = |length: i64, occurs: bool| {
        let expected_dimension = length - (d - 1) + ri;
        let below_genus = length < gi - 1;
        ChainSubCase {
            length,
            occurs,
            expected_dimension,
            below_genus,
            excluded: expected_dimension < 0 && below_genus,
        }
    };
    let subcases = vec![
        subcase(2, ends.both_nonzero_at.is_some()),
        subcase(1, !ends.exactly_one_nonzero_at.is_empty()),
    ];
    let nonexistence = !ends.both_zero_possible && subcases.iter().all(|c| !c.occurs || c.excluded);
    Ok(ChainAnalysis {
        g: gi,
        r: ri,
        d,
        n,
        exceptional,
        quasi_stable: twists::is_quasi_stable(&graph),
        balanced_literal: twists::balance_report(&graph, BalanceConvention::Literal)?.balanced,
        balanced_dualizing: twists::balance_report(&graph, BalanceConvention::Dualizing)?.balanced,
        solution_dimension: solution.dimension(),
        ends,
        subcases,
        nonexistence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::expected_dimension;
    use crate::partitions::{partition_pairs, unzip_parts};

    #[test]
    fn rho_zero_small_case() {
        let data = build_rho_zero_degeneration(2, 2).unwrap();
        assert_eq!((data.g, data.d), (6, 6));
        let [c1, c2] = &data.components;
        assert_eq!((c1.genus, c1.degree), (3, 4));
        assert_eq!((c2.genus, c2.degree), (3, 4));
        assert_eq!(data.compatibility, Compatibility::Refined);
    }

    #[test]
    fn rho_zero_invariants_over_a_grid() {
        for r in 1..8 {
            for s in 2..8 {
                let data = build_rho_zero_degeneration(r, s).unwrap();
                let [c1, c2] = &data.components;
                assert_eq!(c1.speciality, s - 1);
                assert_eq!(c1.rho, 0);
                assert_eq!(c2.eh_sum, r + 1);
                assert_eq!(c1.vanishing.orders(), (r..=2 * r).collect::<Vec<_>>());
            }
        }
        assert!(build_rho_zero_degeneration(0, 2).is_err());
        assert!(build_rho_zero_degeneration(2, 1).is_err());
    }

    #[test]
    fn rho_step_invariants() {
        for r in 1..6 {
            for s in 2..6 {
                for extra in 1..5 {
                    let g = (r + 1) * s + extra;
                    let d = g + r - s;
                    let data = build_rho_step_degeneration(g, r, d).unwrap();
                    assert_eq!(data.components[0].rho, rho(g, r, d) - 1);
                    assert_eq!(data.components[0].speciality, s);
                    assert_eq!(data.components[1].eh_sum, 0);
                }
            }
        }
        assert!(matches!(build_rho_step_degeneration(2, 1, 2), Err(DegenError::Range(_))));
    }

    #[test]
    fn boundary_case_matches_the_worked_bound() {
        let (r, s) = (2i64, 2i64);
        let data = build_rho_zero_degeneration(r, s).unwrap();
        let d = data.d;
        // all ones, N = d
        let p = DJProblem::new(data.g as u32, r as u32, d as u32, vec![1], vec![d as u32]).unwrap();
        let analysis = enumerate_case_analysis(&data, &p).unwrap();
        let hi = analysis
            .cases
            .iter()
            .find(|c| c.label == CaseLabel::BoundaryHigh)
            .unwrap();
        let [s1, s2] = hi.subproblems.as_ref().unwrap();
        assert_eq!(s1.node_coefficient, 0);
        assert_eq!(s2.node_coefficient, r);
        let x = s1.dimension;
        assert_eq!(x, hi.lengths[0] - d + 2 * r);
        assert_eq!(s2.dimension, analysis.expected - x + 1);
        assert_eq!(hi.total, Some(analysis.expected));
        assert!(analysis.attains_expected());
        // all points on one side fall outside the range
        let one_side = analysis.cases.iter().find(|c| c.lengths[1] == 0).unwrap();
        assert_eq!(one_side.label, CaseLabel::Rejected);
    }

    #[test]
    fn step_boundary_case() {
        let (g, r, d) = (8i64, 2i64, 8i64);
        let data = build_rho_step_degeneration(g, r, d).unwrap();
        let p = DJProblem::new(g as u32, r as u32, d as u32, vec![1], vec![d as u32]).unwrap();
        let analysis = enumerate_case_analysis(&data, &p).unwrap();
        let hi = analysis.cases.iter().find(|c| c.label == CaseLabel::BoundaryHigh).unwrap();
        let [s1, s2] = hi.subproblems.as_ref().unwrap();
        assert_eq!(s1.dimension, hi.lengths[0] - d + 1 + r);
        assert_eq!(s2.dimension, analysis.expected + 1 - s1.dimension);
        assert_eq!(hi.total, Some(analysis.expected));
        let labels: BTreeSet<CaseLabel> = analysis.labels_by_weight().into_iter().map(|(_, l)| l).collect();
        assert!(labels.contains(&CaseLabel::Interior) && labels.contains(&CaseLabel::BoundaryLow));
    }

    #[test]
    fn case_analysis_sweep_small() {
        for r in 1..4 {
            for s in 2..4 {
                let data = build_rho_zero_degeneration(r, s).unwrap();
                let d = data.d as u32;
                for n in (data.d - r).max(0) as u32..=d.min(9) {
                    for parts in partition_pairs(d, n) {
                        let (mu1, mu2) = unzip_parts(&parts);
                        let p = DJProblem::new(data.g as u32, r as u32, d, mu1, mu2).unwrap();
                        let a = enumerate_case_analysis(&data, &p).unwrap();
                        assert!(a.attains_expected(), "r={r} s={s} parts={parts:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn mismatched_problem_is_rejected() {
        let data = build_rho_zero_degeneration(1, 2).unwrap();
        let p = DJProblem::new(3, 1, 4, vec![1], vec![4]).unwrap();
        assert!(matches!(enumerate_case_analysis(&data, &p), Err(DegenError::Range(_))));
    }

    #[test]
    fn smoothness_first_cell() {
        let rep = smoothness_grid(3..=3, 2..=2).pop().unwrap();
        assert_eq!(rep.sufficient_value, -1);
        assert!(rep.sufficient_holds);
        assert!(rep.genus_chain_holds);
        assert!(rep.variant(ConstantTerm::SPlusR).contradiction);
        assert!(!rep.case_two_gate);
        assert!(smoothness_inequality_check(8, 2, 8, 7).is_err());
    }

    #[test]
    fn smoothness_grid_verdicts() {
        for rep in smoothness_grid(3..=12, 2..=12) {
            assert!(rep.sufficient_holds);
            assert!(rep.variant(ConstantTerm::SPlusR).contradiction, "{rep:?}");
            assert!(rep.variant(ConstantTerm::SPlusR).upper_root_below_threshold);
            assert!(!rep.case_two_gate);
        }
    }

    #[test]
    fn transversality_branches() {
        assert_eq!(transversality_special_cases(5, 3, 8), Transversality::NonSpecial);
        assert_eq!(transversality_special_cases(5, 1, 4), Transversality::RankOne);
        assert_eq!(transversality_special_cases(5, 1, 9), Transversality::RankOne);
        assert_eq!(transversality_special_cases(6, 2, 6), Transversality::RankTwo { conditions: 6 });
        assert_eq!(transversality_special_cases(5, 4, 8), Transversality::Canonical);
        assert_eq!(transversality_special_cases(8, 3, 10), Transversality::IndexOne { residual_degree: 4 });
        let t = transversality_special_cases(8, 3, 9);
        assert_eq!(t, Transversality::RequiresDegeneration);
        assert!(!t.holds_without_degeneration());
        assert_eq!(transversality_special_cases(4, 0, 2), Transversality::Unaddressed);
    }

    #[test]
    fn negative_table() {
        let e = negative_partition_extend(3, 0, 2, &[2, 2, -2], false).unwrap();
        assert_eq!((e.d_prime, e.r_prime, e.expected_dimension), (4, 1, 0));
        assert_eq!(e.case, H0Case::DegreeCanonicalNotCanonical);
        assert_eq!(e.lower_bound, e.n1 - 3);

        let c = negative_partition_extend(3, 0, 2, &[2, 1, 1, -2], true).unwrap();
        assert_eq!(c.case, H0Case::Canonical);
        assert_eq!(c.lower_bound, c.n1 - 3 + 1);

        let above = negative_partition_extend(2, 0, 3, &[2, 2, -1], false).unwrap();
        assert_eq!(above.case, H0Case::AboveCanonical);
        assert_eq!(above.h0, above.d_prime - 2 + 1);
        assert_eq!(above.lower_bound, above.n1 - 2);

        let below = negative_partition_extend(6, 1, 3, &[2, 2, -1], false).unwrap();
        assert_eq!(below.case, H0Case::BelowCanonical);
        assert_eq!(below.h0, 1 + 1 + 1);
        assert_eq!(below.lower_bound, below.n1 - 3 + 1);

        assert!(negative_partition_extend(3, 0, 2, &[2, 1, -2], true).is_err());
        assert!(negative_partition_extend(3, 0, 2, &[2, 0], false).is_err());
        assert!(negative_partition_extend(3, 0, 2, &[3, -2], false).is_err());
    }

    #[test]
    fn positive_partitions_match_expected_dimension() {
        let (g, r, d) = (6u32, 1u32, 4u32);
        for parts in partition_pairs(d, 4).into_iter().chain(partition_pairs(d, 3)) {
            let mu: Vec<i64> = parts.iter().map(|&(a, _)| i64::from(a)).collect();
            if parts.iter().any(|&(_, k)| k != 1) {
                continue;
            }
            let e = negative_partition_extend(g.into(), r.into(), d.into(), &mu, false).unwrap();
            let (mu1, mu2) = unzip_parts(&parts);
            let p = DJProblem::new(g, r, d, mu1, mu2).unwrap();
            assert_eq!(e.expected_dimension, expected_dimension(&p));
        }
    }

    #[test]
    fn base_cases() {
        assert_eq!(nonexistence_base_case(4, 1, 5, 3).unwrap(), BaseCase::CertifiedEmpty);
        assert_eq!(nonexistence_base_case(4, 2, 8, 3).unwrap(), BaseCase::CertifiedEmpty);
        assert_eq!(nonexistence_base_case(4, 2, 8, 5).unwrap(), BaseCase::RequiresChainInduction);
        assert_eq!(nonexistence_base_case(6, 2, 6, 3).unwrap(), BaseCase::RequiresDimensionTheorem);
        assert!(nonexistence_base_case(4, 1, 5, 4).is_err());
    }

    #[test]
    fn chain_rules_out_both_lengths() {
        let mu = [2, 2, 2, 2, 2];
        let a = chain_analysis(5, 1, &mu, 3).unwrap();
        assert!(a.quasi_stable);
        assert!(a.balanced_dualizing);
        assert_eq!(a.solution_dimension, 1);
        assert!(a.subcases.iter().all(|c| c.occurs && c.excluded));
        assert!(a.nonexistence);
        assert!(!a.ends.both_zero_possible);
        assert!(chain_analysis(3, 1, &[2, 2, 2], 1).is_err());
    }
}
