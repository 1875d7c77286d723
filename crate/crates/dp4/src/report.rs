//! Machine-readable reports. Every number is a string so that rationals
//! survive JSON unchanged; maps are ordered so output is byte-stable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::brauer::{brauer_group, BrauerGenerator, BrauerGroupOfG, ParityVerdict, RTSet};
use crate::error::Result;
use crate::localfield::{Half, Place};
use crate::numberfield::square_class_of_rat;
use crate::obstruction::{adelic_report, has_local_point, AdelicReport, LocalProfile, PointP1};
use crate::pencil::{Pencil, SingularLocus, SmoothnessFailure};
use crate::points::{parse_point, verify_point, QuadraticPoint};
use crate::reduction::{mult_w, split_fiber_certificate, IntegralModel, SplitCertificate};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<Smoothness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_locus: Option<Locus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brauer: Option<Brauer>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rt: Option<Rt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Points>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Vec<Reduction>>,
}

impl Report {
    pub fn new(p: &Pencil) -> Report {
        Report { schema_version: SCHEMA_VERSION, label: p.label.clone(), ..Default::default() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Normalization {
    /// `(t₀ : t₁) ↦` the rows, applied to the input pencil parameter.
    pub mobius: [[String; 2]; 2],
    pub identity: bool,
    pub q0: String,
    pub qinf: String,
}

pub fn normalization(p: &Pencil) -> Normalization {
    let m = p.mobius();
    Normalization {
        mobius: [[m[0][0].to_string(), m[0][1].to_string()], [m[1][0].to_string(), m[1][1].to_string()]],
        identity: p.is_identity_normalized(),
        q0: p.q0().to_string(),
        qinf: p.qinf().to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Smoothness {
    pub smooth: bool,
    pub f: String,
    pub failures: Vec<SmoothnessFailure>,
    pub messages: Vec<String>,
}

pub fn smoothness(p: &Pencil) -> Smoothness {
    let r = p.check_smooth();
    Smoothness {
        smooth: r.smooth,
        f: r.f.to_string(),
        messages: r.failures.iter().map(ToString::to_string).collect(),
        failures: r.failures,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Locus {
    pub f: String,
    pub points: Vec<LocusPoint>,
    /// `N(ε_𝒮)`, always a square.
    pub total_norm: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusPoint {
    pub factor: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    /// Polynomials in θ, the class of T in `k(s)`.
    pub eps: String,
    /// Squarefree representative of ε_s when s is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_class: Option<String>,
    pub eps_norm: String,
    pub eps_square: bool,
    pub vertex: Vec<String>,
    pub qinf_at_vertex: String,
}

pub fn locus(l: &SingularLocus) -> Locus {
    Locus {
        f: l.f.to_string(),
        points: l
            .points
            .iter()
            .map(|s| LocusPoint {
                factor: s.factor.to_string(),
                degree: s.degree(),
                t: s.rational_root().map(|t| t.to_string()),
                eps: s.field.render(&s.eps),
                eps_class: s.eps_rational().and_then(|e| square_class_of_rat(&e).ok()).map(|c| c.to_string()),
                eps_norm: s.eps_norm().to_string(),
                eps_square: s.eps_is_square(),
                vertex: s.vertex.iter().map(|x| s.field.render(x)).collect(),
                qinf_at_vertex: s.field.render(&s.qinf_at_vertex),
            })
            .collect(),
        total_norm: l.total_norm().to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Brauer {
    pub n: usize,
    pub generators: Vec<Generator>,
    /// Every `T` that gives a nontrivial class, grouped by class.
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub t: String,
    pub reducible: bool,
    pub eps: String,
    pub delta: String,
    pub clifford_diagonals: Vec<Vec<String>>,
    pub clifford_symbols: Vec<(String, String)>,
    /// Places where `C_T` is ramified.
    pub clifford_ramified: Vec<Place>,
}

fn generator(g: &BrauerGenerator) -> Generator {
    Generator {
        t: g.t.to_string(),
        reducible: g.is_reducible(),
        eps: g.eps.to_string(),
        delta: g.delta.to_string(),
        clifford_diagonals: g.clif.diagonals(),
        clifford_symbols: g.clif.symbols(),
        clifford_ramified: g.clifford_class().nonzero.into_iter().collect(),
    }
}

pub fn brauer(b: &BrauerGroupOfG) -> Brauer {
    Brauer {
        n: b.n,
        generators: b.generators.iter().map(generator).collect(),
        classes: b
            .classes()
            .into_iter()
            .filter(|(c, _)| *c != 0)
            .map(|(_, reps)| reps.iter().map(|g| g.t.to_string()).collect())
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceSet {
    pub places: Vec<Place>,
    pub parity: &'static str,
}

impl From<&RTSet> for PlaceSet {
    fn from(r: &RTSet) -> PlaceSet {
        PlaceSet { places: r.places.clone(), parity: r.parity() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RtEntry {
    pub t: String,
    pub r_t: PlaceSet,
    pub r_prime_t: Option<PlaceSet>,
    /// `C′_T = C_T + (ε, c)`; the twist `c`.
    pub c_prime_twist: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub condition1: bool,
    pub condition2: bool,
    pub open_case: bool,
    pub wa_obstructed: bool,
}

impl From<&ParityVerdict> for Verdict {
    fn from(v: &ParityVerdict) -> Verdict {
        Verdict { condition1: v.condition1, condition2: v.condition2, open_case: v.open_case, wa_obstructed: v.wa_obstructed }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Rt {
    pub sets: Vec<RtEntry>,
    pub verdict: Verdict,
}

pub fn rt(b: &BrauerGroupOfG) -> Result<Rt> {
    let sets = b
        .candidates
        .iter()
        .map(|(g, _)| {
            Ok(RtEntry {
                t: g.t.to_string(),
                r_t: (&g.r_set()).into(),
                r_prime_t: g.r_prime_set().ok().map(|r| (&r.set).into()),
                c_prime_twist: g.c_prime_twist().to_string(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Rt { sets, verdict: (&crate::brauer::parity_criterion(b)).into() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Profile {
    pub place: Place,
    /// Achievable value vectors, one entry per generator, with a witness.
    pub values: Vec<ProfileValue>,
    pub constant: bool,
    pub depth: u32,
    pub saturation_depth: u32,
    pub saturated: bool,
    pub samples: usize,
    pub solvable_samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileValue {
    pub value: Vec<Half>,
    pub witness_t: String,
}

fn profile(p: &LocalProfile, n: usize) -> Profile {
    Profile {
        place: p.place.clone(),
        values: p
            .achievable
            .iter()
            .map(|(m, t)| ProfileValue { value: LocalProfile::unpack(*m, n), witness_t: t.to_string() })
            .collect(),
        constant: p.is_constant(),
        depth: p.depth,
        saturation_depth: p.saturation_depth,
        saturated: p.saturated,
        samples: p.samples,
        solvable_samples: p.solvable_samples,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    pub generators: Vec<String>,
    pub profiles: Vec<Profile>,
    pub margin: Vec<Place>,
    pub sums: Vec<Vec<Half>>,
    pub zero_reachable: bool,
    /// `(v, t_v)` making the invariants sum to zero.
    pub selection: Option<Vec<(Place, String)>>,
    pub wa_obstructed: bool,
    pub verdict: Verdict,
    pub zero_cycle_deg1: bool,
    pub zero_cycle_note: String,
    pub suggested_d: Option<String>,
    pub suggestion: Suggestion,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Suggestion {
    Found { d: String, generator: String, conditions: Vec<(Place, String, bool)>, undecided: Vec<Place> },
    NotApplicable { reason: String },
}

pub fn obstruction(r: &AdelicReport) -> Obstruction {
    let n = r.generators.len();
    let (suggested_d, suggestion) = match &r.suggestion {
        Ok(s) => (
            Some(s.d.to_string()),
            Suggestion::Found {
                d: s.d.to_string(),
                generator: s.generator.clone(),
                conditions: s.conditions.clone(),
                undecided: s.undecided.clone(),
            },
        ),
        Err(e) => (None, Suggestion::NotApplicable { reason: e.clone() }),
    };
    Obstruction {
        generators: r.generators.clone(),
        profiles: r.profiles.iter().map(|p| profile(p, n)).collect(),
        margin: r.margin.clone(),
        sums: r.sums.iter().map(|m| LocalProfile::unpack(*m, n)).collect(),
        zero_reachable: r.zero_reachable,
        selection: r.selection.as_ref().map(|s| s.iter().map(|(v, t)| (v.clone(), t.to_string())).collect()),
        wa_obstructed: r.wa_obstructed,
        verdict: (&r.verdict).into(),
        zero_cycle_deg1: r.zero_cycle_deg1,
        zero_cycle_note: r.zero_cycle_note.clone(),
        suggested_d,
        suggestion,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Evaluation {
    pub place: Place,
    pub t: String,
    pub fiber_solvable: bool,
    /// Per generator: the value, or why it is undefined.
    pub values: BTreeMap<String, EvalValue>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalValue {
    Value(Half),
    Undefined(String),
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Points {
    pub verified: Vec<CheckedPoint>,
    pub found: Vec<FoundPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckedPoint {
    pub coords: Vec<String>,
    pub on_x: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundPoint {
    pub d: Option<String>,
    pub point: String,
    /// Image in P¹ of the pair `{x, x̄}`, when the pair is not a line.
    pub base_point: Option<String>,
}

pub fn checked_point(p: &Pencil, coords: &[impl AsRef<str>]) -> Result<CheckedPoint> {
    let pt = parse_point(coords)?;
    Ok(CheckedPoint { coords: coords.iter().map(|c| c.as_ref().to_string()).collect(), on_x: verify_point(p, &pt) })
}

pub fn found_point(p: &Pencil, x: &QuadraticPoint) -> FoundPoint {
    FoundPoint {
        d: x.d().map(BigInt::to_string),
        point: x.to_string(),
        base_point: (!x.is_rational())
            .then(|| crate::points::pair_to_base_point(p, x, None).ok())
            .flatten()
            .map(|t: PointP1| t.to_string()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub p: String,
    pub certificate: SplitCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<[u32; 5]>,
    /// `None` when every minor vanishes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_w: Option<Option<u32>>,
    /// `null` when undecided.
    pub local_point: Option<bool>,
}

pub fn reduction(pencil: &Pencil, p: u64, weights: Option<[u32; 5]>) -> Reduction {
    let m = IntegralModel::from_pencil(pencil, &BigInt::from(p));
    Reduction {
        p: p.to_string(),
        certificate: split_fiber_certificate(&m),
        weights,
        mult_w: weights.map(|w| mult_w(&m, &w)),
        local_point: has_local_point(pencil, &Place::p(p)),
    }
}

/// Every section except evaluation and reduction. `points` lists the
/// bundled points when there are any.
pub fn full(p: &Pencil, depth: u32, points: &[&[&str]]) -> Result<Report> {
    let l = p.singular_locus()?;
    let b = brauer_group(p, &l)?;
    let adelic = adelic_report(p, &l, &b, depth)?;
    let mut r = Report::new(p);
    r.normalization = Some(normalization(p));
    r.smoothness = Some(smoothness(p));
    r.singular_locus = Some(locus(&l));
    r.brauer = Some(brauer(&b));
    r.rt = Some(rt(&b)?);
    r.obstruction = Some(obstruction(&adelic));
    r.points = Some(Points {
        verified: points.iter().map(|c| checked_point(p, c)).collect::<Result<_>>()?,
        found: Vec::new(),
    });
    Ok(r)
}
