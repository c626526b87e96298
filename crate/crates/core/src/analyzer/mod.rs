//! Problem files, the empirical pipeline (scan, fit, modular verification)
//! and the certified reduction driver, both ending in a `StructureReport`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{
    apply, classify_orbit, iterate_lattice, on_curve_exact, on_curve_modular, Curve, ModularParams, MonomialAffineMap,
    OrbitClassification, TorusPoint,
};
use crate::fp::Fp;
use crate::lattice::{PointRep, Subgroup, SupportBasis};
use crate::linalg::from_i64;
use crate::lrs::{parse_q, CertStatus, SearchBounds};
use crate::reduction::{
    build_claim_sequences, preperiodic_structure, simplify_if_infinite_ap, solve_union, FSetInput, GroupContext,
};
use crate::seq::{fmt_rat, ArithProg, IndexSet, PArithSeq};
use crate::{Error, Result};

#[derive(Clone, Debug, Deserialize)]
pub struct MapSpec {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FSetSpec {
    Forbit { r1: Vec<String>, r2: Vec<String>, k: u32 },
    Coset { r: Vec<String>, generators: Vec<Vec<String>> },
    OrbitProduct { r: Vec<String>, factors: Vec<Vec<String>>, k: u32 },
}

/// Optional parameter block inside a problem file.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct ParamOverrides {
    pub nmax: Option<u64>,
    pub horizon: Option<u64>,
    pub kmax: Option<u32>,
    pub modular_degree: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ProblemSpec {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: usize,
    pub map: MapSpec,
    pub alpha: Vec<String>,
    pub variety: Vec<String>,
    #[serde(default)]
    pub fsets: Option<Vec<FSetSpec>>,
    #[serde(default)]
    pub params: Option<ParamOverrides>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub nmax: u64,
    pub horizon: u64,
    pub kmax: u32,
    pub modular: ModularParams,
    /// sampled members and non-members per infinite component
    pub samples: usize,
    /// replay bound for orbit classification
    pub classify_bound: u64,
    pub lrs_nmax: u64,
    pub lrs_mmax: u32,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            nmax: 200,
            horizon: 1_000_000,
            kmax: 4,
            modular: ModularParams::default(),
            samples: 20,
            classify_bound: 1000,
            lrs_nmax: 10_000,
            lrs_mmax: 60,
        }
    }
}

impl Params {
    pub fn apply(&mut self, o: &ParamOverrides) {
        if let Some(x) = o.nmax {
            self.nmax = x;
        }
        if let Some(x) = o.horizon {
            self.horizon = x;
        }
        if let Some(x) = o.kmax {
            self.kmax = x;
        }
        if let Some(x) = o.modular_degree {
            self.modular.degree = x;
        }
        if let Some(x) = o.trials {
            self.modular.trials = x;
        }
        if let Some(x) = o.seed {
            self.modular.seed = x;
        }
    }

    fn bounds(&self) -> SearchBounds {
        SearchBounds { n_max: self.lrs_nmax, m_max: self.lrs_mmax }
    }
}

/// A parsed and validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub field: Fp,
    pub phi: MonomialAffineMap,
    pub alpha: TorusPoint,
    pub curve: Curve,
    pub fsets: Option<Vec<FSetSpec>>,
    pub overrides: ParamOverrides,
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("problem file: {e}")))?;
        Self::from_spec(spec)
    }

    pub fn from_spec(spec: ProblemSpec) -> Result<Self> {
        let field = Fp::new(spec.p)?;
        let n = spec.n;
        if n == 0 {
            return Err(Error::Invalid("N must be positive".into()));
        }
        if spec.map.matrix.len() != n || spec.map.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("matrix must be {n}x{n}")));
        }
        for (what, v) in [("translation", &spec.map.translation), ("alpha", &spec.alpha)] {
            if v.len() != n {
                return Err(Error::Invalid(format!("{what} has {} entries, expected {n}", v.len())));
            }
        }
        let phi = MonomialAffineMap::new(from_i64(&spec.map.matrix), TorusPoint::parse(&spec.map.translation, field)?)?;
        let alpha = TorusPoint::parse(&spec.alpha, field)?;
        let curve = Curve::parse(&spec.variety, field, n)?;
        if let Some(fs) = &spec.fsets {
            for f in fs {
                let pts: Vec<&Vec<String>> = match f {
                    FSetSpec::Forbit { r1, r2, .. } => vec![r1, r2],
                    FSetSpec::Coset { r, generators } => std::iter::once(r).chain(generators).collect(),
                    FSetSpec::OrbitProduct { r, factors, .. } => std::iter::once(r).chain(factors).collect(),
                };
                for v in pts {
                    if v.len() != n {
                        return Err(Error::Invalid(format!("F-set point has {} coordinates, expected {n}", v.len())));
                    }
                    TorusPoint::parse(v, field)?;
                }
            }
        }
        Ok(Problem { field, phi, alpha, curve, fsets: spec.fsets, overrides: spec.params.unwrap_or_default() })
    }

    /// Defaults, then the file's parameter block.
    pub fn params(&self) -> Params {
        let mut p = Params::default();
        p.apply(&self.overrides);
        p
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    /// α and y over a fresh support basis.
    pub fn lattice(&self) -> Result<LatticeView> {
        let mut basis = SupportBasis::new(self.field);
        let alpha = basis.encode(self.alpha.coords())?;
        let y = basis.encode(self.phi.y.coords())?;
        Ok(LatticeView { order: basis.torsion_order(), basis, alpha, y })
    }
}

#[derive(Clone, Debug)]
pub struct LatticeView {
    pub basis: SupportBasis,
    pub alpha: PointRep,
    pub y: PointRep,
    pub order: u64,
}

impl LatticeView {
    pub fn orbit_point(&self, phi: &MonomialAffineMap, n: u64) -> PointRep {
        iterate_lattice(&phi.a, &self.alpha, &self.y, &BigUint::from(n), self.order)
    }
}

/// Exact scan result; `reached` is the largest n actually tested.
#[derive(Clone, Debug, Serialize)]
pub struct Scan {
    pub hits: Vec<u64>,
    pub reached: u64,
    pub warning: Option<String>,
}

/// All n ≤ nmax with Φⁿ(α) ∈ V, by exact iteration. Stops early with a
/// warning once the degree cap is hit.
pub fn scan_returns(problem: &Problem, nmax: u64) -> Result<Scan> {
    let mut x = problem.alpha.clone();
    let mut hits = Vec::new();
    for n in 0..=nmax {
        if n > 0 {
            match apply(&problem.phi, &x) {
                Ok(next) => x = next,
                Err(e @ Error::DegreeCap { .. }) => {
                    return Ok(Scan { hits, reached: n - 1, warning: Some(format!("scan truncated at n = {}: {e}", n - 1)) })
                }
                Err(e) => return Err(e),
            }
        }
        match on_curve_exact(&problem.curve, &x) {
            Ok(true) => hits.push(n),
            Ok(false) => {}
            Err(e @ Error::DegreeCap { .. }) => {
                return Ok(Scan { hits, reached: n.saturating_sub(1), warning: Some(format!("scan truncated at n = {n}: {e}")) })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Scan { hits, reached: nmax, warning: None })
}

/// A single infinite component of a candidate structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Ap(ArithProg),
    PArith(PArithSeq),
}

impl Component {
    fn set(&self) -> IndexSet {
        match self {
            Component::Ap(a) => IndexSet::from_ap(*a),
            Component::PArith(p) => IndexSet::from_parith(p),
        }
    }

    fn describe(&self) -> String {
        match self {
            Component::Ap(a) => a.to_string(),
            Component::PArith(p) => p.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Component::Ap(a) => serde_json::to_value(a).unwrap(),
            Component::PArith(p) => serde_json::to_value(p).unwrap(),
        }
    }
}

fn components(s: &IndexSet) -> Vec<Component> {
    let mut out: Vec<Component> = s.aps.iter().filter(|a| a.m > 0).map(|a| Component::Ap(*a)).collect();
    out.extend(s.parith.iter().filter(|p| !p.is_singleton()).map(|p| Component::PArith(p.clone())));
    out
}

/// Members of an infinite AP in [lo, hi] must all be hits.
fn ap_consistent(start: u64, gap: u64, hi: u64, hits: &BTreeSet<u64>) -> usize {
    let mut count = 0;
    let mut x = start;
    while x <= hi {
        if !hits.contains(&x) {
            return 0;
        }
        count += 1;
        x += gap;
    }
    count
}

/// Hits of a p-arithmetic sequence in [lo, hi], or `None` when a predicted
/// member in that range is missing.
fn parith_consistent(s: &PArithSeq, lo: u64, hi: u64, hits: &BTreeSet<u64>) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for x in IndexSet::from_parith(s).members_up_to(hi) {
        if x < lo {
            continue;
        }
        if !hits.contains(&x) {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

/// Candidate structure explaining `hits` on [0, nmax]: progressions with
/// at least three consistent points first, then p-arithmetic sequences
/// through pairs of remaining hits, then the leftovers as a finite set.
pub fn fit_structure(hits: &[u64], nmax: u64, p: u64, kmax: u32) -> IndexSet {
    fit_excluding(hits, nmax, p, kmax, &[])
}

fn fit_excluding(hits: &[u64], nmax: u64, p: u64, kmax: u32, banned: &[Component]) -> IndexSet {
    let all: BTreeSet<u64> = hits.iter().copied().filter(|&h| h <= nmax).collect();
    let mut rest = all.clone();
    let mut out = IndexSet::empty();
    // progressions
    loop {
        let v: Vec<u64> = rest.iter().copied().collect();
        let mut best: Option<(usize, ArithProg)> = None;
        for (i, &h0) in v.iter().enumerate() {
            for &h1 in &v[i + 1..] {
                let g = h1 - h0;
                let mut start = h0;
                while start >= g && all.contains(&(start - g)) {
                    start -= g;
                }
                let ap = ArithProg::new(g, start);
                if banned.contains(&Component::Ap(ap)) {
                    continue;
                }
                let count = ap_consistent(start, g, nmax, &all);
                if count >= 3 && best.is_none_or(|(c, _)| count > c) {
                    best = Some((count, ap));
                }
            }
        }
        let Some((_, ap)) = best else { break };
        rest.retain(|&x| !ap.contains(x));
        out = out.union(&IndexSet::from_ap(ap));
    }
    // p-arithmetic sequences
    loop {
        let v: Vec<u64> = rest.iter().copied().collect();
        let mut best: Option<(usize, PArithSeq)> = None;
        for k in 1..=kmax {
            let pk = BigRational::from_integer(BigInt::from(p).pow(k));
            for (i, &h0) in v.iter().enumerate() {
                for &h1 in &v[i + 1..] {
                    let a = BigRational::from_integer((h1 - h0).into()) / (&pk - BigRational::one());
                    let mut s = PArithSeq::new(a.clone(), BigRational::from_integer(h0.into()) - a, k, p);
                    // extend backwards while the previous term is a hit
                    loop {
                        let prev = PArithSeq::new(&s.a / &pk, s.b.clone(), k, p);
                        let v0 = prev.value(0);
                        match v0.to_integer().to_u64() {
                            Some(x) if v0.is_integer() && all.contains(&x) && x < h0 => s = prev,
                            _ => break,
                        }
                    }
                    if banned.contains(&Component::PArith(s.clone())) {
                        continue;
                    }
                    let lo = s.value(0).to_integer().to_u64().unwrap_or(0);
                    let Some(members) = parith_consistent(&s, lo, nmax, &all) else { continue };
                    let fresh = members.iter().filter(|x| rest.contains(x)).count();
                    if members.len() >= 3 && fresh >= 1 && best.as_ref().is_none_or(|(c, _)| fresh > *c) {
                        best = Some((fresh, s));
                    }
                }
            }
        }
        let Some((_, s)) = best else { break };
        let set = IndexSet::from_parith(&s);
        rest.retain(|&x| !set.contains(x));
        out = out.union(&set);
    }
    out.union(&IndexSet::from_finite(rest)).canonicalize()
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentStatus {
    pub component: Value,
    pub description: String,
    pub status: String,
    /// member indices confirmed as hits (exact scan or modular check)
    pub confirmed: Vec<u64>,
    /// sampled non-members confirmed as misses
    pub sampled_misses: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorBounds {
    /// largest false-hit probability over the modular checks that hit
    pub modular_false_hit_max: f64,
    pub modular_checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub mode: String,
    pub hits: Vec<u64>,
    pub scan: Scan,
    pub structure: IndexSet,
    pub statuses: Vec<ComponentStatus>,
    pub orbit: OrbitClassification,
    pub params: Params,
    pub error_bounds: ErrorBounds,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub downgrades: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub demoted: Vec<String>,
}

/// Modular membership oracle for orbit points of one problem.
pub struct ModularOracle<'a> {
    problem: &'a Problem,
    view: LatticeView,
    params: ModularParams,
    pub checks: usize,
    pub max_error: f64,
}

impl<'a> ModularOracle<'a> {
    pub fn new(problem: &'a Problem, params: ModularParams) -> Result<Self> {
        Ok(ModularOracle { problem, view: problem.lattice()?, params, checks: 0, max_error: 0.0 })
    }

    pub fn hit(&mut self, n: u64) -> Result<bool> {
        let rep = self.view.orbit_point(&self.problem.phi, n);
        let out = on_curve_modular(&self.problem.curve, &rep, &self.view.basis, &self.params)?;
        self.checks += 1;
        if out.hit {
            self.max_error = self.max_error.max(out.error_bound);
        }
        Ok(out.hit)
    }
}

fn verified_label(params: &Params) -> String {
    format!(
        "verified(probabilistic, degree={}, trials={}, seed={}, horizon={})",
        params.modular.degree, params.modular.trials, params.modular.seed, params.horizon
    )
}

/// Up to `count` members of `c` in (lo, hi], spread over the range.
fn sample_members(c: &Component, lo: u64, hi: u64, count: usize) -> Vec<u64> {
    match c {
        Component::PArith(_) => c.set().members_up_to(hi).into_iter().filter(|&x| x > lo).collect(),
        Component::Ap(a) => {
            let first = if a.l > lo { a.l } else { a.l + ((lo - a.l) / a.m + 1) * a.m };
            if first > hi {
                return Vec::new();
            }
            let total = (hi - first) / a.m + 1;
            let picks = (count as u64).min(total).max(1);
            let mut out: Vec<u64> = (0..picks)
                .map(|i| first + a.m * if picks == 1 { 0 } else { i * (total - 1) / (picks - 1) })
                .collect();
            out.dedup();
            out
        }
    }
}

/// Non-members of `full` strictly between consecutive points of `marks`.
fn sample_gaps(marks: &[u64], full: &IndexSet, count: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let gaps: Vec<(u64, u64)> = marks.windows(2).filter(|w| w[1] > w[0] + 1).map(|w| (w[0] + 1, w[1] - 1)).collect();
    let mut out = BTreeSet::new();
    if gaps.is_empty() {
        return Vec::new();
    }
    let mut tries = 0;
    while out.len() < count && tries < 50 * count {
        let (lo, hi) = gaps[tries % gaps.len()];
        let n = rng.gen_range(lo..=hi);
        if !full.contains(n) {
            out.insert(n);
        }
        tries += 1;
    }
    out.into_iter().collect()
}

/// Outcome of checking one candidate.
struct Pass {
    kept: Vec<(Component, ComponentStatus)>,
    demoted: Vec<Component>,
}

fn verify_pass(
    candidate: &IndexSet,
    scan: &Scan,
    params: &Params,
    oracle: &mut ModularOracle<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Pass> {
    let mut kept = Vec::new();
    let mut demoted = Vec::new();
    for c in components(candidate) {
        let in_scan: Vec<u64> = c.set().members_up_to(scan.reached).into_iter().collect();
        let predicted = sample_members(&c, scan.reached, params.horizon, params.samples);
        let mut confirmed = in_scan.clone();
        let mut failure = None;
        for &n in &predicted {
            if oracle.hit(n)? {
                confirmed.push(n);
            } else {
                failure = Some(format!("predicted member {n} is not a return"));
                break;
            }
        }
        let mut misses = Vec::new();
        if failure.is_none() {
            let mut marks = vec![scan.reached];
            marks.extend(predicted.iter().copied());
            for n in sample_gaps(&marks, candidate, params.samples, rng) {
                if oracle.hit(n)? {
                    failure = Some(format!("sampled non-member {n} is a return"));
                    break;
                }
                misses.push(n);
            }
        }
        match failure {
            None => {
                let status = ComponentStatus {
                    component: c.json(),
                    description: c.describe(),
                    status: verified_label(params),
                    confirmed,
                    sampled_misses: misses,
                    note: None,
                };
                kept.push((c, status));
            }
            Some(_) => demoted.push(c),
        }
    }
    Ok(Pass { kept, demoted })
}

pub struct Verification {
    pub structure: IndexSet,
    pub statuses: Vec<ComponentStatus>,
    pub error_bounds: ErrorBounds,
    /// components contradicted by a modular check
    pub demoted: Vec<String>,
}

/// Checks every infinite component of `candidate` beyond the scan range;
/// contradicted components are dropped and the hits refitted once.
pub fn verify_structure(problem: &Problem, candidate: &IndexSet, scan: &Scan, params: &Params) -> Result<Verification> {
    let mut oracle = ModularOracle::new(problem, params.modular)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.modular.seed);
    let mut pass = verify_pass(candidate, scan, params, &mut oracle, &mut rng)?;
    let mut notes = Vec::new();
    if !pass.demoted.is_empty() {
        notes.extend(pass.demoted.iter().map(|c| format!("demoted {}", c.describe())));
        let refit = fit_excluding(&scan.hits, scan.reached, problem.field.p(), params.kmax, &pass.demoted);
        let second = verify_pass(&refit, scan, params, &mut oracle, &mut rng)?;
        notes.extend(second.demoted.iter().map(|c| format!("demoted {}", c.describe())));
        pass.kept = second.kept;
    }
    let mut structure = IndexSet::empty();
    for (c, _) in &pass.kept {
        structure = structure.union(&c.set());
    }
    let leftover: Vec<u64> = scan.hits.iter().copied().filter(|&h| !structure.contains(h)).collect();
    structure = structure.union(&IndexSet::from_finite(leftover.iter().copied())).canonicalize();
    let mut statuses: Vec<ComponentStatus> = pass.kept.into_iter().map(|(_, s)| s).collect();
    if !leftover.is_empty() || statuses.is_empty() {
        statuses.push(ComponentStatus {
            component: serde_json::json!({ "type": "finite", "values": leftover }),
            description: format!("{}", IndexSet::from_finite(leftover.iter().copied())),
            status: CertStatus::VerifiedToBound(scan.reached).to_string(),
            confirmed: leftover,
            sampled_misses: Vec::new(),
            note: None,
        });
    }
    let error_bounds = ErrorBounds { modular_false_hit_max: oracle.max_error, modular_checks: oracle.checks };
    Ok(Verification { structure, statuses, error_bounds, demoted: notes })
}

fn classify(problem: &Problem, params: &Params) -> Result<OrbitClassification> {
    let v = problem.lattice()?;
    Ok(classify_orbit(&problem.phi.a, &v.alpha, &v.y, v.order, params.classify_bound))
}

/// scan → fit → verify.
pub fn analyze(problem: &Problem, params: &Params) -> Result<StructureReport> {
    let scan = scan_returns(problem, params.nmax)?;
    let candidate = fit_structure(&scan.hits, scan.reached, problem.field.p(), params.kmax);
    let v = verify_structure(problem, &candidate, &scan, params)?;
    Ok(StructureReport {
        mode: "empirical".into(),
        hits: scan.hits.clone(),
        scan,
        structure: v.structure,
        statuses: v.statuses,
        orbit: classify(problem, params)?,
        params: params.clone(),
        error_bounds: v.error_bounds,
        downgrades: Vec::new(),
        demoted: v.demoted,
    })
}

fn encode_fset(ctx: &mut GroupContext, f: &FSetSpec) -> Result<FSetInput> {
    let field = ctx.basis.field();
    let mut enc = |v: &[String]| -> Result<PointRep> { ctx.encode(&TorusPoint::parse(v, field)?) };
    Ok(match f {
        FSetSpec::Forbit { r1, r2, k } => FSetInput::FOrbit { r1: enc(r1)?, r2: enc(r2)?, k: *k },
        FSetSpec::OrbitProduct { r, factors, k } => FSetInput::OrbitProduct {
            r: enc(r)?,
            factors: factors.iter().map(|q| enc(q)).collect::<Result<_>>()?,
            k: *k,
        },
        FSetSpec::Coset { r, generators } => {
            let r = enc(r)?;
            let gens = generators.iter().map(|g| enc(g)).collect::<Result<Vec<_>>>()?;
            let h = Subgroup::new(gens, ctx.dim(), ctx.width(), ctx.order())?;
            FSetInput::Coset { r, h }
        }
    })
}

/// The certified path: reduce the given F-sets to recurrence equations,
/// then cross-check against the exact scan.
pub fn run_reduction(problem: &Problem, params: &Params) -> Result<StructureReport> {
    let fsets = problem.fsets.as_ref().ok_or_else(|| Error::Invalid("reduction needs \"fsets\"".into()))?;
    let mut ctx = GroupContext::new(&problem.phi, &problem.alpha)?;
    let seqs = build_claim_sequences(&ctx)?;
    let inputs = fsets.iter().map(|f| encode_fset(&mut ctx, f)).collect::<Result<Vec<_>>>()?;
    let orbit = classify(problem, params)?;
    let scan = scan_returns(problem, params.nmax)?;
    let mut oracle = ModularOracle::new(problem, params.modular)?;
    let (structure, status, downgrades) = match &orbit {
        OrbitClassification::Preperiodic { preperiod, period } => {
            let hits: BTreeSet<u64> = scan.hits.iter().copied().collect();
            let set = if preperiod + period <= scan.reached + 1 {
                preperiodic_structure(*preperiod, *period, |n| Ok(hits.contains(&n)))?
            } else {
                let mut x = problem.alpha.clone();
                let mut on = Vec::new();
                for _ in 0..preperiod + period {
                    on.push(on_curve_exact(&problem.curve, &x)?);
                    x = apply(&problem.phi, &x)?;
                }
                preperiodic_structure(*preperiod, *period, |n| Ok(on[n as usize]))?
            };
            (set, CertStatus::Proved, Vec::new())
        }
        _ => {
            let solved = solve_union(&ctx, &seqs, &inputs, &params.bounds())?;
            let hits = solved.set.members_up_to(scan.reached);
            let simplified =
                simplify_if_infinite_ap(&solved.set, &hits, params.horizon, params.samples, |n| oracle.hit(n))?;
            let status = if simplified != solved.set && !solved.status.is_proved() {
                solved.status.and(CertStatus::VerifiedToBound(params.horizon))
            } else {
                solved.status
            };
            (simplified, status, solved.downgrades)
        }
    };
    let predicted: Vec<u64> = structure.members_up_to(scan.reached).into_iter().collect();
    if predicted != scan.hits {
        return Err(Error::CrossCheck(format!(
            "reduction predicts {:?} on [0, {}] but the exact scan finds {:?}",
            predicted, scan.reached, scan.hits
        )));
    }
    let statuses = component_statuses(&structure, status, &scan);
    Ok(StructureReport {
        mode: "reduction".into(),
        hits: scan.hits.clone(),
        scan,
        structure,
        statuses,
        orbit,
        params: params.clone(),
        error_bounds: ErrorBounds { modular_false_hit_max: oracle.max_error, modular_checks: oracle.checks },
        downgrades,
        demoted: Vec::new(),
    })
}

fn component_statuses(s: &IndexSet, status: CertStatus, scan: &Scan) -> Vec<ComponentStatus> {
    let label = status.to_string();
    let mut out: Vec<ComponentStatus> = components(s)
        .into_iter()
        .map(|c| ComponentStatus {
            component: c.json(),
            description: c.describe(),
            status: label.clone(),
            confirmed: c.set().members_up_to(scan.reached).into_iter().collect(),
            sampled_misses: Vec::new(),
            note: None,
        })
        .collect();
    let mut finite: Vec<u64> = s.finite.iter().copied().collect();
    finite.extend(s.aps.iter().filter(|a| a.m == 0).map(|a| a.l));
    let big: Vec<String> = s.parith.iter().filter(|p| p.is_singleton()).map(|p| fmt_rat(&p.value(0))).collect();
    if !finite.is_empty() || !big.is_empty() || out.is_empty() {
        out.push(ComponentStatus {
            component: serde_json::json!({ "type": "finite", "values": finite, "large_values": big }),
            description: format!("{}", IndexSet::from_finite(finite.iter().copied())),
            status: label,
            confirmed: finite.iter().copied().filter(|&x| x <= scan.reached).collect(),
            sampled_misses: Vec::new(),
            note: None,
        });
    }
    out
}

/// Reads an index-set component from JSON: {"type":"ap","m","l"},
/// {"type":"parith","a","b","k","p"} or {"finite":[...]}.
pub fn parse_component(v: &Value) -> Result<IndexSet> {
    let bad = || Error::Invalid(format!("not an index-set component: {v}"));
    let num = |key: &str| v.get(key).and_then(Value::as_u64).ok_or_else(bad);
    let q = |key: &str| -> Result<BigRational> {
        match v.get(key) {
            Some(Value::String(s)) => parse_q(s),
            Some(Value::Number(n)) => parse_q(&n.to_string()),
            _ => Err(bad()),
        }
    };
    if let Some(Value::Array(xs)) = v.get("finite") {
        let values = xs.iter().map(|x| x.as_u64().ok_or_else(bad)).collect::<Result<Vec<_>>>()?;
        return Ok(IndexSet::from_finite(values));
    }
    match v.get("type").and_then(Value::as_str) {
        Some("ap") => Ok(IndexSet::from_ap(ArithProg::new(num("m")?, num("l")?))),
        Some("parith") => {
            let p = num("p")?;
            Fp::new(p)?;
            let k = u32::try_from(num("k")?).map_err(|_| bad())?;
            Ok(IndexSet::from_parith(&PArithSeq::new(q("a")?, q("b")?, k, p)))
        }
        _ => Err(bad()),
    }
}

impl StructureReport {
    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = format!("mode: {}\n", self.mode);
        s += &format!("hits (n <= {}): {:?}\n", self.scan.reached, self.hits);
        if let Some(w) = &self.scan.warning {
            s += &format!("warning: {w}\n");
        }
        s += &format!("structure: {}\n", self.structure);
        for st in &self.statuses {
            s += &format!("  {}  [{}]\n", st.description, st.status);
            if let Some(n) = &st.note {
                s += &format!("    note: {n}\n");
            }
        }
        for d in &self.downgrades {
            s += &format!("  downgraded by: {d}\n");
        }
        for d in &self.demoted {
            s += &format!("  {d}\n");
        }
        s += &format!("orbit: {}\n", serde_json::to_string(&self.orbit).unwrap());
        s += &format!(
            "modular checks: {}, max false-hit probability {:.3e}\n",
            self.error_bounds.modular_checks, self.error_bounds.modular_false_hit_max
        );
        s
    }
}
