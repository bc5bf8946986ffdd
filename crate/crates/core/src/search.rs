//! Maximality, enumeration of point sets up to AGL(2,q), bound sweeps,
//! completion of sets to `q` points, and conjecture hunts.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::evaluate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geometry::{affine_group, direction_mask, directions_of, AffinePoint, AffinePointSet, Collineation};
use crate::verdict::{Rational, Statement, Verdict};

/// True when every one-point extension determines more directions. Only the
/// directions from the new point to `U` can be new.
pub fn is_maximal(u: &AffinePointSet) -> bool {
    let f = u.field();
    let q = f.order();
    let mask = direction_mask(u);
    u.complement().all(|p| {
        u.points().iter().any(|&x| {
            let d = crate::geometry::direction_of(f, p, x).expect("distinct points");
            !mask[d.codec(q) as usize]
        })
    })
}

/// Reference version recomputing the direction set of every extension.
pub fn is_maximal_naive(u: &AffinePointSet) -> bool {
    let n = directions_of(u).len();
    u.complement().all(|p| directions_of(&u.with_point(p)).len() > n)
}

/// `GL(2,q)` as the linear parts of the affine group.
fn linear_group(f: &Field) -> Vec<Collineation> {
    affine_group(f).into_iter().filter(|c| c.v[0].is_zero() && c.v[1].is_zero()).collect()
}

/// Canonical forms under AGL(2,q): the lexicographically least sorted codec
/// list in the orbit. The least image always contains the origin, so only
/// translations taking a point of the set to the origin are tried.
pub struct Canonizer {
    field: Field,
    linear: Vec<Collineation>,
}

impl Canonizer {
    pub fn new(f: &Field) -> Self {
        Canonizer { field: f.clone(), linear: linear_group(f) }
    }

    pub fn canonical(&self, codecs: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let q = f.order();
        let pts: Vec<AffinePoint> = codecs.iter().map(|&c| AffinePoint::from_codec(c, q)).collect();
        let mut best: Option<Vec<u32>> = None;
        let mut img = Vec::with_capacity(pts.len());
        for &base in &pts {
            let shifted: Vec<AffinePoint> =
                pts.iter().map(|p| AffinePoint::new(f.sub(p.a, base.a), f.sub(p.b, base.b))).collect();
            for g in &self.linear {
                img.clear();
                img.extend(shifted.iter().map(|&p| g.apply_point(f, p).codec(q)));
                img.sort_unstable();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img.clone());
                }
            }
        }
        best.unwrap_or_default()
    }

    pub fn canonical_set(&self, u: &AffinePointSet) -> AffinePointSet {
        AffinePointSet::from_codecs(&self.field, &self.canonical(&u.codecs())).expect("in range")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random { seed: u64, budget: u64 },
}

fn default_true() -> bool {
    true
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub q: u32,
    pub n_min: usize,
    pub n_max: usize,
    pub mode: Mode,
    #[serde(default = "default_true")]
    pub symmetry: bool,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub statements: Vec<Statement>,
    /// Directory receiving replay files for counterexamples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay_dir: Option<PathBuf>,
}

impl SearchConfig {
    pub fn exhaustive(q: u32, n_min: usize, n_max: usize) -> Self {
        SearchConfig {
            q,
            n_min,
            n_max,
            mode: Mode::Exhaustive,
            symmetry: false,
            workers: 1,
            statements: Vec::new(),
            replay_dir: None,
        }
    }

    pub fn random(q: u32, n_min: usize, n_max: usize, seed: u64, budget: u64) -> Self {
        SearchConfig { mode: Mode::Random { seed, budget }, ..SearchConfig::exhaustive(q, n_min, n_max) }
    }

    pub fn field(&self) -> Result<Field> {
        Field::of_order(self.q)
    }

    pub fn validate(&self) -> Result<Field> {
        let f = self.field()?;
        let cells = (self.q as usize) * (self.q as usize);
        if self.n_min > self.n_max || self.n_max > cells {
            return Err(Error::InvalidSpec(format!(
                "size range [{}, {}] infeasible in AG(2,{})",
                self.n_min, self.n_max, self.q
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidSpec("workers must be positive".into()));
        }
        Ok(f)
    }
}

fn combinations_of(total: u32, k: usize, mut visit: impl FnMut(&[u32])) {
    if k as u32 > total {
        return;
    }
    let mut idx: Vec<u32> = (0..k as u32).collect();
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < total - (k - i) as u32 {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Orbit representatives of every size up to `n_max`, grown one point at a
/// time: each orbit of size `k+1` contains an extension of a size-`k`
/// representative.
fn orbit_levels(f: &Field, n_max: usize) -> Vec<BTreeSet<Vec<u32>>> {
    let canon = Canonizer::new(f);
    let cells = f.order() * f.order();
    let mut levels = vec![BTreeSet::from([Vec::new()])];
    for _ in 0..n_max {
        let prev = levels.last().expect("nonempty");
        let next: BTreeSet<Vec<u32>> = prev
            .par_iter()
            .flat_map_iter(|rep| {
                (0..cells).filter(|c| !rep.contains(c)).map(|c| {
                    let mut ext = rep.clone();
                    ext.push(c);
                    canon.canonical(&ext)
                })
            })
            .collect();
        levels.push(next);
    }
    levels
}

/// The sets a configuration streams, in order.
pub fn enumerate_sets(cfg: &SearchConfig) -> Result<Vec<AffinePointSet>> {
    let f = cfg.validate()?;
    let cells = f.order() * f.order();
    let mut out = Vec::new();
    match &cfg.mode {
        Mode::Exhaustive if cfg.symmetry => {
            let levels = orbit_levels(&f, cfg.n_max);
            for level in &levels[cfg.n_min..=cfg.n_max] {
                for rep in level {
                    out.push(AffinePointSet::from_codecs(&f, rep)?);
                }
            }
        }
        Mode::Exhaustive => {
            for k in cfg.n_min..=cfg.n_max {
                combinations_of(cells, k, |c| out.push(AffinePointSet::from_codecs(&f, c).expect("in range")));
            }
        }
        Mode::Random { seed, budget } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let canon = cfg.symmetry.then(|| Canonizer::new(&f));
            for _ in 0..*budget {
                let k = rng.gen_range(cfg.n_min..=cfg.n_max);
                let codecs: Vec<u32> = sample(&mut rng, cells as usize, k).into_iter().map(|c| c as u32).collect();
                let codecs = match &canon {
                    Some(c) => c.canonical(&codecs),
                    None => codecs,
                };
                out.push(AffinePointSet::from_codecs(&f, &codecs)?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: u64,
    pub fail: u64,
    pub inapplicable: u64,
}

impl Tally {
    fn add(&mut self, v: &Verdict) {
        if !v.applicable {
            self.inapplicable += 1;
        } else if v.passed() {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub set_id: usize,
    pub statement: Statement,
    pub points: Vec<u32>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_file: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Alarm {
    pub set_id: usize,
    pub statement: Statement,
    pub points: Vec<u32>,
    pub message: String,
}

/// One line of the CSV summary.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub set_id: usize,
    pub statement: Statement,
    pub n: usize,
    pub d_size: usize,
    pub s: Option<u32>,
    pub t: Option<u32>,
    pub deg_x_h: Option<usize>,
    pub case: Option<u8>,
    /// `None` when the statement does not apply.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub sets_examined: usize,
    /// Distinct canonical forms among the examined sets, with symmetry on.
    pub canonical_representatives: Option<usize>,
    pub tallies: BTreeMap<Statement, Tally>,
    pub counterexamples: Vec<Counterexample>,
    pub alarms: Vec<Alarm>,
    /// First set per size attaining `|D| = (|U|+3)/2` under the prime-order
    /// dichotomy.
    pub sharp: BTreeMap<usize, Vec<u32>>,
    /// Sets passing the maximality filter of a hunt.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_sets: Option<usize>,
    pub rows: Vec<Row>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SearchReport {
    pub fn failed(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

struct SetOutcome {
    n: usize,
    d_size: usize,
    invariants: Option<(u32, u32, Option<usize>)>,
    verdicts: Vec<(Statement, std::result::Result<Verdict, String>)>,
}

fn examine(u: &AffinePointSet, statements: &[Statement]) -> SetOutcome {
    let d = directions_of(u);
    let invariants = if u.len() <= u.field().order() as usize && !d.is_empty() {
        crate::redei::invariants(u).ok().map(|r| (r.s, r.t, r.deg_x_h))
    } else {
        None
    };
    let verdicts = statements.iter().map(|&st| (st, evaluate(st, u).map_err(|e| e.to_string()))).collect();
    SetOutcome { n: u.len(), d_size: d.len(), invariants, verdicts }
}

pub fn write_replay(dir: &std::path::Path, name: &str, u: &AffinePointSet) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, crate::io::format_point_set(u))?;
    Ok(path)
}

fn run_over(
    cfg: &SearchConfig,
    sets: Vec<AffinePointSet>,
    statements: &[Statement],
    start: Instant,
) -> Result<SearchReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let outcomes: Vec<SetOutcome> = pool.install(|| sets.par_iter().map(|u| examine(u, statements)).collect());

    let mut tallies: BTreeMap<Statement, Tally> = statements.iter().map(|&s| (s, Tally::default())).collect();
    let mut counterexamples = Vec::new();
    let mut alarms = Vec::new();
    let mut sharp = BTreeMap::new();
    let mut rows = Vec::new();
    for (id, (u, out)) in sets.iter().zip(&outcomes).enumerate() {
        for (st, res) in &out.verdicts {
            let (s, t, deg) = match out.invariants {
                Some((s, t, d)) => (Some(s), Some(t), d),
                None => (None, None, None),
            };
            match res {
                Ok(v) => {
                    tallies.get_mut(st).expect("listed").add(v);
                    if *st == Statement::SzonyiBlokhuis && v.passed() && v.case == Some(1) {
                        if crate::analysis::is_sztaab_sharp(u) {
                            sharp.entry(u.len()).or_insert_with(|| u.codecs());
                        }
                    }
                    if v.failed() {
                        let replay_file = match &cfg.replay_dir {
                            Some(dir) => Some(write_replay(dir, &format!("replay-{st}-{id}.pts"), u)?),
                            None => None,
                        };
                        counterexamples.push(Counterexample {
                            set_id: id,
                            statement: *st,
                            points: u.codecs(),
                            verdict: v.clone(),
                            replay_file,
                        });
                    }
                    rows.push(Row {
                        set_id: id,
                        statement: *st,
                        n: out.n,
                        d_size: out.d_size,
                        s,
                        t,
                        deg_x_h: deg,
                        case: v.case,
                        holds: v.applicable.then(|| v.passed()),
                    });
                }
                Err(msg) => alarms.push(Alarm { set_id: id, statement: *st, points: u.codecs(), message: msg.clone() }),
            }
        }
    }
    let canonical_representatives = cfg.symmetry.then(|| sets.iter().map(|u| u.codecs()).collect::<BTreeSet<_>>().len());
    Ok(SearchReport {
        config: cfg.clone(),
        sets_examined: sets.len(),
        canonical_representatives,
        tallies,
        counterexamples,
        alarms,
        sharp,
        maximal_sets: None,
        rows,
        wall_time: start.elapsed(),
    })
}

/// Applies the configured statements to every streamed set. Results do not
/// depend on the worker count: verdicts are collected in stream order.
pub fn sweep(cfg: &SearchConfig) -> Result<SearchReport> {
    let start = Instant::now();
    let sets = enumerate_sets(cfg)?;
    run_over(cfg, sets, &cfg.statements, start)
}

/// Streams sets of at most `q` points, keeps the maximal ones and applies a
/// conjecture report.
pub fn hunt(cfg: &SearchConfig, conjecture: Statement) -> Result<SearchReport> {
    if !conjecture.is_conjecture() {
        return Err(Error::InvalidSpec(format!("{conjecture} is not a conjecture")));
    }
    let start = Instant::now();
    let q = cfg.q as usize;
    let sets: Vec<AffinePointSet> = enumerate_sets(cfg)?
        .into_par_iter()
        .filter(|u| u.len() >= 2 && u.len() <= q && is_maximal(u))
        .collect();
    let maximal = sets.len();
    let mut cfg = cfg.clone();
    cfg.statements = vec![conjecture];
    let mut rep = run_over(&cfg, sets, &[conjecture], start)?;
    rep.maximal_sets = Some(maximal);
    Ok(rep)
}

/// Input of a completion attempt. `α` defaults to `3/4`.
#[derive(Clone, Debug)]
pub struct CompletionQuery {
    pub set: AffinePointSet,
    pub alpha: Rational,
    /// Upper limit on returned completions.
    pub cap: usize,
}

impl CompletionQuery {
    pub fn new(set: AffinePointSet) -> Self {
        CompletionQuery { set, alpha: Rational::new(3, 4), cap: 64 }
    }

    pub fn epsilon(&self) -> usize {
        (self.set.field().order() as usize).saturating_sub(self.set.len())
    }

    /// `ε < α√q` and `|D| < (q+1)(1-α)` with `1/2 < α < 1`.
    pub fn hypotheses_hold(&self) -> bool {
        let a = self.alpha;
        let half = Rational::new(1, 2);
        if a <= half || a >= Rational::from_integer(1) {
            return false;
        }
        let q = self.set.field().order() as i64;
        let eps = Rational::from_integer(self.epsilon() as i64);
        let d = Rational::from_integer(directions_of(&self.set).len() as i64);
        eps * eps < a * a * q && d < Rational::from_integer(q + 1) * (Rational::from_integer(1) - a)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletionResult {
    pub epsilon: usize,
    pub hypotheses_hold: bool,
    pub candidates: Vec<u32>,
    pub completions: Vec<Vec<u32>>,
    /// More completions exist beyond the cap.
    pub truncated: bool,
    /// Hypotheses hold yet nothing was found.
    pub alarm: bool,
}

/// All extensions to `q` points with the same direction set, up to the cap.
/// Only points whose directions to `U` already lie in `D` can be added.
pub fn complete_to_q(query: &CompletionQuery) -> Result<CompletionResult> {
    let u = &query.set;
    let f = u.field();
    let q = f.order() as usize;
    if u.len() > q {
        return Err(Error::TooManyPoints { n: u.len(), q: f.order() });
    }
    let qc = f.order();
    let mask = direction_mask(u);
    let in_d = |a: AffinePoint, b: AffinePoint| mask[crate::geometry::direction_of(f, a, b).expect("distinct").codec(qc) as usize];
    let candidates: Vec<AffinePoint> =
        u.complement().filter(|&p| u.points().iter().all(|&x| in_d(p, x))).collect();
    let need = q - u.len();
    let mut completions = Vec::new();
    let mut truncated = false;
    let mut chosen: Vec<usize> = Vec::new();

    fn rec(
        start: usize,
        need: usize,
        cands: &[AffinePoint],
        chosen: &mut Vec<usize>,
        ok: &dyn Fn(AffinePoint, AffinePoint) -> bool,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
        truncated: &mut bool,
    ) {
        if chosen.len() == need {
            if out.len() >= cap {
                *truncated = true;
            } else {
                out.push(chosen.clone());
            }
            return;
        }
        for i in start..cands.len() {
            if *truncated || cands.len() - i < need - chosen.len() {
                return;
            }
            if chosen.iter().all(|&j| ok(cands[i], cands[j])) {
                chosen.push(i);
                rec(i + 1, need, cands, chosen, ok, out, cap, truncated);
                chosen.pop();
            }
        }
    }
    let mut picks = Vec::new();
    rec(0, need, &candidates, &mut chosen, &in_d, &mut picks, query.cap, &mut truncated);
    for pick in picks {
        let mut set = u.clone();
        for i in pick {
            set = set.with_point(candidates[i]);
        }
        if set.len() != q || directions_of(&set) != directions_of(u) {
            return Err(Error::Soundness("completion changed the direction set".into()));
        }
        completions.push(set.codecs());
    }
    let hypotheses_hold = query.hypotheses_hold();
    Ok(CompletionResult {
        epsilon: need,
        hypotheses_hold,
        candidates: candidates.iter().map(|p| p.codec(qc)).collect(),
        alarm: hypotheses_hold && completions.is_empty(),
        completions,
        truncated,
    })
}
