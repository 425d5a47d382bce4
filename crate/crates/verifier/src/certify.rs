//! The induction ladder over a Bruhat ideal, element by element in increasing length.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use shl_core::coxeter::{enumerate_ideal, word_string, Ideal};
use shl_core::hecke::Hecke;
use shl_core::hodge::{
    coinvariant_datum, hard_lefschetz_check, hodge_riemann_check, local_and_embedding, reduce_unchecked, zeta_family_scan,
    HodgeError, LefschetzDatum, SignConvention,
};
use shl_core::linalg::Matrix;
use shl_core::numeric::{Rational, Scalar};
use shl_core::rouquier::{cohomology_check, inverse_kl_check, rouquier_complex, verify_linearity, MultiplicityTable};
use shl_core::soergel::Catalogue;

use crate::cache::Cache;
use crate::certificate::*;
use crate::config::{Check, RunConfig};
use crate::VerifierError;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub jobs: usize,
    /// Record wall times; off by default so certificates are reproducible byte for byte.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { jobs: 1, timings: false }
    }
}

pub fn exact_matrix(m: &Matrix) -> ExactMatrix {
    (0..m.rows()).map(|r| m.row(r).iter().map(|c| c.to_string()).collect()).collect()
}

fn sig3(s: (usize, usize, usize)) -> [usize; 3] {
    [s.0, s.1, s.2]
}

pub fn hl_record(d: &LefschetzDatum) -> HlRecord {
    let hl = hard_lefschetz_check(d);
    HlRecord { status: Status::of(hl.pass), ranks: hl.ranks, betti: d.graded_dims().into_iter().collect() }
}

pub fn hr_record(d: &LefschetzDatum, conv: SignConvention) -> HrRecord {
    let rep = hodge_riemann_check(d, conv);
    let degrees = rep
        .degrees
        .iter()
        .map(|r| DegreeRecord {
            i: r.i,
            dim: r.dim,
            rank: r.rank,
            prim_dim: r.prim_dim,
            signature: sig3(r.signature),
            expected_sign: r.expected_sign,
            pass: r.pass,
            witness: (!r.pass).then(|| exact_matrix(&d.lefschetz_form(r.i))),
        })
        .collect();
    HrRecord { status: Status::of(rep.pass), degrees }
}

/// Everything shared by the per-element work.
struct Context<'a> {
    cfg: &'a RunConfig,
    cat: &'a Catalogue,
    ideal: &'a Arc<Ideal>,
    rho: &'a [Scalar],
    grid: &'a [Rational],
}

/// Premises established by the elements processed so far.
#[derive(Clone, Default)]
struct Ledger {
    soergel: BTreeMap<usize, bool>,
    hr: BTreeMap<usize, bool>,
    stopped: bool,
}

impl Ledger {
    fn soergel_below(&self, ideal: &Ideal, x: usize, strict: bool) -> bool {
        ideal.lower_set(x).into_iter().filter(|&y| !strict || y != x).all(|y| self.soergel.get(&y) == Some(&true))
    }
}

fn soergel_record(ctx: &Context, x: usize) -> Result<SoergelRecord, VerifierError> {
    let e = ctx.cat.entry(x)?;
    Ok(SoergelRecord {
        status: Status::of(e.soergel),
        character: e.character.display(ctx.ideal),
        kl: ctx.cat.hecke().kl_basis(x).display(ctx.ideal),
        end0_dim: e.end0_dim,
        used_split_top: e.used_split_top,
        failures: e.failures.clone(),
    })
}

fn wants(cfg: &RunConfig, c: Check) -> bool {
    cfg.checks.contains(&c)
}

fn skip<T>(reason: &str) -> Option<Outcome<T>> {
    Some(Outcome::Skipped(Skip::new(reason)))
}

/// hL, HR, local forms, embeddings, ζ-scans and Rouquier checks of one element.
fn element_checks(ctx: &Context, x: usize, ledger: &Ledger, rec: &mut ElementRecord) -> Result<(), VerifierError> {
    let cfg = ctx.cfg;
    let ideal = ctx.ideal;
    const STOPPED: &str = "stopped after an earlier failure";
    let s_le = ledger.soergel_below(ideal, x, false);
    let premise_s = "S(y) not established for some y ≤ x";
    let need_datum = [Check::Hl, Check::Hr, Check::Local, Check::Embedding, Check::Zeta].iter().any(|&c| wants(cfg, c));
    let datum = if need_datum && s_le && !ledger.stopped {
        Some(reduce_unchecked(&ctx.cat.entry(x)?.module, ctx.rho)?)
    } else {
        None
    };
    if wants(cfg, Check::Hl) {
        rec.hl = match (&datum, ledger.stopped) {
            (_, true) => skip(STOPPED),
            (Some(d), _) => Some(Outcome::Done(hl_record(d))),
            (None, _) => skip(premise_s),
        };
    }
    let mut hr_x = false;
    if wants(cfg, Check::Hr) || wants(cfg, Check::Local) || wants(cfg, Check::Embedding) || wants(cfg, Check::Zeta) {
        let hr = match (&datum, ledger.stopped) {
            (_, true) => None,
            (Some(d), _) => Some(hr_record(d, SignConvention::Standard)),
            (None, _) => None,
        };
        hr_x = hr.as_ref().is_some_and(|r| r.status == Status::Pass);
        if wants(cfg, Check::Hr) {
            rec.hr = match hr {
                Some(r) => Some(Outcome::Done(r)),
                None if ledger.stopped => skip(STOPPED),
                None => skip(premise_s),
            };
        }
    }
    if wants(cfg, Check::Local) || wants(cfg, Check::Embedding) {
        let (local, emb) = local_records(ctx, x, ledger, hr_x)?;
        if wants(cfg, Check::Local) {
            rec.local = Some(local);
        }
        if wants(cfg, Check::Embedding) {
            rec.embedding = Some(emb);
        }
    }
    if wants(cfg, Check::Zeta) {
        rec.zeta = if ledger.stopped {
            skip(STOPPED)
        } else if !hr_x {
            skip("HR(x) not established")
        } else {
            let mut out = Vec::new();
            for s in 0..ideal.system().rank() {
                let scan = zeta_family_scan(ctx.cat, x, s, ctx.rho, ctx.grid)?;
                out.push(ZetaRecord {
                    s,
                    ascent: scan.ascent,
                    excluded: scan.excluded.iter().map(|z| z.to_string()).collect(),
                    points: scan
                        .points
                        .iter()
                        .map(|p| ZetaPointRecord {
                            zeta: p.zeta.to_string(),
                            hl: p.hl.pass,
                            hr: p.hr.pass,
                            signatures: p.signatures.iter().map(|&(i, s)| (i, sig3(s))).collect(),
                        })
                        .collect(),
                    hl: scan.hl_pass,
                    constant_signatures: scan.constant_signatures,
                    hr: scan.hr_pass,
                    retries: scan.retries,
                    inconclusive: scan.inconclusive,
                    status: Status::of(scan.pass),
                });
            }
            Some(Outcome::Done(out))
        };
    }
    if wants(cfg, Check::Rouquier) {
        rec.rouquier = if ledger.stopped {
            skip(STOPPED)
        } else if !s_le {
            skip(premise_s)
        } else {
            Some(Outcome::Done(rouquier_record(ctx, x)?))
        };
    }
    Ok(())
}

type LocalPair = (Outcome<Vec<LocalRecord>>, Outcome<Vec<EmbeddingRecord>>);

fn local_records(ctx: &Context, x: usize, ledger: &Ledger, hr_x: bool) -> Result<LocalPair, VerifierError> {
    let ideal = ctx.ideal;
    let skipped = |r: &str| Ok((Outcome::Skipped(Skip::new(r)), Outcome::Skipped(Skip::new(r))));
    if ledger.stopped {
        return skipped("stopped after an earlier failure");
    }
    if !hr_x {
        return skipped("HR(x) not established");
    }
    let mut local = Vec::new();
    let mut emb = Vec::new();
    for s in 0..ideal.system().rank() {
        let Some(xs) = ideal.right_mul(x, s) else { continue };
        if ideal.length(xs) < ideal.length(x) {
            continue;
        }
        if !ledger_soergel_all(ledger, ideal, xs) {
            return skipped("S(y) not established for some y ≤ xs");
        }
        for y in ideal.lower_set(xs) {
            if y == xs {
                continue;
            }
            let (l, e) = match local_and_embedding(ctx.cat, y, x, s, ctx.rho) {
                Ok(p) => p,
                Err(HodgeError::Degenerate) => return Err(VerifierError::Internal("degenerate reduction".into())),
                Err(e) => return Err(e.into()),
            };
            let yw = word_string(ideal.word(y));
            local.push(LocalRecord {
                y: yw.clone(),
                s,
                dim: l.dim,
                signature: sig3(l.signature),
                expected_sign: l.expected_sign,
                status: Status::of(l.pass),
                witness: (!l.pass).then(|| exact_matrix(&l.gram)),
            });
            emb.push(EmbeddingRecord {
                y: yw,
                s,
                n: e.n.to_string(),
                n_positive: e.n_positive,
                injective: e.injective,
                primitive: e.primitive,
                isometry: e.isometry,
                status: Status::of(e.pass),
            });
        }
    }
    Ok((Outcome::Done(local), Outcome::Done(emb)))
}

fn ledger_soergel_all(ledger: &Ledger, ideal: &Ideal, x: usize) -> bool {
    ideal.lower_set(x).into_iter().all(|y| ledger.soergel.get(&y) == Some(&true))
}

pub fn rouquier_record_for(cat: &Catalogue, x: usize) -> Result<RouquierRecord, VerifierError> {
    let ideal = cat.ideal();
    let rc = rouquier_complex(cat, x)?;
    let table = MultiplicityTable::of(cat, &rc.complex)?;
    let lin = verify_linearity(cat, x, &rc.complex)?;
    let inv = inverse_kl_check(cat, x, &table);
    let coh = cohomology_check(&rc.complex, ideal.length(x));
    let mut terms: BTreeMap<i32, Vec<SummandRecord>> = BTreeMap::new();
    for (&(z, i, k), &m) in &table.entries {
        terms.entry(i).or_default().push(SummandRecord { z: word_string(ideal.word(z)), shift: k, multiplicity: m });
    }
    let g = inv.from_hecke.iter().map(|(&z, p)| (word_string(ideal.word(z)), p.to_string())).collect();
    Ok(RouquierRecord {
        status: Status::of(lin.pass && inv.pass && coh.pass),
        terms: terms.into_iter().map(|(i, summands)| TermRecord { i, summands }).collect(),
        linear: lin.pass,
        offending: lin.offending,
        inverse_kl: inv.agree,
        sign_positive: inv.sign_positive,
        parity: inv.parity,
        cohomology: coh.pass,
        cohomology_groups: coh.groups,
        g,
    })
}

fn rouquier_record(ctx: &Context, x: usize) -> Result<RouquierRecord, VerifierError> {
    rouquier_record_for(ctx.cat, x)
}

fn record_failed(r: &ElementRecord) -> bool {
    let mut c = Certificate::empty(String::new());
    c.elements.push(r.clone());
    c.finalize();
    !c.failures.is_empty()
}

fn hr_passed(r: &ElementRecord, datum_checked: bool) -> Option<bool> {
    match &r.hr {
        Some(Outcome::Done(h)) => Some(h.status == Status::Pass),
        Some(Outcome::Skipped(_)) => Some(false),
        None => datum_checked.then_some(false),
    }
}

/// Processes one layer of equal length, `jobs` elements at a time, in a deterministic order.
fn run_layer(ctx: &Context, xs: &[usize], ledger: &Ledger, base: &[ElementRecord], jobs: usize) -> Result<Vec<ElementRecord>, VerifierError> {
    let work = |x: usize| -> Result<ElementRecord, VerifierError> {
        let mut rec = base[x].clone();
        element_checks(ctx, x, ledger, &mut rec)?;
        Ok(rec)
    };
    if jobs <= 1 || xs.len() <= 1 {
        return xs.iter().map(|&x| work(x)).collect();
    }
    let mut slots: Vec<Option<Result<ElementRecord, VerifierError>>> = (0..xs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs.min(xs.len()))
            .map(|j| {
                let work = &work;
                scope.spawn(move || {
                    (j..xs.len()).step_by(jobs).map(|k| (k, work(xs[k]))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("worker thread") {
                slots[k] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}

pub fn run_certify(cfg: &RunConfig, opts: &RunOptions) -> Result<Certificate, VerifierError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let hash = cfg.hash();
    let cache = match cfg.effective_cache_dir() {
        Some(dir) => Some(Cache::open(&dir, &hash)?),
        None => None,
    };
    let sys = cfg.system()?;
    let rho = cfg.weight(&sys)?.rho;
    let grid = cfg.parsed_grid()?;
    let mut cert = Certificate::empty(hash);
    let element_checks_wanted = cfg.checks.iter().any(|&c| c != Check::Coinvariant);
    let mut t_cat = 0.0;
    let mut t_el = 0.0;
    if element_checks_wanted {
        let ideal = Arc::new(enumerate_ideal(&sys, cfg.max_length)?);
        let hecke = Arc::new(Hecke::new(ideal.clone())?);
        let tc = Instant::now();
        let cat = Catalogue::build(hecke, cfg.max_length)?;
        t_cat = tc.elapsed().as_secs_f64();
        let te = Instant::now();
        let ctx = Context { cfg, cat: &cat, ideal: &ideal, rho: &rho, grid: &grid };
        let mut ledger = Ledger::default();
        // S(x) for every x comes straight from the catalogue
        let mut base = Vec::with_capacity(ideal.len());
        for x in 0..ideal.len() {
            let s = soergel_record(&ctx, x)?;
            ledger.soergel.insert(x, s.status == Status::Pass);
            base.push(ElementRecord {
                x: word_string(ideal.word(x)),
                length: ideal.length(x),
                soergel: wants(cfg, Check::Soergel).then_some(Outcome::Done(s)),
                hl: None,
                hr: None,
                local: None,
                embedding: None,
                zeta: None,
                rouquier: None,
            });
        }
        if cfg.stop_on_failure && ledger.soergel.values().any(|&p| !p) {
            ledger.stopped = true;
        }
        let mut records: Vec<ElementRecord> = Vec::with_capacity(ideal.len());
        for len in 0..=ideal.max_length() {
            let layer: Vec<usize> = ideal.of_length(len).collect();
            if layer.is_empty() {
                continue;
            }
            let mut todo = Vec::new();
            let mut done: BTreeMap<usize, ElementRecord> = BTreeMap::new();
            for &x in &layer {
                let cached = cache.as_ref().filter(|_| !ledger.stopped).and_then(|c| c.load::<ElementRecord>("element", &base[x].x));
                match cached {
                    Some(r) => {
                        done.insert(x, r);
                    }
                    None => todo.push(x),
                }
            }
            for (x, r) in todo.iter().zip(run_layer(&ctx, &todo, &ledger, &base, opts.jobs.max(1))?) {
                if let (Some(c), false) = (&cache, ledger.stopped) {
                    c.store("element", &r.x, &r)?;
                }
                done.insert(*x, r);
            }
            let datum_checked = [Check::Hr, Check::Local, Check::Embedding, Check::Zeta].iter().any(|&c| wants(cfg, c));
            for (x, r) in done {
                if let Some(p) = hr_passed(&r, datum_checked) {
                    ledger.hr.insert(x, p);
                }
                if cfg.stop_on_failure && record_failed(&r) {
                    ledger.stopped = true;
                }
                records.push(r);
            }
        }
        cert.elements = records;
        t_el = te.elapsed().as_secs_f64();
    }
    let tco = Instant::now();
    if cfg.checks.contains(&Check::Coinvariant) {
        cert.coinvariant = Some(match coinvariant_datum(&sys, &rho, cfg.dimension_cap) {
            Ok(ring) => {
                let hl = hl_record(&ring.datum);
                let hr = hr_record(&ring.datum, SignConvention::Standard);
                Outcome::Done(CoinvariantRecord {
                    status: Status::of(hl.status == Status::Pass && hr.status == Status::Pass),
                    group_order: ring.group_order,
                    dim: ring.datum.dim(),
                    poincare: ring.poincare.clone(),
                    hl,
                    hr,
                })
            }
            Err(HodgeError::Infinite) => Outcome::Skipped(Skip::new("the group is infinite")),
            Err(HodgeError::TooLarge { dim, cap }) => {
                Outcome::Skipped(Skip::new(format!("group order {dim} exceeds dimension_cap {cap}")))
            }
            Err(e) => return Err(e.into()),
        });
    }
    if opts.timings {
        cert.timings = Some(Timings {
            catalogue_seconds: t_cat,
            elements_seconds: t_el,
            coinvariant_seconds: tco.elapsed().as_secs_f64(),
            total_seconds: t0.elapsed().as_secs_f64(),
        });
    }
    cert.finalize();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::named_matrix;
    use shl_core::coxeter::parse_word;

    fn setup() -> (RunConfig, Arc<Ideal>, Catalogue, Vec<Scalar>) {
        let cfg = RunConfig::new(named_matrix("A2").unwrap(), 3);
        let sys = cfg.system().unwrap();
        let ideal = Arc::new(enumerate_ideal(&sys, 3).unwrap());
        let cat = Catalogue::build(Arc::new(Hecke::new(ideal.clone()).unwrap()), 3).unwrap();
        let rho = cfg.weight(&sys).unwrap().rho;
        (cfg, ideal, cat, rho)
    }

    fn blank(ideal: &Ideal, x: usize) -> ElementRecord {
        ElementRecord {
            x: word_string(ideal.word(x)),
            length: ideal.length(x),
            soergel: None,
            hl: None,
            hr: None,
            local: None,
            embedding: None,
            zeta: None,
            rouquier: None,
        }
    }

    fn is_skipped<T>(o: &Option<Outcome<T>>) -> bool {
        matches!(o, Some(Outcome::Skipped(_)))
    }

    #[test]
    fn unverified_premises_are_never_consumed() {
        let (cfg, ideal, cat, rho) = setup();
        let grid = cfg.parsed_grid().unwrap();
        let ctx = Context { cfg: &cfg, cat: &cat, ideal: &ideal, rho: &rho, grid: &grid };
        let st = ideal.index_of_word(&parse_word("s t", 2).unwrap()).unwrap();
        let s = ideal.index_of_word(&[0]).unwrap();
        let mut ledger = Ledger::default();
        for x in 0..ideal.len() {
            ledger.soergel.insert(x, x != s);
        }
        let mut rec = blank(&ideal, st);
        element_checks(&ctx, st, &ledger, &mut rec).unwrap();
        assert!(is_skipped(&rec.hl) && is_skipped(&rec.hr) && is_skipped(&rec.rouquier));
        assert!(is_skipped(&rec.local) && is_skipped(&rec.zeta));

        // t does not lie above s, so its checks still run; its ascent t·s does, so local forms wait
        let t = ideal.index_of_word(&[1]).unwrap();
        let mut rec = blank(&ideal, t);
        element_checks(&ctx, t, &ledger, &mut rec).unwrap();
        assert!(matches!(rec.hr, Some(Outcome::Done(ref h)) if h.status == Status::Pass));
        assert!(is_skipped(&rec.local) && is_skipped(&rec.embedding));
    }

    #[test]
    fn stopped_runs_skip_everything() {
        let (cfg, ideal, cat, rho) = setup();
        let grid = cfg.parsed_grid().unwrap();
        let ctx = Context { cfg: &cfg, cat: &cat, ideal: &ideal, rho: &rho, grid: &grid };
        let mut ledger = Ledger { stopped: true, ..Ledger::default() };
        for x in 0..ideal.len() {
            ledger.soergel.insert(x, true);
        }
        let mut rec = blank(&ideal, 0);
        element_checks(&ctx, 0, &ledger, &mut rec).unwrap();
        for o in [is_skipped(&rec.hl), is_skipped(&rec.hr), is_skipped(&rec.local), is_skipped(&rec.zeta), is_skipped(&rec.rouquier)] {
            assert!(o);
        }
    }
}
