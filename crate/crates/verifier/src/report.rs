//! Text rendering of certificates.

use std::fmt::Write;

use crate::certificate::*;

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skipped",
    }
}

fn outcome_line<T>(name: &str, x: &str, o: &Option<Outcome<T>>, st: impl Fn(&T) -> String, out: &mut String) {
    match o {
        None => {}
        Some(Outcome::Done(t)) => {
            let _ = writeln!(out, "  {name}({x}): {}", st(t));
        }
        Some(Outcome::Skipped(k)) => {
            let _ = writeln!(out, "  {name}({x}): skipped ({})", k.reason);
        }
    }
}

fn sign(e: i32) -> char {
    if e > 0 {
        '+'
    } else {
        '−'
    }
}

fn hr_summary(r: &HrRecord) -> String {
    let signs: Vec<String> = r.degrees.iter().map(|d| sign(d.expected_sign).to_string()).collect();
    format!("{}, signs ({})", status(r.status), signs.join(","))
}

fn all_pass<T>(v: &[T], f: impl Fn(&T) -> Status) -> String {
    let failed = v.iter().filter(|t| f(t) != Status::Pass).count();
    if failed == 0 {
        format!("pass ({} checked)", v.len())
    } else {
        format!("FAIL ({failed} of {})", v.len())
    }
}

/// Betti numbers and, per degree, the Lefschetz form signature.
fn tables(hl: &HlRecord, hr: Option<&HrRecord>, out: &mut String) {
    let betti: Vec<String> = hl.betti.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    let _ = writeln!(out, "    betti  {}", betti.join(" "));
    if let Some(hr) = hr {
        for d in &hr.degrees {
            let [p, n, z] = d.signature;
            let _ = writeln!(
                out,
                "    i={:<2} dim={:<3} prim={:<3} sig=({p},{n},{z}) expect {} {}",
                d.i,
                d.dim,
                d.prim_dim,
                sign(d.expected_sign),
                if d.pass { "ok" } else { "FAIL" }
            );
        }
    }
}

pub fn render_text(c: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema {}  config {}", c.schema, c.config_hash);
    for e in &c.elements {
        let _ = writeln!(out, "{} (length {})", e.x, e.length);
        let x = e.x.as_str();
        outcome_line("S", x, &e.soergel, |r| format!("{}, ch = {}", status(r.status), r.character), &mut out);
        outcome_line("hL", x, &e.hl, |r| status(r.status).to_string(), &mut out);
        outcome_line("HR", x, &e.hr, hr_summary, &mut out);
        if let Some(Outcome::Done(hl)) = &e.hl {
            tables(hl, e.hr.as_ref().and_then(|o| o.done()), &mut out);
        }
        outcome_line("local", x, &e.local, |v| all_pass(v, |r| r.status), &mut out);
        outcome_line("embedding", x, &e.embedding, |v| all_pass(v, |r| r.status), &mut out);
        outcome_line("zeta", x, &e.zeta, |v| all_pass(v, |r| r.status), &mut out);
        outcome_line(
            "rouquier",
            x,
            &e.rouquier,
            |r| {
                let terms: Vec<String> = r
                    .terms
                    .iter()
                    .map(|t| {
                        let s: Vec<String> = t
                            .summands
                            .iter()
                            .map(|m| format!("{}B_{}({})", if m.multiplicity > 1 { format!("{}·", m.multiplicity) } else { String::new() }, m.z, m.shift))
                            .collect();
                        format!("[{}] {}", t.i, s.join(" ⊕ "))
                    })
                    .collect();
                format!("{}, {}", status(r.status), terms.join("  "))
            },
            &mut out,
        );
    }
    if let Some(co) = &c.coinvariant {
        match co {
            Outcome::Done(r) => {
                let _ = writeln!(out, "coinvariant ring (|W| = {}, dim {}): {}", r.group_order, r.dim, status(r.status));
                let p: Vec<String> = r.poincare.iter().map(|n| n.to_string()).collect();
                let _ = writeln!(out, "    poincare {}", p.join(" "));
                let _ = writeln!(out, "  HR: {}", hr_summary(&r.hr));
                tables(&r.hl, Some(&r.hr), &mut out);
            }
            Outcome::Skipped(k) => {
                let _ = writeln!(out, "coinvariant ring: skipped ({})", k.reason);
            }
        }
    }
    for f in &c.failures {
        let _ = writeln!(out, "failure: {f}");
    }
    for s in &c.skipped {
        let _ = writeln!(out, "skipped: {s}");
    }
    if let Some(t) = &c.timings {
        let _ = writeln!(
            out,
            "timings: catalogue {:.3}s, elements {:.3}s, coinvariant {:.3}s, total {:.3}s",
            t.catalogue_seconds, t.elements_seconds, t.coinvariant_seconds, t.total_seconds
        );
    }
    let _ = writeln!(
        out,
        "verdict: {}",
        match c.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Incomplete => "incomplete",
        }
    );
    out
}
