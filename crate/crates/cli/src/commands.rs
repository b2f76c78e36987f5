use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use qra::algebra::{self, algebra_iso};
use qra::catalog::{catalog, MatchKind};
use qra::enumerate::{self, count_by_poset, enumerate_frames_with, EnumOptions, Signature};
use qra::filters::{filter_frame, priestley_roundtrip, validate_pointed_frame};
use qra::frame::{self, frame_iso};
use qra::io;
use qra::morphisms::{check_frame_morphism_duality, check_hom_duality, AlgHom, FrameMap};
use qra::ra::{self, SubreductFamily};
use qra::represent::{
    dq_laws, representation_search, verify_certificate, RepBase, RepCheckpoint, RepOptions,
    RepOutcome,
};
use qra::{Error, Result, ValidationReport};

use crate::load::{self, Object};

pub struct Output {
    pub ok: bool,
    pub text: String,
    pub json: Value,
}

impl Output {
    fn data(text: String, json: Value) -> Self {
        Output {
            ok: true,
            text,
            json,
        }
    }

    fn report(label: &str, r: ValidationReport) -> Self {
        let text = if r.ok() {
            format!("{label}: ok")
        } else {
            format!("{label}: FAILED\n{r}")
        };
        Output {
            ok: r.ok(),
            text,
            json: json!({ "object": label, "ok": r.ok(), "report": r }),
        }
    }
}

fn deadline(budget_ms: Option<u64>) -> Option<Instant> {
    budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms))
}

pub fn check(arg: &str) -> Result<Output> {
    Ok(match load::object(arg)? {
        Object::Algebra(a) if a.has_neg() => Output::report("DqRA", algebra::validate_dqra(&a)?),
        Object::Algebra(a) => Output::report("DInFL-algebra", algebra::validate_dinfl(&a)),
        Object::Frame(w) if w.has_neg() => {
            Output::report("DqRA-frame", frame::validate_dqra_frame(&w)?)
        }
        Object::Frame(w) => Output::report("DInFL-frame", frame::validate_dinfl_frame(&w)),
        Object::Pointed(p) => {
            let mut r = frame::validate_frame(&p.frame);
            r.merge(validate_pointed_frame(&p));
            Output::report("pointed frame", r)
        }
        Object::Morphism(m) => return morphism_check_file(&m),
        Object::Base(b) => Output::report("Dq(E)", dq_laws(&RepBase::from_file(&b)?)?),
        Object::Atoms(s) => Output::report("atom structure", ra::validate_atom_structure(&s)),
    })
}

pub fn complex(arg: &str) -> Result<Output> {
    let w = match load::object(arg)? {
        Object::Frame(w) => w,
        Object::Pointed(p) => p.frame,
        o => {
            return Err(Error::Structural(format!(
                "{arg}: expected a frame, found a {}",
                o.kind()
            )))
        }
    };
    let text = io::algebra_to_json(&frame::complex_algebra(&w)?);
    let json = io::parse_value(&text, "<complex algebra>")?;
    Ok(Output::data(text, json))
}

pub fn dual(arg: &str) -> Result<Output> {
    let text = io::frame_to_json(&frame::dual_frame(&load::algebra(arg)?)?);
    let json = io::parse_value(&text, "<dual frame>")?;
    Ok(Output::data(text, json))
}

pub fn roundtrip(arg: &str) -> Result<Output> {
    let (label, map) = match load::object(arg)? {
        Object::Frame(w) => ("frame W ≅ (W⁺)₊", frame::roundtrip_frame(&w)?),
        Object::Pointed(p) => ("frame W ≅ (W⁺)₊", frame::roundtrip_frame(&p.frame)?),
        Object::Algebra(a) => ("algebra A ≅ (A₊)⁺", frame::roundtrip_algebra(&a)?),
        Object::Atoms(s) => (
            "algebra A ≅ (A₊)⁺",
            frame::roundtrip_algebra(&ra::ra_from_atoms(&s)?.algebra)?,
        ),
        o => {
            return Err(Error::Structural(format!(
                "{arg}: no round trip for a {}",
                o.kind()
            )))
        }
    };
    Ok(Output::data(
        format!("{label}: ok {map:?}"),
        json!({ "ok": true, "map": map }),
    ))
}

pub fn iso(a: &str, b: &str, reduct: bool) -> Result<Output> {
    let map = match (load::object(a)?, load::object(b)?) {
        (Object::Algebra(x), Object::Algebra(y)) if reduct => {
            algebra_iso(&x.without_neg(), &y.without_neg())?
        }
        (Object::Algebra(x), Object::Algebra(y)) => algebra_iso(&x, &y)?,
        (Object::Frame(x), Object::Frame(y)) if reduct => {
            frame_iso(&x.without_neg(), &y.without_neg())?
        }
        (Object::Frame(x), Object::Frame(y)) => frame_iso(&x, &y)?,
        (x, y) => {
            return Err(Error::Signature(format!(
                "cannot compare a {} with a {}",
                x.kind(),
                y.kind()
            )));
        }
    };
    let text = match &map {
        Some(m) => format!("isomorphic {m:?}"),
        None => "not isomorphic".to_string(),
    };
    Ok(Output::data(
        text,
        json!({ "isomorphic": map.is_some(), "map": map }),
    ))
}

fn morphism_check_file(m: &io::MorphismFile) -> Result<Output> {
    match (load::endpoint(&m.source)?, load::endpoint(&m.target)?) {
        (Object::Algebra(a), Object::Algebra(b)) => {
            let h = AlgHom::new(a, b, m.map.clone())?;
            let mut r = h.report().clone();
            if r.ok() && h.is_complete() {
                r.merge(check_hom_duality(&h)?);
            } else if r.ok() {
                r.note("not complete: dual frame map skipped");
            }
            Ok(Output::report("homomorphism", r))
        }
        (Object::Frame(v), Object::Frame(w)) => {
            let f = FrameMap::new(v, w, m.map.clone())?;
            let mut r = f.report().clone();
            if r.ok() {
                r.merge(check_frame_morphism_duality(&f)?);
            }
            Ok(Output::report("frame morphism", r))
        }
        (x, y) => Err(Error::Signature(format!(
            "morphism from a {} to a {}",
            x.kind(),
            y.kind()
        ))),
    }
}

pub fn morphism_check(arg: &str) -> Result<Output> {
    match load::object(arg)? {
        Object::Morphism(m) => morphism_check_file(&m),
        o => Err(Error::Structural(format!(
            "{arg}: expected a morphism, found a {}",
            o.kind()
        ))),
    }
}

pub fn parse_signature(s: &str) -> std::result::Result<Signature, String> {
    match s {
        "dinfl" => Ok(Signature::DInFL),
        "dqra" => Ok(Signature::DqRA),
        _ => Err(format!("unknown signature {s:?} (dinfl or dqra)")),
    }
}

fn enum_options(budget_ms: Option<u64>, resume: Option<&str>) -> Result<EnumOptions> {
    let resume = match resume {
        Some(path) => Some(enumerate::parse_checkpoint(&io::read_file(path)?, path)?),
        None => None,
    };
    Ok(EnumOptions {
        deadline: deadline(budget_ms),
        resume,
        ..Default::default()
    })
}

pub fn enumerate(
    poset: &str,
    sig: Signature,
    emit: Option<&Path>,
    budget_ms: Option<u64>,
    resume: Option<&str>,
) -> Result<Output> {
    let p = load::poset(poset)?;
    let res = enumerate_frames_with(&p, sig, &enum_options(budget_ms, resume)?)?;
    let mut files = vec![];
    if let Some(dir) = emit {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
        for (i, w) in res.frames.iter().enumerate() {
            let name = format!("{}_{}_{}", p.name.replace('+', "p"), sig, i + 1);
            let path = dir.join(format!("{name}.json"));
            let text = io::frame_to_json(&w.clone().named(name));
            std::fs::write(&path, text).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            files.push(path.display().to_string());
        }
    }
    let text = format!(
        "poset {} ({} upsets), {}: {} frames [{} branches, {} nodes, {:.2?}]",
        p.name,
        p.upset_count(),
        sig,
        res.count,
        res.stats.branches,
        res.stats.nodes,
        res.stats.wall
    );
    let json = json!({
        "poset": p.name, "signature": sig, "count": res.count, "stats": res.stats, "files": files,
    });
    Ok(Output::data(text, json))
}

pub fn count(max_size: usize, budget_ms: Option<u64>) -> Result<Output> {
    let opts = enum_options(budget_ms, None)?;
    let mut rows = vec![];
    let mut totals = vec![];
    for n in 1..=max_size {
        let per = count_by_poset(n, &opts)?;
        totals.push(per.iter().fold((0, 0), |(a, b), (_, d, q)| (a + d, b + q)));
        rows.extend(per.into_iter().map(|(p, d, q)| (n, p, d, q)));
    }
    let mut text = String::new();
    let line = |label: &str, xs: Vec<String>| {
        format!(
            "{label:<8}{}",
            xs.iter().map(|x| format!("{x:>6}")).collect::<String>()
        )
    };
    let _ = writeln!(
        text,
        "{}",
        line("n", (1..=max_size).map(|n| n.to_string()).collect())
    );
    let _ = writeln!(
        text,
        "{}",
        line("DInFL", totals.iter().map(|t| t.0.to_string()).collect())
    );
    let _ = writeln!(
        text,
        "{}",
        line("DqRA", totals.iter().map(|t| t.1.to_string()).collect())
    );
    let _ = writeln!(
        text,
        "\n{:<6}{:<12}{:>7}{:>7}",
        "size", "poset", "DInFL", "DqRA"
    );
    for (n, p, d, q) in &rows {
        let _ = writeln!(text, "{n:<6}{p:<12}{d:>7}{q:>7}");
    }
    let json = json!({
        "totals": totals.iter().enumerate().map(|(i, t)| json!({"size": i + 1, "dinfl": t.0, "dqra": t.1})).collect::<Vec<_>>(),
        "posets": rows.iter().map(|(n, p, d, q)| json!({"size": n, "poset": p, "dinfl": d, "dqra": q})).collect::<Vec<_>>(),
    });
    Ok(Output::data(text.trim_end().to_string(), json))
}

fn match_text(m: &MatchKind) -> String {
    match m {
        MatchKind::Exact => "exact".into(),
        MatchKind::Ambiguous(xs) => format!("ambiguous {}", xs.join("/")),
        MatchKind::Deduced(s) => format!("deduced ({s})"),
        MatchKind::Unmatched => "unmatched".into(),
    }
}

pub fn catalog_cmd(max_size: usize) -> Result<Output> {
    let c = catalog(max_size)?;
    let mut text = format!(
        "{:<16}{:<7}{:>5}  {:<10}{:>5}{:>5}  {:<10}{}\n",
        "name", "sig", "size", "poset", "idem", "cent", "match", "representability"
    );
    for e in &c {
        let rep = e
            .representability
            .as_ref()
            .map_or("", |r| r.status.as_str());
        let _ = writeln!(
            text,
            "{:<16}{:<7}{:>5}  {:<10}{:>5}{:>5}  {:<10}{}",
            e.name,
            e.signature,
            e.size,
            e.poset,
            e.idempotents(),
            e.central(),
            match_text(&e.matched),
            rep
        );
    }
    Ok(Output::data(
        text.trim_end().to_string(),
        serde_json::to_value(&c).expect("serializable"),
    ))
}

pub fn priestley(arg: &str, roundtrip: bool) -> Result<Output> {
    let a = load::algebra(arg)?;
    if !roundtrip {
        let text = io::pointed_frame_to_json(&filter_frame(&a)?);
        let json = io::parse_value(&text, "<filter frame>")?;
        return Ok(Output::data(text, json));
    }
    let r = validate_pointed_frame(&filter_frame(&a)?);
    if !r.ok() {
        return Ok(Output::report("filter frame", r));
    }
    let map = priestley_roundtrip(&a)?;
    Ok(Output::data(
        format!("space algebra of the filter frame ≅ A: ok {map:?}"),
        json!({ "ok": true, "map": map }),
    ))
}

pub struct RepArgs<'a> {
    pub max_points: usize,
    pub full_e: bool,
    pub cyclic_only: bool,
    pub ignore_filter: bool,
    pub cap: Option<usize>,
    pub resume: Option<&'a str>,
}

pub fn represent(arg: &str, o: &RepArgs<'_>, budget_ms: Option<u64>) -> Result<Output> {
    let a = load::algebra(arg)?;
    let resume_from = match o.resume {
        Some(path) => {
            let c: RepCheckpoint =
                serde_json::from_str(&io::read_file(path)?).map_err(|source| Error::Parse {
                    path: path.to_string(),
                    source,
                })?;
            if c.max_points != o.max_points {
                return Err(Error::Precondition(format!(
                    "checkpoint is for --max-points {}, not {}",
                    c.max_points, o.max_points
                )));
            }
            c.next_base
        }
        None => 0,
    };
    let opts = RepOptions {
        full_e_only: o.full_e,
        alpha_id_only: o.cyclic_only,
        ignore_filter: o.ignore_filter,
        cap: o.cap,
        deadline: deadline(budget_ms),
        resume_from,
    };
    let out = representation_search(&a, o.max_points, &opts)?;
    let summary = match &out {
        RepOutcome::Certificate(cert) => {
            let r = verify_certificate(&a, cert)?;
            if !r.ok() {
                return Err(Error::Internal(format!(
                    "certificate failed independent verification: {r}"
                )));
            }
            format!("certificate on {} point(s), verified", cert.base.points)
        }
        RepOutcome::NoFiniteRepresentation { witness } => {
            format!("no finite representation: 0 < a < 1 and a·a ≤ 0 at element {witness}")
        }
        RepOutcome::Exhausted(s) => format!(
            "no representation on ≤ {} points: {} bases searched, {} over the cap, {} too small",
            s.max_points, s.searched, s.over_cap, s.too_small
        ),
    };
    let json = serde_json::to_value(&out).expect("serializable");
    Ok(Output::data(
        format!("{summary}\n{}", serde_json::to_string(&json).expect("json")),
        json,
    ))
}

fn family_text(f: SubreductFamily) -> &'static str {
    match f {
        SubreductFamily::A12 => "A12",
        SubreductFamily::B8 => "B8",
        SubreductFamily::None => "none",
        SubreductFamily::Other => "other",
    }
}

pub fn subreducts(index: Option<usize>) -> Result<Output> {
    let mut rows = ra::subreduct_table()?;
    if let Some(k) = index {
        rows.retain(|r| r.index == k);
        if rows.is_empty() {
            return Err(Error::NotFound(format!("no atom structure with index {k}")));
        }
    }
    let mut text = format!(
        "{:<6}{:<8}{:>5}  {:<8}{:<6}{:>6}  {:<8}{}\n",
        "index", "family", "size", "poset", "comm", "¬", "RA rep", "subreduct"
    );
    for r in &rows {
        let s = r.subreduct.as_ref();
        let _ = writeln!(
            text,
            "{:<6}{:<8}{:>5}  {:<8}{:<6}{:>6}  {:<8}{}",
            r.index,
            family_text(r.family),
            s.map_or(0, |s| s.size()),
            s.map_or("-", |s| s.poset.as_str()),
            s.map_or("-", |s| if s.commutative { "yes" } else { "no" }),
            s.map_or(0, |s| s.neg_completions.len()),
            match r.ra_representable {
                Some(true) => "yes",
                Some(false) => "no",
                None => "?",
            },
            r.subreduct_status.as_deref().unwrap_or("-")
        );
    }
    Ok(Output::data(
        text.trim_end().to_string(),
        serde_json::to_value(&rows).expect("serializable"),
    ))
}
