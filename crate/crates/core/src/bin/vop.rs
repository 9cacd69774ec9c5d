//! Command line front end: verify structure files, print low-degree
//! cohomology reports, run the operad axiom harnesses, and compute the
//! associated graded bridge of a filtered vertex algebra.
//!
//! Exit codes: 0 all checks passed, 1 verification failure, 2 usage or
//! parse error.

use std::process::ExitCode;
use vertex_operads::driver::{run_axioms, run_cohomology, run_gr, run_verify, Budget};
use vertex_operads::report::Report;
use vertex_operads::structure::{parse_spec, Kind, StructureSpec};

struct Opts {
    json: bool,
    seed: u64,
    trunc: u32,
    degree: u32,
    order: u32,
    budget: usize,
    degrees: (i64, i64),
    kind: Option<String>,
    operad: Option<String>,
    bosons: Option<usize>,
    file: Option<String>,
}

fn usage() -> String {
    "usage: vop <verify|cohomology|axioms|gr> [<file>] [flags]\n\
     flags: --kind K --seed N --degrees LO..HI --trunc N --budget N --json\n\
            --bosons N --degree N --order N --operad {hom,chom,pcl,pfn}\n"
        .to_string()
}

fn parse_opts(args: &[String]) -> Result<Opts, String> {
    let mut o = Opts {
        json: false,
        seed: 0,
        trunc: 2,
        degree: 2,
        order: 2,
        budget: std::env::var("VOP_BUDGET")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(100),
        degrees: (-1, 1),
        kind: None,
        operad: None,
        bosons: None,
        file: None,
    };
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let mut grab = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("{} needs a value", name))
        };
        match a.as_str() {
            "--json" => o.json = true,
            "--seed" => o.seed = grab("--seed")?.parse().map_err(|_| "bad --seed")?,
            "--trunc" => o.trunc = grab("--trunc")?.parse().map_err(|_| "bad --trunc")?,
            "--degree" => o.degree = grab("--degree")?.parse().map_err(|_| "bad --degree")?,
            "--order" => o.order = grab("--order")?.parse().map_err(|_| "bad --order")?,
            "--budget" => o.budget = grab("--budget")?.parse().map_err(|_| "bad --budget")?,
            "--kind" => o.kind = Some(grab("--kind")?),
            "--operad" => o.operad = Some(grab("--operad")?),
            "--bosons" => {
                o.bosons = Some(grab("--bosons")?.parse().map_err(|_| "bad --bosons")?)
            }
            "--degrees" => {
                let v = grab("--degrees")?;
                let (lo, hi) = v.split_once("..").ok_or("bad --degrees, expected LO..HI")?;
                o.degrees = (
                    lo.parse().map_err(|_| "bad --degrees")?,
                    hi.parse().map_err(|_| "bad --degrees")?,
                );
            }
            _ if a.starts_with("--") => return Err(format!("unknown flag {}", a)),
            _ => {
                if o.file.is_some() {
                    return Err(format!("unexpected argument {}", a));
                }
                o.file = Some(a.clone());
            }
        }
    }
    Ok(o)
}

fn load_spec(o: &Opts) -> Result<(StructureSpec, String), String> {
    if let Some(n) = o.bosons {
        let text = format!("kind pva\nboson {}\n{}", n, boson_brackets(n));
        let spec = parse_spec(&text).map_err(|e| e.to_string())?;
        return Ok((spec, format!("boson:{}", n)));
    }
    let path = o.file.as_ref().ok_or("missing structure file")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e))?;
    let mut spec = parse_spec(&text).map_err(|e| format!("{}: {}", path, e))?;
    if let Some(k) = &o.kind {
        spec.kind = Kind::parse(k).ok_or_else(|| format!("unknown kind '{}'", k))?;
    }
    Ok((spec, path.clone()))
}

fn boson_brackets(n: usize) -> String {
    (1..=n).map(|i| format!("[u{i},u{i}] = L\n")).collect()
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(cmd) = args.first().cloned() else {
        eprint!("{}", usage());
        return ExitCode::from(2);
    };
    let opts = match parse_opts(&args[1..]) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e);
            eprint!("{}", usage());
            return ExitCode::from(2);
        }
    };
    let budget = Budget {
        trunc: opts.trunc,
        degree: opts.degree,
        order: opts.order,
    };
    let outcome: Result<Report, (u8, String)> = match cmd.as_str() {
        "verify" => load_spec(&opts)
            .map_err(|e| (2u8, e))
            .and_then(|(spec, subject)| {
                run_verify(&spec, &subject, &budget).map_err(|e| (2u8, e))
            }),
        "cohomology" => load_spec(&opts)
            .map_err(|e| (2u8, e))
            .and_then(|(spec, subject)| {
                run_cohomology(&spec, &subject, opts.degrees, &budget).map_err(|e| {
                    // a structure that fails its own battery is a
                    // verification failure, not a usage error
                    if e.starts_with("structure refused") {
                        (1u8, e)
                    } else {
                        (2u8, e)
                    }
                })
            }),
        "axioms" => {
            let operad = opts.operad.clone().unwrap_or_else(|| "hom".to_string());
            run_axioms(&operad, opts.budget, opts.seed).map_err(|e| (2u8, e))
        }
        "gr" => load_spec(&opts)
            .map_err(|e| (2u8, e))
            .and_then(|(spec, subject)| run_gr(&spec, &subject, &budget).map_err(|e| (2u8, e))),
        _ => {
            eprint!("{}", usage());
            return ExitCode::from(2);
        }
    };
    match outcome {
        Ok(report) => emit(&report, opts.json),
        Err((code, e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(code)
        }
    }
}
