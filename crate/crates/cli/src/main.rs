mod args;
mod error;
mod instance;

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use slpelim::certify::{
    algorithm_size_report, coefficient_identity_check, default_points, default_variants, degree_bound_report,
    elimination_complexity_estimate, robustness_audit, vandermonde_certificate, AlgorithmSizeParams,
    CertificateReport,
};
use slpelim::eliminate::{eliminate_points, eliminate_resultant};
use slpelim::families::{
    build_family1, build_family2, horner_circuit_family1, horner_circuit_family2, product_circuit_family2,
    solutions_family1,
};
use slpelim::field::{parse_rational, PrimeField};
use slpelim::polyring::{expand, expand_all, ParamMode, Poly};
use slpelim::slp::{parse_circuit, serialize_circuit, Circuit};
use slpelim::suite::{check_all, SuiteConfig};
use slpelim::transforms::{derive_and_specialize_r, differentiate, specialize};

use args::{CertifyCmd, CheckCmd, Cli, Command, ElimCmd, Format, GenCmd, PForm, PcircuitCmd};
use error::CliError;
use instance::{read_instance, Instance};

/// Rendered result of a command and its exit status.
struct Outcome {
    body: String,
    status: u8,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, status: 0 }
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: String,
    args: Vec<String>,
    seed: u64,
    modulus: u64,
    format: Format,
    inputs: Vec<PathBuf>,
    output: Option<&'a Path>,
    exit_code: u8,
    wall_clock_ms: u128,
}

fn read_text(path: &Path, inputs: &mut Vec<PathBuf>) -> Result<String, CliError> {
    inputs.push(path.to_path_buf());
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(path.into(), e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))
}

fn read_circuit(path: &Path, inputs: &mut Vec<PathBuf>) -> Result<Circuit, CliError> {
    let text = read_text(path, inputs)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(parse_circuit(&text)?)
    }
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Input(format!("`{s}` is not a rational of the form num/den")))
}

fn rationals(list: &str) -> Result<Vec<BigRational>, CliError> {
    list.split(',').map(rational).collect()
}

fn render_circuit(c: &Circuit, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => serialize_circuit(c),
        Format::Json => serde_json::to_string_pretty(c)? + "\n",
    })
}

fn render_polys(polys: &[Poly], format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => polys.iter().map(|p| format!("{p}\n")).collect(),
        Format::Json => {
            let outputs: Vec<_> = polys.iter().map(|p| json!({"text": p.to_string(), "poly": p})).collect();
            serde_json::to_string_pretty(&json!({ "outputs": outputs }))? + "\n"
        }
    })
}

fn render_report(r: &CertificateReport, format: Format) -> Result<Outcome, CliError> {
    let body = match format {
        Format::Text => r.render_text(),
        Format::Json => serde_json::to_string_pretty(r)? + "\n",
    };
    Ok(Outcome { body, status: u8::from(!r.passed()) })
}

fn subcommand_name(c: &Command) -> String {
    match c {
        Command::Gen(GenCmd::Family1 { .. }) => "gen family1",
        Command::Gen(GenCmd::Family2 { .. }) => "gen family2",
        Command::Gen(GenCmd::Pcircuit(_)) => "gen pcircuit",
        Command::Expand(_) => "expand",
        Command::Diff { .. } => "diff",
        Command::Specialize { .. } => "specialize",
        Command::Measure(_) => "measure",
        Command::Elim(ElimCmd::Points(_)) => "elim points",
        Command::Elim(ElimCmd::Resultant(_)) => "elim resultant",
        Command::Certify(CertifyCmd::Eq1 { .. }) => "certify eq1",
        Command::Certify(CertifyCmd::Vandermonde { .. }) => "certify vandermonde",
        Command::Certify(CertifyCmd::Audit { .. }) => "certify audit",
        Command::Certify(CertifyCmd::Degree { .. }) => "certify degree",
        Command::Certify(CertifyCmd::Elimcx { .. }) => "certify elimcx",
        Command::Certify(CertifyCmd::Size { .. }) => "certify size",
        Command::Check(CheckCmd::All { .. }) => "check all",
    }
    .to_string()
}

fn run(cli: &Cli, inputs: &mut Vec<PathBuf>) -> Result<Outcome, CliError> {
    let g = &cli.global;
    PrimeField::new(g.modulus).map_err(slpelim::Error::from)?;
    let fmt = g.format;
    match &cli.command {
        Command::Gen(GenCmd::Family1 { n }) => Ok(Outcome::ok(Instance::One(build_family1(*n)?).render(fmt)?)),
        Command::Gen(GenCmd::Family2 { delta, k }) => {
            Ok(Outcome::ok(Instance::Two(build_family2(*delta, *k)?).render(fmt)?))
        }
        Command::Gen(GenCmd::Pcircuit(p)) => {
            let c = match p {
                PcircuitCmd::Family1 { n } => horner_circuit_family1(*n)?,
                PcircuitCmd::Family2 { delta, k, form: PForm::Horner } => horner_circuit_family2(*delta, *k)?,
                PcircuitCmd::Family2 { delta, k, form: PForm::Product } => product_circuit_family2(*delta, *k)?,
            };
            Ok(Outcome::ok(render_circuit(&c, fmt)?))
        }
        Command::Expand(a) => {
            let c = read_circuit(&a.circuit, inputs)?;
            Ok(Outcome::ok(render_polys(&expand_all(&c, g.term_budget, ParamMode::Substitute)?, fmt)?))
        }
        Command::Diff { circuit, var } => {
            let c = read_circuit(&circuit.circuit, inputs)?;
            Ok(Outcome::ok(render_circuit(&differentiate(&c, var)?, fmt)?))
        }
        Command::Specialize { circuit, binds } => {
            let c = read_circuit(&circuit.circuit, inputs)?;
            let mut bindings = BTreeMap::new();
            for b in binds {
                let (v, q) = b
                    .split_once('=')
                    .ok_or_else(|| CliError::Input(format!("binding `{b}` is not of the form VAR=num/den")))?;
                bindings.insert(v.trim().to_string(), rational(q)?);
            }
            Ok(Outcome::ok(render_circuit(&specialize(&c, &bindings)?, fmt)?))
        }
        Command::Measure(a) => {
            let cost = read_circuit(&a.circuit, inputs)?.cost();
            Ok(Outcome::ok(match fmt {
                Format::Text => format!(
                    "nonscalar_len {}\ntotal_len {}\nparam_count {}\n",
                    cost.nonscalar_len, cost.total_len, cost.param_count
                ),
                Format::Json => serde_json::to_string_pretty(&cost)? + "\n",
            }))
        }
        Command::Elim(cmd) => {
            let (ElimCmd::Points(a) | ElimCmd::Resultant(a)) = cmd;
            let inst = read_instance(&read_text(&a.instance, inputs)?)?;
            let p = match (cmd, &inst) {
                (ElimCmd::Points(_), Instance::One(i)) => {
                    let points: Vec<_> = solutions_family1(i.n)?.iter().map(|s| s.poly_assignment()).collect();
                    eliminate_points(&points, &i.f_circuit()?, g.term_budget)?
                }
                (ElimCmd::Points(_), Instance::Two(i)) => eliminate_points(&i.roots(), &i.f, g.term_budget)?,
                (ElimCmd::Resultant(_), Instance::Two(i)) => {
                    let gx = expand(&i.g, g.term_budget)?;
                    eliminate_resultant(&gx, &expand(&i.f, g.term_budget)?, "X")?
                }
                (ElimCmd::Resultant(_), Instance::One(_)) => {
                    return Err(CliError::Input("resultant elimination needs a single equation in X (family2)".into()))
                }
            };
            Ok(Outcome::ok(render_polys(&[p], fmt)?))
        }
        Command::Certify(cmd) => {
            let report = match cmd {
                CertifyCmd::Eq1 { n } => coefficient_identity_check(*n)?,
                CertifyCmd::Vandermonde { n, points } => {
                    let pts = match points {
                        Some(s) => rationals(s)?,
                        None if *n <= 6 => default_points(*n),
                        None => Vec::new(),
                    };
                    vandermonde_certificate(*n, &pts)?
                }
                CertifyCmd::Audit { circuit, n, points } => {
                    let c = read_circuit(&circuit.circuit, inputs)?;
                    let pts = points.as_deref().map(rationals).transpose()?;
                    robustness_audit(&c, *n, pts.as_deref(), g.seed)?
                }
                CertifyCmd::Degree { delta, k, circuit } => {
                    let gamma = match circuit {
                        Some(p) => read_circuit(p, inputs)?,
                        None => horner_circuit_family2(*delta, *k)?,
                    };
                    let star = derive_and_specialize_r(&gamma, *delta, *k, g.seed)?;
                    degree_bound_report(*delta, *k, &star, Some(&gamma))?
                }
                CertifyCmd::Elimcx { delta, k, budget } => {
                    let inst = build_family2(*delta, *k)?;
                    elimination_complexity_estimate(&inst, &default_variants(&inst)?, *budget, g.seed)?
                }
                CertifyCmd::Size { k, l, n, d, delta, big_delta, delta_star, d_star, degrees } => {
                    let equation_degrees = match degrees {
                        Some(s) => s
                            .split(',')
                            .map(|x| x.trim().parse().map_err(|_| CliError::Input(format!("bad degree `{x}`"))))
                            .collect::<Result<_, _>>()?,
                        None => Vec::new(),
                    };
                    algorithm_size_report(&AlgorithmSizeParams {
                        k: *k,
                        l: *l,
                        n: *n,
                        d: *d,
                        delta: *delta,
                        big_delta: *big_delta,
                        delta_star: *delta_star,
                        d_star: *d_star,
                        equation_degrees,
                    })?
                }
            };
            render_report(&report, fmt)
        }
        Command::Check(CheckCmd::All { max_n }) => {
            let report = check_all(&SuiteConfig::new(*max_n, g.seed, g.modulus)?);
            let body = match fmt {
                Format::Text => report.render_text(),
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
            };
            Ok(Outcome { body, status: u8::from(!report.passed) })
        }
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            eprintln!("{}", json!({"error": "Usage", "message": msg.trim_end()}));
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let mut inputs = Vec::new();
    let outcome = match run(&cli, &mut inputs) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let Some(out) = &cli.global.out else {
        print!("{}", outcome.body);
        return ExitCode::from(outcome.status);
    };
    if let Err(e) = std::fs::write(out, &outcome.body) {
        return fail(&CliError::Io(out.clone(), e));
    }
    let manifest = RunManifest {
        tool: "slpelim",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: subcommand_name(&cli.command),
        args: std::env::args().skip(1).collect(),
        seed: cli.global.seed,
        modulus: cli.global.modulus,
        format: cli.global.format,
        inputs,
        output: Some(out),
        exit_code: outcome.status,
        wall_clock_ms: start.elapsed().as_millis(),
    };
    let path = manifest_path(out);
    let text = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
    if let Err(e) = std::fs::write(&path, text) {
        return fail(&CliError::Io(path, e));
    }
    ExitCode::from(outcome.status)
}
