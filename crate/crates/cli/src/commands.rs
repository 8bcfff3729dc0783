use plurival_core::approximation::{green_approximant, pointwise_convergence, product_grid};
use plurival_core::integral::{mass_asymptotics, ratio_convergence, Backend, McConfig};
use plurival_core::integrability::{
    divides, inclusion_equivalence, jumping_number, multiplier_ideal, thm_a_check, uniform_t_grid, zhou_valuation,
    JumpingQuery, Numerator,
};
use plurival_core::lattice::Rational;
use plurival_core::tian::{tian_function, TianQuery};
use plurival_core::toric::{relative_type, relative_type_general, zhou_weight_for};
use plurival_core::verify::{run_suite, Suite};
use plurival_core::{DiagonalZhouWeight, Error, Exponent, MonomialIdeal, ReferencePair, ToricWeight};
use serde_json::{json, Value};

use crate::input;
use crate::report::{decimal, exact, exact_list, Format, Report};
use crate::{job, Cli, Command, Failure, ReferenceArgs, WeightArgs};

type Outcome = Result<Report, Failure>;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn require_weight(w: &WeightArgs) -> Result<(), Failure> {
    if w.weight.is_none() && w.a.is_none() {
        return Err(Failure::Usage("one of --weight or --a is required".into()));
    }
    Ok(())
}

fn reference(r: &ReferenceArgs, n: usize) -> Result<ReferencePair, Failure> {
    let f0 = match &r.f0 {
        Some(s) => input::exponent(s)?,
        None => Exponent::zero(n),
    };
    let phi0 = match &r.phi0 {
        Some(s) => input::weight(s)?,
        None => ToricWeight::zero(n),
    };
    if f0.dim() != n || phi0.dim() != n {
        return Err(Error::Validation(format!("reference dimension must be {n}")).into());
    }
    Ok(ReferencePair::new(f0, phi0)?)
}

/// `--weight` as given, or `--a` as the plain diagonal weight `Φ_a`.
fn plain_weight(w: &WeightArgs) -> Result<ToricWeight, Failure> {
    require_weight(w)?;
    if let Some(s) = &w.weight {
        return Ok(input::weight(s)?);
    }
    let a = input::direction(w.a.as_deref().expect("checked"), w.project)?;
    Ok(DiagonalZhouWeight::new(a)?.as_weight())
}

fn zhou_weight(a: &str, project: bool, reference: &ReferencePair) -> Result<DiagonalZhouWeight, Failure> {
    let a = input::direction(a, project)?;
    Ok(zhou_weight_for(reference, &a)?)
}

fn zhou_json(phi: &DiagonalZhouWeight) -> Value {
    json!({ "a": exact_list(phi.a()), "scale": exact(phi.scale()) })
}

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    let format = cli.output;
    let out = cli.out.clone();
    let (report, failure) = match cli.command {
        Command::Run { job } => {
            let mut args = job::to_args(&job)?;
            if !args.iter().any(|a| a == "--output") {
                args.push("--output".into());
                args.push(format_name(format).into());
            }
            if let (Some(path), false) = (&out, args.iter().any(|a| a == "--out")) {
                args.push("--out".into());
                args.push(path.clone());
            }
            return crate::run_args(args);
        }
        Command::Verify { suite, seed } => verify(&suite, seed)?,
        Command::ThmA { ideal, weight, res } => {
            let ideal = input::ideal(&ideal)?;
            let weight = input::weight(&weight)?;
            let r = thm_a_check(&ideal, &weight, res)?;
            let text = format!(
                "jumping number {}; sup target {}; candidate {} {}; grid max {} over {} points; {}",
                r.jumping_number,
                r.sup_target,
                r.candidate,
                r.product.as_ref().map_or("-".to_string(), |p| format!("product {p}")),
                r.grid_max,
                r.grid_points,
                if r.passed() { "passed" } else { "FAILED" }
            );
            let failure = (!r.passed()).then(|| vec!["jumping-number-zhou-sup".to_string()]);
            let mut json = to_json(&r);
            json["passed"] = json!(r.passed());
            (Report::fields(text, json), failure)
        }
        Command::Include { u, v, t_max, den } => {
            let u = input::weight(&u)?;
            let v = input::weight(&v)?;
            let grid = uniform_t_grid(&input::rational(&t_max)?, den.max(1));
            let r = inclusion_equivalence(&u, &v, &grid)?;
            let text = format!(
                "valuative {}; inclusions {}; {}",
                r.valuative,
                r.inclusions,
                if r.agree { "agree" } else { "DISAGREE" }
            );
            let failure = (!r.agree).then(|| vec!["multiplier-valuative-equivalence".to_string()]);
            let mut json = to_json(&r);
            json.as_object_mut().expect("object").remove("t_grid");
            json["t_max"] = json!(t_max);
            json["den"] = json!(den);
            (Report::fields(text, json), failure)
        }
        Command::Divides { f, g } => {
            let f = input::exponent(&f)?;
            let g = input::exponent(&g)?;
            let r = divides(&f, &g)?;
            let text = format!(
                "componentwise {}; valuative {}{}",
                r.componentwise,
                r.valuative,
                if r.agree() { "" } else { "; DISAGREE" }
            );
            let failure = (!r.agree()).then(|| vec!["valuative-division".to_string()]);
            (Report::fields(text, to_json(&r)), failure)
        }
        other => (simple(other)?, None),
    };
    report.emit(format, out.as_deref()).map_err(Failure::Io)?;
    match failure {
        Some(anchors) => Err(Failure::Verification(anchors)),
        None => Ok(()),
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn simple(command: Command) -> Outcome {
    match command {
        Command::Lct { weight } => {
            let w = plain_weight(&weight)?;
            let c = jumping_number(&JumpingQuery::lct(w)?)?;
            Ok(Report::scalar("lct", &c, json!({})))
        }
        Command::Jump {
            g,
            ideal,
            reference: r,
            weight,
        } => {
            let w = plain_weight(&weight)?;
            let n = w.dim();
            let f0 = match &r.f0 {
                Some(s) => input::exponent(s)?,
                None => Exponent::zero(n),
            };
            let twist = r.phi0.as_deref().map(input::weight).transpose()?;
            let numerator = match (ideal, g) {
                (Some(i), _) => {
                    let i = input::ideal(&i)?;
                    let shift = f0.to_u32().ok_or_else(|| Error::Validation("f0 must be integral".into()))?;
                    let gens = i
                        .generators()
                        .iter()
                        .map(|g| g.iter().zip(&shift).map(|(a, b)| a + b).collect())
                        .collect();
                    Numerator::Ideal(MonomialIdeal::new(i.dim(), gens)?)
                }
                (None, Some(g)) => Numerator::Monomial(input::exponent(&g)?.add(&f0)),
                (None, None) => Numerator::Monomial(f0),
            };
            let c = jumping_number(&JumpingQuery::new(numerator, twist, w)?)?;
            Ok(Report::scalar("jumping_number", &c, json!({})))
        }
        Command::Type {
            psi,
            reference: r,
            weight,
        } => {
            require_weight(&weight)?;
            let psi = input::weight(&psi)?;
            if let Some(s) = &weight.weight {
                let sigma = relative_type_general(&psi, &input::weight(s)?)?;
                return Ok(Report::scalar("relative_type", &sigma, json!({})));
            }
            let reference = reference(&r, psi.dim())?;
            let phi = zhou_weight(weight.a.as_deref().expect("checked"), weight.project, &reference)?;
            let sigma = relative_type(&psi, &phi)?;
            Ok(Report::scalar("relative_type", &sigma, json!({ "zhou_weight": zhou_json(&phi) })))
        }
        Command::Valuation {
            g,
            reference: r,
            weight,
        } => {
            require_weight(&weight)?;
            let g = input::exponent(&g)?;
            if let Some(s) = &weight.weight {
                let nu = relative_type_general(&ToricWeight::monomial(g), &input::weight(s)?)?;
                return Ok(Report::scalar("valuation", &nu, json!({})));
            }
            let reference = reference(&r, g.dim())?;
            let phi = zhou_weight(weight.a.as_deref().expect("checked"), weight.project, &reference)?;
            let nu = zhou_valuation(&g, &phi)?;
            Ok(Report::scalar("valuation", &nu, json!({ "zhou_weight": zhou_json(&phi) })))
        }
        Command::Mideal { weight, t } => {
            let w = plain_weight(&weight)?;
            let t = input::rational(&t)?;
            let ideal = multiplier_ideal(&w, &t)?;
            let n = ideal.dim();
            Ok(Report {
                text: ideal.to_string(),
                columns: (1..=n).map(|j| format!("alpha{j}")).collect(),
                rows: ideal
                    .generators()
                    .iter()
                    .map(|g| g.iter().map(u32::to_string).collect())
                    .collect(),
                json: json!({ "t": exact(&t), "dim": n, "generators": ideal.generators() }),
            })
        }
        Command::Tian {
            f,
            psi,
            v,
            reference: r,
            weight,
            range,
        } => tian(f, psi, v, &r, &weight, &range),
        Command::Integral {
            mode,
            a,
            project,
            reference: r,
            psi,
            t_grid,
            samples,
            seed,
            workers,
        } => {
            let dim = input::direction(&a, project)?.len();
            let reference = reference(&r, dim)?;
            let phi = zhou_weight(&a, project, &reference)?;
            let grid = input::t_grid(&t_grid)?;
            if mode == "mass" {
                if samples.is_some() {
                    return Err(Error::Validation("mass mode uses the closed form; drop --samples".into()).into());
                }
                return mass_report(&reference, &phi, &grid);
            }
            let psi = psi.ok_or_else(|| Failure::Usage("ratio mode needs --psi".into()))?;
            let psi = input::weight(&psi)?;
            let backend = match samples {
                Some(n) => Backend::MonteCarlo(McConfig {
                    samples: n,
                    seed: seed.expect("clap requires a seed"),
                    workers,
                }),
                None => Backend::ClosedForm,
            };
            let s = ratio_convergence(&psi, &phi, &reference, &grid, &backend)?;
            let rows: Vec<Vec<String>> = (0..s.t.len())
                .map(|i| {
                    vec![
                        decimal(s.t[i]),
                        decimal(s.mass[i]),
                        decimal(s.moment[i]),
                        decimal(s.ratio[i]),
                        decimal(s.stderr[i]),
                    ]
                })
                .collect();
            let mut text: Vec<String> = rows.iter().map(|r| r.join("  ")).collect();
            text.insert(0, "t  mass  moment  ratio  stderr".into());
            text.push(format!(
                "fitted limit {} (sigma {}), coefficient {}; {}",
                decimal(s.limit),
                s.sigma,
                decimal(s.coeff),
                if s.passed { "passed" } else { "FAILED" }
            ));
            let mut json = to_json(&s);
            json["zhou_weight"] = zhou_json(&phi);
            Ok(Report {
                text: text.join("\n"),
                columns: ["t", "mass", "moment", "ratio", "stderr"].map(String::from).to_vec(),
                rows,
                json,
            })
        }
        Command::Approx { a, project, m, grid } => {
            let phi = DiagonalZhouWeight::new(input::direction(&a, project)?)?;
            let ms = input::int_range(&m)?;
            let (lo, hi, count) = input::modulus_grid(&grid)?;
            let z = product_grid(phi.dim(), lo, hi, count)?;
            let rep = pointwise_convergence(&phi, &z, &ms)?;
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        r.sigma_m.to_string(),
                        decimal(r.sup_gap),
                        (r.bound_ok() && r.nested).to_string(),
                    ]
                })
                .collect();
            let mut text: Vec<String> = rows.iter().map(|r| r.join("  ")).collect();
            text.insert(0, format!("m  sigma_m  sup_gap  bound_ok  ({})", rep.note));
            text.push(format!(
                "m·gap <= {} (grid bound {}); {}",
                decimal(rep.fitted_c),
                decimal(rep.grid_c),
                if rep.passed() { "passed" } else { "FAILED" }
            ));
            Ok(Report {
                text: text.join("\n"),
                columns: ["m", "sigma_m", "sup_gap", "bound_ok"].map(String::from).to_vec(),
                rows,
                json: to_json(&rep),
            })
        }
        Command::Green { z, m } => {
            let z = input::moduli(&z)?;
            let ms = input::int_range(&m)?;
            let max_log = z.iter().map(|x| x.ln()).fold(f64::NEG_INFINITY, f64::max);
            let mut rows = Vec::new();
            for m in ms {
                let g = green_approximant(m, &z)?;
                rows.push(vec![m.to_string(), decimal(g), decimal(max_log), (g == max_log).to_string()]);
            }
            let text = rows.iter().map(|r| r.join("  ")).collect::<Vec<_>>().join("\n");
            let json = json!({
                "z": z,
                "green": max_log,
                "approximants": rows.iter().map(|r| json!({ "m": r[0].parse::<u32>().unwrap_or(0), "value": r[1] })).collect::<Vec<_>>(),
                "identity": rows.iter().all(|r| r[3] == "true"),
            });
            Ok(Report {
                text,
                columns: ["m", "value", "max_log", "equal"].map(String::from).to_vec(),
                rows,
                json,
            })
        }
        Command::Run { .. } | Command::Verify { .. } | Command::ThmA { .. } | Command::Include { .. } | Command::Divides { .. } => {
            unreachable!("handled by dispatch")
        }
    }
}

fn tian(
    f: Option<String>,
    psi: Option<String>,
    v: Option<String>,
    r: &ReferenceArgs,
    weight: &WeightArgs,
    range: &str,
) -> Outcome {
    let direction = match (f, psi) {
        (Some(f), _) => ToricWeight::monomial(input::exponent(&f)?),
        (None, Some(p)) => input::weight(&p)?,
        (None, None) => return Err(Failure::Usage("one of --f or --psi is required".into())),
    };
    let n = direction.dim();
    let reference = reference(r, n)?;
    let w = match (&v, &weight.a) {
        (Some(v), _) => input::weight(v)?,
        (None, Some(a)) => zhou_weight(a, weight.project, &reference)?.as_weight(),
        (None, None) => plain_weight(weight)?,
    };
    let (lo, hi) = input::interval(range)?;
    let q = TianQuery::for_reference(&reference, w, direction)?;
    let tn = tian_function(&q, &lo, &hi)?;
    let k = tn.knots.len();
    let mut rows = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for (i, knot) in tn.knots.iter().enumerate() {
        let value = tn.value_at(knot)?;
        let slope: &Rational = &tn.slopes[i.min(tn.slopes.len() - 1)];
        rows.push(vec![knot.to_string(), value.to_string(), slope.to_string()]);
        values.push(value);
    }
    let text = rows.iter().map(|r| r.join("  ")).collect::<Vec<_>>().join("\n");
    let json = json!({
        "breakpoints": exact_list(tn.breakpoints()),
        "knots": exact_list(&tn.knots),
        "values": exact_list(&values),
        "slopes": exact_list(&tn.slopes),
        "concave": tn.is_concave(),
    });
    Ok(Report {
        text,
        columns: ["breakpoint", "value", "slope"].map(String::from).to_vec(),
        rows,
        json,
    })
}

fn mass_report(reference: &ReferencePair, phi: &DiagonalZhouWeight, grid: &[Rational]) -> Outcome {
    let rep = mass_asymptotics(reference, phi, grid)?;
    let rows: Vec<Vec<String>> = (0..rep.t.len())
        .map(|i| {
            vec![
                decimal(rep.t[i]),
                decimal(rep.log_mass[i].exp()),
                decimal(rep.log_mass[i]),
                decimal(rep.neg_log_mass_over_2t[i]),
                decimal(rep.e2t_mass[i]),
            ]
        })
        .collect();
    let mut text: Vec<String> = rows.iter().map(|r| r.join("  ")).collect();
    text.insert(0, "t  mass  log_mass  -log(mass)/2t  e^2t·mass".into());
    text.push(format!(
        "mass = {}·e^(-2·{}·t); fitted limit {}; {}",
        rep.exact.coeff,
        rep.exact.rate,
        decimal(rep.limit),
        if !rep.threshold_normalized {
            "report only (not threshold normalized)"
        } else if rep.passed() {
            "passed"
        } else {
            "FAILED"
        }
    ));
    let mut json = to_json(&rep);
    json["zhou_weight"] = zhou_json(phi);
    json["passed"] = json!(rep.passed());
    Ok(Report {
        text: text.join("\n"),
        columns: ["t", "mass", "log_mass", "neg_log_mass_over_2t", "e2t_mass"].map(String::from).to_vec(),
        rows,
        json,
    })
}

fn verify(suite: &str, seed: u64) -> Result<(Report, Option<Vec<String>>), Failure> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        suite
            .split(',')
            .map(|s| s.trim().parse::<Suite>())
            .collect::<plurival_core::Result<_>>()?
    };
    let reports: Vec<_> = suites.iter().map(|s| run_suite(*s, seed)).collect();
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.anchor.to_string()).collect();
    let mut text: Vec<String> = Vec::new();
    for r in &reports {
        text.push(r.summary_line());
        for f in &r.failures {
            text.push(format!("    failure: {f}"));
        }
    }
    text.push(format!("{} of {} suites passed", reports.len() - failed.len(), reports.len()));
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.criterion.to_string(),
                r.suite.to_string(),
                r.anchor.to_string(),
                r.passed.to_string(),
                r.checks.to_string(),
                r.failed.to_string(),
                r.elapsed_ms.to_string(),
            ]
        })
        .collect();
    let json = json!({
        "seed": seed,
        "passed": failed.is_empty(),
        "failed_anchors": failed,
        "suites": to_json(&reports),
    });
    let report = Report {
        text: text.join("\n"),
        columns: ["criterion", "suite", "anchor", "passed", "checks", "failed", "elapsed_ms"]
            .map(String::from)
            .to_vec(),
        rows,
        json,
    };
    Ok((report, (!failed.is_empty()).then_some(failed)))
}
