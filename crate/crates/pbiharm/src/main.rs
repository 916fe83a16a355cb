use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pbiharm::analysis::{run_convergence, ConvergenceTable};
use pbiharm::error::Error;
use pbiharm::manufactured::{check_consistency, example1, example2, ExactPair};
use pbiharm::plot::loglog_svg;
use pbiharm::solver::solve_mixed_with;
use pbiharm::{expr, l2_error};

/// Mixed finite-element solver for the one-dimensional p-biharmonic beam
/// problem, with a convergence-study harness.
#[derive(Parser)]
#[command(name = "pbiharm", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write sampled curves.
    Solve(SolveArgs),
    /// Run a mesh-refinement study and write a CSV table with orders.
    Convergence(ConvergenceArgs),
    /// Check a manufactured solution against the strong equations.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Exponent of the p-biharmonic operator (> 1).
    #[arg(long)]
    p: f64,
    /// Built-in manufactured family: 1 or 2.
    #[arg(long, conflicts_with = "source")]
    example: Option<u8>,
    /// Custom source term f(x), e.g. "x*(1-x)" (operators + - * / ^,
    /// functions abs, sign).
    #[arg(long)]
    source: Option<String>,
    /// Polynomial degree of the finite-element space.
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// Number of elements.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Domain endpoints "a,b" (custom sources only; examples live on 0,1).
    #[arg(long, default_value = "0,1")]
    domain: String,
    /// Gauss points per element for the nonlinear integrals.
    #[arg(long)]
    quad_points: Option<usize>,
    /// Number of sample rows in the output file.
    #[arg(long, default_value_t = 201)]
    samples: usize,
    /// Output path for the sampled curves.
    #[arg(long, default_value = "solution.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[arg(long)]
    p: f64,
    /// Built-in manufactured family: 1 or 2.
    #[arg(long)]
    example: u8,
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// Comma-separated increasing element counts, e.g. 10,100,1000.
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<usize>,
    #[arg(long)]
    quad_points: Option<usize>,
    /// Output path for the CSV table.
    #[arg(long, default_value = "convergence.csv")]
    out: PathBuf,
    /// Also write a log-log SVG chart here.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    p: f64,
    /// Built-in manufactured family: 1 or 2.
    #[arg(long)]
    example: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Convergence(args) => cmd_convergence(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidConfig(_) | Error::InvalidExponent(_) | Error::ExprParse(_) => 1,
                _ => 2,
            })
        }
    }
}

fn build_pair(example: u8, p: f64) -> Result<ExactPair, Error> {
    match example {
        1 => example1(p),
        2 => example2(p),
        other => Err(Error::InvalidConfig(format!(
            "example must be 1 or 2, got {other}"
        ))),
    }
}

fn fmt(v: f64) -> String {
    // 15 significant digits so orders recomputed from the file match
    format!("{v:.14e}")
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Error> {
    if args.samples < 2 {
        return Err(Error::InvalidConfig("need at least 2 samples".into()));
    }
    let quad_points = args.quad_points.unwrap_or((args.degree + 1).max(8));

    let (pair, source): (Option<ExactPair>, Box<dyn Fn(f64) -> f64>) =
        match (args.example, &args.source) {
            (Some(e), _) => {
                let pair = build_pair(e, args.p)?;
                (Some(pair), Box::new(|_| 0.0))
            }
            (None, Some(src)) => {
                let ast = expr::parse(src)?;
                (None, Box::new(move |x| ast.eval(x)))
            }
            (None, None) => {
                return Err(Error::InvalidConfig(
                    "pass either --example or --source".into(),
                ))
            }
        };

    let domain = if pair.is_some() {
        (0.0, 1.0)
    } else {
        parse_domain(&args.domain)?
    };

    let sol = match &pair {
        Some(pair) => solve_mixed_with(args.p, &pair.f, domain, args.n, args.degree, quad_points)?,
        None => solve_mixed_with(args.p, &source, domain, args.n, args.degree, quad_points)?,
    };

    let mut csv = String::new();
    if pair.is_some() {
        csv.push_str("x,u_h,v_h,u_exact,v_exact\n");
    } else {
        csv.push_str("x,u_h,v_h\n");
    }
    for i in 0..args.samples {
        let x = domain.0 + (domain.1 - domain.0) * i as f64 / (args.samples - 1) as f64;
        let u = sol.u_h.eval(x)?;
        let v = sol.v_h.eval(x)?;
        match &pair {
            Some(pair) => csv.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt(x),
                fmt(u),
                fmt(v),
                fmt((pair.u)(x)),
                fmt((pair.v)(x))
            )),
            None => csv.push_str(&format!("{},{},{}\n", fmt(x), fmt(u), fmt(v))),
        }
    }
    fs::write(&args.out, csv).map_err(|e| Error::InvalidConfig(format!("write failed: {e}")))?;

    println!("residual_v = {:.3e}", sol.residual_v);
    println!("residual_u = {:.3e}", sol.residual_u);
    println!("wall_time  = {:?}", sol.wall_time);
    if let Some(pair) = &pair {
        let qp = 2 * quad_points.min(10);
        println!("err_u_l2   = {:.6e}", l2_error(&sol.u_h, &pair.u, qp)?);
        println!("err_v_l2   = {:.6e}", l2_error(&sol.v_h, &pair.v, qp)?);
    }
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<ExitCode, Error> {
    if args.n_list.len() < 2 {
        return Err(Error::InvalidConfig(
            "need at least 2 mesh sizes in --n-list".into(),
        ));
    }
    let pair = build_pair(args.example, args.p)?;
    if let Some(note) = &pair.note {
        eprintln!("note: {note}");
    }
    let table = run_convergence(&pair, args.degree, &args.n_list, args.quad_points)?;
    fs::write(&args.out, table_csv(&table))
        .map_err(|e| Error::InvalidConfig(format!("write failed: {e}")))?;
    print!("{}", table_csv(&table));
    println!("wrote {}", args.out.display());
    if let Some(plot_path) = &args.plot {
        let title = format!(
            "example {}, p = {}, degree {}",
            args.example, args.p, args.degree
        );
        fs::write(plot_path, loglog_svg(&table, &title))
            .map_err(|e| Error::InvalidConfig(format!("write failed: {e}")))?;
        println!("wrote {}", plot_path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn table_csv(table: &ConvergenceTable) -> String {
    let mut out = String::from(
        "n,h,err_u_l2,err_v_l2,err_u_h1,err_v_h1,eoc_u_l2,eoc_v_l2,eoc_u_h1,eoc_v_h1\n",
    );
    for row in &table.rows {
        let r = &row.report;
        let cell = |o: Option<f64>| o.map(fmt).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.n_elements,
            fmt(r.h),
            fmt(r.err_u_l2),
            fmt(r.err_v_l2),
            fmt(r.err_u_h1),
            fmt(r.err_v_h1),
            cell(row.eoc_u_l2),
            cell(row.eoc_v_l2),
            cell(row.eoc_u_h1),
            cell(row.eoc_v_h1),
        ));
    }
    out
}

fn cmd_validate(args: ValidateArgs) -> Result<ExitCode, Error> {
    let pair = build_pair(args.example, args.p)?;
    if let Some(note) = &pair.note {
        println!("note: {note}");
    }
    if args.example == 2 {
        println!(
            "note: v is negative on (0,1): v(x) = -((x - x^3)/6)^(p-1); the positive \
             variant of the same magnitude does not satisfy v'' = f"
        );
    }
    let report = check_consistency(&pair, 50, 1e-8)?;
    println!(
        "{}: max defect {:.3e} (v'' - f: {:.3e} at x = {:.6}; u'' - sign(v)|v|^(q-1): {:.3e} at x = {:.6})",
        pair.label,
        report.max_defect(),
        report.max_defect_v,
        report.worst_x_v,
        report.max_defect_u,
        report.worst_x_u
    );
    println!("PASS");
    Ok(ExitCode::SUCCESS)
}

fn parse_domain(s: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidConfig(format!(
            "domain must be 'a,b', got '{s}'"
        )));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad domain endpoint '{}'", parts[0])))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad domain endpoint '{}'", parts[1])))?;
    Ok((a, b))
}
