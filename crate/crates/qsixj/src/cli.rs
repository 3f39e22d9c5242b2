//! The `qsixj` command-line front end.
//!
//! All spin inputs are twice-spins (integers). Values are reported as
//! (sign, log-magnitude, decimal approximation); decimal approximations
//! that overflow f64 print as ±inf while the log form stays exact.
//!
//! Exit status: 0 success, 2 validation error, 3 numerical diagnostic.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admiss::make_space;
use crate::eigen::{tet_table_eigen, tet_table_oracle, tet_table_recur, TetTable};
use crate::error::{Error, Result};
use crate::networks::{bubble, sixj_rw, tet_oracle, theta, NetValue, TetArgs};
use crate::opcount;
use crate::par;
use crate::qnum::{QContext, Scalar};
use crate::recur::{
    max_mixed_deviation, tet_column_oracle, tet_column_recur_mode, Method, RecurMode, TetColumn,
};

#[derive(Parser, Debug)]
#[command(name = "qsixj", version, about = "su_q(2) 6j-symbols: oracle, recurrence, eigensolver")]
pub struct Cli {
    /// Deformation parameter: classical | real:Q | root:R | complex:RE,IM
    #[arg(long = "q", global = true, default_value = "classical")]
    pub q: String,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Oracle,
    Recurrence,
    Eigen,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Tet,
    Kl,
}

#[derive(Args, Debug)]
pub struct SixLabels {
    #[arg(short)]
    pub a: i64,
    #[arg(short)]
    pub b: i64,
    #[arg(short)]
    pub c: i64,
    #[arg(short)]
    pub d: i64,
    #[arg(short)]
    pub j: i64,
    #[arg(short)]
    pub l: i64,
}

#[derive(Args, Debug)]
pub struct OutputOpts {
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// A single Tet(a,b,c,d; j, l) value
    Tet {
        #[command(flatten)]
        labels: SixLabels,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// A single Kauffman-Lins 6j-symbol {a b j; c d l}
    Kl {
        #[command(flatten)]
        labels: SixLabels,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// A single Racah-Wigner 6j-symbol from twice-spins j1 j2 j3 J1 J2 J3
    /// (classical regime only)
    Rw {
        #[arg(num_args = 6)]
        labels: Vec<i64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// All admissible j at fixed l
    Column {
        #[arg(short)]
        a: i64,
        #[arg(short)]
        b: i64,
        #[arg(short)]
        c: i64,
        #[arg(short)]
        d: i64,
        #[arg(short)]
        l: i64,
        #[command(flatten)]
        out: OutputOpts,
        #[arg(long, value_enum, default_value_t = Convention::Tet)]
        convention: Convention,
        /// Two-sided recurrence propagation (recurrence method only)
        #[arg(long)]
        two_sided: bool,
    },
    /// The full table over (j, l)
    Table {
        #[arg(short)]
        a: i64,
        #[arg(short)]
        b: i64,
        #[arg(short)]
        c: i64,
        #[arg(short)]
        d: i64,
        #[command(flatten)]
        out: OutputOpts,
        #[arg(long, value_enum, default_value_t = Convention::Tet)]
        convention: Convention,
    },
    /// Cross-method comparison over all spaces with labels up to a bound
    Verify {
        #[arg(long, default_value_t = 8)]
        max_label: i64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Operation-count and timing scaling of a full column, recurrence vs
    /// repeated oracle
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![100i64, 1000, 10000])]
        sizes: Vec<i64>,
    },
}

/// One serialized value; the json-lines and csv schema.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Record {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub j: i64,
    pub l: i64,
    pub sign: i8,
    pub logmag: f64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    pub cancel_digits: f64,
    pub method: String,
}

impl Record {
    fn from_value(
        labels: (i64, i64, i64, i64, i64, i64),
        nv: &NetValue,
        method: &str,
    ) -> Record {
        let (a, b, c, d, j, l) = labels;
        let (sign, logmag, value, im) = match nv.value {
            Scalar::Real(s) => (s.sign, s.logmag, s.to_f64(), None),
            Scalar::Complex(z) => (1, z.norm().ln(), z.re, Some(z.im)),
        };
        Record {
            a,
            b,
            c,
            d,
            j,
            l,
            sign,
            logmag,
            value,
            im,
            cancel_digits: nv.cancel_digits,
            method: method.to_string(),
        }
    }
}

pub fn parse_regime(spec: &str) -> Result<QContext> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("classical") {
        return Ok(QContext::classical());
    }
    if let Some(rest) = spec.strip_prefix("real:") {
        let q: f64 = rest
            .parse()
            .map_err(|_| Error::InvalidRegime(format!("cannot parse real q from `{rest}`")))?;
        return QContext::real_q(q);
    }
    if let Some(rest) = spec.strip_prefix("root:") {
        let r: u32 = rest
            .parse()
            .map_err(|_| Error::InvalidRegime(format!("cannot parse root order from `{rest}`")))?;
        return QContext::root_of_unity(r);
    }
    if let Some(rest) = spec.strip_prefix("complex:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidRegime(format!(
                "complex q needs the form complex:RE,IM, got `{rest}`"
            )));
        }
        let re: f64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidRegime(format!("cannot parse `{}`", parts[0])))?;
        let im: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidRegime(format!("cannot parse `{}`", parts[1])))?;
        return QContext::complex_q(Complex64::new(re, im));
    }
    Err(Error::InvalidRegime(format!(
        "unrecognized regime spec `{spec}` (expected classical | real:Q | root:R | complex:RE,IM)"
    )))
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidRegime(_)
        | Error::UnsupportedRegime { .. }
        | Error::InvalidLabel { .. }
        | Error::InadmissibleIndex { .. }
        | Error::EmptySpace => 2,
        Error::InadmissibleDenominator(..)
        | Error::NoConvergence { .. }
        | Error::AmbiguousEigenvalue { .. }
        | Error::SignFixFailed { .. } => 3,
    }
}

/// Run a parsed command line; returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    init_thread_pool();
    let mut stdout = std::io::stdout().lock();
    match dispatch(&cli, &mut stdout) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

#[cfg(feature = "parallel")]
fn init_thread_pool() {
    if let Ok(v) = std::env::var("QSIXJ_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn init_thread_pool() {}

fn dispatch(cli: &Cli, out: &mut impl Write) -> Result<i32> {
    let ctx = parse_regime(&cli.q)?;
    match &cli.cmd {
        Command::Tet { labels, out: opts } => {
            let nv = single_tet(&ctx, labels, opts.method)?;
            let rec = Record::from_value(
                (labels.a, labels.b, labels.c, labels.d, labels.j, labels.l),
                &nv,
                method_name(opts.method),
            );
            emit(out, &[rec], opts.format);
            Ok(0)
        }
        Command::Kl { labels, out: opts } => {
            let tet = single_tet(&ctx, labels, opts.method)?;
            let nv = kl_from_tet(&ctx, labels, &tet)?;
            let rec = Record::from_value(
                (labels.a, labels.b, labels.c, labels.d, labels.j, labels.l),
                &nv,
                method_name(opts.method),
            );
            emit(out, &[rec], opts.format);
            Ok(0)
        }
        Command::Rw { labels, format } => {
            if labels.len() != 6 {
                return Err(Error::InvalidLabel {
                    name: "labels",
                    value: labels.len() as i64,
                    reason: "rw takes exactly six twice-spins: j1 j2 j3 J1 J2 J3".into(),
                });
            }
            let (j1, j2, j3, cj1, cj2, cj3) =
                (labels[0], labels[1], labels[2], labels[3], labels[4], labels[5]);
            let nv = sixj_rw(&ctx, j1, j2, j3, cj1, cj2, cj3)?;
            let rec = Record::from_value((cj1, cj2, j1, j2, cj3, j3), &nv, "oracle");
            emit(out, &[rec], *format);
            Ok(0)
        }
        Command::Column {
            a,
            b,
            c,
            d,
            l,
            out: opts,
            convention,
            two_sided,
        } => {
            let space = make_space(&ctx, *a, *b, *c, *d)?;
            if !space.contains_l(*l) {
                return Err(Error::InadmissibleIndex {
                    name: "l",
                    value: *l,
                    a: *a,
                    b: *b,
                    c: *c,
                    d: *d,
                });
            }
            let method = resolve_method(&ctx, opts.method, Method::Recurrence);
            let mode = if *two_sided {
                RecurMode::TwoSided
            } else {
                RecurMode::Forward
            };
            let col = column_by_method(&ctx, &space, *l, method, mode)?;
            let recs = column_records(&ctx, &col, *convention)?;
            emit(out, &recs, opts.format);
            Ok(0)
        }
        Command::Table {
            a,
            b,
            c,
            d,
            out: opts,
            convention,
        } => {
            let space = make_space(&ctx, *a, *b, *c, *d)?;
            let method = resolve_method(&ctx, opts.method, Method::Eigen);
            let table = table_by_method(&ctx, &space, method)?;
            let mut recs = Vec::new();
            for &j in &table.js {
                for &l in &table.ls {
                    let nv = *table.value_at(j, l).unwrap();
                    let nv = apply_convention(&ctx, &table.space, j, nv, *convention)?;
                    recs.push(Record::from_value(
                        (*a, *b, *c, *d, j, l),
                        &nv,
                        table.method.as_str(),
                    ));
                }
            }
            emit(out, &recs, opts.format);
            Ok(0)
        }
        Command::Verify { max_label, tol } => {
            let report = verify_sweep(&ctx, *max_label)?;
            writeln!(
                out,
                "verify: {} spaces, {} columns, max mixed deviation {:.3e} (tol {:.1e})",
                report.spaces, report.columns, report.max_dev, tol
            )
            .ok();
            if report.max_dev <= *tol {
                writeln!(out, "verify: OK").ok();
                Ok(0)
            } else {
                writeln!(out, "verify: FAILED at {:?}", report.worst).ok();
                Ok(3)
            }
        }
        Command::Bench { sizes } => {
            bench(&ctx, sizes, out)?;
            Ok(0)
        }
    }
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Oracle | MethodArg::Auto => "oracle",
        MethodArg::Recurrence => "recurrence",
        MethodArg::Eigen => "eigen",
    }
}

fn resolve_method(ctx: &QContext, m: MethodArg, default: Method) -> Method {
    match m {
        MethodArg::Oracle => Method::Oracle,
        MethodArg::Recurrence => Method::Recurrence,
        MethodArg::Eigen => Method::Eigen,
        MethodArg::Auto => match default {
            // Eigen is only defined for the definite regimes.
            Method::Eigen
                if !matches!(
                    ctx.regime(),
                    crate::qnum::Regime::Classical | crate::qnum::Regime::RootOfUnity(_)
                ) =>
            {
                Method::Recurrence
            }
            other => other,
        },
    }
}

fn single_tet(ctx: &QContext, labels: &SixLabels, method: MethodArg) -> Result<NetValue> {
    let SixLabels { a, b, c, d, j, l } = *labels;
    match method {
        MethodArg::Oracle | MethodArg::Auto => Ok(tet_oracle(ctx, TetArgs::new(a, b, c, d, j, l))),
        MethodArg::Recurrence => {
            let space = make_space(ctx, a, b, c, d)?;
            if !space.contains_j(j) || !space.contains_l(l) {
                return Ok(NetValue::exact_zero(ctx));
            }
            let col = tet_column_recur_mode(ctx, &space, l, RecurMode::Forward)?;
            Ok(*col.value_at(j).unwrap())
        }
        MethodArg::Eigen => {
            let space = make_space(ctx, a, b, c, d)?;
            if !space.contains_j(j) || !space.contains_l(l) {
                return Ok(NetValue::exact_zero(ctx));
            }
            let table = tet_table_eigen(ctx, &space)?;
            Ok(*table.value_at(j, l).unwrap())
        }
    }
}

fn kl_from_tet(ctx: &QContext, labels: &SixLabels, tet: &NetValue) -> Result<NetValue> {
    let SixLabels { a, b, c, d, j, .. } = *labels;
    if tet.exact_zero {
        return Ok(NetValue::exact_zero(ctx));
    }
    scale_to_kl(ctx, a, b, c, d, j, *tet)
}

fn apply_convention(
    ctx: &QContext,
    space: &crate::admiss::FourValentSpace,
    j: i64,
    nv: NetValue,
    convention: Convention,
) -> Result<NetValue> {
    match convention {
        Convention::Tet => Ok(nv),
        Convention::Kl => scale_to_kl(ctx, space.a, space.b, space.c, space.d, j, nv),
    }
}

fn scale_to_kl(
    ctx: &QContext,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    j: i64,
    tet: NetValue,
) -> Result<NetValue> {
    let th1 = theta(ctx, a, d, j);
    let th2 = theta(ctx, b, c, j);
    if th1.exact_zero {
        return Err(Error::InadmissibleDenominator(a, d, j));
    }
    if th2.exact_zero {
        return Err(Error::InadmissibleDenominator(b, c, j));
    }
    let delta = bubble(ctx, j);
    let value = match (tet.value, delta.value, th1.value, th2.value) {
        (Scalar::Real(t), Scalar::Real(dl), Scalar::Real(x), Scalar::Real(y)) => {
            Scalar::Real(t * dl / (x * y))
        }
        _ => Scalar::Complex(
            tet.as_complex() * delta.as_complex() / (th1.as_complex() * th2.as_complex()),
        ),
    };
    Ok(NetValue {
        value,
        exact_zero: tet.exact_zero,
        cancel_digits: tet.cancel_digits,
    })
}

fn column_by_method(
    ctx: &QContext,
    space: &crate::admiss::FourValentSpace,
    l: i64,
    method: Method,
    mode: RecurMode,
) -> Result<TetColumn> {
    match method {
        Method::Oracle => Ok(tet_column_oracle(ctx, space, l)),
        Method::Recurrence => tet_column_recur_mode(ctx, space, l, mode),
        Method::Eigen => tet_table_eigen(ctx, space)?
            .column(l)
            .ok_or(Error::InadmissibleIndex {
                name: "l",
                value: l,
                a: space.a,
                b: space.b,
                c: space.c,
                d: space.d,
            }),
    }
}

fn table_by_method(
    ctx: &QContext,
    space: &crate::admiss::FourValentSpace,
    method: Method,
) -> Result<TetTable> {
    match method {
        Method::Oracle => tet_table_oracle(ctx, space),
        Method::Recurrence => tet_table_recur(ctx, space),
        Method::Eigen => tet_table_eigen(ctx, space),
    }
}

fn column_records(
    ctx: &QContext,
    col: &TetColumn,
    convention: Convention,
) -> Result<Vec<Record>> {
    let s = &col.space;
    let mut recs = Vec::with_capacity(col.values.len());
    for (k, &j) in col.js.iter().enumerate() {
        let nv = apply_convention(ctx, s, j, col.values[k], convention)?;
        recs.push(Record::from_value(
            (s.a, s.b, s.c, s.d, j, col.l),
            &nv,
            col.method.as_str(),
        ));
    }
    Ok(recs)
}

fn emit(out: &mut impl Write, records: &[Record], format: FormatArg) {
    match format {
        FormatArg::Text => {
            for r in records {
                let im = r.im.map(|v| format!(" + {v:.12e}i")).unwrap_or_default();
                writeln!(
                    out,
                    "({},{},{},{}; j={}, l={})  value = {:.12e}{}  [sign {}, log|x| = {:.12e}, cancel {:.1} digits, {}]",
                    r.a, r.b, r.c, r.d, r.j, r.l, r.value, im, r.sign, r.logmag, r.cancel_digits, r.method
                )
                .ok();
            }
        }
        FormatArg::Json => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r).expect("serializable")).ok();
            }
        }
        FormatArg::Csv => {
            writeln!(out, "a,b,c,d,j,l,sign,logmag,value,cancel_digits,method").ok();
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{:e},{:e},{:e},{}",
                    r.a, r.b, r.c, r.d, r.j, r.l, r.sign, r.logmag, r.value, r.cancel_digits, r.method
                )
                .ok();
            }
        }
    }
}

/// Result of a cross-method verification sweep.
pub struct VerifyReport {
    pub spaces: usize,
    pub columns: usize,
    pub max_dev: f64,
    pub worst: Option<(i64, i64, i64, i64, i64)>,
}

/// Compare recurrence (and eigen, where defined) against the oracle over
/// every non-empty space with labels up to `max_label`.
pub fn verify_sweep(ctx: &QContext, max_label: i64) -> Result<VerifyReport> {
    let hi = ctx.root_order().map_or(max_label, |r| max_label.min(r - 2));
    let mut labels = Vec::new();
    for a in 0..=hi {
        for b in 0..=hi {
            for c in 0..=hi {
                for d in 0..=hi {
                    if crate::admiss::nonzero_conditions(ctx, a, b, c, d) {
                        labels.push((a, b, c, d));
                    }
                }
            }
        }
    }
    let spaces = labels.len();
    let results = par::map_collect(labels, |(a, b, c, d)| -> Result<(usize, f64, (i64, i64, i64, i64, i64))> {
        let space = make_space(ctx, a, b, c, d)?;
        let eigen_table = if matches!(
            ctx.regime(),
            crate::qnum::Regime::Classical | crate::qnum::Regime::RootOfUnity(_)
        ) {
            Some(tet_table_eigen(ctx, &space)?)
        } else {
            None
        };
        let mut worst = (0.0f64, (a, b, c, d, space.lmin));
        let mut cols = 0usize;
        for l in space.l_values() {
            cols += 1;
            let oracle = tet_column_oracle(ctx, &space, l);
            // Two-sided propagation: forward alone can lose digits deep in
            // the decaying tail for strongly deformed real q.
            let rec = tet_column_recur_mode(ctx, &space, l, RecurMode::TwoSided)?;
            let dev = max_mixed_deviation(&rec, &oracle);
            if dev > worst.0 {
                worst = (dev, (a, b, c, d, l));
            }
            if let Some(table) = &eigen_table {
                let ecol = table.column(l).expect("admissible l");
                let dev = max_mixed_deviation(&ecol, &oracle);
                if dev > worst.0 {
                    worst = (dev, (a, b, c, d, l));
                }
            }
        }
        Ok((cols, worst.0, worst.1))
    });
    let mut max_dev = 0.0f64;
    let mut worst = None;
    let mut columns = 0usize;
    for r in results {
        let (cols, dev, at) = r?;
        columns += cols;
        if dev > max_dev {
            max_dev = dev;
            worst = Some(at);
        }
    }
    Ok(VerifyReport {
        spaces,
        columns,
        max_dev,
        worst,
    })
}

fn bench(ctx: &QContext, sizes: &[i64], out: &mut impl Write) -> Result<()> {
    writeln!(out, "n,method,ops,seconds").ok();
    let mut ns = Vec::new();
    let mut rec_ops = Vec::new();
    let mut ora_ops = Vec::new();
    for &size in sizes {
        // Space a=b=c=d=t with l=t gives dimension t+1 and a sum range that
        // grows linearly in t per oracle entry.
        let t = ((size - 1).max(1) + 1) / 2 * 2;
        let space = make_space(ctx, t, t, t, t)?;
        let l = t;
        let n = space.n as f64;
        ns.push(n);

        opcount::reset();
        let t0 = Instant::now();
        let col = tet_column_recur_mode(ctx, &space, l, RecurMode::Forward)?;
        let rec_secs = t0.elapsed().as_secs_f64();
        let ops = opcount::total();
        rec_ops.push(ops as f64);
        writeln!(out, "{},recurrence,{},{:.6}", col.values.len(), ops, rec_secs).ok();

        opcount::reset();
        let t0 = Instant::now();
        let col = tet_column_oracle(ctx, &space, l);
        let ora_secs = t0.elapsed().as_secs_f64();
        let ops = opcount::total();
        ora_ops.push(ops as f64);
        writeln!(out, "{},oracle,{},{:.6}", col.values.len(), ops, ora_secs).ok();
    }
    if ns.len() >= 2 {
        writeln!(
            out,
            "fit: recurrence exponent {:.3}, oracle exponent {:.3}",
            opcount::fit_exponent(&ns, &rec_ops),
            opcount::fit_exponent(&ns, &ora_ops)
        )
        .ok();
    }
    Ok(())
}
