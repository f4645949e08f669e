use std::path::Path;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use super::{
    Cli, Command, KernelArgs, MomentsArgs, OpArgs, Output, SpecfunCmd, TableArgs, TransformArgs, VerifyArgs,
    EXIT_CHECK_FAILED, EXIT_OK,
};
use crate::bargmann::{self, BargmannKind, L2Function, QuadratureRule};
use crate::coeffspace::{CoeffSeq, KernelSpec, Space};
use crate::error::{Error, Result};
use crate::kernels;
use crate::moments::{self, MomentSeq, PsdMode};
use crate::operators::{adjoint_of, expr, BaseOp};
use crate::specfun;
use crate::verify::{self, Profile, VerifyOptions};

pub(crate) fn dispatch(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let value = match &cli.command {
        Command::Verify(a) => return cmd_verify(cli, a),
        Command::Kernel(a) => cmd_kernel(g.terms(), a)?,
        Command::Transform(a) => cmd_transform(g.terms(), g.nodes, a)?,
        Command::Op(a) => return cmd_op(cli, a),
        Command::Moments(a) => cmd_moments(a)?,
        Command::Table(a) => return cmd_table(cli, a),
        Command::Specfun(c) => cmd_specfun(g.terms(), c)?,
    };
    Ok(Output {
        body: render(&value, g.pretty)?,
        code: EXIT_OK,
    })
}

fn render<T: Serialize>(v: &T, pretty: bool) -> Result<String> {
    let mut s = if pretty {
        serde_json::to_string_pretty(v)?
    } else {
        serde_json::to_string(v)?
    };
    s.push('\n');
    Ok(s)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<Output> {
    let g = &cli.global;
    let opts = VerifyOptions {
        profile: a.profile.parse::<Profile>()?,
        seed: g.seed,
        terms: g.terms,
        nodes: g.nodes,
        timings: a.timings,
    };
    let report = verify::run(&opts, &a.filter)?;
    Ok(Output {
        body: render(&report, g.pretty)?,
        code: if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

fn cmd_kernel(terms: usize, a: &KernelArgs) -> Result<Value> {
    let spec = KernelSpec::new(a.space.parse::<Space>()?, a.p);
    let k = kernels::kernel(spec, a.z, a.w, terms)?;
    Ok(serde_json::to_value(k)?)
}

fn parse_phi(spec: &str) -> Result<L2Function> {
    if spec == "gaussian" {
        return Ok(L2Function::gaussian());
    }
    match spec.split_once(':') {
        Some(("hermite_n", k)) => {
            let k = k
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad Hermite index in `{spec}`")))?;
            Ok(L2Function::hermite_basis(k))
        }
        Some(("hermite", file)) => {
            let c: CoeffSeq = serde_json::from_value(read_json(Path::new(file))?)?;
            Ok(L2Function::from_hermite(c))
        }
        _ => Err(Error::InvalidArgument(format!(
            "unknown function `{spec}`; expected gaussian, hermite_n:K or hermite:FILE"
        ))),
    }
}

fn cmd_transform(terms: usize, nodes: usize, a: &TransformArgs) -> Result<Value> {
    let kind: BargmannKind = a.kind.parse()?;
    let phi = parse_phi(&a.phi)?;
    let quad = QuadratureRule::gauss_hermite(nodes)?;
    let t = bargmann::transform(kind, a.p, &phi, a.z, terms, &quad)?;
    Ok(serde_json::to_value(t)?)
}

fn cmd_op(cli: &Cli, a: &OpArgs) -> Result<Output> {
    let op = expr::parse(&a.expr)?;
    let trunc = a.trunc.unwrap_or(cli.global.terms());
    if a.matrix {
        return Ok(Output {
            body: op.matrix(trunc).to_csv(),
            code: EXIT_OK,
        });
    }
    let input = a
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("op needs --input or --matrix".into()))?;
    let f: CoeffSeq = serde_json::from_value(read_json(input)?)?;
    let g = op.apply(&f.resized(trunc));
    Ok(Output {
        body: render(&g, cli.global.pretty)?,
        code: EXIT_OK,
    })
}

fn cmd_moments(a: &MomentsArgs) -> Result<Value> {
    let mode: PsdMode = a.mode.parse()?;
    let seq = match a.seq.split_once(':') {
        Some(("file", path)) => MomentSeq::from_json(format!("file:{path}"), &read_json(Path::new(path))?)?,
        _ => MomentSeq::builtin(&a.seq)?,
    };
    let cert = moments::stieltjes_certificate(&seq, a.nmax, mode)?;
    Ok(serde_json::to_value(cert)?)
}

const TABLE_COLUMNS: [(BaseOp, &str); 4] = [
    (BaseOp::R0, "R0*"),
    (BaseOp::Dz, "D*"),
    (BaseOp::Mz, "Mz*"),
    (BaseOp::I, "I*"),
];

fn cmd_table(cli: &Cli, a: &TableArgs) -> Result<Output> {
    let spec = match a.kind.as_str() {
        "adjoint_hp" => KernelSpec::hp(a.p),
        "adjoint_fp" => KernelSpec::fp(a.p),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown table `{other}`; expected adjoint_hp or adjoint_fp"
            )))
        }
    };
    let adjoints: Vec<_> = TABLE_COLUMNS.iter().map(|&(op, _)| adjoint_of(op, spec)).collect();
    let rows: Vec<Vec<String>> = (0..=a.nmax)
        .map(|n| adjoints.iter().map(|t| t.weight(n).to_string()).collect())
        .collect();
    if cli.global.pretty {
        return Ok(Output {
            body: text_table(a, &rows),
            code: EXIT_OK,
        });
    }
    let shifts: serde_json::Map<String, Value> = TABLE_COLUMNS
        .iter()
        .zip(&adjoints)
        .map(|(&(_, name), t)| (name.to_string(), json!(t.shift())))
        .collect();
    let rows: Vec<Value> = rows
        .iter()
        .enumerate()
        .map(|(n, row)| {
            let mut m = serde_json::Map::new();
            m.insert("n".into(), json!(n));
            for ((_, name), w) in TABLE_COLUMNS.iter().zip(row) {
                m.insert((*name).into(), json!(w));
            }
            Value::Object(m)
        })
        .collect();
    let v = json!({"kind": a.kind, "p": a.p, "shift": shifts, "rows": rows});
    Ok(Output {
        body: render(&v, false)?,
        code: EXIT_OK,
    })
}

fn text_table(a: &TableArgs, rows: &[Vec<String>]) -> String {
    let mut header = vec!["n".to_string()];
    header.extend(TABLE_COLUMNS.iter().map(|(_, name)| name.to_string()));
    let body: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(n, r)| std::iter::once(n.to_string()).chain(r.iter().cloned()).collect())
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|j| body.iter().map(|r| r[j].len()).chain([header[j].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = format!("{} p={}\n", a.kind, a.p);
    s += &line(&header);
    for r in &body {
        s += &line(r);
    }
    s
}

fn big_scalar(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(u) => json!(u),
        None => json!(v.to_string()),
    }
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn cmd_specfun(terms: usize, c: &SpecfunCmd) -> Result<Value> {
    Ok(match *c {
        SpecfunCmd::Stirling2 { n, k } => big_scalar(&specfun::stirling2(n, k)?),
        SpecfunCmd::Touchard { n, x } => complex(specfun::touchard(n, x)?),
        SpecfunCmd::HermiteHe { n, z } => complex(specfun::hermite_he(n, z)),
        SpecfunCmd::HermiteFn { n, x } => json!(specfun::hermite_fn(n, x)),
        SpecfunCmd::Hyper { p, z } => complex(specfun::hyper_1s2s(p, z, terms)),
        SpecfunCmd::Pochhammer { a, n } => json!(specfun::pochhammer(a, n)),
    })
}
