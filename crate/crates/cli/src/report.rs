//! Report assembly for the command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;

use knotrep::cohomology::{
    cohomology_dims, filtration_c, last_column_quotient, module_ad, module_cyclic, AdKind, Dims,
};
use knotrep::deform::{deform, ladder, DeformReport, Tolerances, LADDER};
use knotrep::exactalg::Branches;
use knotrep::foxcalc::{torsion_decomposition, TorsionDecomposition};
use knotrep::knotio::{parse_presentation, Presentation};
use knotrep::pipeline::{build_branches_with, float_setup, Branch};
use knotrep::repbuilder::{meridian_trace_formula, upgrade_obstruction, Upgrade};
use knotrep::{Error, QPoly};
use serde::Serialize;

pub const SCHEMA: u32 = 1;
/// Sizes listed in the hypothesis table.
const TABLE_SIZES: std::ops::RangeInclusive<usize> = 2..=5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Build,
    Cohomology,
    Deform,
}

pub struct Options {
    pub command: Command,
    pub file: PathBuf,
    pub n: usize,
    pub factor: Option<usize>,
    pub lambda_branch: usize,
    pub t: Option<f64>,
    pub seed: u64,
    pub all_branches: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ParseError,
    HypothesisFailed,
    Diverged,
    InternalError,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::ParseError => 2,
            Status::HypothesisFailed => 3,
            Status::Diverged => 4,
            Status::InternalError => 5,
        }
    }

    fn of(e: &Error) -> Status {
        match e {
            Error::Parse(_)
            | Error::UnknownGenerator(_)
            | Error::InconsistentDegree { .. }
            | Error::EmptyRelators
            | Error::NotAKnotGroup(_)
            | Error::MultiComponent(_)
            | Error::InvalidArgument(_) => Status::ParseError,
            Error::HypothesisFailed(_) | Error::Infeasible(_) => Status::HypothesisFailed,
            Error::Numerical(_) => Status::Diverged,
            _ => Status::InternalError,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knot: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alexander: Option<AlexanderReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hypothesis: Vec<HypothesisRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Serialize)]
pub struct AlexanderReport {
    pub exact: bool,
    pub delta: String,
    pub delta_at_one: String,
    pub symmetric: bool,
    pub blanchfield_symmetric: bool,
    pub torsion: TorsionDecomposition,
}

#[derive(Debug, Serialize)]
pub struct HypothesisRow {
    pub factor_index: usize,
    pub factor: String,
    pub n: usize,
    pub holds: bool,
}

#[derive(Debug, Serialize)]
pub struct BranchReport {
    pub factor: String,
    pub n: usize,
    pub tower: String,
    pub cocycle: Vec<Vec<String>>,
    pub exact: bool,
    pub relators_identity: bool,
    pub meridian_trace: String,
    pub trace_formula_holds: bool,
    /// `lambda^n + n - 1 != 0`, decided from the factor at `1 - n`.
    pub trace_nonzero: bool,
    pub upgrade: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyBlock>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub embeddings: Vec<EmbeddingReport>,
}

#[derive(Debug, Serialize)]
pub struct CohomologyBlock {
    pub exact: bool,
    pub sl: Dims,
    pub gl: Dims,
    pub z1_expected: usize,
    pub cyclic: Vec<CyclicRow>,
    pub filtration: Vec<FiltrationRow>,
    pub last_column_quotient: Dims,
    pub checks_pass: bool,
}

#[derive(Debug, Serialize)]
pub struct CyclicRow {
    pub k: usize,
    pub dims: Dims,
    pub expected_h1: usize,
}

#[derive(Debug, Serialize)]
pub struct FiltrationRow {
    pub i: usize,
    pub dims: Dims,
}

#[derive(Debug, Serialize)]
pub struct EmbeddingReport {
    pub index: usize,
    pub lambda: [f64; 2],
    pub alpha: [f64; 2],
    pub meridian_trace: [f64; 2],
    pub residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deformations: Vec<DeformReport>,
}

impl RunReport {
    fn new(command: Command) -> Self {
        RunReport {
            schema: SCHEMA,
            command: format!("{command:?}").to_lowercase(),
            status: Status::Ok,
            message: None,
            knot: None,
            alexander: None,
            hypothesis: Vec::new(),
            branches: Vec::new(),
            tolerances: None,
        }
    }

    fn fail(&mut self, status: Status, message: String) {
        if self.status == Status::Ok {
            self.status = status;
            self.message = Some(message);
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.status.code()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}  status: {:?}", self.command, self.status);
        if let Some(m) = &self.message {
            let _ = writeln!(s, "message: {m}");
        }
        if let Some(k) = &self.knot {
            let _ = writeln!(s, "knot: {k}");
        }
        if let Some(a) = &self.alexander {
            let _ = writeln!(s, "Delta = {}   Delta(1) = {}   symmetric: {}", a.delta, a.delta_at_one, a.symmetric);
            let _ = writeln!(s, "invariant factors: [{}]", a.torsion.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "));
            for (i, f) in a.torsion.factors.iter().enumerate() {
                let _ = writeln!(s, "  factor {i}: {}  exponents {:?}", f.factor, f.exponents);
            }
        }
        for h in &self.hypothesis {
            let _ = writeln!(s, "  hypothesis factor {} n={}: {}", h.factor_index, h.n, h.holds);
        }
        for b in &self.branches {
            let _ = writeln!(s, "branch {} (n = {}):", b.tower, b.n);
            let _ = writeln!(s, "  relators map to I: {}", b.relators_identity);
            let _ = writeln!(s, "  tr rho(S_1) = {}  (formula: {}, nonzero: {})", b.meridian_trace, b.trace_formula_holds, b.trace_nonzero);
            let _ = writeln!(s, "  upgrade: {}", b.upgrade);
            if let Some(c) = &b.cohomology {
                let d = |x: &Dims| format!("({}, {}, {}) Z1={} euler={}", x.h0, x.h1, x.h2, x.z1, x.euler_ok);
                let _ = writeln!(s, "  sl: {}  (Z1 expected {})", d(&c.sl), c.z1_expected);
                let _ = writeln!(s, "  gl: {}", d(&c.gl));
                for r in &c.cyclic {
                    let _ = writeln!(s, "  C[t]/(t-a)^{}: {}  expected h1 {}", r.k, d(&r.dims), r.expected_h1);
                }
                for r in &c.filtration {
                    let _ = writeln!(s, "  C({}): {}", r.i, d(&r.dims));
                }
                let _ = writeln!(s, "  M: {}", d(&c.last_column_quotient));
            }
            for e in &b.embeddings {
                let _ = writeln!(s, "  embedding {}: lambda = {:.6}{:+.6}i  residual {:.2e}", e.index, e.lambda[0], e.lambda[1], e.residual);
                for r in &e.deformations {
                    let _ = writeln!(
                        s,
                        "    t={:<6} {:?} it={} residual={:.2e} burnside={} irreducible={:?} |tr|={:.4} non-metabelian={}",
                        r.t,
                        r.status,
                        r.iterations,
                        r.residual,
                        r.burnside_dim,
                        r.irreducible,
                        (r.trace_of_meridian[0].hypot(r.trace_of_meridian[1])),
                        r.non_metabelian
                    );
                }
            }
        }
        s
    }
}

pub fn run(opts: &Options) -> RunReport {
    let mut report = RunReport::new(opts.command);
    if let Err(e) = fill(opts, &mut report) {
        report.fail(Status::of(&e), e.to_string());
    }
    report
}

fn fill(opts: &Options, report: &mut RunReport) -> knotrep::Result<()> {
    let text = std::fs::read_to_string(&opts.file)
        .map_err(|e| Error::Parse(format!("{}: {e}", opts.file.display())))?;
    let p = parse_presentation(&text)?;
    report.knot = Some(p.name.clone());
    let d = torsion_decomposition(&p)?;
    let at_one = d.delta.eval(&knotrep::scalar::int(1));
    report.alexander = Some(AlexanderReport {
        exact: true,
        delta: d.delta.to_string(),
        delta_at_one: at_one.to_string(),
        symmetric: knotrep::foxcalc::is_symmetric(&d.delta),
        blanchfield_symmetric: d.blanchfield_symmetric()?,
        torsion: d.clone(),
    });
    for (i, f) in d.factors.iter().enumerate() {
        for n in TABLE_SIZES {
            report.hypothesis.push(HypothesisRow {
                factor_index: i,
                factor: f.factor.to_string(),
                n,
                holds: d.check_hypothesis(&f.factor, n)?,
            });
        }
    }
    if opts.command == Command::Analyze {
        return Ok(());
    }

    let n = opts.n;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("--n must be at least 2, got {n}")));
    }
    let factor = select_factor(&d, opts.factor, n)?;
    let tol = Tolerances::from_env()?;
    let policy = if opts.all_branches { Branches::All } else { Branches::First };
    let want_cohomology = opts.command == Command::Cohomology;
    let branches = build_branches_with(&p, &factor, n, policy, |b| {
        if want_cohomology {
            cohomology_block(&p, b, &factor, &d).map(Some)
        } else {
            Ok(None)
        }
    })?;
    let ladder_steps: Vec<f64> = match opts.t {
        Some(t) => vec![t],
        None => LADDER.to_vec(),
    };
    for (b, coh) in branches {
        let mut br = exact_branch_report(&p, &b, &factor)?;
        if let Some(c) = &coh {
            if !c.checks_pass {
                report.fail(Status::InternalError, "cohomology dimensions disagree with the predicted values".into());
            }
        }
        br.cohomology = coh;
        if !br.relators_identity {
            report.fail(Status::InternalError, "relator check failed".into());
        }
        let count = b.meta.tower.embeddings().len();
        let indices: Vec<usize> = if opts.all_branches { (0..count).collect() } else { vec![opts.lambda_branch] };
        for idx in indices {
            let s = float_setup(&p, &b, idx, &tol)?;
            let tr = s.base.gens[p.meridian].trace();
            let mut er = EmbeddingReport {
                index: idx,
                lambda: [s.lambda.re, s.lambda.im],
                alpha: [s.alpha.re, s.alpha.im],
                meridian_trace: [tr.re, tr.im],
                residual: s.base.residual,
                deformations: Vec::new(),
            };
            if opts.command == Command::Deform {
                let v = s.direction.as_ref().ok_or_else(|| {
                    Error::InternalConsistency("no cocycle with non-principal lower-left entry".into())
                })?;
                er.deformations = if opts.t.is_some() {
                    vec![deform(&p, &s.base, v, ladder_steps[0], opts.seed, s.eigen_target, &tol)?.0]
                } else {
                    ladder(&p, &s.base, v, &ladder_steps, opts.seed, s.eigen_target, &tol)?
                };
                if let Some(r) = er.deformations.iter().find(|r| !r.converged) {
                    report.fail(
                        Status::Diverged,
                        format!("Newton did not converge at t = {} (last residual {:.3e})", r.t, r.residual),
                    );
                }
            }
            br.embeddings.push(er);
        }
        report.branches.push(br);
    }
    if opts.command == Command::Deform {
        report.tolerances = Some(tol);
    }
    Ok(())
}

fn select_factor(d: &TorsionDecomposition, index: Option<usize>, n: usize) -> knotrep::Result<QPoly> {
    let describe = || {
        d.factors
            .iter()
            .map(|f| format!("{} with exponents {:?}", f.factor, f.exponents))
            .collect::<Vec<_>>()
            .join("; ")
    };
    match index {
        Some(i) => {
            let f = d.factors.get(i).ok_or_else(|| {
                Error::InvalidArgument(format!("--factor {i} out of range ({} factors)", d.factors.len()))
            })?;
            if !d.check_hypothesis(&f.factor, n)? {
                return Err(Error::HypothesisFailed(format!(
                    "torsion at {} is not cyclic of order {}: computed exponents {:?}",
                    f.factor,
                    n - 1,
                    f.exponents
                )));
            }
            Ok(f.factor.clone())
        }
        None => {
            for f in &d.factors {
                if d.check_hypothesis(&f.factor, n)? {
                    return Ok(f.factor.clone());
                }
            }
            let torsion = if d.factors.is_empty() { "no Alexander torsion".to_string() } else { describe() };
            Err(Error::HypothesisFailed(format!("no factor has cyclic torsion of order {} ({torsion})", n - 1)))
        }
    }
}

fn exact_branch_report(p: &Presentation, b: &Branch, factor: &QPoly) -> knotrep::Result<BranchReport> {
    let m = &b.meta;
    let n = m.special.n;
    let tr = m.special.gens[p.meridian].trace();
    let upgrade = match upgrade_obstruction(p, &m.upper)? {
        Upgrade::Obstructed => "obstructed",
        Upgrade::Upgradable(_) => "upgradable",
    };
    let one_minus_n = knotrep::scalar::int(1 - n as i64);
    Ok(BranchReport {
        factor: factor.to_string(),
        n,
        tower: m.tower.to_string(),
        cocycle: m.data.values.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        exact: true,
        relators_identity: m.special.failing_relator(p).is_none(),
        trace_formula_holds: tr == meridian_trace_formula(m.lambda(), n)?,
        meridian_trace: tr.to_string(),
        trace_nonzero: factor.eval(&one_minus_n) != knotrep::scalar::int(0),
        upgrade,
        cohomology: None,
        embeddings: Vec::new(),
    })
}

fn cohomology_block(
    p: &Presentation,
    b: &Branch,
    factor: &QPoly,
    d: &TorsionDecomposition,
) -> knotrep::Result<CohomologyBlock> {
    let m = &b.meta;
    let n = m.special.n;
    let sl = cohomology_dims(p, &module_ad(&m.special.gens, AdKind::Sl)?)?.summary();
    let gl = cohomology_dims(p, &module_ad(&m.special.gens, AdKind::Gl)?)?.summary();
    let exps: Vec<u32> = d.factors.iter().find(|f| &f.factor == factor).map(|f| f.exponents.clone()).unwrap_or_default();
    let mut cyclic = Vec::new();
    for k in 1..=3usize {
        let dims = cohomology_dims(p, &module_cyclic(&p.h, &m.data.alpha, k)?)?.summary();
        let expected_h1 = exps.iter().map(|&e| (e as usize).min(k)).sum();
        cyclic.push(CyclicRow { k, dims, expected_h1 });
    }
    let mut filtration = Vec::new();
    for i in 0..n - 1 {
        filtration.push(FiltrationRow { i, dims: cohomology_dims(p, &filtration_c(&m.upper.gens, i)?)?.summary() });
    }
    let last = cohomology_dims(p, &last_column_quotient(&m.upper.gens)?)?.summary();
    let z1_expected = n * n + n - 2;
    let all_euler = [sl, gl, last].iter().chain(cyclic.iter().map(|c| &c.dims)).chain(filtration.iter().map(|f| &f.dims)).all(|x| x.euler_ok);
    let checks_pass = all_euler
        && sl.z1 == z1_expected
        && (sl.h0, sl.h1) == (0, n - 1)
        && cyclic.iter().all(|c| (c.dims.h0, c.dims.h1, c.dims.h2) == (0, c.expected_h1, c.expected_h1))
        && filtration.iter().all(|f| (f.dims.h0, f.dims.h1, f.dims.h2) == (0, 0, 0))
        && (last.h0, last.h1, last.h2) == (0, n - 1, n - 1);
    Ok(CohomologyBlock { exact: true, sl, gl, z1_expected, cyclic, filtration, last_column_quotient: last, checks_pass })
}
