use std::time::Instant;

use brieskorn_core::brieskorn::{gauss_manin_identity_check, BrieskornModule, Hypersurface};
use brieskorn_core::families::{grp_nabla_matrix, pole_constancy_check, tjurina_scan};
use brieskorn_core::gradedpoly::{format_rational, monomial_basis};
use brieskorn_core::singularities::{alpha_y, chart_coverage, hodge_filtration_dims};
use brieskorn_core::{jacobian, Error, Monomial, Poly};

use crate::report::*;
use crate::spec::Problem;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Analyze,
    Pole,
    Hodge,
    Jacobian,
    Milnor,
    Bs,
    Family,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Pole => "pole",
            Command::Hodge => "hodge",
            Command::Jacobian => "jacobian",
            Command::Milnor => "milnor",
            Command::Bs => "bs",
            Command::Family => "family",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub q_max: Option<u32>,
    pub timing: bool,
}

fn is_input_error(e: &Error) -> bool {
    !matches!(
        e,
        Error::NoStabilization { .. }
            | Error::MilnorMismatch { .. }
            | Error::NonIsolated { .. }
            | Error::PoleDimsNotConstant
            | Error::Linalg(_)
            | Error::Exterior(_)
            | Error::EigenIndexOutOfRange { .. }
    )
}

struct Ctx<'a> {
    problem: &'a Problem,
    module: BrieskornModule,
    report: Report,
    q_max: Option<u32>,
}

impl Ctx<'_> {
    fn vars(&self) -> &[String] {
        &self.problem.spec.variables
    }

    fn render(&self, p: &Poly) -> String {
        p.render(self.vars())
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        self.render(&Poly::monomial(m.clone()))
    }

    fn n(&self) -> usize {
        self.module.n()
    }

    /// Computation failures become a failed check and a note.
    fn attempt<T>(&mut self, what: &str, r: brieskorn_core::Result<T>) -> Result<Option<T>, CliError> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e) if is_input_error(&e) => Err(CliError::Input(format!("{what}: {e}"))),
            Err(e) => {
                self.report.check(format!("{what} computed"), false);
                self.report.notes.push(format!("{what}: {e}"));
                Ok(None)
            }
        }
    }

    fn smooth(&mut self) -> bool {
        let s = jacobian::smoothness_test(self.module.hypersurface().poly());
        self.report.smooth = Some(s);
        s
    }

    fn jacobian(&mut self) {
        let f = self.module.hypersurface().poly().clone();
        let k0 = jacobian::smoothness_degree(&f).unwrap_or(0);
        let (tjurina, start, tail) = match jacobian::global_tjurina(&f) {
            Ok(c) => (Some(c.tau), Some(c.start_degree), c.dims),
            Err(e) => {
                self.report.notes.push(format!("tjurina number: {e}"));
                (None, None, Vec::new())
            }
        };
        let first = start.unwrap_or(k0.max(0) + self.n() as i64 + 2);
        let mut dims = jacobian::jacobian_dims(&f, first - 1);
        dims.extend(tail);
        self.report.jacobian = Some(JacobianSection {
            dims,
            smoothness_degree: k0,
            tjurina,
            tjurina_start_degree: start,
        });
    }

    fn pole(&mut self) -> Result<(), CliError> {
        let policy = self.problem.policy;
        let r = self.module.pole_filtration_dims(&policy);
        let Some(r) = self.attempt("pole order filtration", r)? else {
            return Ok(());
        };
        self.report.check("pole dims nondecreasing in q", r.nondecreasing);
        self.report
            .check(format!("P^1 = P^0 (q = {} and {})", self.n() - 1, self.n()), r.constant_from_n_minus_1);
        if self.report.smooth == Some(true) {
            let hodge = jacobian::smooth_hodge_numbers(self.n(), self.module.d());
            let mut partial = 0u64;
            let mut expected: Vec<u64> = hodge
                .iter()
                .map(|h| {
                    partial += h;
                    partial
                })
                .collect();
            expected.push(partial);
            let got: Vec<u64> = r.dims.iter().map(|&d| d as u64).collect();
            self.report
                .check("smooth: pole dims are partial sums of jacobian ring pieces", got == expected);
        }
        self.report.pole = Some(PoleSection {
            dims: r.dims,
            h_n: r.h_n,
            certificates: r.certificates,
        });
        Ok(())
    }

    fn charts(&mut self) -> Result<(), CliError> {
        let vars = self.vars().to_vec();
        let charts: Vec<ChartSection> = self
            .problem
            .charts
            .iter()
            .map(|c| {
                let local_vars: Vec<String> = vars
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != c.chart)
                    .map(|(_, v)| v.clone())
                    .collect();
                ChartSection {
                    point: c.point.iter().map(format_rational).collect(),
                    chart: vars[c.chart].clone(),
                    weights: c.weights.weights().iter().map(format_rational).collect(),
                    local_equation: c.local_equation.render(&local_vars),
                    principal_part: c.principal_part.render(&local_vars),
                    semi_weighted: c.semi_weighted,
                    milnor_number: c.milnor_number,
                    alpha: format_rational(&c.alpha),
                }
            })
            .collect();
        let f = self.module.hypersurface().poly().clone();
        if !self.problem.charts.is_empty() {
            let cov = chart_coverage(&f, &self.problem.charts);
            if let Some(cov) = self.attempt("chart coverage", cov)? {
                self.report.check(
                    format!(
                        "charts account for the global tjurina number ({} <= {})",
                        cov.global_tjurina, cov.milnor_sum
                    ),
                    !cov.possibly_incomplete,
                );
            }
        }
        if !charts.is_empty() {
            self.report.charts = Some(charts);
        }
        Ok(())
    }

    fn hodge(&mut self, required: bool) -> Result<(), CliError> {
        let f = self.module.hypersurface().poly().clone();
        let alpha = match alpha_y(&f, &self.problem.charts) {
            Ok(a) => a,
            Err(Error::MissingCharts) if !required => {
                self.report
                    .notes
                    .push("hodge filtration skipped: singular but no singular_points supplied".into());
                return Ok(());
            }
            Err(e) => return Err(CliError::Input(format!("hodge filtration: {e}"))),
        };
        self.report.alpha_y = Some(alpha.as_ref().map_or_else(|| "inf".to_string(), format_rational));
        let q_max = self.q_max();
        let policy = self.problem.policy;
        let r = hodge_filtration_dims(&self.module, &self.problem.charts, q_max, &policy);
        let Some(r) = self.attempt("hodge filtration", r)? else {
            return Ok(());
        };
        let contained = r.entries.iter().all(|e| e.hodge_dim <= e.pole_dim);
        self.report.check("F^{n-q} within P^{n-q}", contained);
        let low: Vec<_> = r
            .entries
            .iter()
            .filter(|e| match &alpha {
                None => true,
                Some(a) => brieskorn_core::gradedpoly::rat(e.q as i64 + 1) <= *a,
            })
            .collect();
        if !low.is_empty() {
            self.report
                .check("F = P for q <= alpha_Y - 1", low.iter().all(|e| e.hodge_dim == e.pole_dim));
        }
        self.report.hodge = Some(
            r.entries
                .into_iter()
                .map(|e| HodgeRow {
                    q: e.q,
                    jq_dim: e.jq_dim,
                    hodge_dim: e.hodge_dim,
                    pole_dim: e.pole_dim,
                    certificate: e.hodge_certificate,
                })
                .collect(),
        );
        Ok(())
    }

    fn q_max(&self) -> u32 {
        self.q_max.unwrap_or(self.n() as u32)
    }

    fn bs(&mut self) -> Result<(), CliError> {
        let policy = self.problem.policy;
        let r = self.module.briancon_skoda(&policy);
        if let Some(b) = self.attempt("briancon-skoda", r)? {
            self.report.briancon_skoda = Some(BsSection {
                holds: b.holds,
                witness_power: b.witness_power,
                certificate: b.certificate,
            });
        }
        Ok(())
    }

    fn milnor(&mut self) -> Result<(), CliError> {
        let policy = self.problem.policy;
        let mut rows = Vec::new();
        for i in 0..self.module.d() as i64 {
            let r = self.module.milnor_eigenspace(i, &policy);
            let Some(e) = self.attempt(&format!("milnor eigenspace i = {i}"), r)? else {
                continue;
            };
            self.report.check(
                format!("milnor i = {i}: same dimension one period lower"),
                e.agrees,
            );
            rows.push(MilnorRow {
                i,
                dim: e.dim,
                cross_check: e.cross_check,
                certificate: e.certificate,
            });
        }
        let total = rows.iter().map(|r| r.dim).sum();
        self.report.milnor = Some(MilnorSection {
            eigenspaces: rows,
            total,
        });
        Ok(())
    }

    fn structural_checks(&mut self) {
        let n = self.n() as i64;
        let d = self.module.d() as i64;
        let all = (n + 1..=(n + 2) * d).all(|k| self.module.coker_check_prop16(k).holds);
        self.report.check(
            format!("H_f / f H_f matches the jacobian ring for {}..={}", n + 1, (n + 2) * d),
            all,
        );
        let f = self.module.hypersurface().poly().clone();
        let nvars = f.nvars();
        let gm = (0..=2).all(|deg| {
            monomial_basis(nvars, deg)
                .into_iter()
                .all(|m| gauss_manin_identity_check(&f, &Poly::monomial(m)))
        });
        self.report
            .check("df ^ i_xi(P w0) = f P w0 and d(i_xi w) = (k/d) w for deg P <= 2", gm);
    }

    fn family(&mut self, required: bool) -> Result<(), CliError> {
        let Some(family) = self.problem.family.clone() else {
            if required {
                return Err(CliError::Input("family: spec has no [family] table".into()));
            }
            return Ok(());
        };
        let samples = self.problem.samples.clone();
        for s in &samples {
            if let Err(e) = Hypersurface::new(family.specialize(s)) {
                return Err(CliError::Input(format!(
                    "family: fiber at s = {} rejected: {e}",
                    format_rational(s)
                )));
            }
        }
        let policy = self.problem.policy;
        let constancy = pole_constancy_check(&family, &samples, Some(&policy));
        let Some(constancy) = self.attempt("family pole dims", constancy)? else {
            return Ok(());
        };
        let scan = tjurina_scan(&family, &samples);
        let s0 = self.problem.s0.clone();
        let mut nabla = Vec::new();
        for q in 0..=self.q_max() {
            match grp_nabla_matrix(&family, &s0, q, &samples, Some(&policy)) {
                Ok(m) => {
                    self.report.check(
                        format!("Gr nabla q = {q}: same matrix with one more power of f"),
                        m.power_independent,
                    );
                    self.report
                        .check(format!("Gr nabla q = {q}: well defined on classes"), m.well_defined);
                    let matrix = (0..m.matrix.rows())
                        .map(|i| (0..m.matrix.cols()).map(|j| format_rational(&m.entry(i, j))).collect())
                        .collect();
                    nabla.push(NablaSection {
                        q,
                        source_basis: m.source_basis.iter().map(|b| self.render_monomial(b)).collect(),
                        target_basis: m.target_basis.iter().map(|b| self.render_monomial(b)).collect(),
                        matrix,
                        powers: [m.powers.0, m.powers.1],
                        power_independent: m.power_independent,
                        well_defined: m.well_defined,
                    });
                }
                Err(e) => {
                    self.attempt::<()>(&format!("Gr nabla q = {q}"), Err(e))?;
                }
            }
        }
        let direction = self.render(&family.coefficients().get(1).cloned().unwrap_or_else(|| Poly::zero(self.vars().len())));
        self.report.family = Some(FamilySection {
            direction,
            s0: format_rational(&s0),
            samples: samples.iter().map(format_rational).collect(),
            pole_dims: constancy.dims,
            pole_dims_constant: constancy.constant,
            tjurina: scan.tau,
            tjurina_jumps: scan.jumps.iter().map(format_rational).collect(),
            nabla,
        });
        Ok(())
    }
}

pub fn run(command: Command, problem: &Problem, options: RunOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let module = BrieskornModule::new(problem.hypersurface.clone());
    let input = InputEcho {
        variables: problem.spec.variables.clone(),
        polynomial: problem.hypersurface.poly().render(&problem.spec.variables),
        n: module.n(),
        d: module.d(),
        policy: PolicyEcho {
            window: problem.policy.window,
            max_power: problem.policy.max_power,
            min_target_degree: problem.policy.min_target_degree,
        },
    };
    let mut ctx = Ctx {
        problem,
        module,
        report: Report::new(command.name(), input),
        q_max: options.q_max,
    };
    match command {
        Command::Analyze => {
            ctx.smooth();
            ctx.jacobian();
            ctx.pole()?;
            ctx.charts()?;
            ctx.hodge(false)?;
            ctx.bs()?;
            ctx.milnor()?;
            ctx.structural_checks();
            ctx.family(false)?;
        }
        Command::Pole => {
            ctx.smooth();
            ctx.pole()?;
        }
        Command::Hodge => {
            ctx.smooth();
            ctx.charts()?;
            ctx.hodge(true)?;
        }
        Command::Jacobian => {
            ctx.smooth();
            ctx.jacobian();
        }
        Command::Milnor => ctx.milnor()?,
        Command::Bs => ctx.bs()?,
        Command::Family => ctx.family(true)?,
    }
    if options.timing {
        ctx.report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(ctx.report)
}
