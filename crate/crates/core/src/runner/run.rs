use std::path::Path;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use super::config::{mode_name, Audit, ExperimentConfig, MarginalSpec};
use super::output::{write_plan_csv, write_saturation_pgm, OutputError};
use super::report::{
    write_report_json, AuditRecord, ExactValue, OutputFiles, RunEntry, RunReport, RunStatus,
    SaturationCounts, SolvedSummary,
};
use crate::model::{
    format_rational, ratio, CapacityMatrix, CostKind, CostMatrix, DiscreteMarginal, ModelError,
    Problem, Rational, SaturationPattern, TransportPlan,
};
use crate::solver::{
    brute_force_solve, solve_with, vertex_partial_bound, Arithmetic, SolveError, SolveOptions,
    SolveResult, BRUTE_FORCE_MAX_PAIRS,
};
use crate::structure::{
    conjugate_problem, conjugate_transform, cost_complement_identity, scan_exchanges,
    verify_symmetric_optimality, ConjugatePair, ScanMode, SymmetryTransform,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Absolute tolerance for float-mode audits and saturation labels.
pub fn float_tolerance() -> Rational {
    ratio(1, 1_000_000_000)
}

/// File-name form of a density: `3` or `3_2`.
pub fn density_tag(density: &Rational) -> String {
    format_rational(density).replace('/', "_")
}

pub fn plan_file_name(density: &Rational) -> String {
    format!("plan_{}.csv", density_tag(density))
}

pub fn saturation_file_name(density: &Rational) -> String {
    format!("saturation_{}.pgm", density_tag(density))
}

#[derive(Debug, Clone)]
pub struct SolvedRun {
    pub result: SolveResult,
    /// The solver's plan; in float mode, entries within tolerance of a bound
    /// are moved onto it.
    pub plan: TransportPlan,
    pub pattern: SaturationPattern,
}

#[derive(Debug, Clone)]
pub struct DensityRun {
    pub density: Rational,
    pub problem: Problem,
    pub outcome: Result<SolvedRun, SolveError>,
    pub audits: Vec<AuditRecord>,
    pub elapsed: Duration,
}

/// Solved sweep, kept in memory so callers can inspect plans before writing.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub runs: Vec<DensityRun>,
}

pub fn build_problem(config: &ExperimentConfig, density: &Rational) -> Result<Problem, ModelError> {
    let grid = config.grid();
    let (f, g) = match &config.marginals {
        MarginalSpec::Uniform => (
            DiscreteMarginal::uniform(grid),
            DiscreteMarginal::uniform(grid),
        ),
        MarginalSpec::Explicit { f, g } => (
            DiscreteMarginal::new(grid, f.clone())?,
            DiscreteMarginal::new(grid, g.clone())?,
        ),
    };
    let cost = CostMatrix::build(&grid, &grid, config.cost)?;
    let capacity = CapacityMatrix::constant(&grid, &grid, density.clone())?;
    Problem::new(f, g, cost, capacity)
}

fn snap(plan: &TransportPlan, capacity: &CapacityMatrix, tol: &Rational) -> TransportPlan {
    TransportPlan::from_fn(*plan.grid_x(), *plan.grid_y(), |i, j| {
        let m = plan.get(i, j);
        let u = capacity.get(i, j);
        if m.abs() <= *tol {
            Rational::zero()
        } else if (m - u).abs() <= *tol {
            u.clone()
        } else {
            m.clone()
        }
    })
}

fn solve_one(problem: &Problem, options: &SolveOptions) -> Result<SolvedRun, SolveError> {
    let result = solve_with(problem, options)?;
    let (plan, pattern) = match options.arithmetic {
        Arithmetic::Exact => {
            let pattern = SaturationPattern::classify(&result.plan, &problem.capacity)?;
            (result.plan.clone(), pattern)
        }
        Arithmetic::Float64 => {
            let tol = float_tolerance();
            let plan = snap(&result.plan, &problem.capacity, &tol);
            let pattern =
                SaturationPattern::classify_with_tolerance(&plan, &problem.capacity, Some(&tol))?;
            (plan, pattern)
        }
    };
    Ok(SolvedRun {
        result,
        plan,
        pattern,
    })
}

struct AuditContext<'a> {
    config: &'a ExperimentConfig,
    options: SolveOptions,
    tolerance: Option<Rational>,
    /// Every run's density and optimal value, for conjugate lookups.
    values: Vec<(Rational, Option<Rational>)>,
}

impl AuditContext<'_> {
    fn within(&self, defect: &Rational) -> bool {
        match &self.tolerance {
            None => defect.is_zero(),
            Some(t) => defect <= t,
        }
    }

    fn checked(&self, audit: Audit, defect: Rational) -> AuditRecord {
        AuditRecord::checked(audit, self.within(&defect), defect)
    }

    fn run_audit(&self, audit: Audit, problem: &Problem, run: &SolvedRun) -> AuditRecord {
        match self.try_audit(audit, problem, run) {
            Ok(record) => record,
            Err(reason) => AuditRecord::skipped(audit, reason),
        }
    }

    fn try_audit(
        &self,
        audit: Audit,
        problem: &Problem,
        run: &SolvedRun,
    ) -> Result<AuditRecord, String> {
        let value = &run.result.optimal_value;
        match audit {
            Audit::Exchange => {
                let scan = scan_exchanges(&run.plan, &problem.cost, &problem.capacity);
                let defect = (-scan.min_delta.clone()).max(Rational::zero());
                let detail = match scan.mode {
                    ScanMode::Exhaustive => {
                        format!("exhaustive over {} quadruples", scan.quads_examined)
                    }
                    ScanMode::Sampled { samples, seed } => {
                        format!("sampled {samples} quadruples, seed {seed}")
                    }
                };
                Ok(self.checked(audit, defect).with_detail(detail))
            }
            Audit::Vertex => {
                let bound = vertex_partial_bound(problem);
                let excess = run.pattern.partial_count().saturating_sub(bound);
                Ok(self.checked(audit, Rational::from_integer(excess.into())))
            }
            Audit::Complement => {
                let id = cost_complement_identity(
                    &run.pattern,
                    &problem.cost,
                    problem.grid_x(),
                    problem.grid_y(),
                )
                .map_err(|e| e.to_string())?;
                Ok(self.checked(audit, (&id.lhs - &id.rhs).abs()))
            }
            Audit::Transpose | Audit::Negate => {
                let transform = if audit == Audit::Transpose {
                    SymmetryTransform::Transpose
                } else {
                    SymmetryTransform::Negate
                };
                let result = SolveResult {
                    plan: run.plan.clone(),
                    ..run.result.clone()
                };
                let rep = verify_symmetric_optimality(problem, &result, &transform)
                    .map_err(|e| e.to_string())?;
                Ok(self.checked(audit, rep.defect.max(rep.feasibility_defect)))
            }
            Audit::Conjugate => self.conjugate(problem, run, value),
            Audit::Oracle => {
                let (rows, cols) = problem.shape();
                if rows * cols > BRUTE_FORCE_MAX_PAIRS {
                    return Err(format!(
                        "{} cell pairs exceed the oracle limit of {BRUTE_FORCE_MAX_PAIRS}",
                        rows * cols
                    ));
                }
                let oracle = brute_force_solve(problem).map_err(|e| e.to_string())?;
                Ok(self.checked(audit, (value - &oracle.optimal_value).abs()))
            }
        }
    }

    fn conjugate(
        &self,
        problem: &Problem,
        run: &SolvedRun,
        value: &Rational,
    ) -> Result<AuditRecord, String> {
        let density = problem
            .capacity
            .density()
            .cloned()
            .ok_or("capacity is not constant")?;
        if density <= Rational::one() {
            return Err(format!("density {density} has no conjugate exponent"));
        }
        if problem.cost.kind() != CostKind::NegDot {
            return Err(format!(
                "needs the neg_dot cost, got {}",
                problem.cost.kind()
            ));
        }
        let pair = ConjugatePair::new(density).map_err(|e| e.to_string())?;
        let target = conjugate_problem(problem, &pair).map_err(|e| e.to_string())?;
        let swept = self
            .values
            .iter()
            .find(|(d, _)| d == pair.q())
            .and_then(|(_, v)| v.clone());
        let target_value = match swept {
            Some(v) => v,
            None => {
                solve_with(&target, &self.options)
                    .map_err(|e| e.to_string())?
                    .optimal_value
            }
        };
        let mut defect = (&target_value - pair.value_ratio() * value).abs();
        if self.tolerance.is_none() {
            let image =
                conjugate_transform(problem, &run.plan, &pair).map_err(|e| e.to_string())?;
            let feas = image.check_feasible(&target.f, &target.g, &target.capacity);
            let feas = feas.map_err(|e| e.to_string())?;
            let cost = image.total_cost(&target.cost).map_err(|e| e.to_string())?;
            defect = defect
                .max(feas.max_defect())
                .max((cost - &target_value).abs());
        }
        Ok(self
            .checked(Audit::Conjugate, defect)
            .with_detail(format!("paired with density {}", format_rational(pair.q()))))
    }
}

/// Solves every density of the sweep (in parallel) and runs the configured
/// audits. Infeasible densities are recorded without affecting the others.
pub fn run(config: &ExperimentConfig) -> Result<Experiment, RunError> {
    let options = SolveOptions {
        arithmetic: config.mode,
        ..SolveOptions::default()
    };
    let problems = config
        .densities
        .iter()
        .map(|d| build_problem(config, d))
        .collect::<Result<Vec<_>, _>>()?;
    let solved: Vec<(Result<SolvedRun, SolveError>, Duration)> = problems
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let outcome = solve_one(p, &options);
            (outcome, start.elapsed())
        })
        .collect();

    let ctx = AuditContext {
        config,
        options,
        tolerance: (config.mode == Arithmetic::Float64).then(float_tolerance),
        values: config
            .densities
            .iter()
            .zip(&solved)
            .map(|(d, (o, _))| {
                (
                    d.clone(),
                    o.as_ref().ok().map(|s| s.result.optimal_value.clone()),
                )
            })
            .collect(),
    };
    let audits: Vec<Vec<AuditRecord>> = problems
        .par_iter()
        .zip(&solved)
        .map(|(problem, (outcome, _))| match outcome {
            Ok(run) => ctx
                .config
                .audits
                .iter()
                .map(|&a| ctx.run_audit(a, problem, run))
                .collect(),
            Err(_) => Vec::new(),
        })
        .collect();

    let runs = config
        .densities
        .iter()
        .zip(problems)
        .zip(solved)
        .zip(audits)
        .map(
            |(((density, problem), (outcome, elapsed)), audits)| DensityRun {
                density: density.clone(),
                problem,
                outcome,
                audits,
                elapsed,
            },
        )
        .collect();
    Ok(Experiment {
        config: config.clone(),
        runs,
    })
}

impl Experiment {
    pub fn run(&self, density: &Rational) -> Option<&DensityRun> {
        self.runs.iter().find(|r| &r.density == density)
    }

    pub fn report(&self) -> RunReport {
        let c = &self.config;
        let runs = self
            .runs
            .iter()
            .map(|r| {
                let (status, message, solved) = match &r.outcome {
                    Ok(s) => (
                        RunStatus::Optimal,
                        None,
                        Some(SolvedSummary {
                            value: ExactValue(s.result.optimal_value.clone()),
                            solver: s.result.solver.to_string(),
                            iterations: s.result.iterations,
                            saturation: SaturationCounts {
                                saturated: s.pattern.saturated_count(),
                                partial: s.pattern.partial_count(),
                                empty: s.pattern.empty_count(),
                            },
                            partial_bound: vertex_partial_bound(&r.problem),
                            files: OutputFiles {
                                plan: plan_file_name(&r.density),
                                saturation: saturation_file_name(&r.density),
                            },
                            audits: r.audits.clone(),
                        }),
                    ),
                    Err(SolveError::Infeasible) => (RunStatus::Infeasible, None, None),
                    Err(e) => (RunStatus::Error, Some(e.to_string()), None),
                };
                RunEntry {
                    density: ExactValue(r.density.clone()),
                    status,
                    message,
                    solved,
                    elapsed: r.elapsed,
                }
            })
            .collect();
        RunReport {
            d: c.dim,
            n: c.cells_per_axis,
            domain: c.domain.to_string(),
            cost: c.cost.to_string(),
            mode: mode_name(c.mode),
            certifying: c.mode == Arithmetic::Exact,
            tolerance: (c.mode == Arithmetic::Float64).then_some(1e-9),
            runs,
        }
    }

    /// Writes `plan_<density>.csv` and `saturation_<density>.pgm` for every
    /// solved density, then `report.json`.
    pub fn write_outputs(&self, dir: &Path) -> Result<RunReport, RunError> {
        std::fs::create_dir_all(dir)?;
        for r in &self.runs {
            if let Ok(s) = &r.outcome {
                write_plan_csv(
                    &s.plan,
                    &r.problem.capacity,
                    &dir.join(plan_file_name(&r.density)),
                )?;
                write_saturation_pgm(&s.pattern, &dir.join(saturation_file_name(&r.density)))?;
            }
        }
        let report = self.report();
        write_report_json(&report, &dir.join("report.json"))?;
        Ok(report)
    }
}
