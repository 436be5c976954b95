//! Command runner: maps each CLI command onto the corresponding engine
//! operations and assembles the report.

use std::collections::BTreeMap;
use std::time::Instant;

use thiserror::Error;

use qfrob_core::algebras::{self, AlgebraError, InvarianceVariant};
use qfrob_core::brackets::{
    build_canonical, check_bracket_pencil, check_poisson, local_member, theorem1_form_check,
    BracketError, PoissonCondition, PoissonReport,
};
use qfrob_core::deformations::{
    extract_potential, reduction_consistency, residual_ass1, residual_ass2, residual_wdvv,
    DeformError, ResidualTensor,
};
use qfrob_core::geometry::{
    curvature_obstruction, levi_civita, pencil_compatibility_check, GeometryError,
};
use qfrob_core::polyring::zerotest::tensor_zero_witness;
use qfrob_core::{IdentityTestConfig, TestMode};

use crate::report::{ConfigEcho, OverallResult, Report, Verdict, VerdictEntry, WitnessOut};
use crate::schema::{Definition, LoadError};

/// Stream family for zero-tests the CLI performs directly.
const CLI_FAMILY: u32 = 0x91;

/// Residual expressions in witnesses are truncated to this many monomials.
const WITNESS_TERMS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckPoisson,
    CheckPencil,
    CheckCurvature,
    Residuals,
    CheckWdvv,
    CheckAlgebra,
    Canonical,
    LocalMember,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckPoisson => "check-poisson",
            Command::CheckPencil => "check-pencil",
            Command::CheckCurvature => "check-curvature",
            Command::Residuals => "residuals",
            Command::CheckWdvv => "check-wdvv",
            Command::CheckAlgebra => "check-algebra",
            Command::Canonical => "canonical",
            Command::LocalMember => "local-member",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("usage error: {0}")]
    Usage(String),
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn entry(check: &str, v: Verdict) -> VerdictEntry {
    VerdictEntry {
        check: check.to_string(),
        verdict: v,
        witness: None,
        data: BTreeMap::new(),
    }
}

fn entry_with_data(check: &str, v: Verdict, data: BTreeMap<String, String>) -> VerdictEntry {
    VerdictEntry {
        check: check.to_string(),
        verdict: v,
        witness: None,
        data,
    }
}

fn config_echo(cfg: &IdentityTestConfig, parallel: usize) -> ConfigEcho {
    ConfigEcho {
        mode: match cfg.mode {
            TestMode::Symbolic => "symbolic".to_string(),
            TestMode::Probabilistic => "probabilistic".to_string(),
        },
        seed: cfg.seed,
        trials: cfg.trials,
        sample_range: cfg.sample_range,
        parallel,
    }
}

fn push_poisson_verdicts(report: &mut Report, pr: &PoissonReport) {
    let conds = [
        (PoissonCondition::S1, pr.s1),
        (PoissonCondition::S2, pr.s2),
        (PoissonCondition::S3, pr.s3),
        (PoissonCondition::S4, pr.s4),
        (PoissonCondition::S5, pr.s5),
    ];
    for (cond, ok) in conds {
        let witness = pr
            .witnesses
            .iter()
            .find(|(c, _)| *c == cond)
            .map(|(_, w)| WitnessOut {
                indices: w.indices.clone(),
                residual: w.residual.render(WITNESS_TERMS),
            });
        report.push(VerdictEntry {
            check: cond.to_string(),
            verdict: verdict(ok),
            witness,
            data: BTreeMap::new(),
        });
    }
}

fn push_residual_verdict(
    report: &mut Report,
    name: &str,
    res: &ResidualTensor,
    cfg: &IdentityTestConfig,
) {
    match res.witness(cfg) {
        Ok(None) => report.push_simple(name, Verdict::Pass),
        Ok(Some((indices, poly))) => report.push(VerdictEntry {
            check: name.to_string(),
            verdict: Verdict::Fail,
            witness: Some(WitnessOut {
                indices,
                residual: poly.render(WITNESS_TERMS),
            }),
            data: BTreeMap::new(),
        }),
        Err(_) => report.push_simple(name, Verdict::Indeterminate),
    }
}

fn wrong_kind(cmd: Command, def: &Definition, expected: &str) -> RunError {
    RunError::Usage(format!(
        "command `{}` expects a definition of kind {expected}, got `{}`",
        cmd.name(),
        def.kind_name()
    ))
}

/// Run one command against a loaded definition.
pub fn run_command(
    cmd: Command,
    def: &Definition,
    cfg: &IdentityTestConfig,
    input_label: &str,
    parallel: usize,
) -> Result<Report, RunError> {
    let mut report = Report::new(
        cmd.name(),
        input_label,
        def.name(),
        config_echo(cfg, parallel),
    );
    let start = Instant::now();

    match (cmd, def) {
        (Command::CheckPoisson, Definition::Bracket { bracket, .. }) => {
            match check_poisson(bracket, cfg) {
                Ok(pr) => push_poisson_verdicts(&mut report, &pr),
                Err(BracketError::Indeterminate(_)) => {
                    report.push_simple("poisson-conditions", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }

        (Command::CheckPencil, Definition::BracketPencil { first, second, .. }) => {
            match check_bracket_pencil(first, second, cfg) {
                Ok(pr) => push_poisson_verdicts(&mut report, &pr),
                Err(BracketError::NotAPoissonBracket { which, condition }) => {
                    let mut data = BTreeMap::new();
                    data.insert("member".to_string(), which.to_string());
                    data.insert("condition".to_string(), condition.to_string());
                    report.push(entry_with_data("member-poisson", Verdict::Fail, data));
                }
                Err(BracketError::Indeterminate(_)) => {
                    report.push_simple("pencil-conditions", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }
        (Command::CheckPencil, Definition::MetricPencil { pencil, .. }) => {
            match pencil_compatibility_check(pencil, cfg) {
                Ok(rep) => {
                    report.push(entry(
                        "connection-linearity",
                        verdict(rep.connection_linear),
                    ));
                    report.push(entry("curvature-affinity", verdict(rep.curvature_affine)));
                }
                Err(GeometryError::DegeneratePencil) => {
                    report.push(entry("pencil-nondegenerate", Verdict::Fail));
                }
                Err(GeometryError::Indeterminate(_)) => {
                    report.push_simple("pencil-compatibility", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }

        (Command::CheckCurvature, Definition::Metric { metric, k, .. }) => {
            let b = levi_civita(metric).expect("metric nondegenerate by construction");
            let obstruction = curvature_obstruction(metric, &b, k);
            let mut data = BTreeMap::new();
            data.insert("k".to_string(), k.to_string());
            match tensor_zero_witness(&obstruction, cfg, CLI_FAMILY) {
                Ok(None) => report.push(entry_with_data("constant-curvature", Verdict::Pass, data)),
                Ok(Some((idx, residual))) => report.push(VerdictEntry {
                    check: "constant-curvature".to_string(),
                    verdict: Verdict::Fail,
                    witness: Some(WitnessOut {
                        indices: idx.into_iter().map(|i| i + 1).collect(),
                        residual: residual.render(WITNESS_TERMS),
                    }),
                    data,
                }),
                Err(_) => report.push(entry_with_data(
                    "constant-curvature",
                    Verdict::Indeterminate,
                    data,
                )),
            }
        }

        (Command::Residuals, Definition::PotentialFamily { family, .. }) => {
            push_residual_verdict(&mut report, "ass1", &residual_ass1(family), cfg);
            push_residual_verdict(&mut report, "ass2", &residual_ass2(family), cfg);
        }

        (Command::CheckWdvv, Definition::ScalarPotential { potential, .. }) => {
            let (as1, as2) = residual_wdvv(potential);
            push_residual_verdict(&mut report, "as1", &as1, cfg);
            push_residual_verdict(&mut report, "as2", &as2, cfg);
            match reduction_consistency(potential, cfg) {
                Ok(ok) => report.push(entry("reduction-consistency", verdict(ok))),
                Err(DeformError::Indeterminate(_)) => {
                    report.push_simple("reduction-consistency", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }
        (Command::CheckWdvv, Definition::PotentialFamily { family, .. }) => {
            // extract the scalar potential first, then check associativity
            match extract_potential(family, cfg) {
                Ok(potential) => {
                    let mut data = BTreeMap::new();
                    data.insert("phi".to_string(), potential.phi().render(WITNESS_TERMS));
                    report.push(entry_with_data("commutative", Verdict::Pass, data));
                    let (as1, as2) = residual_wdvv(&potential);
                    push_residual_verdict(&mut report, "as1", &as1, cfg);
                    push_residual_verdict(&mut report, "as2", &as2, cfg);
                    match reduction_consistency(&potential, cfg) {
                        Ok(ok) => report.push(entry("reduction-consistency", verdict(ok))),
                        Err(DeformError::Indeterminate(_)) => {
                            report.push_simple("reduction-consistency", Verdict::Indeterminate)
                        }
                        Err(e) => return Err(RunError::Usage(e.to_string())),
                    }
                }
                Err(DeformError::NotCommutative { i, j, k }) => {
                    let mut data = BTreeMap::new();
                    data.insert("witness".to_string(), format!("({i},{j},{k})"));
                    report.push(entry_with_data("commutative", Verdict::Fail, data));
                }
                Err(DeformError::Indeterminate(_)) => {
                    report.push_simple("commutative", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }

        (Command::CheckAlgebra, Definition::Algebra { algebra, form, .. }) => {
            let map_ind = |r: Result<bool, qfrob_core::Indeterminate>| match r {
                Ok(ok) => verdict(ok),
                Err(_) => Verdict::Indeterminate,
            };
            report.push(entry(
                "right-commutativity",
                map_ind(algebras::check_right_commutativity(algebra, cfg)),
            ));
            report.push(entry(
                "left-symmetry",
                map_ind(algebras::check_left_symmetry(algebra, cfg)),
            ));
            report.push(entry(
                "commutativity",
                map_ind(algebras::check_commutativity(algebra, cfg)),
            ));
            report.push(entry(
                "associativity",
                map_ind(algebras::check_associativity(algebra, cfg)),
            ));
            if let Some(form) = form {
                let map_alg = |r: Result<bool, AlgebraError>| match r {
                    Ok(ok) => verdict(ok),
                    Err(AlgebraError::Indeterminate(_)) => Verdict::Indeterminate,
                    Err(_) => Verdict::Fail,
                };
                report.push(entry(
                    "invariance-right",
                    map_alg(algebras::check_invariance(
                        algebra,
                        form,
                        InvarianceVariant::Right,
                        cfg,
                    )),
                ));
                report.push(entry(
                    "invariance-frobenius",
                    map_alg(algebras::check_invariance(
                        algebra,
                        form,
                        InvarianceVariant::Frobenius,
                        cfg,
                    )),
                ));
                let nondegenerate = !form.is_degenerate();
                report.push(entry("form-nondegenerate", verdict(nondegenerate)));
                if nondegenerate {
                    report.push(entry(
                        "quasi-frobenius",
                        map_alg(algebras::check_quasi_frobenius(algebra, form, cfg)),
                    ));
                    report.push(entry(
                        "frobenius",
                        map_alg(algebras::check_frobenius(algebra, form, cfg)),
                    ));
                }
            }
        }
        (Command::CheckAlgebra, Definition::PotentialFamily { family, .. }) => {
            match algebras::soot_equivalence(family, cfg) {
                Ok((first, second)) => {
                    report.push(entry("soot1-equivalence", verdict(first)));
                    report.push(entry("soot2-equivalence", verdict(second)));
                }
                Err(AlgebraError::Indeterminate(_)) => {
                    report.push_simple("soot-equivalence", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }
        (Command::CheckAlgebra, Definition::Form { entries, .. }) => {
            report.push(entry("symmetric", verdict(entries.is_symmetric())));
            report.push(entry("nondegenerate", verdict(!entries.det().is_zero())));
        }

        (Command::Canonical, Definition::PotentialFamily { family, .. }) => {
            let bracket = build_canonical(family);
            let mut data = BTreeMap::new();
            data.insert("k".to_string(), bracket.k().to_string());
            for i in 0..bracket.dim() {
                for j in 0..bracket.dim() {
                    let g = bracket.g().get(i, j);
                    if !g.is_zero() {
                        data.insert(format!("g[{},{}]", i + 1, j + 1), g.render(WITNESS_TERMS));
                    }
                }
            }
            for (idx, e) in bracket.b().iter() {
                if !e.is_zero() {
                    data.insert(
                        format!("b[{},{},{}]", idx[0] + 1, idx[1] + 1, idx[2] + 1),
                        e.render(WITNESS_TERMS),
                    );
                }
            }
            report.push(entry_with_data("canonical-build", Verdict::Pass, data));
            match check_poisson(&bracket, cfg) {
                Ok(pr) => push_poisson_verdicts(&mut report, &pr),
                Err(BracketError::Indeterminate(_)) => {
                    report.push_simple("poisson-conditions", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }
        (Command::Canonical, Definition::Bracket { bracket, eta, .. }) => {
            let eta = eta.as_ref().ok_or_else(|| {
                RunError::Usage(
                    "canonical reconstruction needs `eta` entries in the bracket definition"
                        .to_string(),
                )
            })?;
            match theorem1_form_check(bracket, eta, cfg) {
                Ok(family) => {
                    let mut data = BTreeMap::new();
                    for (i, h) in family.components().iter().enumerate() {
                        data.insert(format!("h[{}]", i + 1), h.to_expr_string());
                    }
                    report.push(entry_with_data("canonical-form", Verdict::Pass, data));
                }
                Err(BracketError::NotCanonical { reason }) => {
                    let mut data = BTreeMap::new();
                    data.insert("reason".to_string(), reason);
                    report.push(entry_with_data("canonical-form", Verdict::Fail, data));
                }
                Err(BracketError::Indeterminate(_)) => {
                    report.push_simple("canonical-form", Verdict::Indeterminate)
                }
                Err(e) => return Err(RunError::Usage(e.to_string())),
            }
        }

        (Command::LocalMember, Definition::BracketPencil { first, second, .. }) => {
            let (l0, l1) = local_member(first, second);
            let mut data = BTreeMap::new();
            data.insert("lambda0".to_string(), l0.to_string());
            data.insert("lambda1".to_string(), l1.to_string());
            data.insert("k0".to_string(), first.k().to_string());
            data.insert("k1".to_string(), second.k().to_string());
            report.push(entry_with_data("local-member", Verdict::Pass, data));
        }

        (Command::CheckPoisson, other) => return Err(wrong_kind(cmd, other, "`bracket`")),
        (Command::CheckPencil, other) => return Err(wrong_kind(cmd, other, "`pencil`")),
        (Command::CheckCurvature, other) => return Err(wrong_kind(cmd, other, "`metric`")),
        (Command::Residuals, other) => return Err(wrong_kind(cmd, other, "`potential_family`")),
        (Command::CheckWdvv, other) => {
            return Err(wrong_kind(
                cmd,
                other,
                "`scalar_potential` or `potential_family`",
            ))
        }
        (Command::CheckAlgebra, other) => {
            return Err(wrong_kind(
                cmd,
                other,
                "`algebra`, `potential_family`, or `form`",
            ))
        }
        (Command::Canonical, other) => {
            return Err(wrong_kind(cmd, other, "`potential_family` or `bracket`"))
        }
        (Command::LocalMember, other) => {
            return Err(wrong_kind(cmd, other, "`pencil` with brackets"))
        }
    }

    report.record_time(cmd.name(), start.elapsed());
    report.finalize();
    Ok(report)
}

/// Run inside a dedicated thread pool of the requested width (1 = the
/// default sequential behavior).
pub fn run_with_parallelism(
    cmd: Command,
    def: &Definition,
    cfg: &IdentityTestConfig,
    input_label: &str,
    parallel: usize,
) -> Result<Report, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .map_err(|e| RunError::Usage(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_command(cmd, def, cfg, input_label, parallel))
}

/// Convenience used by tests: overall result of a finished report.
pub fn overall(report: &Report) -> OverallResult {
    report.result
}
