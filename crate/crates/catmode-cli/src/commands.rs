//! The four subcommand drivers. Each resolves settings, runs the
//! library pipeline, and serializes one deterministic document.

use std::path::Path;

use catmode::assembly::{assemble, AssembledSystem};
use catmode::basis::{linspace, SampledFunction, TrialBasis};
use catmode::chain::{linearized_frequencies, static_equilibrium};
use catmode::equilibrium::EquilibriumShape;
use catmode::modal::{solve_modes, ModeSet};
use catmode::one_mode::one_mode_frequency;

use crate::config::{OutputFormat, Settings};
use crate::error::AppError;
use crate::output::{mode_csv, profile_csv, Json};

fn equilibrium_json(shape: &EquilibriumShape) -> Json {
    Json::Obj(vec![
        ("W", Json::num(shape.w())),
        ("C", Json::num(shape.c())),
    ])
}

fn matrix_json(m: &nalgebra::DMatrix<f64>) -> Json {
    Json::Arr(
        (0..m.nrows())
            .map(|i| Json::Arr((0..m.ncols()).map(|j| Json::Num(m[(i, j)])).collect()))
            .collect(),
    )
}

fn system_json(sys: &AssembledSystem) -> Json {
    let lambda0 = match sys.lambda0.value() {
        Some(v) => Json::Num(v),
        None => Json::Str("indeterminate".into()),
    };
    let parallelism = match sys.parallelism_residual {
        Some(r) => Json::Num(r),
        None => Json::Str("indeterminate".into()),
    };
    Json::Obj(vec![
        ("M", matrix_json(&sys.mass)),
        ("B", matrix_json(&sys.constraint_matrix)),
        ("p", Json::arr_of_nums(sys.gravity.iter())),
        ("q", Json::arr_of_nums(sys.constraint_vector.iter())),
        ("lambda0", lambda0),
        ("parallelism_residual", parallelism),
    ])
}

fn modes_json(set: &ModeSet) -> Json {
    Json::Arr(
        set.modes()
            .iter()
            .map(|mode| {
                Json::Obj(vec![
                    ("omega", Json::num(mode.omega)),
                    ("coeffs", Json::arr_of_nums(mode.coefficients.iter())),
                    (
                        "samples",
                        Json::Arr(
                            mode.samples
                                .iter()
                                .map(|s| {
                                    Json::Arr(vec![
                                        Json::Num(s.x),
                                        Json::Num(s.v),
                                        Json::Num(s.u),
                                    ])
                                })
                                .collect(),
                        ),
                    ),
                ])
            })
            .collect(),
    )
}

fn emit(settings: &Settings, doc: Json) -> Result<(), AppError> {
    let text = doc.to_pretty();
    match &settings.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_dir(settings: &Settings) -> Result<&Path, AppError> {
    let dir = settings.output.as_deref().ok_or_else(|| {
        AppError::Input("--format csv needs --output <directory>".to_string())
    })?;
    std::fs::create_dir_all(dir)
        .map_err(|e| AppError::Input(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

/// `equilibrium`: W, C, solve residuals, and the sampled profile.
pub fn run_equilibrium(settings: &Settings) -> Result<(), AppError> {
    let shape = EquilibriumShape::solve(settings.geometry()?)?;
    let grid = linspace(settings.b, settings.samples.max(2));
    let profile: Vec<(f64, f64)> = grid.iter().map(|&x| (x, shape.y(x))).collect();
    match settings.format {
        OutputFormat::Csv => {
            let text = profile_csv(&profile);
            match &settings.output {
                Some(path) => std::fs::write(path, text).map_err(|e| {
                    AppError::Input(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{text}"),
            }
            Ok(())
        }
        OutputFormat::Json => {
            let (boundary, length) = shape.residuals();
            let doc = Json::Obj(vec![
                ("equilibrium", equilibrium_json(&shape)),
                (
                    "residuals",
                    Json::Obj(vec![
                        ("boundary", Json::num(boundary)),
                        ("length", Json::num(length)),
                    ]),
                ),
                (
                    "samples",
                    Json::Arr(
                        profile
                            .iter()
                            .map(|&(x, y)| Json::Arr(vec![Json::Num(x), Json::Num(y)]))
                            .collect(),
                    ),
                ),
            ]);
            emit(settings, doc)
        }
    }
}

/// `modes`: assembled system plus frequencies and sampled shapes.
pub fn run_modes(settings: &Settings) -> Result<(), AppError> {
    let shape = EquilibriumShape::solve(settings.geometry()?)?;
    let basis = TrialBasis::fourier_sine(settings.b, settings.basis_size)?;
    let system = assemble(&shape, &basis, &settings.rule()?)?;
    let set = solve_modes(&system, settings.samples)?;
    match settings.format {
        OutputFormat::Csv => {
            let dir = csv_dir(settings)?;
            for (i, mode) in set.modes().iter().enumerate() {
                let path = dir.join(format!("mode_{}.csv", i + 1));
                std::fs::write(&path, mode_csv(&mode.samples)).map_err(|e| {
                    AppError::Input(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(())
        }
        OutputFormat::Json => {
            let doc = Json::Obj(vec![
                ("equilibrium", equilibrium_json(&shape)),
                ("system", system_json(&system)),
                ("modes", modes_json(&set)),
            ]);
            emit(settings, doc)
        }
    }
}

/// `nonlinear`: reassemble with the computed modes as the basis,
/// report the degeneracy, and recover each frequency from the
/// second-order one-mode treatment.
pub fn run_nonlinear_check(settings: &Settings) -> Result<(), AppError> {
    if settings.format == OutputFormat::Csv {
        return Err(AppError::Input(
            "nonlinear emits a summary document; csv is not supported".to_string(),
        ));
    }
    let rule = settings.rule()?;
    let shape = EquilibriumShape::solve(settings.geometry()?)?;
    let sine = TrialBasis::fourier_sine(settings.b, settings.basis_size)?;
    let sine_system = assemble(&shape, &sine, &rule)?;
    let set = solve_modes(&sine_system, settings.samples)?;

    let tables = set.vertical_sample_tables();
    let mode_basis = TrialBasis::from_samples(settings.b, &tables)?;
    let mode_system = assemble(&shape, &mode_basis, &rule)?;

    let mut checks = Vec::new();
    for (i, table) in tables.iter().enumerate() {
        let psi = SampledFunction::new(settings.b, table)?;
        let result = one_mode_frequency(&shape, &psi, &rule)?;
        let linear = set.modes()[i].omega;
        checks.push(Json::Obj(vec![
            ("mode", Json::Int((i + 1) as i64)),
            ("omega_tilde", Json::num(result.omega_tilde)),
            ("omega_linear", Json::num(linear)),
            (
                "rel_diff",
                Json::num((result.omega_tilde - linear).abs() / linear),
            ),
        ]));
    }

    let doc = Json::Obj(vec![
        (
            "sine_basis",
            Json::Obj(vec![
                ("q_norm", Json::num(sine_system.constraint_vector.norm())),
                ("degenerate", Json::Bool(sine_system.is_degenerate())),
            ]),
        ),
        (
            "mode_basis",
            Json::Obj(vec![
                ("q_norm", Json::num(mode_system.constraint_vector.norm())),
                ("degenerate", Json::Bool(mode_system.is_degenerate())),
            ]),
        ),
        ("checks", Json::Arr(checks)),
    ]);
    emit(settings, doc)
}

/// `oracle`: discrete-chain frequencies against the modal solve.
pub fn run_oracle_compare(settings: &Settings) -> Result<(), AppError> {
    if settings.format == OutputFormat::Csv {
        return Err(AppError::Input(
            "oracle emits a summary document; csv is not supported".to_string(),
        ));
    }
    let geometry = settings.geometry()?;
    let shape = EquilibriumShape::solve(geometry)?;
    let basis = TrialBasis::fourier_sine(settings.b, settings.basis_size)?;
    let system = assemble(&shape, &basis, &settings.rule()?)?;
    let set = solve_modes(&system, 101)?;
    let modal: Vec<f64> = set.frequencies().into_iter().take(3).collect();

    let chain = static_equilibrium(geometry, settings.links)?;
    let oracle = linearized_frequencies(&chain, modal.len())?;

    let diffs: Vec<f64> = oracle
        .iter()
        .zip(modal.iter())
        .map(|(o, m)| (o - m).abs() / m)
        .collect();
    let tension = geometry.m_bar * geometry.g * shape.w();
    let reaction_rel = (chain.horizontal_reaction - tension).abs() / tension;

    let doc = Json::Obj(vec![
        ("n_links", Json::Int(settings.links as i64)),
        ("oracle_omega", Json::arr_of_nums(oracle.iter())),
        ("modal_omega", Json::arr_of_nums(modal.iter())),
        ("relative_differences", Json::arr_of_nums(diffs.iter())),
        (
            "horizontal_reaction",
            Json::num(chain.horizontal_reaction),
        ),
        ("continuum_tension", Json::num(tension)),
        ("reaction_rel_diff", Json::num(reaction_rel)),
    ]);
    emit(settings, doc)
}
