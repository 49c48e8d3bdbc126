//! Command execution: run the requested analysis and render the output
//! document.

use serde_json::json;

use bandspec::analysis::{
    classify_point, distribution_limit, empirical_distribution, essential_spectrum_estimate,
    trace_moment_oracle, Schedule,
};
use bandspec::error::Error;
use bandspec::operator::{degree_estimate, filtration_norm_bound, periodicity_diagnostic};
use bandspec::operator::{DEFAULT_PERIODICITY_TOL, DEFAULT_PERIODICITY_WINDOW};
use bandspec::schrodinger::{affine_moment_transform, build_hamiltonian, hamiltonian_spectrum};
use bandspec::{BandOperatorSpec, DiscretizationParams, Filtration, PointVerdict};

use crate::config::{CommandKind, OperatorSource, OutputFormat, RunConfig};
use crate::output::{to_csv, to_json, Cell};

enum Prepared {
    Operator {
        spec: BandOperatorSpec,
        filt: Filtration,
    },
    Hamiltonian {
        params: DiscretizationParams,
        filt: Filtration,
    },
}

fn prepare(source: &OperatorSource) -> Result<Prepared, Error> {
    let filt = source.filtration();
    match source {
        OperatorSource::Operator(doc) => Ok(Prepared::Operator {
            spec: doc.spec()?,
            filt,
        }),
        OperatorSource::Schrodinger(doc) => Ok(Prepared::Hamiltonian {
            params: doc.params()?,
            filt,
        }),
    }
}

/// Envelope shared by all JSON outputs.
fn envelope(config: &RunConfig, payload: serde_json::Value) -> serde_json::Value {
    let mut doc = json!({
        "schema_version": 1,
        "command": config.command.name(),
        "config": serde_json::to_value(&config.source).expect("source serializes"),
        "schedule": config.schedule,
    });
    if let (Some(obj), Some(extra)) = (doc.as_object_mut(), payload.as_object()) {
        for (k, v) in extra {
            obj.insert(k.clone(), v.clone());
        }
    }
    doc
}

pub fn execute(config: &RunConfig) -> Result<String, Error> {
    let sched = Schedule::new(config.schedule.clone())?;
    let prepared = prepare(&config.source)?;

    match &config.command {
        CommandKind::Spectrum => {
            let report = match &prepared {
                Prepared::Operator { spec, filt } => {
                    essential_spectrum_estimate(spec, *filt, config.resolution, &sched)?
                }
                Prepared::Hamiltonian { params, filt } => {
                    hamiltonian_spectrum(params, *filt, config.resolution, &sched)?
                }
            };
            let mut payload = json!({
                "resolution": config.resolution,
                "report": serde_json::to_value(&report).expect("report serializes"),
            });
            if let Prepared::Hamiltonian { params, .. } = &prepared {
                let (_, form) = build_hamiltonian(params);
                payload["affine_form"] =
                    serde_json::to_value(form).expect("affine form serializes");
            }
            Ok(to_json(&envelope(config, payload)))
        }

        CommandKind::Classify { lambda, width } => {
            let point: PointVerdict = match &prepared {
                Prepared::Operator { spec, filt } => {
                    classify_point(spec, *filt, *lambda, *width, &sched)?
                }
                Prepared::Hamiltonian { params, filt } => {
                    // Classify on the tridiagonal side, report in
                    // Hamiltonian coordinates.
                    let (spec, form) = build_hamiltonian(params);
                    let inv = form.inverse();
                    let mut pv = classify_point(
                        &spec,
                        *filt,
                        inv.apply(*lambda),
                        *width / form.a,
                        &sched,
                    )?;
                    pv.lambda = *lambda;
                    pv.window_width = *width;
                    pv
                }
            };
            let payload = json!({
                "point": serde_json::to_value(&point).expect("verdict serializes"),
            });
            Ok(to_json(&envelope(config, payload)))
        }

        CommandKind::Distribution { size } => {
            let (dist, mapped) = match &prepared {
                Prepared::Operator { spec, filt } => {
                    let d = empirical_distribution(spec, *filt, *size)?;
                    let values = d.sample().values().to_vec();
                    (d, values)
                }
                Prepared::Hamiltonian { params, filt } => {
                    let (spec, form) = build_hamiltonian(params);
                    let d = empirical_distribution(&spec, *filt, *size)?;
                    let values = d.sample().values().iter().map(|v| form.apply(*v)).collect();
                    (d, values)
                }
            };
            match config.format {
                OutputFormat::Json => {
                    let payload = json!({
                        "size": size,
                        "dim": dist.dim(),
                        "tol": dist.sample().tol(),
                        "eigenvalues": mapped,
                    });
                    Ok(to_json(&envelope(config, payload)))
                }
                OutputFormat::Csv => {
                    let rows: Vec<Vec<Cell>> = mapped
                        .iter()
                        .enumerate()
                        .map(|(i, v)| vec![Cell::Int(i as u64), Cell::Float(*v)])
                        .collect();
                    Ok(to_csv(&["index", "lambda"], &rows))
                }
            }
        }

        CommandKind::Moments { max_k, window } => {
            let (spec, filt, form) = match &prepared {
                Prepared::Operator { spec, filt } => (spec.clone(), *filt, None),
                Prepared::Hamiltonian { params, filt } => {
                    let (spec, form) = build_hamiltonian(params);
                    (spec, *filt, Some(form))
                }
            };
            let estimates = distribution_limit(&spec, filt, &sched, *max_k)?;
            let walk: Vec<f64> = (0..=*max_k)
                .map(|k| trace_moment_oracle(&spec, k, *window))
                .collect::<Result<_, _>>()?;

            let mut eigen_moments: Vec<f64> =
                estimates.iter().map(|m| m.estimate).collect();
            let mut per_schedule: Vec<Vec<f64>> = (0..sched.len())
                .map(|i| estimates.iter().map(|m| m.per_schedule[i]).collect())
                .collect();
            let mut walk_moments = walk;
            if let Some(form) = &form {
                eigen_moments = affine_moment_transform(&eigen_moments, form);
                walk_moments = affine_moment_transform(&walk_moments, form);
                for column in &mut per_schedule {
                    *column = affine_moment_transform(column, form);
                }
            }

            match config.format {
                OutputFormat::Json => {
                    let rows: Vec<serde_json::Value> = (0..=*max_k)
                        .map(|k| {
                            let schedule_values: Vec<f64> =
                                per_schedule.iter().map(|col| col[k]).collect();
                            json!({
                                "k": k,
                                "eigenvalue_moment": eigen_moments[k],
                                "walk_moment": walk_moments[k],
                                "per_schedule": schedule_values,
                            })
                        })
                        .collect();
                    let payload = json!({
                        "window": window,
                        "moments": rows,
                    });
                    Ok(to_json(&envelope(config, payload)))
                }
                OutputFormat::Csv => {
                    let rows: Vec<Vec<Cell>> = (0..=*max_k)
                        .map(|k| {
                            vec![
                                Cell::Int(k as u64),
                                Cell::Float(eigen_moments[k]),
                                Cell::Float(walk_moments[k]),
                            ]
                        })
                        .collect();
                    Ok(to_csv(&["k", "eigenvalue_moment", "walk_moment"], &rows))
                }
            }
        }

        CommandKind::Sweep { sigmas } => {
            let Prepared::Hamiltonian { params, filt } = &prepared else {
                unreachable!("validated: sweep runs on a discretization config");
            };
            let mut ordered = sigmas.clone();
            ordered.sort_by(f64::total_cmp);
            let mut entries = Vec::new();
            for &sigma in &ordered {
                let p = DiscretizationParams::new(sigma, params.potential().clone())?;
                let report = hamiltonian_spectrum(&p, *filt, config.resolution, &sched)?;
                entries.push((sigma, report.essential_support));
            }
            match config.format {
                OutputFormat::Json => {
                    let rows: Vec<serde_json::Value> = entries
                        .iter()
                        .map(|(sigma, support)| {
                            json!({
                                "sigma": sigma,
                                "essential_support": serde_json::to_value(support)
                                    .expect("intervals serialize"),
                            })
                        })
                        .collect();
                    let payload = json!({
                        "resolution": config.resolution,
                        "sweep": rows,
                    });
                    Ok(to_json(&envelope(config, payload)))
                }
                OutputFormat::Csv => {
                    let mut rows = Vec::new();
                    for (sigma, support) in &entries {
                        for iv in support {
                            rows.push(vec![
                                Cell::Float(*sigma),
                                Cell::Float(iv.lo),
                                Cell::Float(iv.hi),
                            ]);
                        }
                    }
                    Ok(to_csv(&["sigma", "interval_lo", "interval_hi"], &rows))
                }
            }
        }

        CommandKind::Diagnose => {
            let (spec, filt) = match &prepared {
                Prepared::Operator { spec, filt } => (spec.clone(), *filt),
                Prepared::Hamiltonian { params, filt } => {
                    (build_hamiltonian(params).0, *filt)
                }
            };
            let bw = spec.bandwidth() as usize;
            let n_max = (2 * bw + 4).max(8);
            let diagonal_part = BandOperatorSpec::with_bands(
                spec.diagonal().clone(),
                Default::default(),
            )?;
            let band_part = BandOperatorSpec::with_bands(
                bandspec::DiagonalSequence::constant(0.0),
                spec.bands().clone(),
            )?;
            let periodicity = periodicity_diagnostic(
                spec.diagonal(),
                DEFAULT_PERIODICITY_WINDOW,
                DEFAULT_PERIODICITY_TOL,
            );
            let mut payload = json!({
                "degree": degree_estimate(&spec, filt, n_max),
                "degree_diagonal_part": degree_estimate(&diagonal_part, filt, n_max),
                "degree_band_part": degree_estimate(&band_part, filt, n_max),
                "bandwidth": bw,
                "filtration_norm_bound": filtration_norm_bound(&spec),
                "periodicity": serde_json::to_value(periodicity).expect("report serializes"),
            });
            if let Prepared::Hamiltonian { params, .. } = &prepared {
                let (_, form) = build_hamiltonian(params);
                payload["affine_form"] =
                    serde_json::to_value(form).expect("affine form serializes");
                payload["periodicity_regime"] = json!(params.is_periodicity_regime());
                payload["sigma_sq_over_pi_rational"] =
                    match params.rational_sigma_sq_over_pi(64, 1e-9) {
                        Some((p, q)) => json!([p, q]),
                        None => serde_json::Value::Null,
                    };
            }
            Ok(to_json(&envelope(config, payload)))
        }
    }
}
