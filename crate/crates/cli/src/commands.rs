use std::path::Path;

use direct_shaping::analysis::{
    decode_marginals, grid_lower_bound, grid_lower_bound_parity, instability_bound, instability_curve,
    interior_spectral_radius, pair_recurrence_prob, pair_recurrence_upper, pair_study_csv, pair_transition_model,
    GridOptions, PairStudyRow, PairWalkModel, MAX_INSTABILITY_M, MAX_INSTABILITY_T,
};
use direct_shaping::mlc::{
    average_cost, cell_levels, independent_slc_encode, level_fraction_profile, mlc_decode, mlc_encode, MlcCostModel,
    MlcPages,
};
use direct_shaping::report::{csv_text, fmt_num};
use direct_shaping::sim::{
    estimate_corpus_decode_recurrence, estimate_instability, pair_recurrence_mc, pair_recurrence_mc_2d,
    InstabilityConfig,
};
use direct_shaping::slc::{even_checkpoints, slc_decode, slc_encode_padded, zero_fraction_profile};
use direct_shaping::theory::{
    asymptotic_cost, cost_model_from_cer, optimal_rate1_distribution, optimality_gap, parse_cer_csv, CostProfile,
    SourceModel,
};
use direct_shaping::{slc_output_list, BitStream};
use serde_json::json;

use crate::config::{parse_f64_list, Command, Params};
use crate::{ingest_corpus, read, CliError, Output};

const DEFAULT_COST_MODEL: [f64; 4] = [0.0, 0.58, 0.87, 1.29];

pub(crate) fn dispatch(cmd: Command, p: &mut Params, seed: u64) -> Result<Vec<Output>, CliError> {
    match cmd {
        Command::SlcEncode => slc_encode_cmd(p),
        Command::SlcDecode => slc_decode_cmd(p),
        Command::MlcEncode => mlc_encode_cmd(p),
        Command::MlcDecode => mlc_decode_cmd(p),
        Command::Profile => profile(p),
        Command::Bounds => bounds(p),
        Command::Grid => grid(p),
        Command::Instability => instability(p, seed),
        Command::Montecarlo => montecarlo(p, seed),
        Command::Theory => theory(p),
    }
}

fn word_len(p: &mut Params, default: usize) -> Result<usize, CliError> {
    let m: usize = p.parse_or("m", default)?;
    if !(1..=16).contains(&m) {
        return Err(CliError::config("m", format!("{m} outside 1..=16")));
    }
    Ok(m)
}

fn input(p: &mut Params, key: &str) -> Result<(BitStream, usize), CliError> {
    let path = p.require(key)?;
    ingest_corpus(Path::new(&path))
}

fn cost_model(p: &mut Params) -> Result<MlcCostModel, CliError> {
    let Some(raw) = p.raw_str("cost-model") else {
        p.str_or("cost-model", &format!("{DEFAULT_COST_MODEL:?}"));
        return Ok(MlcCostModel::new(DEFAULT_COST_MODEL).expect("default model is valid"));
    };
    let bad = |e: &dyn std::fmt::Display| CliError::config("cost-model", e);
    let text = raw.trim();
    if text.starts_with('[') {
        let v = parse_f64_list(text).map_err(|e| bad(&e))?;
        let costs: [f64; 4] = v.try_into().map_err(|_| bad(&"needs exactly four level costs"))?;
        return MlcCostModel::new(costs).map_err(|e| bad(&e));
    }
    let json = if text.starts_with('{') {
        text.to_string()
    } else {
        String::from_utf8(read(Path::new(text))?).map_err(|_| bad(&"file is not UTF-8"))?
    };
    MlcCostModel::from_json(&json).map_err(|e| bad(&e))
}

fn rho(p: &mut Params, default: f64) -> Result<f64, CliError> {
    let r: f64 = p.parse_or("rho", default)?;
    if !(0.0..0.5).contains(&r) {
        return Err(CliError::config("rho", format!("{r} outside [0, 0.5)")));
    }
    Ok(r)
}

fn distribution(p: &mut Params, default: &str) -> Result<Vec<f64>, CliError> {
    p.f64_list("p", default)
}

fn fraction(s: &BitStream) -> f64 {
    if s.is_empty() {
        0.0
    } else {
        s.count_zeros() as f64 / s.len() as f64
    }
}

fn slc_encode_cmd(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let m = word_len(p, 2)?;
    let (data, bytes) = input(p, "input")?;
    let code = slc_encode_padded(&data, m).map_err(CliError::runtime)?;
    let summary = json!({
        "m": m,
        "data_bytes": bytes,
        "data_bits": code.data_bits,
        "code_bits": code.code.len(),
        "zero_fraction_data": fraction(&data),
        "zero_fraction_code": fraction(&code.code),
    });
    Ok(vec![
        Output {
            name: "code.bin".into(),
            bytes: code.code.to_bytes(),
        },
        Output::json("summary.json", &summary),
    ])
}

fn slc_decode_cmd(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let m = word_len(p, 2)?;
    let (mut code, _) = input(p, "input")?;
    let data_bits: Option<usize> = match p.raw_str("data-bits") {
        Some(v) => Some(v.parse().map_err(|_| CliError::config("data-bits", format!("cannot parse {v:?}")))?),
        None => None,
    };
    code.truncate(code.len() / m * m);
    let mut data = slc_decode(&code, m).map_err(CliError::runtime)?;
    let keep = match data_bits {
        Some(n) if n > data.len() => {
            return Err(CliError::config("data-bits", format!("{n} exceeds the {} decoded bits", data.len())))
        }
        Some(n) => n,
        None => data.len() / 8 * 8,
    };
    data.truncate(keep);
    Ok(vec![Output {
        name: "data.bin".into(),
        bytes: data.to_bytes(),
    }])
}

fn page_costs(pages: &MlcPages, model: &MlcCostModel) -> Result<f64, CliError> {
    Ok(average_cost(&cell_levels(pages).map_err(CliError::runtime)?, model))
}

fn mlc_encode_cmd(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let m = word_len(p, 4)?;
    let model = cost_model(p)?;
    let (stream, _) = input(p, "input")?;
    let data = MlcPages::split_halves(&stream, m);
    let code = mlc_encode(&data, m, &model).map_err(CliError::runtime)?;
    let summary = json!({
        "m": m,
        "cost_model": model.level_costs,
        "page_bits": data.lower.len(),
        "dropped_bits": stream.len() - 2 * data.lower.len(),
        "avg_cost_uncoded": page_costs(&data, &model)?,
        "avg_cost_mlc": page_costs(&code, &model)?,
    });
    Ok(vec![
        Output {
            name: "lower.bin".into(),
            bytes: code.lower.to_bytes(),
        },
        Output {
            name: "upper.bin".into(),
            bytes: code.upper.to_bytes(),
        },
        Output::json("summary.json", &summary),
    ])
}

fn mlc_decode_cmd(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let m = word_len(p, 4)?;
    let model = cost_model(p)?;
    let (lower, _) = input(p, "input")?;
    let (upper, _) = input(p, "upper")?;
    if lower.len() != upper.len() {
        return Err(CliError::config(
            "upper",
            format!("page holds {} bits, lower page holds {}", upper.len(), lower.len()),
        ));
    }
    let data = mlc_decode(&MlcPages { lower, upper }, m, &model).map_err(CliError::runtime)?;
    let mut bytes = data.lower.to_bytes();
    bytes.extend(data.upper.to_bytes());
    Ok(vec![Output {
        name: "data.bin".into(),
        bytes,
    }])
}

fn profile(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let ms = p.usize_list("m", "2,4,8")?;
    if let Some(&m) = ms.iter().find(|&&m| !(1..=16).contains(&m)) {
        return Err(CliError::config("m", format!("{m} outside 1..=16")));
    }
    let count: usize = p.parse_or("checkpoints", 100)?;
    let mlc = p.flag("mlc")?;
    let model = if mlc { Some(cost_model(p)?) } else { None };
    let (stream, _) = input(p, "input")?;
    let zero_profile = |s: &BitStream| zero_fraction_profile(s, &even_checkpoints(s.len(), count)).map_err(CliError::runtime);
    let mut out = vec![Output::text("zero_fraction_uncoded.csv", zero_profile(&stream)?.to_csv())];
    for &m in &ms {
        let code = slc_encode_padded(&stream, m).map_err(CliError::runtime)?;
        out.push(Output::text(format!("zero_fraction_m{m}.csv"), zero_profile(&code.code)?.to_csv()));
    }
    if let Some(model) = model {
        let level_profile = |pages: &MlcPages| -> Result<String, CliError> {
            let levels = cell_levels(pages).map_err(CliError::runtime)?;
            let checkpoints = even_checkpoints(levels.len(), count);
            Ok(level_fraction_profile(&levels, &checkpoints, &model)
                .map_err(CliError::runtime)?
                .to_csv())
        };
        for &m in &ms {
            let data = MlcPages::split_halves(&stream, m);
            if m == ms[0] {
                out.push(Output::text("levels_uncoded.csv", level_profile(&data)?));
            }
            let shaped = mlc_encode(&data, m, &model).map_err(CliError::runtime)?;
            let indep = independent_slc_encode(&data, m).map_err(CliError::runtime)?;
            out.push(Output::text(format!("levels_mlc_m{m}.csv"), level_profile(&shaped)?));
            out.push(Output::text(format!("levels_independent_m{m}.csv"), level_profile(&indep)?));
        }
    }
    Ok(out)
}

fn bounds(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let m = word_len(p, 2)?;
    let probs = distribution(p, "0.4,0.3,0.2,0.1")?;
    let r = rho(p, 0.05)?;
    let t_grid = p.usize_list("t-grid", "0:300:10")?;
    check_enumeration(m, &t_grid)?;
    let curve = instability_curve(&probs, m, r, &t_grid).map_err(|e| CliError::config("p", e))?;
    Ok(vec![Output::text("bound.csv", curve.to_csv())])
}

fn check_enumeration(m: usize, t_grid: &[usize]) -> Result<(), CliError> {
    if m > MAX_INSTABILITY_M {
        return Err(CliError::config("m", format!("bound enumeration supports m <= {MAX_INSTABILITY_M}")));
    }
    if let Some(&t) = t_grid.iter().find(|&&t| t > MAX_INSTABILITY_T) {
        return Err(CliError::config("t-grid", format!("t = {t} beyond the enumeration cap {MAX_INSTABILITY_T}")));
    }
    Ok(())
}

fn walk_model(p: &mut Params, r: f64) -> Result<PairWalkModel, CliError> {
    let probs = distribution(p, "0.6,0.4")?;
    if probs.len() == 2 {
        return PairWalkModel::two_word(probs[0], probs[1], r).map_err(|e| CliError::config("p", e));
    }
    let size = probs.len();
    if !size.is_power_of_two() {
        return Err(CliError::config("p", format!("{size} probabilities is not a power of two")));
    }
    let m = size.trailing_zeros() as usize;
    let pair: usize = p.parse_or("pair", 1)?;
    pair_transition_model(&probs, r, m, pair).map_err(|e| CliError::config("pair", e))
}

fn grid_options(p: &mut Params) -> Result<GridOptions, CliError> {
    let d = GridOptions::default();
    Ok(GridOptions {
        l: p.parse_or("l", d.l)?,
        tol: p.parse_or("tol", d.tol)?,
        max_iter: p.parse_or("max-iter", d.max_iter)?,
    })
}

fn grid(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let r = rho(p, 0.05)?;
    let model = walk_model(p, r)?;
    let opts = grid_options(p)?;
    let ne: usize = p.parse_or("ne", 3)?;
    let nd: usize = p.parse_or("nd", 8)?;
    let parity = p.flag("parity")?;
    let sol = if parity {
        grid_lower_bound_parity(&model, (ne, nd), &opts)
    } else {
        grid_lower_bound(&model, (ne, nd), &opts)
    }
    .map_err(|e| CliError::config(if parity { "parity" } else { "ne" }, e))?;
    let radius = interior_spectral_radius(&model, opts.l).map_err(CliError::runtime)?;
    let summary = json!({
        "start": [ne, nd],
        "lower_bound": sol.at_start(),
        "iterations": sol.iterations,
        "stop": sol.stop,
        "final_delta": sol.final_delta,
        "residual": sol.residual,
        "parity": sol.parity,
        "spectral_radius_upper": radius,
    });
    Ok(vec![Output::text("grid.csv", sol.to_csv()), Output::json("grid.json", &summary)])
}

fn instability(p: &mut Params, seed: u64) -> Result<Vec<Output>, CliError> {
    let m = word_len(p, 2)?;
    let probs = distribution(p, "0.4,0.3,0.2,0.1")?;
    let r = rho(p, 0.05)?;
    let t_grid = p.usize_list("t-grid", "0:300:10")?;
    let cfg = InstabilityConfig {
        p: probs.clone(),
        m,
        rho: r,
        t_grid: t_grid.clone(),
        trials: p.parse_or("trials", 2000)?,
        seed,
        seq_len: p.parse_or("seq-len", 20_000)?,
    };
    let est = estimate_instability(&cfg).map_err(|e| CliError::config("p", e))?;
    let with_bound = m <= MAX_INSTABILITY_M;
    let mut rows = Vec::with_capacity(t_grid.len());
    for (k, &t) in t_grid.iter().enumerate() {
        let bound = if with_bound && t <= MAX_INSTABILITY_T {
            fmt_num(instability_bound(&probs, m, r, t).map_err(|e| CliError::config("p", e))?.clamped)
        } else {
            "nan".to_string()
        };
        let (f, s) = match (est.fractions.get(k), est.stderr.get(k)) {
            (Some(f), Some(s)) => (fmt_num(*f), fmt_num(*s)),
            _ => ("nan".into(), "nan".into()),
        };
        rows.push(vec![t.to_string(), bound, f, s]);
    }
    Ok(vec![Output::text(
        "instability.csv",
        csv_text(&["t", "bound", "fraction", "stderr"], rows),
    )])
}

fn montecarlo(p: &mut Params, seed: u64) -> Result<Vec<Output>, CliError> {
    let study = p.str_or("study", "pair2d");
    match study.as_str() {
        "pair1d" => {
            let probs = distribution(p, "0.6,0.4")?;
            if probs.len() != 2 {
                return Err(CliError::config("p", "pair1d needs two probabilities"));
            }
            let ns = p.usize_list("n", "1:8")?;
            let trials: usize = p.parse_or("trials", 100_000)?;
            let mut rows = Vec::with_capacity(ns.len());
            for &n in &ns {
                let est = pair_recurrence_mc(probs[0], probs[1], n as u64, trials, seed)
                    .map_err(|e| CliError::config("p", e))?;
                let exact = pair_recurrence_prob(probs[0], probs[1], n as i64).map_err(|e| CliError::config("p", e))?;
                rows.push(vec![n.to_string(), fmt_num(est.mean), fmt_num(est.stderr), fmt_num(exact)]);
            }
            Ok(vec![Output::text("pair1d.csv", csv_text(&["N", "mc", "stderr", "exact"], rows))])
        }
        "pair2d" => {
            let probs = distribution(p, "0.6,0.4")?;
            if probs.len() != 2 {
                return Err(CliError::config("p", "pair2d needs two probabilities"));
            }
            let r = rho(p, 0.05)?;
            let nes = p.usize_list("ne", "3")?;
            let nds = p.usize_list("nd", "1:15")?;
            let trials: usize = p.parse_or("trials", 100_000)?;
            let opts = grid_options(p)?;
            let model = PairWalkModel::two_word(probs[0], probs[1], r).map_err(|e| CliError::config("p", e))?;
            let mut rows = Vec::new();
            for &ne in &nes {
                for &nd in &nds {
                    let lower = grid_lower_bound(&model, (ne, nd), &opts).map_err(|e| CliError::config("ne", e))?;
                    let upper = pair_recurrence_upper(probs[0], probs[1], r, ne as i64, nd as i64)
                        .map_err(|e| CliError::config("ne", e))?;
                    let mc = pair_recurrence_mc_2d(probs[0], probs[1], r, ne as u64, nd as u64, trials, seed)
                        .map_err(|e| CliError::config("p", e))?;
                    rows.push(PairStudyRow {
                        ne,
                        nd,
                        lower: lower.at_start(),
                        upper: upper.raw,
                        mc: mc.mean,
                    });
                }
            }
            Ok(vec![Output::text("pair2d.csv", pair_study_csv(&rows))])
        }
        "corpus" => {
            let m = word_len(p, 2)?;
            let r = rho(p, 0.01)?;
            let t_grid = p.usize_list("t-grid", "0:20000:1000")?;
            let trials: usize = p.parse_or("trials", 200)?;
            let (stream, _) = input(p, "input")?;
            let est = estimate_corpus_decode_recurrence(&stream, m, r, &t_grid, trials, seed)
                .map_err(|e| CliError::config("input", e))?;
            Ok(vec![Output::text("corpus_decode.csv", est.to_csv())])
        }
        other => Err(CliError::config(
            "study",
            format!("unknown study {other:?}; expected pair1d, pair2d or corpus"),
        )),
    }
}

fn theory(p: &mut Params) -> Result<Vec<Output>, CliError> {
    let mut out = Vec::new();
    if let Some(cer_path) = p.raw_str("cer") {
        let t0: f64 = p.parse_or("t0", 4000.0)?;
        let cer_max: f64 = p.parse_or("cer-max", 1e-3)?;
        let text = String::from_utf8(read(Path::new(&cer_path))?).map_err(|_| CliError::config("cer", "not UTF-8"))?;
        let curves = parse_cer_csv(&text).map_err(|e| CliError::config("cer", e))?;
        let derived = cost_model_from_cer(&curves, t0, cer_max).map_err(|e| CliError::config("cer", e))?;
        for w in &derived.warnings {
            eprintln!("warning: {w}");
        }
        out.push(Output::text("cost_model.json", format!("{}\n", derived.model.to_json())));
        out.push(Output::json(
            "cer.json",
            &json!({"t0": t0, "cer_max": cer_max, "t_max": derived.t_max, "warnings": derived.warnings}),
        ));
        if p.raw_str("p").is_none() {
            return Ok(out);
        }
    }
    let probs = distribution(p, "0.4,0.3,0.2,0.1")?;
    let source = SourceModel::new(&probs).map_err(|e| CliError::config("p", e))?;
    let m = source.word_len();
    let costs = match p.raw_str("costs") {
        Some(c) => {
            let v = parse_f64_list(&c).map_err(|e| CliError::config("costs", e))?;
            CostProfile::new(&v).map_err(|e| CliError::config("costs", e))?
        }
        None => CostProfile::from_output_list(&slc_output_list(m).map_err(|e| CliError::config("p", e))?),
    };
    let asym = asymptotic_cost(&source, &costs, m).map_err(|e| CliError::config("costs", e))?;
    let gap = optimality_gap(&source, &costs).map_err(|e| CliError::config("costs", e))?;
    let gibbs = optimal_rate1_distribution(source.entropy(), &costs).ok();
    let decode = p
        .raw_str("rho")
        .map(|v| -> Result<_, CliError> {
            let r: f64 = v.parse().map_err(|_| CliError::config("rho", format!("cannot parse {v:?}")))?;
            decode_marginals(source.probs(), r, m).map_err(|e| CliError::config("rho", e))
        })
        .transpose()?;
    out.push(Output::json(
        "theory.json",
        &json!({
            "m": m,
            "probs": source.probs(),
            "costs": costs.costs(),
            "entropy_bits": source.entropy(),
            "per_word": asym.per_word,
            "per_bit": asym.per_bit,
            "c_dsc": gap.c_dsc,
            "c_min": gap.c_min,
            "gap": gap.gap,
            "gibbs": gibbs,
            "decode_marginals": decode.map(|d| d.probs),
        }),
    ));
    Ok(out)
}
