use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use tingdof::adt::{
    check_entropy_gap, check_less_noisy, AdtParams, AdtReport, ProductDistribution,
};
use tingdof::oracle::{grid_achievable_points, oracle_max_sum, strategy_count, GridSpec};
use tingdof::regions::{is_ctin, is_tin};
use tingdof::{
    classify_regime, dualize, effective_interference, gdof_bounds, ia_sum_gdof, max_weighted_sum,
    outer_bound_region, parse_network, parse_network_report, parse_strategy, polyhedral_region,
    sinr_rates_ibc, tina_region_contains, union_max_weighted_sum, validate_network,
    ChannelStrengths, DecodingOrder, Error, Rational, Scalar, Side, SubnetworkOrder, UserMap,
};

use crate::args::{
    AdtArgs, AdtMode, Command, DualizeArgs, MaxsumArgs, MemberArgs, OracleArgs, OracleFormat,
    RatesArgs, RegionArgs, RegionSelection, Selector, StrategyArgs,
};
use crate::{CliError, Inputs, Report};

type Outcome = Result<Report, CliError>;

/// Calls a generic command with the exact or the float number type.
macro_rules! numeric {
    ($exact:expr, $f:ident($($arg:expr),*)) => {
        if $exact {
            $f::<Rational>($($arg),*)
        } else {
            $f::<f64>($($arg),*)
        }
    };
}

pub fn run(cmd: &Command, inputs: &Inputs) -> Outcome {
    match cmd {
        Command::Validate(_) => validate(inputs),
        Command::Classify(c) => numeric!(c.arithmetic.is_exact(true), classify(inputs)),
        Command::Region(a) => numeric!(a.common.arithmetic.is_exact(true), region(inputs, a)),
        Command::Member(a) => numeric!(a.common.arithmetic.is_exact(true), member(inputs, a)),
        Command::Maxsum(a) => numeric!(a.common.arithmetic.is_exact(true), maxsum(inputs, a)),
        Command::Bounds(a) => numeric!(a.common.arithmetic.is_exact(true), bounds(inputs, a)),
        Command::Rates(a) => numeric!(a.common.arithmetic.is_exact(false), rates(inputs, a)),
        Command::Dualize(a) => numeric!(a.common.arithmetic.is_exact(true), dual(inputs, a)),
        Command::Oracle(a) => numeric!(a.common.arithmetic.is_exact(false), oracle(inputs, a)),
        Command::Ia(c) => numeric!(c.arithmetic.is_exact(true), ia(inputs)),
        Command::Adt(a) => adt(a),
    }
}

fn ok(body: Value) -> Outcome {
    Ok(Report::Json {
        body: into_map(body),
        passed: true,
    })
}

fn into_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("reports are JSON objects"),
    }
}

fn num<T: Scalar>(x: T) -> Value {
    json!(x.to_f64())
}

fn nested<T: Scalar>(m: &UserMap<T>) -> Value {
    json!(m
        .cells()
        .iter()
        .map(|c| c.iter().map(|&x| x.to_f64()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn flat<T: Scalar>(m: &UserMap<T>) -> Value {
    json!(m.values().map(|x| x.to_f64()).collect::<Vec<_>>())
}

fn net_text(inputs: &Inputs) -> &str {
    inputs.net.as_deref().expect("command takes a network")
}

/// Parses the network and rejects one whose cells are out of order.
fn load_net<T: Scalar>(inputs: &Inputs) -> Result<ChannelStrengths<T>, CliError> {
    let net = parse_network::<T>(net_text(inputs))?;
    if let Some(v) = validate_network(&net).first() {
        return Err(Error::Precondition(format!(
            "users must be listed by ascending direct strength ({}: {}); see `validate`",
            v.user, v.message
        ))
        .into());
    }
    Ok(net)
}

fn decimal<T: Scalar>(s: &str) -> Result<T, CliError> {
    T::from_decimal_str(s).map_err(|e| Error::Parameter(format!("{s}: {e}")).into())
}

fn tuple<T: Scalar>(net: &ChannelStrengths<T>, values: &[String]) -> Result<UserMap<T>, CliError> {
    let parsed = values
        .iter()
        .map(|s| decimal(s))
        .collect::<Result<Vec<T>, _>>()?;
    Ok(UserMap::from_flat(net.shape(), parsed)?)
}

fn weights<T: Scalar>(
    net: &ChannelStrengths<T>,
    values: &Option<Vec<String>>,
) -> Result<UserMap<T>, CliError> {
    match values {
        Some(v) => tuple(net, v),
        None => Ok(UserMap::filled(net.shape(), T::one())),
    }
}

fn slot_lists(text: &str, what: &str) -> Result<Vec<Vec<usize>>, CliError> {
    serde_json::from_str(text).map_err(|e| {
        Error::Malformed(format!(
            "{what} file must hold 1-based slot lists per cell: {e}"
        ))
        .into()
    })
}

/// Region selected by `--order` and `--subnet`: the active users of each
/// cell, in decoding order.
fn selected_region(
    shape: &[usize],
    sel: &RegionSelection,
    inputs: &Inputs,
) -> Result<SubnetworkOrder, CliError> {
    let order = match &sel.order {
        Selector::Default => DecodingOrder::identity(shape),
        Selector::File(_) => {
            let text = inputs.order.as_deref().expect("order file was read");
            DecodingOrder::from_one_based(slot_lists(text, "order")?, shape)?
        }
    };
    let perms = match &sel.subnet {
        Selector::Default => order.to_one_based(),
        Selector::File(_) => {
            let text = inputs.subnet.as_deref().expect("subnet file was read");
            let active = slot_lists(text, "subnet")?;
            if active.len() != shape.len() {
                return Err(Error::Dimension(format!(
                    "subnet lists {} cells, network has {}",
                    active.len(),
                    shape.len()
                ))
                .into());
            }
            order
                .to_one_based()
                .into_iter()
                .zip(&active)
                .map(|(perm, keep)| perm.into_iter().filter(|s| keep.contains(s)).collect())
                .collect()
        }
    };
    Ok(SubnetworkOrder::from_one_based(perms, shape)?)
}

fn validate(inputs: &Inputs) -> Outcome {
    let (net, clamped) = parse_network_report::<Rational>(net_text(inputs))?;
    let violations = validate_network(&net);
    Ok(Report::Json {
        passed: violations.is_empty(),
        body: into_map(json!({
            "ok": violations.is_empty(),
            "shape": net.shape(),
            "violations": violations,
            "clamped": clamped,
        })),
    })
}

fn classify<T: Scalar>(inputs: &Inputs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    ok(json!({
        "regime": classify_regime(&net),
        "ctin": is_ctin(&net),
        "tin": is_tin(&net),
    }))
}

fn region<T: Scalar>(inputs: &Inputs, a: &RegionArgs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    if a.outer {
        let r = outer_bound_region(&net)?;
        return ok(json!({ "kind": "outer", "region": r.to_json() }));
    }
    let sel = selected_region(net.shape(), &a.selection, inputs)?;
    let r = polyhedral_region(&net, &sel)?;
    ok(json!({ "kind": "polyhedral", "order": sel.to_one_based(), "region": r.to_json() }))
}

fn member<T: Scalar>(inputs: &Inputs, a: &MemberArgs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    let d = tuple(&net, &a.point)?;
    let m = tina_region_contains(&net, &d)?;
    ok(json!({
        "member": m.member,
        "witness": m.witness.map(|w| w.to_one_based()),
    }))
}

fn maxsum<T: Scalar>(inputs: &Inputs, a: &MaxsumArgs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    let w = weights(&net, &a.weights)?;
    let (sol, witness) = if a.union {
        union_max_weighted_sum(&net, &w)?
    } else {
        let sel = selected_region(net.shape(), &a.selection, inputs)?;
        (max_weighted_sum(&polyhedral_region(&net, &sel)?, &w)?, sel)
    };
    let mut body = json!({
        "value": num(sol.value),
        "argmax": flat(&sol.argmax),
        "order": witness.to_one_based(),
    });
    if T::EXACT {
        body["value_exact"] = json!(sol.value.to_string());
    }
    ok(body)
}

fn bounds<T: Scalar>(inputs: &Inputs, a: &StrategyArgs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    let mut s = parse_strategy(inputs.strategy.as_deref().expect("strategy was read"), &net)?;
    if let Some(side) = a.side {
        s.side = side.into();
    }
    let gamma = effective_interference(&net, &s)?;
    let d = gdof_bounds(&net, &s)?;
    ok(json!({
        "side": s.side,
        "effective_interference": nested(&gamma),
        "gdof": nested(&d),
        "sum": num(d.sum()),
    }))
}

fn rates<T: Scalar>(inputs: &Inputs, a: &RatesArgs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    let s = parse_strategy(inputs.strategy.as_deref().expect("strategy was read"), &net)?;
    if s.side != Side::Ibc {
        return Err(
            Error::Precondition("rates are computed for downlink strategies".into()).into(),
        );
    }
    let rep = sinr_rates_ibc(&net, &s.order, &s.power, a.pnominal)?;
    let d = gdof_bounds(&net, &s)?;
    ok(json!({
        "pnominal": rep.nominal_snr,
        "sinr": rep.sinr,
        "rate": rep.rate,
        "normalized_rate": rep.normalized,
        "gdof": nested(&d),
    }))
}

fn dual<T: Scalar>(inputs: &Inputs, a: &DualizeArgs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    let s = parse_strategy(inputs.strategy.as_deref().expect("strategy was read"), &net)?;
    let rep = dualize(&net, &s, !a.no_normalize)?;
    ok(json!({
        "input": rep.input.to_json(),
        "normalization": rep.normalized.as_ref().map(|n| json!({
            "order": n.order.to_one_based(),
            "steps": n.steps,
        })),
        "effective_interference": nested(&rep.levels),
        "output": rep.output.to_json(),
        "order_ok": rep.order_ok,
    }))
}

fn oracle<T: Scalar>(inputs: &Inputs, a: &OracleArgs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    let depth = match &a.rmax {
        Some(r) => decimal(r)?,
        None => GridSpec::default_for(&net).depth,
    };
    let grid = GridSpec::new(decimal(&a.grid)?, depth)?;
    let side: Side = a.side.into();
    match a.format {
        OracleFormat::Csv => {
            let points = grid_achievable_points(&net, side, &grid, a.budget)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let header: Vec<String> = net
                .user_ids()
                .map(|u| format!("c{}u{}", u.cell, u.slot))
                .collect();
            let write_err = |e: csv::Error| Error::Malformed(e.to_string());
            w.write_record(&header).map_err(write_err)?;
            for p in &points {
                w.write_record(p.values().map(|x| x.to_f64().to_string()))
                    .map_err(write_err)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Malformed(e.to_string()))?;
            Ok(Report::Csv(
                String::from_utf8(bytes).expect("CSV of numbers is UTF-8"),
            ))
        }
        OracleFormat::Json => {
            let w = weights(&net, &a.weights)?;
            let best = oracle_max_sum(&net, side, &grid, &w, a.budget)?;
            let points = grid_achievable_points(&net, side, &grid, a.budget)?;
            ok(json!({
                "side": side,
                "grid": { "step": num(grid.step), "depth": num(grid.depth) },
                "strategies": strategy_count(&net, &grid).to_string(),
                "distinct_points": points.len(),
                "max_sum": {
                    "value": num(best.value),
                    "point": nested(&best.point),
                    "strategy": best.strategy.to_json(),
                },
            }))
        }
    }
}

fn ia<T: Scalar>(inputs: &Inputs) -> Outcome {
    let net = load_net::<T>(inputs)?;
    ok(ia_sum_gdof(&net)?.to_json())
}

fn adt(a: &AdtArgs) -> Outcome {
    let &[m1, m2, n1, n2] = a.params.as_slice() else {
        return Err(Error::Parameter(format!(
            "--params takes four levels m1,m2,n1,n2, got {}",
            a.params.len()
        ))
        .into());
    };
    let params = AdtParams::new(m1, m2, n1, n2)?;
    let modes: Vec<AdtMode> = match a.mode {
        Some(m) => vec![m],
        None => [AdtMode::LessNoisy, AdtMode::EntropyGap]
            .into_iter()
            .filter(|m| match m {
                AdtMode::LessNoisy => params.less_noisy_regime(),
                AdtMode::EntropyGap => params.entropy_gap_regime(),
            })
            .collect(),
    };
    if modes.is_empty() {
        return Err(
            Error::Precondition(format!("{params:?} lies in neither inequality's regime")).into(),
        );
    }
    let q = params.q();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut dists: Vec<ProductDistribution> = (0..a.trials)
        .map(|_| ProductDistribution::random(q, &mut rng))
        .collect();
    dists.push(ProductDistribution::uniform(q));
    for x1 in 0..1u32 << q {
        for x2 in 0..1u32 << q {
            dists.push(ProductDistribution::point(q, x1, x2));
        }
    }
    let mut checks = Vec::new();
    let mut passed = true;
    for mode in modes {
        let (name, rep): (&str, AdtReport) = match mode {
            AdtMode::LessNoisy => ("less-noisy", check_less_noisy(&params, &dists)?),
            AdtMode::EntropyGap => ("entropy-gap", check_entropy_gap(&params, &dists)?),
        };
        passed &= rep.holds();
        checks.push(json!({
            "mode": name,
            "holds": rep.holds(),
            "min_slack": rep.min_slack,
            "worst_index": rep.worst_index,
        }));
    }
    Ok(Report::Json {
        passed,
        body: into_map(json!({
            "params": params,
            "distributions": dists.len(),
            "checks": checks,
        })),
    })
}
