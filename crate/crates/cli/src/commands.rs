use std::sync::Arc;

use serde_json::{json, Value};

use critlab_core::acceptance;
use critlab_core::dyson::{dyson_run_with, DysonOptions, PivotRule};
use critlab_core::rational::{fmt_big, fmt_q, parse_big, Q};
use critlab_core::reduction::{
    detect_sturmian_reduction, kemperman_reduce, kneser_reduce, vosper_classify, DEFAULT_STURMIAN_BUDGET,
    ReductionError, SturmianError, VosperError,
};
use critlab_core::relative::{
    check_chain_criticality, detect_local_subcritical, disintegrate, relativize, LocalWitness, RelativeError,
    RelativeOutcome,
};
use critlab_core::subgroup::{subgroups, Subgroup};
use critlab_core::subset::{classify_pair, product_set, stabilizer, PairTag, SubsetError};
use critlab_core::torus::{
    arc_sumset, discretize, is_stable_pair, is_stable_twisted, left_closure, make_sturmian, twisted_left_closure,
    twisted_product, twisted_right_closure, SturmianPair, SturmianSpec, TorusError, TwistedSet,
};
use critlab_core::{parse_group, GroupRef, GroupSubset};

use crate::literals::{parse_arcset, parse_twisted};
use crate::report::{budget, parse_err, precondition, CliError, ReportDocument};
use crate::{DysonArgs, GroupArgs, PairArgs, ReduceArgs, ReduceMethod, RelativeArgs, StabilityArgs, SturmianArgs, VerifyArgs};

pub fn load_group(spec: &str) -> Result<GroupRef, CliError> {
    Ok(Arc::new(parse_group(spec)?))
}

fn subset_err(e: SubsetError) -> CliError {
    match e {
        SubsetError::UnknownElement { .. } | SubsetError::IndexOutOfRange { .. } => parse_err(e),
        other => precondition(other),
    }
}

fn parse_set(g: &GroupRef, literal: &str, name: &str) -> Result<GroupSubset, CliError> {
    let s = GroupSubset::parse(g.clone(), literal).map_err(|e| parse_err(format!("{name}: {e}")))?;
    if s.is_empty() {
        return Err(precondition(format!("{name} must be nonempty")));
    }
    Ok(s)
}

fn parse_subgroup(g: &GroupRef, literal: &str) -> Result<Subgroup, CliError> {
    let s = GroupSubset::parse(g.clone(), literal).map_err(parse_err)?;
    Ok(Subgroup::new(g.clone(), s.into_bits())?)
}

fn pair(args: &PairArgs) -> Result<(GroupRef, GroupSubset, GroupSubset), CliError> {
    let g = load_group(&args.group)?;
    let a = parse_set(&g, &args.a, "A")?;
    let b = parse_set(&g, &args.b, "B")?;
    Ok((g, a, b))
}

fn pair_inputs(args: &PairArgs) -> Value {
    json!({ "group": args.group, "A": args.a, "B": args.b })
}

fn brute_product(a: &GroupSubset, b: &GroupSubset) -> Vec<usize> {
    let g = a.group();
    let mut out: Vec<usize> = a.iter().flat_map(|x| b.iter().map(move |y| g.mul(x, y))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn group(args: &GroupArgs) -> Result<ReportDocument, CliError> {
    let g = load_group(&args.spec)?;
    let mut doc = ReportDocument::new("group", json!({ "spec": args.spec }));
    let labels: Vec<&str> = g.elements().map(|x| g.label(x)).collect();
    let mut results = json!({
        "name": g.name(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "identity": g.label(g.identity()),
        "elements": labels,
        "element_orders": g.elements().map(|x| g.element_order(x)).collect::<Vec<_>>(),
        "generators": g.generators().iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
    });
    if args.subgroups {
        let subs: Vec<Value> = subgroups(&g, false)
            .iter()
            .map(|h| json!({ "order": h.order(), "normal": h.is_normal(), "elements": GroupSubset::of_subgroup(h).labels() }))
            .collect();
        results["subgroups"] = Value::Array(subs);
    }
    if args.table {
        results["table"] = json!(g.table());
    }
    doc.results = results;
    doc.check("associativity", g.check_associativity().is_ok());
    doc.check(
        "inverses",
        g.elements().all(|x| g.mul(x, g.inv(x)) == g.identity() && g.mul(g.inv(x), x) == g.identity()),
    );
    Ok(doc)
}

pub fn classify(args: &PairArgs) -> Result<ReportDocument, CliError> {
    let (g, a, b) = pair(args)?;
    let mut doc = ReportDocument::new("classify", pair_inputs(args));
    let c = classify_pair(&a, &b).map_err(subset_err)?;
    let ab = product_set(&a, &b).map_err(subset_err)?;
    let stab = GroupSubset::of_subgroup(&stabilizer(&ab));
    doc.results = json!({
        "class": c.tag,
        "deficit": fmt_q(&c.deficit),
        "m_A": c.m_a.to_string(),
        "m_B": c.m_b.to_string(),
        "m_AB": c.m_ab.to_string(),
        "AB": ab.labels(),
        "stabilizer_AB": stab.labels(),
    });
    let brute = brute_product(&a, &b);
    doc.check("product_matches_brute_force", brute == ab.iter().collect::<Vec<_>>());
    doc.check("class_matches_counts", PairTag::from_counts(a.len(), b.len(), brute.len(), g.order()) == c.tag);
    let n = g.order() as i64;
    doc.check(
        "deficit_matches_counts",
        c.deficit == Q::new(a.len() as i64 + b.len() as i64 - brute.len() as i64, n),
    );
    Ok(doc)
}

fn pivot_rule(g: &GroupRef, rule: &str) -> Result<PivotRule, CliError> {
    match rule {
        "least" => Ok(PivotRule::LeastShrinking),
        "greatest" => Ok(PivotRule::GreatestShrinking),
        other => match other.strip_prefix("seq:") {
            Some(list) => {
                let pivots = list
                    .split(';')
                    .map(|t| {
                        let t = t.trim();
                        g.element(t)
                            .or_else(|| t.parse().ok().filter(|&x: &usize| x < g.order()))
                            .ok_or_else(|| parse_err(format!("unknown pivot {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(PivotRule::Sequence(pivots))
            }
            None => Err(parse_err(format!("unknown rule {other:?}, expected least, greatest or seq:x;y;..."))),
        },
    }
}

pub fn dyson(args: &DysonArgs) -> Result<ReportDocument, CliError> {
    let (g, a, b) = pair(&args.pair)?;
    let mut inputs = pair_inputs(&args.pair);
    inputs["rule"] = json!(args.rule);
    let mut doc = ReportDocument::new("dyson", inputs);
    let rule = pivot_rule(&g, &args.rule)?;
    let opts = DysonOptions {
        step_limit: args.steps,
        unsafe_nonabelian: args.unsafe_nonabelian,
    };
    let trace = dyson_run_with(&a, &b, &rule, &opts).map_err(precondition)?;
    let (fa, fb) = trace.last();
    doc.results = json!({
        "steps": trace.steps.len(),
        "terminated": trace.terminated,
        "final_A": fa.labels(),
        "final_B": fb.labels(),
        "trace": trace.export(),
    });
    let pairs: Vec<_> = trace.pairs().collect();
    let ab = product_set(&a, &b).map_err(subset_err)?;
    doc.check(
        "monotone",
        pairs.windows(2).all(|w| w[0].0.is_subset(w[1].0) && w[1].1.is_subset(w[0].1)),
    );
    doc.check(
        "product_contained",
        pairs.iter().all(|(x, y)| brute_product(x, y).iter().all(|&z| ab.contains(z))),
    );
    doc.check("size_conserved", pairs.iter().all(|(x, y)| x.len() + y.len() == a.len() + b.len()));
    Ok(doc)
}

fn reduction_err(e: ReductionError) -> CliError {
    match e {
        ReductionError::Group(g) => g.into(),
        ReductionError::Subset(s) => subset_err(s),
        other => precondition(other),
    }
}

pub fn reduce(args: &ReduceArgs) -> Result<ReportDocument, CliError> {
    let (_, a, b) = pair(&args.pair)?;
    let mut inputs = pair_inputs(&args.pair);
    inputs["method"] = json!(format!("{:?}", args.method).to_lowercase());
    let mut doc = ReportDocument::new("reduce", inputs);
    let cert = match args.method {
        ReduceMethod::Kneser => kneser_reduce(&a, &b),
        ReduceMethod::Kemperman => kemperman_reduce(&a, &b),
    }
    .map_err(reduction_err)?;
    let check = cert.validate(&a, &b);
    doc.results = json!({ "certificate": cert.to_json(&a, &b) });
    doc.check("projection_is_homomorphism", check.projection_is_homomorphism);
    doc.check("kernel_matches", check.kernel_matches);
    doc.check("contains_A", check.contains_a);
    doc.check("contains_B", check.contains_b);
    doc.check("product_measure_match", check.product_measure_match);
    doc.check("flags_consistent", check.flags_consistent);
    if args.method == ReduceMethod::Kneser {
        doc.check("overshoot_holds", check.overshoot_holds);
    }
    Ok(doc)
}

pub fn vosper(args: &PairArgs) -> Result<ReportDocument, CliError> {
    let (g, a, b) = pair(args)?;
    let mut doc = ReportDocument::new("vosper", pair_inputs(args));
    let s = match vosper_classify(&a, &b) {
        Ok(s) => s,
        Err(VosperError::NoCommonDifference) => {
            doc.results = json!({ "error": "no common difference" });
            doc.check("progressions", false);
            return Ok(doc);
        }
        Err(e) => return Err(precondition(e)),
    };
    doc.results = json!({
        "difference": g.label(s.difference),
        "start_A": g.label(s.start_a),
        "start_B": g.label(s.start_b),
        "lengths": [s.lengths.0, s.lengths.1],
        "exceptional": s.exceptional,
    });
    let progression = |start: usize, len: usize| {
        let mut v: Vec<usize> = (0..len).map(|k| g.mul(start, g.pow(s.difference, k))).collect();
        v.sort_unstable();
        v
    };
    doc.check("A_is_progression", progression(s.start_a, s.lengths.0) == a.iter().collect::<Vec<_>>());
    doc.check("B_is_progression", progression(s.start_b, s.lengths.1) == b.iter().collect::<Vec<_>>());
    Ok(doc)
}

fn torus_err(e: TorusError) -> CliError {
    match e {
        TorusError::BadSpec(_) | TorusError::MeasureTooLarge(_) | TorusError::PointCorrections => precondition(e),
        other => parse_err(other),
    }
}

fn sturmian_err(e: SturmianError) -> CliError {
    match e {
        SturmianError::BudgetExceeded { .. } => budget(e),
        SturmianError::Subset(s) => subset_err(s),
        other => precondition(other),
    }
}

pub fn sturmian(args: &SturmianArgs) -> Result<ReportDocument, CliError> {
    if let Some(group) = &args.group {
        return sturmian_detect(args, group);
    }
    let (Some(hi), Some(hj)) = (&args.half_i, &args.half_j) else {
        return Err(CliError::new(
            crate::report::ErrorKind::Usage,
            "sturmian needs --half-i and --half-j, or --group, --A and --B",
        ));
    };
    let mut doc = ReportDocument::new(
        "sturmian",
        json!({ "target": args.target, "half_i": hi, "half_j": hj, "s": args.s, "t": args.t, "discretize": args.discretize }),
    );
    let (hi, hj) = (parse_big(hi).map_err(parse_err)?, parse_big(hj).map_err(parse_err)?);
    let (s, t) = (parse_twisted(&args.s)?, parse_twisted(&args.t)?);
    let spec = match args.target.as_str() {
        "plain" => SturmianSpec::plain(hi, hj, s.u, t.u),
        "twisted" => SturmianSpec::twisted(hi, hj, s, t),
        other => return Err(parse_err(format!("unknown target {other:?}, expected plain or twisted"))),
    };
    let pair = make_sturmian(&spec).map_err(torus_err)?;
    let (m_i, m_j, m_ij) = match &pair {
        SturmianPair::Plain(i, j) => (i.measure(), j.measure(), arc_sumset(i, j).map_err(torus_err)?.measure()),
        SturmianPair::Twisted(i, j) => (i.measure(), j.measure(), twisted_product(i, j).map_err(torus_err)?.measure()),
    };
    let mut results = json!({
        "spec": spec,
        "pair": pair,
        "m_I": fmt_big(&m_i),
        "m_J": fmt_big(&m_j),
        "m_IJ": fmt_big(&m_ij),
    });
    if let Some(m) = args.discretize {
        results["discrete"] = json!(discretize(&spec, m).map_err(torus_err)?);
    }
    doc.results = results;
    doc.check("critical", m_ij == &m_i + &m_j);
    Ok(doc)
}

fn sturmian_detect(args: &SturmianArgs, group: &str) -> Result<ReportDocument, CliError> {
    let (Some(a), Some(b)) = (&args.a, &args.b) else {
        return Err(CliError::new(crate::report::ErrorKind::Usage, "detection needs --A and --B"));
    };
    let pa = PairArgs {
        group: group.to_string(),
        a: a.clone(),
        b: b.clone(),
    };
    let (g, sa, sb) = pair(&pa)?;
    let mut inputs = pair_inputs(&pa);
    inputs["budget"] = json!(args.budget);
    let mut doc = ReportDocument::new("sturmian", inputs);
    let w = detect_sturmian_reduction(&sa, &sb, args.budget.unwrap_or(DEFAULT_STURMIAN_BUDGET)).map_err(sturmian_err)?;
    let Some(w) = w else {
        doc.results = json!({ "witness": null });
        return Ok(doc);
    };
    let model = w.projection.target();
    doc.results = json!({
        "witness": {
            "model": w.kind,
            "m": w.m,
            "projection": w.projection.table().iter().map(|&y| model.label(y)).collect::<Vec<_>>(),
            "shift_s": model.label(w.shift_s),
            "shift_t": model.label(w.shift_t),
            "size_I": w.size_i,
            "size_J": w.size_j,
            "I": w.image_i.labels(),
            "J": w.image_j.labels(),
            "m_I": fmt_q(&w.m_i),
            "m_J": fmt_q(&w.m_j),
            "m_IJ": fmt_q(&w.m_ij),
        }
    });
    let ab = brute_product(&sa, &sb);
    doc.check("A_in_pullback", sa.iter().all(|x| w.image_i.contains(w.projection.apply(x))));
    doc.check("B_in_pullback", sb.iter().all(|x| w.image_j.contains(w.projection.apply(x))));
    doc.check(
        "product_measure_match",
        Q::new(ab.len() as i64, g.order() as i64) == Q::new(brute_product(&w.image_i, &w.image_j).len() as i64, model.order() as i64),
    );
    Ok(doc)
}

pub fn stability(args: &StabilityArgs) -> Result<ReportDocument, CliError> {
    let mut doc = ReportDocument::new("stability", json!({ "I": args.i, "J": args.j, "twisted": args.twisted }));
    let (i, j) = (parse_arcset(&args.i)?, parse_arcset(&args.j)?);
    if args.twisted {
        let (ti, tj) = (TwistedSet::tilde(&i), TwistedSet::tilde(&j));
        let s = twisted_product(&ti, &tj).map_err(torus_err)?;
        let left = twisted_left_closure(&s, &tj).map_err(torus_err)?;
        let right = twisted_right_closure(&s, &ti).map_err(torus_err)?;
        let stable = is_stable_twisted(&ti, &tj).map_err(torus_err)?;
        doc.results = json!({
            "stable": stable,
            "product": s.to_string(),
            "left_closure": left.to_string(),
            "right_closure": right.to_string(),
        });
        doc.check("closures_contain_sets", ti.is_subset_of(&left) && tj.is_subset_of(&right));
        doc.check("stable_iff_closures_equal", stable == (left == ti && right == tj));
    } else {
        let s = arc_sumset(&i, &j).map_err(torus_err)?;
        let left = left_closure(&i, &j).map_err(torus_err)?;
        let right = left_closure(&j, &i).map_err(torus_err)?;
        let stable = is_stable_pair(&i, &j).map_err(torus_err)?;
        doc.results = json!({
            "stable": stable,
            "sumset": s.to_string(),
            "m_I": fmt_big(&i.measure()),
            "m_J": fmt_big(&j.measure()),
            "m_sumset": fmt_big(&s.measure()),
            "left_closure": left.to_string(),
            "right_closure": right.to_string(),
        });
        doc.check("closures_contain_sets", i.is_subset_of(&left) && j.is_subset_of(&right));
        doc.check("stable_iff_closures_equal", stable == (left == i && right == j));
    }
    Ok(doc)
}

fn relative_err(e: RelativeError) -> CliError {
    match e {
        RelativeError::Group(g) => g.into(),
        RelativeError::Subset(s) => subset_err(s),
        RelativeError::ConclusionFails(_) => CliError::new(crate::report::ErrorKind::Validation, e),
        other => precondition(other),
    }
}

fn local_json(g: &GroupRef, w: &LocalWitness) -> Value {
    let labels = |bits: &critlab_core::bits::Bits| bits.iter().map(|x| g.label(x).to_string()).collect::<Vec<_>>();
    json!({
        "subgroup": GroupSubset::of_subgroup(&w.subgroup).labels(),
        "x": g.label(w.x),
        "y": g.label(w.y),
        "slice_A": labels(&w.slice_a),
        "slice_B": labels(&w.slice_b),
        "product_size": w.product_len,
    })
}

fn witness_json(g: &GroupRef, w: &critlab_core::relative::CriticalityWitness) -> Value {
    json!({
        "holds": w.holds,
        "slice_measure_A": fmt_q(&w.slice_measure_a),
        "slice_measure_B": fmt_q(&w.slice_measure_b),
        "violating_pair": w.violating_pair.as_ref().map(|v| json!({
            "x": g.label(v.x),
            "y": g.label(v.y),
            "m_A_x": fmt_q(&v.m_a_x),
            "m_B_y": fmt_q(&v.m_b_y),
            "m_AB_xy": fmt_q(&v.m_ab_xy),
        })),
    })
}

pub fn relative(args: &RelativeArgs) -> Result<ReportDocument, CliError> {
    let (g, a, b) = pair(&args.pair)?;
    let mut inputs = pair_inputs(&args.pair);
    inputs["U"] = json!(args.u);
    inputs["chain"] = json!(args.chain);
    inputs["widen"] = json!(args.widen);
    let mut doc = ReportDocument::new("relative", inputs);
    if let Some(u) = &args.u {
        let u = parse_subgroup(&g, u)?;
        let da = disintegrate(&a, &u).map_err(relative_err)?;
        let db = disintegrate(&b, &u).map_err(relative_err)?;
        let measures = |v: &critlab_core::relative::SliceView| {
            (0..v.slices.len()).map(|i| fmt_q(&v.slice_measure(i))).collect::<Vec<_>>()
        };
        let outcome = relativize(&a, &b, &u).map_err(relative_err)?;
        let outcome = match outcome {
            RelativeOutcome::LocallySubcritical(w) => json!({ "locally_subcritical": local_json(&g, &w) }),
            RelativeOutcome::CriticalWrtUInL { l, support, witness } => json!({
                "critical_wrt_U_in_L": {
                    "L": GroupSubset::of_subgroup(&l).labels(),
                    "support": support.elements.labels(),
                    "criticality": witness_json(&g, &witness),
                }
            }),
        };
        doc.results = json!({
            "slices_A": measures(&da),
            "slices_B": measures(&db),
            "outcome": outcome,
        });
        let m = |s: &GroupSubset| Q::new(s.len() as i64, g.order() as i64);
        doc.check("disintegration_A", da.integral() == m(&a));
        doc.check("disintegration_B", db.integral() == m(&b));
    } else if let Some(chain) = &args.chain {
        let subs = chain
            .split(';')
            .map(|lit| parse_subgroup(&g, lit))
            .collect::<Result<Vec<_>, _>>()?;
        let out = check_chain_criticality(&a, &b, &subs).map_err(relative_err)?;
        doc.results = json!({
            "levels": out.levels.iter().map(|w| witness_json(&g, w)).collect::<Vec<_>>(),
            "intersection": GroupSubset::of_subgroup(&out.intersection).labels(),
            "at_intersection": witness_json(&g, &out.at_intersection),
            "all_hold": out.all_hold,
        });
        doc.check("chain_implication", out.implication_holds);
    } else {
        let w = detect_local_subcritical(&a, &b, args.widen);
        doc.results = json!({ "local_witness": w.as_ref().map(|w| local_json(&g, w)) });
        if let Some(w) = &w {
            let gr = &g;
            let mut pq: Vec<usize> = w.slice_a.iter().flat_map(|s| w.slice_b.iter().map(move |t| gr.mul(s, t))).collect();
            pq.sort_unstable();
            pq.dedup();
            doc.check(
                "witness_is_subcritical",
                pq.len() == w.product_len && pq.len() < g.order().min(w.slice_a.count() + w.slice_b.count()),
            );
        }
    }
    Ok(doc)
}

pub fn verify(args: &VerifyArgs) -> Result<ReportDocument, CliError> {
    let ids: Vec<u8> = match args.suite.as_str() {
        "all" => (1..=10).collect(),
        list => list
            .split(',')
            .map(|t| t.trim().parse::<u8>().ok().filter(|k| (1..=10).contains(k)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| parse_err(format!("suite must be all or a list of criteria 1..10, found {list:?}")))?,
    };
    let mut doc = ReportDocument::new("verify", json!({ "suite": args.suite }));
    let reports: Vec<_> = ids.iter().filter_map(|&id| acceptance::run(id)).collect();
    for r in &reports {
        doc.check(&format!("criterion {} {}", r.id, r.name), r.passed);
    }
    doc.results = json!({ "criteria": reports });
    Ok(doc)
}
