//! One function per subcommand. Each returns the JSON result, a text
//! rendering, the exit code for its verdict and any oracle cross-checks.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use toricstack::cox::{
    check_condition_a, check_condition_b, check_two_isomorphic, verify_refutation, ConditionBVerdict,
    MorphismData, SamplingConfig, TwoIsoVerdict,
};
use toricstack::fan::{is_complete, rays_span, Cone};
use toricstack::gerbe::{canonicalize, compare_banded, picard_of_rigidification};
use toricstack::lattice::{FgAbelianGroup, IntegerMatrix};
use toricstack::oracle::{
    oracle_band_isomorphism, oracle_divisibility, oracle_quotient_enumerate, oracle_stabilizer_order,
    oracle_stabilizer_order_enumerated, MAX_ORDER,
};
use toricstack::stacky::{
    build_matrices, dm_torus, generic_stabilizer, point_stabilizer, psi_exponents, quotient_group,
    rigidify, split_nonspanning, stabilizers_of_all_cones, stacky_fan, StackyData,
};
use toricstack::Execution;

use crate::doc::{format_rational, StackyDataDocument};
use crate::error::CliError;
use crate::json_int::{ints, JsonInt};
use crate::report::{VerifyCheck, EXIT_FALSE, EXIT_OK, EXIT_UNKNOWN};

pub struct Context {
    pub exec: Execution,
    pub sampling: SamplingConfig,
    pub verify: bool,
}

pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub exit: i32,
    pub checks: Vec<VerifyCheck>,
}

impl Outcome {
    fn ok(result: Value, text: String) -> Self {
        Outcome {
            result,
            text,
            exit: EXIT_OK,
            checks: Vec::new(),
        }
    }
}

fn matrix_json(m: &IntegerMatrix) -> Value {
    json!((0..m.rows()).map(|i| ints(m.row(i))).collect::<Vec<_>>())
}

fn group_json(g: &FgAbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "invariant_factors": ints(g.invariant_factors()),
    })
}

fn order_json(g: &FgAbelianGroup) -> Value {
    match g.order() {
        Some(o) => json!(JsonInt(o)),
        None => Value::Null,
    }
}

fn list(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn rows(m: &IntegerMatrix) -> String {
    let r: Vec<String> = m.row_vecs().iter().map(|r| list(r)).collect();
    format!("[{}]", r.join(", "))
}

fn check_from_oracle<T>(
    name: &str,
    outcome: Result<T, toricstack::oracle::OracleError>,
    agrees: impl FnOnce(&T) -> bool,
) -> VerifyCheck {
    match outcome {
        Ok(value) => {
            let ok = agrees(&value);
            VerifyCheck::new(name, Some(ok), if ok { "agrees" } else { "DISAGREES" })
        }
        Err(e) => VerifyCheck::new(name, None, e.to_string()),
    }
}

pub fn validate(data: &StackyData) -> Outcome {
    let span = rays_span(data.fan());
    let result = json!({
        "valid": true,
        "kind": "stacky_data",
        "lattice_rank": data.lattice_rank(),
        "num_rays": data.num_rays(),
        "num_cones": data.fan().cones().len(),
        "num_roots": data.num_roots(),
        "complete": is_complete(data.fan()),
        "spanning": span.spans,
    });
    let text = format!(
        "valid: rank {}, {} rays, {} cones, {} roots{}{}",
        data.lattice_rank(),
        data.num_rays(),
        data.fan().cones().len(),
        data.num_roots(),
        if is_complete(data.fan()) { ", complete" } else { "" },
        if span.spans { ", spanning" } else { ", rays do not span" },
    );
    Outcome::ok(result, text)
}

pub fn validate_morphism(md: &MorphismData) -> Outcome {
    let result = json!({
        "valid": true,
        "kind": "morphism",
        "lattice_rank": md.source().lattice_rank(),
        "num_rays": md.source().num_rays(),
        "num_cones": md.source().fan().cones().len(),
        "num_roots": md.target().num_roots(),
        "complete": true,
        "spanning": true,
    });
    let text = format!(
        "valid morphism document: {} polynomials in {} variables",
        md.polys().len(),
        md.source().num_rays()
    );
    Outcome::ok(result, text)
}

pub fn build(data: &StackyData, ctx: &Context) -> Result<Outcome, CliError> {
    let (b, q) = build_matrices(data);
    let bq = psi_exponents(data);
    let quotient = quotient_group(data);
    let (split, k) = split_nonspanning(data);
    let sigma = stacky_fan(&split)?;
    let generic = generic_stabilizer(data);
    let torus = dm_torus(data);
    let lifted: Vec<Value> = sigma
        .lifted_rays
        .iter()
        .map(|r| json!({"lattice": ints(&r.lattice), "residues": ints(&r.residues)}))
        .collect();
    let split_json = if k == 0 {
        Value::Null
    } else {
        json!({"data": StackyDataDocument::from_data(&split), "k": k})
    };
    let result = json!({
        "matrices": {"b": matrix_json(&b), "q": matrix_json(&q), "bq": matrix_json(&bq)},
        "quotient_group": {
            "torus_rank": quotient.torus_rank,
            "invariant_factors": ints(quotient.finite_part.invariant_factors()),
        },
        "stacky_fan": {
            "extended_group": group_json(&sigma.extended_group),
            "lifted_rays": lifted,
        },
        "split": split_json,
        "generic_stabilizer": ints(generic.invariant_factors()),
        "dm_torus": {
            "dimension": torus.dimension,
            "gerbe_part": ints(torus.gerbe_part.invariant_factors()),
            "dense_torus_admissible": torus.dense_torus_admissible,
        },
    });
    let mut text = vec![
        format!("B = {}", rows(&b)),
        format!("Q = {}", rows(&q)),
        format!(
            "G: torus rank {}, finite part {}",
            quotient.torus_rank,
            list(quotient.finite_part.invariant_factors())
        ),
        format!("generic stabilizer {}", list(generic.invariant_factors())),
    ];
    for (i, r) in sigma.lifted_rays.iter().enumerate() {
        text.push(format!("lifted ray {i}: {} residues {}", list(&r.lattice), list(&r.residues)));
    }
    if k > 0 {
        text.push(format!("rays span a rank {} sublattice; split off k = {k}", split.lattice_rank()));
    }

    let mut checks = Vec::new();
    if ctx.verify {
        let zero_cone: Cone = Vec::new();
        checks.push(check_from_oracle(
            "generic stabilizer order by enumeration",
            oracle_stabilizer_order_enumerated(data, &zero_cone, MAX_ORDER),
            |o| generic.order().as_ref() == Some(o),
        ));
        if quotient.torus_rank == 0 {
            checks.push(check_from_oracle(
                "finite quotient group by enumeration",
                oracle_quotient_enumerate(&bq.transpose(), MAX_ORDER),
                |t| {
                    let census: Vec<BigInt> = t.invariant_factors().into_iter().map(BigInt::from).collect();
                    census == quotient.finite_part.invariant_factors()
                },
            ));
        }
    }
    Ok(Outcome {
        result,
        text: text.join("\n"),
        exit: EXIT_OK,
        checks,
    })
}

pub fn pic(data: &StackyData, ctx: &Context) -> Outcome {
    let pic = picard_of_rigidification(data);
    let gerbes: Vec<Value> = (0..data.num_roots())
        .map(|i| {
            let c = toricstack::gerbe::PicClass::new(data.b_row(i).to_vec());
            let order = pic.class_order(&c).map(JsonInt);
            json!({"index": i, "representative": ints(&c.representative), "order": order})
        })
        .collect();
    let result = json!({
        "rigid": data.num_roots() == 0,
        "group": group_json(pic.group()),
        "relation_matrix": matrix_json(pic.relation_matrix()),
        "gerbe_classes": gerbes,
    });
    let g = pic.group();
    let text = format!(
        "Pic = {g}{}",
        if data.num_roots() > 0 { " (of the rigidification)" } else { "" }
    );
    let mut checks = Vec::new();
    if ctx.verify {
        checks.push(check_from_oracle(
            "Picard group by enumeration",
            oracle_quotient_enumerate(pic.relation_matrix(), MAX_ORDER),
            |t| {
                let census: Vec<BigInt> = t.invariant_factors().into_iter().map(BigInt::from).collect();
                g.is_finite() && census == g.invariant_factors()
            },
        ));
    }
    Outcome {
        result,
        text,
        exit: EXIT_OK,
        checks,
    }
}

pub fn stabilizer(data: &StackyData, cone: Option<&[usize]>, ctx: &Context) -> Result<Outcome, CliError> {
    let entries: Vec<(Cone, FgAbelianGroup)> = match cone {
        Some(c) => {
            let mut c = c.to_vec();
            c.sort_unstable();
            let g = point_stabilizer(data, &c)?;
            vec![(c, g)]
        }
        None => stabilizers_of_all_cones(data, ctx.exec),
    };
    let result = json!({
        "stabilizers": entries
            .iter()
            .map(|(c, g)| json!({"cone": c, "group": group_json(g), "order": order_json(g)}))
            .collect::<Vec<_>>(),
    });
    let text = entries
        .iter()
        .map(|(c, g)| format!("cone {c:?}: {g}"))
        .collect::<Vec<_>>()
        .join("\n");
    let mut checks = Vec::new();
    if ctx.verify {
        let results = ctx.exec.map(&entries, |(c, g)| {
            check_from_oracle(&format!("stabilizer order of cone {c:?}"), oracle_stabilizer_order(data, c), |o| {
                g.order().as_ref() == Some(o)
            })
        });
        checks.extend(results);
    }
    Ok(Outcome {
        result,
        text,
        exit: EXIT_OK,
        checks,
    })
}

pub fn rigidify_cmd(data: &StackyData) -> Outcome {
    let rigid = rigidify(data);
    let doc = StackyDataDocument::from_data(&rigid);
    let text = serde_json::to_string(&doc).expect("documents serialize");
    Outcome::ok(json!({"data": doc}), text)
}

pub fn split(data: &StackyData, ctx: &Context) -> Outcome {
    let (split, k) = split_nonspanning(data);
    let doc = StackyDataDocument::from_data(&split);
    let text = format!(
        "k = {k}, rank N' = {}\n{}",
        split.lattice_rank(),
        serde_json::to_string(&doc).expect("documents serialize")
    );
    let mut out = Outcome::ok(json!({"data": doc, "k": k}), text);
    if ctx.verify {
        let again = split_nonspanning(&split);
        let ok = split.lattice_rank() + k == data.lattice_rank() && again.1 == 0 && again.0 == split;
        out.checks.push(VerifyCheck::new(
            "rank additivity and idempotence",
            Some(ok),
            if ok { "agrees" } else { "DISAGREES" },
        ));
    }
    out
}

pub fn classify(first: &StackyData, second: &StackyData, ctx: &Context) -> Result<Outcome, CliError> {
    let a = canonicalize(first).data;
    let b = canonicalize(second).data;
    let cmp = compare_banded(&a, &b)?;
    let iso = cmp.is_isomorphic();
    let result = json!({
        "first_chain": ints(a.r()),
        "second_chain": ints(b.r()),
        "same_band": cmp.same_band,
        "divisibility": cmp.divisibility,
        "isomorphic": iso,
    });
    let mut text = vec![format!("chains {} and {}", list(a.r()), list(b.r()))];
    if !cmp.same_band {
        text.push("bands differ".into());
    }
    for (i, d) in cmp.divisibility.iter().enumerate() {
        text.push(format!("root {i}: b_i - b_i' divisible by {}: {d}", a.r()[i]));
    }
    text.push(format!("isomorphic: {iso}"));
    let mut checks = Vec::new();
    if ctx.verify {
        let relations = a.fan().ray_matrix().transpose();
        for (i, d) in cmp.divisibility.iter().enumerate() {
            let diff: Vec<BigInt> = a.b_row(i).iter().zip(b.b_row(i)).map(|(x, y)| x - y).collect();
            checks.push(check_from_oracle(
                &format!("divisibility of root {i} by enumeration"),
                oracle_divisibility(&diff, &a.r()[i], &relations),
                |o| o == d,
            ));
        }
    }
    Ok(Outcome {
        result,
        text: text.join("\n"),
        exit: if iso { EXIT_OK } else { EXIT_FALSE },
        checks,
    })
}

pub fn canonicalize_cmd(data: &StackyData, ctx: &Context) -> Outcome {
    let c = canonicalize(data);
    let doc = StackyDataDocument::from_data(&c.data);
    let result = json!({
        "data": doc,
        "chain": ints(c.data.r()),
        "certificate": matrix_json(&c.certificate),
    });
    let text = format!(
        "chain {}\n{}",
        list(c.data.r()),
        serde_json::to_string(&doc).expect("documents serialize")
    );
    let mut checks = Vec::new();
    if ctx.verify {
        checks.push(check_from_oracle(
            "certificate is a band isomorphism",
            oracle_band_isomorphism(data.r(), &c.certificate, c.data.r()),
            |ok| *ok,
        ));
        checks.push(check_from_oracle(
            "chain equals census invariant factors",
            oracle_quotient_enumerate(&IntegerMatrix::diagonal(data.r()), MAX_ORDER),
            |t| {
                let census: Vec<BigInt> = t.invariant_factors().into_iter().map(BigInt::from).collect();
                census == c.data.r()
            },
        ));
    }
    Outcome {
        result,
        text,
        exit: EXIT_OK,
        checks,
    }
}

fn pattern_json(p: &toricstack::fan::ZeroPattern) -> Value {
    json!(p.to_vec())
}

pub fn morphism_check(md: &MorphismData, ctx: &Context) -> Result<Outcome, CliError> {
    let a = check_condition_a(md)?;
    let b = check_condition_b(md, &ctx.sampling, ctx.exec);
    let (verdict, witness) = match &b {
        ConditionBVerdict::Proven => ("proven", Value::Null),
        ConditionBVerdict::Unknown => ("unknown", Value::Null),
        ConditionBVerdict::Refuted(r) => (
            "refuted",
            json!({
                "source_pattern": pattern_json(&r.source_pattern),
                "point": r.point.iter().map(format_rational).collect::<Vec<_>>(),
                "image_pattern": pattern_json(&r.image_pattern),
            }),
        ),
    };
    let result = json!({
        "condition_a": {
            "holds": a.holds(),
            "torus_relations": a.torus_relations,
            "root_relations": a.root_relations,
        },
        "condition_b": {"verdict": verdict, "witness": witness},
    });
    let mut text = vec![format!("condition (a): {}", a.holds()), format!("condition (b): {verdict}")];
    if let ConditionBVerdict::Refuted(r) = &b {
        let point: Vec<String> = r.point.iter().map(format_rational).collect();
        text.push(format!(
            "  witness: point ({}) with zero pattern {:?} maps to pattern {:?}",
            point.join(", "),
            r.source_pattern.to_vec(),
            r.image_pattern.to_vec()
        ));
    }
    let exit = match (&b, a.holds()) {
        (_, false) | (ConditionBVerdict::Refuted(_), _) => EXIT_FALSE,
        (ConditionBVerdict::Unknown, true) => EXIT_UNKNOWN,
        (ConditionBVerdict::Proven, true) => EXIT_OK,
    };
    let mut checks = Vec::new();
    if ctx.verify {
        match &b {
            ConditionBVerdict::Refuted(r) => {
                let ok = verify_refutation(md, r);
                checks.push(VerifyCheck::new(
                    "refutation witness re-evaluated",
                    Some(ok),
                    if ok { "agrees" } else { "DISAGREES" },
                ));
            }
            _ => checks.push(VerifyCheck::new("refutation witness re-evaluated", None, "no witness to check")),
        }
    }
    Ok(Outcome {
        result,
        text: text.join("\n"),
        exit,
        checks,
    })
}

pub fn morphism_iso(first: &MorphismData, second: &MorphismData, ctx: &Context) -> Result<Outcome, CliError> {
    let verdict = check_two_isomorphic(first, second)?;
    let (name, ratios, reason, exit) = match &verdict {
        TwoIsoVerdict::Yes { ratios } => (
            "yes",
            json!(ratios.iter().map(|r| r.as_ref().map(format_rational)).collect::<Vec<_>>()),
            Value::Null,
            EXIT_OK,
        ),
        TwoIsoVerdict::No { reason } => ("no", Value::Null, json!(reason), EXIT_FALSE),
        TwoIsoVerdict::Unknown => ("unknown", Value::Null, Value::Null, EXIT_UNKNOWN),
    };
    let result = json!({"verdict": name, "ratios": ratios, "reason": reason});
    let mut text = format!("2-isomorphic: {name}");
    if let TwoIsoVerdict::Yes { ratios } = &verdict {
        let r: Vec<String> = ratios
            .iter()
            .map(|x| x.as_ref().map_or("free".to_string(), format_rational))
            .collect();
        text.push_str(&format!("\n  lambda = ({})", r.join(", ")));
    }
    if let TwoIsoVerdict::No { reason } = &verdict {
        text.push_str(&format!("\n  {reason}"));
    }
    let mut checks = Vec::new();
    if ctx.verify {
        if let TwoIsoVerdict::Yes { ratios } = &verdict {
            let ok = first.polys().iter().zip(second.polys()).zip(ratios).all(|((p, q), l)| match l {
                Some(l) => !l.is_zero() && p.scale(l) == *q,
                None => p.is_zero() && q.is_zero(),
            });
            checks.push(VerifyCheck::new(
                "ratios reproduce the second tuple",
                Some(ok),
                if ok { "agrees" } else { "DISAGREES" },
            ));
        } else {
            checks.push(VerifyCheck::new("ratios reproduce the second tuple", None, "no ratios to check"));
        }
    }
    Ok(Outcome {
        result,
        text,
        exit,
        checks,
    })
}
