//! JSON views of library results.

use eptrap_core::scenarios::Assertion;
use eptrap_core::sweeps::{CycleReport, EpCandidate};
use eptrap_core::{ModeSet, C64};
use serde_json::{json, Value};

fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

fn cvec(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&z| cx(z)).collect())
}

pub fn modeset(ms: &ModeSet) -> Value {
    let modes: Vec<Value> = ms
        .modes
        .iter()
        .enumerate()
        .map(|(k, m)| {
            json!({
                "index": k,
                "z": cx(m.value),
                "energy": m.value.re,
                "gamma": -2.0 * m.value.im,
                "a_k": ms.a_k[k],
                "r_k": ms.r_k[k],
                "normalized": ms.normalized[k],
                "residual": m.residual,
                "right": cvec(&m.right),
                "left": cvec(&m.left),
            })
        })
        .collect();
    let b: Vec<Value> = ms.b_kl.iter().map(|row| cvec(row)).collect();
    json!({ "modes": modes, "b_kl": b, "ep_pairs": ms.ep_pairs })
}

pub fn ep_candidate(ep: &EpCandidate) -> Value {
    let jordan = ep.jordan.as_ref().map(|j| {
        json!({
            "eigenvalue": cx(j.eigenvalue),
            "eigenvector": cvec(&j.eigenvector),
            "associated": cvec(&j.associated),
            "null_residual": j.null_residual,
            "defect_residual": j.defect_residual,
        })
    });
    json!({
        "param": cx(ep.param),
        "gap": ep.gap,
        "scale": ep.scale,
        "eigenvalue": cx(ep.eigenvalue),
        "pair": [ep.pair.0, ep.pair.1],
        "min_rigidity_nearby": ep.min_rigidity_nearby,
        "jordan": jordan,
        "evaluations": ep.evaluations,
    })
}

pub fn cycle(r: &CycleReport, trajectory: bool) -> Value {
    let mut v = json!({
        "center": cx(r.center),
        "radius": r.radius,
        "steps": r.steps,
        "clockwise": r.clockwise,
        "loops": r.permutations.len(),
        "permutations": r.permutations,
        "phases": r.phases,
        "loops_to_restore_values": r.loops_to_restore_values,
        "loops_to_restore_vectors": r.loops_to_restore_vectors,
        "min_overlap": r.min_overlap,
    });
    if trajectory {
        v["trajectory"] = Value::Array(r.trajectory.iter().map(|b| cvec(b)).collect());
    }
    v
}

pub fn assertions(list: &[Assertion]) -> Value {
    Value::Array(
        list.iter().map(|a| json!({ "name": a.name, "passed": a.passed, "detail": a.detail })).collect(),
    )
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}
