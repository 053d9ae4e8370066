//! JSON schemas of the records the CLI writes, printed by `--schema`.

use serde_json::{json, Value};

fn generator() -> Value {
    json!({
        "type": "object",
        "required": ["dim", "perm", "phases"],
        "properties": {
            "dim": { "type": "integer", "minimum": 1 },
            "perm": { "type": "array", "items": { "type": "integer", "minimum": 0 } },
            "phases": { "type": "array", "items": { "type": "string", "pattern": "^-?[0-9]+/[0-9]+$" } },
            "conj": { "type": "boolean" },
            "flavor": { "enum": ["complex", "real", "quaternion"] }
        }
    })
}

fn circle() -> Value {
    json!({
        "oneOf": [
            {
                "type": "object",
                "required": ["kind", "pairs"],
                "properties": {
                    "kind": { "const": "rotation" },
                    "pairs": { "type": "array", "items": { "type": "array", "items": { "type": "integer" }, "minItems": 2, "maxItems": 2 } }
                }
            },
            {
                "type": "object",
                "required": ["kind", "weights"],
                "properties": {
                    "kind": { "const": "phase" },
                    "weights": { "type": "array", "items": { "type": "array", "minItems": 2, "maxItems": 2 } }
                }
            }
        ]
    })
}

fn family() -> Value {
    json!({ "enum": ["pu", "po", "psp", "twisted"] })
}

fn msms() -> Value {
    json!({
        "type": "object",
        "required": ["dim", "gram", "mus"],
        "properties": {
            "dim": { "type": "integer" },
            "gram": { "type": "array", "items": { "type": "array", "items": { "enum": [0, 1] } } },
            "mus": { "type": "array", "items": { "type": "array", "items": { "enum": [-1, 1] } } }
        }
    })
}

fn invariant() -> Value {
    let block = json!({
        "type": "object",
        "required": ["family", "n", "k", "s0", "s1", "bf_blocks", "bf_rank", "msms"],
        "properties": {
            "family": { "enum": ["po", "psp", "twisted"] },
            "n": { "type": "integer" },
            "k": { "type": "integer" },
            "s0": { "type": "integer" },
            "s1": { "type": "integer" },
            "bf_blocks": { "type": "array", "items": { "type": "integer" } },
            "bf_rank": { "type": "integer" },
            "msms": msms()
        }
    });
    json!({
        "oneOf": [
            {
                "type": "object",
                "required": ["family", "n", "seq"],
                "properties": {
                    "family": { "const": "pu" },
                    "n": { "type": "integer" },
                    "seq": { "type": "array", "items": { "type": "integer", "minimum": 2 } }
                }
            },
            block
        ]
    })
}

fn report() -> Value {
    json!({
        "type": "object",
        "required": ["family", "n", "dim_F", "dim_fixed", "method", "residual", "star"],
        "properties": {
            "family": family(),
            "n": { "type": "integer" },
            "dim_F": { "type": "integer" },
            "dim_fixed": { "type": "integer" },
            "method": { "enum": ["exact-rational", "floating"] },
            "residual": { "type": "number" },
            "star": { "type": "boolean" }
        }
    })
}

fn weyl() -> Value {
    json!({
        "type": "object",
        "required": ["family", "factors", "total_order"],
        "properties": {
            "family": family(),
            "factors": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "order"],
                    "properties": { "name": { "type": "string" }, "order": { "type": "string", "pattern": "^[0-9]+$" } }
                }
            },
            "total_order": { "type": "string", "pattern": "^[0-9]+$" }
        }
    })
}

/// One `{"name", "schema"}` record per output or input shape.
pub fn all() -> Vec<Value> {
    let presentation = json!({
        "type": "object",
        "required": ["family", "n"],
        "properties": {
            "family": family(),
            "n": { "type": "integer", "minimum": 1 },
            "generators": { "type": "array", "items": generator() },
            "torus": { "type": "array", "items": circle() }
        }
    });
    let msms_class = json!({
        "type": "object",
        "required": ["representative", "tuples", "aut_order"],
        "properties": {
            "representative": msms(),
            "tuples": { "type": "string", "pattern": "^[0-9]+$" },
            "aut_order": { "type": "string", "pattern": "^[0-9]+$" }
        }
    });
    let lifted = json!({
        "type": "object",
        "required": ["n", "generators", "torus", "note"],
        "properties": {
            "n": { "type": "integer" },
            "generators": { "type": "array", "items": generator() },
            "torus": { "type": "array", "items": circle() },
            "note": { "type": "string" }
        }
    });
    [
        ("generator", generator()),
        ("presentation", presentation),
        ("class_invariant", invariant()),
        ("fixed_algebra_report", report()),
        ("weyl_description", weyl()),
        ("msms_count", json!({ "type": "integer", "minimum": 0 })),
        ("msms_class", msms_class),
        ("lifted_presentation", lifted),
    ]
    .into_iter()
    .map(|(name, schema)| json!({ "name": name, "schema": schema }))
    .collect()
}
