"""JSON schemas of the CLI reports (draft 2020-12)."""

_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_POINT = {"type": "array", "items": _NUM, "minItems": 1, "maxItems": 3}

META = {
    "type": "object",
    "required": ["version", "subcommand", "seed", "parameters"],
    "properties": {
        "version": {"type": "string"},
        "subcommand": {"enum": ["kernel", "rule", "apply", "maximal", "verify", "scan"]},
        "seed": {"type": "integer", "minimum": 0},
        "parameters": {"type": "object"},
    },
    "additionalProperties": False,
}


def _report(body, required):
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["meta"] + required,
        "properties": {"meta": META, **body},
        "additionalProperties": False,
    }


SEMIGROUP_EVAL = _report({
    "value": _NUM,
    "s": {"type": "number", "exclusiveMinimum": 0},
    "y": _POINT,
    "method": {"enum": ["substitution", "kernel"]},
    "est_error": {"type": "number", "minimum": 0},
}, ["value", "s", "y", "method", "est_error"])

_NT_ARG = {"type": "object", "required": ["y", "t"],
           "properties": {"y": _POINT, "t": {"type": "number", "minimum": 0}},
           "additionalProperties": False}
_HL_ARG = {"type": "number", "minimum": 0}

MAXIMAL_RESULT = _report({
    "value": {"type": "number", "minimum": 0},
    "argmax": {"oneOf": [_NT_ARG, _HL_ARG]},
    "grid_diagnostics": {"type": "object", "required": ["deltas", "rounds", "evaluations"]},
}, ["value", "argmax", "grid_diagnostics"])

LEMMA_BODY = {
    "type": "object",
    "required": ["lemma_id", "samples", "violations", "worst_margin", "seed"],
    "properties": {
        "lemma_id": {"enum": ["L1a", "L1b", "L2", "L3", "L3shift", "L4"]},
        "samples": {"type": "integer", "minimum": 1000},
        "violations": {"type": "integer", "minimum": 0},
        "worst_margin": _NUM,
        "seed": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

LEMMA_REPORT = _report(LEMMA_BODY["properties"], LEMMA_BODY["required"])

CONE = {"type": "object", "required": ["aperture", "cutoff", "variant"],
        "properties": {"aperture": {"type": "number", "exclusiveMinimum": 0},
                       "cutoff": {"type": "number", "exclusiveMinimum": 0},
                       "variant": {"enum": ["full", "reduced"]}},
        "additionalProperties": False}

RATIO_POINT = {
    "type": "object",
    "required": ["x", "nt_value", "hl_value", "ratio"],
    "properties": {"x": _POINT, "nt_value": {"type": "number", "minimum": 0},
                   "hl_value": {"type": "number", "minimum": 0}, "ratio": _NUM_OR_NULL,
                   "nt_argmax": _NT_ARG, "hl_argmax": _HL_ARG},
    "additionalProperties": False,
}

RATIO_BODY = {
    "type": "object",
    "required": ["function_id", "cone", "points", "max_ratio", "proof_constant", "passed"],
    "properties": {
        "function_id": {"type": "string"},
        "cone": CONE,
        "points": {"type": "array", "items": RATIO_POINT, "minItems": 1},
        "max_ratio": _NUM_OR_NULL,
        "proof_constant": _NUM_OR_NULL,
        "log_proof_constant": _NUM,
        "passed": {"type": "boolean"},
    },
    "additionalProperties": False,
}

SCAN_REPORT = _report({
    "reports": {"type": "array", "items": RATIO_BODY, "minItems": 1},
    "max_ratio": _NUM_OR_NULL,
    "proof_constant": _NUM_OR_NULL,
    "log_proof_constant": _NUM,
    "passed": {"type": "boolean"},
}, ["reports", "max_ratio", "proof_constant", "log_proof_constant", "passed"])

KERNEL_REPORT = _report({
    "t": {"type": "number", "exclusiveMinimum": 0},
    "x": _POINT,
    "y": _POINT,
    "form": {"enum": ["explicit", "symmetric"]},
    "log_value": _NUM,
    "value": _NUM_OR_NULL,
}, ["t", "x", "y", "form", "log_value", "value"])

RULE_REPORT = _report({
    "order": {"type": "integer", "minimum": 1},
    "dim": {"type": "integer", "minimum": 1, "maximum": 3},
    "nodes": {"type": "array", "items": _POINT},
    "weights": {"type": "array", "items": _NUM},
}, ["order", "dim", "nodes", "weights"])

VERIFY_REPORT = {
    "oneOf": [LEMMA_REPORT, _report({
        "reports": {"type": "array", "items": LEMMA_BODY, "minItems": 1},
        "violations": {"type": "integer", "minimum": 0},
    }, ["reports", "violations"])],
}

BY_SUBCOMMAND = {
    "kernel": KERNEL_REPORT, "rule": RULE_REPORT, "apply": SEMIGROUP_EVAL,
    "maximal": MAXIMAL_RESULT, "verify": VERIFY_REPORT, "scan": SCAN_REPORT,
}
