"""JSON Schemas for the reports written by the command-line tool."""

_num = {"type": "number"}
_num_or_null = {"type": ["number", "null"]}

SEGMENT_ROW = {
    "type": "object",
    "required": ["start", "end", "a", "b", "r2", "error", "alpha_deg", "length", "position", "label"],
    "properties": {
        "start": {"type": "integer", "minimum": 0},
        "end": {"type": "integer", "minimum": 1},
        "a": _num, "b": _num,
        "r2": {"type": "number", "minimum": 0, "maximum": 1},
        "error": {"type": "number", "minimum": 0},
        "alpha_deg": {"type": "number", "exclusiveMinimum": -90, "exclusiveMaximum": 90},
        "length": {"type": "integer", "minimum": 2},
        "position": _num,
        "label": {"enum": ["homogeneous", "singularity"]},
    },
}

SEGMENT_REPORT = {
    "type": "object",
    "required": ["segments", "config"],
    "properties": {
        "segments": {"type": "array", "items": SEGMENT_ROW, "minItems": 1},
        "config": {
            "type": "object",
            "required": ["rm2", "max_lines", "min_len"],
            "properties": {
                "rm2": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "max_lines": {"type": "integer", "minimum": 1},
                "min_len": {"type": "integer", "minimum": 2},
            },
        },
    },
}

SWEEP_REPORT = {
    "type": "object",
    "required": ["rows", "rm2_grid", "target_lines", "trials", "seed"],
    "properties": {
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["noise_std", "optimal_rm2", "lines_found", "max_slope_err"],
                "properties": {
                    "noise_std": {"type": "number", "minimum": 0},
                    "optimal_rm2": _num_or_null,
                    "lines_found": {"type": "integer", "minimum": 0},
                    "max_slope_err": _num_or_null,
                    "success_rates": {"type": "array", "items": _num},
                },
            },
        },
        "rm2_grid": {"type": "array", "items": _num},
        "target_lines": {"type": "integer", "minimum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
    },
}

TANGENT_REPORT = {
    "type": "object",
    "required": ["samples", "medians", "fit", "block_len", "trials", "seed"],
    "properties": {
        "samples": {"type": "array", "items": {"type": "array", "items": _num,
                                               "minItems": 2, "maxItems": 2}},
        "medians": {"type": "array", "items": {"type": "object",
                                               "required": ["hurst", "tangent"]}},
        "fit": {
            "type": "object",
            "required": ["a", "b", "r2", "converged", "iterations"],
            "properties": {"a": _num, "b": _num, "r2": _num, "converged": {"type": "boolean"},
                           "iterations": {"type": "integer"},
                           "a_ci": {"type": "array"}, "b_ci": {"type": "array"}},
        },
        "block_len": {"type": "integer", "minimum": 16},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
    },
}

BEAM_REPORT = {
    "type": "object",
    "required": ["damage_idx", "severity", "nearest_singularity_distance",
                 "interior_singularities", "segments", "seed"],
    "properties": {
        "damage_idx": {"type": "integer"},
        "severity": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "nearest_singularity_distance": _num_or_null,
        "interior_singularities": {"type": "array"},
        "median_len_before": _num_or_null,
        "median_len_after": _num_or_null,
        "segments": {"type": "array", "items": SEGMENT_ROW, "minItems": 1},
        "seed": {"type": "integer", "minimum": 0},
    },
}

FRACTAL_REPORT = {
    "type": "object",
    "required": ["scales", "counts", "dimension", "hurst_est", "log_fit_r2"],
    "properties": {
        "scales": {"type": "array", "items": {"type": "integer"}},
        "counts": {"type": "array", "items": {"type": "integer"}},
        "dimension": {"type": "number", "minimum": 1, "maximum": 2},
        "hurst_est": {"type": "number", "minimum": 0, "maximum": 1},
        "log_fit_r2": _num,
    },
}

ENTROPY_STATS = {
    "type": "object",
    "required": ["mean_abs_diff", "std_abs_diff", "fitted_slope"],
    "properties": {"mean_abs_diff": {"type": "number", "minimum": 0},
                   "std_abs_diff": {"type": "number", "minimum": 0},
                   "fitted_slope": _num},
}
