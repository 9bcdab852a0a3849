"""Pinned acceptance configurations.

Each entry is one suite run. ``flags`` maps an acceptance criterion number
to the pass/fail flags of that run which decide it; a criterion may draw on
several runs.

Data Sets
---------
ACCEPTANCE_CONFIGS : list[dict]
    ``label`` (artifact sub-directory), ``flags`` and ``config`` (RunConfig
    fields other than ``output_dir`` and ``seed``)
"""

SWEEP = [64, 128, 256, 512, 1024]

ACCEPTANCE_CONFIGS = [
    {
        "label": "fs_balanced",
        "flags": {"1": ["sup_err_exact"]},
        "config": {"command": "rates", "model": {"name": "fubini_study"}, "m_list": [4, 8, 16, 64]},
    },
    {
        "label": "models",
        "flags": {"2": ["fs_gram_oracle"]},
        "config": {"command": "models"},
    },
    {
        "label": "peak_flat",
        "flags": {
            "3": ["normalization_p0_bounded", "normalization_p1_bounded", "normalization_p2_bounded"],
            "4": ["jet_f0_bounded", "jet_f1_bounded", "jet_f2_bounded"],
        },
        "config": {"command": "peak", "model": {"name": "flat_gaussian"}, "m_list": SWEEP, "p_list": [0, 1, 2]},
    },
    {
        "label": "peak_sharp",
        "flags": {"3": ["normalization_p0_bounded", "normalization_p1_bounded", "normalization_p2_bounded"]},
        "config": {"command": "peak", "model": {"name": "sharp_example"}, "m_list": SWEEP, "p_list": [0, 1, 2]},
    },
    {
        "label": "rates_sharp",
        "flags": {
            "5": ["sup_err_slope", "grad_err_x0_slope"],
            "10": ["c1alpha_band"],
            "11": ["hess_zz_log_bounded", "hess_zzbar_bounded"],
        },
        "config": {"command": "rates", "model": {"name": "sharp_example"}, "m_list": SWEEP, "alpha": 0.5},
    },
    {
        "label": "sharp",
        "flags": {
            "6": ["m_beta01_within_10pct", "sqrt_m_grad_within_10pct", "paths_agree", "limit_errors_shrink"],
            "7": [
                "overlap_k0_within_5pct",
                "overlap_k1_within_5pct",
                "overlap_k2_within_5pct",
                "norm_k0_within_5pct",
                "norm_k1_within_5pct",
                "norm_k2_within_5pct",
            ],
        },
        "config": {"command": "sharp", "m_list": [128, 256, 512, 1024], "k_list": [0, 1, 2]},
    },
    {
        "label": "fourier",
        "flags": {"8": ["log_bound_sharp", "no_log_k0_finite"], "9": ["ode_residual"]},
        "config": {"command": "fourier"},
    },
    {
        "label": "families",
        "flags": {
            "12": ["lower_bound_k1_m9", "lower_bound_k1_m21", "lower_bound_k2_m9", "lower_bound_k2_m21"],
        },
        "config": {"command": "families", "k_list": [1, 2], "m_list": [9, 21]},
    },
    {
        "label": "oscillation",
        "flags": {"13": ["curvature_identity_bounded", "hessian_gap_nondecreasing_m32"]},
        "config": {"command": "oscillation", "k_list": [8, 12, 16], "m_list": [32]},
    },
]
