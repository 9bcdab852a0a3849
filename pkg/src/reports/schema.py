"""Frozen CSV column orders.

Every CSV the lab writes is described here, once. Columns are never
reordered or renamed between versions; new columns are appended. JSON
summaries are a superset of the CSVs and carry no fixed order.

Attributes
----------
TABLES : dict[str, tuple[str, ...]]
    Table name to ordered column names
"""

from src.errors import ConfigError

TABLES: dict[str, tuple[str, ...]] = {
    # models
    "models": (
        "name",
        "symmetry",
        "degree_cap",
        "bandwidth",
        "chart_radius",
        "compat_residual",
        "radial_residual",
        "params",
    ),
    "gram_oracle": ("m", "j", "log_norm", "log_expected", "rel_error"),
    # rates
    "rates": (
        "m",
        "sup_err",
        "grad_err",
        "grad_err_x0",
        "c1alpha_mod",
        "w2q_norm",
        "hess_zz_over_log",
        "hess_zzbar",
    ),
    "slopes": ("quantity", "slope", "log_constant", "rms_residual"),
    # peak
    "peak": ("m", "p", "lambda_inv_sq_log", "residual", "overlap_1_re", "overlap_1_im", "overlap_2_abs"),
    "jets": ("m", "f0", "f1", "f2", "mixed"),
    # fourier
    "fourier": ("name", "k", "r", "h", "bound_denominator", "ratio"),
    "ode": ("name", "k", "r", "residual"),
    # sharp
    "sharp": (
        "m",
        "overlap_0",
        "overlap_1",
        "overlap_2",
        "m_beta01",
        "m_beta12",
        "sqrt_m_grad_a",
        "sqrt_m_grad_b",
        "err_a",
        "err_b",
    ),
    "moments": ("kind", "k", "m", "value", "leading", "ratio"),
    # families
    "families": ("k", "m", "bergman_value", "metric_value", "lower_bound", "symmetry_residual"),
    "family_models": ("k", "volume", "max_abs_sec", "sec_bounded", "symmetry_residual"),
    "cusp": ("n", "m", "model_ratio", "bergman_ratio"),
    # oscillation
    "oscillation_l1": ("f_ref", "k", "l1"),
    "oscillation_identity": ("k", "sup", "k_sup"),
    "oscillation_hessian": ("m", "k", "gap"),
    # exports
    "gram": ("j", "k", "log_mag", "phase"),
    # ledger-free summary
    "criteria": ("suite", "name", "passed"),
}


def columns(table: str) -> tuple[str, ...]:
    """Column order of ``table``.

    Raises
    ------
    ConfigError
        If the table is not registered
    """
    try:
        return TABLES[table]
    except KeyError as e:
        raise ConfigError(f"unknown report table '{table}'", sorted(TABLES)) from e
