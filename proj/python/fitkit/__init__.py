"""Python bindings for the fitkit curve-fitting toolkit."""

from _fitkit import (  # noqa: F401
    FitkitError,
    TimeSeries,
    __version__,
    build_series,
    evaluate,
    evaluate_series,
    fit,
    fit_statistics,
    generate,
    initial_guess,
    logistic,
    malthusian,
    model_ids,
    multi_start_fit,
    param_names,
    series_stats,
)
