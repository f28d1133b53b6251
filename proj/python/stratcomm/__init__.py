"""Python access to the stratcomm solvers.

Scenarios are passed around as the native ``Scenario`` object; build one with
``paper_iv()``, ``load_scenario(path)`` or ``scenario_from_json(text)``.
"""

from ._stratcomm import (  # noqa: F401
    Scenario,
    SolveResult,
    SimReport,
    StratcommError,
    average_entropy,
    average_utility,
    binary_average_utility,
    brute_force_direct,
    channel_capacity,
    concavify_constrained,
    concavify_unconstrained,
    kernel_from_posteriors,
    lagrangian_solve,
    load_scenario,
    paper_iv,
    posteriors_from_kernel,
    run_cli,
    scenario_from_json,
    simulate,
    thresholds,
    zero_capacity_value,
)

from ._stratcomm import __version__  # noqa: E402,F401
