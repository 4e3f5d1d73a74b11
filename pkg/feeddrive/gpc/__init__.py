from .carima import DELTA, CarimaModel, Predictor, diophantine_chain, identity_residual, lag_integrator_model, zoh_integrator_model
from .model import (
    VelocityLoopFit,
    VelocityStepResponse,
    fit_lag,
    fit_second_order,
    fit_velocity_loop,
    model_from_axis,
    simulate_velocity_step,
)
from .online import RecedingHorizonGpc, nominal_cost, simulate_online_nominal, simulate_rst_nominal, step_response
from .rst import RstController, RstHistory, rst_tick
from .synthesis import GpcTuning, RstPolynomials, StabilityMargins, stability_margins, synthesize_rst


__all__ = [
    "CarimaModel",
    "DELTA",
    "GpcTuning",
    "Predictor",
    "RecedingHorizonGpc",
    "RstController",
    "RstHistory",
    "RstPolynomials",
    "StabilityMargins",
    "VelocityLoopFit",
    "VelocityStepResponse",
    "diophantine_chain",
    "fit_lag",
    "fit_second_order",
    "fit_velocity_loop",
    "identity_residual",
    "lag_integrator_model",
    "model_from_axis",
    "nominal_cost",
    "rst_tick",
    "simulate_online_nominal",
    "simulate_rst_nominal",
    "simulate_velocity_step",
    "stability_margins",
    "step_response",
    "synthesize_rst",
    "zoh_integrator_model",
]
