"""Factor-model forecasting toolkit: principal-component factors, FAVAR
dynamics and out-of-sample forecast evaluation for monthly macro panels."""

__version__ = "0.1.0"
