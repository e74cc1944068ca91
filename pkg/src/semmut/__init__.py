"""semmut: semantic-preserving mutation operators for C functions, with
mechanical preservation checks and prediction-ensemble tooling."""

__version__ = "0.1.0"
