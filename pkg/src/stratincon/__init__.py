"""Strategy-inconsistency analysis for MOBA match telemetry.

Modules:
    telemetry       log schema, parsing, validation, feature encoding
    matchgen        deterministic synthetic matches and deviation injection
    predictor       LSTM next-frame strategy predictor (numpy, from scratch)
    events          priority-event extraction from raw event marks
    inconsistency   detection, impact scoring, feature attribution
    profiles        team and player profiling
    store           file-backed workspace with integrity envelopes
    analysis        per-match bundle building
    service         read-only HTTP API
    cli             command-line pipeline
"""

__version__ = "0.1.0"
