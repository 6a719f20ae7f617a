"""HTTP endpoints for experiment validation and single episodes."""
