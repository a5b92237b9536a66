"""Knowledge-injection corpus generation, mixed-rollout supervision, and
forgetting diagnostics."""

__version__ = "0.1.0"
