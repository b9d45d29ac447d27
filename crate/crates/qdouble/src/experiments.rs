//! Experiment registry, configs, and reports.

