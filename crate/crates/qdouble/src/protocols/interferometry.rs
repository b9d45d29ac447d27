//! Anyonic interferometry experiments.

