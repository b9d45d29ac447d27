//! Electric-charge protocols (probabilistic and deterministic pair creation,
//! transport, fusion).

