"""Geography of log models: exact chamber decompositions for toric and surface pairs."""
