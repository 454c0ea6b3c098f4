"""Bottom-p share estimation: estimators, oracles, streaming, simulation and CLI."""
