# Correlated graph regression (C-GNN)
__version__ = "1.0.0"
