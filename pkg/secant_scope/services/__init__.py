"""
Services Package
Computational layers: binary forms, solver kernel, curves, strata and gonality
"""
