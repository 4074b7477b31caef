"""
Utilities Package
Errors, report envelopes and validators
"""
