"""
Schemas Package
Marshmallow schemas for curve files, reports and run configuration
"""
