"""Games app: run records, input parsers, analysis service and management commands."""
