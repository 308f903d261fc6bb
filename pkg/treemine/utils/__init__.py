"""Shared helpers: error types, synthetic data generation and XML ingestion."""
