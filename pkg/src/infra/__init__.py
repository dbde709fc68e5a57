"""
Infrastructure Layer - File and environment adapters.

This layer contains:
- ConfigStore: Model document persistence (JSON, atomic, digest)
- FileSystem: Output folder checks and atomic JSON/CSV writers
- ManifestStore: Run manifest persistence
- Platform: Default output folder and library versions

All adapters satisfy protocols defined in the domain service layer,
allowing for easy mocking in tests.
"""
