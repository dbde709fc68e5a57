"""Test suite for ZenoLimit."""
